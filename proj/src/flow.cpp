#include "solstab/flow.hpp"

#include "solstab/curvature.hpp"
#include "solstab/errors.hpp"
#include "solstab/stability.hpp"

#include <cmath>
#include <future>
#include <random>
#include <sstream>

namespace solstab {

namespace {

struct Frame {
  Matrix lower;  // G = L L^T
  Matrix t;      // frame vectors as columns, T = L^{-T}
};

Frame factor(const Matrix& g) {
  Eigen::LLT<Matrix> llt(0.5 * (g + g.transpose()));
  if (llt.info() != Eigen::Success) throw PositivityLost("metric lost positive definiteness");
  Frame f;
  f.lower = llt.matrixL();
  f.t = f.lower.transpose().triangularView<Eigen::Upper>().solve(
      Matrix::Identity(g.rows(), g.cols()));
  return f;
}

void check_bounds(const Matrix& g, const FlowConfig& config, double t) {
  const double norm = g.norm();
  if (!std::isfinite(norm) || norm > config.max_norm) {
    std::ostringstream os;
    os << "metric norm " << norm << " exceeded " << config.max_norm << " at t=" << t;
    throw Blowup(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0) throw PositivityLost("metric lost positive definiteness");
  if (hi / lo > config.max_condition) {
    std::ostringstream os;
    os << "metric condition number " << hi / lo << " exceeded " << config.max_condition;
    throw Blowup(os.str());
  }
}

}  // namespace

Matrix ricci_tensor(const Tensor3& c, const Matrix& g) {
  const Frame f = factor(g);
  const FramedAlgebra framed{transform_structure(c, f.t), f.t};
  const CurvatureSummary summary = curvature_summary(framed);
  // Ric(e_i, e_j) = sum_ab (T^{-1})_ai (T^{-1})_bj ric_ab, T^{-1} = L^T
  return f.lower * summary.ric * f.lower.transpose();
}

Matrix flow_rhs(const Tensor3& c, const Matrix& g, double lambda, const Matrix& d) {
  const Matrix rhs = -2.0 * ricci_tensor(c, g) + 2.0 * lambda * g + g * d + d.transpose() * g;
  return 0.5 * (rhs + rhs.transpose());
}

Matrix flow_rhs(const MetricLieAlgebra& algebra, const Matrix& g, double lambda, const Matrix& d) {
  return flow_rhs(structure_tensor(algebra), g, lambda, d);
}

double soliton_residual(const Tensor3& c, const Matrix& g, double lambda, const Matrix& d) {
  return 0.5 * flow_rhs(c, g, lambda, d).norm() / g.norm();
}

FlowTrace integrate_flow(const MetricLieAlgebra& algebra, const Matrix& g0, double lambda,
                         const Matrix& d, const FlowConfig& config, const Matrix& reference) {
  if (!(config.dt > 0.0) || !(config.t_max >= 0.0) || config.sample_every < 1)
    throw PreconditionViolated("flow needs dt > 0, t_max >= 0 and sample_every >= 1");
  const Tensor3 c = structure_tensor(algebra);
  auto rhs = [&](const Matrix& g) { return flow_rhs(c, g, lambda, d); };

  FlowTrace trace;
  Matrix g = 0.5 * (g0 + g0.transpose());
  check_bounds(g, config, 0.0);

  auto record = [&](double t, const Matrix& current_rhs) {
    trace.samples.push_back(FlowSample{t, 0.5 * current_rhs.norm() / g.norm(),
                                       (g - reference).norm(), current_rhs.norm()});
  };

  const auto steps = static_cast<long>(std::ceil(config.t_max / config.dt - 1e-9));
  double t = 0.0;
  Matrix k1 = rhs(g);
  record(t, k1);
  for (long step = 1; step <= steps; ++step) {
    const double h = std::min(config.dt, config.t_max - t);
    const Matrix k2 = rhs(g + 0.5 * h * k1);
    const Matrix k3 = rhs(g + 0.5 * h * k2);
    const Matrix k4 = rhs(g + h * k3);
    g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    g = 0.5 * (g + g.transpose());
    t = step == steps ? config.t_max : t + h;
    check_bounds(g, config, t);
    k1 = rhs(g);
    if (step % config.sample_every == 0 || step == steps) record(t, k1);
  }
  trace.final_state = FlowState{t, g};
  return trace;
}

Matrix derivation_in_input_basis(const FramedAlgebra& framed, const SolitonCertificate& cert) {
  const Matrix& t = framed.basis_change;
  return t * cert.derivation * t.partialPivLu().inverse();
}

std::vector<TrialReport> perturbation_experiment(const MetricLieAlgebra& algebra,
                                                 const SolitonCertificate& cert, double eps,
                                                 int n_trials, std::uint64_t seed,
                                                 const FlowConfig& config) {
  if (!(cert.lambda < 0.0)) {
    std::ostringstream os;
    os << "not expanding: lambda=" << cert.lambda;
    throw NotExpanding(os.str());
  }
  if (!cert.accepted()) throw PreconditionViolated("perturbation experiment needs a soliton");
  if (!(eps >= 0.0 && eps <= kMaxPerturbation))
    throw PreconditionViolated("perturbation size must lie in [0, 1e-2]");

  const int n = algebra.dim;
  const FramedAlgebra framed = orthonormal_frame(algebra);
  const Matrix d = derivation_in_input_basis(framed, cert);
  const Matrix& g_soliton = algebra.metric;

  // Directions are drawn serially so results do not depend on scheduling.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int size = n * (n + 1) / 2;
  std::vector<Matrix> directions;
  for (int trial = 0; trial < n_trials; ++trial) {
    Vector v(size);
    for (int i = 0; i < size; ++i) v(i) = normal(rng);
    directions.push_back(sym2_matrix(v / v.norm(), n));
  }

  auto run = [&](int trial) {
    const Matrix g0 = g_soliton + eps * directions[trial];
    const FlowTrace trace = integrate_flow(algebra, g0, cert.lambda, d, config, g_soliton);
    TrialReport report;
    report.trial = trial;
    report.initial_residual = trace.samples.front().soliton_residual;
    report.final_residual = trace.samples.back().soliton_residual;
    report.final_distance = trace.samples.back().distance_to_reference;
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
      const double prev = trace.samples[i - 1].soliton_residual;
      if (trace.samples[i].soliton_residual > prev * (1.0 + 1e-9) + kNegligibleResidual)
        ++report.monotonicity_violations;
    }
    report.decayed = report.final_residual <= report.initial_residual / 10.0 ||
                     report.final_residual <= kNegligibleResidual;
    return report;
  };

  std::vector<std::future<TrialReport>> pending;
  for (int trial = 0; trial < n_trials; ++trial)
    pending.push_back(std::async(std::launch::async, run, trial));
  std::vector<TrialReport> reports;
  for (auto& f : pending) reports.push_back(f.get());
  return reports;
}

}  // namespace solstab
