#include "solstab/soliton.hpp"

#include "solstab/errors.hpp"
#include "solstab/verdict.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace solstab {

namespace {

Vector flatten(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unflatten(const Vector& v, int n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

// Least-squares coefficients with minimum norm, rank decided at kRankTolerance.
Vector min_norm_solve(const Matrix& a, const Vector& b) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  cod.setThreshold(kRankTolerance);
  return cod.solve(b);
}

}  // namespace

SolitonCertificate solve_algebraic_soliton(const FramedAlgebra& framed,
                                           const CurvatureSummary& summary,
                                           const std::vector<Matrix>& ders,
                                           std::optional<double> lambda_hint) {
  const int n = framed.dim();
  const int m = static_cast<int>(ders.size());
  const Matrix identity = Matrix::Identity(n, n);

  Matrix der_columns(n * n, m);
  for (int d = 0; d < m; ++d) der_columns.col(d) = flatten(ders[d]);

  SolitonCertificate cert;
  Matrix with_identity(n * n, m + 1);
  with_identity.col(0) = flatten(identity);
  with_identity.rightCols(m) = der_columns;
  cert.degenerate = m > 0 && numerical_rank(with_identity) == numerical_rank(der_columns);

  if (cert.degenerate && lambda_hint) {
    cert.lambda = *lambda_hint;
    cert.lambda_from_hint = true;
    const Vector coeffs = min_norm_solve(der_columns, flatten(summary.ric - cert.lambda * identity));
    cert.derivation = unflatten(der_columns * coeffs, n);
  } else {
    const Vector coeffs = min_norm_solve(with_identity, flatten(summary.ric));
    cert.lambda = coeffs(0);
    cert.derivation = m > 0 ? unflatten(der_columns * coeffs.tail(m), n) : Matrix::Zero(n, n);
  }

  cert.residual = max_norm(summary.ric - cert.lambda * identity - cert.derivation);
  cert.trace_d = cert.derivation.trace();
  cert.div_x = summary.scal - n * cert.lambda;
  return cert;
}

EinsteinCertificate check_einstein(const CurvatureSummary& summary) {
  const auto n = summary.ric.rows();
  EinsteinCertificate out;
  out.lambda = summary.scal / static_cast<double>(n);
  out.residual = max_norm(summary.ric - out.lambda * Matrix::Identity(n, n));
  return out;
}

MetricLieAlgebra rank_one_extension(const FramedAlgebra& framed, const SolitonCertificate& cert,
                                    std::string name) {
  const int n = framed.dim();
  if (!cert.accepted())
    throw PreconditionViolated("rank-one extension needs an accepted soliton certificate");
  if (!(cert.lambda < 0.0)) throw PreconditionViolated("rank-one extension needs lambda < 0");
  if (!(cert.trace_d > 0.0)) throw PreconditionViolated("rank-one extension needs tr D > 0");
  const Matrix& d = cert.derivation;
  if (max_norm(d - d.transpose()) > kSolitonTolerance)
    throw PreconditionViolated("rank-one extension needs a symmetric derivation");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (d + d.transpose()), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kSolitonTolerance)
    throw PreconditionViolated("rank-one extension needs a positive semidefinite derivation");

  const double alpha = std::sqrt(-cert.lambda / (d * d).trace());
  const int a = n + 1;  // 1-based index of the new direction

  std::vector<BracketEntry> brackets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (framed.c(i, j, k) != 0.0) brackets.push_back({i + 1, j + 1, k + 1, framed.c(i, j, k)});
  // [e_j, A] = -alpha D e_j
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      if (d(m, j) != 0.0) brackets.push_back({j + 1, a, m + 1, -alpha * d(m, j)});

  MetricLieAlgebra ext = make_algebra(std::move(name), n + 1, std::move(brackets));

  const CurvatureSummary summary = curvature_summary(orthonormal_frame(ext));
  const EinsteinCertificate einstein = check_einstein(summary);
  if (!einstein.accepted() || std::abs(einstein.lambda - cert.lambda) > kSolitonTolerance) {
    std::ostringstream os;
    os << "extension is not Einstein at lambda " << cert.lambda << " (Einstein residual "
       << einstein.residual << ", constant " << einstein.lambda << ")";
    throw EinsteinVerificationFailed(os.str());
  }
  return ext;
}

std::string_view to_string(GaussianMode mode) noexcept {
  return mode == GaussianMode::Sharp ? "sharp" : "paper";
}

double crude_curvature_bound(const CurvatureSummary& summary) {
  const RiemannTensor& r = summary.riemann;
  const int n = r.dim();
  // weight(a, b) multiplies h_ab^2 in the majorant.
  Matrix weight = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) s += 0.5 * (std::abs(r(a, x, y, b)) + std::abs(r(x, a, b, y)));
      for (int x = 0; x < n; ++x) s += std::abs(summary.ric(a, x));
      weight(a, b) = s;
    }
  // On symmetric unit h, h_ab and h_ba carry equal mass.
  double c1 = 0.0;
  for (int a = 0; a < n; ++a) {
    c1 = std::max(c1, weight(a, a));
    for (int b = a + 1; b < n; ++b) c1 = std::max(c1, 0.5 * (weight(a, b) + weight(b, a)));
  }
  return c1;
}

GaussianExtensionPlan gaussian_extension_dimension(const CurvatureSummary& summary,
                                                   const SolitonCertificate& cert,
                                                   std::optional<double> stability_max_q,
                                                   GaussianMode mode, PriorStability prior) {
  if (!(cert.lambda < 0.0)) {
    std::ostringstream os;
    os << "not expanding: lambda=" << cert.lambda;
    throw NotExpanding(os.str());
  }
  const auto n = static_cast<double>(summary.ric.rows());

  GaussianExtensionPlan plan;
  plan.mode = mode;
  plan.lambda = cert.lambda;
  if (mode == GaussianMode::PaperBound) {
    plan.c1 = crude_curvature_bound(summary);
    plan.c2 = 0.5 * (std::abs(summary.scal) + n * std::abs(cert.lambda));
  } else {
    if (!stability_max_q)
      throw PreconditionViolated("sharp Gaussian bound needs the stability maximum of q");
    plan.c1 = std::max(*stability_max_q, 0.0);
    plan.c2 = 0.5 * std::abs(cert.div_x);
  }

  auto bracket = [&](int k) { return plan.c1 + plan.c2 + 0.5 * plan.lambda * k; };

  plan.already_stable = prior == PriorStability::Use && stability_max_q &&
                        strict_verdict(*stability_max_q, 0.5 * cert.trace_d) == Verdict::Stable;
  if (plan.already_stable) {
    plan.k = 0;
  } else {
    const double excess = plan.c1 + plan.c2 + 1.0;
    int k = excess < 0.0 ? 0 : static_cast<int>(std::floor(excess / (-0.5 * plan.lambda))) + 1;
    while (bracket(k) >= -1.0) ++k;
    while (k > 0 && bracket(k - 1) < -1.0) --k;
    plan.k = k;
  }
  plan.bracket_value_at_k = bracket(plan.k);
  return plan;
}

GaussianProductReport verify_gaussian_product(const FramedAlgebra& framed,
                                              const SolitonCertificate& cert, int k) {
  if (k < 0) throw PreconditionViolated("Gaussian factor dimension must be >= 0");
  const int n = framed.dim();
  const CurvatureSummary summary = curvature_summary(framed);

  GaussianProductReport out;
  out.k = k;
  out.dim = n + k;
  out.ricci = Matrix::Zero(n + k, n + k);
  out.ricci.topLeftCorner(n, n) = summary.ric;  // the Euclidean factor is flat

  const Matrix hess_f = -cert.lambda * Matrix::Identity(k, k);
  out.soliton = Matrix::Zero(n + k, n + k);
  out.soliton.topLeftCorner(n, n) = cert.lambda * Matrix::Identity(n, n) + cert.derivation;
  out.soliton.bottomRightCorner(k, k) = cert.lambda * Matrix::Identity(k, k) + hess_f;

  out.residual = max_norm(out.ricci - out.soliton);
  return out;
}

}  // namespace solstab
