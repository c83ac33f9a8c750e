#pragma once

// Curvature-normalized Ricci flow on left-invariant metrics,
//
//   dG/dt = -2 Ric(G) + 2 lambda G + G D + D^T G,
//
// with G the Gram matrix on the fixed input basis and D the soliton
// derivation in that basis. Algebraic solitons are fixed points.

#include "solstab/algebra.hpp"
#include "solstab/soliton.hpp"
#include "solstab/tensor.hpp"

#include <cstdint>
#include <vector>

namespace solstab {

struct FlowConfig {
  double dt = 1e-3;
  double t_max = 10.0;
  int sample_every = 100;  // steps between recorded samples
  double max_norm = 1e8;
  double max_condition = 1e12;
};

struct FlowState {
  double t = 0.0;
  Matrix g;
};

struct FlowSample {
  double t = 0.0;
  double soliton_residual = 0.0;
  double distance_to_reference = 0.0;
  double rhs_norm = 0.0;
};

struct FlowTrace {
  std::vector<FlowSample> samples;  // strictly increasing t
  FlowState final_state;
};

/// Ricci (0,2)-tensor of the metric g on the input basis with structure tensor c.
/// Throws PositivityLost when g is not positive definite.
Matrix ricci_tensor(const Tensor3& c, const Matrix& g);

Matrix flow_rhs(const Tensor3& c, const Matrix& g, double lambda, const Matrix& d);
Matrix flow_rhs(const MetricLieAlgebra& algebra, const Matrix& g, double lambda, const Matrix& d);

/// ||Ric(G) - lambda G - (G D + D^T G)/2||_F / ||G||_F
double soliton_residual(const Tensor3& c, const Matrix& g, double lambda, const Matrix& d);

/// Classical fixed-step RK4. Throws PositivityLost or Blowup.
FlowTrace integrate_flow(const MetricLieAlgebra& algebra, const Matrix& g0, double lambda,
                         const Matrix& d, const FlowConfig& config, const Matrix& reference);

/// The certificate's frame derivation expressed on the input basis.
Matrix derivation_in_input_basis(const FramedAlgebra& framed, const SolitonCertificate& cert);

struct TrialReport {
  int trial = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  double final_distance = 0.0;
  int monotonicity_violations = 0;
  bool decayed = false;  // final <= initial / 10, or both negligible
};

inline constexpr double kNegligibleResidual = 1e-12;
inline constexpr double kMaxPerturbation = 1e-2;

/// Random unit symmetric perturbations of the soliton metric, each integrated
/// independently. Throws NotExpanding for lambda >= 0.
std::vector<TrialReport> perturbation_experiment(const MetricLieAlgebra& algebra,
                                                 const SolitonCertificate& cert, double eps,
                                                 int n_trials, std::uint64_t seed,
                                                 const FlowConfig& config = {});

}  // namespace solstab
