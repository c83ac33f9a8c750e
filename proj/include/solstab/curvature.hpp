#pragma once

// Levi-Civita data of a left-invariant metric, all in an orthonormal frame.
//
// Conventions:
//   gamma(i, j, k) = <nabla_{e_i} e_j, e_k>
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z
//   R(i, j, k, l) = <R(e_i, e_j) e_k, e_l>, so sec(e_i, e_j) = R(i, j, j, i)
//   ric(j, k) = sum_i R(i, j, k, i)

#include "solstab/algebra.hpp"
#include "solstab/tensor.hpp"

namespace solstab {

inline constexpr double kRicciCrossCheckTolerance = 1e-10;

struct ConnectionCoefficients {
  Tensor3 gamma;
};

struct RiemannTensor {
  Tensor4 r;

  [[nodiscard]] int dim() const noexcept { return r.dim(); }
  double operator()(int i, int j, int k, int l) const noexcept { return r(i, j, k, l); }
};

struct CurvatureSummary {
  Matrix ric;
  double scal = 0.0;
  RiemannTensor riemann;
  double cross_check_residual = 0.0;
};

/// Koszul formula: gamma(i,j,k) = (c(i,j,k) - c(j,k,i) + c(k,i,j)) / 2.
ConnectionCoefficients connection_coefficients(const FramedAlgebra& framed);

RiemannTensor riemann_tensor(const FramedAlgebra& framed, const ConnectionCoefficients& conn);

/// Ricci tensor from the structure constants alone:
///   ric(X,Y) = -1/2 sum_i <[X,e_i],[Y,e_i]> + 1/4 sum_{i,j} <[e_i,e_j],X><[e_i,e_j],Y>
///              - 1/2 B(X,Y) - 1/2 (<[H,X],Y> + <[H,Y],X>)
Matrix ricci_closed_form(const FramedAlgebra& framed);

Matrix ricci_contraction(const RiemannTensor& riemann);

/// Closed-form Ricci cross-checked against the Riemann contraction.
/// Throws ContractionMismatch when the two disagree beyond 1e-10.
CurvatureSummary curvature_summary(const FramedAlgebra& framed);

inline double sectional_curvature(const RiemannTensor& riemann, int i, int j) {
  return riemann(i, j, j, i);
}

}  // namespace solstab
