#pragma once

// Quadratic forms on symmetric 2-tensors and the algebraic stability test
//
//   q(h) = <Ro h + Ric o h, h>,  (Ro h)_ij = sum_{p,q} R(i,p,q,j) h_pq,
//
// which certifies strict linear stability when max q < tr(D) / 2 on the unit
// sphere of Sym^2. For Einstein metrics the analogous test is max <Ro h, h> < -lambda.

#include "solstab/curvature.hpp"
#include "solstab/soliton.hpp"
#include "solstab/tensor.hpp"
#include "solstab/verdict.hpp"

#include <optional>
#include <vector>

namespace solstab {

struct Sym2Basis {
  int n = 0;
  std::vector<Matrix> elements;  // diagonals first, then (E_ij + E_ji)/sqrt(2), i < j

  [[nodiscard]] int size() const noexcept { return static_cast<int>(elements.size()); }
};

/// Throws PreconditionViolated unless 1 <= n <= kMaxDim.
Sym2Basis sym2_basis(int n);

/// Coordinates of a symmetric matrix in the Sym2Basis ordering, and back.
Vector sym2_coordinates(const Matrix& h);
Matrix sym2_matrix(const Vector& coords, int n);

/// (Ro h)_ij = sum R(i,p,q,j) h_pq.
Matrix apply_ro(const RiemannTensor& riemann, const Matrix& h);

struct StabilityForm {
  Matrix s;     // h -> Ro h + (Ric h + h Ric) / 2
  Matrix s_ro;  // h -> Ro h
};

StabilityForm stability_form(const CurvatureSummary& summary, const Sym2Basis& basis);

struct EigenResult {
  Vector eigenvalues;  // ascending
  double off_diagonal_norm = 0.0;
  double frobenius_norm = 0.0;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations, row-by-row sweep order, until the off-diagonal
/// Frobenius norm is <= 1e-12 * ||S||_F. Throws NotSymmetric.
EigenResult jacobi_eigenvalues(const Matrix& s);
double max_eigenvalue(const Matrix& s);

struct StabilityReport {
  int step = 0;
  double lambda = 0.0;
  double trace_d = 0.0;

  double max_q = 0.0;
  double threshold = 0.0;  // tr D / 2
  double q_margin = 0.0;
  Verdict q_verdict = Verdict::Inconclusive;

  // Filled only when an Einstein extension is analyzed.
  std::optional<double> max_ro;
  std::optional<double> einstein_threshold;  // -lambda
  std::optional<double> ro_margin;
  std::optional<Verdict> ro_verdict;
};

StabilityReport stability_report(const FramedAlgebra& framed, const CurvatureSummary& summary,
                                 const SolitonCertificate& cert,
                                 const CurvatureSummary* extension_summary = nullptr);

}  // namespace solstab
