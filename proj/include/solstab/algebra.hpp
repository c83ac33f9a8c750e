#pragma once

// Metric Lie algebras given by structure constants.
//
// A bracket entry (i, j, k, c) means [e_i, e_j] = ... + c e_k + ..., i.e. c is
// the e_k coefficient of the bracket in the input basis. For the identity
// metric this is the same as <[e_i, e_j], e_k> = c.

#include "solstab/tensor.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solstab {

inline constexpr int kMaxInputDim = 16;
// Rank-one extensions add one direction on top of the largest input.
inline constexpr int kMaxDim = kMaxInputDim + 1;

/// Relative singular-value threshold for every rank and null-space decision.
inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kJacobiTolerance = 1e-10;

struct BracketEntry {
  int i = 0;  // 1-based, i < j
  int j = 0;
  int k = 0;
  double value = 0.0;

  friend bool operator==(const BracketEntry&, const BracketEntry&) = default;
};

struct MetricLieAlgebra {
  std::string name;
  int dim = 0;
  std::vector<BracketEntry> brackets;
  Matrix metric;  // symmetric positive definite, dim x dim
  std::optional<double> lambda_hint;
};

/// Validating constructor. Checks index ranges, i < j, duplicates and the
/// metric; throws ParseError on any violation. An empty metric means identity.
MetricLieAlgebra make_algebra(std::string name, int dim, std::vector<BracketEntry> brackets,
                              Matrix metric = {}, std::optional<double> lambda_hint = {},
                              int max_dim = kMaxDim);

/// Parses the JSON-object .alg document (keys: name, dim, brackets, metric, hints).
MetricLieAlgebra parse_algebra(std::string_view text);
MetricLieAlgebra load_algebra(const std::filesystem::path& path);

/// Writes an .alg document that parse_algebra reads back to the same algebra.
std::string to_document(const MetricLieAlgebra& algebra);

/// Dense antisymmetric coefficient array c(i, j, k) in the input basis (0-based).
Tensor3 structure_tensor(const MetricLieAlgebra& algebra);

/// Structure constants in an orthonormal frame.
struct FramedAlgebra {
  Tensor3 c;
  // Column a holds the input-basis coordinates of frame vector f_a.
  Matrix basis_change;

  [[nodiscard]] int dim() const noexcept { return c.dim(); }
};

struct JacobiDiagnostics {
  double jacobi_residual = 0.0;
  bool ok = true;
  // 1-based triple (i, j, k) attaining the residual; zeros when none.
  std::array<int, 3> worst_triple{0, 0, 0};
};

JacobiDiagnostics validate_algebra(const MetricLieAlgebra& algebra);
JacobiDiagnostics jacobi_diagnostics(const Tensor3& c);

/// Structure constants of the basis f_a = sum_i T(i, a) e_i.
Tensor3 transform_structure(const Tensor3& c, const Matrix& basis_change);

/// Frame from the lower-triangular Cholesky factor G = L L^T, f = e L^{-T}.
/// Throws NotPositiveDefinite.
FramedAlgebra orthonormal_frame(const MetricLieAlgebra& algebra);

/// Frame that is already orthonormal (identity basis change).
FramedAlgebra framed_from_structure(Tensor3 c);

/// Re-expresses F in the frame f'_a = sum_b Q(b, a) f_b, Q orthogonal.
FramedAlgebra rotate_frame(const FramedAlgebra& framed, const Matrix& q);

/// Max-norm of D[x, y] - [Dx, y] - [x, Dy] over basis pairs.
double derivation_residual(const Tensor3& c, const Matrix& d);

/// Orthonormal (Frobenius) basis of Der(g), matrices acting on coordinates:
/// D e_j = sum_i D(i, j) e_i.
std::vector<Matrix> derivation_basis(const Tensor3& c);
std::vector<Matrix> derivation_basis(const MetricLieAlgebra& algebra);

/// Matrix of ad(e_a) acting on coordinates.
Matrix ad_matrix(const Tensor3& c, int a);

struct StructureProfile {
  int step = 0;  // 0 when not nilpotent
  bool nilpotent = false;
  bool unimodular = false;
  Vector mean_curvature;  // H with <H, X> = tr ad X, frame coordinates
  Matrix killing;         // B(X, Y) = tr(ad X ad Y)
  std::vector<int> lower_central_dims;
};

StructureProfile structure_profile(const Tensor3& c);
StructureProfile structure_profile(const FramedAlgebra& framed);
StructureProfile structure_profile(const MetricLieAlgebra& algebra);

/// Numerical rank of the columns of m, relative threshold kRankTolerance.
int numerical_rank(const Matrix& m);

}  // namespace solstab
