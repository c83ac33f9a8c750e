#include "solstab/algebra.hpp"

#include "solstab/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

namespace solstab {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m, unsigned options) {
  return Eigen::JacobiSVD<Matrix>(m, options);
}

Tensor3 transform_with_inverse(const Tensor3& c, const Matrix& t, const Matrix& t_inv) {
  const int n = c.dim();
  Tensor3 x(n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += t(i, a) * c(i, j, m);
        x(a, j, m) = s;
      }
  Tensor3 y(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += t(j, b) * x(a, j, m);
        y(a, b, m) = s;
      }
  Tensor3 out(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += t_inv(k, m) * y(a, b, m);
        out(a, b, k) = s;
        out(b, a, k) = -s;
      }
  return out;
}

}  // namespace

MetricLieAlgebra make_algebra(std::string name, int dim, std::vector<BracketEntry> brackets,
                              Matrix metric, std::optional<double> lambda_hint, int max_dim) {
  if (dim < 1 || dim > max_dim) {
    std::ostringstream os;
    os << "dimension " << dim << " outside supported range 1.." << max_dim;
    throw ParseError(os.str());
  }
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& e : brackets) {
    if (e.i < 1 || e.i > dim || e.j < 1 || e.j > dim || e.k < 1 || e.k > dim) {
      std::ostringstream os;
      os << "index out of range in bracket [" << e.i << "," << e.j << "," << e.k
         << "] for dim " << dim;
      throw ParseError(os.str());
    }
    if (e.i >= e.j) {
      std::ostringstream os;
      os << "bracket [" << e.i << "," << e.j << "," << e.k << "] must have i < j";
      throw ParseError(os.str());
    }
    if (!std::isfinite(e.value)) throw ParseError("non-finite structure constant");
    if (!seen.emplace(e.i, e.j, e.k).second) {
      std::ostringstream os;
      os << "duplicate bracket entry [" << e.i << "," << e.j << "," << e.k << "]";
      throw ParseError(os.str());
    }
  }

  if (metric.size() == 0) metric = Matrix::Identity(dim, dim);
  if (metric.rows() != dim || metric.cols() != dim)
    throw ParseError("metric must be a dim x dim matrix");
  if (!metric.allFinite()) throw ParseError("metric has non-finite entries");
  const double scale = std::max(1.0, max_norm(metric));
  if (max_norm(metric - metric.transpose()) > 1e-12 * scale)
    throw ParseError("metric is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(metric, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw ParseError("metric is not positive definite");

  return MetricLieAlgebra{std::move(name), dim, std::move(brackets), std::move(metric),
                          lambda_hint};
}

Tensor3 structure_tensor(const MetricLieAlgebra& algebra) {
  Tensor3 c(algebra.dim);
  for (const auto& e : algebra.brackets) {
    c(e.i - 1, e.j - 1, e.k - 1) = e.value;
    c(e.j - 1, e.i - 1, e.k - 1) = -e.value;
  }
  return c;
}

JacobiDiagnostics jacobi_diagnostics(const Tensor3& c) {
  const int n = c.dim();
  JacobiDiagnostics out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double s = 0.0;
          for (int p = 0; p < n; ++p)
            s += c(i, j, p) * c(p, k, m) + c(j, k, p) * c(p, i, m) + c(k, i, p) * c(p, j, m);
          if (std::abs(s) > out.jacobi_residual) {
            out.jacobi_residual = std::abs(s);
            out.worst_triple = {i + 1, j + 1, k + 1};
          }
        }
  out.ok = out.jacobi_residual <= kJacobiTolerance;
  return out;
}

JacobiDiagnostics validate_algebra(const MetricLieAlgebra& algebra) {
  return jacobi_diagnostics(structure_tensor(algebra));
}

Tensor3 transform_structure(const Tensor3& c, const Matrix& basis_change) {
  return transform_with_inverse(c, basis_change, basis_change.partialPivLu().inverse());
}

FramedAlgebra orthonormal_frame(const MetricLieAlgebra& algebra) {
  const int n = algebra.dim;
  Tensor3 c = structure_tensor(algebra);
  if (algebra.metric.isIdentity(0.0)) return FramedAlgebra{std::move(c), Matrix::Identity(n, n)};

  Eigen::LLT<Matrix> llt(algebra.metric);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("metric is not positive definite");
  const Matrix lower = llt.matrixL();
  // T = L^{-T} gives T^T G T = I; its inverse is L^T.
  const Matrix t = lower.transpose().triangularView<Eigen::Upper>().solve(
      Matrix::Identity(n, n));
  return FramedAlgebra{transform_with_inverse(c, t, lower.transpose()), t};
}

FramedAlgebra framed_from_structure(Tensor3 c) {
  const int n = c.dim();
  return FramedAlgebra{std::move(c), Matrix::Identity(n, n)};
}

FramedAlgebra rotate_frame(const FramedAlgebra& framed, const Matrix& q) {
  return FramedAlgebra{transform_with_inverse(framed.c, q, q.transpose()),
                       framed.basis_change * q};
}

Matrix ad_matrix(const Tensor3& c, int a) {
  const int n = c.dim();
  Matrix ad(n, n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) ad(m, i) = c(a, i, m);
  return ad;
}

double derivation_residual(const Tensor3& c, const Matrix& d) {
  const int n = c.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
          s += c(i, j, p) * d(m, p) - d(p, i) * c(p, j, m) - d(p, j) * c(i, p, m);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

std::vector<Matrix> derivation_basis(const Tensor3& c) {
  const int n = c.dim();
  const int unknowns = n * n;
  const int pairs = n * (n - 1) / 2;
  std::vector<Matrix> basis;

  auto unpack = [n](const Vector& v) {
    Matrix d(n, n);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) d(r, s) = v(r * n + s);
    return d;
  };

  if (pairs == 0) {
    for (int col = 0; col < unknowns; ++col) basis.push_back(unpack(Vector::Unit(unknowns, col)));
    return basis;
  }

  // Row (i<j, m) encodes the e_m component of D[e_i,e_j] - [De_i,e_j] - [e_i,De_j];
  // column r*n+s is the unknown D(r, s).
  Matrix system = Matrix::Zero(static_cast<Eigen::Index>(pairs) * n, unknowns);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int m = 0; m < n; ++m, ++row)
        for (int p = 0; p < n; ++p) {
          system(row, m * n + p) += c(i, j, p);
          system(row, p * n + i) -= c(p, j, m);
          system(row, p * n + j) -= c(i, p, m);
        }

  const auto svd = full_svd(system, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double top = sigma.size() > 0 ? sigma(0) : 0.0;
  int rank = 0;
  if (top > 0.0)
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
      if (sigma(k) > kRankTolerance * top) ++rank;
  const Matrix& v = svd.matrixV();
  for (int col = rank; col < unknowns; ++col) basis.push_back(unpack(v.col(col)));
  return basis;
}

std::vector<Matrix> derivation_basis(const MetricLieAlgebra& algebra) {
  return derivation_basis(structure_tensor(algebra));
}

int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  const auto svd = full_svd(m, 0);
  const Vector& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > kRankTolerance * sigma(0)) ++rank;
  return rank;
}

namespace {

// Orthonormal basis for the column span, absolute threshold on unit-scale data.
Matrix span_basis(const Matrix& columns) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  const auto svd = full_svd(columns, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > kRankTolerance) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

StructureProfile structure_profile(const Tensor3& c) {
  const int n = c.dim();
  StructureProfile profile;
  profile.mean_curvature = Vector::Zero(n);
  profile.killing = Matrix::Zero(n, n);

  std::vector<Matrix> ads;
  ads.reserve(n);
  for (int a = 0; a < n; ++a) ads.push_back(ad_matrix(c, a));
  for (int a = 0; a < n; ++a) {
    profile.mean_curvature(a) = ads[a].trace();
    for (int b = 0; b < n; ++b) profile.killing(a, b) = (ads[a] * ads[b]).trace();
  }
  profile.unimodular = profile.mean_curvature.cwiseAbs().maxCoeff() <= 1e-12 *
                                                                         std::max(1.0, c.max_abs());

  // Lower central series on unit-scale constants so the rank threshold is absolute.
  const double scale = c.max_abs();
  Matrix current = Matrix::Identity(n, n);
  profile.lower_central_dims.push_back(n);
  if (scale == 0.0) {
    profile.lower_central_dims.push_back(0);
    profile.step = 1;
    profile.nilpotent = true;
    return profile;
  }
  for (int iter = 0; iter <= n; ++iter) {
    Matrix images(n, static_cast<Eigen::Index>(n) * current.cols());
    for (int a = 0; a < n; ++a)
      images.middleCols(static_cast<Eigen::Index>(a) * current.cols(), current.cols()) =
          (ads[a] / scale) * current;
    Matrix next = span_basis(images);
    const int dim_next = static_cast<int>(next.cols());
    profile.lower_central_dims.push_back(dim_next);
    if (dim_next == 0) {
      profile.nilpotent = true;
      profile.step = static_cast<int>(profile.lower_central_dims.size()) - 1;
      return profile;
    }
    if (dim_next == current.cols()) break;
    current = std::move(next);
  }
  profile.nilpotent = false;
  profile.step = 0;
  return profile;
}

StructureProfile structure_profile(const FramedAlgebra& framed) {
  return structure_profile(framed.c);
}

StructureProfile structure_profile(const MetricLieAlgebra& algebra) {
  return structure_profile(orthonormal_frame(algebra));
}

}  // namespace solstab
