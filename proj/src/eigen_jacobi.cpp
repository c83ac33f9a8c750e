#include "solstab/errors.hpp"
#include "solstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace solstab {

namespace {

constexpr double kSymmetryTolerance = 1e-8;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < a.cols(); ++q)
      if (p != q) s += a(p, q) * a(p, q);
  return std::sqrt(s);
}

// Zeroes a(p, q) with a plane rotation, updating rows and columns p, q.
void rotate(Matrix& a, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = a(p, k) = c * akp - s * akq;
    a(k, q) = a(q, k) = s * akp + c * akq;
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;
}

}  // namespace

EigenResult jacobi_eigenvalues(const Matrix& s) {
  if (s.rows() != s.cols()) throw NotSymmetric("matrix is not square");
  const double asym = max_norm(s - s.transpose());
  if (asym > kSymmetryTolerance * std::max(1.0, max_norm(s))) {
    std::ostringstream os;
    os << "matrix is not symmetric (max asymmetry " << asym << ")";
    throw NotSymmetric(os.str());
  }

  Matrix a = 0.5 * (s + s.transpose());
  EigenResult out;
  out.frobenius_norm = a.norm();
  const double target = kOffDiagonalTolerance * out.frobenius_norm;
  const Eigen::Index n = a.rows();

  out.off_diagonal_norm = off_diagonal_norm(a);
  while (out.off_diagonal_norm > target && out.sweeps < kMaxSweeps) {
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, p, q);
    ++out.sweeps;
    out.off_diagonal_norm = off_diagonal_norm(a);
  }

  out.eigenvalues = a.diagonal();
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

double max_eigenvalue(const Matrix& s) {
  const EigenResult r = jacobi_eigenvalues(s);
  if (r.eigenvalues.size() == 0) throw PreconditionViolated("empty matrix has no eigenvalues");
  return r.eigenvalues(r.eigenvalues.size() - 1);
}

}  // namespace solstab
