#include "solstab/curvature.hpp"

#include "solstab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace solstab {

ConnectionCoefficients connection_coefficients(const FramedAlgebra& framed) {
  const Tensor3& c = framed.c;
  const int n = c.dim();
  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) gamma(i, j, k) = 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
  return {std::move(gamma)};
}

RiemannTensor riemann_tensor(const FramedAlgebra& framed, const ConnectionCoefficients& conn) {
  const Tensor3& c = framed.c;
  const Tensor3& g = conn.gamma;
  const int n = c.dim();
  Tensor4 r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += g(j, k, m) * g(i, m, l) - g(i, k, m) * g(j, m, l) - c(i, j, m) * g(m, k, l);
          r(i, j, k, l) = s;
        }
  return {std::move(r)};
}

Matrix ricci_closed_form(const FramedAlgebra& framed) {
  const Tensor3& c = framed.c;
  const int n = c.dim();
  const StructureProfile profile = structure_profile(c);
  const Vector& h = profile.mean_curvature;

  Matrix ric = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) s -= 0.5 * c(x, i, m) * c(y, i, m);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += 0.25 * c(i, j, x) * c(i, j, y);
      s -= 0.5 * profile.killing(x, y);
      for (int k = 0; k < n; ++k) s -= 0.5 * h(k) * (c(k, x, y) + c(k, y, x));
      ric(x, y) = s;
      ric(y, x) = s;
    }
  return ric;
}

Matrix ricci_contraction(const RiemannTensor& riemann) {
  const int n = riemann.dim();
  Matrix ric = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += riemann(i, j, k, i);
      ric(j, k) = s;
    }
  return ric;
}

CurvatureSummary curvature_summary(const FramedAlgebra& framed) {
  CurvatureSummary out;
  out.riemann = riemann_tensor(framed, connection_coefficients(framed));
  out.ric = ricci_closed_form(framed);
  out.scal = out.ric.trace();
  out.cross_check_residual = max_norm(out.ric - ricci_contraction(out.riemann));
  if (out.cross_check_residual > kRicciCrossCheckTolerance * std::max(1.0, max_norm(out.ric))) {
    std::ostringstream os;
    os << "closed-form Ricci and Riemann contraction differ by " << out.cross_check_residual;
    throw ContractionMismatch(os.str());
  }
  return out;
}

}  // namespace solstab
