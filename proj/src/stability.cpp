#include "solstab/stability.hpp"

#include "solstab/errors.hpp"

#include <cmath>

namespace solstab {

Sym2Basis sym2_basis(int n) {
  if (n < 1 || n > kMaxDim) throw PreconditionViolated("Sym2 basis dimension out of range");
  Sym2Basis basis;
  basis.n = n;
  basis.elements.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.elements.push_back(std::move(e));
  }
  const double w = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = e(j, i) = w;
      basis.elements.push_back(std::move(e));
    }
  return basis;
}

Vector sym2_coordinates(const Matrix& h) {
  const auto n = h.rows();
  Vector v(n * (n + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(idx++) = h(i, i);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) v(idx++) = std::sqrt(2.0) * 0.5 * (h(i, j) + h(j, i));
  return v;
}

Matrix sym2_matrix(const Vector& coords, int n) {
  Matrix h = Matrix::Zero(n, n);
  Eigen::Index idx = 0;
  for (int i = 0; i < n; ++i) h(i, i) = coords(idx++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) h(i, j) = h(j, i) = coords(idx++) / std::sqrt(2.0);
  return h;
}

Matrix apply_ro(const RiemannTensor& riemann, const Matrix& h) {
  const int n = riemann.dim();
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) s += riemann(i, p, q, j) * h(p, q);
      out(i, j) = s;
    }
  return out;
}

StabilityForm stability_form(const CurvatureSummary& summary, const Sym2Basis& basis) {
  const int size = basis.size();
  StabilityForm form;
  form.s = Matrix::Zero(size, size);
  form.s_ro = Matrix::Zero(size, size);
  for (int a = 0; a < size; ++a) {
    const Matrix& e = basis.elements[a];
    const Matrix ro = apply_ro(summary.riemann, e);
    const Matrix full = ro + 0.5 * (summary.ric * e + e * summary.ric);
    for (int b = 0; b < size; ++b) {
      const Matrix& f = basis.elements[b];
      form.s_ro(b, a) = ro.cwiseProduct(f).sum();
      form.s(b, a) = full.cwiseProduct(f).sum();
    }
  }
  return form;
}

StabilityReport stability_report(const FramedAlgebra& framed, const CurvatureSummary& summary,
                                 const SolitonCertificate& cert,
                                 const CurvatureSummary* extension_summary) {
  StabilityReport report;
  report.step = structure_profile(framed).step;
  report.lambda = cert.lambda;
  report.trace_d = cert.trace_d;

  const StabilityForm form = stability_form(summary, sym2_basis(framed.dim()));
  report.max_q = max_eigenvalue(form.s);
  report.threshold = 0.5 * cert.trace_d;
  report.q_margin = report.threshold - report.max_q;
  report.q_verdict = strict_verdict(report.max_q, report.threshold);

  if (extension_summary != nullptr) {
    const auto n_ext = static_cast<int>(extension_summary->ric.rows());
    const StabilityForm ext_form = stability_form(*extension_summary, sym2_basis(n_ext));
    report.max_ro = max_eigenvalue(ext_form.s_ro);
    report.einstein_threshold = -cert.lambda;
    report.ro_margin = *report.einstein_threshold - *report.max_ro;
    report.ro_verdict = strict_verdict(*report.max_ro, *report.einstein_threshold);
  }
  return report;
}

}  // namespace solstab
