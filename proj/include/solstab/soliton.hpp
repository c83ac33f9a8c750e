#pragma once

// Algebraic soliton data Ric = lambda I + D, Einstein certificates, rank-one
// Einstein extensions, and Gaussian products M x R^k.

#include "solstab/algebra.hpp"
#include "solstab/curvature.hpp"
#include "solstab/tensor.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace solstab {

inline constexpr double kSolitonTolerance = 1e-8;

struct SolitonCertificate {
  double lambda = 0.0;
  Matrix derivation;  // D in the orthonormal frame
  double residual = 0.0;  // max |Ric - lambda I - D|
  double trace_d = 0.0;
  double div_x = 0.0;  // scal - n lambda
  // I is a derivation (abelian algebra), so lambda is not determined by Ric.
  bool degenerate = false;
  bool lambda_from_hint = false;

  [[nodiscard]] bool accepted() const noexcept { return residual <= kSolitonTolerance; }
  [[nodiscard]] bool expanding() const noexcept { return lambda < 0.0; }
};

/// Least squares for (lambda, D) over span{I} + span(ders). When I lies in
/// the span the minimum-norm solution is used unless a lambda hint is given.
SolitonCertificate solve_algebraic_soliton(const FramedAlgebra& framed,
                                           const CurvatureSummary& summary,
                                           const std::vector<Matrix>& ders,
                                           std::optional<double> lambda_hint = {});

struct EinsteinCertificate {
  double lambda = 0.0;
  double residual = 0.0;

  [[nodiscard]] bool accepted() const noexcept { return residual <= kSolitonTolerance; }
};

EinsteinCertificate check_einstein(const CurvatureSummary& summary);

/// s = R A + n with ad A = alpha D on n, alpha = sqrt(-lambda / tr D^2). A is
/// the last basis vector; the metric is the identity. The result is verified
/// to be Einstein with constant lambda (EinsteinVerificationFailed otherwise).
MetricLieAlgebra rank_one_extension(const FramedAlgebra& framed, const SolitonCertificate& cert,
                                    std::string name = "extension");

enum class GaussianMode { PaperBound, Sharp };
enum class PriorStability { Use, Ignore };

std::string_view to_string(GaussianMode mode) noexcept;

struct GaussianExtensionPlan {
  double c1 = 0.0;
  double c2 = 0.0;
  double lambda = 0.0;
  int k = 0;
  GaussianMode mode = GaussianMode::PaperBound;
  double bracket_value_at_k = 0.0;  // c1 + c2 + lambda k / 2
  bool already_stable = false;
};

/// Coefficient-sum bound C with |q(h)| <= C |h|^2, obtained from the
/// term-by-term estimate |R h h| <= |R| (h^2 + h^2) / 2.
double crude_curvature_bound(const CurvatureSummary& summary);

/// Smallest k with c1 + c2 + lambda k / 2 < -1, or 0 when stability_max_q
/// already certifies max q < tr D / 2 (unless prior is Ignore). Sharp mode
/// needs stability_max_q. Throws NotExpanding when lambda >= 0.
GaussianExtensionPlan gaussian_extension_dimension(const CurvatureSummary& summary,
                                                   const SolitonCertificate& cert,
                                                   std::optional<double> stability_max_q,
                                                   GaussianMode mode,
                                                   PriorStability prior = PriorStability::Use);

struct GaussianProductReport {
  int dim = 0;
  int k = 0;
  double residual = 0.0;
  Matrix ricci;    // block diag(Ric_M, 0)
  Matrix soliton;  // block diag(lambda I + D, lambda I + Hess f)
};

GaussianProductReport verify_gaussian_product(const FramedAlgebra& framed,
                                              const SolitonCertificate& cert, int k);

}  // namespace solstab
