#include "solstab/curvature.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace solstab;
using namespace solstab::testing;

namespace {

double symmetry_defect(const RiemannTensor& r) {
  const int n = r.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = r(i, j, k, l);
          worst = std::max({worst, std::abs(v + r(j, i, k, l)), std::abs(v + r(i, j, l, k)),
                            std::abs(v - r(k, l, i, j)),
                            std::abs(v + r(j, k, i, l) + r(k, i, j, l))});
        }
  return worst;
}

std::vector<Tensor3> random_inputs(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Tensor3> out;
  for (int t = 0; t < count; ++t) out.push_back(random_abelian_extension(2 + t % 5, rng));
  return out;
}

}  // namespace

TEST_SUITE("curvature") {

TEST_CASE("connection coefficients") {
  SUBCASE("abelian") {
    CHECK(connection_coefficients(orthonormal_frame(catalog("abelian3"))).gamma.max_abs() == 0.0);
  }
  SUBCASE("h3 by the Koszul formula") {
    const auto g = connection_coefficients(framed_from_structure(heisenberg3_tensor())).gamma;
    CHECK(g(0, 1, 2) == 0.5);
    CHECK(g(1, 0, 2) == -0.5);
    CHECK(g(0, 2, 1) == -0.5);
    CHECK(g(2, 0, 1) == -0.5);
    CHECK(g(1, 2, 0) == 0.5);
    CHECK(g(2, 1, 0) == 0.5);
    int nonzero = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) nonzero += g(i, j, k) != 0.0;
    CHECK(nonzero == 6);
  }
  SUBCASE("su2 gives half the structure constants") {
    const Tensor3 c = su2_tensor();
    const auto g = connection_coefficients(framed_from_structure(c)).gamma;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(g(i, j, k) == 0.5 * c(i, j, k));
  }
  SUBCASE("metric compatible and torsion free") {
    for (const auto& c : random_inputs(30, 21)) {
      const auto f = framed_from_structure(c);
      const auto g = connection_coefficients(f).gamma;
      const int n = c.dim();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            CHECK(std::abs(g(i, j, k) + g(i, k, j)) <= 1e-12);
            CHECK(std::abs(g(i, j, k) - g(j, i, k) - c(i, j, k)) <= 1e-12);
          }
    }
  }
}

TEST_CASE("sectional curvature calibration") {
  SUBCASE("su2 is +1/4 on every plane") {
    const auto r = riemann_tensor(framed_from_structure(su2_tensor()),
                                  connection_coefficients(framed_from_structure(su2_tensor())));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(sectional_curvature(r, i, j) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("h3") {
    const auto s = curvature_summary(framed_from_structure(heisenberg3_tensor()));
    CHECK(sectional_curvature(s.riemann, 0, 1) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(sectional_curvature(s.riemann, 0, 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(sectional_curvature(s.riemann, 1, 2) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("bracket-only formula agrees on random algebras") {
    for (const auto& c : random_inputs(40, 99)) {
      const auto s = curvature_summary(framed_from_structure(c));
      for (int i = 0; i < c.dim(); ++i)
        for (int j = 0; j < c.dim(); ++j)
          if (i != j) CHECK(std::abs(sectional_curvature(s.riemann, i, j) - sectional_oracle(c, i, j)) <= 1e-12);
    }
  }
}

TEST_CASE("Ricci values") {
  SUBCASE("h3") {
    const auto s = curvature_summary(orthonormal_frame(catalog("heisenberg3")));
    Matrix expected = Matrix::Zero(3, 3);
    expected.diagonal() << -0.5, -0.5, 0.5;
    CHECK(max_norm(s.ric - expected) <= 1e-15);
    CHECK(s.scal == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(s.cross_check_residual <= 1e-12);
  }
  SUBCASE("su2") {
    const auto s = curvature_summary(orthonormal_frame(catalog("su2")));
    CHECK(max_norm(s.ric - 0.5 * Matrix::Identity(3, 3)) <= 1e-15);
    CHECK(s.scal == doctest::Approx(1.5).epsilon(1e-15));
  }
  SUBCASE("abelian") {
    const auto s = curvature_summary(orthonormal_frame(catalog("abelian4")));
    CHECK(max_norm(s.ric) == 0.0);
    CHECK(s.scal == 0.0);
    CHECK(s.riemann.r.max_abs() == 0.0);
  }
  SUBCASE("h5") {
    const auto s = curvature_summary(orthonormal_frame(catalog("heisenberg5")));
    Matrix expected = Matrix::Zero(5, 5);
    expected.diagonal() << -0.5, -0.5, -0.5, -0.5, 1.0;
    CHECK(max_norm(s.ric - expected) <= 1e-15);
  }
}

TEST_CASE("tensor identities on catalog and random algebras") {
  std::vector<FramedAlgebra> inputs;
  for (const auto& stem : catalog_names()) inputs.push_back(orthonormal_frame(catalog(stem)));
  for (const auto& c : random_inputs(100, 2024)) inputs.push_back(framed_from_structure(c));
  for (const auto& f : inputs) {
    const auto s = curvature_summary(f);
    CHECK(symmetry_defect(s.riemann) <= 1e-12);
    CHECK(max_norm(ricci_closed_form(f) - ricci_contraction(s.riemann)) <= 1e-10);
    CHECK(max_norm(s.ric - s.ric.transpose()) <= 1e-12);
    CHECK(std::abs(s.scal - s.ric.trace()) <= 1e-12);
  }
}

TEST_CASE("scalar curvature is frame independent") {
  std::mt19937_64 rng(8);
  for (const auto& c : random_inputs(20, 77)) {
    const auto f = framed_from_structure(c);
    const double scal = curvature_summary(f).scal;
    const auto rotated = rotate_frame(f, random_orthogonal(c.dim(), rng));
    CHECK(std::abs(curvature_summary(rotated).scal - scal) <= 1e-10);
  }
}

}  // TEST_SUITE
