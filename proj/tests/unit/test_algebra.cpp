#include "solstab/algebra.hpp"
#include "solstab/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <string>

using namespace solstab;
using namespace solstab::testing;

namespace {

std::string error_of(std::string_view doc) {
  try {
    parse_algebra(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

// Projection residual of m onto the span of an orthonormal matrix basis.
double span_residual(const std::vector<Matrix>& basis, const Matrix& m) {
  Matrix rest = m;
  for (const auto& b : basis) rest -= (b.cwiseProduct(m).sum()) * b;
  return rest.norm();
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("parse h3 document") {
  const auto a = parse_algebra(R"({"name": "h3", "dim": 3, "brackets": [[1, 2, 3, 1.0]]})");
  CHECK(a.name == "h3");
  CHECK(a.dim == 3);
  REQUIRE(a.brackets.size() == 1);
  CHECK(a.brackets[0] == BracketEntry{1, 2, 3, 1.0});
  CHECK(a.metric == Matrix::Identity(3, 3));
  CHECK_FALSE(a.lambda_hint);
}

TEST_CASE("parse abelian plane") {
  const auto a = parse_algebra(R"({"name": "r2", "dim": 2, "brackets": []})");
  CHECK(a.dim == 2);
  CHECK(a.brackets.empty());
  CHECK(structure_tensor(a).max_abs() == 0.0);
}

TEST_CASE("parse errors") {
  CHECK(error_of(R"({"name": "x", "dim": 3, "brackets": [[1, 2, 5, 1.0]]})").find("index out of range") !=
        std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 3, "brackets": [[1, 2, 3, 1], [1, 2, 3, 2]]})")
            .find("duplicate") != std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 3, "brackets": [[2, 1, 3, 1]]})").find("i < j") !=
        std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "metric": [[1, 0.5], [0, 1]]})").find("not symmetric") !=
        std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "metric": [[1, 2], [2, 1]]})")
            .find("not positive definite") != std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 17})").find("outside supported range") != std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 3, "brackets": [[1, 2, 3]]})").find("malformed") !=
        std::string::npos);
  CHECK(error_of("{not json").find("malformed") != std::string::npos);
  CHECK(error_of("[1, 2]").find("malformed") != std::string::npos);
  CHECK_THROWS_AS(load_algebra("/nonexistent/file.alg"), ParseError);
}

TEST_CASE("metric and hints are read") {
  const auto a = parse_algebra(
      R"({"name": "x", "dim": 2, "metric": [[2, 0.5], [0.5, 1]], "hints": {"lambda": -1}})");
  CHECK(a.metric(0, 1) == 0.5);
  REQUIRE(a.lambda_hint);
  CHECK(*a.lambda_hint == -1.0);
}

TEST_CASE("document round trip") {
  for (const auto& stem : catalog_names()) {
    const auto a = catalog(stem);
    const auto b = parse_algebra(to_document(a));
    CHECK(b.name == a.name);
    CHECK(b.dim == a.dim);
    CHECK(b.brackets == a.brackets);
    CHECK(b.metric == a.metric);
    CHECK(b.lambda_hint == a.lambda_hint);
  }
}

TEST_CASE("Jacobi diagnostics") {
  CHECK(validate_algebra(catalog("heisenberg3")).jacobi_residual == 0.0);
  CHECK(validate_algebra(catalog("su2")).ok);
  CHECK(jacobi_diagnostics(su2_tensor()).jacobi_residual == 0.0);

  // Flipping one sign of the so(3) brackets still gives a Lie algebra: every
  // cyclic sum reduces to a bracket of a vector with itself.
  const auto flipped =
      make_algebra("flipped", 3, {{1, 2, 3, 1.0}, {1, 3, 2, 1.0}, {2, 3, 1, 1.0}});
  CHECK(validate_algebra(flipped).jacobi_residual == 0.0);

  const auto broken = load_algebra(std::filesystem::path(SOLSTAB_TEST_DATA_DIR) / "broken_jacobi.alg");
  const auto d = validate_algebra(broken);
  CHECK_FALSE(d.ok);
  CHECK(d.jacobi_residual == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.worst_triple == std::array<int, 3>{1, 2, 3});
}

TEST_CASE("every catalog algebra satisfies Jacobi") {
  for (const auto& stem : catalog_names()) {
    CAPTURE(stem);
    CHECK(validate_algebra(catalog(stem)).jacobi_residual <= 1e-10);
  }
}

TEST_CASE("orthonormal frame") {
  SUBCASE("identity metric leaves constants bitwise unchanged") {
    for (const auto& stem : catalog_names()) {
      const auto a = catalog(stem);
      const auto f = orthonormal_frame(a);
      CHECK(f.c == structure_tensor(a));
      CHECK(f.basis_change == Matrix::Identity(a.dim, a.dim));
    }
  }
  SUBCASE("abelian with non-identity metric") {
    Matrix g = Matrix::Identity(3, 3);
    g(0, 0) = 4;
    CHECK(orthonormal_frame(make_algebra("r3", 3, {}, g)).c.max_abs() == 0.0);
  }
  SUBCASE("h3 with diag(t, 1, 1)") {
    for (double t : {0.25, 2.0, 9.0, 17.5}) {
      Matrix g = Matrix::Identity(3, 3);
      g(0, 0) = t;
      const auto f = orthonormal_frame(make_algebra("h3", 3, {{1, 2, 3, 1.0}}, g));
      CHECK(f.c(0, 1, 2) == doctest::Approx(1.0 / std::sqrt(t)).epsilon(1e-14));
      CHECK(f.c(1, 0, 2) == doctest::Approx(-1.0 / std::sqrt(t)).epsilon(1e-14));
      // Direct check: frame vectors are G-orthonormal.
      CHECK(max_norm(f.basis_change.transpose() * g * f.basis_change - Matrix::Identity(3, 3)) <= 1e-14);
    }
  }
  SUBCASE("Jacobi residual preserved under random metrics") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 3 + trial % 4;
      const Tensor3 c = random_abelian_extension(n, rng);
      std::vector<BracketEntry> br;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = 0; k < n; ++k)
            if (c(i, j, k) != 0.0) br.push_back({i + 1, j + 1, k + 1, c(i, j, k)});
      const Matrix p = random_symmetric(n, rng);
      const Matrix g = p * p.transpose() + Matrix::Identity(n, n);
      const auto f = orthonormal_frame(make_algebra("r", n, br, g));
      CHECK(jacobi_diagnostics(f.c).jacobi_residual <= 1e-10);
    }
  }
}

TEST_CASE("derivation spaces") {
  SUBCASE("abelian plane: every matrix") {
    const auto ders = derivation_basis(catalog("abelian2"));
    CHECK(ders.size() == 4);
  }
  SUBCASE("h3: dimension 6 containing diag(1, 1, 2)") {
    const auto ders = derivation_basis(heisenberg3_tensor());
    CHECK(ders.size() == 6);
    CHECK(derivation_dimension_oracle(heisenberg3_tensor()) == 6);
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 1, 1, 2;
    CHECK(span_residual(ders, d) <= 1e-12);
  }
  SUBCASE("su2: inner derivations only") {
    CHECK(derivation_basis(su2_tensor()).size() == 3);
    CHECK(derivation_dimension_oracle(su2_tensor()) == 3);
    for (int a = 0; a < 3; ++a)
      CHECK(span_residual(derivation_basis(su2_tensor()), ad_matrix(su2_tensor(), a)) <= 1e-12);
  }
  SUBCASE("catalog and random algebras match the elimination oracle") {
    std::vector<Tensor3> inputs;
    for (const auto& stem : catalog_names()) inputs.push_back(structure_tensor(catalog(stem)));
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) inputs.push_back(random_abelian_extension(2 + t % 4, rng));
    for (const auto& c : inputs) {
      const auto ders = derivation_basis(c);
      CHECK(static_cast<int>(ders.size()) == derivation_dimension_oracle(c));
      for (const auto& d : ders) CHECK(derivation_residual(c, d) <= 1e-10);
      // Der(g) is a Lie algebra.
      for (std::size_t i = 0; i < ders.size(); ++i)
        for (std::size_t j = i + 1; j < ders.size(); ++j) {
          const Matrix comm = ders[i] * ders[j] - ders[j] * ders[i];
          CHECK(span_residual(ders, comm) <= 1e-8);
        }
    }
  }
}

TEST_CASE("structure profile") {
  SUBCASE("h3") {
    const auto p = structure_profile(catalog("heisenberg3"));
    CHECK(p.step == 2);
    CHECK(p.nilpotent);
    CHECK(p.unimodular);
    CHECK(p.mean_curvature.norm() == 0.0);
    CHECK(p.killing.norm() == 0.0);
    CHECK(p.lower_central_dims == std::vector<int>{3, 1, 0});
  }
  SUBCASE("abelian") {
    for (const char* stem : {"abelian2", "abelian3", "abelian4"}) {
      const auto p = structure_profile(catalog(stem));
      CHECK(p.step == 1);
      CHECK(p.nilpotent);
      CHECK(p.mean_curvature.norm() == 0.0);
      CHECK(p.killing.norm() == 0.0);
    }
  }
  SUBCASE("h5 is two-step") { CHECK(structure_profile(catalog("heisenberg5")).step == 2); }
  SUBCASE("su2 is not nilpotent") {
    const auto p = structure_profile(su2_tensor());
    CHECK_FALSE(p.nilpotent);
    CHECK(p.step == 0);
    CHECK(p.unimodular);
    CHECK(max_norm(p.killing + 2.0 * Matrix::Identity(3, 3)) <= 1e-14);
  }
  SUBCASE("extension of h3") {
    const auto p = structure_profile(catalog("heisenberg3_ext"));
    CHECK_FALSE(p.nilpotent);
    CHECK_FALSE(p.unimodular);
    // H points along A with length tr ad A = alpha tr D = 2.
    Vector h(4);
    h << 0, 0, 0, 2;
    CHECK((p.mean_curvature - h).norm() <= 1e-14);
  }
  SUBCASE("nilpotent implies H = 0 and B = 0") {
    for (const auto& stem : catalog_names()) {
      const auto p = structure_profile(catalog(stem));
      if (!p.nilpotent) continue;
      CHECK(p.mean_curvature.norm() <= 1e-12);
      CHECK(max_norm(p.killing) <= 1e-12);
    }
  }
  SUBCASE("step is invariant under changes of basis") {
    std::mt19937_64 rng(3);
    // A 3-step filiform algebra: [e1,e2]=e3, [e1,e3]=e4.
    Tensor3 fil(4);
    fil(0, 1, 2) = 1;
    fil(1, 0, 2) = -1;
    fil(0, 2, 3) = 1;
    fil(2, 0, 3) = -1;
    for (const Tensor3& c : {heisenberg3_tensor(), fil, structure_tensor(catalog("heisenberg5"))}) {
      const int step = structure_profile(c).step;
      for (int t = 0; t < 5; ++t) {
        const int n = c.dim();
        const Matrix p = random_symmetric(n, rng) + 3.0 * Matrix::Identity(n, n);
        CHECK(structure_profile(transform_structure(c, p)).step == step);
        CHECK(structure_profile(transform_structure(c, random_orthogonal(n, rng))).step == step);
      }
    }
    CHECK(structure_profile(fil).step == 3);
  }
}

}  // TEST_SUITE
