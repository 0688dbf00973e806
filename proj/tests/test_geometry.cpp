#include <doctest.h>

#include <cmath>
#include <vector>

#include "widthslab/classes.hpp"
#include "widthslab/geometry.hpp"

using namespace widthslab;

namespace {

Matrix mat(const std::vector<Vec>& rows) {
  Matrix M(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  return M;
}

Matrix diag(const Vec& d) {
  Matrix M(d.size(), d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) M(i, i) = d[i];
  return M;
}

FunctionClass square() {
  return FunctionClass(
      "square",
      VPolytope{mat({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}})}, true);
}

}  // namespace

TEST_CASE("vertex hull support and membership") {
  const FunctionClass F = square();
  CHECK(support(F, {1.0, 0.0}).value == doctest::Approx(1.0));
  CHECK(support(F, {1.0, 1.0}).value == doctest::Approx(2.0));
  const auto s = support(F, {0.0, -1.0});
  CHECK(s.maximizer[1] == doctest::Approx(-1.0));

  CHECK(member(F, {0.5, 0.5}, 1e-9));
  CHECK(member(F, {1.0, 1.0}, 1e-9));
  CHECK(!member(F, {1.1, 0.0}, 1e-6));
  CHECK(member_violation(F, {0.0, 0.0}) <= 0.0);
  CHECK(member_violation(F, {2.0, 0.0}) > 0.5);
}

TEST_CASE("halfspace body matches its vertex description") {
  Matrix rows(4, 2, 0.0);
  rows(0, 0) = 1.0;
  rows(1, 0) = -1.0;
  rows(2, 1) = 1.0;
  rows(3, 1) = -1.0;
  const FunctionClass H("hcube", HPolytope{rows, {1, 1, 1, 1}, 0}, true);
  const FunctionClass V = square();
  for (const Vec& w : {Vec{1, 0}, Vec{0, 1}, Vec{1, 1}, Vec{-2, 3}}) {
    CHECK(support(H, w).value == doctest::Approx(support(V, w).value));
  }
  CHECK(member(H, {0.9, -0.9}, 1e-9));
  CHECK(!member(H, {0.0, 1.5}, 1e-6));
}

TEST_CASE("ellipsoid support is the mapped euclidean norm") {
  const FunctionClass E("disc", Ellipsoid{{0.0, 0.0}, diag({1.0, 1.0})}, true);
  CHECK(support(E, {1.0, 0.0}).value == doctest::Approx(1.0));
  CHECK(support(E, {3.0, 4.0}).value == doctest::Approx(5.0));
  CHECK(member(E, {0.6, 0.8}, 1e-9));
  CHECK(!member(E, {0.8, 0.8}, 1e-6));

  const FunctionClass S("shifted",
                        Ellipsoid{{1.0, 0.0}, diag({2.0, 1.0})}, false);
  CHECK(support(S, {1.0, 0.0}).value == doctest::Approx(3.0));
  CHECK(support(S, {-1.0, 0.0}).value == doctest::Approx(1.0));
}

TEST_CASE("sub-1 exponent ball membership and spikes") {
  const FunctionClass B("half", PBall{diag({1.0, 2.0}), 0.5}, true);
  CHECK(member(B, {0.0, 2.0}, 1e-9));   // full spike on the big axis
  CHECK(member(B, {1.0, 0.0}, 1e-9));
  CHECK(!member(B, {0.5, 1.9}, 1e-6));  // mixing coordinates is expensive
  CHECK(member_violation(B, {0.25, 0.5}) <= 0.0);
  // support still sees the spikes
  CHECK(support(B, {0.0, 1.0}).value == doctest::Approx(2.0));
  CHECK(support(B, {1.0, 1.0}).value == doctest::Approx(2.0));
}

TEST_CASE("section oracle pins coordinates") {
  const FunctionClass F = square();
  SectionOracle sec(F, SampleDesign({0}), {0.5});
  REQUIRE(sec.feasible());
  const auto [lo, hi] = sec.extrema(1);
  CHECK(lo == doctest::Approx(-1.0));
  CHECK(hi == doctest::Approx(1.0));
  const Vec top = sec.extremal_point(1, true);
  CHECK(top[0] == doctest::Approx(0.5));
  CHECK(top[1] == doctest::Approx(1.0));

  SectionOracle empty(F, SampleDesign({0}), {5.0});
  CHECK(!empty.feasible());

  FeasibleSection fs(F, SampleDesign({1}), {-0.25});
  CHECK(fs.feasible());
}

TEST_CASE("pair diameter shrinks as the design grows") {
  const FunctionClass F = square();
  CHECK(pair_diameter(F, SampleDesign()) == doctest::Approx(2.0));
  CHECK(pair_diameter(F, SampleDesign({0})) == doctest::Approx(2.0));
  CHECK(pair_diameter(F, SampleDesign({0, 1})) == doctest::Approx(0.0));

  const auto w = pair_diameter_witness(F, SampleDesign({0}));
  CHECK(w.gap == doctest::Approx(2.0));
  CHECK(w.coord == 1);
  CHECK(std::abs(w.f[1] - w.g[1]) == doctest::Approx(2.0));
  // both witnesses agree on the design
  CHECK(w.f[0] == doctest::Approx(w.g[0]).epsilon(1e-7));
}

TEST_CASE("symmetric zero section equals the two-copy program") {
  // asymmetric-looking but centrally symmetric hull
  const FunctionClass F(
      "sym", VPolytope{mat({{2, 1}, {-1, 1}, {-2, -1}, {1, -1}})}, true);
  const FunctionClass G(
      "nosym", VPolytope{mat({{2, 1}, {-1, 1}, {-2, -1}, {1, -1}})}, false);
  for (const SampleDesign& d :
       {SampleDesign(), SampleDesign({0}), SampleDesign({1})}) {
    CHECK(pair_diameter(F, d) == doctest::Approx(pair_diameter(G, d)));
  }
}

TEST_CASE("class validation catches a false symmetry flag") {
  const FunctionClass good = square();
  CHECK_NOTHROW(validate_class(good));

  const FunctionClass bad(
      "skew", VPolytope{mat({{1, 0}, {0, 1}, {-1, -0.2}})}, true);
  CHECK_THROWS_AS(validate_class(bad), Error);
}

TEST_CASE("sampler output stays inside the class") {
  for (FunctionClass F :
       {square(),
        FunctionClass("disc", Ellipsoid{{0.0, 0.0}, diag({1.0, 1.0})}, true),
        FunctionClass("half", PBall{diag({1.0, 2.0}), 0.5}, true)}) {
    PointSampler sampler(F, 42);
    for (int i = 0; i < 64; ++i) {
      const Vec v = sampler.draw();
      CHECK(member(F, v, 1e-6 * std::max(1.0, F.radius())));
    }
    for (const Vec& v : sampler.extreme_points()) {
      CHECK(member(F, v, 1e-6 * std::max(1.0, F.radius())));
    }
  }
}
