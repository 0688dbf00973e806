#include <doctest.h>

#include <cmath>

#include "widthslab/classes.hpp"
#include "widthslab/entropy.hpp"
#include "widthslab/geometry.hpp"
#include "widthslab/kernels.hpp"

using namespace widthslab;

namespace {

Matrix mat(const std::vector<Vec>& rows) {
  Matrix M(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  return M;
}

FunctionClass diag_segment() {
  return FunctionClass("seg", VPolytope{mat({{-1, -1}, {1, 1}})}, true);
}

double min_pairwise(const std::vector<Vec>& pts) {
  double best = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, kernels::linf_dist(pts[i].data(), pts[j].data(),
                                               pts[i].size()));
  return best;
}

}  // namespace

TEST_CASE("packings pick far apart members") {
  const FunctionClass cube = lp_ball(2, INFINITY);
  const SeparatedFamily two = greedy_packing(cube, 2, 1);
  CHECK(two.separation == doctest::Approx(2.0));  // opposite corners

  const SeparatedFamily seg2 = greedy_packing(diag_segment(), 2, 1);
  CHECK(seg2.separation == doctest::Approx(2.0));  // the endpoints

  const FunctionClass l1 = lp_ball(2, 1.0);
  const SeparatedFamily three = greedy_packing(l1, 3, 1);
  CHECK(three.separation >= 1.0 - 1e-9);
  CHECK(three.separation <= 2.0 + 1e-12);

  CHECK_THROWS_AS(greedy_packing(cube, 1, 1), ParameterError);
}

TEST_CASE("packing points are class members with the reported separation") {
  for (FunctionClass F :
       {lp_ball(3, 1.0), lp_ball(2, INFINITY), random_vpolytope(3, 6, 1.0, 7),
        sobolev_ball(4, 1, 2.0)}) {
    const SeparatedFamily fam = greedy_packing(F, 5, 3);
    REQUIRE(fam.points.size() == 5);
    for (const Vec& v : fam.points) CHECK(member(F, v, fam.membership_tol));
    CHECK(fam.separation == doctest::Approx(min_pairwise(fam.points)));
  }
}

TEST_CASE("exchange refinement never hurts") {
  const FunctionClass F = random_vpolytope(4, 10, 1.0, 21, true);
  const double raw = greedy_packing(F, 6, 9, 0).separation;
  const double refined = greedy_packing(F, 6, 9, 200).separation;
  CHECK(refined >= raw - 1e-12);
}

TEST_CASE("offered candidates join the pool") {
  const FunctionClass cube = lp_ball(2, INFINITY);
  const std::vector<Vec> corners = {{1.0, 1.0}, {-1.0, -1.0}};
  const SeparatedFamily fam = greedy_packing(cube, 2, 1, 0, corners);
  CHECK(fam.separation == doctest::Approx(2.0));
  // off-class offers are dropped, not packed
  const std::vector<Vec> outside = {{3.0, 3.0}};
  const SeparatedFamily fam2 = greedy_packing(cube, 2, 1, 0, outside);
  for (const Vec& v : fam2.points)
    CHECK(member(cube, v, fam2.membership_tol));
}

TEST_CASE("weight grid covers are certified") {
  const FunctionClass seg = diag_segment();
  // one center cannot do better than the radius plus the grid slack
  const CoveringCertificate c0 = net_cover_upper(seg, 0, 0.1);
  CHECK(c0.centers.size() == 1);
  CHECK(c0.radius >= 1.0 - 1e-9);
  CHECK(c0.radius <= 1.0 + c0.net_mesh + 1e-9);

  const CoveringCertificate c1 = net_cover_upper(seg, 1, 0.1);
  CHECK(c1.centers.size() <= 2);
  CHECK(c1.radius <= 0.5 + 0.1 + 1e-9);
  CHECK(c1.radius >= 0.5 - 1e-9);

  // enough centers for every net point: the certificate collapses to the mesh
  const CoveringCertificate all = net_cover_upper(seg, 2, 0.5);
  CHECK(all.net_size == 3);
  CHECK(all.radius == doctest::Approx(all.net_mesh));

  const FunctionClass cube = lp_ball(2, INFINITY);
  const CoveringCertificate q = net_cover_upper(cube, 2, 0.25);
  CHECK(q.radius <= 0.5 + 0.25 + 1e-6);

  CHECK_THROWS_AS(
      net_cover_upper(sobolev_ball(4, 1, 2.0), 1, 0.1),
      UnsupportedClassError);
}

TEST_CASE("the enclosure is a certified sandwich") {
  // explicit meshes keep the nets small; the slack is priced into hi
  const std::pair<FunctionClass, double> cases[] = {
      {lp_ball(2, INFINITY), 0.25},
      {lp_ball(3, 1.0), 0.25},
      {random_vpolytope(3, 7, 2.0, 13, true), 1.0},
  };
  for (const auto& [F, mesh] : cases) {
    for (int n : {0, 1, 3}) {
      EntropyOptions eo;
      eo.mesh = mesh;
      const CertifiedInterval e = entropy_interval(F, n, eo);
      CHECK(e.lo >= 0.0);
      CHECK(e.lo <= e.hi + 1e-9);
      CHECK(e.hi_method.rfind("net-kcenter", 0) == 0);
    }
  }
}

TEST_CASE("enclosures shrink with more centers") {
  const FunctionClass cube = lp_ball(2, INFINITY);
  const CertifiedInterval e0 = entropy_interval(cube, 0);
  const CertifiedInterval e3 = entropy_interval(cube, 3);
  CHECK(e0.lo == doctest::Approx(1.0));  // two opposite corners
  CHECK(e3.hi <= e0.hi + 1e-9);
  CHECK(e3.lo <= e0.lo + 1e-9);
}

TEST_CASE("classes without a vertex list fall back to the box bound") {
  const FunctionClass F = sobolev_ball(5, 1, 2.0);
  const CertifiedInterval e = entropy_interval(F, 2);
  CHECK(e.hi_method.rfind("bbox-center", 0) == 0);
  CHECK(e.lo <= e.hi + 1e-9);
  CHECK(e.hi <= F.radius() + 1e-9);
}

TEST_CASE("budget guards") {
  const FunctionClass cube = lp_ball(2, INFINITY);
  CHECK_THROWS_AS(entropy_interval(cube, 17), BudgetError);
  CHECK_THROWS_AS(net_cover_upper(cube, 1, 1e-9), BudgetError);
}

TEST_CASE("grid restricted exact covering") {
  const FunctionClass seg = diag_segment();
  std::vector<Vec> grid;
  for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0}) grid.push_back({a, a});

  const double v1 = exact_small_entropy(seg, 1, grid, 0.1);
  CHECK(v1 == doctest::Approx(0.6));  // centers at +-0.5 plus mesh slack
  const double v0 = exact_small_entropy(seg, 0, grid, 0.1);
  CHECK(v0 == doctest::Approx(1.1));

  // the exact value respects the certified sandwich
  EntropyOptions eo;
  eo.mesh = 0.1;
  const CertifiedInterval e = entropy_interval(seg, 1, eo);
  CHECK(e.lo <= v1 + 1e-9);

  CHECK_THROWS_AS(exact_small_entropy(seg, 4, grid, 0.1), ParameterError);
  std::vector<Vec> big(21, Vec{0.0, 0.0});
  CHECK_THROWS_AS(exact_small_entropy(seg, 1, big, 0.1), ParameterError);
}
