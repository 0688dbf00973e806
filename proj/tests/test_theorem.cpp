#include <doctest.h>

#include <cmath>

#include "widthslab/classes.hpp"
#include "widthslab/geometry.hpp"
#include "widthslab/theorem.hpp"

using namespace widthslab;

namespace {

Matrix mat(const std::vector<Vec>& rows) {
  Matrix M(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  return M;
}

}  // namespace

TEST_CASE("transcript on the square") {
  const FunctionClass cube = lp_ball(2, INFINITY);
  const Transcript t = build_transcript(cube, 1);
  REQUIRE(t.steps.size() == 2);
  CHECK(!t.vacuous);
  CHECK(t.p == doctest::Approx(1.0));
  CHECK(t.rho == doctest::Approx(2.0));
  CHECK(t.nodes == std::vector<int>{0, 1});  // argmax ties go low
  CHECK(t.steps[0].design.size() == 0);
  CHECK(t.steps[1].design.indices == std::vector<int>{0});
  CHECK(t.steps[0].gap == doctest::Approx(2.0));
  CHECK(t.steps[1].gap == doctest::Approx(2.0));
  // each step's pair really agrees on its design
  const TranscriptStep& s1 = t.steps[1];
  CHECK(std::abs(s1.f[0] - s1.g[0]) <= 1e-7);
  CHECK(std::abs(s1.f[1] - s1.g[1]) == doctest::Approx(2.0));
}

TEST_CASE("transcript goes vacuous when samples pin the class") {
  const FunctionClass seg("seg", VPolytope{mat({{-1, -1}, {1, 1}})}, true);
  const Transcript t = build_transcript(seg, 1);
  CHECK(t.vacuous);
  CHECK(t.steps[0].gap == doctest::Approx(2.0));
  CHECK(t.steps[1].gap <= 1e-9);

  // the vacuous branch still verifies (trivially)
  const SeparatedFamily fam = build_separated_family(seg, t);
  const SeparationReport rep = verify_separation(t, fam);
  CHECK(rep.vacuous);
  CHECK(rep.pass);
}

TEST_CASE("blend family separation on the square") {
  const FunctionClass cube = lp_ball(2, INFINITY);
  const Transcript t = build_transcript(cube, 1);
  const SeparatedFamily fam = build_separated_family(cube, t);
  REQUIRE(fam.points.size() == 4);
  for (const Vec& v : fam.points) CHECK(member(cube, v, 1e-7));

  const SeparationReport rep = verify_separation(t, fam);
  CHECK(rep.pass);
  CHECK(!rep.vacuous);
  CHECK(rep.telescope_error <= 1e-8);
  CHECK(rep.agreement_error <= 1e-8);
  CHECK(rep.required == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.min_separation >= rep.required - 1e-8);
  CHECK(fam.separation == doctest::Approx(rep.min_separation));
}

TEST_CASE("sub-1 exponents blend with the heavier denominator") {
  const FunctionClass half = lp_ball(2, 0.5);
  const Transcript t = build_transcript(half, 1);
  CHECK(t.p == doctest::Approx(0.5));
  CHECK(t.rho == doctest::Approx(2.0));

  const SeparatedFamily fam = build_separated_family(half, t);
  REQUIRE(fam.points.size() == 4);
  // scale (n+1)^(-1/p) = 1/4: blended spikes sit exactly on the boundary
  for (const Vec& v : fam.points) {
    CHECK(member(half, v, 1e-7));
    CHECK(std::abs(v[0]) == doctest::Approx(0.25));
    CHECK(std::abs(v[1]) == doctest::Approx(0.25));
  }
  const SeparationReport rep = verify_separation(t, fam);
  CHECK(rep.pass);
  CHECK(rep.required == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.min_separation == doctest::Approx(0.5));
}

TEST_CASE("family construction guards its exponent") {
  const FunctionClass half = lp_ball(2, 0.5);
  const Transcript t = build_transcript(half, 1);
  FunctionClass lied = half;
  lied.override_convex(true);  // pexp flips to 1, transcript carries 1/2
  CHECK_THROWS_AS(build_separated_family(lied, t), ParameterError);

  CHECK_THROWS_AS(build_transcript(half, 2), ParameterError);   // n+1 > dim
  CHECK_THROWS_AS(build_transcript(half, 1, 0.0), ParameterError);
}

TEST_CASE("transcript designs nest and gaps never grow busted") {
  const FunctionClass F = random_vpolytope(4, 8, 1.0, 17, true);
  const Transcript t = build_transcript(F, 2);
  REQUIRE(t.steps.size() == 3);
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    CHECK(t.steps[k].design.size() == k);
    for (std::size_t j = 0; j < k; ++j)
      CHECK(t.steps[k].design.contains(t.nodes[j]));
    // the step gap is a pair diameter over a superset design, so it cannot
    // exceed the information diameter of the final design's size
    CHECK(t.steps[k].gap >= t.rho - 1e-12);
  }
  const SeparatedFamily fam = build_separated_family(F, t);
  CHECK(verify_separation(t, fam).pass);
}

TEST_CASE("end to end verification passes on stock classes") {
  VerifyOptions vo;
  vo.mesh = 0.25;
  for (FunctionClass F : {lp_ball(2, INFINITY), lp_ball(3, 1.0)}) {
    for (int n : {0, 1}) {
      const TheoremReport rep = verify_main_inequality(F, n, vo);
      CHECK(rep.pass);
      CHECK(rep.membership_ok);
      CHECK(rep.separation.pass);
      CHECK(rep.upper_ok);
      CHECK(rep.lower_ok);
      CHECK(rep.sampling == doctest::Approx(rep.info_diameter.value / 2));
    }
  }

  VerifyOptions va;  // auto mesh, quasinorm class
  const TheoremReport rep = verify_main_inequality(lp_ball(3, 0.5), 1, va);
  CHECK(rep.pass);
  CHECK(rep.p == doctest::Approx(0.5));

  const TheoremReport vac = verify_main_inequality(
      FunctionClass("seg", VPolytope{mat({{-1, -1}, {1, 1}})}, true), 1, va);
  CHECK(vac.transcript.vacuous);
  CHECK(vac.pass);
}

TEST_CASE("a class description that lies about convexity is caught") {
  FunctionClass lied = lp_ball(3, 0.5);
  lied.override_convex(true);
  const TheoremReport rep = verify_main_inequality(lied, 1);
  CHECK(!rep.pass);
  CHECK(!rep.membership_ok);          // the blends leave the true ball
  CHECK(rep.membership_violation > 0.1);
  CHECK(rep.separation.pass);         // the failure is membership alone
}

TEST_CASE("greedy mode still bounds soundly") {
  const FunctionClass F = random_vpolytope(5, 10, 1.0, 23, true);
  VerifyOptions exact_opts;
  exact_opts.mesh = 2.0;
  VerifyOptions greedy_opts = exact_opts;
  greedy_opts.heuristic = true;

  const TheoremReport re = verify_main_inequality(F, 1, exact_opts);
  const TheoremReport rg = verify_main_inequality(F, 1, greedy_opts);
  CHECK(re.pass);
  CHECK(rg.pass);
  // the greedy design is one of the candidates the exact search minimized over
  CHECK(rg.info_diameter.value >= re.info_diameter.value - 1e-9);
}
