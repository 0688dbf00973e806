#include "widthslab/crosscheck.hpp"

#include <algorithm>

#include "widthslab/lp_exact.hpp"

namespace widthslab {

double pair_diameter_rational(const FunctionClass& F, const SampleDesign& d) {
  const VPolytope* vv = F.vertex_view();
  if (!vv)
    throw ParameterError(
        "the rational cross-check needs a vertex description");
  const std::size_t m = F.dim();
  const std::size_t k = vv->vertices.rows();
  if (m > 8 || k > 16)
    throw ParameterError(
        "the rational cross-check stops at dim 8 and 16 vertices");
  d.validate(m);
  const Matrix& V = vv->vertices;

  // Two hull members, equal on the design; vars are the two weight vectors.
  lp::Problem prob(0);
  for (std::size_t i = 0; i < 2 * k; ++i) prob.add_var(false);
  Vec ones_a(2 * k, 0.0), ones_b(2 * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    ones_a[i] = 1.0;
    ones_b[k + i] = 1.0;
  }
  prob.add_row(lp::Sense::eq, std::move(ones_a), 1.0);
  prob.add_row(lp::Sense::eq, std::move(ones_b), 1.0);
  for (int x : d.indices) {
    Vec row(2 * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      row[i] = V(i, x);
      row[k + i] = -V(i, x);
    }
    prob.add_row(lp::Sense::eq, std::move(row), 0.0);
  }

  lp::Simplex<lp::Rational> spx(prob);
  if (spx.ensure_feasible() != lp::Status::optimal)
    throw SolverError("agreement program infeasible in exact arithmetic");
  lp::Rational best = 0;
  for (std::size_t x = 0; x < m; ++x) {
    if (d.contains(static_cast<int>(x))) continue;
    for (double sign : {1.0, -1.0}) {
      Vec obj(2 * k, 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        obj[i] = sign * V(i, x);
        obj[k + i] = -sign * V(i, x);
      }
      auto res = spx.maximize(obj);
      if (res.status != lp::Status::optimal)
        throw SolverError("agreement program did not solve exactly");
      best = std::max(best, res.value);
    }
  }
  return lp::rational_to_double(best);
}

}  // namespace widthslab
