#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "widthslab/common.hpp"
#include "widthslab/lp.hpp"

// Finitely discretized function classes over a grid of m points, compared in
// the sup norm. A class is one of four bodies: vertex hull, halfspace
// intersection (optionally with lifted auxiliary variables), ellipsoid, or an
// invertible image of a p-quasinorm ball (0 < p <= 1).

namespace widthslab {

/// Grid labels; classes themselves live on coordinates indexed 0..m-1.
struct Domain {
  Vec points;

  static Domain unit_interval(std::size_t m);
  std::size_t size() const { return points.size(); }
  double spacing() const;  // uniform spacing; m == 1 gives 1
};

/// Strictly ascending, distinct grid indices.
struct SampleDesign {
  std::vector<int> indices;

  SampleDesign() = default;
  explicit SampleDesign(std::vector<int> idx);

  std::size_t size() const { return indices.size(); }
  bool contains(int i) const;
  SampleDesign with(int i) const;
  void validate(std::size_t m) const;
  std::string joined() const;  // "0;2;5", empty for the empty design
};

struct VPolytope {
  Matrix vertices;  // k x m, one vertex per row
};

/// rows * (f; a) <= bounds where a are `aux` lifted variables appended after
/// the m function coordinates. The class is the projection onto f.
struct HPolytope {
  Matrix rows;  // r x (m + aux)
  Vec bounds;
  int aux = 0;
};

/// { center + map * u : |u|_2 <= 1 }, map invertible.
struct Ellipsoid {
  Vec center;
  Matrix map;  // m x m
};

/// { map * u : |u|_p <= 1 }, map invertible, 0 < p <= 1. Convex only at p=1.
struct PBall {
  Matrix map;  // m x m
  double p = 1.0;
};

class FunctionClass {
 public:
  using Body = std::variant<VPolytope, HPolytope, Ellipsoid, PBall>;

  FunctionClass(std::string id, Body body, bool symmetric);

  const std::string& id() const { return id_; }
  std::size_t dim() const { return dim_; }
  bool symmetric() const { return symmetric_; }

  bool convex() const;
  /// Triangle-inequality exponent used by the construction: 1 when convex,
  /// the ball exponent otherwise.
  double pexp() const { return convex() ? 1.0 : pball_p_; }

  /// Fixture hook: claim convexity regardless of representation. Downstream
  /// checks will then test that claim against actual membership.
  void override_convex(bool c) { convex_override_ = c; }
  bool convexity_overridden() const { return convex_override_.has_value(); }

  double radius() const { return radius_; }
  /// LP feasibility tolerance scaled by the class magnitude.
  double feas_tol() const;

  const Body& body() const { return *body_; }
  const VPolytope* vertex_view() const;  // also covers PBall p=1; else null
  const Matrix* inverse_map() const;     // Ellipsoid / PBall only

 private:
  std::string id_;
  std::shared_ptr<const Body> body_;
  std::size_t dim_ = 0;
  bool symmetric_ = false;
  std::optional<bool> convex_override_;
  double pball_p_ = 1.0;
  double radius_ = 0.0;
  std::shared_ptr<const Matrix> inverse_;          // cached for map bodies
  std::shared_ptr<const VPolytope> vertex_cache_;  // cached for PBall p=1
};

double sup_norm(const Vec& v);

/// True when every off-diagonal entry is negligible next to the largest
/// entry of the matrix.
bool effectively_diagonal(const Matrix& M);

struct SupportResult {
  double value = 0.0;
  Vec maximizer;
};

/// sup of <w, f> over the class, with a maximizer.
SupportResult support(const FunctionClass& F, const Vec& w);

/// How far v is from satisfying the membership description (<= 0 inside).
double member_violation(const FunctionClass& F, const Vec& v);

bool member(const FunctionClass& F, const Vec& v, double tol);

/// The section { f in F : f(x_j) = y_j } behind one feasibility run; extrema
/// re-solve from the previous basis. Returns an emptiness signal via
/// feasible(), callers branch rather than catch.
class SectionOracle {
 public:
  SectionOracle(const FunctionClass& F, const SampleDesign& d, Vec y);
  ~SectionOracle();
  SectionOracle(SectionOracle&&) noexcept;

  bool feasible();
  std::pair<double, double> extrema(int coord);
  Vec extremal_point(int coord, bool maximize);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct FeasibleSection {
  FeasibleSection(const FunctionClass& F, SampleDesign d, Vec y);
  const FunctionClass* cls;
  SampleDesign design;
  Vec values;
  bool feasible() const { return feasible_; }
  SectionOracle& oracle() { return *oracle_; }

 private:
  bool feasible_;
  std::shared_ptr<SectionOracle> oracle_;
};

struct PairWitness {
  double gap = 0.0;
  int coord = 0;
  Vec f, g;
};

/// sup |f - g|_inf over pairs in F agreeing on the design. Symmetric classes
/// use the half-difference identity (one class copy); asymmetric convex ones
/// solve the two-copy program. Rejects p < 1 balls.
double pair_diameter(const FunctionClass& F, const SampleDesign& d);
PairWitness pair_diameter_witness(const FunctionClass& F,
                                  const SampleDesign& d);

/// Boundedness via axis support calls plus spot checks of the symmetry flag.
/// Throws on violation.
void validate_class(const FunctionClass& F);

/// Seeded point generator used by packings and probes. Vertex hulls mix
/// Dirichlet weights and edge blends; halfspace bodies run hit-and-run from
/// an inscribed-ball center; ball images sample their spheres directly.
class PointSampler {
 public:
  PointSampler(const FunctionClass& F, std::uint64_t seed);
  ~PointSampler();
  PointSampler(PointSampler&&) noexcept;

  Vec draw();
  /// Deterministic seed points: vertices (capped) and axis extremizers.
  const std::vector<Vec>& extreme_points();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace widthslab
