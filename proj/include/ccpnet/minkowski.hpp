#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ccpnet/errors.hpp"
#include "ccpnet/threads.hpp"

namespace ccpnet::minkowski {

// Spacetime point (t, x1[, x2, x3]) with signature (+, -, ..., -).
struct Event {
  std::vector<double> coords;

  Event() = default;
  Event(std::initializer_list<double> c) : coords(c) {}
  explicit Event(std::vector<double> c) : coords(std::move(c)) {}

  double t() const { return coords[0]; }
  int spatial_dim() const { return static_cast<int>(coords.size()) - 1; }
};

double interval(const Event& x, const Event& y);

enum class CausalRelation {
  TimelikeFuture,   // x strictly inside the forward cone of y
  TimelikePast,
  LightlikeFuture,  // on the cone, within tolerance
  LightlikePast,
  Spacelike
};

// Classifies x relative to y. Lightlike uses |interval| <= tol * scale^2 with
// scale the larger coordinate magnitude.
CausalRelation causal_relation(const Event& x, const Event& y, double tol_geo = 1e-12);

bool is_timelike(CausalRelation r);
bool is_lightlike(CausalRelation r);

// Proper orthochronous Poincare map x -> lambda * x + shift.
struct PoincareMap {
  Eigen::MatrixXd lambda;
  Eigen::VectorXd shift;

  static PoincareMap identity(int spatial_dim);
  Event apply(const Event& e) const;
  Event apply_inverse(const Event& e) const;
  void validate(double tol = 1e-9) const;
};

enum class RegionKind {
  DoubleCone,
  Wedge,
  PastCone,
  FutureCone,
  TimeSlab,
  Empty,
  Full,
  Union,
  Intersection,
  Difference,
  Blc,
  Complement,
  Completion
};

class Region;
using RegionPtr = std::shared_ptr<const Region>;

// Symbolic region expression with analytic membership. All regions are open;
// boundary points resolve to outside.
class Region {
 public:
  RegionKind kind = RegionKind::Empty;
  int dim = 1;  // spatial dimension

  Event a, b;                      // DoubleCone bottom/top; PastCone/FutureCone apex in a
  bool right = true;               // Wedge handedness
  std::optional<PoincareMap> map;  // Wedge placement (identity when absent)
  double t_lo = 0.0, t_hi = 0.0;   // TimeSlab
  RegionPtr lhs, rhs;              // combinators
};

RegionPtr double_cone(const Event& bottom, const Event& top, double tol_geo = 1e-12);
RegionPtr wedge(bool right, int spatial_dim);
RegionPtr wedge(bool right, const PoincareMap& map);
RegionPtr past_cone(const Event& apex);
RegionPtr future_cone(const Event& apex);
RegionPtr time_slab(double t_lo, double t_hi, int spatial_dim);
RegionPtr empty_region(int spatial_dim);
RegionPtr full_region(int spatial_dim);
RegionPtr region_union(RegionPtr l, RegionPtr r);
RegionPtr region_intersection(RegionPtr l, RegionPtr r);
RegionPtr region_difference(RegionPtr l, RegionPtr r);
RegionPtr blc(RegionPtr v);                 // union of backward light cones over v
RegionPtr causal_complement(RegionPtr v);   // v'
RegionPtr causal_completion(RegionPtr v);   // v''

bool contains(const RegionPtr& region, const Event& x, double tol_geo = 1e-12);

// Past regions of a spacelike separated pair.
RegionPtr wpast(const RegionPtr& v1, const RegionPtr& v2);
RegionPtr cpast(const RegionPtr& v1, const RegionPtr& v2);
RegionPtr spast(const RegionPtr& v1, const RegionPtr& v2);

struct Box {
  Event lo, hi;
};

// Axis-aligned bounding box; only bounded expressions support one.
Box bounding_box(const RegionPtr& region);

struct EmptinessVerdict {
  bool empty = true;
  long samples = 0;
  std::optional<Event> witness;  // lowest-index hit, deterministic
};

EmptinessVerdict is_empty_sampled(const RegionPtr& region, const Box& box, long n, uint64_t seed,
                                  Exec exec = Exec::Parallel, double tol_geo = 1e-12);

struct SeparationVerdict {
  bool spacelike = false;
  long pairs = 0;
  std::optional<std::pair<Event, Event>> counterexample;
};

// Samples n points in each region (rejection from the bounding boxes) and
// checks every cross pair for a causal relation.
SeparationVerdict spacelike_separated(const RegionPtr& v1, const RegionPtr& v2, long n,
                                      uint64_t seed, Exec exec = Exec::Parallel,
                                      double tol_geo = 1e-12);

// Exact decision for two double cones in 1+1 via null coordinates.
bool spacelike_separated_cones(const RegionPtr& v1, const RegionPtr& v2, double tol_geo = 1e-12);

// Thin slab under two double cones whose causal completion covers both.
// Carries the exact 1+1 cross-section data used for coverage arithmetic.
struct LocalizationSlab {
  RegionPtr expr;        // (BLC(V1) u BLC(V2)) n {t0 < t < t0 + eps}
  double t0 = 0.0;
  double eps = 0.0;

  struct Span {
    double lo = 0.0, hi = 0.0;
  };
  Span branch1, branch2;             // per-cone shadows at t0
  std::vector<Span> merged;          // connected components of the cross-section

  // Membership in the causal completion: union of diamonds over the merged
  // components, anchored at t0.
  bool completion_contains(const Event& e, double tol_geo = 1e-12) const;
};

LocalizationSlab localization_region(const RegionPtr& v1, const RegionPtr& v2,
                                     double tol_geo = 1e-12);

// The two single-branch refinements of the slab: (BLC(Vi) n W) minus the
// overlap of the two backward shadows.
std::pair<RegionPtr, RegionPtr> refinement_regions(const RegionPtr& v1, const RegionPtr& v2,
                                                   const LocalizationSlab& w);

}  // namespace ccpnet::minkowski
