#include "ccpnet/minkowski.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "ccpnet/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccpnet::minkowski {

namespace {

void require_same_dim(const Event& x, const Event& y) {
  if (x.coords.size() != y.coords.size())
    throw DimensionMismatch("events live in different dimensions");
}

double coord_scale(const Event& x, const Event& y) {
  double s = 1.0;
  for (double c : x.coords) s = std::max(s, std::abs(c));
  for (double c : y.coords) s = std::max(s, std::abs(c));
  return s;
}

// Strict cone membership with the boundary resolved to "outside".
bool strictly_timelike_future(const Event& x, const Event& apex, double tol) {
  if (x.t() <= apex.t()) return false;
  const double s = coord_scale(x, apex);
  return interval(x, apex) > tol * s * s;
}

bool strictly_timelike_past(const Event& x, const Event& apex, double tol) {
  if (x.t() >= apex.t()) return false;
  const double s = coord_scale(x, apex);
  return interval(x, apex) > tol * s * s;
}

bool strictly_spacelike(const Event& x, const Event& y, double tol) {
  const double s = coord_scale(x, y);
  return interval(x, y) < -tol * s * s;
}

Event base_coords(const Region& wedge_region, const Event& x) {
  if (wedge_region.map) return wedge_region.map->apply_inverse(x);
  return x;
}

bool wedge_base_contains(const Event& y, bool right, double tol) {
  const double s = std::max({1.0, std::abs(y.t()), std::abs(y.coords[1])});
  const double signed_x = right ? y.coords[1] : -y.coords[1];
  return signed_x > std::abs(y.t()) + tol * s;
}

// BLC of the base right wedge is the open half-space below the left-moving
// null plane through the edge: {x1 > x0}. The left wedge reflects it.
bool wedge_blc_contains(const Event& y, bool right, double tol) {
  const double s = std::max({1.0, std::abs(y.t()), std::abs(y.coords[1])});
  const double signed_x = right ? y.coords[1] : -y.coords[1];
  return signed_x - y.t() > tol * s;
}

RegionPtr make_node(Region r) { return std::make_shared<const Region>(std::move(r)); }

}  // namespace

double interval(const Event& x, const Event& y) {
  require_same_dim(x, y);
  const double dt = x.t() - y.t();
  double spatial = 0.0;
  for (size_t i = 1; i < x.coords.size(); ++i) {
    const double d = x.coords[i] - y.coords[i];
    spatial += d * d;
  }
  return dt * dt - spatial;
}

CausalRelation causal_relation(const Event& x, const Event& y, double tol_geo) {
  const double i = interval(x, y);
  const double s = coord_scale(x, y);
  const bool future = x.t() >= y.t();
  if (std::abs(i) <= tol_geo * s * s)
    return future ? CausalRelation::LightlikeFuture : CausalRelation::LightlikePast;
  if (i > 0.0) return future ? CausalRelation::TimelikeFuture : CausalRelation::TimelikePast;
  return CausalRelation::Spacelike;
}

bool is_timelike(CausalRelation r) {
  return r == CausalRelation::TimelikeFuture || r == CausalRelation::TimelikePast;
}

bool is_lightlike(CausalRelation r) {
  return r == CausalRelation::LightlikeFuture || r == CausalRelation::LightlikePast;
}

PoincareMap PoincareMap::identity(int spatial_dim) {
  PoincareMap m;
  m.lambda = Eigen::MatrixXd::Identity(spatial_dim + 1, spatial_dim + 1);
  m.shift = Eigen::VectorXd::Zero(spatial_dim + 1);
  return m;
}

Event PoincareMap::apply(const Event& e) const {
  Eigen::VectorXd v(e.coords.size());
  for (size_t i = 0; i < e.coords.size(); ++i) v(static_cast<Eigen::Index>(i)) = e.coords[i];
  const Eigen::VectorXd w = lambda * v + shift;
  Event out;
  out.coords.assign(w.data(), w.data() + w.size());
  return out;
}

Event PoincareMap::apply_inverse(const Event& e) const {
  Eigen::VectorXd v(e.coords.size());
  for (size_t i = 0; i < e.coords.size(); ++i) v(static_cast<Eigen::Index>(i)) = e.coords[i];
  // For Lorentz lambda, the inverse is g lambda^T g.
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(lambda.rows(), lambda.cols());
  for (Eigen::Index i = 1; i < g.rows(); ++i) g(i, i) = -1.0;
  const Eigen::MatrixXd inv = g * lambda.transpose() * g;
  const Eigen::VectorXd w = inv * (v - shift);
  Event out;
  out.coords.assign(w.data(), w.data() + w.size());
  return out;
}

void PoincareMap::validate(double tol) const {
  const Eigen::Index n = lambda.rows();
  if (lambda.cols() != n || shift.size() != n)
    throw MalformedRegion("poincare map blocks have inconsistent sizes");
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 1; i < n; ++i) g(i, i) = -1.0;
  if ((lambda.transpose() * g * lambda - g).cwiseAbs().maxCoeff() > tol)
    throw MalformedRegion("matrix does not preserve the metric");
  if (lambda(0, 0) < 1.0 - tol) throw MalformedRegion("map must be orthochronous");
  if (std::abs(lambda.determinant() - 1.0) > 1e-6) throw MalformedRegion("map must be proper");
}

RegionPtr double_cone(const Event& bottom, const Event& top, double tol_geo) {
  require_same_dim(bottom, top);
  if (!strictly_timelike_future(top, bottom, tol_geo))
    throw MalformedRegion("double cone needs a strictly timelike bottom-to-top pair");
  Region r;
  r.kind = RegionKind::DoubleCone;
  r.dim = bottom.spatial_dim();
  r.a = bottom;
  r.b = top;
  return make_node(std::move(r));
}

RegionPtr wedge(bool right, int spatial_dim) {
  Region r;
  r.kind = RegionKind::Wedge;
  r.dim = spatial_dim;
  r.right = right;
  return make_node(std::move(r));
}

RegionPtr wedge(bool right, const PoincareMap& map) {
  map.validate();
  Region r;
  r.kind = RegionKind::Wedge;
  r.dim = static_cast<int>(map.lambda.rows()) - 1;
  r.right = right;
  r.map = map;
  return make_node(std::move(r));
}

RegionPtr past_cone(const Event& apex) {
  Region r;
  r.kind = RegionKind::PastCone;
  r.dim = apex.spatial_dim();
  r.a = apex;
  return make_node(std::move(r));
}

RegionPtr future_cone(const Event& apex) {
  Region r;
  r.kind = RegionKind::FutureCone;
  r.dim = apex.spatial_dim();
  r.a = apex;
  return make_node(std::move(r));
}

RegionPtr time_slab(double t_lo, double t_hi, int spatial_dim) {
  if (!(t_lo < t_hi)) throw MalformedRegion("time slab needs t_lo < t_hi");
  Region r;
  r.kind = RegionKind::TimeSlab;
  r.dim = spatial_dim;
  r.t_lo = t_lo;
  r.t_hi = t_hi;
  return make_node(std::move(r));
}

RegionPtr empty_region(int spatial_dim) {
  Region r;
  r.kind = RegionKind::Empty;
  r.dim = spatial_dim;
  return make_node(std::move(r));
}

RegionPtr full_region(int spatial_dim) {
  Region r;
  r.kind = RegionKind::Full;
  r.dim = spatial_dim;
  return make_node(std::move(r));
}

namespace {

RegionPtr binary_node(RegionKind kind, RegionPtr l, RegionPtr r) {
  if (!l || !r) throw MalformedRegion("null region operand");
  if (l->dim != r->dim) throw DimensionMismatch("region operands live in different dimensions");
  Region out;
  out.kind = kind;
  out.dim = l->dim;
  out.lhs = std::move(l);
  out.rhs = std::move(r);
  return make_node(std::move(out));
}

RegionPtr unary_node(RegionKind kind, RegionPtr v) {
  if (!v) throw MalformedRegion("null region operand");
  Region out;
  out.kind = kind;
  out.dim = v->dim;
  out.lhs = std::move(v);
  return make_node(std::move(out));
}

}  // namespace

RegionPtr region_union(RegionPtr l, RegionPtr r) {
  return binary_node(RegionKind::Union, std::move(l), std::move(r));
}
RegionPtr region_intersection(RegionPtr l, RegionPtr r) {
  return binary_node(RegionKind::Intersection, std::move(l), std::move(r));
}
RegionPtr region_difference(RegionPtr l, RegionPtr r) {
  return binary_node(RegionKind::Difference, std::move(l), std::move(r));
}
RegionPtr blc(RegionPtr v) { return unary_node(RegionKind::Blc, std::move(v)); }
RegionPtr causal_complement(RegionPtr v) {
  return unary_node(RegionKind::Complement, std::move(v));
}
RegionPtr causal_completion(RegionPtr v) {
  return unary_node(RegionKind::Completion, std::move(v));
}

namespace {

bool contains_impl(const Region& r, const Event& x, double tol);

bool blc_contains(const Region& child, const Event& x, double tol) {
  switch (child.kind) {
    case RegionKind::DoubleCone:
      // Backward cones of points arbitrarily close to the top apex exhaust
      // the union, so BLC(double cone) is the open past cone of the top.
      return strictly_timelike_past(x, child.b, tol);
    case RegionKind::Wedge:
      return wedge_blc_contains(base_coords(child, x), child.right, tol);
    case RegionKind::PastCone:
      return strictly_timelike_past(x, child.a, tol);
    case RegionKind::FutureCone:
      return true;  // past cones of arbitrarily late points cover everything
    case RegionKind::TimeSlab: {
      const double s = std::max({1.0, std::abs(x.t()), std::abs(child.t_hi)});
      return x.t() < child.t_hi - tol * s;
    }
    case RegionKind::Empty:
      return false;
    case RegionKind::Full:
      return true;
    case RegionKind::Union:
      return blc_contains(*child.lhs, x, tol) || blc_contains(*child.rhs, x, tol);
    case RegionKind::Blc:
      return blc_contains(*child.lhs, x, tol);  // BLC is idempotent
    default:
      throw MalformedRegion("no closed form for BLC of this region kind");
  }
}

bool complement_contains(const Region& child, const Event& x, double tol) {
  switch (child.kind) {
    case RegionKind::DoubleCone:
      // Spacelike from the whole cone == strictly spacelike from both apexes.
      return strictly_spacelike(x, child.a, tol) && strictly_spacelike(x, child.b, tol);
    case RegionKind::Wedge: {
      Region reflected = child;
      reflected.right = !child.right;
      return contains_impl(reflected, x, tol);
    }
    case RegionKind::PastCone:
    case RegionKind::FutureCone:
    case RegionKind::TimeSlab:
    case RegionKind::Full:
      return false;  // past/future-unbounded or spatially unbounded: nothing is spacelike to all of it
    case RegionKind::Empty:
      return true;
    case RegionKind::Union:
      return complement_contains(*child.lhs, x, tol) && complement_contains(*child.rhs, x, tol);
    case RegionKind::Complement: {
      // (V')' is the causal completion.
      Region completion;
      completion.kind = RegionKind::Completion;
      completion.dim = child.dim;
      completion.lhs = child.lhs;
      return contains_impl(completion, x, tol);
    }
    case RegionKind::Completion:
      // V''' = V'.
      return complement_contains(*child.lhs, x, tol);
    default:
      throw MalformedRegion("no closed form for the causal complement of this region kind");
  }
}

bool completion_contains(const Region& child, const Event& x, double tol) {
  switch (child.kind) {
    case RegionKind::DoubleCone:
    case RegionKind::Wedge:
    case RegionKind::Empty:
    case RegionKind::Full:
      return contains_impl(child, x, tol);  // causally complete
    case RegionKind::PastCone:
    case RegionKind::FutureCone:
    case RegionKind::TimeSlab:
      return true;  // complement is empty, so the completion is everything
    case RegionKind::Complement:
      // (V')'' = V'.
      return complement_contains(*child.lhs, x, tol);
    case RegionKind::Completion:
      return completion_contains(*child.lhs, x, tol);
    default:
      throw MalformedRegion("no closed form for the causal completion of this region kind");
  }
}

bool contains_impl(const Region& r, const Event& x, double tol) {
  switch (r.kind) {
    case RegionKind::DoubleCone:
      return strictly_timelike_future(x, r.a, tol) && strictly_timelike_past(x, r.b, tol);
    case RegionKind::Wedge:
      return wedge_base_contains(base_coords(r, x), r.right, tol);
    case RegionKind::PastCone:
      return strictly_timelike_past(x, r.a, tol);
    case RegionKind::FutureCone:
      return strictly_timelike_future(x, r.a, tol);
    case RegionKind::TimeSlab: {
      const double s = std::max({1.0, std::abs(x.t()), std::abs(r.t_lo), std::abs(r.t_hi)});
      return x.t() > r.t_lo + tol * s && x.t() < r.t_hi - tol * s;
    }
    case RegionKind::Empty:
      return false;
    case RegionKind::Full:
      return true;
    case RegionKind::Union:
      return contains_impl(*r.lhs, x, tol) || contains_impl(*r.rhs, x, tol);
    case RegionKind::Intersection:
      return contains_impl(*r.lhs, x, tol) && contains_impl(*r.rhs, x, tol);
    case RegionKind::Difference:
      return contains_impl(*r.lhs, x, tol) && !contains_impl(*r.rhs, x, tol);
    case RegionKind::Blc:
      return blc_contains(*r.lhs, x, tol);
    case RegionKind::Complement:
      return complement_contains(*r.lhs, x, tol);
    case RegionKind::Completion:
      return completion_contains(*r.lhs, x, tol);
  }
  throw MalformedRegion("unknown region kind");
}

}  // namespace

bool contains(const RegionPtr& region, const Event& x, double tol_geo) {
  if (!region) throw MalformedRegion("null region");
  if (x.spatial_dim() != region->dim)
    throw DimensionMismatch("event dimension does not match the region");
  return contains_impl(*region, x, tol_geo);
}

RegionPtr wpast(const RegionPtr& v1, const RegionPtr& v2) {
  return region_union(region_difference(blc(v1), v1), region_difference(blc(v2), v2));
}

RegionPtr cpast(const RegionPtr& v1, const RegionPtr& v2) {
  return region_intersection(region_difference(blc(v1), v1), region_difference(blc(v2), v2));
}

RegionPtr spast(const RegionPtr& v1, const RegionPtr& v2) {
  if (!v1 || !v2) throw MalformedRegion("null region");
  if (v1->kind == RegionKind::DoubleCone && v2->kind == RegionKind::DoubleCone)
    return region_intersection(past_cone(v1->a), past_cone(v2->a));
  if (v1->kind == RegionKind::Wedge || v2->kind == RegionKind::Wedge)
    return empty_region(v1->dim);  // wedges reach arbitrarily far into the past
  throw MalformedRegion("spast is implemented for double cones and wedges");
}

namespace {

std::optional<Box> bounding_box_opt(const Region& r) {
  switch (r.kind) {
    case RegionKind::DoubleCone: {
      const double h = r.b.t() - r.a.t();
      Box box;
      box.lo.coords.resize(r.a.coords.size());
      box.hi.coords.resize(r.a.coords.size());
      box.lo.coords[0] = r.a.t();
      box.hi.coords[0] = r.b.t();
      for (size_t i = 1; i < r.a.coords.size(); ++i) {
        box.lo.coords[i] = std::min(r.a.coords[i], r.b.coords[i]) - 0.5 * h;
        box.hi.coords[i] = std::max(r.a.coords[i], r.b.coords[i]) + 0.5 * h;
      }
      return box;
    }
    case RegionKind::Union: {
      const auto l = bounding_box_opt(*r.lhs);
      const auto rr = bounding_box_opt(*r.rhs);
      if (!l || !rr) return std::nullopt;
      Box box = *l;
      for (size_t i = 0; i < box.lo.coords.size(); ++i) {
        box.lo.coords[i] = std::min(box.lo.coords[i], rr->lo.coords[i]);
        box.hi.coords[i] = std::max(box.hi.coords[i], rr->hi.coords[i]);
      }
      return box;
    }
    case RegionKind::Intersection: {
      const auto l = bounding_box_opt(*r.lhs);
      const auto rr = bounding_box_opt(*r.rhs);
      if (!l && !rr) return std::nullopt;
      if (!l) return rr;
      if (!rr) return l;
      Box box = *l;
      for (size_t i = 0; i < box.lo.coords.size(); ++i) {
        box.lo.coords[i] = std::max(box.lo.coords[i], rr->lo.coords[i]);
        box.hi.coords[i] = std::min(box.hi.coords[i], rr->hi.coords[i]);
      }
      return box;
    }
    case RegionKind::Difference:
      return bounding_box_opt(*r.lhs);
    case RegionKind::Completion:
      if (r.lhs->kind == RegionKind::DoubleCone) return bounding_box_opt(*r.lhs);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace

Box bounding_box(const RegionPtr& region) {
  if (!region) throw MalformedRegion("null region");
  const auto box = bounding_box_opt(*region);
  if (!box) throw MalformedRegion("region is unbounded; provide an explicit box");
  return *box;
}

namespace {

void validate_box(const Box& box) {
  if (box.lo.coords.size() != box.hi.coords.size() || box.lo.coords.empty())
    throw DegenerateBox("box corners have inconsistent dimensions");
  for (size_t i = 0; i < box.lo.coords.size(); ++i)
    if (!(box.lo.coords[i] < box.hi.coords[i]))
      throw DegenerateBox("box has no volume along some axis");
}

Event sample_in_box(const Box& box, Rng& rng) {
  Event e;
  e.coords.resize(box.lo.coords.size());
  for (size_t i = 0; i < box.lo.coords.size(); ++i)
    e.coords[i] = rng.uniform(box.lo.coords[i], box.hi.coords[i]);
  return e;
}

}  // namespace

EmptinessVerdict is_empty_sampled(const RegionPtr& region, const Box& box, long n, uint64_t seed,
                                  Exec exec, double tol_geo) {
  if (n < 1) throw InvalidArgument("sample count must be positive");
  validate_box(box);
  if (!region) throw MalformedRegion("null region");

  const long chunk = 4096;
  const long n_chunks = (n + chunk - 1) / chunk;
  std::atomic<long> best_hit{n};

  auto scan_chunk = [&](long c) {
    const long begin = c * chunk;
    if (begin >= best_hit.load(std::memory_order_relaxed)) return;
    const long end = std::min(n, begin + chunk);
    for (long i = begin; i < end; ++i) {
      Rng rng = Rng::derived(seed, static_cast<uint64_t>(i));
      const Event e = sample_in_box(box, rng);
      if (contains(region, e, tol_geo)) {
        long expected = best_hit.load(std::memory_order_relaxed);
        while (i < expected && !best_hit.compare_exchange_weak(expected, i)) {
        }
        return;
      }
    }
  };

  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long c = 0; c < n_chunks; ++c) scan_chunk(c);
  } else {
    for (long c = 0; c < n_chunks; ++c) scan_chunk(c);
  }

  EmptinessVerdict verdict;
  verdict.samples = n;
  const long hit = best_hit.load();
  verdict.empty = hit >= n;
  if (!verdict.empty) {
    Rng rng = Rng::derived(seed, static_cast<uint64_t>(hit));
    verdict.witness = sample_in_box(box, rng);
  }
  return verdict;
}

SeparationVerdict spacelike_separated(const RegionPtr& v1, const RegionPtr& v2, long n,
                                      uint64_t seed, Exec exec, double tol_geo) {
  if (n < 1) throw InvalidArgument("sample count must be positive");
  const Box box1 = bounding_box(v1);
  const Box box2 = bounding_box(v2);

  auto sample_region = [&](const RegionPtr& v, const Box& box, uint64_t salt) {
    std::vector<Event> points;
    points.reserve(static_cast<size_t>(n));
    long attempts = 0;
    const long max_attempts = 10000 * n;
    long stream = 0;
    while (static_cast<long>(points.size()) < n && attempts < max_attempts) {
      Rng rng = Rng::derived(seed ^ salt, static_cast<uint64_t>(stream++));
      const Event e = sample_in_box(box, rng);
      ++attempts;
      if (contains(v, e, tol_geo)) points.push_back(e);
    }
    if (static_cast<long>(points.size()) < n)
      throw InvalidArgument("region too thin to sample the requested count");
    return points;
  };

  const std::vector<Event> p1 = sample_region(v1, box1, 0x1111);
  const std::vector<Event> p2 = sample_region(v2, box2, 0x2222);

  std::atomic<long> best_violation{n * n};
  auto check_row = [&](long i) {
    if (i * n >= best_violation.load(std::memory_order_relaxed)) return;
    for (long j = 0; j < n; ++j) {
      if (!strictly_spacelike(p1[static_cast<size_t>(i)], p2[static_cast<size_t>(j)], tol_geo)) {
        const long key = i * n + j;
        long expected = best_violation.load(std::memory_order_relaxed);
        while (key < expected && !best_violation.compare_exchange_weak(expected, key)) {
        }
        return;
      }
    }
  };

  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < n; ++i) check_row(i);
  } else {
    for (long i = 0; i < n; ++i) check_row(i);
  }

  SeparationVerdict verdict;
  verdict.pairs = n * n;
  const long key = best_violation.load();
  verdict.spacelike = key >= n * n;
  if (!verdict.spacelike)
    verdict.counterexample = {p1[static_cast<size_t>(key / n)], p2[static_cast<size_t>(key % n)]};
  return verdict;
}

namespace {

struct NullCoords {
  double u, v;  // u = t - x, v = t + x
};

NullCoords null_of(const Event& e) { return {e.t() - e.coords[1], e.t() + e.coords[1]}; }

}  // namespace

bool spacelike_separated_cones(const RegionPtr& v1, const RegionPtr& v2, double tol_geo) {
  if (!v1 || !v2 || v1->kind != RegionKind::DoubleCone || v2->kind != RegionKind::DoubleCone)
    throw MalformedRegion("exact separation check needs two double cones");
  if (v1->dim != 1 || v2->dim != 1)
    throw MalformedRegion("exact separation check is 1+1 only");

  const NullCoords a1 = null_of(v1->a), b1 = null_of(v1->b);
  const NullCoords a2 = null_of(v2->a), b2 = null_of(v2->b);
  const double s = std::max({1.0, std::abs(a1.u), std::abs(a1.v), std::abs(b2.u), std::abs(b2.v),
                             std::abs(a2.u), std::abs(a2.v), std::abs(b1.u), std::abs(b1.v)});
  const double eps = tol_geo * s;

  // D2 meets the causal future of D1 iff some point sits above both bottom
  // apexes and below D2's top; the past side is symmetric.
  const bool future_contact =
      b2.u > std::max(a1.u, a2.u) + eps && b2.v > std::max(a1.v, a2.v) + eps;
  const bool past_contact =
      a2.u < std::min(b1.u, b2.u) - eps && a2.v < std::min(b1.v, b2.v) - eps;
  return !future_contact && !past_contact;
}

LocalizationSlab localization_region(const RegionPtr& v1, const RegionPtr& v2, double tol_geo) {
  if (!v1 || !v2 || v1->kind != RegionKind::DoubleCone || v2->kind != RegionKind::DoubleCone)
    throw MalformedRegion("localization needs two double cones");
  if (v1->dim != 1 || v2->dim != 1) throw MalformedRegion("localization is 1+1 only");
  if (!spacelike_separated_cones(v1, v2, tol_geo))
    throw NotSpacelikeSeparated("localization needs spacelike separated double cones");

  const double bottom_min = std::min(v1->a.t(), v2->a.t());
  const double height = std::max(v1->b.t() - v1->a.t(), v2->b.t() - v2->a.t());
  const double t0 = bottom_min - 0.5 * height;
  const double eps = 0.5 * (bottom_min - t0);
  if (!(eps > 0.0)) throw NoValidSlab("slab thickness collapsed");

  LocalizationSlab slab;
  slab.t0 = t0;
  slab.eps = eps;
  slab.branch1 = {v1->b.coords[1] - (v1->b.t() - t0), v1->b.coords[1] + (v1->b.t() - t0)};
  slab.branch2 = {v2->b.coords[1] - (v2->b.t() - t0), v2->b.coords[1] + (v2->b.t() - t0)};

  std::vector<LocalizationSlab::Span> spans = {slab.branch1, slab.branch2};
  std::sort(spans.begin(), spans.end(),
            [](const auto& x, const auto& y) { return x.lo < y.lo; });
  slab.merged.push_back(spans[0]);
  for (size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].lo < slab.merged.back().hi) {
      slab.merged.back().hi = std::max(slab.merged.back().hi, spans[i].hi);
    } else {
      slab.merged.push_back(spans[i]);
    }
  }

  slab.expr = region_intersection(region_union(blc(v1), blc(v2)), time_slab(t0, t0 + eps, 1));
  return slab;
}

bool LocalizationSlab::completion_contains(const Event& e, double tol_geo) const {
  if (e.spatial_dim() != 1) throw DimensionMismatch("localization slab lives in 1+1");
  for (const Span& span : merged) {
    const double c = 0.5 * (span.lo + span.hi);
    const double h = 0.5 * (span.hi - span.lo);
    const double s = std::max({1.0, std::abs(e.t()), std::abs(e.coords[1]), std::abs(c) + h});
    // Diamond over the component, anchored at the slab's bottom time.
    if (std::abs(e.coords[1] - c) + std::abs(e.t() - t0) < h - tol_geo * s) return true;
  }
  return false;
}

std::pair<RegionPtr, RegionPtr> refinement_regions(const RegionPtr& v1, const RegionPtr& v2,
                                                   const LocalizationSlab& w) {
  const RegionPtr overlap = region_intersection(blc(v1), blc(v2));
  const RegionPtr r1 = region_difference(region_intersection(blc(v1), w.expr), overlap);
  const RegionPtr r2 = region_difference(region_intersection(blc(v2), w.expr), overlap);
  return {r1, r2};
}

}  // namespace ccpnet::minkowski
