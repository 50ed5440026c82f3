#include "ccpnet/localnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccpnet/bell.hpp"
#include "ccpnet/rng.hpp"

namespace ccpnet::localnet {

namespace {

using minkowski::Event;
using minkowski::LocalizationSlab;
using minkowski::RegionKind;
using minkowski::RegionPtr;

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Open spatial cross-section of a 1+1 double cone at t = 0; nullopt when the
// cone does not reach the slice.
std::optional<std::pair<double, double>> cone_slice_at_zero(const Region& cone) {
  const double ta = cone.a.t(), tb = cone.b.t();
  if (ta >= 0.0 || tb <= 0.0) return std::nullopt;
  const double lo = std::max(cone.a.coords[1] + ta, cone.b.coords[1] - tb);
  const double hi = std::min(cone.a.coords[1] - ta, cone.b.coords[1] + tb);
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::vector<int> sites_in(const LatticeNet& net, double lo, double hi) {
  std::vector<int> sites;
  for (int s = 0; s < net.n_sites; ++s)
    if (static_cast<double>(s) > lo && static_cast<double>(s) < hi) sites.push_back(s);
  return sites;
}

void check_window(const LatticeNet& net, double lo, double hi) {
  if (lo < -0.5 || hi > net.n_sites - 0.5)
    throw RegionOutsideLattice("region shadow extends past the chain");
}

}  // namespace

using minkowski::Region;

LatticeNet LatticeNet::make(int n_sites, int site_dim, int dim_cap) {
  if (n_sites < 2) throw InvalidArgument("a chain needs at least two sites");
  if (site_dim < 2) throw InvalidArgument("site dimension must be at least 2");
  double total = 1.0;
  for (int i = 0; i < n_sites; ++i) total *= site_dim;
  if (total > static_cast<double>(dim_cap))
    throw InvalidArgument("total dimension exceeds the configured cap");
  LatticeNet net;
  net.n_sites = n_sites;
  net.site_dim = site_dim;
  net.dim_cap = dim_cap;
  net.space = TensorSpace(std::vector<int>(static_cast<size_t>(n_sites), site_dim));
  return net;
}

std::vector<int> base_of(const LatticeNet& net, const RegionPtr& region, double tol_geo) {
  if (!region) throw MalformedRegion("null region");
  if (region->dim != 1) throw MalformedRegion("the chain is 1+1 dimensional");
  switch (region->kind) {
    case RegionKind::Empty:
      return {};
    case RegionKind::DoubleCone: {
      const auto slice = cone_slice_at_zero(*region);
      if (!slice) return {};
      check_window(net, slice->first, slice->second);
      return sites_in(net, slice->first, slice->second);
    }
    case RegionKind::Completion:
      // double cones are their own completions
      if (region->lhs->kind == RegionKind::DoubleCone) return base_of(net, region->lhs, tol_geo);
      throw MalformedRegion("base is defined for double cones and localization slabs");
    case RegionKind::Union: {
      // defined for spacelike separated double cones, where the completion
      // of the union adds nothing
      const RegionPtr& l = region->lhs;
      const RegionPtr& r = region->rhs;
      if (l->kind == RegionKind::DoubleCone && r->kind == RegionKind::DoubleCone &&
          minkowski::spacelike_separated_cones(l, r, tol_geo))
        return sorted_union(base_of(net, l, tol_geo), base_of(net, r, tol_geo));
      throw MalformedRegion("base of a union needs spacelike separated double cones");
    }
    default:
      throw MalformedRegion("base is defined for double cones and localization slabs");
  }
}

std::vector<int> base_of(const LatticeNet& net, const LocalizationSlab& slab, double) {
  // Completion = diamonds over the merged cross-section components. The slab
  // may shadow past the chain's edge; the algebra truncates to the chain.
  std::vector<int> base;
  for (const auto& span : slab.merged) {
    const double c = 0.5 * (span.lo + span.hi);
    const double h = 0.5 * (span.hi - span.lo);
    const double radius = h - std::abs(slab.t0);
    if (radius <= 0.0) continue;
    base = sorted_union(base, sites_in(net, c - radius, c + radius));
  }
  return base;
}

bool einstein_causality_check(const LatticeNet& net, const RegionPtr& v1, const RegionPtr& v2,
                              double tol_geo) {
  if (!minkowski::spacelike_separated_cones(v1, v2, tol_geo)) return true;  // vacuous
  const std::vector<int> b1 = base_of(net, v1, tol_geo);
  const std::vector<int> b2 = base_of(net, v2, tol_geo);
  std::vector<int> overlap;
  std::set_intersection(b1.begin(), b1.end(), b2.begin(), b2.end(), std::back_inserter(overlap));
  return overlap.empty();
}

IndependenceVerdict logical_independence_check(const LatticeNet& net, const RegionPtr& v1,
                                               const RegionPtr& v2, double tol_geo) {
  const std::vector<int> b1 = base_of(net, v1, tol_geo);
  const std::vector<int> b2 = base_of(net, v2, tol_geo);
  if (b1.empty() || b2.empty()) return {false, "empty base gives the trivial algebra"};
  std::vector<int> overlap;
  std::set_intersection(b1.begin(), b1.end(), b2.begin(), b2.end(), std::back_inserter(overlap));
  if (!overlap.empty()) return {false, "bases overlap; the tensor-split criterion does not apply"};
  return {true, "disjoint tensor supports"};
}

std::vector<int> support_of(const Operator& x, double tol) {
  std::vector<int> support;
  const TensorSpace& space = x.space;
  for (int site = 0; site < space.n_factors(); ++site) {
    std::vector<int> others;
    for (int f = 0; f < space.n_factors(); ++f)
      if (f != site) others.push_back(f);
    const int d_site = space.factor_dims[static_cast<size_t>(site)];
    const Mat reduced = partial_trace(space, x.entries, others) / static_cast<double>(d_site);
    const Mat rebuilt = embed(space, others, reduced);
    if (max_abs(x.entries - rebuilt) > tol) support.push_back(site);
  }
  return support;
}

State default_demo_state(const LatticeNet& net, int site1, int site2, double pair_weight,
                         uint64_t seed) {
  if (site1 == site2 || site1 < 0 || site2 < 0 || site1 >= net.n_sites || site2 >= net.n_sites)
    throw InvalidArgument("pair sites must be distinct chain sites");
  if (pair_weight <= 0.0 || pair_weight >= 1.0)
    throw InvalidArgument("pair weight must sit strictly between 0 and 1");
  if (net.site_dim != 2) throw InvalidArgument("the default state is built for qubit sites");

  const TensorSpace& space = net.space;
  const int d = space.total_dim();

  std::vector<int> pair_sites = {std::min(site1, site2), std::max(site1, site2)};
  Vec pair_vec = Vec::Zero(4);
  pair_vec(0) = 1.0 / std::sqrt(2.0);  // |00> + |11>
  pair_vec(3) = 1.0 / std::sqrt(2.0);
  const Mat pair_rho = pair_vec * pair_vec.adjoint();

  std::vector<int> rest;
  for (int s = 0; s < net.n_sites; ++s)
    if (s != pair_sites[0] && s != pair_sites[1]) rest.push_back(s);

  Mat pair_term;
  if (rest.empty()) {
    pair_term = embed(space, pair_sites, pair_rho);
  } else {
    TensorSpace rest_space;
    for (int s : rest) rest_space.factor_dims.push_back(2);
    const Mat xi = qprob::random_state(rest_space, splitmix64(seed ^ 0xab1eULL), true).rho;
    pair_term = embed(space, pair_sites, pair_rho) * embed(space, rest, xi);
  }

  // Background blended halfway toward maximally mixed so the spectrum floor
  // stays well above the faithfulness threshold.
  const Mat chi = qprob::random_state(space, splitmix64(seed ^ 0xbac6ULL), true).rho;
  const Mat background = 0.5 * chi + 0.5 / d * Mat::Identity(d, d);

  const Mat rho = pair_weight * pair_term + (1.0 - pair_weight) * background;
  return State::make(space, hermitize(rho));
}

namespace {

std::vector<int> branch_sites(const LatticeNet& net, const LocalizationSlab::Span& span,
                              double t0) {
  const double c = 0.5 * (span.lo + span.hi);
  const double h = 0.5 * (span.hi - span.lo);
  const double radius = h - std::abs(t0);
  if (radius <= 0.0) return {};
  std::vector<int> sites;
  for (int s = 0; s < net.n_sites; ++s)
    if (static_cast<double>(s) > c - radius && static_cast<double>(s) < c + radius)
      sites.push_back(s);
  return sites;
}

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

DemoReport wccp_demo(const LatticeNet& net, const RegionPtr& v1, const RegionPtr& v2,
                     const State& phi, const DemoOptions& opts) {
  if (!(phi.space == net.space)) throw DimensionMismatch("state does not live on the chain");
  if (!minkowski::spacelike_separated_cones(v1, v2, opts.tol.geo))
    throw NotSpacelikeSeparated("demo regions must be spacelike separated double cones");
  if (!phi.faithful) throw InvalidArgument("demo needs a locally faithful (full-rank) state");

  DemoReport report;
  report.v1 = v1;
  report.v2 = v2;
  report.seed = opts.seed;
  report.tol = opts.tol;

  report.base1 = base_of(net, v1, opts.tol.geo);
  report.base2 = base_of(net, v2, opts.tol.geo);
  if (report.base1.empty() || report.base2.empty())
    throw NoCorrelationFound("a region shadows no chain site; its algebra is trivial");

  // (1) correlated projections inside the two local algebras
  bell::FinderOptions finder;
  finder.seed = opts.seed;
  try {
    std::tie(report.a, report.b) = bell::find_correlated_projections(phi, report.base1,
                                                                     report.base2, finder);
  } catch (const ProductState&) {
    throw NoCorrelationFound("state is a product across the two bases");
  } catch (const NotFound& e) {
    throw NoCorrelationFound(e.what());
  }

  // (2) localization slab and its base
  report.slab = minkowski::localization_region(v1, v2, opts.tol.geo);
  report.base_w = base_of(net, report.slab, opts.tol.geo);

  // (3) canonical construction, first in A(V1) v A(V2), then in A(W)
  report.canonical_value = commoncause::canonical_cause_value(phi, report.a, report.b, opts.tol);
  const std::vector<int> pair_sites = sorted_union(report.base1, report.base2);
  try {
    report.certificate =
        commoncause::construct_canonical_cause(phi, report.a, report.b, pair_sites, opts.tol);
    report.cause_algebra = "A(V1) v A(V2)";
  } catch (const commoncause::Infeasible&) {
    // The finite-dimensional gap: enlarge to the slab algebra.
    report.certificate =
        commoncause::construct_canonical_cause(phi, report.a, report.b, report.base_w, opts.tol);
    report.cause_algebra = "A(W)";
  }

  const std::vector<int> supp_c = support_of(report.certificate.cause.op, 1e-10);
  report.certificate.localization =
      commoncause::LocalizationEvidence{supp_c, report.cause_algebra};

  // (4) sampled subset check: the slab sits inside wpast(V1, V2)
  {
    minkowski::Box box;
    double lo = report.slab.merged.front().lo, hi = report.slab.merged.back().hi;
    box.lo = Event{report.slab.t0, lo};
    box.hi = Event{report.slab.t0 + report.slab.eps, hi};
    const RegionPtr wp = minkowski::wpast(v1, v2);
    long violations = 0, hits = 0;
    for (long i = 0; i < opts.geometry_samples; ++i) {
      Rng rng = Rng::derived(opts.seed ^ 0x3e0ULL, static_cast<uint64_t>(i));
      Event e;
      e.coords = {rng.uniform(box.lo.t(), box.hi.t()),
                  rng.uniform(box.lo.coords[1], box.hi.coords[1])};
      if (!minkowski::contains(report.slab.expr, e, opts.tol.geo)) continue;
      ++hits;
      if (!minkowski::contains(wp, e, opts.tol.geo)) ++violations;
    }
    report.geometry.wpast_samples = hits;
    report.geometry.slab_inside_wpast = hits > 0 && violations == 0;
  }

  // (5) refinement: the cause is confined to neither single branch
  report.branch1_only = set_minus(branch_sites(net, report.slab.branch1, report.slab.t0),
                                  branch_sites(net, report.slab.branch2, report.slab.t0));
  report.branch2_only = set_minus(branch_sites(net, report.slab.branch2, report.slab.t0),
                                  branch_sites(net, report.slab.branch1, report.slab.t0));
  report.geometry.refinement_ok =
      !supp_c.empty() && !subset(supp_c, report.branch1_only) &&
      !subset(supp_c, report.branch2_only);

  report.geometry.coverage = subset(pair_sites, report.base_w);
  report.geometry.bases_disjoint = einstein_causality_check(net, v1, v2, opts.tol.geo);

  report.valid = report.certificate.valid(opts.tol) && report.geometry.slab_inside_wpast &&
                 report.geometry.coverage && report.geometry.refinement_ok &&
                 report.geometry.bases_disjoint;
  return report;
}

}  // namespace ccpnet::localnet
