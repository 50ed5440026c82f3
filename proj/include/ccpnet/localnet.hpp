#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccpnet/commoncause.hpp"
#include "ccpnet/minkowski.hpp"
#include "ccpnet/qprob.hpp"

namespace ccpnet::localnet {

using qprob::Operator;
using qprob::Projection;
using qprob::State;

// 1+1 lattice chain: site s sits at (t=0, x=s), spacing 1, light speed 1.
// Local algebras are assigned by causal shadows on the t=0 slice, so the
// causal-completion identity A(V) = A(V'') holds by construction.
struct LatticeNet {
  int n_sites = 0;
  int site_dim = 2;
  int dim_cap = 4096;
  TensorSpace space;

  static LatticeNet make(int n_sites, int site_dim = 2, int dim_cap = 4096);
};

struct NetRegion {
  minkowski::RegionPtr region;
  std::vector<int> base;
};

// Sites whose t=0 event lies in the causal completion of the region.
// Double-cone arguments must shadow only sites available on the chain;
// localization slabs clip to the chain.
std::vector<int> base_of(const LatticeNet& net, const minkowski::RegionPtr& region,
                         double tol_geo = 1e-12);
std::vector<int> base_of(const LatticeNet& net, const minkowski::LocalizationSlab& slab,
                         double tol_geo = 1e-12);

// Spacelike separated regions must get disjoint bases; returns the truth of
// that implication.
bool einstein_causality_check(const LatticeNet& net, const minkowski::RegionPtr& v1,
                              const minkowski::RegionPtr& v2, double tol_geo = 1e-12);

struct IndependenceVerdict {
  bool independent = false;
  std::string reason;
};

// Tensor-split criterion: disjoint nonempty bases give logical independence.
IndependenceVerdict logical_independence_check(const LatticeNet& net,
                                               const minkowski::RegionPtr& v1,
                                               const minkowski::RegionPtr& v2,
                                               double tol_geo = 1e-12);

// Minimal factor set S with X = (operator on S) (x) identity, decided per
// site by partial-trace comparison.
std::vector<int> support_of(const Operator& x, double tol = 1e-10);

struct DemoOptions {
  double pair_weight = 0.5;  // weight of the entangled pair against the background
  uint64_t seed = 1;
  long geometry_samples = 100000;
  Tolerances tol;
};

struct GeometryChecks {
  bool slab_inside_wpast = false;
  long wpast_samples = 0;
  bool coverage = false;        // base(W) contains base(V1) u base(V2)
  bool refinement_ok = false;   // support(C) confined to neither single branch
  bool bases_disjoint = false;
};

struct DemoReport {
  minkowski::RegionPtr v1, v2;
  minkowski::LocalizationSlab slab;
  std::vector<int> base1, base2, base_w;
  std::vector<int> branch1_only, branch2_only;
  Projection a, b;
  commoncause::CommonCauseCertificate certificate;
  double canonical_value = 0.0;
  std::string cause_algebra;  // which algebra hosted the construction
  GeometryChecks geometry;
  uint64_t seed = 0;
  Tolerances tol;
  bool valid = false;
};

// Full-rank default state: entangled pair across the two given sites, mixed
// against a seeded random faithful background on the whole chain.
State default_demo_state(const LatticeNet& net, int site1, int site2, double pair_weight,
                         uint64_t seed);

// End-to-end pipeline: find correlated projections in the two local algebras,
// build the localization slab, construct the canonical common cause inside
// the slab's algebra (enlarging from the pair algebra when infeasible there),
// then verify the certificate and the geometric claims.
DemoReport wccp_demo(const LatticeNet& net, const minkowski::RegionPtr& v1,
                     const minkowski::RegionPtr& v2, const State& phi,
                     const DemoOptions& opts = {});

}  // namespace ccpnet::localnet
