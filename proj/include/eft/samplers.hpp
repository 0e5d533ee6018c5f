#pragma once

#include <cstdint>
#include <functional>

#include "eft/family_tree.hpp"
#include "eft/offspring.hpp"

namespace eft {

// A sampler is a pure function of (parameters, seed); estimators derive one
// seed per replicate with Rng::stream, so results do not depend on how
// replicates are scheduled.
using TreeSampler = std::function<FamilyTree(std::uint64_t seed)>;

// Ordinary Galton-Watson tree. Vertices whose children were cut (depth or
// population cap) carry the boundary flag; valid_radius is derived from the
// flags, and a window that died out before any cap is exact at every radius.
FamilyTree sample_gwt(const OffspringDistribution& pi, std::int64_t pop_cap,
                      std::int32_t depth_cap, std::uint64_t seed);

// Eternal Galton-Watson tree window: spine o_0..o_H with size-biased child
// counts and uniform child order on the spine, i.i.d. GW(pi) bushes
// everywhere else, rooted at o_0. valid_radius = min(spine_height, depth_cap)
// unless the population cap bites first.
FamilyTree sample_egwt(const OffspringDistribution& pi, std::int32_t spine_height,
                       std::int32_t depth_cap, std::int64_t pop_cap, std::uint64_t seed);

// Eternal multi-type Galton-Watson tree window. Root type ~ b, spine type
// transitions P[t(o_{n+1})=j | t(o_n)=i] = b_j m_{j,i} / (rho b_i), spine
// offspring vectors from the biased law pi_hat^(j,i), plain multi-type GW
// bushes elsewhere. Vertex types are stored in vtype.
FamilyTree sample_emgwt(const MultiTypeOffspring& params, std::int32_t spine_height,
                        std::int32_t depth_cap, std::int64_t pop_cap, std::uint64_t seed);

// Canopy tree with offspring cardinality d, windowed to the ball of radius
// depth_cap around a root whose layer index I has P[I=i] proportional to
// d_tilde^{-i}. d_tilde = d is the unimodular case. vtype holds layer indices.
FamilyTree sample_canopy(std::int32_t d, double d_tilde, std::int32_t depth_cap,
                         std::uint64_t seed);

// Joining of 2*window+1 i.i.d. component trees: each component is directed
// toward its own root o_i, edges o_i -> o_{i+1} are added, and the result is
// rooted at o_0. The youngest chain end is boundary (its next component is
// cut); valid_radius <= window.
FamilyTree join_stationary(const TreeSampler& component, std::int32_t window,
                           std::uint64_t seed);

// join_stationary plus bookkeeping: which component each vertex came from
// (index relative to T_0) and the chain of component roots, youngest first.
struct Joining {
  FamilyTree tree;
  std::vector<std::int32_t> component;
  std::vector<std::int32_t> chain;
};
Joining make_joining(const TreeSampler& component, std::int32_t window, std::uint64_t seed);

// Joinings re-rooted to a typical vertex of T_0: the law biased by |V(T_0)|
// with the root moved uniformly into T_0, realized by importance resampling
// over a 10x batch. This is the measure the joining theorem asserts to be
// unimodular.
std::vector<FamilyTree> join_typical_samples(const TreeSampler& component, std::int32_t window,
                                             std::size_t n, std::uint64_t seed);

// Negative control for the independence probe: an EGWT-like window where the
// root's sibling count is forced to equal the root's own child count.
FamilyTree sample_correlated_control(const OffspringDistribution& pi,
                                     std::int32_t spine_height, std::int32_t depth_cap,
                                     std::uint64_t seed);

}  // namespace eft
