#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eft/family_tree.hpp"
#include "eft/offspring.hpp"
#include "eft/verify.hpp"

namespace eft {

// Window of the generalized Diestel-Leader graph built from two family-tree
// windows: vertices are pairs (v1, v2) with l(o1,v1) + l(o2,v2) = 0 inside
// the two radius-r balls, and each pair points to {F(v1)} x F^{-1}(v2).
// `level` stores l(o1, v1) in the ancestors-positive convention, so the
// Radon-Nikodym weight of the pair (v, root) is (m1/m2)^{level(v)}.
struct DLWindow {
  FamilyTree t1, t2;
  std::vector<std::pair<std::int32_t, std::int32_t>> verts;
  std::unordered_map<std::int64_t, std::int32_t> index;  // v1 * |t2| + v2 -> id
  std::vector<std::int32_t> level;
  std::vector<std::array<double, 2>> mark;               // i.i.d. uniform pairs
  std::vector<std::vector<std::int32_t>> out;            // ids of {F(v1)} x F^-1(v2)
  std::vector<std::uint8_t> interior;                    // full out-neighborhood present
  std::int32_t root = 0;

  std::int32_t size() const { return static_cast<std::int32_t>(verts.size()); }
};

// Rejects t2 windows with a childless non-boundary vertex (the construction
// needs every T2 vertex to have at least one child).
DLWindow build_dl_window(const FamilyTree& t1, const FamilyTree& t2, std::int32_t radius,
                         std::uint64_t mark_seed);

// The natural vertex-shift: the first mark coordinate draws an index into
// {1..|F^-1(v2)|}, the order of the candidates' second mark coordinates
// realizes the pick. -1 where the window cannot resolve it.
std::vector<std::int32_t> dl_shift(const DLWindow& win);

// Exact window facts: out-degree = d_1(v2) and in-degree = d_1(v1) where the
// window can see the full neighborhoods, plus the level-sum invariant.
bool dl_check_identities(const DLWindow& win, std::string* why = nullptr);

using DLSampler = std::function<DLWindow(std::uint64_t seed)>;

// E[d_1(o)] in the f-component vs m1/m2, a z-test on k - a/b (a = d_1(o_1),
// b = d_1(F(o_2))), and a goodness-of-fit of the modal (a, b) cell against
// Binomial(a, 1/b).
struct DLOffspringReport {
  EstimatorReport mean_check;
  EstimatorReport centered_binomial;  // E[k - a/b] = 0
  EstimatorReport modal_cell_fit;     // chi-square p-value in lhs
  bool pass = false;
};
DLOffspringReport dl_offspring_check(const DLSampler& sampler, double m1, double m2,
                                     std::uint64_t n, std::uint64_t seed, double z_max = 3.0);

// Mass transport with g = mass-to-f-image. weighted = true applies the
// cocycle weight (m1/m2)^{level(v)} to the incoming sum, which is the form
// that holds for every (m1, m2); the unweighted form only holds at m1 = m2.
EstimatorReport dl_mtp_check(const DLSampler& sampler, double m1, double m2, bool weighted,
                             std::uint64_t n, std::uint64_t seed, double z_max = 3.0);

// The f-component of the window root as a family-tree window (parent = f).
FamilyTree dl_component_tree(const DLWindow& win);

// Direct sampler of the f-component law via the age-dependent description:
// one shared thinning variable per level (pi2-sized below the root spine,
// size-biased pi2 at and above it), potential children pi1 on the bushes and
// size-biased pi1 along the spine. Cross-checked in distribution against
// dl_component_tree of the direct construction.
FamilyTree sample_dl_component_age_dependent(const OffspringDistribution& pi1,
                                             const OffspringDistribution& pi2,
                                             std::int32_t radius, std::uint64_t seed);

// Export: one line per vertex, "(id1,id2) level out_degree in_degree".
std::string dl_window_export(const DLWindow& win);

}  // namespace eft
