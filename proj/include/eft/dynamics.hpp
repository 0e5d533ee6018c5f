#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eft/family_tree.hpp"
#include "eft/network.hpp"
#include "eft/rng.hpp"

namespace eft {

// A covariant vertex-shift: computable from marks and structure only, so a
// relabeling of the network commutes with it (property-tested).
struct VertexShift {
  std::string name;
  std::function<std::int32_t(const Network&, std::int32_t)> apply;
};

// f(v) = v everywhere.
VertexShift identity_shift();
// f(v) = neighbor with the smallest vertex mark, v itself on ties or
// isolated vertices.
VertexShift min_mark_neighbor_shift();
// f(v) = the vertex with the globally smallest mark. Covariant but not
// bijective on anything larger than a single vertex; the Mecke negative
// control.
VertexShift min_mark_global_shift();
// Parent map of a family tree encoded in the half-edge marks of
// tree_as_network (child side carries 1 + child index). Top maps to itself.
VertexShift parent_shift();

// The functional digraph of f on net: out[v] = f(v).
using FGraph = std::vector<std::int32_t>;
FGraph build_f_graph(const Network& net, const VertexShift& f);

// Connected components of the f-graph with their unique cycle, the foils
// ordered along the cycle, and the f^infinity set (vertices with nonempty
// D_n for all n <= |V|).
struct FoilComponent {
  std::vector<std::int32_t> vertices;
  std::vector<std::int32_t> cycle;
  std::vector<std::vector<std::int32_t>> foils;
  std::vector<std::int32_t> f_infinity;
};
struct FoliationResult {
  std::vector<FoilComponent> components;
};
FoliationResult compute_foliation(const FGraph& fg);

// CSV rows: component_id,size,cycle_len,n_foils,foil_sizes (semicolon-joined).
std::string foliation_csv(const FoliationResult& r);

// Random strip of the stationary drainage network on the even checkerboard
// of a width x height torus (both even): every site (x, y) drains to
// (x-1, y-1) or (x+1, y-1), wrapping both ways. The choice is stored in the
// half-edge marks (1 on the tail side), which is what the returned shift
// reads.
enum class DrainageRule { kIidUniform, kStationaryBlock };
struct Drainage {
  Network net;
  VertexShift shift;
};
Drainage drainage_sim(std::int32_t width, std::int32_t height, DrainageRule rule,
                      std::uint64_t seed);

// Royal line of succession on an ordered family-tree window: preorder from
// the window top, children in stored order, each subtree before the next
// sibling. Returns -1 where the window cannot resolve the successor; with
// wrap = true the preorder-last vertex maps back to the top, making the map
// a bijection on a complete finite window.
std::vector<std::int32_t> royal_successor_map(const FamilyTree& t, bool wrap);

// Brute-force foil of o on a family-tree window: members of L_n(o) for a
// given n, by iterating parents. Oracle for generation_members.
std::vector<std::int32_t> foil_members_brute(const FamilyTree& t, std::int32_t o, std::int32_t n);

}  // namespace eft
