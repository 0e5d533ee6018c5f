#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace eft {

// Finite multigraph with vertex marks and two half-edge marks per edge.
// Immutable after construction; the vertex-shift engine and the exact
// estimators only read it.
struct Network {
  struct Edge {
    std::int32_t a, b;
    double mark_a = 0.0, mark_b = 0.0;  // half-edge marks at a and b
  };

  std::vector<Edge> edges;
  std::vector<std::vector<std::int32_t>> adj;  // incident edge ids per vertex
  std::vector<double> vmark;
  std::vector<std::array<double, 2>> vmark2;   // optional pair marks
  bool connected = true;

  std::int32_t size() const { return static_cast<std::int32_t>(adj.size()); }
  std::int32_t other_end(std::int32_t edge, std::int32_t v) const {
    const Edge& e = edges[edge];
    return e.a == v ? e.b : e.a;
  }
  double half_mark(std::int32_t edge, std::int32_t v) const {
    const Edge& e = edges[edge];
    return e.a == v ? e.mark_a : e.mark_b;
  }
};

Network make_network(std::int32_t n);
std::int32_t add_edge(Network& net, std::int32_t a, std::int32_t b,
                      double mark_a = 0.0, double mark_b = 0.0);

// The undirected graph underlying a family tree, vertex ids preserved.
// Half-edge marks encode direction: 1 on the child side, 0 on the parent's.
Network tree_as_network(const struct FamilyTree& t);

// Vertex relabeling (new_id = perm[old]); used by covariance property tests.
Network relabel(const Network& net, const std::vector<std::int32_t>& perm);

// Isomorphism-invariant code of the radius-r ball around `root`, built by
// iterated neighborhood refinement over (discretized marks, degrees). Equal
// codes for isomorphic rooted balls always; the converse holds whenever
// refinement separates the orbits, which covers trees and the marked
// networks used here. Marks are discretized to 2^-32 fixed point so equality
// is bit-exact.
std::string network_root_code(const Network& net, std::int32_t root, std::int32_t radius);

}  // namespace eft
