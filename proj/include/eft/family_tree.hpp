#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eft {

// A finite window of a (possibly infinite) rooted family tree: a directed
// tree in which every vertex has at most one parent. Immutable once built;
// samplers hand these out and the estimators only read them.
//
// `boundary` marks vertices whose child set was cut by the sampling window,
// and `valid_radius` is the largest r such that the ball of radius r around
// `root` is distributed exactly like the untruncated object. Statistics that
// read outside that ball are refused by the estimator layer.
struct FamilyTree {
  std::vector<std::int32_t> parent;                // -1 = no parent in window
  std::vector<std::vector<std::int32_t>> children; // ordered
  std::int32_t root = 0;
  std::vector<std::int32_t> vtype;                 // empty, or one type per vertex
  std::vector<std::uint8_t> boundary;              // 1 = children may be missing
  std::int32_t valid_radius = 0;

  std::int32_t size() const { return static_cast<std::int32_t>(parent.size()); }
  bool has_types() const { return !vtype.empty(); }
  bool is_boundary(std::int32_t v) const { return boundary[v] != 0; }
};

// Incremental builder used by all samplers. Vertex ids are dense and assigned
// in creation order; children end up ordered by insertion unless the sampler
// reorders them explicitly.
class TreeBuilder {
 public:
  std::int32_t add_vertex(std::int32_t parent, std::int32_t type = 0);
  // Insert as child of `parent` at position `pos` in the child order.
  std::int32_t add_vertex_at(std::int32_t parent, std::size_t pos, std::int32_t type = 0);
  void mark_boundary(std::int32_t v) { tree_.boundary[v] = 1; }
  void set_root(std::int32_t v) { tree_.root = v; }
  void set_valid_radius(std::int32_t r) { tree_.valid_radius = r; }
  void keep_types(bool on) { typed_ = on; }
  std::int32_t size() const { return tree_.size(); }
  FamilyTree take();

 private:
  FamilyTree tree_;
  std::vector<std::int32_t> types_;
  bool typed_ = false;
};

// Structural invariants: parent/children mutually consistent, acyclic,
// connected, at most one parentless vertex. Throws std::logic_error.
void validate(const FamilyTree& t);

// Depth of every vertex below the window's top (parentless) vertex.
std::vector<std::int32_t> depths_from_top(const FamilyTree& t);

// Generation offset l(v, w): +k when w = F^k(v) (ancestors count positive),
// antisymmetric, and l(v,w) + l(w,z) = l(v,z). Always defined on a tree.
//
// Sign convention, used everywhere in this codebase: ancestors of v have
// positive offset from v, descendants negative. The multiplicative weight of
// the offspring-invariant mass transport identity is m^{l(o,v)} on the
// incoming term, which makes a child of o carry weight 1/m.
std::int64_t generation_offset(const FamilyTree& t, std::int32_t v, std::int32_t w);

// F^n(v): n-th ancestor inside the window, or nullopt if the window ends.
std::optional<std::int32_t> ancestor(const FamilyTree& t, std::int32_t v, std::int32_t n);

struct VertexSet {
  std::vector<std::int32_t> verts;
  // False when the window truncation may hide members (lower bound only).
  bool complete = true;
};

// D_n(v) = { y : F^n(y) = v }. Marked incomplete if any vertex of
// D_0..D_{n-1}(v) is boundary-cut.
VertexSet descendants_n(const FamilyTree& t, std::int32_t v, std::int32_t n);

// L_n(o) = F^{-n}(F^n(o)), the members of o's generation that share the n-th
// ancestor. Invalid when F^n(o) is missing, and incomplete when the
// descendant sweep hits the boundary.
struct GenerationSet {
  std::vector<std::int32_t> verts;
  bool valid = false;
  bool complete = false;
};
GenerationSet generation_members(const FamilyTree& t, std::int32_t o, std::int32_t n);

// Vertices within graph distance `radius` of the root. The ball of a tree is
// a tree; `top` is its unique vertex whose parent lies outside.
struct Ball {
  std::vector<std::int32_t> verts;  // ball members, original ids
  std::vector<std::int32_t> dist;   // aligned with verts
  std::int32_t top;
};
Ball ball_around_root(const FamilyTree& t, std::int32_t radius);

// Canonical code of the radius-r ball around the root: equal codes iff the
// balls are isomorphic as rooted family trees (types included, child order
// included in ordered mode, ignored otherwise). Vertex ids never leak into
// the code. Callers comparing distributions must keep radius <= valid_radius.
std::string canonicalize(const FamilyTree& t, std::int32_t radius, bool ordered = false);

// Code of the whole window (radius = window size), for exact measures.
std::string canonical_code_full(const FamilyTree& t, bool ordered = false);

// Same tree re-rooted at v. Structure, types and boundary flags are shared;
// valid_radius drops by the distance between old and new root.
FamilyTree rerooted(const FamilyTree& t, std::int32_t v);

// Restriction of t to generations older than or equal to z relative to the
// root: keeps every vertex at most z generations below the root's generation
// together with the whole ancestry above. The result keeps its top, gains a
// youngest generation at offset z, and keeps the root at o.
FamilyTree prune(const FamilyTree& t, std::int32_t z);

// Relabel vertices by a permutation (new_id = perm[old_id]); used by the
// covariance property tests.
FamilyTree relabel(const FamilyTree& t, const std::vector<std::int32_t>& perm);

// valid_radius = min(cap, distance of the nearest boundary-flagged vertex
// from the root). Samplers call this after setting boundary flags.
void derive_valid_radius(FamilyTree& t, std::int32_t cap);

// Line format: header "root valid_radius", then one vertex per line,
// "id parent_id type_label boundary_flag child_index", parent_id = -1 for
// the parentless vertex, child_index = position in the parent's child order.
std::string serialize(const FamilyTree& t);
FamilyTree deserialize(const std::string& text);

}  // namespace eft
