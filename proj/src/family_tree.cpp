#include "eft/family_tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace eft {

std::int32_t TreeBuilder::add_vertex(std::int32_t parent, std::int32_t type) {
  const std::int32_t id = tree_.size();
  tree_.parent.push_back(parent);
  tree_.children.emplace_back();
  tree_.boundary.push_back(0);
  types_.push_back(type);
  if (parent >= 0) tree_.children[parent].push_back(id);
  return id;
}

std::int32_t TreeBuilder::add_vertex_at(std::int32_t parent, std::size_t pos, std::int32_t type) {
  const std::int32_t id = tree_.size();
  tree_.parent.push_back(parent);
  tree_.children.emplace_back();
  tree_.boundary.push_back(0);
  types_.push_back(type);
  auto& sibs = tree_.children[parent];
  pos = std::min(pos, sibs.size());
  sibs.insert(sibs.begin() + static_cast<std::ptrdiff_t>(pos), id);
  return id;
}

FamilyTree TreeBuilder::take() {
  if (typed_) tree_.vtype = std::move(types_);
  return std::move(tree_);
}

void validate(const FamilyTree& t) {
  const std::int32_t n = t.size();
  if (n == 0) throw std::logic_error("empty tree");
  if (t.root < 0 || t.root >= n) throw std::logic_error("root out of range");
  std::int32_t parentless = 0;
  std::int64_t edge_count = 0;
  for (std::int32_t v = 0; v < n; ++v) {
    const std::int32_t p = t.parent[v];
    if (p == -1) {
      ++parentless;
    } else {
      if (p < 0 || p >= n) throw std::logic_error("parent out of range");
      const auto& sibs = t.children[p];
      if (std::find(sibs.begin(), sibs.end(), v) == sibs.end()) {
        throw std::logic_error("parent/children inconsistent");
      }
      ++edge_count;
    }
    for (std::int32_t c : t.children[v]) {
      if (c < 0 || c >= n || t.parent[c] != v) {
        throw std::logic_error("child list inconsistent");
      }
    }
  }
  if (parentless != 1) throw std::logic_error("family tree needs exactly one parentless vertex");
  if (edge_count != n - 1) throw std::logic_error("edge count != n-1");
  // Acyclicity + connectivity: every parent chain must reach the top without
  // revisiting, which depths_from_top checks implicitly.
  depths_from_top(t);
}

std::vector<std::int32_t> depths_from_top(const FamilyTree& t) {
  const std::int32_t n = t.size();
  std::vector<std::int32_t> depth(n, -1);
  std::int32_t top = -1;
  for (std::int32_t v = 0; v < n; ++v) {
    if (t.parent[v] == -1) top = v;
  }
  if (top < 0) throw std::logic_error("no parentless vertex");
  depth[top] = 0;
  std::deque<std::int32_t> queue{top};
  std::int32_t seen = 0;
  while (!queue.empty()) {
    const std::int32_t v = queue.front();
    queue.pop_front();
    ++seen;
    for (std::int32_t c : t.children[v]) {
      depth[c] = depth[v] + 1;
      queue.push_back(c);
    }
  }
  if (seen != n) throw std::logic_error("tree not connected from top");
  return depth;
}

std::int64_t generation_offset(const FamilyTree& t, std::int32_t v, std::int32_t w) {
  // l(v,w) = depth(v) - depth(w): positive when w sits above v.
  std::int32_t dv = 0, dw = 0;
  for (std::int32_t x = v; t.parent[x] != -1; x = t.parent[x]) ++dv;
  for (std::int32_t x = w; t.parent[x] != -1; x = t.parent[x]) ++dw;
  return static_cast<std::int64_t>(dv) - dw;
}

std::optional<std::int32_t> ancestor(const FamilyTree& t, std::int32_t v, std::int32_t n) {
  std::int32_t x = v;
  for (std::int32_t i = 0; i < n; ++i) {
    x = t.parent[x];
    if (x == -1) return std::nullopt;
  }
  return x;
}

VertexSet descendants_n(const FamilyTree& t, std::int32_t v, std::int32_t n) {
  VertexSet out;
  std::vector<std::int32_t> level{v};
  for (std::int32_t step = 0; step < n; ++step) {
    std::vector<std::int32_t> next;
    for (std::int32_t x : level) {
      if (t.is_boundary(x)) out.complete = false;
      next.insert(next.end(), t.children[x].begin(), t.children[x].end());
    }
    level = std::move(next);
  }
  out.verts = std::move(level);
  return out;
}

GenerationSet generation_members(const FamilyTree& t, std::int32_t o, std::int32_t n) {
  GenerationSet out;
  const auto top = ancestor(t, o, n);
  if (!top) return out;  // F^n(o) cut by the window: result invalid
  out.valid = true;
  VertexSet down = descendants_n(t, *top, n);
  out.verts = std::move(down.verts);
  out.complete = down.complete;
  return out;
}

Ball ball_around_root(const FamilyTree& t, std::int32_t radius) {
  Ball ball;
  // Ancestor chain first, then sweep down from each of its vertices within
  // the remaining distance budget.
  std::vector<std::int32_t> chain{t.root};
  while (static_cast<std::int32_t>(chain.size()) <= radius &&
         t.parent[chain.back()] != -1) {
    chain.push_back(t.parent[chain.back()]);
  }
  ball.top = chain.back();
  std::vector<std::int32_t> dist(t.size(), -1);
  std::deque<std::int32_t> queue;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    dist[chain[k]] = static_cast<std::int32_t>(k);
    queue.push_back(chain[k]);
  }
  while (!queue.empty()) {
    const std::int32_t v = queue.front();
    queue.pop_front();
    ball.verts.push_back(v);
    ball.dist.push_back(dist[v]);
    if (dist[v] == radius) continue;
    for (std::int32_t c : t.children[v]) {
      if (dist[c] == -1) {
        dist[c] = dist[v] + 1;
        queue.push_back(c);
      }
    }
  }
  return ball;
}

namespace {

// AHU-style recursive code. Bytes are unambiguous: '(' body ')' with a
// root marker and the type spelled in decimal.
std::string subtree_code(const FamilyTree& t, std::int32_t v, std::int32_t root,
                         const std::vector<std::int32_t>& dist, std::int32_t radius,
                         bool ordered) {
  std::string code = "(";
  if (v == root) code += '*';
  if (t.has_types()) {
    code += std::to_string(t.vtype[v]);
    code += ':';
  }
  if (dist[v] < radius) {
    std::vector<std::string> sub;
    sub.reserve(t.children[v].size());
    for (std::int32_t c : t.children[v]) {
      if (dist[c] != -1) {
        sub.push_back(subtree_code(t, c, root, dist, radius, ordered));
      }
    }
    if (!ordered) std::sort(sub.begin(), sub.end());
    for (const auto& s : sub) code += s;
  }
  code += ')';
  return code;
}

}  // namespace

std::string canonicalize(const FamilyTree& t, std::int32_t radius, bool ordered) {
  const Ball ball = ball_around_root(t, radius);
  std::vector<std::int32_t> dist(t.size(), -1);
  for (std::size_t i = 0; i < ball.verts.size(); ++i) dist[ball.verts[i]] = ball.dist[i];
  return subtree_code(t, ball.top, t.root, dist, radius, ordered);
}

std::string canonical_code_full(const FamilyTree& t, bool ordered) {
  return canonicalize(t, t.size(), ordered);
}

FamilyTree rerooted(const FamilyTree& t, std::int32_t v) {
  FamilyTree out = t;
  out.root = v;
  const auto d = std::abs(generation_offset(t, t.root, v));
  out.valid_radius = static_cast<std::int32_t>(std::max<std::int64_t>(0, t.valid_radius - d));
  return out;
}

FamilyTree prune(const FamilyTree& t, std::int32_t z) {
  if (z < 0) throw std::invalid_argument("prune: z must be >= 0");
  // Keep {v : l(root, v) >= -z}, i.e. everything at most z generations below
  // the root's generation. Parents of kept vertices are kept, so the window
  // stays a single tree with the same top; the cut edge is a real youngest
  // generation of the pruned object, not sampling truncation.
  const auto depth = depths_from_top(t);
  const std::int32_t cutoff = depth[t.root] + z;
  std::vector<std::int32_t> remap(t.size(), -1);
  std::vector<std::int32_t> kept;
  for (std::int32_t v = 0; v < t.size(); ++v) {
    if (depth[v] <= cutoff) {
      remap[v] = static_cast<std::int32_t>(kept.size());
      kept.push_back(v);
    }
  }
  FamilyTree out;
  out.parent.resize(kept.size());
  out.children.resize(kept.size());
  out.boundary.resize(kept.size());
  if (t.has_types()) out.vtype.resize(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::int32_t v = kept[i];
    out.parent[i] = t.parent[v] == -1 ? -1 : remap[t.parent[v]];
    // Vertices at the cut level are leaves of the pruned object itself, so
    // the window is exact there even if the original flagged them.
    out.boundary[i] = depth[v] == cutoff ? 0 : t.boundary[v];
    if (t.has_types()) out.vtype[i] = t.vtype[v];
    for (std::int32_t c : t.children[v]) {
      if (remap[c] != -1) out.children[i].push_back(remap[c]);
    }
  }
  out.root = remap[t.root];
  out.valid_radius = t.valid_radius;
  return out;
}

FamilyTree relabel(const FamilyTree& t, const std::vector<std::int32_t>& perm) {
  FamilyTree out;
  const std::int32_t n = t.size();
  out.parent.assign(n, -1);
  out.children.resize(n);
  out.boundary.assign(n, 0);
  if (t.has_types()) out.vtype.resize(n);
  for (std::int32_t v = 0; v < n; ++v) {
    const std::int32_t nv = perm[v];
    out.parent[nv] = t.parent[v] == -1 ? -1 : perm[t.parent[v]];
    out.boundary[nv] = t.boundary[v];
    if (t.has_types()) out.vtype[nv] = t.vtype[v];
    for (std::int32_t c : t.children[v]) out.children[nv].push_back(perm[c]);
  }
  out.root = perm[t.root];
  out.valid_radius = t.valid_radius;
  return out;
}

void derive_valid_radius(FamilyTree& t, std::int32_t cap) {
  std::vector<std::int32_t> dist(t.size(), -1);
  std::deque<std::int32_t> queue{t.root};
  dist[t.root] = 0;
  std::int32_t vr = cap;
  while (!queue.empty()) {
    const std::int32_t v = queue.front();
    queue.pop_front();
    if (t.is_boundary(v)) vr = std::min(vr, dist[v]);
    const std::int32_t p = t.parent[v];
    if (p != -1 && dist[p] == -1) {
      dist[p] = dist[v] + 1;
      queue.push_back(p);
    }
    for (std::int32_t c : t.children[v]) {
      if (dist[c] == -1) {
        dist[c] = dist[v] + 1;
        queue.push_back(c);
      }
    }
  }
  t.valid_radius = vr;
}

std::string serialize(const FamilyTree& t) {
  std::ostringstream os;
  os << t.root << ' ' << t.valid_radius << '\n';
  for (std::int32_t v = 0; v < t.size(); ++v) {
    std::int32_t child_index = 0;
    if (t.parent[v] != -1) {
      const auto& sibs = t.children[t.parent[v]];
      child_index = static_cast<std::int32_t>(
          std::find(sibs.begin(), sibs.end(), v) - sibs.begin());
    }
    os << v << ' ' << t.parent[v] << ' ' << (t.has_types() ? t.vtype[v] : 0)
       << ' ' << static_cast<int>(t.boundary[v]) << ' ' << child_index << '\n';
  }
  return os.str();
}

FamilyTree deserialize(const std::string& text) {
  std::istringstream is(text);
  FamilyTree t;
  if (!(is >> t.root >> t.valid_radius)) throw std::runtime_error("bad tree header");
  std::int32_t id, parent, type, boundary, child_index;
  std::vector<std::int32_t> types;
  std::vector<std::pair<std::int32_t, std::int32_t>> order;  // (child_index, id) per parent
  std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> slots;
  bool typed = false;
  while (is >> id >> parent >> type >> boundary >> child_index) {
    if (id != static_cast<std::int32_t>(t.parent.size())) {
      throw std::runtime_error("vertex ids must be dense and in order");
    }
    t.parent.push_back(parent);
    t.boundary.push_back(static_cast<std::uint8_t>(boundary));
    types.push_back(type);
    if (type != 0) typed = true;
    slots.emplace_back();
    if (parent >= 0) {
      if (parent >= static_cast<std::int32_t>(slots.size())) {
        throw std::runtime_error("parent appears after child");
      }
      slots[parent].emplace_back(child_index, id);
    }
  }
  t.children.resize(t.parent.size());
  for (std::size_t v = 0; v < slots.size(); ++v) {
    auto& s = slots[v];
    std::sort(s.begin(), s.end());
    for (const auto& [idx, c] : s) t.children[v].push_back(c);
  }
  if (typed) t.vtype = std::move(types);
  validate(t);
  return t;
}

}  // namespace eft
