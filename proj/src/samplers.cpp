#include "eft/samplers.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace eft {

namespace {

constexpr std::int32_t kExactEverywhere = std::numeric_limits<std::int32_t>::max() / 4;

// Grows GW(pi) descendants below queued (vertex, dist) pairs, cutting at
// depth_cap / pop_cap and flagging cut vertices.
void grow_bushes(TreeBuilder& b, const OffspringDistribution& pi, Rng& rng,
                 std::deque<std::pair<std::int32_t, std::int32_t>> frontier,
                 std::int32_t depth_cap, std::int64_t pop_cap) {
  while (!frontier.empty()) {
    const auto [v, dist] = frontier.front();
    frontier.pop_front();
    if (dist >= depth_cap || b.size() >= pop_cap) {
      b.mark_boundary(v);
      continue;
    }
    const std::int64_t k = pi.sample(rng);
    for (std::int64_t i = 0; i < k; ++i) {
      frontier.emplace_back(b.add_vertex(v), dist + 1);
    }
  }
}

}  // namespace

FamilyTree sample_gwt(const OffspringDistribution& pi, std::int64_t pop_cap,
                      std::int32_t depth_cap, std::uint64_t seed) {
  if (pop_cap < 1 || depth_cap < 1) throw std::invalid_argument("caps must be >= 1");
  Rng rng(seed);
  TreeBuilder b;
  const std::int32_t root = b.add_vertex(-1);
  b.set_root(root);
  grow_bushes(b, pi, rng, {{root, 0}}, depth_cap, pop_cap);
  FamilyTree t = b.take();
  derive_valid_radius(t, kExactEverywhere);
  return t;
}

FamilyTree sample_egwt(const OffspringDistribution& pi, std::int32_t spine_height,
                       std::int32_t depth_cap, std::int64_t pop_cap, std::uint64_t seed) {
  if (spine_height < 1) throw std::invalid_argument("spine_height must be >= 1");
  if (pop_cap < 1 || depth_cap < 1) throw std::invalid_argument("caps must be >= 1");
  const OffspringDistribution biased = pi.size_biased();
  Rng rng(seed);
  TreeBuilder b;
  std::deque<std::pair<std::int32_t, std::int32_t>> bush_roots;

  // Spine o_H .. o_0, top-down, so that o_{i-1} lands at a uniform position
  // among o_i's z_i children.
  std::vector<std::int32_t> spine(spine_height + 1, -1);
  spine[spine_height] = b.add_vertex(-1);
  b.mark_boundary(spine[spine_height]);
  for (std::int32_t i = spine_height; i >= 1; --i) {
    if (i <= depth_cap) {
      const std::int64_t z = biased.sample(rng);
      const std::size_t slot = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(z)));
      for (std::int64_t c = 0; c < z; ++c) {
        if (static_cast<std::size_t>(c) == slot) {
          spine[i - 1] = b.add_vertex(spine[i]);
        } else {
          // A sibling hanging off o_i sits at distance i + 1 from the root.
          bush_roots.emplace_back(b.add_vertex(spine[i]), i + 1);
        }
      }
    } else {
      // Spine beyond the window radius: keep the ray, skip the siblings.
      b.mark_boundary(spine[i]);
      spine[i - 1] = b.add_vertex(spine[i]);
    }
  }
  b.set_root(spine[0]);
  bush_roots.emplace_front(spine[0], 0);
  grow_bushes(b, pi, rng, std::move(bush_roots), depth_cap, pop_cap);
  FamilyTree t = b.take();
  derive_valid_radius(t, std::min(spine_height, depth_cap));
  return t;
}

FamilyTree sample_emgwt(const MultiTypeOffspring& params, std::int32_t spine_height,
                        std::int32_t depth_cap, std::int64_t pop_cap, std::uint64_t seed) {
  if (spine_height < 1) throw std::invalid_argument("spine_height must be >= 1");
  if (pop_cap < 1 || depth_cap < 1) throw std::invalid_argument("caps must be >= 1");
  Rng rng(seed);
  TreeBuilder b;
  b.keep_types(true);

  std::vector<std::size_t> spine_type(spine_height + 1);
  spine_type[0] = params.sample_root_type(rng);
  for (std::int32_t i = 0; i < spine_height; ++i) {
    spine_type[i + 1] = params.sample_spine_parent_type(rng, spine_type[i]);
  }

  std::vector<std::int32_t> spine(spine_height + 1, -1);
  spine[spine_height] = b.add_vertex(-1, static_cast<std::int32_t>(spine_type[spine_height]));
  b.mark_boundary(spine[spine_height]);
  // (vertex, dist, type) of bush seeds awaiting plain multi-type growth.
  std::deque<std::tuple<std::int32_t, std::int32_t, std::size_t>> frontier;
  for (std::int32_t i = spine_height; i >= 1; --i) {
    const std::size_t j = spine_type[i];       // spine parent type
    const std::size_t ct = spine_type[i - 1];  // designated child's type
    if (i <= depth_cap) {
      const auto& counts = params.sample_biased(rng, j, ct);
      // Uniform child order over the multiset of child types; the designated
      // spine slot is a uniform pick among the type-ct positions.
      std::vector<std::int32_t> order;
      for (std::size_t ty = 0; ty < counts.size(); ++ty) {
        for (std::int64_t c = 0; c < counts[ty]; ++c) {
          order.push_back(static_cast<std::int32_t>(ty));
        }
      }
      rng.shuffle(order);
      std::vector<std::size_t> matching;
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (order[pos] == static_cast<std::int32_t>(ct)) matching.push_back(pos);
      }
      const std::size_t spine_pos = matching[rng.below(matching.size())];
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (pos == spine_pos) {
          spine[i - 1] = b.add_vertex(spine[i], static_cast<std::int32_t>(ct));
        } else {
          frontier.emplace_back(b.add_vertex(spine[i], order[pos]), i + 1,
                                static_cast<std::size_t>(order[pos]));
        }
      }
    } else {
      b.mark_boundary(spine[i]);
      spine[i - 1] = b.add_vertex(spine[i], static_cast<std::int32_t>(ct));
    }
  }
  b.set_root(spine[0]);
  frontier.emplace_front(spine[0], 0, spine_type[0]);

  while (!frontier.empty()) {
    const auto [v, dist, ty] = frontier.front();
    frontier.pop_front();
    if (dist >= depth_cap || b.size() >= pop_cap) {
      b.mark_boundary(v);
      continue;
    }
    const auto& counts = params.sample_plain(rng, ty);
    std::vector<std::int32_t> order;
    for (std::size_t cty = 0; cty < counts.size(); ++cty) {
      for (std::int64_t c = 0; c < counts[cty]; ++c) order.push_back(static_cast<std::int32_t>(cty));
    }
    rng.shuffle(order);
    for (std::int32_t cty : order) {
      frontier.emplace_back(b.add_vertex(v, cty), dist + 1, static_cast<std::size_t>(cty));
    }
  }
  FamilyTree t = b.take();
  derive_valid_radius(t, std::min(spine_height, depth_cap));
  return t;
}

FamilyTree sample_canopy(std::int32_t d, double d_tilde, std::int32_t depth_cap,
                         std::uint64_t seed) {
  if (d < 2 || d_tilde <= 1.0) throw std::invalid_argument("canopy needs d >= 2, d_tilde > 1");
  Rng rng(seed);
  const std::int32_t layer0 =
      static_cast<std::int32_t>(rng.geometric_minus_one(1.0 - 1.0 / d_tilde));
  TreeBuilder b;
  b.keep_types(true);
  // (vertex, dist, layer); a vertex in layer L > 0 has exactly d children in
  // layer L-1, a layer-0 vertex is a leaf.
  std::deque<std::tuple<std::int32_t, std::int32_t, std::int32_t>> frontier;

  if (depth_cap == 0) {
    const std::int32_t root = b.add_vertex(-1, layer0);
    b.set_root(root);
    b.mark_boundary(root);
    FamilyTree t = b.take();
    derive_valid_radius(t, 0);
    return t;
  }

  std::vector<std::int32_t> chain(depth_cap + 1);
  chain[depth_cap] = b.add_vertex(-1, layer0 + depth_cap);
  b.mark_boundary(chain[depth_cap]);
  for (std::int32_t k = depth_cap; k >= 1; --k) {
    const std::int32_t child_layer = layer0 + k - 1;
    chain[k - 1] = b.add_vertex(chain[k], child_layer);
    if (k == depth_cap) continue;  // siblings of chain[k-1] fall outside the ball
    for (std::int32_t extra = 0; extra < d - 1; ++extra) {
      frontier.emplace_back(b.add_vertex(chain[k], child_layer), k + 1, child_layer);
    }
  }
  b.set_root(chain[0]);
  frontier.emplace_front(chain[0], 0, layer0);

  while (!frontier.empty()) {
    const auto [v, dist, layer] = frontier.front();
    frontier.pop_front();
    if (layer == 0) continue;  // real leaf
    if (dist >= depth_cap) {
      b.mark_boundary(v);
      continue;
    }
    for (std::int32_t c = 0; c < d; ++c) {
      frontier.emplace_back(b.add_vertex(v, layer - 1), dist + 1, layer - 1);
    }
  }
  FamilyTree t = b.take();
  derive_valid_radius(t, depth_cap);
  return t;
}

Joining make_joining(const TreeSampler& component, std::int32_t window, std::uint64_t seed) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  Joining out;
  for (std::int32_t i = -window; i <= window; ++i) {
    const FamilyTree part =
        component(Rng::stream(seed, static_cast<std::uint64_t>(i + window)).next_u64());
    const std::int32_t base = out.tree.size();
    for (std::int32_t v = 0; v < part.size(); ++v) {
      out.tree.parent.push_back(part.parent[v] == -1 ? -1 : part.parent[v] + base);
      out.tree.boundary.push_back(part.boundary[v]);
      out.tree.children.emplace_back();
      for (std::int32_t c : part.children[v]) out.tree.children.back().push_back(c + base);
      out.component.push_back(i);
    }
    out.chain.push_back(part.root + base);
  }
  for (std::size_t i = 0; i + 1 < out.chain.size(); ++i) {
    out.tree.parent[out.chain[i]] = out.chain[i + 1];
    out.tree.children[out.chain[i + 1]].push_back(out.chain[i]);
  }
  out.tree.boundary[out.chain.front()] = 1;  // next younger component is cut
  out.tree.root = out.chain[static_cast<std::size_t>(window)];
  derive_valid_radius(out.tree, window);
  return out;
}

FamilyTree join_stationary(const TreeSampler& component, std::int32_t window,
                           std::uint64_t seed) {
  return make_joining(component, window, seed).tree;
}

std::vector<FamilyTree> join_typical_samples(const TreeSampler& component, std::int32_t window,
                                             std::size_t n, std::uint64_t seed) {
  // Bias the joining by |V(T_0)| and move the root uniformly into T_0,
  // realized by importance resampling over a larger batch.
  const std::size_t batch = 10 * n;
  std::vector<Joining> pool;
  pool.reserve(batch);
  std::vector<double> cdf;
  double total = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    pool.push_back(make_joining(component, window, Rng::stream(seed, i).next_u64()));
    const auto& comp = pool.back().component;
    total += static_cast<double>(std::count(comp.begin(), comp.end(), 0));
    cdf.push_back(total);
  }
  for (double& x : cdf) x /= total;
  Rng rng(Rng::stream(seed, batch + 1).next_u64());
  std::vector<FamilyTree> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Joining& j = pool[rng.from_cdf(cdf)];
    std::vector<std::int32_t> zero;
    for (std::int32_t v = 0; v < j.tree.size(); ++v) {
      if (j.component[v] == 0) zero.push_back(v);
    }
    out.push_back(rerooted(j.tree, zero[rng.below(zero.size())]));
  }
  return out;
}

FamilyTree sample_correlated_control(const OffspringDistribution& pi,
                                     std::int32_t spine_height, std::int32_t depth_cap,
                                     std::uint64_t seed) {
  if (spine_height < 2) throw std::invalid_argument("control needs spine_height >= 2");
  Rng rng(seed);
  TreeBuilder b;
  std::vector<std::int32_t> spine(spine_height + 1, -1);
  spine[spine_height] = b.add_vertex(-1);
  b.mark_boundary(spine[spine_height]);
  const OffspringDistribution biased = pi.size_biased();
  std::deque<std::pair<std::int32_t, std::int32_t>> bush_roots;
  for (std::int32_t i = spine_height; i >= 2; --i) {
    const std::int64_t z = biased.sample(rng);
    const std::size_t slot = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(z)));
    for (std::int64_t c = 0; c < z; ++c) {
      if (static_cast<std::size_t>(c) == slot) {
        spine[i - 1] = b.add_vertex(spine[i]);
      } else {
        bush_roots.emplace_back(b.add_vertex(spine[i]), i + 1);
      }
    }
  }
  // The dependence defect: the root's sibling count is a copy of the root's
  // own child count.
  const std::int64_t root_children = pi.sample(rng);
  spine[0] = b.add_vertex(spine[1]);
  b.set_root(spine[0]);
  for (std::int64_t c = 0; c < root_children; ++c) {
    bush_roots.emplace_back(b.add_vertex(spine[1]), 2);
  }
  for (std::int64_t c = 0; c < root_children; ++c) {
    bush_roots.emplace_back(b.add_vertex(spine[0]), 1);
  }
  grow_bushes(b, pi, rng, std::move(bush_roots), depth_cap, 1 << 20);
  FamilyTree t = b.take();
  derive_valid_radius(t, std::min(spine_height, depth_cap));
  return t;
}

}  // namespace eft
