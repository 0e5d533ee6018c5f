#include "eft/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace eft {

VertexShift identity_shift() {
  return {"identity", [](const Network&, std::int32_t v) { return v; }};
}

VertexShift min_mark_neighbor_shift() {
  return {"min-mark-neighbor", [](const Network& net, std::int32_t v) {
            std::int32_t best = v;
            double best_mark = 0.0;
            bool found = false;
            for (std::int32_t e : net.adj[v]) {
              const std::int32_t w = net.other_end(e, v);
              if (w == v) continue;
              if (!found || net.vmark[w] < best_mark) {
                best = w;
                best_mark = net.vmark[w];
                found = true;
              } else if (net.vmark[w] == best_mark && w != best) {
                return v;  // tie
              }
            }
            return best;
          }};
}

VertexShift min_mark_global_shift() {
  return {"min-mark-global", [](const Network& net, std::int32_t v) {
            std::int32_t best = v;
            for (std::int32_t w = 0; w < net.size(); ++w) {
              if (net.vmark[w] < net.vmark[best]) best = w;
            }
            return best;
          }};
}

VertexShift parent_shift() {
  return {"parent", [](const Network& net, std::int32_t v) {
            for (std::int32_t e : net.adj[v]) {
              if (net.half_mark(e, v) >= 1.0) return net.other_end(e, v);
            }
            return v;  // the top
          }};
}

FGraph build_f_graph(const Network& net, const VertexShift& f) {
  FGraph out(net.size());
  for (std::int32_t v = 0; v < net.size(); ++v) {
    const std::int32_t w = f.apply(net, v);
    if (w < 0 || w >= net.size()) throw std::logic_error("vertex-shift left the network");
    out[v] = w;
  }
  return out;
}

FoliationResult compute_foliation(const FGraph& fg) {
  const std::int32_t n = static_cast<std::int32_t>(fg.size());
  FoliationResult result;
  if (n == 0) return result;

  // Undirected components of the f-graph.
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::vector<std::int32_t>> members;
  {
    std::vector<std::vector<std::int32_t>> preimages(n);
    for (std::int32_t v = 0; v < n; ++v) preimages[fg[v]].push_back(v);
    for (std::int32_t s = 0; s < n; ++s) {
      if (comp[s] != -1) continue;
      const std::int32_t id = static_cast<std::int32_t>(members.size());
      members.emplace_back();
      std::vector<std::int32_t> stack{s};
      comp[s] = id;
      while (!stack.empty()) {
        const std::int32_t v = stack.back();
        stack.pop_back();
        members[id].push_back(v);
        if (comp[fg[v]] == -1) {
          comp[fg[v]] = id;
          stack.push_back(fg[v]);
        }
        for (std::int32_t w : preimages[v]) {
          if (comp[w] == -1) {
            comp[w] = id;
            stack.push_back(w);
          }
        }
      }
    }
  }

  // f^N with N = 2^ceil(log2 n) >= n by pointer doubling; bucketing by it
  // yields the foils, and its image is the cycle set.
  FGraph power = fg;
  for (std::int32_t reach = 1; reach < n; reach *= 2) {
    FGraph next(n);
    for (std::int32_t v = 0; v < n; ++v) next[v] = power[power[v]];
    power = std::move(next);
  }

  for (auto& verts : members) {
    FoilComponent c;
    std::sort(verts.begin(), verts.end());
    c.vertices = verts;

    // Walk the unique cycle starting from any deep image.
    std::int32_t x = power[verts.front()];
    do {
      c.cycle.push_back(x);
      x = fg[x];
    } while (x != c.cycle.front());

    // Foils keyed by the deep image, ordered along the cycle.
    for (std::int32_t cyc : c.cycle) {
      c.foils.emplace_back();
      for (std::int32_t v : verts) {
        if (power[v] == cyc) c.foils.back().push_back(v);
      }
    }

    // D_n(v) nonempty for all n <= |V| iff v is a deep image.
    std::vector<std::uint8_t> hit(n, 0);
    for (std::int32_t v : verts) hit[power[v]] = 1;
    for (std::int32_t v : verts) {
      if (hit[v]) c.f_infinity.push_back(v);
    }
    result.components.push_back(std::move(c));
  }
  return result;
}

std::string foliation_csv(const FoliationResult& r) {
  std::ostringstream os;
  os << "component_id,size,cycle_len,n_foils,foil_sizes\n";
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    const auto& c = r.components[i];
    os << i << ',' << c.vertices.size() << ',' << c.cycle.size() << ',' << c.foils.size() << ',';
    for (std::size_t k = 0; k < c.foils.size(); ++k) {
      if (k) os << ';';
      os << c.foils[k].size();
    }
    os << '\n';
  }
  return os.str();
}

Drainage drainage_sim(std::int32_t width, std::int32_t height, DrainageRule rule,
                      std::uint64_t seed) {
  if (width < 2 || height < 2 || width % 2 || height % 2) {
    throw std::invalid_argument("drainage wants even width and height >= 2");
  }
  Rng rng(seed);
  const std::int32_t cols = width / 2;
  const std::int32_t n = cols * height;
  Network net = make_network(n);
  // Site (x, y), x + y even: x = 2k + (y mod 2), id = y * cols + k.
  const auto vert = [&](std::int32_t x, std::int32_t y) {
    x = ((x % width) + width) % width;
    y = ((y % height) + height) % height;
    return y * cols + (x - (y % 2)) / 2;
  };
  const std::uint64_t phase = rng.below(2);
  std::vector<std::uint8_t> block_choice;
  for (std::int32_t y = 0; y < height; ++y) {
    if (rule == DrainageRule::kStationaryBlock) {
      block_choice.assign(static_cast<std::size_t>(cols) / 2 + 2, 0);
      for (auto& c : block_choice) c = static_cast<std::uint8_t>(rng.below(2));
    }
    for (std::int32_t k = 0; k < cols; ++k) {
      const std::int32_t x = 2 * k + (y % 2);
      bool right;
      if (rule == DrainageRule::kIidUniform) {
        right = rng.below(2) == 1;
      } else {
        right = block_choice[(k + phase) / 2] == 1;
      }
      const std::int32_t target = vert(right ? x + 1 : x - 1, y - 1);
      add_edge(net, vert(x, y), target, 1.0, 0.0);
    }
  }
  VertexShift shift{"drainage", [](const Network& g, std::int32_t v) {
                      for (std::int32_t e : g.adj[v]) {
                        if (g.half_mark(e, v) >= 1.0) return g.other_end(e, v);
                      }
                      return v;
                    }};
  return {std::move(net), std::move(shift)};
}

std::vector<std::int32_t> royal_successor_map(const FamilyTree& t, bool wrap) {
  const std::int32_t n = t.size();
  std::vector<std::int32_t> next(n, -1);
  std::int32_t top = -1;
  for (std::int32_t v = 0; v < n; ++v) {
    if (t.parent[v] == -1) top = v;
  }
  for (std::int32_t v = 0; v < n; ++v) {
    if (!t.children[v].empty()) {
      // Heir apparent: the eldest child, unless the window hides children.
      if (!t.is_boundary(v)) next[v] = t.children[v].front();
      continue;
    }
    if (t.is_boundary(v)) continue;  // true child set unknown
    // Climb to the nearest ancestor with a next sibling. A boundary ancestor
    // may hide siblings in unknown order, so the successor is unresolvable.
    std::int32_t x = v;
    while (true) {
      const std::int32_t p = t.parent[x];
      if (p == -1) {
        if (wrap) next[v] = top;
        break;
      }
      if (t.is_boundary(p)) break;
      const auto& sibs = t.children[p];
      const auto it = std::find(sibs.begin(), sibs.end(), x);
      if (it + 1 != sibs.end()) {
        next[v] = *(it + 1);
        break;
      }
      x = p;
    }
  }
  return next;
}

std::vector<std::int32_t> foil_members_brute(const FamilyTree& t, std::int32_t o, std::int32_t n) {
  std::vector<std::int32_t> out;
  const auto target = ancestor(t, o, n);
  if (!target) return out;
  for (std::int32_t v = 0; v < t.size(); ++v) {
    if (ancestor(t, v, n) == target) out.push_back(v);
  }
  return out;
}

}  // namespace eft
