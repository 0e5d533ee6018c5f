#include "eft/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "eft/family_tree.hpp"

namespace eft {

Network make_network(std::int32_t n) {
  Network net;
  net.adj.resize(n);
  net.vmark.assign(n, 0.0);
  return net;
}

std::int32_t add_edge(Network& net, std::int32_t a, std::int32_t b,
                      double mark_a, double mark_b) {
  const std::int32_t id = static_cast<std::int32_t>(net.edges.size());
  net.edges.push_back({a, b, mark_a, mark_b});
  net.adj[a].push_back(id);
  if (b != a) net.adj[b].push_back(id);
  return id;
}

Network tree_as_network(const FamilyTree& t) {
  Network net = make_network(t.size());
  for (std::int32_t v = 0; v < t.size(); ++v) {
    if (t.parent[v] != -1) add_edge(net, v, t.parent[v], 1.0, 0.0);
    if (t.has_types()) net.vmark[v] = static_cast<double>(t.vtype[v]);
  }
  return net;
}

Network relabel(const Network& net, const std::vector<std::int32_t>& perm) {
  Network out = make_network(net.size());
  out.vmark2 = net.vmark2.empty() ? net.vmark2
                                  : std::vector<std::array<double, 2>>(net.size());
  std::vector<std::int32_t> order(net.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
  // Edge insertion order follows the relabeled endpoints so adjacency lists
  // come out in a label-determined order.
  std::sort(order.begin(), order.end(), [&](std::int32_t x, std::int32_t y) {
    const auto key = [&](std::int32_t e) {
      const auto& ed = net.edges[e];
      return std::minmax(perm[ed.a], perm[ed.b]);
    };
    return key(x) < key(y);
  });
  for (std::int32_t e : order) {
    const auto& ed = net.edges[e];
    add_edge(out, perm[ed.a], perm[ed.b], ed.mark_a, ed.mark_b);
  }
  for (std::int32_t v = 0; v < net.size(); ++v) {
    out.vmark[perm[v]] = net.vmark[v];
    if (!net.vmark2.empty()) out.vmark2[perm[v]] = net.vmark2[v];
  }
  out.connected = net.connected;
  return out;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  h *= 0xBF58476D1CE4E5B9ULL;
  return h ^ (h >> 29);
}

std::int64_t discretize(double x) {
  return static_cast<std::int64_t>(std::llround(x * 4294967296.0));
}

}  // namespace

std::string network_root_code(const Network& net, std::int32_t root, std::int32_t radius) {
  std::vector<std::int32_t> dist(net.size(), -1);
  std::vector<std::int32_t> ball;
  dist[root] = 0;
  std::deque<std::int32_t> queue{root};
  while (!queue.empty()) {
    const std::int32_t v = queue.front();
    queue.pop_front();
    ball.push_back(v);
    if (dist[v] == radius) continue;
    for (std::int32_t e : net.adj[v]) {
      const std::int32_t w = net.other_end(e, v);
      if (dist[w] == -1) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::uint64_t> color(net.size(), 0);
  for (std::int32_t v : ball) {
    color[v] = mix(mix(0x5EEDULL, static_cast<std::uint64_t>(discretize(net.vmark[v]))),
                   static_cast<std::uint64_t>(dist[v]));
    if (!net.vmark2.empty()) {
      color[v] = mix(color[v], static_cast<std::uint64_t>(discretize(net.vmark2[v][0])));
      color[v] = mix(color[v], static_cast<std::uint64_t>(discretize(net.vmark2[v][1])));
    }
  }
  const std::size_t rounds = ball.size();
  std::vector<std::uint64_t> next(net.size(), 0);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::int32_t v : ball) {
      std::vector<std::uint64_t> nb;
      for (std::int32_t e : net.adj[v]) {
        const std::int32_t w = net.other_end(e, v);
        if (dist[w] == -1) continue;
        std::uint64_t h = mix(static_cast<std::uint64_t>(discretize(net.half_mark(e, v))),
                              static_cast<std::uint64_t>(discretize(net.half_mark(e, w))));
        nb.push_back(mix(h, color[w]));
      }
      std::sort(nb.begin(), nb.end());
      std::uint64_t h = color[v];
      for (std::uint64_t x : nb) h = mix(h, x);
      next[v] = h;
    }
    for (std::int32_t v : ball) color[v] = next[v];
  }
  std::vector<std::uint64_t> all;
  all.reserve(ball.size());
  for (std::int32_t v : ball) all.push_back(color[v]);
  std::sort(all.begin(), all.end());
  std::uint64_t h = color[root];
  for (std::uint64_t x : all) h = mix(h, x);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace eft
