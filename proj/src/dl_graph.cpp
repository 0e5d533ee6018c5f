#include "eft/dl_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "eft/rng.hpp"

namespace eft {

namespace {

std::int64_t pair_key(std::int32_t v1, std::int32_t v2, std::int32_t n2) {
  return static_cast<std::int64_t>(v1) * n2 + v2;
}

}  // namespace

DLWindow build_dl_window(const FamilyTree& t1, const FamilyTree& t2, std::int32_t radius,
                         std::uint64_t mark_seed) {
  DLWindow win;
  win.t1 = t1;
  win.t2 = t2;
  const Ball b1 = ball_around_root(t1, radius);
  const Ball b2 = ball_around_root(t2, radius);
  const auto d1 = depths_from_top(t1);
  const auto d2 = depths_from_top(t2);

  for (std::size_t i = 0; i < b2.verts.size(); ++i) {
    const std::int32_t v2 = b2.verts[i];
    if (!t2.is_boundary(v2) && t2.children[v2].empty()) {
      throw std::domain_error("build_dl_window: T2 has a childless interior vertex");
    }
  }

  // level(v) = l(o1, v1) = depth1(o1) - depth1(v1); pairs need
  // l(o1, v1) + l(o2, v2) = 0.
  std::map<std::int32_t, std::vector<std::int32_t>> by_level2;
  for (std::int32_t v2 : b2.verts) {
    by_level2[d2[t2.root] - d2[v2]].push_back(v2);
  }
  for (std::int32_t v1 : b1.verts) {
    const std::int32_t lvl = d1[t1.root] - d1[v1];
    const auto it = by_level2.find(-lvl);
    if (it == by_level2.end()) continue;
    for (std::int32_t v2 : it->second) {
      win.index.emplace(pair_key(v1, v2, t2.size()), win.size());
      win.verts.emplace_back(v1, v2);
      win.level.push_back(lvl);
    }
  }
  win.root = win.index.at(pair_key(t1.root, t2.root, t2.size()));

  Rng rng(mark_seed);
  win.mark.resize(win.verts.size());
  for (auto& m : win.mark) m = {rng.unit(), rng.unit()};

  win.out.resize(win.verts.size());
  win.interior.assign(win.verts.size(), 0);
  for (std::int32_t i = 0; i < win.size(); ++i) {
    const auto [v1, v2] = win.verts[static_cast<std::size_t>(i)];
    const std::int32_t p1 = t1.parent[v1];
    if (p1 == -1 || t2.is_boundary(v2)) continue;
    bool all_present = !t2.children[v2].empty();
    for (std::int32_t c : t2.children[v2]) {
      const auto it = win.index.find(pair_key(p1, c, t2.size()));
      if (it == win.index.end()) {
        all_present = false;
        break;
      }
      win.out[static_cast<std::size_t>(i)].push_back(it->second);
    }
    if (all_present) {
      win.interior[static_cast<std::size_t>(i)] = 1;
    } else {
      win.out[static_cast<std::size_t>(i)].clear();
    }
  }
  return win;
}

std::vector<std::int32_t> dl_shift(const DLWindow& win) {
  std::vector<std::int32_t> f(win.verts.size(), -1);
  for (std::int32_t v = 0; v < win.size(); ++v) {
    if (!win.interior[static_cast<std::size_t>(v)]) continue;
    const auto& cands = win.out[static_cast<std::size_t>(v)];
    const std::size_t b = cands.size();
    std::size_t idx = static_cast<std::size_t>(win.mark[static_cast<std::size_t>(v)][0] *
                                               static_cast<double>(b));
    if (idx >= b) idx = b - 1;
    std::vector<std::pair<double, std::int32_t>> order;
    order.reserve(b);
    for (std::int32_t c : cands) {
      order.emplace_back(win.mark[static_cast<std::size_t>(c)][1], c);
    }
    std::sort(order.begin(), order.end());
    f[static_cast<std::size_t>(v)] = order[idx].second;
  }
  return f;
}

bool dl_check_identities(const DLWindow& win, std::string* why) {
  const auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const auto d1 = depths_from_top(win.t1);
  const auto d2 = depths_from_top(win.t2);
  // Direct recount of in-edges from the out lists.
  std::vector<std::size_t> in_deg(win.verts.size(), 0);
  for (std::int32_t v = 0; v < win.size(); ++v) {
    for (std::int32_t w : win.out[static_cast<std::size_t>(v)]) {
      ++in_deg[static_cast<std::size_t>(w)];
    }
  }
  for (std::int32_t i = 0; i < win.size(); ++i) {
    const auto [v1, v2] = win.verts[static_cast<std::size_t>(i)];
    const std::int32_t l1 = d1[win.t1.root] - d1[v1];
    const std::int32_t l2 = d2[win.t2.root] - d2[v2];
    if (l1 + l2 != 0) return fail("level sum nonzero");
    if (l1 != win.level[static_cast<std::size_t>(i)]) return fail("stored level wrong");
    if (!win.interior[static_cast<std::size_t>(i)]) continue;
    if (win.out[static_cast<std::size_t>(i)].size() != win.t2.children[v2].size()) {
      return fail("out-degree != d_1(v2)");
    }
    // In-degree identity where the full in-neighborhood is visible: every
    // in-neighbor (c1, F(v2)) must be present and interior.
    const std::int32_t p2 = win.t2.parent[v2];
    if (win.t1.is_boundary(v1) || p2 == -1) continue;
    bool visible = true;
    for (std::int32_t c1 : win.t1.children[v1]) {
      const auto it = win.index.find(pair_key(c1, p2, win.t2.size()));
      if (it == win.index.end() || !win.interior[static_cast<std::size_t>(it->second)]) {
        visible = false;
        break;
      }
    }
    if (visible && in_deg[static_cast<std::size_t>(i)] != win.t1.children[v1].size()) {
      return fail("in-degree != d_1(v1)");
    }
  }
  return true;
}

FamilyTree dl_component_tree(const DLWindow& win) {
  const std::vector<std::int32_t> f = dl_shift(win);
  std::vector<std::vector<std::int32_t>> preimage(win.verts.size());
  for (std::int32_t v = 0; v < win.size(); ++v) {
    if (f[static_cast<std::size_t>(v)] != -1) preimage[static_cast<std::size_t>(f[static_cast<std::size_t>(v)])].push_back(v);
  }
  // Ancestor chain of the root under f, then all certified descendants.
  std::vector<std::int32_t> chain{win.root};
  while (f[static_cast<std::size_t>(chain.back())] != -1) {
    chain.push_back(f[static_cast<std::size_t>(chain.back())]);
  }
  // A vertex's f-children are certified when every candidate in
  // children1(v1) x {F(v2)} is present and resolved.
  const auto children_certified = [&](std::int32_t v) {
    const auto [v1, v2] = win.verts[static_cast<std::size_t>(v)];
    if (win.t1.is_boundary(v1)) return false;
    const std::int32_t p2 = win.t2.parent[v2];
    if (p2 == -1) return false;
    for (std::int32_t c1 : win.t1.children[v1]) {
      const auto it = win.index.find(pair_key(c1, p2, win.t2.size()));
      if (it == win.index.end() || f[static_cast<std::size_t>(it->second)] == -1) return false;
    }
    return true;
  };

  TreeBuilder b;
  std::vector<std::int32_t> id_of(win.verts.size(), -1);
  const std::int32_t top = chain.back();
  id_of[static_cast<std::size_t>(top)] = b.add_vertex(-1);
  b.mark_boundary(id_of[static_cast<std::size_t>(top)]);
  for (std::size_t k = chain.size() - 1; k > 0; --k) {
    // walk down the chain so parents exist before children
    const std::int32_t parent = chain[k];
    const std::int32_t child = chain[k - 1];
    id_of[static_cast<std::size_t>(child)] =
        b.add_vertex(id_of[static_cast<std::size_t>(parent)]);
  }
  std::deque<std::int32_t> queue(chain.begin(), chain.end());
  std::vector<std::uint8_t> expanded(win.verts.size(), 0);
  while (!queue.empty()) {
    const std::int32_t v = queue.front();
    queue.pop_front();
    if (expanded[static_cast<std::size_t>(v)]) continue;
    expanded[static_cast<std::size_t>(v)] = 1;
    if (!children_certified(v)) {
      b.mark_boundary(id_of[static_cast<std::size_t>(v)]);
      continue;
    }
    for (std::int32_t c : preimage[static_cast<std::size_t>(v)]) {
      if (id_of[static_cast<std::size_t>(c)] == -1) {
        id_of[static_cast<std::size_t>(c)] = b.add_vertex(id_of[static_cast<std::size_t>(v)]);
        queue.push_back(c);
      }
    }
  }
  b.set_root(id_of[static_cast<std::size_t>(win.root)]);
  FamilyTree t = b.take();
  derive_valid_radius(t, t.size());
  return t;
}

DLOffspringReport dl_offspring_check(const DLSampler& sampler, double m1, double m2,
                                     std::uint64_t n, std::uint64_t seed, double z_max) {
  RunningStats mean_k, centered;
  std::map<std::pair<std::int64_t, std::int64_t>, std::map<std::int64_t, std::uint64_t>> cells;
  for (std::uint64_t i = 0; i < n; ++i) {
    const DLWindow win = sampler(Rng::stream(seed, i).next_u64());
    const std::vector<std::int32_t> f = dl_shift(win);
    const auto [o1, o2] = win.verts[static_cast<std::size_t>(win.root)];
    if (win.t1.is_boundary(o1)) throw std::logic_error("dl_offspring_check: o1 boundary");
    const std::int32_t p2 = win.t2.parent[o2];
    if (p2 == -1 || win.t2.is_boundary(p2)) {
      throw std::logic_error("dl_offspring_check: F(o2) not visible");
    }
    const std::int64_t a = static_cast<std::int64_t>(win.t1.children[o1].size());
    const std::int64_t bb = static_cast<std::int64_t>(win.t2.children[p2].size());
    std::int64_t k = 0;
    for (std::int32_t c1 : win.t1.children[o1]) {
      const auto it = win.index.find(pair_key(c1, p2, win.t2.size()));
      if (it == win.index.end() || f[static_cast<std::size_t>(it->second)] == -1) {
        throw std::logic_error("dl_offspring_check: candidate unresolved, enlarge the window");
      }
      if (f[static_cast<std::size_t>(it->second)] == win.root) ++k;
    }
    mean_k.add(static_cast<double>(k));
    centered.add(static_cast<double>(k) - static_cast<double>(a) / static_cast<double>(bb));
    ++cells[{a, bb}][k];
  }
  DLOffspringReport rep;
  rep.mean_check.test = "dl-offspring-mean";
  rep.mean_check.lhs = mean_k.mean();
  rep.mean_check.rhs = m1 / m2;
  rep.mean_check.se = mean_k.stderr_mean();
  rep.mean_check.n = mean_k.count();
  rep.mean_check.z = rep.mean_check.se > 0.0
                         ? (rep.mean_check.lhs - rep.mean_check.rhs) / rep.mean_check.se
                         : 0.0;
  rep.mean_check.pass = std::fabs(rep.mean_check.z) <= z_max;

  rep.centered_binomial.test = "dl-offspring-centered";
  rep.centered_binomial.lhs = centered.mean();
  rep.centered_binomial.rhs = 0.0;
  rep.centered_binomial.se = centered.stderr_mean();
  rep.centered_binomial.n = centered.count();
  rep.centered_binomial.z =
      rep.centered_binomial.se > 0.0 ? centered.mean() / rep.centered_binomial.se : 0.0;
  rep.centered_binomial.pass = std::fabs(rep.centered_binomial.z) <= z_max;

  // Goodness of fit of the most common (a, b) cell with a genuine binomial.
  std::pair<std::int64_t, std::int64_t> modal{-1, -1};
  std::uint64_t best = 0;
  for (const auto& [cell, hist] : cells) {
    if (cell.first == 0) continue;
    std::uint64_t count = 0;
    for (const auto& [k, c] : hist) count += c;
    if (count > best) {
      best = count;
      modal = cell;
    }
  }
  rep.modal_cell_fit.test = "dl-offspring-binomial-cell";
  if (modal.first < 0) {
    rep.modal_cell_fit.pass = true;
    rep.modal_cell_fit.note = "no nondegenerate cell";
  } else {
    const auto [a, bb] = modal;
    std::vector<std::uint64_t> observed(static_cast<std::size_t>(a) + 1, 0);
    for (const auto& [k, c] : cells[modal]) observed[static_cast<std::size_t>(k)] = c;
    std::vector<double> expected(static_cast<std::size_t>(a) + 1, 0.0);
    const double p = 1.0 / static_cast<double>(bb);
    for (std::int64_t k = 0; k <= a; ++k) {
      expected[static_cast<std::size_t>(k)] =
          std::exp(std::lgamma(a + 1) - std::lgamma(k + 1) - std::lgamma(a - k + 1) +
                   k * std::log(p) + (a - k) * std::log1p(-p));
    }
    const ChiSquare cs = chi_square_goodness(observed, expected);
    rep.modal_cell_fit.lhs = cs.p_value;
    rep.modal_cell_fit.rhs = 0.01;
    rep.modal_cell_fit.z = cs.statistic;
    rep.modal_cell_fit.n = best;
    rep.modal_cell_fit.pass = cs.df <= 0 || cs.p_value > 0.01;
    rep.modal_cell_fit.note = "cell a=" + std::to_string(a) + " b=" + std::to_string(bb);
  }
  rep.pass = rep.mean_check.pass && rep.centered_binomial.pass && rep.modal_cell_fit.pass;
  return rep;
}

EstimatorReport dl_mtp_check(const DLSampler& sampler, double m1, double m2, bool weighted,
                             std::uint64_t n, std::uint64_t seed, double z_max) {
  const double ratio = m1 / m2;
  RunningStats lhs, rhs, diff;
  for (std::uint64_t i = 0; i < n; ++i) {
    const DLWindow win = sampler(Rng::stream(seed, i).next_u64());
    const std::vector<std::int32_t> f = dl_shift(win);
    if (f[static_cast<std::size_t>(win.root)] == -1) {
      throw std::logic_error("dl_mtp_check: f undefined at the root");
    }
    const double out_mass = 1.0;
    double in_mass = 0.0;
    const auto [o1, o2] = win.verts[static_cast<std::size_t>(win.root)];
    const std::int32_t p2 = win.t2.parent[o2];
    for (std::int32_t c1 : win.t1.children[o1]) {
      const auto it = win.index.find(pair_key(c1, p2, win.t2.size()));
      if (it == win.index.end() || f[static_cast<std::size_t>(it->second)] == -1) {
        throw std::logic_error("dl_mtp_check: candidate unresolved, enlarge the window");
      }
      if (f[static_cast<std::size_t>(it->second)] == win.root) {
        in_mass += weighted ? std::pow(ratio, win.level[static_cast<std::size_t>(it->second)])
                            : 1.0;
      }
    }
    lhs.add(out_mass);
    rhs.add(in_mass);
    diff.add(out_mass - in_mass);
  }
  EstimatorReport rep;
  rep.test = weighted ? "dl-mtp-weighted" : "dl-mtp-unweighted";
  rep.lhs = lhs.mean();
  rep.rhs = rhs.mean();
  rep.se = diff.stderr_mean();
  rep.n = diff.count();
  rep.z = rep.se > 0.0 ? (rep.lhs - rep.rhs) / rep.se : (rep.lhs == rep.rhs ? 0.0 : INFINITY);
  rep.pass = std::fabs(rep.z) <= z_max;
  return rep;
}

FamilyTree sample_dl_component_age_dependent(const OffspringDistribution& pi1,
                                             const OffspringDistribution& pi2,
                                             std::int32_t radius, std::uint64_t seed) {
  if (pi2.prob(0) != Rat(0)) {
    throw std::domain_error("age-dependent DL sampler: pi2 must have no mass at 0");
  }
  Rng rng(seed);
  const OffspringDistribution biased1 = pi1.size_biased();
  const OffspringDistribution biased2 = pi2.size_biased();
  // One shared thinning variable per level: a vertex at level j keeps each
  // potential child with probability 1 / b_j. Levels count f-depth below the
  // root; the spine vertex o_i sits at level -i.
  std::map<std::int32_t, std::int64_t> b;
  for (std::int32_t j = -radius - 1; j <= radius + 1; ++j) {
    b[j] = j >= 0 ? biased2.sample(rng) : pi2.sample(rng);
  }

  TreeBuilder builder;
  std::vector<std::int32_t> spine(static_cast<std::size_t>(radius) + 1, -1);
  spine[static_cast<std::size_t>(radius)] = builder.add_vertex(-1);
  builder.mark_boundary(spine[static_cast<std::size_t>(radius)]);
  // (vertex, f-distance from root, level)
  std::deque<std::tuple<std::int32_t, std::int32_t, std::int32_t>> frontier;
  for (std::int32_t i = radius; i >= 1; --i) {
    const std::int64_t z = biased1.sample(rng);
    const std::size_t slot = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(z)));
    for (std::int64_t c = 0; c < z; ++c) {
      if (static_cast<std::size_t>(c) == slot) {
        spine[static_cast<std::size_t>(i - 1)] = builder.add_vertex(spine[static_cast<std::size_t>(i)]);
      } else if (rng.unit() < 1.0 / static_cast<double>(b[-i])) {
        frontier.emplace_back(builder.add_vertex(spine[static_cast<std::size_t>(i)]), i + 1,
                              -i + 1);
      }
    }
  }
  builder.set_root(spine[0]);
  frontier.emplace_front(spine[0], 0, 0);

  while (!frontier.empty()) {
    const auto [v, dist, level] = frontier.front();
    frontier.pop_front();
    if (dist >= radius) {
      builder.mark_boundary(v);
      continue;
    }
    const std::int64_t z = pi1.sample(rng);
    for (std::int64_t c = 0; c < z; ++c) {
      if (rng.unit() < 1.0 / static_cast<double>(b[level])) {
        frontier.emplace_back(builder.add_vertex(v), dist + 1, level + 1);
      }
    }
  }
  FamilyTree t = builder.take();
  derive_valid_radius(t, radius);
  return t;
}

std::string dl_window_export(const DLWindow& win) {
  std::ostringstream os;
  for (std::int32_t i = 0; i < win.size(); ++i) {
    const auto [v1, v2] = win.verts[static_cast<std::size_t>(i)];
    std::size_t in_count = 0;
    const std::int32_t p2 = win.t2.parent[v2];
    if (p2 != -1) {
      for (std::int32_t c1 : win.t1.children[v1]) {
        if (win.index.count(pair_key(c1, p2, win.t2.size()))) ++in_count;
      }
    }
    os << '(' << v1 << ',' << v2 << ") " << win.level[static_cast<std::size_t>(i)] << ' '
       << win.out[static_cast<std::size_t>(i)].size() << ' ' << in_count << '\n';
  }
  return os.str();
}

}  // namespace eft
