#include "eft/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eft {

TreeTestFunction g_mass_to_parent() {
  return {"mass-to-parent", 1, [](const FamilyTree& t, std::int32_t v, std::int32_t w) {
            return t.parent[v] == w ? 1.0 : 0.0;
          }};
}

TreeTestFunction g_children_to_parent() {
  return {"children-to-parent", 1, [](const FamilyTree& t, std::int32_t v, std::int32_t w) {
            return t.parent[v] == w ? static_cast<double>(t.children[v].size()) : 0.0;
          }};
}

TreeTestFunction g_mass_to_grandparent() {
  return {"mass-to-grandparent", 2, [](const FamilyTree& t, std::int32_t v, std::int32_t w) {
            const std::int32_t p = t.parent[v];
            return p != -1 && t.parent[p] == w ? 1.0 : 0.0;
          }};
}

std::string report_csv_header() { return "test_name,lhs,rhs,stderr,z,N,verdict\n"; }

std::string report_csv_row(const EstimatorReport& r) {
  std::ostringstream os;
  os << r.test << ',' << r.lhs << ',' << r.rhs << ',' << r.se << ',' << r.z << ',' << r.n
     << ',' << (r.pass ? "pass" : "fail") << '\n';
  return os.str();
}

namespace {

void require_radius(const FamilyTree& t, std::int32_t read_radius, const char* who) {
  if (t.valid_radius < read_radius) {
    throw std::logic_error(std::string(who) + ": test reads radius " +
                           std::to_string(read_radius) + " but window is only valid to " +
                           std::to_string(t.valid_radius));
  }
}

// Sums of g over pairs (root, v) and (v, root) for v in the root's ball.
struct PairSums {
  double out = 0.0;
  double in = 0.0;
  double in_weighted = 0.0;
  double out_foil = 0.0;
  double in_foil = 0.0;
};

PairSums pair_sums(const FamilyTree& t, const TreeTestFunction& g, double m) {
  PairSums s;
  const std::int32_t o = t.root;
  const Ball ball = ball_around_root(t, g.radius);
  const auto depth = depths_from_top(t);
  for (std::int32_t v : ball.verts) {
    const double gout = g.eval(t, o, v);
    const double gin = g.eval(t, v, o);
    s.out += gout;
    s.in += gin;
    // l(o, v) = depth(o) - depth(v): a child of o carries weight 1/m.
    const std::int64_t l = static_cast<std::int64_t>(depth[o]) - depth[v];
    s.in_weighted += std::pow(m, static_cast<double>(l)) * gin;
    if (l == 0) {
      s.out_foil += gout;
      s.in_foil += gin;
    }
  }
  return s;
}

EstimatorReport difference_report(const std::string& name, const RunningStats& lhs,
                                  const RunningStats& rhs, const RunningStats& diff,
                                  double z_max) {
  EstimatorReport rep;
  rep.test = name;
  rep.lhs = lhs.mean();
  rep.rhs = rhs.mean();
  rep.se = diff.stderr_mean();
  rep.n = diff.count();
  rep.z = rep.se > 0.0 ? (lhs.mean() - rhs.mean()) / rep.se
                       : (lhs.mean() == rhs.mean() ? 0.0 : INFINITY);
  rep.pass = std::fabs(rep.z) <= z_max;
  return rep;
}

}  // namespace

EstimatorReport mtp_test(const TreeSampler& sampler, const TreeTestFunction& g,
                         std::uint64_t n, std::uint64_t seed, double z_max, int workers) {
  std::vector<RunningStats> acc(3);
  for_each_replicate(
      n, workers,
      [&](std::uint64_t i, std::vector<RunningStats>& a) {
        const FamilyTree t = sampler(Rng::stream(seed, i).next_u64());
        require_radius(t, 2 * g.radius, "mtp_test");
        const PairSums s = pair_sums(t, g, 1.0);
        a[0].add(s.out);
        a[1].add(s.in);
        a[2].add(s.out - s.in);
      },
      acc);
  return difference_report("mtp[" + g.name + "]", acc[0], acc[1], acc[2], z_max);
}

EstimatorReport mtp_test_batch(const std::vector<FamilyTree>& batch, const TreeTestFunction& g,
                               double z_max) {
  RunningStats lhs, rhs, diff;
  for (const FamilyTree& t : batch) {
    require_radius(t, 2 * g.radius, "mtp_test_batch");
    const PairSums s = pair_sums(t, g, 1.0);
    lhs.add(s.out);
    rhs.add(s.in);
    diff.add(s.out - s.in);
  }
  return difference_report("mtp-batch[" + g.name + "]", lhs, rhs, diff, z_max);
}

EstimatorReport mtp_test_exact(const Network& net,
                               const std::function<double(const Network&, std::int32_t,
                                                          std::int32_t)>& g) {
  double out = 0.0, in = 0.0;
  for (std::int32_t v = 0; v < net.size(); ++v) {
    for (std::int32_t w = 0; w < net.size(); ++w) {
      out += g(net, v, w);
      in += g(net, w, v);
    }
  }
  EstimatorReport rep;
  rep.test = "mtp-exact";
  rep.lhs = out / net.size();
  rep.rhs = in / net.size();
  rep.n = static_cast<std::uint64_t>(net.size());
  rep.pass = std::fabs(rep.lhs - rep.rhs) <= 1e-12 * std::max(1.0, std::fabs(rep.lhs));
  rep.z = rep.pass ? 0.0 : INFINITY;
  return rep;
}

EstimatorReport offspring_mtp_test(const TreeSampler& sampler, double m,
                                   const TreeTestFunction& g, std::uint64_t n,
                                   std::uint64_t seed, bool foil_only, double z_max,
                                   int workers) {
  if (m <= 0.0) throw std::invalid_argument("offspring_mtp_test: m must be positive");
  std::vector<RunningStats> acc(3);
  for_each_replicate(
      n, workers,
      [&](std::uint64_t i, std::vector<RunningStats>& a) {
        const FamilyTree t = sampler(Rng::stream(seed, i).next_u64());
        require_radius(t, 2 * g.radius, "offspring_mtp_test");
        const PairSums s = pair_sums(t, g, m);
        const double lhs = foil_only ? s.out_foil : s.out;
        const double rhs = foil_only ? s.in_foil : s.in_weighted;
        a[0].add(lhs);
        a[1].add(rhs);
        a[2].add(lhs - rhs);
      },
      acc);
  return difference_report(
      std::string(foil_only ? "foil-mtp[" : "offspring-mtp[") + g.name + "]", acc[0], acc[1],
      acc[2], z_max);
}

std::vector<EstimatorReport> moment_check(const TreeSampler& sampler, double target_mean,
                                          std::int32_t n_max, std::uint64_t n,
                                          std::uint64_t seed, double z_max, int workers) {
  std::vector<RunningStats> acc(static_cast<std::size_t>(n_max));
  for_each_replicate(
      n, workers,
      [&](std::uint64_t i, std::vector<RunningStats>& a) {
        const FamilyTree t = sampler(Rng::stream(seed, i).next_u64());
        require_radius(t, n_max, "moment_check");
        for (std::int32_t k = 1; k <= n_max; ++k) {
          const VertexSet d = descendants_n(t, t.root, k);
          if (!d.complete) throw std::logic_error("moment_check: boundary inside valid radius");
          a[static_cast<std::size_t>(k - 1)].add(static_cast<double>(d.verts.size()));
        }
      },
      acc);
  std::vector<EstimatorReport> out;
  for (std::int32_t k = 1; k <= n_max; ++k) {
    const RunningStats& s = acc[static_cast<std::size_t>(k - 1)];
    EstimatorReport rep;
    rep.test = "moment[d_" + std::to_string(k) + "]";
    rep.lhs = s.mean();
    rep.rhs = std::pow(target_mean, k);
    rep.se = s.stderr_mean();
    rep.n = s.count();
    rep.z = rep.se > 0.0 ? (rep.lhs - rep.rhs) / rep.se : (rep.lhs == rep.rhs ? 0.0 : INFINITY);
    rep.pass = std::fabs(rep.z) <= z_max;
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<Rat> gw_second_moment_over_mn(const OffspringDistribution& pi, std::int32_t n_max) {
  const Rat m = pi.mean();
  const Rat c = pi.second_factorial_moment();
  const Rat var = c + m - m * m;
  std::vector<Rat> second(static_cast<std::size_t>(n_max) + 1);
  second[0] = Rat(1);
  Rat m_pow(1);  // m^{k-1} inside the loop
  for (std::int32_t k = 1; k <= n_max; ++k) {
    second[static_cast<std::size_t>(k)] = var * m_pow + m * m * second[static_cast<std::size_t>(k - 1)];
    m_pow *= m;
  }
  std::vector<Rat> out(second.size());
  Rat m_n(1);
  for (std::size_t k = 0; k < second.size(); ++k) {
    out[k] = second[k] / m_n;
    m_n *= m;
  }
  return out;
}

GenerationSizeReport generation_size_check(const TreeSampler& sampler,
                                           const OffspringDistribution& pi,
                                           std::int32_t n_max, std::uint64_t n,
                                           std::uint64_t seed, double z_max) {
  if (!(pi.mean() < Rat(1))) throw std::domain_error("generation_size_check needs m < 1");
  if (pi.mean() == Rat(0)) throw std::domain_error("generation_size_check needs m > 0");
  GenerationSizeReport report;
  const auto oracle = gw_second_moment_over_mn(pi, n_max);
  for (const Rat& r : oracle) report.oracle.push_back(r.to_double());
  const Rat m = pi.mean();
  const Rat c = pi.second_factorial_moment();
  report.limit_target = (Rat(1) + c / (m * (Rat(1) - m))).to_double();

  std::vector<RunningStats> acc(static_cast<std::size_t>(n_max));
  for_each_replicate(
      n, 1,
      [&](std::uint64_t i, std::vector<RunningStats>& a) {
        const FamilyTree t = sampler(Rng::stream(seed, i).next_u64());
        require_radius(t, 2 * n_max, "generation_size_check");
        for (std::int32_t k = 1; k <= n_max; ++k) {
          const GenerationSet gen = generation_members(t, t.root, k);
          if (!gen.valid || !gen.complete) {
            throw std::logic_error("generation_size_check: window too shallow for L_n");
          }
          a[static_cast<std::size_t>(k - 1)].add(static_cast<double>(gen.verts.size()));
        }
      },
      acc);
  for (std::int32_t k = 1; k <= n_max; ++k) {
    const RunningStats& s = acc[static_cast<std::size_t>(k - 1)];
    EstimatorReport rep;
    rep.test = "generation-size[L_" + std::to_string(k) + "]";
    rep.lhs = s.mean();
    rep.rhs = report.oracle[static_cast<std::size_t>(k)];
    rep.se = s.stderr_mean();
    rep.n = s.count();
    rep.z = rep.se > 0.0 ? (rep.lhs - rep.rhs) / rep.se : (rep.lhs == rep.rhs ? 0.0 : INFINITY);
    rep.pass = std::fabs(rep.z) <= z_max;
    report.per_n.push_back(std::move(rep));
  }
  return report;
}

EstimatorReport exchange_formula_test(const Network& net, const VertexPredicate& in_h,
                                      const VertexPredicate& in_h_prime,
                                      const std::function<double(const Network&, std::int32_t,
                                                                 std::int32_t)>& g) {
  std::vector<std::int32_t> h, hp;
  for (std::int32_t v = 0; v < net.size(); ++v) {
    if (in_h(net, v)) h.push_back(v);
    if (in_h_prime(net, v)) hp.push_back(v);
  }
  EstimatorReport rep;
  rep.test = "exchange-formula";
  rep.n = static_cast<std::uint64_t>(net.size());
  if (h.empty() || hp.empty()) {
    rep.note = h.empty() && hp.empty() ? "both subnetworks empty"
               : h.empty()             ? "H empty"
                                       : "H' empty";
    rep.pass = true;  // identity vacuous: both sides are 0
    return rep;
  }
  const double lambda_h = static_cast<double>(h.size()) / net.size();
  const double lambda_hp = static_cast<double>(hp.size()) / net.size();
  double cond_h = 0.0;  // E_H[ sum_{v' in H'} g(o, v') ]
  for (std::int32_t o : h) {
    for (std::int32_t b : hp) cond_h += g(net, o, b);
  }
  cond_h /= static_cast<double>(h.size());
  double cond_hp = 0.0;  // E_H'[ sum_{v in H} g(v, o) ]
  for (std::int32_t o : hp) {
    for (std::int32_t a : h) cond_hp += g(net, a, o);
  }
  cond_hp /= static_cast<double>(hp.size());
  rep.lhs = lambda_h * cond_h;
  rep.rhs = lambda_hp * cond_hp;
  rep.pass = std::fabs(rep.lhs - rep.rhs) <= 1e-12 * std::max(1.0, std::fabs(rep.lhs));
  rep.z = rep.pass ? 0.0 : INFINITY;
  return rep;
}

MeckeReport mecke_test(const Network& net, const VertexShift& f) {
  const FGraph fg = build_f_graph(net, f);
  std::vector<std::uint8_t> image(net.size(), 0);
  for (std::int32_t v : fg) image[v] = 1;
  MeckeReport rep;
  rep.bijective = std::all_of(image.begin(), image.end(), [](std::uint8_t x) { return x == 1; });
  const std::int32_t radius = net.size();
  std::map<std::string, std::uint64_t> law_root, law_shifted;
  for (std::int32_t v = 0; v < net.size(); ++v) {
    ++law_root[network_root_code(net, v, radius)];
    ++law_shifted[network_root_code(net, fg[v], radius)];
  }
  rep.laws_equal = law_root == law_shifted;
  rep.pass = rep.laws_equal == rep.bijective;
  return rep;
}

EstimatorReport egwt_independence_probe(const TreeSampler& sampler, std::uint64_t n,
                                        std::uint64_t seed, double level) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> table;
  for (std::uint64_t i = 0; i < n; ++i) {
    const FamilyTree t = sampler(Rng::stream(seed, i).next_u64());
    require_radius(t, 2, "egwt_independence_probe");
    const std::int32_t o = t.root;
    const std::int32_t p = t.parent[o];
    if (p == -1) throw std::logic_error("independence probe needs a parented root");
    const std::int64_t d1 = static_cast<std::int64_t>(t.children[o].size());
    const std::int64_t sibs = static_cast<std::int64_t>(t.children[p].size()) - 1;
    ++table[{d1, sibs}];
  }
  const ChiSquare cs = chi_square_independence(table);
  EstimatorReport rep;
  rep.test = "independence[d1-vs-siblings]";
  rep.lhs = cs.p_value;
  rep.rhs = level;
  rep.n = n;
  rep.z = cs.statistic;
  rep.pass = cs.df == 0 || cs.p_value > level;
  rep.note = cs.df == 0 ? "degenerate table, vacuous" : "";
  return rep;
}

std::map<std::string, std::uint64_t> code_law(const TreeSampler& sampler, std::int32_t radius,
                                              std::uint64_t n, std::uint64_t seed) {
  std::map<std::string, std::uint64_t> law;
  for (std::uint64_t i = 0; i < n; ++i) {
    const FamilyTree t = sampler(Rng::stream(seed, i).next_u64());
    require_radius(t, radius, "code_law");
    ++law[canonicalize(t, radius)];
  }
  return law;
}

std::map<std::string, std::uint64_t> code_law_batch(const std::vector<FamilyTree>& batch,
                                                    std::int32_t radius) {
  std::map<std::string, std::uint64_t> law;
  for (const FamilyTree& t : batch) {
    require_radius(t, radius, "code_law_batch");
    ++law[canonicalize(t, radius)];
  }
  return law;
}

}  // namespace eft
