#include "eft/reroot.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace eft {

Rat TreeMeasure::total() const {
  Rat t(0);
  for (const Atom& a : atoms) t += a.weight;
  return t;
}

void TreeMeasure::check() const {
  std::vector<std::string> codes;
  for (const Atom& a : atoms) {
    if (!(a.weight > Rat(0))) throw std::logic_error("tree measure: nonpositive weight");
    for (std::uint8_t flag : a.tree.boundary) {
      if (flag) throw std::logic_error("tree measure: atoms must be complete windows");
    }
    codes.push_back(a.code);
  }
  std::sort(codes.begin(), codes.end());
  if (std::adjacent_find(codes.begin(), codes.end()) != codes.end()) {
    throw std::logic_error("tree measure: duplicate codes");
  }
  if (total() != Rat(1)) throw std::logic_error("tree measure: weights must sum to 1");
}

TreeMeasure make_measure(std::vector<std::pair<FamilyTree, Rat>> weighted) {
  std::map<std::string, TreeMeasure::Atom> merged;
  for (auto& [tree, w] : weighted) {
    std::string code = canonical_code_full(tree);
    auto it = merged.find(code);
    if (it == merged.end()) {
      merged.emplace(code, TreeMeasure::Atom{std::move(tree), code, w});
    } else {
      it->second.weight += w;
    }
  }
  TreeMeasure mu;
  for (auto& [code, atom] : merged) mu.atoms.push_back(std::move(atom));
  mu.check();
  return mu;
}

Rat expect(const TreeMeasure& mu, const std::function<std::int64_t(const FamilyTree&)>& h) {
  Rat out(0);
  for (const auto& a : mu.atoms) out += a.weight * Rat(h(a.tree));
  return out;
}

std::vector<std::pair<std::int64_t, Rat>> law_of(
    const TreeMeasure& mu, const std::function<std::int64_t(const FamilyTree&)>& stat) {
  std::map<std::int64_t, Rat> law;
  for (const auto& a : mu.atoms) law[stat(a.tree)] += a.weight;
  return {law.begin(), law.end()};
}

std::vector<std::pair<std::int64_t, Rat>> size_biased_law(
    std::vector<std::pair<std::int64_t, Rat>> law) {
  Rat mean(0);
  for (const auto& [k, p] : law) mean += Rat(k) * p;
  if (mean == Rat(0)) throw std::domain_error("size bias needs positive mean");
  std::vector<std::pair<std::int64_t, Rat>> out;
  for (auto& [k, p] : law) {
    if (k > 0) out.emplace_back(k, Rat(k) * p / mean);
  }
  return out;
}

TreeMeasure sigma_exact(const TreeMeasure& mu, std::int32_t n) {
  if (n < 0) throw std::invalid_argument("sigma_exact: n must be >= 0");
  Rat denom(0);
  for (const auto& a : mu.atoms) {
    denom += a.weight * Rat(static_cast<std::int64_t>(descendants_n(a.tree, a.tree.root, n).verts.size()));
  }
  if (denom == Rat(0)) {
    throw std::domain_error("sigma_exact: no n-descendants anywhere in the support");
  }
  std::vector<std::pair<FamilyTree, Rat>> weighted;
  for (const auto& a : mu.atoms) {
    for (std::int32_t v : descendants_n(a.tree, a.tree.root, n).verts) {
      weighted.emplace_back(rerooted(a.tree, v), a.weight / denom);
    }
  }
  return make_measure(std::move(weighted));
}

SigmaMcResult sigma_mc(const TreeSampler& sampler, std::int32_t n, std::size_t n_out,
                       std::uint64_t seed, std::size_t oversample) {
  if (n < 0 || n_out == 0 || oversample == 0) throw std::invalid_argument("sigma_mc: bad sizes");
  const std::size_t m = oversample * n_out;
  std::vector<FamilyTree> pool;
  pool.reserve(m);
  std::vector<double> weight(m, 0.0);
  SigmaMcResult result;
  result.mean_dn.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    pool.push_back(sampler(Rng::stream(seed, i).next_u64()));
    const FamilyTree& t = pool.back();
    if (t.valid_radius < n) throw std::logic_error("sigma_mc: window shallower than n");
    for (std::int32_t k = 0; k <= n; ++k) {
      result.mean_dn[static_cast<std::size_t>(k)] +=
          static_cast<double>(descendants_n(t, t.root, k).verts.size()) / static_cast<double>(m);
    }
    weight[i] = static_cast<double>(descendants_n(t, t.root, n).verts.size());
  }
  double wsum = 0.0, wsq = 0.0;
  std::vector<double> cdf(m);
  for (std::size_t i = 0; i < m; ++i) {
    wsum += weight[i];
    wsq += weight[i] * weight[i];
    cdf[i] = wsum;
  }
  if (wsum == 0.0) throw std::domain_error("sigma_mc: every drawn tree has d_n = 0");
  for (double& x : cdf) x /= wsum;
  result.effective_sample_size = wsum * wsum / wsq;
  result.ess_warning = result.effective_sample_size < static_cast<double>(n_out) / 2.0;

  Rng rng(Rng::stream(seed, m + 7).next_u64());
  result.samples.reserve(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const FamilyTree& t = pool[rng.from_cdf(cdf)];
    const auto dn = descendants_n(t, t.root, n).verts;
    result.samples.push_back(rerooted(t, dn[rng.below(dn.size())]));
  }
  return result;
}

FamilyTree prune_geometric(const TreeSampler& sampler, double m, std::uint64_t seed) {
  if (m <= 1.0) throw std::domain_error("geometric pruning needs m > 1");
  Rng rng(Rng::stream(seed, 0x9E).next_u64());
  const std::int32_t z = static_cast<std::int32_t>(rng.geometric_minus_one(1.0 - 1.0 / m));
  return prune(sampler(Rng::stream(seed, 1).next_u64()), z);
}

std::string serialize(const TreeMeasure& mu) {
  std::ostringstream os;
  for (const auto& a : mu.atoms) {
    os << a.weight.num() << ' ' << a.weight.den() << ' ' << a.code << '\n';
  }
  return os.str();
}

}  // namespace eft
