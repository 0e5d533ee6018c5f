#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eft/family_tree.hpp"
#include "eft/rational.hpp"
#include "eft/samplers.hpp"

namespace eft {

// Exact finite-support probability measure over canonicalized rooted family
// trees. Weights are exact rationals and always sum to 1; codes are distinct.
// Atom trees must be complete windows (no boundary flags): the exact sigma
// operator has no way to account for hidden vertices.
struct TreeMeasure {
  struct Atom {
    FamilyTree tree;
    std::string code;
    Rat weight;
  };
  std::vector<Atom> atoms;

  Rat total() const;
  void check() const;  // weights positive and summing to 1, codes distinct
};

TreeMeasure make_measure(std::vector<std::pair<FamilyTree, Rat>> weighted);

// E_mu[ h ] for integer-valued h.
Rat expect(const TreeMeasure& mu, const std::function<std::int64_t(const FamilyTree&)>& h);

// The law of d_1(root) (or any integer statistic) as an exact pmf.
std::vector<std::pair<std::int64_t, Rat>> law_of(
    const TreeMeasure& mu, const std::function<std::int64_t(const FamilyTree&)>& stat);

// Size-biased version of an exact pmf: p_hat(k) = k p(k) / sum_j j p(j).
std::vector<std::pair<std::int64_t, Rat>> size_biased_law(
    std::vector<std::pair<std::int64_t, Rat>> law);

// sigma_n mu: bias by d_n(root), move the root to a uniform n-descendant,
// re-canonicalize and merge. Exact rational arithmetic throughout. Throws
// std::domain_error when no atom has an n-descendant.
TreeMeasure sigma_exact(const TreeMeasure& mu, std::int32_t n);

// Monte Carlo sigma_n: draw `oversample * n_out` trees, importance-resample
// with weights d_n(root), then move the root uniformly into D_n(root).
// Deterministic given the seed. Fails when every drawn tree has d_n = 0.
struct SigmaMcResult {
  std::vector<FamilyTree> samples;
  double effective_sample_size = 0.0;
  bool ess_warning = false;          // effective sample size below n_out / 2
  std::vector<double> mean_dn;       // empirical E[d_k] for k = 0..n, diagnostics
};
SigmaMcResult sigma_mc(const TreeSampler& sampler, std::int32_t n, std::size_t n_out,
                       std::uint64_t seed, std::size_t oversample = 10);

// Geometric pruning of an offspring-invariant family with mean m > 1: prunes
// at an independent Z with Z+1 ~ Geometric(1 - 1/m). Rejects m <= 1.
FamilyTree prune_geometric(const TreeSampler& sampler, double m, std::uint64_t seed);

// TreeMeasure line format: "weight_num weight_den canonical_code".
std::string serialize(const TreeMeasure& mu);

}  // namespace eft
