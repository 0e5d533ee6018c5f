#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "eft/dynamics.hpp"
#include "eft/family_tree.hpp"
#include "eft/network.hpp"
#include "eft/offspring.hpp"
#include "eft/reroot.hpp"
#include "eft/samplers.hpp"
#include "eft/stats.hpp"

namespace eft {

// Nonnegative, isomorphism-invariant pair function on rooted trees,
// computable from the declared radius around the pair. The estimator layer
// refuses windows whose valid_radius cannot cover 2 * radius reads.
struct TreeTestFunction {
  std::string name;
  std::int32_t radius;
  std::function<double(const FamilyTree&, std::int32_t, std::int32_t)> eval;
};

// v sends unit mass to its parent.
TreeTestFunction g_mass_to_parent();
// v sends d_1(v) to its parent.
TreeTestFunction g_children_to_parent();
// v sends unit mass to its grandparent.
TreeTestFunction g_mass_to_grandparent();

struct EstimatorReport {
  std::string test;
  double lhs = 0.0;
  double rhs = 0.0;
  double se = 0.0;     // standard error of (lhs - rhs)
  double z = 0.0;
  std::uint64_t n = 0;
  bool pass = false;
  std::string note;
};

std::string report_csv_header();
std::string report_csv_row(const EstimatorReport& r);

// Monte Carlo mass transport check E[g+(o)] = E[g-(o)] on a tree sampler;
// pass iff |z| <= z_max. Throws when the sampler's windows are too shallow
// for the declared radius.
EstimatorReport mtp_test(const TreeSampler& sampler, const TreeTestFunction& g,
                         std::uint64_t n, std::uint64_t seed, double z_max = 3.0,
                         int workers = 1);

// Same check over a fixed batch of windows (e.g. re-rooted joinings).
EstimatorReport mtp_test_batch(const std::vector<FamilyTree>& batch, const TreeTestFunction& g,
                               double z_max = 3.0);

// Exact mass transport on a deterministic finite network with uniform root:
// both sums computed exactly, equality required.
EstimatorReport mtp_test_exact(const Network& net,
                               const std::function<double(const Network&, std::int32_t,
                                                          std::int32_t)>& g);

// Offspring-invariant mass transport, eq. checked:
//   E[ sum_v g(o, v) ] = E[ sum_v m^{l(o,v)} g(v, o) ]
// with l the generation offset (ancestors positive), so a child of o carries
// weight 1/m. foil_only restricts both sums to l(o,v) = 0, the along-foil
// form with no weight.
EstimatorReport offspring_mtp_test(const TreeSampler& sampler, double m,
                                   const TreeTestFunction& g, std::uint64_t n,
                                   std::uint64_t seed, bool foil_only = false,
                                   double z_max = 3.0, int workers = 1);

// E[d_k(o)] vs target^k for k = 1..n_max (target = m for offspring-invariant
// families, 1 for unimodular ones).
std::vector<EstimatorReport> moment_check(const TreeSampler& sampler, double target_mean,
                                          std::int32_t n_max, std::uint64_t n,
                                          std::uint64_t seed, double z_max = 3.0,
                                          int workers = 1);

// Subcritical generation sizes: E[|L_k(o)|] vs the exact oracle
// m^{-k} E[d_k^2] from the GW second-moment recursion, plus the limit target
// 1 + c / (m (1 - m)). Rejects m >= 1.
struct GenerationSizeReport {
  std::vector<EstimatorReport> per_n;
  std::vector<double> oracle;  // m^{-k} E[d_k^2], k = 0..n_max
  double limit_target = 0.0;
};
GenerationSizeReport generation_size_check(const TreeSampler& sampler,
                                           const OffspringDistribution& pi,
                                           std::int32_t n_max, std::uint64_t n,
                                           std::uint64_t seed, double z_max = 3.0);

// Exact oracle on its own (used to freeze expected values in tests).
std::vector<Rat> gw_second_moment_over_mn(const OffspringDistribution& pi, std::int32_t n_max);

// Exchange formula on a deterministic finite network with uniform root:
//   lambda_H E_H[ sum_{v' in H'} g(o,v') ] = lambda_H' E_H'[ sum_{v in H} g(v,o) ],
// both sides computed exactly. Vacuously true sides are reported in `note`.
using VertexPredicate = std::function<bool(const Network&, std::int32_t)>;
EstimatorReport exchange_formula_test(const Network& net, const VertexPredicate& in_h,
                                      const VertexPredicate& in_h_prime,
                                      const std::function<double(const Network&, std::int32_t,
                                                                 std::int32_t)>& g);

// Mecke discrimination on a deterministic finite network with uniform root:
// the code law of [G, o] equals that of [G, f(o)] iff f is bijective.
struct MeckeReport {
  bool bijective = false;
  bool laws_equal = false;
  bool pass = false;  // laws_equal == bijective
};
MeckeReport mecke_test(const Network& net, const VertexShift& f);

// Independence probe: chi-square independence of d_1(o) and the root's
// sibling count d_1(F(o)) - 1. EGWTs pass (p > level); the correlated
// control fails. Degenerate one-valued statistics pass vacuously.
EstimatorReport egwt_independence_probe(const TreeSampler& sampler, std::uint64_t n,
                                        std::uint64_t seed, double level = 0.01);

// Empirical law of the radius-r canonical code over n windows.
std::map<std::string, std::uint64_t> code_law(const TreeSampler& sampler, std::int32_t radius,
                                              std::uint64_t n, std::uint64_t seed);
std::map<std::string, std::uint64_t> code_law_batch(const std::vector<FamilyTree>& batch,
                                                    std::int32_t radius);

}  // namespace eft
