#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eft/rational.hpp"
#include "eft/rng.hpp"

namespace eft {

// Finite-support offspring law on Z>=0 with exact rational weights. Finite
// support keeps the size-biased version, the mean and the second factorial
// moment exact, which the oracles lean on.
class OffspringDistribution {
 public:
  struct Atom {
    std::int64_t k;
    Rat p;
  };

  OffspringDistribution(std::vector<Atom> support);

  // Parse "0:1/2,2:1/2".
  static OffspringDistribution parse(const std::string& text);

  const std::vector<Atom>& support() const { return support_; }
  Rat mean() const { return mean_; }
  // c = sum k(k-1) pi(k), the second factorial moment.
  Rat second_factorial_moment() const { return c_; }
  Rat prob(std::int64_t k) const;

  // pi_hat(k) = k pi(k) / m. Rejects m = 0.
  OffspringDistribution size_biased() const;

  std::int64_t sample(Rng& rng) const;

  std::string str() const;

 private:
  std::vector<Atom> support_;
  Rat mean_;
  Rat c_;
  std::vector<double> cdf_;
};

// Multi-type offspring parameters: a finite type set, per-type joint laws of
// child-type counts, the mean matrix and a chosen left eigenvector. The
// eigenvector identity b M = rho b is verified at construction to 1e-10.
class MultiTypeOffspring {
 public:
  struct Atom {
    std::vector<std::int64_t> counts;  // counts[j] = children of type j
    double p;
  };

  MultiTypeOffspring(std::size_t num_types,
                     std::vector<std::vector<Atom>> per_type,
                     std::vector<double> b, double rho);

  std::size_t num_types() const { return per_type_.size(); }
  double rho() const { return rho_; }
  const std::vector<double>& root_law() const { return b_; }
  double mean(std::size_t i, std::size_t j) const { return m_[i][j]; }

  // Ordinary offspring vector for a vertex of type i.
  const std::vector<std::int64_t>& sample_plain(Rng& rng, std::size_t i) const;

  // Offspring vector of a spine vertex of type j whose designated child has
  // type i: law pi_hat^(j,i)(k) = k_i pi^(j)(k) / m_{j,i}.
  const std::vector<std::int64_t>& sample_biased(Rng& rng, std::size_t j, std::size_t i) const;

  // Spine type transition: P[t(o_{n+1}) = j | t(o_n) = i] = b_j m_{j,i} / (rho b_i).
  std::size_t sample_spine_parent_type(Rng& rng, std::size_t i) const;

  std::size_t sample_root_type(Rng& rng) const;

 private:
  std::vector<std::vector<Atom>> per_type_;
  std::vector<std::vector<double>> m_;          // mean matrix m[i][j]
  std::vector<double> b_;
  double rho_;
  std::vector<std::vector<double>> plain_cdf_;  // per type
  mutable std::vector<std::vector<std::vector<double>>> biased_cdf_;  // [j][i]
  std::vector<std::vector<double>> spine_cdf_;  // per child type i: cdf over j
};

}  // namespace eft
