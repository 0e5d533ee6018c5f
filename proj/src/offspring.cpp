#include "eft/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eft {

OffspringDistribution::OffspringDistribution(std::vector<Atom> support)
    : support_(std::move(support)) {
  if (support_.empty()) throw std::invalid_argument("offspring law: empty support");
  std::sort(support_.begin(), support_.end(),
            [](const Atom& a, const Atom& b) { return a.k < b.k; });
  Rat total(0);
  for (const Atom& a : support_) {
    if (a.k < 0) throw std::invalid_argument("offspring law: negative count");
    if (a.p <= Rat(0)) throw std::invalid_argument("offspring law: weights must be positive");
    total += a.p;
    mean_ += Rat(a.k) * a.p;
    c_ += Rat(a.k) * Rat(a.k - 1) * a.p;
  }
  if (total != Rat(1)) throw std::invalid_argument("offspring law: weights must sum to 1");
  double acc = 0.0;
  for (const Atom& a : support_) {
    acc += a.p.to_double();
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

OffspringDistribution OffspringDistribution::parse(const std::string& text) {
  std::vector<Atom> atoms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("offspring law: expected k:p");
    const std::int64_t k = std::stoll(item.substr(0, colon));
    const std::string frac = item.substr(colon + 1);
    const auto slash = frac.find('/');
    Rat p = slash == std::string::npos
                ? Rat(std::stoll(frac))
                : Rat(std::stoll(frac.substr(0, slash)), std::stoll(frac.substr(slash + 1)));
    atoms.push_back({k, p});
  }
  return OffspringDistribution(std::move(atoms));
}

Rat OffspringDistribution::prob(std::int64_t k) const {
  for (const Atom& a : support_) {
    if (a.k == k) return a.p;
  }
  return Rat(0);
}

OffspringDistribution OffspringDistribution::size_biased() const {
  if (mean_ == Rat(0)) throw std::domain_error("size bias needs m > 0");
  std::vector<Atom> atoms;
  for (const Atom& a : support_) {
    if (a.k > 0) atoms.push_back({a.k, Rat(a.k) * a.p / mean_});
  }
  return OffspringDistribution(std::move(atoms));
}

std::int64_t OffspringDistribution::sample(Rng& rng) const {
  return support_[rng.from_cdf(cdf_)].k;
}

std::string OffspringDistribution::str() const {
  std::string out;
  for (const Atom& a : support_) {
    if (!out.empty()) out += ',';
    out += std::to_string(a.k) + ":" + a.p.str();
  }
  return out;
}

MultiTypeOffspring::MultiTypeOffspring(std::size_t num_types,
                                       std::vector<std::vector<Atom>> per_type,
                                       std::vector<double> b, double rho)
    : per_type_(std::move(per_type)), b_(std::move(b)), rho_(rho) {
  if (per_type_.size() != num_types || b_.size() != num_types) {
    throw std::invalid_argument("multi-type law: size mismatch");
  }
  m_.assign(num_types, std::vector<double>(num_types, 0.0));
  plain_cdf_.resize(num_types);
  for (std::size_t i = 0; i < num_types; ++i) {
    double total = 0.0;
    for (const Atom& a : per_type_[i]) {
      if (a.counts.size() != num_types) throw std::invalid_argument("count vector size");
      total += a.p;
      plain_cdf_[i].push_back(total);
      for (std::size_t j = 0; j < num_types; ++j) {
        m_[i][j] += a.p * static_cast<double>(a.counts[j]);
      }
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("multi-type law: weights must sum to 1");
    }
    plain_cdf_[i].back() = 1.0;
  }
  double bsum = 0.0;
  for (double x : b_) {
    if (x < 0) throw std::invalid_argument("multi-type law: b must be nonnegative");
    bsum += x;
  }
  if (std::abs(bsum - 1.0) > 1e-12) throw std::invalid_argument("b must sum to 1");
  for (std::size_t i = 0; i < num_types; ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < num_types; ++j) lhs += b_[j] * m_[j][i];
    if (std::abs(lhs - rho_ * b_[i]) > 1e-10) {
      throw std::invalid_argument("b is not a left eigenvector of M for rho");
    }
  }
  biased_cdf_.assign(num_types, std::vector<std::vector<double>>(num_types));
  // Spine transition law out of child type i.
  spine_cdf_.resize(num_types);
  for (std::size_t i = 0; i < num_types; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < num_types; ++j) {
      if (b_[i] > 0) acc += b_[j] * m_[j][i] / (rho_ * b_[i]);
      spine_cdf_[i].push_back(acc);
    }
    // Truncated type sets can leave a sliver of mass outside J; renormalize.
    if (acc > 0) {
      for (double& x : spine_cdf_[i]) x /= acc;
    }
  }
}

const std::vector<std::int64_t>& MultiTypeOffspring::sample_plain(Rng& rng, std::size_t i) const {
  return per_type_[i][rng.from_cdf(plain_cdf_[i])].counts;
}

const std::vector<std::int64_t>& MultiTypeOffspring::sample_biased(Rng& rng, std::size_t j,
                                                                   std::size_t i) const {
  auto& cdf = biased_cdf_[j][i];
  if (cdf.empty()) {
    if (m_[j][i] <= 0) throw std::logic_error("biased law needs m_{j,i} > 0");
    double acc = 0.0;
    for (const Atom& a : per_type_[j]) {
      acc += a.p * static_cast<double>(a.counts[i]) / m_[j][i];
      cdf.push_back(acc);
    }
    cdf.back() = 1.0;
  }
  return per_type_[j][rng.from_cdf(cdf)].counts;
}

std::size_t MultiTypeOffspring::sample_spine_parent_type(Rng& rng, std::size_t i) const {
  const std::size_t j = rng.from_cdf(spine_cdf_[i]);
  if (m_[j][i] <= 0) throw std::logic_error("drew a spine transition with m_{j,i} = 0");
  return j;
}

std::size_t MultiTypeOffspring::sample_root_type(Rng& rng) const {
  std::vector<double> cdf;
  double acc = 0.0;
  for (double x : b_) {
    acc += x;
    cdf.push_back(acc);
  }
  cdf.back() = 1.0;
  return rng.from_cdf(cdf);
}

}  // namespace eft
