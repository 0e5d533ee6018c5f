#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace eft {

// Welford accumulator with an associative merge, so chunked parallel
// accumulation reduces in a fixed order and the result is independent of the
// worker count.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& o);
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // sample variance
  double stderr_mean() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Runs body(i) for i in [0, n) over `workers` threads in fixed-size chunks;
// per-chunk accumulators are merged in chunk order, so the totals do not
// depend on the worker count.
void for_each_replicate(std::uint64_t n, int workers,
                        const std::function<void(std::uint64_t, std::vector<RunningStats>&)>& body,
                        std::vector<RunningStats>& out);

// Regularized upper incomplete gamma Q(a, x); chi-square tail probability is
// Q(df/2, x/2).
double gamma_q(double a, double x);

// Pearson chi-square independence test on a two-way contingency table.
struct ChiSquare {
  double statistic = 0.0;
  std::int64_t df = 0;
  double p_value = 1.0;  // vacuous tables keep p = 1
};
ChiSquare chi_square_independence(const std::map<std::pair<std::int64_t, std::int64_t>,
                                                 std::uint64_t>& table);

// Chi-square goodness of fit of observed counts against expected
// probabilities (bins with zero expectation must have zero counts).
ChiSquare chi_square_goodness(const std::vector<std::uint64_t>& observed,
                              const std::vector<double>& expected_probs);

// Total variation distance between two empirical code laws.
double empirical_tv(const std::map<std::string, std::uint64_t>& a,
                    const std::map<std::string, std::uint64_t>& b);

}  // namespace eft
