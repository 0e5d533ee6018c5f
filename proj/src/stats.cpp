#include "eft/stats.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace eft {

void RunningStats::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double d = o.mean_ - mean_;
  const double total = static_cast<double>(n_ + o.n_);
  m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / total;
  mean_ += d * static_cast<double>(o.n_) / total;
  n_ += o.n_;
}

double RunningStats::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::stderr_mean() const {
  return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

void for_each_replicate(std::uint64_t n, int workers,
                        const std::function<void(std::uint64_t, std::vector<RunningStats>&)>& body,
                        std::vector<RunningStats>& out) {
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  const std::size_t k = out.size();
  std::vector<std::vector<RunningStats>> partial(chunks, std::vector<RunningStats>(k));
  const auto run_chunk = [&](std::uint64_t c) {
    for (std::uint64_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) {
      body(i, partial[c]);
    }
  };
  if (workers <= 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& p : partial) {
    for (std::size_t j = 0; j < k; ++j) out[j].merge(p[j]);
  }
}

namespace {

double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_cont_frac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_cont_frac(a, x);
}

ChiSquare chi_square_independence(
    const std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t>& table) {
  std::map<std::int64_t, double> row, col;
  double total = 0.0;
  for (const auto& [cell, cnt] : table) {
    row[cell.first] += static_cast<double>(cnt);
    col[cell.second] += static_cast<double>(cnt);
    total += static_cast<double>(cnt);
  }
  ChiSquare out;
  out.df = static_cast<std::int64_t>(row.size() - 1) * static_cast<std::int64_t>(col.size() - 1);
  if (out.df <= 0 || total == 0.0) return out;
  for (const auto& [r, rc] : row) {
    for (const auto& [c, cc] : col) {
      const double expected = rc * cc / total;
      const auto it = table.find({r, c});
      const double observed = it == table.end() ? 0.0 : static_cast<double>(it->second);
      out.statistic += (observed - expected) * (observed - expected) / expected;
    }
  }
  out.p_value = gamma_q(static_cast<double>(out.df) / 2.0, out.statistic / 2.0);
  return out;
}

ChiSquare chi_square_goodness(const std::vector<std::uint64_t>& observed,
                              const std::vector<double>& expected_probs) {
  if (observed.size() != expected_probs.size()) {
    throw std::invalid_argument("chi_square_goodness: size mismatch");
  }
  double total = 0.0;
  for (std::uint64_t o : observed) total += static_cast<double>(o);
  ChiSquare out;
  std::int64_t bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * expected_probs[i];
    if (e <= 0.0) {
      if (observed[i] > 0) {
        out.statistic = 1e308;
        out.df = 1;
        out.p_value = 0.0;
        return out;
      }
      continue;
    }
    ++bins;
    const double d = static_cast<double>(observed[i]) - e;
    out.statistic += d * d / e;
  }
  out.df = bins - 1;
  if (out.df <= 0) return out;
  out.p_value = gamma_q(static_cast<double>(out.df) / 2.0, out.statistic / 2.0);
  return out;
}

double empirical_tv(const std::map<std::string, std::uint64_t>& a,
                    const std::map<std::string, std::uint64_t>& b) {
  double na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) na += static_cast<double>(v);
  for (const auto& [k, v] : b) nb += static_cast<double>(v);
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("empirical_tv: empty sample");
  double tv = 0.0;
  for (const auto& [k, v] : a) {
    double q = 0.0;
    const auto f = b.find(k);
    if (f != b.end()) q = static_cast<double>(f->second) / nb;
    tv += std::fabs(static_cast<double>(v) / na - q);
  }
  for (const auto& [k, v] : b) {
    if (a.find(k) == a.end()) tv += static_cast<double>(v) / nb;
  }
  return tv / 2.0;
}

}  // namespace eft
