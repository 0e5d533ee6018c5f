#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace eft {

// Exact rational on int64 with checked arithmetic. The exact-mode operators
// (sigma on tree measures, offspring moments) only ever touch denominators
// bounded by products of small support sizes, so 64 bits is plenty; if a
// computation outgrows it we want a loud failure, not silent wraparound.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(std::int64_t n) : num_(n), den_(1) {}
  Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t db = b.den_ / g;
    return Rat(checked(static_cast<__int128>(a.num_) * db +
                       static_cast<__int128>(b.num_) * (a.den_ / g)),
               checked(static_cast<__int128>(a.den_) * db));
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + Rat(-b.num_, b.den_); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    const std::int64_t g1 = std::gcd(std::abs(a.num_), b.den_);
    const std::int64_t g2 = std::gcd(std::abs(b.num_), a.den_);
    return Rat(checked(static_cast<__int128>(a.num_ / g1) * (b.num_ / g2)),
               checked(static_cast<__int128>(a.den_ / g2) * (b.den_ / g1)));
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return a * Rat(b.den_, b.num_);
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }
  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) {
      throw std::overflow_error("Rat: 64-bit overflow");
    }
    return static_cast<std::int64_t>(v);
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(std::abs(num_), den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace eft
