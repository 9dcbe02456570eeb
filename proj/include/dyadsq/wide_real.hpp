#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

namespace dyadsq {

/// Real number stored as a double mantissa in [0.5, 1) times 2^exponent with a
/// 64-bit exponent.
///
/// Spine sums over the power families touch quantities such as 2^{0.996 n}
/// and 2^{-4n} for n in the tens of thousands. Their products and ratios are
/// ordinary doubles, but the factors are not, so every spine quantity is
/// carried in this form and converted at the end.
class WideReal {
 public:
  constexpr WideReal() = default;
  WideReal(double v) : m_(v), e_(0) { normalize(); }  // NOLINT: implicit by design of the arithmetic

  static WideReal from_parts(double mantissa, std::int64_t exponent) {
    WideReal r;
    r.m_ = mantissa;
    r.e_ = exponent;
    r.normalize();
    return r;
  }

  /// 2^t for real t.
  static WideReal exp2(double t) {
    const double whole = std::floor(t);
    return from_parts(std::exp2(t - whole), static_cast<std::int64_t>(whole));
  }

  double mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }
  bool is_zero() const { return m_ == 0.0; }
  int sign() const { return (m_ > 0.0) - (m_ < 0.0); }
  bool is_finite() const { return std::isfinite(m_); }

  /// Saturates to +-inf or 0 outside the double range.
  double to_double() const {
    if (m_ == 0.0 || !std::isfinite(m_)) return m_;
    if (e_ > 1100) return m_ > 0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
    if (e_ < -1100) return 0.0 * m_;
    return std::ldexp(m_, static_cast<int>(e_));
  }

  /// log2 |x|.
  double log2_abs() const { return std::log2(std::fabs(m_)) + static_cast<double>(e_); }

  WideReal operator-() const { return from_parts(-m_, e_); }

  friend WideReal operator+(const WideReal& a, const WideReal& b) {
    if (a.m_ == 0.0) return b;
    if (b.m_ == 0.0) return a;
    const std::int64_t d = a.e_ - b.e_;
    if (d > 64) return a;
    if (d < -64) return b;
    if (d >= 0) return from_parts(a.m_ + std::ldexp(b.m_, static_cast<int>(-d)), a.e_);
    return from_parts(std::ldexp(a.m_, static_cast<int>(d)) + b.m_, b.e_);
  }
  friend WideReal operator-(const WideReal& a, const WideReal& b) { return a + (-b); }
  friend WideReal operator*(const WideReal& a, const WideReal& b) {
    return from_parts(a.m_ * b.m_, a.e_ + b.e_);
  }
  friend WideReal operator/(const WideReal& a, const WideReal& b) {
    return from_parts(a.m_ / b.m_, a.e_ - b.e_);
  }
  WideReal& operator+=(const WideReal& o) { return *this = *this + o; }
  WideReal& operator-=(const WideReal& o) { return *this = *this - o; }
  WideReal& operator*=(const WideReal& o) { return *this = *this * o; }
  WideReal& operator/=(const WideReal& o) { return *this = *this / o; }

  /// Multiply by 2^k exactly.
  friend WideReal ldexp(const WideReal& a, std::int64_t k) {
    if (a.m_ == 0.0) return a;
    WideReal r = a;
    r.e_ += k;
    return r;
  }

  friend WideReal abs(const WideReal& a) { return from_parts(std::fabs(a.m_), a.e_); }

  friend WideReal sqrt(const WideReal& a) {
    if (a.m_ <= 0.0) return WideReal(std::sqrt(a.m_));
    double m = a.m_;
    std::int64_t e = a.e_;
    if (e % 2 != 0) {
      m *= 2.0;
      e -= 1;
    }
    return from_parts(std::sqrt(m), e / 2);
  }

  /// |a|^y for a != 0; keeps full precision in the exponent product e*y.
  friend WideReal pow(const WideReal& a, double y) {
    if (a.m_ == 0.0) return y == 0.0 ? WideReal(1.0) : WideReal(0.0);
    const double base = std::pow(std::fabs(a.m_), y);
    const double e = static_cast<double>(a.e_);
    const double prod = e * y;
    const double err = std::fma(e, y, -prod);
    const double whole = std::floor(prod);
    const double frac = (prod - whole) + err;
    return from_parts(base * std::exp2(frac), static_cast<std::int64_t>(whole));
  }

  friend int compare(const WideReal& a, const WideReal& b) {
    const int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    int mag;
    if (a.e_ != b.e_) {
      mag = a.e_ < b.e_ ? -1 : 1;
    } else {
      const double ma = std::fabs(a.m_), mb = std::fabs(b.m_);
      mag = ma < mb ? -1 : (ma > mb ? 1 : 0);
    }
    return sa > 0 ? mag : -mag;
  }
  friend bool operator<(const WideReal& a, const WideReal& b) { return compare(a, b) < 0; }
  friend bool operator>(const WideReal& a, const WideReal& b) { return compare(a, b) > 0; }
  friend bool operator<=(const WideReal& a, const WideReal& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const WideReal& a, const WideReal& b) { return compare(a, b) >= 0; }
  friend bool operator==(const WideReal& a, const WideReal& b) { return compare(a, b) == 0; }

  friend WideReal max(const WideReal& a, const WideReal& b) { return a < b ? b : a; }

  friend std::ostream& operator<<(std::ostream& os, const WideReal& x) {
    return os << x.m_ << "*2^" << x.e_;
  }

 private:
  void normalize() {
    if (m_ == 0.0 || !std::isfinite(m_)) {
      if (m_ == 0.0) e_ = 0;
      return;
    }
    int k = 0;
    m_ = std::frexp(m_, &k);
    e_ += k;
  }

  double m_ = 0.0;
  std::int64_t e_ = 0;
};

}  // namespace dyadsq
