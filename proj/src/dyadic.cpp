#include "dyadsq/dyadic.hpp"

#include <cmath>
#include <string>

#include "dyadsq/errors.hpp"

namespace dyadsq {

double BinaryRational::value() const {
  return std::ldexp(static_cast<double>(numerator), -log2_denominator);
}

BinaryRational BinaryRational::reduced() const {
  BinaryRational r = *this;
  if (r.numerator == 0) {
    r.log2_denominator = 0;
    return r;
  }
  while (r.log2_denominator > 0 && (r.numerator & 1u) == 0) {
    r.numerator >>= 1;
    --r.log2_denominator;
  }
  return r;
}

bool operator==(const BinaryRational& a, const BinaryRational& b) {
  const BinaryRational ra = a.reduced();
  const BinaryRational rb = b.reduced();
  return ra.numerator == rb.numerator && ra.log2_denominator == rb.log2_denominator;
}

DyadicInterval::DyadicInterval(int level, std::uint64_t index) : level_(level), index_(index) {
  if (level < 0 || level > 63) {
    throw DomainError("dyadic level out of range: " + std::to_string(level));
  }
  if (level < 63 && index >= (std::uint64_t{1} << level)) {
    throw DomainError("dyadic index " + std::to_string(index) + " not below 2^" +
                      std::to_string(level));
  }
}

double DyadicInterval::left() const {
  return std::ldexp(static_cast<double>(index_), -level_);
}

double DyadicInterval::right() const {
  return std::ldexp(static_cast<double>(index_ + 1), -level_);
}

double DyadicInterval::measure() const { return std::ldexp(1.0, -level_); }

bool DyadicInterval::contains(const DyadicInterval& inner) const {
  if (inner.level_ < level_) return false;
  return (inner.index_ >> (inner.level_ - level_)) == index_;
}

DyadicInterval DyadicInterval::parent() const {
  if (level_ == 0) throw DomainError("the unit interval has no dyadic parent");
  return DyadicInterval(level_ - 1, index_ >> 1);
}

std::pair<DyadicInterval, DyadicInterval> children(const DyadicInterval& q, int max_depth) {
  if (q.level() >= max_depth) {
    throw DepthError("children of level " + std::to_string(q.level()) +
                     " exceed maximum depth " + std::to_string(max_depth));
  }
  return {DyadicInterval(q.level() + 1, 2 * q.index()),
          DyadicInterval(q.level() + 1, 2 * q.index() + 1)};
}

DyadicInterval shell(int n) {
  if (n < 1) throw DomainError("shell J_n needs n >= 1, got " + std::to_string(n));
  return DyadicInterval(n, 1);
}

DyadicInterval spine(int k) {
  if (k < 0) throw DomainError("spine I_k needs k >= 0");
  return DyadicInterval(k, 0);
}

std::pair<BinaryRational, BinaryRational> endpoints(const DyadicInterval& q) {
  return {BinaryRational{q.index(), q.level()}, BinaryRational{q.index() + 1, q.level()}};
}

}  // namespace dyadsq
