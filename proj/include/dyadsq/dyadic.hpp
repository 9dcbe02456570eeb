#pragma once

#include <cstdint>
#include <utility>

namespace dyadsq {

/// Levels beyond this are rejected by children(); 60 keeps every endpoint an
/// exact double.
inline constexpr int kDefaultMaxDepth = 60;

/// numerator / 2^log2_denominator, kept unreduced.
struct BinaryRational {
  std::uint64_t numerator = 0;
  int log2_denominator = 0;

  double value() const;
  BinaryRational reduced() const;
  friend bool operator==(const BinaryRational& a, const BinaryRational& b);
};

/// [index * 2^-level, (index + 1) * 2^-level) inside [0, 1).
class DyadicInterval {
 public:
  /// Throws DomainError unless index < 2^level and level <= 63.
  DyadicInterval(int level, std::uint64_t index);

  int level() const { return level_; }
  std::uint64_t index() const { return index_; }

  double left() const;
  double right() const;
  double measure() const;

  bool contains(const DyadicInterval& inner) const;
  DyadicInterval parent() const;

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;

 private:
  int level_;
  std::uint64_t index_;
};

/// Spine interval I_k = [0, 2^-k).
struct SpineIndex {
  int k = 0;
  DyadicInterval interval() const { return DyadicInterval(k, 0); }
};

std::pair<DyadicInterval, DyadicInterval> children(const DyadicInterval& q,
                                                   int max_depth = kDefaultMaxDepth);

/// J_n = [2^-n, 2^{1-n}) = right child of I_{n-1}; n >= 1.
DyadicInterval shell(int n);

/// I_k = [0, 2^-k).
DyadicInterval spine(int k);

std::pair<BinaryRational, BinaryRational> endpoints(const DyadicInterval& q);

}  // namespace dyadsq
