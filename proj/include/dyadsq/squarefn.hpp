#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dyadsq/density.hpp"
#include "dyadsq/dyadic.hpp"
#include "dyadsq/wide_real.hpp"

namespace dyadsq {

inline constexpr int kMaxFullDepth = 20;

/// (left child average - parent average, right child average - parent average).
std::pair<double, double> martingale_difference(const Density& g, const DyadicInterval& q);

/// Averages of g on every dyadic interval down to level N.
class MartingaleTable {
 public:
  MartingaleTable(const Density& g, int depth);

  int depth() const { return depth_; }
  double average(int level, std::uint64_t index) const { return avg_[level][index]; }
  double average(const DyadicInterval& q) const { return avg_[q.level()][q.index()]; }
  /// Requires q.level() < depth.
  std::pair<double, double> difference(const DyadicInterval& q) const;

 private:
  int depth_;
  std::vector<std::vector<double>> avg_;
};

struct PiecewiseLeafFunction {
  int depth = 0;
  std::vector<double> values;  // one per level-depth leaf, left to right

  DyadicInterval leaf(std::uint64_t i) const { return DyadicInterval(depth, i); }
};

/// Square function truncated to levels < N. Throws DepthError for N > kMaxFullDepth.
PiecewiseLeafFunction full_square_function(const Density& g, int depth);
PiecewiseLeafFunction full_square_function(const MartingaleTable& table);

/// Spine data of g up to shell n_max, all in extended range.
///
/// A_k = <g>_{I_k}, M_n = <g>_{J_n}. Because I_{k+1} and J_{k+1} have equal
/// measure, the difference of I_k on J_{k+1} is the negative of the one on
/// I_{k+1}, so the spine value on J_n is the root of the sum of squares of the
/// first n inner differences.
struct SpineProfile {
  int n_max = 0;
  std::vector<WideReal> spine_average;     // A_k, k = 0..n_max
  std::vector<WideReal> shell_average;     // M_n at index n = 1..n_max; index 0 unused
  std::vector<WideReal> inner_difference;  // A_{k+1} - A_k, k = 0..n_max-1
  std::vector<WideReal> shell_difference;  // M_{k+1} - A_k, k = 0..n_max-1
  std::vector<WideReal> square_sum;        // sum_{j<k} inner_difference_j^2, k = 0..n_max

  /// Spine square value on J_n, 1 <= n <= n_max.
  WideReal spine_value(int n) const;
  /// Spine square value on I_k from its k proper spine ancestors.
  WideReal ancestor_value(int k) const { return sqrt(square_sum[k]); }
};

SpineProfile spine_profile(const Density& g, int n_max);

/// Spine values laid out on the level-N leaves, for comparison with
/// full_square_function: J_n leaves get the value on J_n, the leaf at 0 its
/// ancestor value. Requires profile.n_max >= N.
PiecewiseLeafFunction spine_leaf_values(const SpineProfile& profile, int depth);

enum class SnormMode { spine, full };

struct SnormOptions {
  SnormMode mode = SnormMode::spine;
  int n_max = 4096;  // spine mode: shells available for the series
  int depth = 12;    // full mode
  double rel_tol = 1e-12;
};

struct SnormResult {
  double value_p = 0.0;  // ||S g||^p in L^p(w)
  double value = 0.0;
  int terms = 0;            // shells summed (spine) or depth (full)
  double tail_bound = 0.0;  // spine mode only
  bool certified = false;
};

/// Lower bound for ||S(g)||_{L^p(w)}, g = sigma f. Spine mode sums the spine
/// values against w(J_n) with a geometric tail certificate and throws
/// TailNotCertifiedError when none is found by n_max.
SnormResult weighted_snorm(const Density& g, const Density& w, double p,
                           const SnormOptions& opts = {});

/// m_k = (ancestor value on I_k)^p * w(I_k) for k = 0..k_max.
std::vector<WideReal> partial_masses(const Density& g, const Density& w, double p, int k_max);
std::vector<WideReal> partial_masses(const SpineProfile& profile, const Density& w, double p);

}  // namespace dyadsq
