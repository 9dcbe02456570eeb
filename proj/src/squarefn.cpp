#include "dyadsq/squarefn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dyadsq/errors.hpp"
#include "dyadsq/summation.hpp"

namespace dyadsq {

std::pair<double, double> martingale_difference(const Density& g, const DyadicInterval& q) {
  const auto [l, r] = children(q, 63);
  const double ml = g.integrate(l.left(), l.right());
  const double mr = g.integrate(r.left(), r.right());
  const double h = q.measure() / 2.0;
  const double parent = (ml + mr) / q.measure();
  return {ml / h - parent, mr / h - parent};
}

MartingaleTable::MartingaleTable(const Density& g, int depth) : depth_(depth) {
  if (depth < 0 || depth > kMaxFullDepth) {
    throw DepthError("full-tree depth " + std::to_string(depth) + " outside [0, " +
                     std::to_string(kMaxFullDepth) + "]");
  }
  avg_.resize(depth + 1);
  const std::uint64_t leaves = std::uint64_t{1} << depth;
  // masses first; parents are exact sums of children
  std::vector<double> mass(leaves);
  for (std::uint64_t i = 0; i < leaves; ++i) {
    const DyadicInterval q(depth, i);
    mass[i] = g.integrate(q.left(), q.right());
  }
  for (int level = depth; level >= 0; --level) {
    const std::uint64_t count = std::uint64_t{1} << level;
    const double inv = std::ldexp(1.0, level);
    avg_[level].resize(count);
    for (std::uint64_t i = 0; i < count; ++i) avg_[level][i] = mass[i] * inv;
    if (level > 0) {
      for (std::uint64_t i = 0; i < count / 2; ++i) mass[i] = mass[2 * i] + mass[2 * i + 1];
    }
  }
}

std::pair<double, double> MartingaleTable::difference(const DyadicInterval& q) const {
  if (q.level() >= depth_) throw DepthError("difference below the table depth");
  const double a = avg_[q.level()][q.index()];
  return {avg_[q.level() + 1][2 * q.index()] - a, avg_[q.level() + 1][2 * q.index() + 1] - a};
}

PiecewiseLeafFunction full_square_function(const MartingaleTable& table) {
  const int depth = table.depth();
  std::vector<double> sq{0.0};
  for (int level = 0; level < depth; ++level) {
    std::vector<double> next(sq.size() * 2);
    for (std::uint64_t i = 0; i < sq.size(); ++i) {
      const double a = table.average(level, i);
      const double dl = table.average(level + 1, 2 * i) - a;
      const double dr = table.average(level + 1, 2 * i + 1) - a;
      next[2 * i] = sq[i] + dl * dl;
      next[2 * i + 1] = sq[i] + dr * dr;
    }
    sq.swap(next);
  }
  PiecewiseLeafFunction out{depth, std::move(sq)};
  for (double& v : out.values) v = std::sqrt(v);
  return out;
}

PiecewiseLeafFunction full_square_function(const Density& g, int depth) {
  return full_square_function(MartingaleTable(g, depth));
}

WideReal SpineProfile::spine_value(int n) const {
  if (n < 1 || n > n_max) throw DomainError("shell index outside the spine profile");
  return sqrt(square_sum[n]);
}

SpineProfile spine_profile(const Density& g, int n_max) {
  if (n_max < 1) throw DomainError("spine profile needs n_max >= 1");
  SpineProfile sp;
  sp.n_max = n_max;
  sp.spine_average.resize(n_max + 1);
  sp.shell_average.resize(n_max + 1);
  for (int n = 1; n <= n_max; ++n) sp.shell_average[n] = g.shell_mean(n);
  // Backward recursion halves any error in the seed at every step.
  sp.spine_average[n_max] = g.spine_mean(n_max);
  for (int k = n_max - 1; k >= 0; --k) {
    sp.spine_average[k] = ldexp(sp.spine_average[k + 1] + sp.shell_average[k + 1], -1);
  }
  sp.inner_difference.resize(n_max);
  sp.shell_difference.resize(n_max);
  sp.square_sum.resize(n_max + 1);
  sp.square_sum[0] = 0.0;
  for (int k = 0; k < n_max; ++k) {
    const WideReal d = ldexp(sp.spine_average[k + 1] - sp.shell_average[k + 1], -1);
    sp.inner_difference[k] = d;
    sp.shell_difference[k] = -d;
    sp.square_sum[k + 1] = sp.square_sum[k] + d * d;
  }
  return sp;
}

PiecewiseLeafFunction spine_leaf_values(const SpineProfile& profile, int depth) {
  if (depth > profile.n_max) throw DomainError("spine profile shorter than the leaf depth");
  if (depth < 0 || depth > kMaxFullDepth) throw DepthError("leaf depth outside the full-tree cap");
  PiecewiseLeafFunction out;
  out.depth = depth;
  out.values.assign(std::size_t{1} << depth, 0.0);
  out.values[0] = profile.ancestor_value(depth).to_double();
  for (int n = 1; n <= depth; ++n) {
    const double v = profile.spine_value(n).to_double();
    const std::uint64_t first = std::uint64_t{1} << (depth - n);
    for (std::uint64_t i = first; i < 2 * first; ++i) out.values[i] = v;
  }
  return out;
}

namespace {

constexpr double kRatioSlack = 1e-12;

SnormResult spine_snorm(const Density& g, const Density& w, double p, const SnormOptions& o) {
  const SpineProfile sp = spine_profile(g, o.n_max);
  CompensatedSum sum;
  WideReal prev = 0.0;
  std::array<double, 8> ratios{};
  int ratio_count = 0;
  bool all_zero = true;
  for (int n = 1; n <= o.n_max; ++n) {
    const WideReal wj = ldexp(w.shell_mean(n), -n);
    const WideReal t = pow(sp.square_sum[n], p / 2.0) * wj;
    sum += t.to_double();
    if (!t.is_zero()) all_zero = false;
    if (!prev.is_zero() && !t.is_zero()) {
      const double rho = (t / prev).to_double();
      ratios[ratio_count % 8] = rho;
      ++ratio_count;
      if (ratio_count >= 8 && rho < 1.0) {
        // once the ratio has settled it only moves by rounding, hence the slack
        bool monotone = true;
        double rho_max = rho;
        for (int i = 1; i < 8; ++i) {
          const double later = ratios[(ratio_count - i) % 8];
          const double earlier = ratios[(ratio_count - i - 1) % 8];
          rho_max = std::max(rho_max, earlier);
          if (later > earlier * (1.0 + kRatioSlack)) {
            monotone = false;
            break;
          }
        }
        rho_max *= 1.0 + 1e3 * kRatioSlack;
        if (monotone && rho_max < 1.0) {
          const double bound = t.to_double() * rho_max / (1.0 - rho_max);
          if (bound < o.rel_tol * sum.value()) {
            SnormResult r;
            r.value_p = sum.value();
            r.value = std::pow(r.value_p, 1.0 / p);
            r.terms = n;
            r.tail_bound = bound;
            r.certified = true;
            return r;
          }
        }
      }
    } else {
      ratio_count = 0;
    }
    prev = t;
  }
  if (all_zero) {
    SnormResult r;
    r.terms = o.n_max;
    r.certified = true;
    return r;
  }
  throw TailNotCertifiedError("square-function series not certified within " +
                              std::to_string(o.n_max) + " shells");
}

SnormResult full_snorm(const Density& g, const Density& w, double p, const SnormOptions& o) {
  const PiecewiseLeafFunction s = full_square_function(g, o.depth);
  CompensatedSum sum;
  for (std::uint64_t i = 0; i < s.values.size(); ++i) {
    const DyadicInterval q = s.leaf(i);
    sum += std::pow(s.values[i], p) * w.integrate(q.left(), q.right());
  }
  SnormResult r;
  r.value_p = sum.value();
  r.value = std::pow(r.value_p, 1.0 / p);
  r.terms = o.depth;
  return r;
}

}  // namespace

SnormResult weighted_snorm(const Density& g, const Density& w, double p, const SnormOptions& opts) {
  if (!(p > 1.0)) throw DomainError("weighted_snorm needs p > 1");
  if (opts.mode == SnormMode::full) return full_snorm(g, w, p, opts);
  if (opts.n_max < 8) throw DomainError("spine mode needs n_max >= 8");
  return spine_snorm(g, w, p, opts);
}

std::vector<WideReal> partial_masses(const SpineProfile& profile, const Density& w, double p) {
  std::vector<WideReal> m(profile.n_max + 1);
  for (int k = 0; k <= profile.n_max; ++k) {
    const WideReal wi = ldexp(w.spine_mean(k), -k);
    m[k] = pow(profile.square_sum[k], p / 2.0) * wi;
  }
  return m;
}

std::vector<WideReal> partial_masses(const Density& g, const Density& w, double p, int k_max) {
  if (!(p > 1.0)) throw DomainError("partial_masses needs p > 1");
  return partial_masses(spine_profile(g, std::max(k_max, 1)), w, p);
}

}  // namespace dyadsq
