#include "dyadsq/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "dyadsq/errors.hpp"
#include "dyadsq/squarefn.hpp"
#include "dyadsq/summation.hpp"

namespace dyadsq {

namespace {

std::string interval_name(double a, double b) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << a << "," << b << ")";
  return os.str();
}

std::string dyadic_name(int level, std::uint64_t index) {
  return "D(" + std::to_string(level) + "," + std::to_string(index) + ")";
}

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("characteristic needs finite p > 1");
}

std::vector<double> leaf_masses(const Density& g, int depth) {
  const std::uint64_t n = std::uint64_t{1} << depth;
  std::vector<double> m(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const DyadicInterval q(depth, i);
    m[i] = g.integrate(q.left(), q.right());
  }
  return m;
}

// x^{e} specialised for small integer e, which covers every p used in practice.
struct PowerKernel {
  explicit PowerKernel(double e) : e_(e), whole_(static_cast<int>(e)), integer_(e == std::floor(e) && e <= 8) {}
  double operator()(double x) const {
    if (!integer_) return std::pow(x, e_);
    double r = 1.0;
    for (int i = 0; i < whole_; ++i) r *= x;
    return r;
  }
  double e_;
  int whole_;
  bool integer_;
};

}  // namespace

double spine_ap_product(const Density& w, const Density& sigma, double p, int k) {
  check_p(p);
  return (w.spine_mean(k) * pow(sigma.spine_mean(k), p - 1.0)).to_double();
}

CharacteristicEstimate spine_joint_ap(const Density& w, const Density& sigma, double p, int depth) {
  check_p(p);
  if (depth < 0) throw DomainError("depth must be >= 0");
  CharacteristicEstimate est;
  est.kind = CharacteristicKind::joint_ap;
  est.scope = ScopeKind::spine;
  est.depth = depth;
  est.p = p;
  int best = 0;
  for (int k = 0; k <= depth; ++k) {
    const double v = spine_ap_product(w, sigma, p, k);
    if (v > est.value) {
      est.value = v;
      best = k;
    }
  }
  est.argmax = "I_" + std::to_string(best);
  return est;
}

CharacteristicEstimate dyadic_joint_ap(const Density& w, const Density& sigma, double p, int depth) {
  check_p(p);
  if (depth < 0) throw DomainError("depth must be >= 0");
  const int full = std::min(depth, kMaxFullTreeApDepth);
  std::vector<double> mw = leaf_masses(w, full);
  std::vector<double> ms = leaf_masses(sigma, full);
  const PowerKernel pk(p - 1.0);
  CharacteristicEstimate est;
  est.kind = CharacteristicKind::joint_ap;
  est.scope = ScopeKind::dyadic;
  est.depth = depth;
  est.p = p;
  for (int level = full; level >= 0; --level) {
    const std::uint64_t count = std::uint64_t{1} << level;
    const double inv = std::ldexp(1.0, level);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double v = mw[i] * inv * pk(ms[i] * inv);
      if (v > est.value) {
        est.value = v;
        est.argmax = dyadic_name(level, i);
      }
    }
    if (level > 0) {
      for (std::uint64_t i = 0; i < count / 2; ++i) {
        mw[i] = mw[2 * i] + mw[2 * i + 1];
        ms[i] = ms[2 * i] + ms[2 * i + 1];
      }
    }
  }
  for (int k = full + 1; k <= depth; ++k) {
    const double v = spine_ap_product(w, sigma, p, k);
    if (v > est.value) {
      est.value = v;
      est.argmax = "I_" + std::to_string(k);
    }
  }
  return est;
}

CharacteristicEstimate muckenhoupt_ap(const Density& w, double p, int depth) {
  CharacteristicEstimate est = dyadic_joint_ap(w, dual_power(w, p), p, depth);
  est.kind = CharacteristicKind::muckenhoupt_ap;
  return est;
}

namespace {

CharacteristicEstimate ainfty_full_tree(const Density& sigma, int depth) {
  const MartingaleTable t(sigma, depth);
  CharacteristicEstimate est;
  est.kind = CharacteristicKind::a_infty;
  est.scope = ScopeKind::dyadic;
  est.depth = depth;
  est.value = 1.0;
  est.argmax = dyadic_name(depth, 0);
  const double leaf = std::ldexp(1.0, -depth);
  for (int root = 0; root < depth; ++root) {
    // running maximum of averages from the root level down to the leaves
    std::vector<double> run(std::size_t{1} << root);
    for (std::uint64_t i = 0; i < run.size(); ++i) run[i] = t.average(root, i);
    for (int level = root + 1; level <= depth; ++level) {
      std::vector<double> next(run.size() * 2);
      for (std::uint64_t i = 0; i < next.size(); ++i) {
        next[i] = std::max(run[i >> 1], t.average(level, i));
      }
      run.swap(next);
    }
    const std::uint64_t per_root = std::uint64_t{1} << (depth - root);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << root); ++r) {
      const double mass = t.average(root, r) * std::ldexp(1.0, -root);
      if (!(mass > 0.0)) continue;
      CompensatedSum s;
      for (std::uint64_t i = r * per_root; i < (r + 1) * per_root; ++i) s += run[i] * leaf;
      const double v = s.value() / mass;
      if (v > est.value) {
        est.value = v;
        est.argmax = dyadic_name(root, r);
      }
    }
  }
  return est;
}

// Sorted within-shell maxima for one shell, normalised by the shell mean.
struct ShellMaxima {
  WideReal mean;
  std::vector<double> sorted;      // ascending leaf maxima / mean
  std::vector<double> suffix_sum;  // suffix_sum[i] = sum of sorted[i..]

  // mean over the shell of max(c, local maximal function)
  WideReal average_of_max(const WideReal& c) const {
    if (mean.is_zero()) return c;
    const double ratio = (c / mean).to_double();
    if (!std::isfinite(ratio)) return c;
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), ratio);
    const std::size_t below = static_cast<std::size_t>(it - sorted.begin());
    const double total = ratio * static_cast<double>(below) + suffix_sum[below];
    return mean * WideReal(total / static_cast<double>(sorted.size()));
  }
};

ShellMaxima shell_maxima(const Density& sigma, int n, int local_depth) {
  ShellMaxima sm;
  sm.mean = sigma.shell_mean(n);
  const std::size_t leaves = std::size_t{1} << local_depth;
  std::vector<double> avg(leaves, 1.0);
  if (!sm.mean.is_zero() && local_depth > 0) {
    const double w = 1.0 / static_cast<double>(leaves);
    for (std::size_t i = 0; i < leaves; ++i) {
      const WideReal seg = sigma.shell_integral_scaled(n, i * w, (i + 1) * w);
      avg[i] = (seg / sm.mean).to_double() * static_cast<double>(leaves);
    }
  }
  // path maxima: start from the leaves' own averages and fold parents in
  std::vector<double> run = avg;
  std::vector<double> level_avg = avg;
  for (int d = local_depth; d > 0; --d) {
    const std::size_t count = std::size_t{1} << (d - 1);
    std::vector<double> parent(count);
    for (std::size_t i = 0; i < count; ++i) {
      parent[i] = 0.5 * (level_avg[2 * i] + level_avg[2 * i + 1]);
    }
    const std::size_t stride = leaves / count;
    for (std::size_t i = 0; i < leaves; ++i) run[i] = std::max(run[i], parent[i / stride]);
    level_avg.swap(parent);
  }
  std::sort(run.begin(), run.end());
  sm.suffix_sum.assign(leaves + 1, 0.0);
  for (std::size_t i = leaves; i-- > 0;) sm.suffix_sum[i] = sm.suffix_sum[i + 1] + run[i];
  sm.sorted = std::move(run);
  return sm;
}

CharacteristicEstimate ainfty_radial(const Density& sigma, int depth) {
  if (!sigma.radial()) throw DomainError("radial A_infinity needs a radial density");
  const SpineProfile sp = spine_profile(sigma, depth);
  std::vector<ShellMaxima> shells(depth + 1);
  for (int n = 1; n <= depth; ++n) {
    shells[n] = shell_maxima(sigma, n, std::min(depth - n, kRadialLocalDepth));
  }
  CharacteristicEstimate est;
  est.kind = CharacteristicKind::a_infty;
  est.scope = ScopeKind::radial;
  est.depth = depth;
  est.value = 1.0;
  est.argmax = "I_" + std::to_string(depth);
  const auto& a = sp.spine_average;
  for (int m = 0; m < depth; ++m) {
    if (!(a[m] > WideReal(0.0))) continue;
    WideReal c = a[m];
    WideReal total = 0.0;
    for (int n = m + 1; n <= depth; ++n) {
      c = max(c, a[n - 1]);
      total += ldexp(shells[n].average_of_max(c), static_cast<std::int64_t>(m) - n);
    }
    c = max(c, a[depth]);
    total += ldexp(c, static_cast<std::int64_t>(m) - depth);
    const double v = (total / a[m]).to_double();
    if (v > est.value) {
      est.value = v;
      est.argmax = "I_" + std::to_string(m);
    }
  }
  return est;
}

}  // namespace

CharacteristicEstimate dyadic_ainfty(const Density& sigma, int depth, AinftyMode mode) {
  if (depth < 1) throw DomainError("A_infinity needs depth >= 1");
  if (mode == AinftyMode::full_tree) {
    if (depth > kMaxFullDepth) {
      throw DepthError("full-tree A_infinity limited to depth " + std::to_string(kMaxFullDepth));
    }
    return ainfty_full_tree(sigma, depth);
  }
  return ainfty_radial(sigma, depth);
}

CharacteristicEstimate interval_scan_joint_ap(const Density& w, const Density& sigma, double p,
                                              const ScanOptions& o) {
  check_p(p);
  int e = 0;
  if (!(o.grid_step > 0.0) || std::frexp(o.grid_step, &e) != 0.5 || o.grid_step > 1.0) {
    throw DomainError("grid step must be a power of 2 no larger than 1");
  }
  if (!(o.span > 0.0)) throw DomainError("scan span must be positive");
  const double h = o.grid_step;
  const double lo = -o.span;
  const auto cells = static_cast<std::int64_t>(std::llround(2.0 * o.span / h));
  if (std::fabs(static_cast<double>(cells) * h - 2.0 * o.span) > 0.0) {
    throw DomainError("span must be a multiple of the grid step");
  }
  std::vector<double> cw(cells), cs(cells);
  for (std::int64_t i = 0; i < cells; ++i) {
    const double a = lo + static_cast<double>(i) * h;
    cw[i] = w.integrate(a, a + h);
    cs[i] = sigma.integrate(a, a + h);
  }
  std::vector<double> inv_len_p(cells + 1, 0.0);
  for (std::int64_t l = 1; l <= cells; ++l) inv_len_p[l] = std::pow(static_cast<double>(l) * h, -p);

  std::int64_t left_count = cells;
  const auto pw = w.period(), ps = sigma.period();
  if (pw && ps && *pw == *ps) {
    const double per = *pw / h;
    if (per == std::floor(per) && per < static_cast<double>(cells)) {
      left_count = static_cast<std::int64_t>(per);
    }
  }

  const PowerKernel pk(p - 1.0);
  double best = 0.0;
  std::int64_t bi = 0, bj = 1;
  for (std::int64_t i = 0; i < left_count; ++i) {
    double sw = 0.0, ss = 0.0;
    for (std::int64_t j = i; j < cells; ++j) {
      sw += cw[j];
      ss += cs[j];
      const double v = sw * pk(ss) * inv_len_p[j - i + 1];
      if (v > best) {
        best = v;
        bi = i;
        bj = j + 1;
      }
    }
  }
  CharacteristicEstimate est;
  est.kind = CharacteristicKind::joint_ap;
  est.scope = ScopeKind::scan;
  est.span = o.span;
  est.grid_step = h;
  est.p = p;
  est.value = best;
  est.argmax = interval_name(lo + static_cast<double>(bi) * h, lo + static_cast<double>(bj) * h);

  const int first_level = -std::ilogb(h) + 1;
  for (double z : o.anchors) {
    if (z < lo || z > o.span) continue;
    for (int i = first_level - 1; i < first_level + o.anchor_levels; ++i) {
      for (int j = first_level - 1; j < first_level + o.anchor_levels; ++j) {
        // level first_level - 1 stands for a zero offset on that side
        const double a = (i < first_level) ? z : z - std::ldexp(1.0, -i);
        const double b = (j < first_level) ? z : z + std::ldexp(1.0, -j);
        if (!(a < b) || a < lo || b > o.span) continue;
        const double len = b - a;
        const double v = w.integrate(a, b) / len * std::pow(sigma.integrate(a, b) / len, p - 1.0);
        if (v > est.value) {
          est.value = v;
          est.argmax = interval_name(a, b);
        }
      }
    }
  }
  return est;
}

}  // namespace dyadsq
