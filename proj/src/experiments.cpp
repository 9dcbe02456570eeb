#include "dyadsq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dyadsq/errors.hpp"
#include "dyadsq/squarefn.hpp"
#include "dyadsq/summation.hpp"

namespace dyadsq {

namespace {

// Plain OLS on already-transformed coordinates.
void least_squares(const std::vector<std::pair<double, double>>& pts, double& slope,
                   double& intercept) {
  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  // relative spread test catches repeated x
  const double scale = std::max(1.0, std::fabs(mx));
  if (!(sxx > 1e-24 * scale * scale * n)) throw DomainError("fit needs distinct x values");
  slope = sxy / sxx;
  intercept = my - slope * mx;
}

void require_points(std::size_t n) {
  if (n < 3) throw DomainError("fit needs at least 3 points, got " + std::to_string(n));
}

double fnorm_of(const FamilyInstance& fam) {
  return std::pow(fam.f_power_sigma.integrate(0.0, 1.0), 1.0 / fam.p);
}

int ainfty_depth(double factor, double beta) {
  return static_cast<int>(std::ceil(factor / (1.0 - beta)));
}

std::vector<std::pair<double, double>> window(const std::vector<std::pair<double, double>>& all,
                                              int skip) {
  if (skip < 0) throw DomainError("fit_skip must be >= 0");
  if (static_cast<std::size_t>(skip) >= all.size()) return {};
  return {all.begin() + skip, all.end()};
}

void require_sorted_betas(const std::vector<double>& betas) {
  if (betas.empty()) throw DomainError("empty beta grid");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0 && betas[i] < 1.0)) throw DomainError("beta must lie in (0, 1)");
    if (i > 0 && !(betas[i] > betas[i - 1])) throw DomainError("beta grid must be increasing");
  }
}

std::vector<int> log_spaced(int lo, int hi, int count) {
  std::vector<int> out;
  if (hi < lo) return out;
  count = std::max(count, 2);
  const double a = std::log(static_cast<double>(std::max(lo, 1)));
  const double b = std::log(static_cast<double>(std::max(hi, 1)));
  if (lo == 0) out.push_back(0);
  for (int i = 0; i < count; ++i) {
    const double t = a + (b - a) * i / (count - 1);
    out.push_back(static_cast<int>(std::lround(std::exp(t))));
  }
  out.push_back(hi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FitResult exponent_fit_window(const std::vector<std::pair<double, double>>& all, int skip);

}  // namespace

FitResult exponent_fit(const std::vector<std::pair<double, double>>& points) {
  require_points(points.size());
  std::vector<std::pair<double, double>> logs;
  logs.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!(x > 0.0 && y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw DomainError("exponent_fit needs positive finite points");
    }
    logs.emplace_back(std::log(x), std::log(y));
  }
  FitResult r;
  least_squares(logs, r.slope, r.intercept);
  r.points = static_cast<int>(points.size());
  for (const auto& [lx, ly] : logs) {
    r.max_residual = std::max(r.max_residual, std::fabs(std::expm1(ly - r.intercept - r.slope * lx)));
  }
  return r;
}

FitResult affine_fit(const std::vector<std::pair<double, double>>& points) {
  require_points(points.size());
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("affine_fit needs finite points");
  }
  FitResult r;
  least_squares(points, r.slope, r.intercept);
  r.points = static_cast<int>(points.size());
  for (const auto& [x, y] : points) {
    const double fit = r.intercept + r.slope * x;
    r.max_residual = std::max(r.max_residual, std::fabs(y - fit) / std::fabs(y));
  }
  return r;
}

namespace {

// Too short a grid leaves the fit empty (points = 0) rather than failing the rows.
FitResult exponent_fit_window(const std::vector<std::pair<double, double>>& all, int skip) {
  const auto pts = window(all, skip);
  if (pts.size() < 3) return {};
  return exponent_fit(pts);
}

}  // namespace

std::vector<double> dyadic_beta_grid(int first, int last) {
  if (first < 1 || last < first || last > 50) throw DomainError("grid needs 1 <= a <= b <= 50");
  std::vector<double> out;
  for (int j = first; j <= last; ++j) out.push_back(1.0 - std::ldexp(1.0, -j));
  return out;
}

int default_n_max(double beta) {
  return std::max(4096, static_cast<int>(std::ceil(128.0 / (1.0 - beta))));
}

ScalingReport scaling_experiment(ScalingFamily family, double p, const std::vector<double>& betas,
                                 const ScalingOptions& opts) {
  require_sorted_betas(betas);
  if (opts.with_ainfty && opts.ainfty_depth_factor < 16.0) {
    throw DomainError("A_infinity depth factor must be >= 16");
  }
  ScalingReport rep;
  rep.family = family == ScalingFamily::lerner ? "lerner" : "alternating";
  rep.p = p;
  rep.fit_skip = opts.fit_skip;
  for (double beta : betas) {
    const FamilyInstance fam =
        family == ScalingFamily::lerner ? lerner_family(p, beta) : alternating_family(p, beta);
    rep.predicted_snorm_exponent = fam.predicted.snorm_exponent;
    rep.predicted_ratio_exponent = fam.predicted.ratio_exponent;
    const int n_max = opts.n_max > 0 ? opts.n_max : default_n_max(beta);
    if (n_max < 32.0 / (1.0 - beta)) {
      throw DomainError("n_max " + std::to_string(n_max) + " below 32/(1-beta) at beta " +
                        std::to_string(beta));
    }
    SnormOptions so;
    so.mode = SnormMode::spine;
    so.n_max = n_max;
    const SnormResult s = weighted_snorm(fam.sigma_f, fam.w, p, so);

    ScalingRow row;
    row.beta = beta;
    row.fnorm = fnorm_of(fam);
    row.snorm = s.value;
    row.shells = s.terms;
    // scale invariant on the spine, so a short stretch suffices
    row.ap_joint = spine_joint_ap(fam.w, fam.sigma, p, 64).value;
    if (opts.with_ainfty) {
      const int depth = ainfty_depth(opts.ainfty_depth_factor, beta);
      row.ainfty_w = dyadic_ainfty(fam.w, depth, AinftyMode::radial).value;
      row.ainfty_sigma = dyadic_ainfty(fam.sigma, depth, AinftyMode::radial).value;
    }
    row.ratio = row.snorm / (row.fnorm * std::pow(row.ap_joint, 1.0 / p));
    rep.rows.push_back(row);
  }
  std::vector<std::pair<double, double>> sn, ra;
  for (const auto& row : rep.rows) {
    sn.emplace_back(1.0 / (1.0 - row.beta), row.snorm);
    ra.emplace_back(1.0 / (1.0 - row.beta), row.ratio);
  }
  rep.snorm_fit = exponent_fit_window(sn, opts.fit_skip);
  rep.ratio_fit = exponent_fit_window(ra, opts.fit_skip);
  return rep;
}

AinftyReport ainfty_growth_experiment(double p, const std::vector<double>& betas,
                                      double depth_factor, int fit_skip) {
  require_sorted_betas(betas);
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (depth_factor < 16.0) {
    throw DomainError("depth factor " + std::to_string(depth_factor) +
                      " is below 16; the largest beta would be under-resolved");
  }
  AinftyReport rep;
  rep.p = p;
  rep.depth_factor = depth_factor;
  rep.fit_skip = fit_skip;
  double lo = INFINITY, hi = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (double beta : betas) {
    AinftyRow row;
    row.beta = beta;
    row.depth = ainfty_depth(depth_factor, beta);
    row.ainfty_w = dyadic_ainfty(power(1.0, -beta), row.depth, AinftyMode::radial).value;
    row.ainfty_sigma =
        dyadic_ainfty(power(1.0, beta / (p - 1.0)), row.depth, AinftyMode::radial).value;
    lo = std::min(lo, row.ainfty_sigma);
    hi = std::max(hi, row.ainfty_sigma);
    pts.emplace_back(1.0 / (1.0 - beta), row.ainfty_w);
    rep.rows.push_back(row);
  }
  rep.sigma_spread = hi / lo;
  rep.w_fit = exponent_fit_window(pts, fit_skip);
  return rep;
}

LaiTreilDivergence lai_treil_divergence(double p, double r, int k_max, int sample_rows) {
  if (k_max < 100 || k_max > 1000000) throw DomainError("k_max must lie in [100, 1e6]");
  const FamilyInstance fam = lai_treil_family(p, r);
  const double alpha = lai_treil_alpha(r);

  LaiTreilDivergence rep;
  rep.p = p;
  rep.r = r;
  rep.k_max = k_max;
  rep.c1 = std::pow(4.0, -p);
  rep.c2 = std::numbers::ln2 * (std::pow(2.0, alpha) - std::pow(3.0, alpha)) /
           (std::pow(2.0, alpha + 1.0) * alpha * alpha);
  rep.predicted_exponent = fam.predicted.partial_mass_exponent;
  rep.fit_lo = k_max / 100;
  rep.fit_hi = k_max;

  const SpineProfile prof = spine_profile(fam.sigma_f, k_max + 1);
  const std::vector<WideReal> m = partial_masses(prof, fam.w, p);

  rep.min_difference_ratio = INFINITY;
  rep.min_shell_difference_ratio = INFINITY;
  for (int k = 0; k < k_max; ++k) {
    const double s = 4.0 * std::pow(k + 2.0, r);
    rep.min_difference_ratio =
        std::min(rep.min_difference_ratio, std::fabs(prof.inner_difference[k].to_double()) * s);
    rep.min_shell_difference_ratio =
        std::min(rep.min_shell_difference_ratio, std::fabs(prof.shell_difference[k].to_double()) * s);
  }

  std::vector<double> bound(k_max + 1, 0.0);
  CompensatedSum tail_sum;
  for (int k = 1; k <= k_max; ++k) {
    tail_sum.add(std::pow(k + 1.0, -2.0 * r));
    bound[k] = rep.c1 * rep.c2 * std::pow(tail_sum.value(), p / 2.0 - 1.0);
  }

  rep.min_ratio = INFINITY;
  std::vector<std::pair<double, double>> fit_pts;
  fit_pts.reserve(rep.fit_hi - rep.fit_lo + 1);
  for (int k = 1; k <= k_max; ++k) {
    const double mk = m[k].to_double();
    const double ratio = mk / bound[k];
    if (ratio < 1.0) ++rep.violations;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    if (k >= rep.fit_lo) {
      fit_pts.emplace_back(static_cast<double>(k), mk);
      if (k > rep.fit_lo && mk < m[k - 1].to_double() && rep.nondecreasing) {
        rep.nondecreasing = false;
        rep.first_decrease = k;
      }
    }
  }
  rep.growth_fit = exponent_fit(fit_pts);

  for (int k : log_spaced(1, k_max, sample_rows)) {
    DivergenceRow row;
    row.k = k;
    row.partial = m[k].to_double();
    row.bound = bound[k];
    row.ratio = row.partial / row.bound;
    rep.rows.push_back(row);
  }
  return rep;
}

double direct_sum_block_square_norm_p(double p, int k) {
  const DirectSumBlock b = direct_sum_block(p, k);
  SnormOptions so;
  so.mode = SnormMode::spine;
  so.n_max = std::max(4096, 128 * k);
  return weighted_snorm(b.unit_sigma_f, b.unit_w, p, so).value_p * b.scale_p;
}

DirectSumDivergence direct_sum_divergence(double p, int norm_blocks, int square_blocks) {
  if (norm_blocks < 1 || norm_blocks > 1000000) throw DomainError("norm_blocks must lie in [1, 1e6]");
  if (square_blocks < 12 || square_blocks > 4000) {
    throw DomainError("square_blocks must lie in [12, 4000]");
  }
  DirectSumDivergence rep;
  rep.p = p;
  rep.norm_blocks = norm_blocks;
  rep.square_blocks = square_blocks;
  rep.norm_limit = direct_sum_fnorm_p(p);

  const auto norm_keep = log_spaced(1, norm_blocks, 60);
  CompensatedSum fsum;
  for (int j = 0, next = 0; j < norm_blocks; ++j) {
    const int k = 2 * j + 1;
    const DirectSumBlock b = direct_sum_block(p, k);
    // block ||f||^p = scale_p * integral over the unit cell of x^-beta_k
    fsum.add(b.scale_p * power(1.0, -b.beta_k).integrate(0.0, 1.0));
    if (next < static_cast<int>(norm_keep.size()) && j + 1 == norm_keep[next]) {
      DivergenceRow row;
      row.k = j + 1;
      row.partial = fsum.value();
      row.bound = rep.norm_limit;
      row.ratio = row.partial / row.bound;
      rep.norm_rows.push_back(row);
      ++next;
    }
  }
  rep.norm_tail = rep.norm_limit - fsum.value();

  CompensatedSum ssum, harmonic;
  std::vector<std::pair<double, double>> fit_pts;
  rep.fit_lo = std::max(3, square_blocks / 40);
  for (int j = 0; j < square_blocks; ++j) {
    const int k = 2 * j + 1;
    ssum.add(direct_sum_block_square_norm_p(p, k));
    harmonic.add(1.0 / k);
    DivergenceRow row;
    row.k = j + 1;
    row.partial = ssum.value();
    row.bound = harmonic.value();
    row.ratio = row.partial / row.bound;
    rep.square_rows.push_back(row);
    if (j + 1 >= rep.fit_lo) fit_pts.emplace_back(std::log(j + 1.0), row.partial);
  }
  rep.log_fit = affine_fit(fit_pts);
  return rep;
}

ExtensionReport extension_experiment(const FamilyInstance& inner, double span, double grid_step,
                                     int invariant_samples) {
  if (invariant_samples < 0 || invariant_samples > 1024) {
    throw DomainError("invariant_samples must lie in [0, 1024]");
  }
  const FamilyInstance ext = extend_to_line(inner);
  ExtensionReport rep;
  rep.family = inner.name;
  rep.p = inner.p;
  rep.span = span;
  rep.grid_step = grid_step;

  ScanOptions so;
  so.grid_step = grid_step;
  so.span = span;
  so.anchors = line_anchors(ext, span);
  rep.scan_span = interval_scan_joint_ap(ext.w, ext.sigma, inner.p, so);
  so.span = 2.0 * span;
  so.anchors = line_anchors(ext, 2.0 * span);
  rep.scan_double_span = interval_scan_joint_ap(ext.w, ext.sigma, inner.p, so);
  rep.ratio = rep.scan_double_span.value / rep.scan_span.value;

  const int depth = static_cast<int>(std::lround(-std::log2(grid_step)));
  rep.unit_dyadic = dyadic_joint_ap(inner.w, inner.sigma, inner.p, depth);

  // dyadic sample points keep x + 2 and -x exact
  rep.invariant_samples = invariant_samples;
  const double step = std::ldexp(2.0 * span, -10);
  for (int i = 0; i < invariant_samples; ++i) {
    const double x = -span + (i + 0.5) * step;
    for (const Density* d : {&ext.w, &ext.sigma}) {
      const double v = (*d)(x);
      if (!((*d)(x + 2.0) == v && (*d)(-x) == v)) ++rep.invariant_failures;
    }
  }
  return rep;
}

}  // namespace dyadsq
