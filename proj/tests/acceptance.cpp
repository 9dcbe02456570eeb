// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dyadsq/characteristics.hpp"
#include "dyadsq/dyadic.hpp"
#include "dyadsq/experiments.hpp"
#include "dyadsq/families.hpp"
#include "dyadsq/squarefn.hpp"

using namespace dyadsq;

namespace {

// tolerances and limits, all in one place
constexpr double kIdentityRelTol = 1e-10;
constexpr double kSlopeTol = 0.05;
constexpr double kAinftySlopeTol = 0.1;
constexpr double kSigmaSpreadMax = 1.25;
constexpr double kNormTailMax = 1e-3;
constexpr int kNormBlocks = 10000;
constexpr int kSquareBlocks = 400;
constexpr double kAffineResidualMax = 0.10;
constexpr int kLaiTreilKMax = 1000000;
constexpr double kGrowthFraction = 0.8;
constexpr double kSpanStabilityTol = 0.01;
constexpr int kInvariantSamples = 1000;
constexpr double kLeafRoundoff = 1e-12;
constexpr double kSpineEqualityTol = 1e-12;
constexpr double kAinftyAgreementTol = 0.01;

const std::vector<double> kPs = {2.5, 3.0, 4.0};

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string num(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

bool rel_close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }

Outcome identities() {
  Outcome o;
  double worst_mean = 0.0, worst_diff = 0.0;
  const FamilyInstance alt = alternating_family(3.0, 0.5);
  for (int k = 0; k <= 50; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double mean = alt.sigma_f.spine_mean(k).to_double();
    worst_mean = std::max(worst_mean, std::fabs(mean - sign / 3.0) / (1.0 / 3.0));
    const auto [left, right] = martingale_difference(alt.sigma_f, DyadicInterval(k, 0));
    worst_diff = std::max(worst_diff, std::fabs(left + sign * 2.0 / 3.0) / (2.0 / 3.0));
    worst_diff = std::max(worst_diff, std::fabs(right - sign * 2.0 / 3.0) / (2.0 / 3.0));
  }
  o.check(worst_mean <= kIdentityRelTol, "spine means (-1)^k/3 rel err " + num(worst_mean, 3));
  o.check(worst_diff <= kIdentityRelTol, "differences 2(-1)^(k+1)/3 rel err " + num(worst_diff, 3));

  double worst_norm = 0.0, worst_product = 0.0;
  for (double p : kPs) {
    for (double beta : {0.25, 0.5, 0.875, 0.99609375}) {
      for (const FamilyInstance& fam : {lerner_family(p, beta), alternating_family(p, beta)}) {
        const double got = fam.f_power_sigma.integrate(0.0, 1.0);
        worst_norm = std::max(worst_norm, std::fabs(got * (1.0 - beta) - 1.0));
      }
      const FamilyInstance pair = power_pair(p, beta, PowerPairVariant::i);
      const double expect = std::pow(1.0 + beta / (p - 1.0), 1.0 - p) / (1.0 - beta);
      for (int k : {0, 7}) {
        const double got = spine_ap_product(pair.w, pair.sigma, p, k);
        worst_product = std::max(worst_product, std::fabs(got - expect) / expect);
      }
    }
  }
  o.check(worst_norm <= kIdentityRelTol, "||f||^p = 1/(1-beta) rel err " + num(worst_norm, 3));
  o.check(worst_product <= kIdentityRelTol, "power pair product rel err " + num(worst_product, 3));

  double worst_lt = 0.0;
  for (double p : {3.0, 4.0}) {
    for (double r : {0.4, lai_treil_default_r(p)}) {
      if (!(r > 1.0 / p && r < 0.5)) continue;
      const FamilyInstance lt = lai_treil_family(p, r);
      const double mass = lt.f_power_sigma.integrate(0.0, 1.0);
      worst_lt = std::max(worst_lt, std::fabs(mass / (std::numbers::ln2 / (p * r - 1.0)) - 1.0));
      const double product = spine_ap_product(lt.w, lt.sigma, p, 0);
      const double expect =
          std::numbers::ln2 / (1.0 - 2.0 * r) * std::pow((p - 1.0) / p, p - 1.0);
      worst_lt = std::max(worst_lt, std::fabs(product / expect - 1.0));
    }
  }
  o.check(worst_lt <= kIdentityRelTol, "log-power mass and product rel err " + num(worst_lt, 3));
  return o;
}

Outcome lerner_exponent() {
  Outcome o;
  ScalingOptions so;
  so.with_ainfty = false;
  for (double p : kPs) {
    const ScalingReport r = scaling_experiment(ScalingFamily::lerner, p, dyadic_beta_grid(3, 8), so);
    const double want = 1.0 + 1.0 / p;
    o.check(std::fabs(r.snorm_fit.slope - want) <= kSlopeTol,
            "p=" + num(p) + " slope " + num(r.snorm_fit.slope, 5) + " vs " + num(want, 5));
  }
  return o;
}

Outcome alternating_exponent() {
  Outcome o;
  ScalingOptions so;
  so.with_ainfty = false;
  for (double p : kPs) {
    const ScalingReport a =
        scaling_experiment(ScalingFamily::alternating, p, dyadic_beta_grid(3, 8), so);
    const ScalingReport l = scaling_experiment(ScalingFamily::lerner, p, dyadic_beta_grid(3, 8), so);
    const double s_want = 0.5 + 1.0 / p, phi = 0.5 - 1.0 / p, psi = 1.0 / p;
    o.check(std::fabs(a.snorm_fit.slope - s_want) <= kSlopeTol,
            "p=" + num(p) + " snorm " + num(a.snorm_fit.slope, 5) + " vs " + num(s_want, 5));
    o.check(std::fabs(a.ratio_fit.slope - phi) <= kSlopeTol,
            "phi " + num(a.ratio_fit.slope, 5) + " vs " + num(phi, 5));
    o.check(std::fabs(l.ratio_fit.slope - psi) <= kSlopeTol,
            "psi " + num(l.ratio_fit.slope, 5) + " vs " + num(psi, 5));
  }
  return o;
}

Outcome ainfty_growth() {
  Outcome o;
  for (double p : kPs) {
    const AinftyReport r = ainfty_growth_experiment(p, dyadic_beta_grid(3, 8), 16.0);
    o.check(std::fabs(r.w_fit.slope - 1.0) <= kAinftySlopeTol,
            "p=" + num(p) + " w slope " + num(r.w_fit.slope, 5));
    o.check(r.sigma_spread <= kSigmaSpreadMax, "sigma max/min " + num(r.sigma_spread, 5));
  }
  return o;
}

Outcome direct_sum() {
  Outcome o;
  const DirectSumDivergence d = direct_sum_divergence(3.0, kNormBlocks, kSquareBlocks);
  o.check(d.norm_tail >= 0.0 && d.norm_tail < kNormTailMax,
          "||f||^3 tail at K=" + std::to_string(kNormBlocks) + " is " + num(d.norm_tail, 4) +
              " (limit " + num(d.norm_limit, 8) + ")");
  bool increasing = true;
  double min_ratio = INFINITY, max_ratio = 0.0;
  for (std::size_t i = 0; i < d.square_rows.size(); ++i) {
    if (i > 0 && !(d.square_rows[i].partial > d.square_rows[i - 1].partial)) increasing = false;
    min_ratio = std::min(min_ratio, d.square_rows[i].ratio);
    max_ratio = std::max(max_ratio, d.square_rows[i].ratio);
  }
  o.check(increasing, "square-norm^3 partial sums strictly increasing");
  o.check(min_ratio > 0.0, "partial / sum 1/(2k+1) in [" + num(min_ratio, 4) + ", " +
                               num(max_ratio, 4) + "]");
  o.check(d.log_fit.slope > 0.0 && d.log_fit.max_residual < kAffineResidualMax,
          "affine in ln K over K=" + std::to_string(d.fit_lo) + ".." +
              std::to_string(d.square_blocks) + ": slope " + num(d.log_fit.slope, 4) +
              ", max rel residual " + num(d.log_fit.max_residual, 3));
  return o;
}

Outcome lai_treil() {
  Outcome o;
  const LaiTreilDivergence d = lai_treil_divergence(3.0, 0.4, kLaiTreilKMax);
  o.check(d.violations == 0, "m_k >= bound for every k <= 1e6 (min ratio " + num(d.min_ratio, 4) +
                                 ", violations " + std::to_string(d.violations) + ")");
  const double floor = kGrowthFraction * d.predicted_exponent;
  o.check(d.growth_fit.slope >= floor, "slope over [" + std::to_string(d.fit_lo) + ", " +
                                           std::to_string(d.fit_hi) + "] " +
                                           num(d.growth_fit.slope, 4) + " >= " + num(floor, 4));
  return o;
}

Outcome extension() {
  Outcome o;
  const double h = std::ldexp(1.0, -12);
  const ExtensionReport a =
      extension_experiment(power_pair(2.0, 0.5, PowerPairVariant::i), 4.0, h, kInvariantSamples);
  const ExtensionReport b = extension_experiment(lai_treil_family(3.0, 0.4), 4.0, h, kInvariantSamples);
  for (const ExtensionReport* r : {&a, &b}) {
    o.check(std::fabs(r->ratio - 1.0) < kSpanStabilityTol,
            r->family + " span 4 " + num(r->scan_span.value, 8) + ", span 8 " +
                num(r->scan_double_span.value, 8));
    o.check(r->invariant_failures == 0, "invariants " +
                                            std::to_string(r->invariant_samples -
                                                           r->invariant_failures) +
                                            "/" + std::to_string(r->invariant_samples));
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  constexpr int depth = 12;
  std::vector<FamilyInstance> fams = {
      lerner_family(3.0, 0.75),       alternating_family(3.0, 0.75),
      power_pair(2.0, 0.5, PowerPairVariant::i), power_pair(3.0, 0.5, PowerPairVariant::ii),
      lai_treil_family(3.0, 0.4),     direct_sum_family(3.0)};
  for (const FamilyInstance& fam : fams) {
    const PiecewiseLeafFunction full = full_square_function(fam.sigma_f, depth);
    const PiecewiseLeafFunction spine = spine_leaf_values(spine_profile(fam.sigma_f, depth), depth);
    int below = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < full.values.size(); ++i) {
      if (full.values[i] < spine.values[i] * (1.0 - kLeafRoundoff)) ++below;
      if (spine.values[i] != 0.0) {
        worst = std::max(worst, std::fabs(full.values[i] - spine.values[i]) / spine.values[i]);
      }
    }
    o.check(below == 0, fam.name + " dominates (" + std::to_string(below) + " leaves below)");
    if (fam.name == "alternating") {
      o.check(worst <= kSpineEqualityTol, "alternating full = spine, rel " + num(worst, 3));
    }
  }
  const Density s = power(1.0, -0.5);
  const double full = dyadic_ainfty(s, 14, AinftyMode::full_tree).value;
  const double radial = dyadic_ainfty(s, 14, AinftyMode::radial).value;
  o.check(std::fabs(full - radial) <= kAinftyAgreementTol * full,
          "A_inf depth 14 full " + num(full, 8) + " radial " + num(radial, 8));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "closed-form identities", 1.0, identities},
      {2, "lerner snorm exponent", 10.0, lerner_exponent},
      {3, "alternating snorm and ratio exponents", 10.0, alternating_exponent},
      {4, "A_infinity growth", 30.0, ainfty_growth},
      {5, "direct-sum divergence", 30.0, direct_sum},
      {6, "log-power divergence", 60.0, lai_treil},
      {7, "line extension stability", 60.0, extension},
      {8, "oracle equivalence", 30.0, oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out.check(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.check(secs < c.limit_s, "runtime " + num(secs, 3) + "s < " + num(c.limit_s) + "s");
    if (!out.pass) ++failed;
    std::printf("criterion %d: %s  %s  [%s]\n", c.id, out.pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed;
}
