#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dyadsq/density.hpp"
#include "dyadsq/wide_real.hpp"

namespace dyadsq {

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

/// Closed-form quantities a family is built to exhibit. Exponents e refer to
/// growth like (1 - beta)^{-e}; NaN where a family makes no such claim.
struct FamilyPrediction {
  double fnorm_p = kNotApplicable;  // ||f||^p in L^p(sigma)
  double ap_exponent = kNotApplicable;
  double ainfty_w_exponent = kNotApplicable;
  double ainfty_sigma_exponent = kNotApplicable;
  double snorm_exponent = kNotApplicable;
  double ratio_exponent = kNotApplicable;
  double partial_mass_exponent = kNotApplicable;  // growth in k, lai_treil
};

struct FamilyInstance {
  std::string name;
  double p = 0.0;
  double beta = kNotApplicable;
  double r = kNotApplicable;
  Density w;
  Density sigma;
  Density f;
  Density sigma_f;        // the product sigma * f
  Density f_power_sigma;  // |f|^p sigma
  FamilyPrediction predicted;
  /// Singular points inside the unit cell [0, 1].
  std::vector<double> singular_points;
  double x0 = 0.5;
  bool on_line = false;
};

FamilyInstance lerner_family(double p, double beta);
FamilyInstance alternating_family(double p, double beta);

enum class PowerPairVariant { i, ii };
FamilyInstance power_pair(double p, double beta, PowerPairVariant variant);

/// r in (1/p, 1/2); alpha = 2r - 1.
FamilyInstance lai_treil_family(double p, double r);
inline double lai_treil_alpha(double r) { return 2.0 * r - 1.0; }
/// Default r, the midpoint of (1/p, 1/2).
inline double lai_treil_default_r(double p) { return 0.5 * (1.0 / p + 0.5); }

/// Shell-glued sum of the alternating construction with beta_k = 1 - 1/k.
/// Odd shells carry w_k pulled back by x -> 2^k x - 1, even shells carry
/// w_{k-1} pulled back by x -> 2 - 2^k x, so the singularity at 2^-k (k odd)
/// is approached from both sides with the same exponent. `naive` uses the
/// unreflected map x -> 2^k x - 1 with w_k on every shell.
FamilyInstance direct_sum_family(double p, bool naive = false);

/// One odd block of the direct sum, described on the unit cell. The block's
/// contribution to any p-homogeneous shell quantity is `scale_p` times the
/// unit-cell value: scale_p = c_k^p 2^-k = k^{-p/2-1}.
struct DirectSumBlock {
  int k = 1;
  double beta_k = 0.0;
  WideReal c_k;
  double scale_p = 0.0;
  double fnorm_p = 0.0;  // k^{-p/2}
  Density unit_w;        // w_k = (1 - beta_k) x^{-beta_k}
  Density unit_sigma;    // x^{beta_k/(p-1)}
  Density unit_sigma_f;  // sign modulation on (0, 1)
};

DirectSumBlock direct_sum_block(double p, int k);

/// ||f||^p of the full direct sum: sum over odd k of k^{-p/2}.
double direct_sum_fnorm_p(double p);

struct HypothesisOptions {
  double constant = 16.0;
  int max_index = 40;
  int samples = 257;
};

struct HypothesisReport {
  double max_ratio_ii = 0.0;  // max over k,l of w(I_k) sigma(I_l)^{p-1} / (2^-k + 2^-l)^p
  int worst_k = 0;
  int worst_l = 0;
  double max_w_iii = 0.0;  // sampled sup of w on [x0, 1)
  double max_sigma_iii = 0.0;
  bool passed = false;
};

HypothesisReport check_extension_hypotheses(const FamilyInstance& inner,
                                            const HypothesisOptions& opts = {});

/// Periodic reflection of the inner pair to the line; throws HypothesisError
/// naming the worst (k, l) when the probed hypotheses fail.
FamilyInstance extend_to_line(const FamilyInstance& inner, const HypothesisOptions& opts = {});

/// Images in [-span, span] of the unit-cell singular points under the
/// reflection, together with the integers.
std::vector<double> line_anchors(const FamilyInstance& extended, double span);

}  // namespace dyadsq
