#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dyadsq/characteristics.hpp"
#include "dyadsq/families.hpp"

namespace dyadsq {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // max |y - fit| / |fit|
  int points = 0;
};

/// Least squares on (ln x, ln y). Needs >= 3 points, positive values and
/// distinct x.
FitResult exponent_fit(const std::vector<std::pair<double, double>>& points);

/// Least squares y = intercept + slope * x; residual relative to |y|.
FitResult affine_fit(const std::vector<std::pair<double, double>>& points);

/// beta_j = 1 - 2^-j for j = first..last.
std::vector<double> dyadic_beta_grid(int first, int last);

/// Shells needed to certify the spine series at this beta.
int default_n_max(double beta);

enum class ScalingFamily { lerner, alternating };

struct ScalingOptions {
  int n_max = 0;           // 0: default_n_max(beta) per row
  int fit_skip = 2;        // smallest betas left out of the fits
  bool with_ainfty = true; // radial A_infinity columns (the costly part)
  double ainfty_depth_factor = 16.0;
};

struct ScalingRow {
  double beta = 0.0;
  double fnorm = 0.0;  // ||f||_{L^p(sigma)}
  double snorm = 0.0;  // spine lower bound of ||S(sigma f)||_{L^p(w)}
  double ap_joint = 0.0;
  double ainfty_w = kNotApplicable;
  double ainfty_sigma = kNotApplicable;
  double ratio = 0.0;  // snorm / (fnorm * ap_joint^{1/p})
  int shells = 0;
};

struct ScalingReport {
  std::string family;
  double p = 0.0;
  std::vector<ScalingRow> rows;
  int fit_skip = 2;
  FitResult snorm_fit;
  FitResult ratio_fit;
  double predicted_snorm_exponent = kNotApplicable;
  double predicted_ratio_exponent = kNotApplicable;
};

ScalingReport scaling_experiment(ScalingFamily family, double p, const std::vector<double>& betas,
                                 const ScalingOptions& opts = {});

struct AinftyRow {
  double beta = 0.0;
  int depth = 0;
  double ainfty_w = 0.0;      // x^-beta
  double ainfty_sigma = 0.0;  // x^{beta/(p-1)}
};

struct AinftyReport {
  double p = 0.0;
  double depth_factor = 16.0;
  std::vector<AinftyRow> rows;
  int fit_skip = 2;
  FitResult w_fit;
  double sigma_spread = 0.0;  // max / min of the sigma column
};

/// Radial A_infinity at depth ceil(depth_factor / (1 - beta)); throws
/// DomainError when depth_factor < 16.
AinftyReport ainfty_growth_experiment(double p, const std::vector<double>& betas,
                                      double depth_factor = 16.0, int fit_skip = 2);

struct DivergenceRow {
  int k = 0;
  double partial = 0.0;
  double bound = kNotApplicable;
  double ratio = kNotApplicable;  // partial / bound
};

struct LaiTreilDivergence {
  double p = 0.0;
  double r = 0.0;
  int k_max = 0;
  double c1 = 0.0;
  double c2 = 0.0;  // includes the ln 2 of the antiderivative
  std::vector<DivergenceRow> rows;  // log-spaced sample of k
  int violations = 0;               // k with m_k below the bound
  double min_ratio = 0.0;           // over every k >= 1
  bool nondecreasing = true;        // m_k over k >= fit_lo
  int first_decrease = -1;
  int fit_lo = 0;
  int fit_hi = 0;
  FitResult growth_fit;             // log m_k vs log k on [fit_lo, fit_hi]
  double predicted_exponent = 0.0;  // (1 - 2r)(p/2 - 1)
  double min_difference_ratio = 0.0;  // min_k |d_k| 4 (k+2)^r, inner side
  double min_shell_difference_ratio = 0.0;
};

LaiTreilDivergence lai_treil_divergence(double p, double r, int k_max, int sample_rows = 200);

struct DirectSumDivergence {
  double p = 0.0;
  int norm_blocks = 0;
  int square_blocks = 0;
  std::vector<DivergenceRow> norm_rows;    // K, partial sum of block ||f||^p
  double norm_limit = 0.0;
  double norm_tail = 0.0;                  // limit - partial at K = norm_blocks
  std::vector<DivergenceRow> square_rows;  // K, partial sum of block square norms^p,
                                           // bound column sum_{j<K} 1/(2j+1)
  int fit_lo = 0;
  FitResult log_fit;  // square partial sums affine in ln K over [fit_lo, square_blocks]
};

DirectSumDivergence direct_sum_divergence(double p, int norm_blocks = 10000, int square_blocks = 400);

/// Square norm^p of odd block k: scale_p times the unit-cell spine series.
double direct_sum_block_square_norm_p(double p, int k);

struct ExtensionReport {
  std::string family;
  double p = 0.0;
  double span = 0.0;
  double grid_step = 0.0;
  CharacteristicEstimate scan_span;
  CharacteristicEstimate scan_double_span;
  double ratio = 0.0;  // double-span / span
  CharacteristicEstimate unit_dyadic;
  int invariant_samples = 0;
  int invariant_failures = 0;
};

ExtensionReport extension_experiment(const FamilyInstance& inner, double span, double grid_step,
                                     int invariant_samples = 1000);

}  // namespace dyadsq
