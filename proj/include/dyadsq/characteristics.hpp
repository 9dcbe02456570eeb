#pragma once

#include <string>
#include <vector>

#include "dyadsq/density.hpp"

namespace dyadsq {

enum class CharacteristicKind { joint_ap, muckenhoupt_ap, a_infty };

enum class ScopeKind { dyadic, spine, radial, scan };

/// Every estimate is a lower bound for the supremum it names, taken over the
/// finite family of intervals described by the scope fields.
struct CharacteristicEstimate {
  double value = 0.0;
  CharacteristicKind kind = CharacteristicKind::joint_ap;
  ScopeKind scope = ScopeKind::dyadic;
  int depth = 0;          // dyadic, spine and radial scopes
  double span = 0.0;      // scan: intervals inside [-span, span]
  double grid_step = 0.0; // scan
  double p = 0.0;         // 0 for A_infinity
  std::string argmax;     // the interval attaining the value
};

inline constexpr int kMaxFullTreeApDepth = 22;

/// max of <w>_Q <sigma>_Q^{p-1} over dyadic Q in [0,1) with level <= depth.
/// Every interval is enumerated up to level 22; deeper levels contribute their
/// spine intervals only (radial densities attain the supremum there).
CharacteristicEstimate dyadic_joint_ap(const Density& w, const Density& sigma, double p, int depth);

/// The same maximum restricted to the spine intervals I_k, k <= depth.
CharacteristicEstimate spine_joint_ap(const Density& w, const Density& sigma, double p, int depth);

/// Spine product <w>_{I_k} <sigma>_{I_k}^{p-1} for one k.
double spine_ap_product(const Density& w, const Density& sigma, double p, int k);

/// dyadic_joint_ap(w, dual_power(w, p), p, depth); rejects non-power w.
CharacteristicEstimate muckenhoupt_ap(const Density& w, double p, int depth);

enum class AinftyMode { full_tree, radial };

inline constexpr int kRadialLocalDepth = 8;

/// Dyadic A_infinity characteristic truncated at level `depth`.
///
/// full_tree: every root Q with level < depth, maximal function resolved to
/// level `depth`; depth <= 20.
/// radial: roots are the spine intervals I_m. On J_n the localized maximal
/// function is the larger of the best containing spine average and the
/// dyadic maximal function inside J_n, resolved min(depth - n, 8) levels
/// below J_n. Needs a radial density.
CharacteristicEstimate dyadic_ainfty(const Density& sigma, int depth, AinftyMode mode);

struct ScanOptions {
  double span = 4.0;
  double grid_step = 1.0 / 4096.0;
  /// Points where the densities are singular; each gets extra pairs
  /// (z - 2^-i, z + 2^-j) finer than the grid, evaluated by direct integration.
  std::vector<double> anchors;
  int anchor_levels = 28;
};

/// max of <w>_I <sigma>_I^{p-1} over grid-aligned I = [a, b) in [-span, span],
/// plus the anchor pairs. When both densities share a period the left
/// endpoints are reduced to one period.
CharacteristicEstimate interval_scan_joint_ap(const Density& w, const Density& sigma, double p,
                                              const ScanOptions& opts);

}  // namespace dyadsq
