#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "dyadsq/dyadic.hpp"
#include "dyadsq/wide_real.hpp"

namespace dyadsq {

enum class DensityKind {
  constant,
  power,
  log_power_over_x,
  log_power_plain,
  power_log,
  sum,
  scale,
  sign_modulate,
  restrict_to,
  affine_pullback,
  piecewise_dyadic,
  periodic_reflect,
};

struct PowerParams {
  double coefficient;
  double exponent;
};

namespace detail {
class DensityNode;
}

/// Immutable, shareable expression tree for a weight or test function.
///
/// Integrals come from antiderivatives where a leaf has one and from
/// shell-wise Gauss-Kronrod quadrature otherwise; nothing is ever integrated
/// across the singular point 0 or across a dyadic shell boundary.
///
/// Shell coordinates: for n >= 1 the shell J_n = [2^-n, 2^{1-n}) is
/// parametrised by x = 2^-n (1 + t), t in [0, 1). shell_integral_scaled works
/// in these coordinates and returns 2^n times the integral, so it stays finite
/// for n far beyond the double exponent range.
class Density {
 public:
  /// The zero density.
  Density();
  explicit Density(std::shared_ptr<const detail::DensityNode> node);

  /// Pointwise value. The singular point of a leaf evaluates to 1, as do the
  /// integers for a periodic reflection; such points carry no mass.
  double operator()(double x) const;

  /// Integral over [a, b). Throws NonIntegrableError for divergent integrals
  /// and IntegrationError when quadrature misses its error target.
  double integrate(double a, double b) const;

  double average(const DyadicInterval& q) const;

  /// Integral over J_n, as a double (underflows to 0 for very deep shells).
  double shell_mass(int n) const;

  /// 2^n * integral over {2^-n (1 + t) : t in [t0, t1)}.
  WideReal shell_integral_scaled(int n, double t0, double t1) const;

  /// Average over J_n.
  WideReal shell_mean(int n) const { return shell_integral_scaled(n, 0.0, 1.0); }

  /// Average over the spine interval I_k = [0, 2^-k).
  WideReal spine_mean(int k) const;

  /// Set for pure powers c x^gamma and constants (gamma = 0).
  std::optional<PowerParams> as_power() const;

  std::optional<double> period() const;

  /// Shell-structured around 0, so spine and radial computations apply.
  bool radial() const;

  DensityKind kind() const;
  std::string describe() const;

  const detail::DensityNode& node() const { return *node_; }

 private:
  std::shared_ptr<const detail::DensityNode> node_;
};

Density constant(double c);

/// c x^gamma on (0, inf).
Density power(double c, double gamma);

/// c / (x (1 - log2 x)^s) on (0, 1].
Density log_power_over_x(double c, double s);

/// (1 - log2 x)^-s on (0, 1].
Density log_power_plain(double s);

/// c x^gamma (1 - log2 x)^-s on (0, 1]; the three leaves above are special cases.
Density power_log(double c, double gamma, double s);

Density operator+(const Density& a, const Density& b);
Density scale(const Density& g, const WideReal& factor);
Density scale(const Density& g, double factor);
Density operator*(double factor, const Density& g);

/// x -> (-1)^floor(-log2 x) g(x).
Density sign_modulate(const Density& g);

/// g on [lo, hi), zero elsewhere.
Density restrict_to(const Density& g, double lo, double hi);

/// x -> g((x - offset) / scale) on [offset, offset + scale), or, reflected,
/// x -> g((offset - x) / scale) on [offset - scale, offset). Masses scale by
/// `scale`. Throws DomainError for scale <= 0.
Density affine_pullback(const Density& g, double offset, double scale, bool reflected);

/// The same map onto J_n, with offset and scale held exactly for any n >= 1:
/// t -> 2^-n (1 + t), or reflected t -> 2^-n (2 - t).
Density shell_pullback(const Density& g, int n, bool reflected);

/// piece(k) on J_k for k >= 1. Pieces are generated on demand and should be
/// supported on J_k.
Density piecewise_dyadic(std::function<Density(int)> piece, std::string label);

/// Extension of a density on [0, 1) to the line: g(x - k + 1) on (k - 1, k)
/// for odd k, g(k - x) for even k; period 2, symmetric about every integer.
Density periodic_reflect(const Density& g);

/// (c x^gamma)^{-1/(p-1)}; rejects anything that is not a pure power.
Density dual_power(const Density& g, double p);

}  // namespace dyadsq
