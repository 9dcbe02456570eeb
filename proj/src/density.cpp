#include "dyadsq/density.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "dyadsq/errors.hpp"
#include "dyadsq/summation.hpp"

namespace dyadsq {

namespace detail {

class DensityNode {
 public:
  virtual ~DensityNode() = default;
  virtual DensityKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual double value(double x) const = 0;
  // Only called with a < b.
  virtual double integrate(double a, double b) const = 0;
  virtual WideReal shell_integral_scaled(int n, double t0, double t1) const;
  virtual WideReal spine_mean(int k) const;
  virtual std::optional<PowerParams> as_power() const { return std::nullopt; }
  virtual std::optional<double> period() const { return std::nullopt; }
  virtual bool radial() const { return true; }
};

}  // namespace detail

namespace {

using detail::DensityNode;
using NodePtr = std::shared_ptr<const DensityNode>;

constexpr double kLn2 = std::numbers::ln2;
constexpr int kMaxShellTerms = 1 << 21;
constexpr double kQuadTol = 1e-13;

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// n with x in [2^-n, 2^{1-n}), x > 0.
int shell_of(double x) {
  int e = 0;
  std::frexp(x, &e);
  return 1 - e;
}

// Shell holding the points just below x > 0.
int shell_below(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  return m == 0.5 ? 2 - e : 1 - e;
}

// +1 on shells J_n with n odd, -1 with n even.
int shell_sign(int n) { return (n & 1) ? 1 : -1; }

template <class F>
double quad(F&& f, double a, double b) {
  // Integrate over [0, 1] so the adaptive error test sees a fixed scale; the
  // library's error estimate is not rescaled for short intervals.
  const double width = b - a;
  double err = 0.0, l1 = 0.0;
  const double r = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double u) { return f(a + width * u); }, 0.0, 1.0, 15, kQuadTol, &err, &l1);
  if (!std::isfinite(r) || !(err <= 1e-9 * l1 + 1e-300)) {
    throw IntegrationError("quadrature on [" + num(a) + ", " + num(b) +
                           ") missed its error target (est. " + num(err) + ")");
  }
  return r * width;
}

// Sum of terms decaying toward the singular point; stops after eight
// consecutive terms each below 1e-17 of the running sum.
template <class Term>
WideReal sum_shell_series(int first, Term&& term, const std::string& what) {
  WideReal acc = 0.0;
  const WideReal eps = 1e-17;
  int small = 0;
  int zeros = 0;
  for (int n = first; n < first + kMaxShellTerms; ++n) {
    const WideReal t = term(n);
    acc += t;
    if (t.is_zero()) {
      if (acc.is_zero() && ++zeros >= 64) return acc;
    } else {
      zeros = 0;
    }
    if (!acc.is_zero() && abs(t) <= abs(acc) * eps) {
      if (++small >= 8) return acc;
    } else {
      small = 0;
    }
  }
  throw IntegrationError("shell series for " + what + " did not settle");
}

// Integral over [a, b) with 0 <= a, split at shell boundaries. A full shell
// series is used when a == 0.
template <class InShell, class FullShell>
double integrate_by_shells(double a, double b, InShell&& in_shell, FullShell&& full_scaled,
                           const std::string& what) {
  if (a >= b) return 0.0;
  CompensatedSum sum;
  if (a > 0.0) {
    const int n_first = shell_below(b);
    const int n_last = shell_of(a);
    for (int n = n_first; n <= n_last; ++n) {
      const double lo = std::max(a, std::ldexp(1.0, -n));
      const double hi = std::min(b, std::ldexp(1.0, 1 - n));
      if (lo < hi) sum += in_shell(n, lo, hi);
    }
    return sum.value();
  }
  const int nb = shell_below(b);
  int start = nb;
  if (b < std::ldexp(1.0, 1 - nb)) {
    sum += in_shell(nb, std::ldexp(1.0, -nb), b);
    start = nb + 1;
  }
  const WideReal tail = sum_shell_series(
      start, [&](int n) { return ldexp(full_scaled(n), -static_cast<std::int64_t>(n)); }, what);
  sum += tail.to_double();
  return sum.value();
}

}  // namespace

namespace detail {

WideReal DensityNode::shell_integral_scaled(int n, double t0, double t1) const {
  if (t0 >= t1) return 0.0;
  if (n > 1020 || n < -1020) {
    throw IntegrationError("no shell-coordinate form for " + describe() + " at shell " +
                           std::to_string(n));
  }
  const double x0 = std::ldexp(1.0 + t0, -n);
  const double x1 = std::ldexp(1.0 + t1, -n);
  return ldexp(WideReal(integrate(x0, x1)), n);
}

WideReal DensityNode::spine_mean(int k) const {
  return sum_shell_series(
      k + 1,
      [&](int n) {
        return ldexp(shell_integral_scaled(n, 0.0, 1.0), static_cast<std::int64_t>(k) - n);
      },
      describe());
}

}  // namespace detail

namespace {

class ConstantNode final : public DensityNode {
 public:
  explicit ConstantNode(double c) : c_(c) {}
  DensityKind kind() const override { return DensityKind::constant; }
  std::string describe() const override { return "constant(" + num(c_) + ")"; }
  double value(double) const override { return c_; }
  double integrate(double a, double b) const override { return c_ * (b - a); }
  WideReal shell_integral_scaled(int, double t0, double t1) const override {
    return c_ * (t1 - t0);
  }
  WideReal spine_mean(int) const override { return c_; }
  std::optional<PowerParams> as_power() const override { return PowerParams{c_, 0.0}; }

 private:
  double c_;
};

// c x^gamma (1 - log2 x)^-s; support (0, inf) when s == 0, (0, 1] otherwise.
class PowerLogNode final : public DensityNode {
 public:
  PowerLogNode(double c, double gamma, double s) : c_(c), g_(gamma), s_(s) {}

  DensityKind kind() const override {
    if (s_ == 0.0) return DensityKind::power;
    if (g_ == -1.0) return DensityKind::log_power_over_x;
    if (g_ == 0.0 && c_ == 1.0) return DensityKind::log_power_plain;
    return DensityKind::power_log;
  }

  std::string describe() const override {
    switch (kind()) {
      case DensityKind::power:
        return "power(c=" + num(c_) + ",gamma=" + num(g_) + ")";
      case DensityKind::log_power_over_x:
        return "log_power_over_x(c=" + num(c_) + ",s=" + num(s_) + ")";
      case DensityKind::log_power_plain:
        return "log_power_plain(s=" + num(s_) + ")";
      default:
        return "power_log(c=" + num(c_) + ",gamma=" + num(g_) + ",s=" + num(s_) + ")";
    }
  }

  double value(double x) const override {
    if (x == 0.0) return 1.0;
    if (x < 0.0) return 0.0;
    if (s_ == 0.0) return c_ * std::pow(x, g_);
    if (x > 1.0) return 0.0;
    return c_ * std::pow(x, g_) * std::pow(1.0 - std::log2(x), -s_);
  }

  double integrate(double a, double b) const override {
    a = std::max(a, 0.0);
    if (s_ != 0.0) b = std::min(b, 1.0);
    if (a >= b) return 0.0;
    if (s_ == 0.0) return integrate_power(a, b);
    if (g_ == -1.0) return integrate_log_over_x(a, b);
    if (a == 0.0 && g_ < -1.0) throw NonIntegrableError(describe() + " is not integrable at 0");
    return integrate_by_shells(
        a, b, [&](int, double lo, double hi) { return quad([&](double x) { return value(x); }, lo, hi); },
        [&](int n) { return shell_integral_scaled(n, 0.0, 1.0); }, describe());
  }

  WideReal shell_integral_scaled(int n, double t0, double t1) const override {
    if (t0 >= t1) return 0.0;
    if (s_ != 0.0 && n < 1) return 0.0;
    const double dt = std::log1p((t1 - t0) / (1.0 + t0));  // log((1+t1)/(1+t0))
    const WideReal factor = WideReal::exp2(-static_cast<double>(n) * g_) * WideReal(c_);
    double inner;
    if (s_ == 0.0) {
      if (g_ == -1.0) {
        inner = dt;
      } else {
        const double e = g_ + 1.0;
        inner = std::pow(1.0 + t0, e) * std::expm1(e * dt) / e;
      }
    } else if (g_ == -1.0) {
      const double v1 = 1.0 + n - std::log2(1.0 + t1);
      const double dv = dt / kLn2;
      const double alpha = 1.0 - s_;
      if (alpha == 0.0) {
        inner = kLn2 * std::log1p(dv / v1);
      } else {
        inner = kLn2 * std::pow(v1, alpha) * std::expm1(alpha * std::log1p(dv / v1)) / alpha;
      }
    } else {
      inner = quad(
          [&](double t) {
            return std::pow(1.0 + t, g_) * std::pow(1.0 + n - std::log2(1.0 + t), -s_);
          },
          t0, t1);
    }
    return factor * WideReal(inner);
  }

  WideReal spine_mean(int k) const override {
    if (s_ == 0.0) {
      if (g_ <= -1.0) throw NonIntegrableError(describe() + " is not integrable at 0");
      return WideReal::exp2(-static_cast<double>(k) * g_) * WideReal(c_ / (g_ + 1.0));
    }
    if (g_ == -1.0) {
      const double alpha = 1.0 - s_;
      if (alpha >= 0.0) throw NonIntegrableError(describe() + " is not integrable at 0");
      return ldexp(WideReal(-c_ * kLn2 / alpha * std::pow(1.0 + k, alpha)), k);
    }
    if (g_ < -1.0) throw NonIntegrableError(describe() + " is not integrable at 0");
    return DensityNode::spine_mean(k);
  }

  std::optional<PowerParams> as_power() const override {
    if (s_ != 0.0) return std::nullopt;
    return PowerParams{c_, g_};
  }

 private:
  double integrate_power(double a, double b) const {
    const double e = g_ + 1.0;
    if (a == 0.0) {
      if (e <= 0.0) throw NonIntegrableError(describe() + " is not integrable at 0");
      return c_ * std::pow(b, e) / e;
    }
    const double dl = std::log1p((b - a) / a);
    if (e == 0.0) return c_ * dl;
    return c_ * std::pow(a, e) * std::expm1(e * dl) / e;
  }

  double integrate_log_over_x(double a, double b) const {
    const double alpha = 1.0 - s_;
    const double ub = 1.0 - std::log2(b);
    if (a == 0.0) {
      if (alpha >= 0.0) throw NonIntegrableError(describe() + " is not integrable at 0");
      return -c_ * kLn2 / alpha * std::pow(ub, alpha);
    }
    const double du = std::log1p((b - a) / a) / kLn2;  // u(a) - u(b)
    if (alpha == 0.0) return c_ * kLn2 * std::log1p(du / ub);
    return c_ * kLn2 * std::pow(ub, alpha) * std::expm1(alpha * std::log1p(du / ub)) / alpha;
  }

  double c_, g_, s_;
};

class SumNode final : public DensityNode {
 public:
  explicit SumNode(std::vector<Density> terms) : terms_(std::move(terms)) {}
  DensityKind kind() const override { return DensityKind::sum; }
  std::string describe() const override {
    std::string s = "sum(";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += ",";
      s += terms_[i].describe();
    }
    return s + ")";
  }
  double value(double x) const override {
    double v = 0.0;
    for (const auto& t : terms_) v += t(x);
    return v;
  }
  double integrate(double a, double b) const override {
    CompensatedSum s;
    for (const auto& t : terms_) s += t.integrate(a, b);
    return s.value();
  }
  WideReal shell_integral_scaled(int n, double t0, double t1) const override {
    WideReal s = 0.0;
    for (const auto& t : terms_) s += t.shell_integral_scaled(n, t0, t1);
    return s;
  }
  WideReal spine_mean(int k) const override {
    WideReal s = 0.0;
    for (const auto& t : terms_) s += t.spine_mean(k);
    return s;
  }
  std::optional<double> period() const override {
    std::optional<double> p;
    for (const auto& t : terms_) {
      const auto q = t.period();
      if (!q || (p && *p != *q)) return std::nullopt;
      p = q;
    }
    return p;
  }
  bool radial() const override {
    return std::all_of(terms_.begin(), terms_.end(), [](const Density& t) { return t.radial(); });
  }

 private:
  std::vector<Density> terms_;
};

class ScaleNode final : public DensityNode {
 public:
  ScaleNode(Density g, WideReal f) : g_(std::move(g)), f_(f), fd_(f.to_double()) {}
  DensityKind kind() const override { return DensityKind::scale; }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(10);
    os << "scale(" << f_.mantissa() << "*2^" << f_.exponent() << "," << g_.describe() << ")";
    return os.str();
  }
  double value(double x) const override { return fd_ * g_(x); }
  double integrate(double a, double b) const override {
    return (f_ * WideReal(g_.integrate(a, b))).to_double();
  }
  WideReal shell_integral_scaled(int n, double t0, double t1) const override {
    return f_ * g_.shell_integral_scaled(n, t0, t1);
  }
  WideReal spine_mean(int k) const override { return f_ * g_.spine_mean(k); }
  std::optional<PowerParams> as_power() const override {
    auto p = g_.as_power();
    if (!p || !std::isfinite(fd_)) return std::nullopt;
    p->coefficient *= fd_;
    return p;
  }
  std::optional<double> period() const override { return g_.period(); }
  bool radial() const override { return g_.radial(); }

 private:
  Density g_;
  WideReal f_;
  double fd_;
};

class SignModulateNode final : public DensityNode {
 public:
  explicit SignModulateNode(Density g) : g_(std::move(g)) {}
  DensityKind kind() const override { return DensityKind::sign_modulate; }
  std::string describe() const override { return "sign_modulate(" + g_.describe() + ")"; }
  double value(double x) const override {
    if (x <= 0.0) return x == 0.0 ? g_(0.0) : 0.0;
    int e = 0;
    const double m = std::frexp(x, &e);
    const int fl = (m == 0.5) ? 1 - e : -e;  // floor(-log2 x)
    return ((fl & 1) ? -1.0 : 1.0) * g_(x);
  }
  double integrate(double a, double b) const override {
    return integrate_by_shells(
        std::max(a, 0.0), b,
        [&](int n, double lo, double hi) { return shell_sign(n) * g_.integrate(lo, hi); },
        [&](int n) { return shell_integral_scaled(n, 0.0, 1.0); }, describe());
  }
  WideReal shell_integral_scaled(int n, double t0, double t1) const override {
    return WideReal(static_cast<double>(shell_sign(n))) * g_.shell_integral_scaled(n, t0, t1);
  }
  bool radial() const override { return g_.radial(); }

 private:
  Density g_;
};

class RestrictNode final : public DensityNode {
 public:
  RestrictNode(Density g, double lo, double hi) : g_(std::move(g)), lo_(lo), hi_(hi) {}
  DensityKind kind() const override { return DensityKind::restrict_to; }
  std::string describe() const override {
    return "restrict_to(" + g_.describe() + ",[" + num(lo_) + "," + num(hi_) + "))";
  }
  double value(double x) const override { return (x >= lo_ && x < hi_) ? g_(x) : 0.0; }
  double integrate(double a, double b) const override {
    a = std::max(a, lo_);
    b = std::min(b, hi_);
    return a < b ? g_.integrate(a, b) : 0.0;
  }
  WideReal shell_integral_scaled(int n, double t0, double t1) const override {
    if (lo_ <= 0.0 && hi_ >= std::ldexp(1.0, 1 - std::min(n, 1))) {
      return g_.shell_integral_scaled(n, t0, t1);
    }
    return DensityNode::shell_integral_scaled(n, t0, t1);
  }
  WideReal spine_mean(int k) const override {
    if (lo_ <= 0.0 && hi_ >= std::ldexp(1.0, -k)) return g_.spine_mean(k);
    return DensityNode::spine_mean(k);
  }
  bool radial() const override { return lo_ <= 0.0 && g_.radial(); }

 private:
  Density g_;
  double lo_, hi_;
};

// x -> g((x - offset) / scale), or g((offset - x) / scale) when reflected.
class AffinePullbackNode final : public DensityNode {
 public:
  AffinePullbackNode(Density g, WideReal offset, WideReal scale, bool reflected)
      : g_(std::move(g)),
        off_(offset),
        sc_(scale),
        reflected_(reflected),
        off_d_(offset.to_double()),
        sc_d_(scale.to_double()) {
    lo_d_ = reflected ? (off_ - sc_).to_double() : off_d_;
    hi_d_ = reflected ? off_d_ : (off_ + sc_).to_double();
  }
  DensityKind kind() const override { return DensityKind::affine_pullback; }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(10);
    os << "affine_pullback(" << g_.describe() << ",offset=" << off_.mantissa() << "*2^"
       << off_.exponent() << ",scale=" << sc_.mantissa() << "*2^" << sc_.exponent()
       << (reflected_ ? ",reflected)" : ")");
    return os.str();
  }
  double value(double x) const override {
    if (!(x >= lo_d_ && x < hi_d_)) return 0.0;
    return g_(to_u(x));
  }
  double integrate(double a, double b) const override {
    a = std::max(a, lo_d_);
    b = std::min(b, hi_d_);
    if (a >= b) return 0.0;
    double u0 = to_u(a), u1 = to_u(b);
    if (u0 > u1) std::swap(u0, u1);
    u0 = std::clamp(u0, 0.0, 1.0);
    u1 = std::clamp(u1, 0.0, 1.0);
    return u0 < u1 ? sc_d_ * g_.integrate(u0, u1) : 0.0;
  }
  WideReal shell_integral_scaled(int n, double t0, double t1) const override {
    if (t0 >= t1) return 0.0;
    const WideReal x0 = ldexp(WideReal(1.0 + t0), -n);
    const WideReal x1 = ldexp(WideReal(1.0 + t1), -n);
    double u0 = wide_u(x0).to_double(), u1 = wide_u(x1).to_double();
    if (u0 > u1) std::swap(u0, u1);
    u0 = std::clamp(u0, 0.0, 1.0);
    u1 = std::clamp(u1, 0.0, 1.0);
    if (u0 >= u1) return 0.0;
    return ldexp(sc_, n) * WideReal(g_.integrate(u0, u1));
  }
  bool radial() const override { return false; }

 private:
  double to_u(double x) const { return reflected_ ? (off_d_ - x) / sc_d_ : (x - off_d_) / sc_d_; }
  WideReal wide_u(const WideReal& x) const { return (reflected_ ? off_ - x : x - off_) / sc_; }

  Density g_;
  WideReal off_, sc_;
  bool reflected_;
  double off_d_, sc_d_, lo_d_ = 0.0, hi_d_ = 0.0;
};

class PiecewiseDyadicNode final : public DensityNode {
 public:
  PiecewiseDyadicNode(std::function<Density(int)> piece, std::string label)
      : piece_(std::move(piece)), label_(std::move(label)) {}
  DensityKind kind() const override { return DensityKind::piecewise_dyadic; }
  std::string describe() const override { return "piecewise_dyadic(" + label_ + ")"; }
  double value(double x) const override {
    if (x == 0.0) return 1.0;
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return piece_(shell_of(x))(x);
  }
  double integrate(double a, double b) const override {
    return integrate_by_shells(
        std::max(a, 0.0), std::min(b, 1.0),
        [&](int n, double lo, double hi) { return piece_(n).integrate(lo, hi); },
        [&](int n) { return piece_(n).shell_integral_scaled(n, 0.0, 1.0); }, describe());
  }
  WideReal shell_integral_scaled(int n, double t0, double t1) const override {
    if (n < 1) return 0.0;
    return piece_(n).shell_integral_scaled(n, t0, t1);
  }

 private:
  std::function<Density(int)> piece_;
  std::string label_;
};

class PeriodicReflectNode final : public DensityNode {
 public:
  explicit PeriodicReflectNode(Density g) : g_(std::move(g)), unit_mass_(g_.integrate(0.0, 1.0)) {}
  DensityKind kind() const override { return DensityKind::periodic_reflect; }
  std::string describe() const override { return "periodic_reflect(" + g_.describe() + ")"; }
  double value(double x) const override {
    const double fl = std::floor(x);
    if (fl == x) return 1.0;
    const auto k = static_cast<std::int64_t>(fl) + 1;
    return (k & 1) ? g_(x - static_cast<double>(k - 1)) : g_(static_cast<double>(k) - x);
  }
  double integrate(double a, double b) const override {
    CompensatedSum s;
    const auto k_first = static_cast<std::int64_t>(std::floor(a)) + 1;
    const auto k_last = static_cast<std::int64_t>(std::ceil(b));
    for (std::int64_t k = k_first; k <= k_last; ++k) {
      const double cl = static_cast<double>(k - 1), cr = static_cast<double>(k);
      const double lo = std::max(a, cl), hi = std::min(b, cr);
      if (lo >= hi) continue;
      if (lo == cl && hi == cr) {
        s += unit_mass_;
      } else if (k & 1) {
        s += g_.integrate(lo - cl, hi - cl);
      } else {
        s += g_.integrate(cr - hi, cr - lo);
      }
    }
    return s.value();
  }
  WideReal shell_integral_scaled(int n, double t0, double t1) const override {
    if (n >= 1) return g_.shell_integral_scaled(n, t0, t1);
    return DensityNode::shell_integral_scaled(n, t0, t1);
  }
  WideReal spine_mean(int k) const override { return g_.spine_mean(k); }
  std::optional<double> period() const override { return 2.0; }
  bool radial() const override { return g_.radial(); }

 private:
  Density g_;
  double unit_mass_;
};

Density make(NodePtr p) { return Density(std::move(p)); }

}  // namespace

Density::Density() : Density(std::make_shared<ConstantNode>(0.0)) {}

Density::Density(std::shared_ptr<const detail::DensityNode> node) : node_(std::move(node)) {
  if (!node_) throw DomainError("empty density");
}

double Density::operator()(double x) const { return node_->value(x); }

double Density::integrate(double a, double b) const {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("NaN integration bound");
  if (a > b) throw DomainError("integration bounds out of order: " + num(a) + " > " + num(b));
  if (a == b) return 0.0;
  return node_->integrate(a, b);
}

double Density::average(const DyadicInterval& q) const {
  return integrate(q.left(), q.right()) / q.measure();
}

double Density::shell_mass(int n) const {
  return ldexp(shell_integral_scaled(n, 0.0, 1.0), -static_cast<std::int64_t>(n)).to_double();
}

WideReal Density::shell_integral_scaled(int n, double t0, double t1) const {
  if (t0 < 0.0 || t1 > 1.0 || t0 > t1) {
    throw DomainError("shell coordinates must satisfy 0 <= t0 <= t1 <= 1");
  }
  return node_->shell_integral_scaled(n, t0, t1);
}

WideReal Density::spine_mean(int k) const {
  if (k < 0) throw DomainError("spine index must be >= 0");
  return node_->spine_mean(k);
}

std::optional<PowerParams> Density::as_power() const { return node_->as_power(); }
std::optional<double> Density::period() const { return node_->period(); }
bool Density::radial() const { return node_->radial(); }
DensityKind Density::kind() const { return node_->kind(); }
std::string Density::describe() const { return node_->describe(); }

Density constant(double c) {
  if (!std::isfinite(c)) throw DomainError("constant must be finite");
  return make(std::make_shared<ConstantNode>(c));
}

Density power_log(double c, double gamma, double s) {
  if (!std::isfinite(c) || !std::isfinite(gamma) || !std::isfinite(s)) {
    throw DomainError("power_log parameters must be finite");
  }
  return make(std::make_shared<PowerLogNode>(c, gamma, s));
}

Density power(double c, double gamma) { return power_log(c, gamma, 0.0); }
Density log_power_over_x(double c, double s) { return power_log(c, -1.0, s); }
Density log_power_plain(double s) { return power_log(1.0, 0.0, s); }

Density operator+(const Density& a, const Density& b) {
  return make(std::make_shared<SumNode>(std::vector<Density>{a, b}));
}

Density scale(const Density& g, const WideReal& factor) {
  if (!factor.is_finite()) throw DomainError("scale factor must be finite");
  return make(std::make_shared<ScaleNode>(g, factor));
}

Density scale(const Density& g, double factor) { return scale(g, WideReal(factor)); }
Density operator*(double factor, const Density& g) { return scale(g, factor); }

Density sign_modulate(const Density& g) { return make(std::make_shared<SignModulateNode>(g)); }

Density restrict_to(const Density& g, double lo, double hi) {
  if (!(lo < hi)) throw DomainError("restrict_to needs lo < hi");
  return make(std::make_shared<RestrictNode>(g, lo, hi));
}

Density affine_pullback(const Density& g, double offset, double scale, bool reflected) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(offset)) {
    throw DomainError("affine_pullback needs a finite offset and scale > 0");
  }
  return make(std::make_shared<AffinePullbackNode>(g, offset, scale, reflected));
}

Density shell_pullback(const Density& g, int n, bool reflected) {
  if (n < 1) throw DomainError("shell_pullback needs n >= 1");
  const WideReal width = ldexp(WideReal(1.0), -n);
  const WideReal offset = reflected ? ldexp(WideReal(1.0), 1 - n) : width;
  return make(std::make_shared<AffinePullbackNode>(g, offset, width, reflected));
}

Density piecewise_dyadic(std::function<Density(int)> piece, std::string label) {
  if (!piece) throw DomainError("piecewise_dyadic needs a generator");
  return make(std::make_shared<PiecewiseDyadicNode>(std::move(piece), std::move(label)));
}

Density periodic_reflect(const Density& g) {
  return make(std::make_shared<PeriodicReflectNode>(g));
}

Density dual_power(const Density& g, double p) {
  if (!(p > 1.0)) throw DomainError("dual_power needs p > 1");
  const auto pw = g.as_power();
  if (!pw) throw DomainError("dual_power only accepts pure powers, got " + g.describe());
  if (!(pw->coefficient > 0.0)) throw DomainError("dual_power needs a positive coefficient");
  const double q = -1.0 / (p - 1.0);
  const double c = std::pow(pw->coefficient, q);
  if (pw->exponent == 0.0) return constant(c);
  return power(c, pw->exponent * q);
}

}  // namespace dyadsq
