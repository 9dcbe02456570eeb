#include "dyadsq/families.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dyadsq/errors.hpp"

namespace dyadsq {

namespace {

void require_p(double p, double lower, const char* who) {
  if (!(p > lower) || !std::isfinite(p)) {
    throw DomainError(std::string(who) + " needs p > " + std::to_string(lower));
  }
}

void require_beta(double beta, const char* who) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError(std::string(who) + " needs beta in (0, 1)");
}

const Density& unit_indicator() {
  static const Density d = restrict_to(constant(1.0), 0.0, 1.0);
  return d;
}

}  // namespace

FamilyInstance lerner_family(double p, double beta) {
  require_p(p, 1.0, "lerner");
  require_beta(beta, "lerner");
  FamilyInstance f;
  f.name = "lerner";
  f.p = p;
  f.beta = beta;
  f.sigma = power(1.0, -beta);
  f.w = power(1.0, beta * (p - 1.0));
  f.f = unit_indicator();
  f.sigma_f = restrict_to(f.sigma, 0.0, 1.0);
  f.f_power_sigma = f.sigma_f;
  f.predicted.fnorm_p = 1.0 / (1.0 - beta);
  f.predicted.ap_exponent = p - 1.0;
  f.predicted.ainfty_w_exponent = 0.0;
  f.predicted.ainfty_sigma_exponent = 1.0;
  f.predicted.snorm_exponent = 1.0 + 1.0 / p;
  f.predicted.ratio_exponent = 1.0 / p;
  f.singular_points = {0.0};
  return f;
}

FamilyInstance alternating_family(double p, double beta) {
  require_p(p, 1.0, "alternating");
  require_beta(beta, "alternating");
  const double g = beta / (p - 1.0);
  FamilyInstance f;
  f.name = "alternating";
  f.p = p;
  f.beta = beta;
  f.sigma = power(1.0, g);
  f.w = power(1.0, -beta);
  f.f = restrict_to(sign_modulate(power(1.0, -g)), 0.0, 1.0);
  f.sigma_f = restrict_to(sign_modulate(constant(1.0)), 0.0, 1.0);
  f.f_power_sigma = restrict_to(power(1.0, -beta), 0.0, 1.0);
  f.predicted.fnorm_p = 1.0 / (1.0 - beta);
  f.predicted.ap_exponent = 1.0;
  f.predicted.ainfty_w_exponent = 1.0;
  f.predicted.ainfty_sigma_exponent = 0.0;
  f.predicted.snorm_exponent = 0.5 + 1.0 / p;
  f.predicted.ratio_exponent = 0.5 - 1.0 / p;
  f.singular_points = {0.0};
  return f;
}

FamilyInstance power_pair(double p, double beta, PowerPairVariant variant) {
  require_p(p, 1.0, "power_pair");
  require_beta(beta, "power_pair");
  FamilyInstance f;
  f.p = p;
  f.beta = beta;
  if (variant == PowerPairVariant::i) {
    f.name = "power_pair_i";
    f.w = power(1.0, -beta);
    f.sigma = power(1.0, beta / (p - 1.0));
    f.predicted.fnorm_p = 1.0 / (1.0 + beta / (p - 1.0));
    f.predicted.ap_exponent = 1.0;
    f.predicted.ainfty_w_exponent = 1.0;
    f.predicted.ainfty_sigma_exponent = 0.0;
  } else {
    f.name = "power_pair_ii";
    f.sigma = power(1.0, -beta);
    f.w = power(1.0, beta * (p - 1.0));
    f.predicted.fnorm_p = 1.0 / (1.0 - beta);
    f.predicted.ap_exponent = p - 1.0;
    f.predicted.ainfty_w_exponent = 0.0;
    f.predicted.ainfty_sigma_exponent = 1.0;
  }
  f.f = unit_indicator();
  f.sigma_f = restrict_to(f.sigma, 0.0, 1.0);
  f.f_power_sigma = f.sigma_f;
  f.singular_points = {0.0};
  return f;
}

FamilyInstance lai_treil_family(double p, double r) {
  require_p(p, 2.0, "lai_treil");
  if (!(r > 1.0 / p && r < 0.5)) throw DomainError("lai_treil needs r in (1/p, 1/2)");
  const double alpha = lai_treil_alpha(r);
  FamilyInstance f;
  f.name = "lai_treil";
  f.p = p;
  f.r = r;
  f.sigma = power(1.0, 1.0 / (p - 1.0));
  f.w = log_power_over_x(1.0, 1.0 - alpha);
  f.f = sign_modulate(power_log(1.0, -1.0 / (p - 1.0), r));
  f.sigma_f = sign_modulate(log_power_plain(r));
  f.f_power_sigma = log_power_over_x(1.0, p * r);
  f.predicted.fnorm_p = std::numbers::ln2 / (p * r - 1.0);
  f.predicted.partial_mass_exponent = (1.0 - 2.0 * r) * (p / 2.0 - 1.0);
  f.singular_points = {0.0};
  f.x0 = 0.5;
  return f;
}

DirectSumBlock direct_sum_block(double p, int k) {
  require_p(p, 2.0, "direct_sum");
  if (k < 1) throw DomainError("direct-sum blocks start at k = 1");
  DirectSumBlock b;
  b.k = k;
  b.beta_k = 1.0 - 1.0 / k;
  b.c_k = WideReal::exp2(k / p) * WideReal(std::pow(static_cast<double>(k), -0.5 - 1.0 / p));
  b.scale_p = std::pow(static_cast<double>(k), -p / 2.0 - 1.0);
  b.fnorm_p = std::pow(static_cast<double>(k), -p / 2.0);
  b.unit_w = power(1.0 - b.beta_k, -b.beta_k);
  b.unit_sigma = power(1.0, b.beta_k / (p - 1.0));
  b.unit_sigma_f = restrict_to(sign_modulate(constant(1.0)), 0.0, 1.0);
  return b;
}

double direct_sum_fnorm_p(double p) {
  require_p(p, 2.0, "direct_sum");
  return (1.0 - std::pow(2.0, -p / 2.0)) * boost::math::zeta(p / 2.0);
}

FamilyInstance direct_sum_family(double p, bool naive) {
  require_p(p, 2.0, "direct_sum");
  auto beta_of = [](int k) { return 1.0 - 1.0 / k; };
  // weight index and orientation carried by shell J_k
  auto source = [naive](int k) -> std::pair<int, bool> {
    if (naive || (k & 1)) return {k, false};
    return {k - 1, true};
  };
  FamilyInstance f;
  f.name = naive ? "direct_sum_naive" : "direct_sum";
  f.p = p;
  f.w = piecewise_dyadic(
      [=](int k) {
        const auto [j, refl] = source(k);
        return shell_pullback(power(1.0 - beta_of(j), -beta_of(j)), k, refl);
      },
      "w_k");
  f.sigma = piecewise_dyadic(
      [=](int k) {
        const auto [j, refl] = source(k);
        return shell_pullback(power(1.0, beta_of(j) / (p - 1.0)), k, refl);
      },
      "sigma_k");
  f.f = piecewise_dyadic(
      [=](int k) {
        if (!(k & 1)) return Density();
        const DirectSumBlock b = direct_sum_block(p, k);
        const Density unit = restrict_to(sign_modulate(power(1.0, -b.beta_k / (p - 1.0))), 0.0, 1.0);
        return scale(shell_pullback(unit, k, false), b.c_k);
      },
      "c_k f_k");
  f.sigma_f = piecewise_dyadic(
      [=](int k) {
        if (!(k & 1)) return Density();
        const DirectSumBlock b = direct_sum_block(p, k);
        return scale(shell_pullback(b.unit_sigma_f, k, false), b.c_k);
      },
      "c_k sigma_k f_k");
  f.f_power_sigma = piecewise_dyadic(
      [=](int k) {
        if (!(k & 1)) return Density();
        const DirectSumBlock b = direct_sum_block(p, k);
        return scale(shell_pullback(power(1.0, -b.beta_k), k, false),
                     pow(b.c_k, p));
      },
      "c_k^p x^-beta_k");
  f.predicted.fnorm_p = direct_sum_fnorm_p(p);
  f.singular_points = {0.0};
  for (int k = 1; k <= 20; ++k) {
    if (naive || (k & 1)) f.singular_points.push_back(std::ldexp(1.0, -k));
  }
  f.x0 = 0.75;
  return f;
}

HypothesisReport check_extension_hypotheses(const FamilyInstance& inner,
                                            const HypothesisOptions& o) {
  if (inner.on_line) throw DomainError("family is already on the line");
  HypothesisReport rep;
  const int n = o.max_index;
  std::vector<WideReal> wm(n + 1), sm(n + 1);
  for (int k = 0; k <= n; ++k) {
    wm[k] = ldexp(inner.w.spine_mean(k), -k);
    sm[k] = pow(ldexp(inner.sigma.spine_mean(k), -k), inner.p - 1.0);
  }
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= n; ++l) {
      const WideReal len = WideReal(std::ldexp(1.0, -k) + std::ldexp(1.0, -l));
      const double v = (wm[k] * sm[l] / pow(len, inner.p)).to_double();
      if (v > rep.max_ratio_ii) {
        rep.max_ratio_ii = v;
        rep.worst_k = k;
        rep.worst_l = l;
      }
    }
  }
  for (int i = 0; i < o.samples; ++i) {
    const double x = inner.x0 + (1.0 - inner.x0) * i / o.samples;
    rep.max_w_iii = std::max(rep.max_w_iii, inner.w(x));
    rep.max_sigma_iii = std::max(rep.max_sigma_iii, inner.sigma(x));
  }
  rep.passed = rep.max_ratio_ii <= o.constant && rep.max_w_iii <= o.constant &&
               rep.max_sigma_iii <= o.constant;
  return rep;
}

FamilyInstance extend_to_line(const FamilyInstance& inner, const HypothesisOptions& opts) {
  const HypothesisReport rep = check_extension_hypotheses(inner, opts);
  if (!rep.passed) {
    throw HypothesisError("extension hypotheses fail for " + inner.name + ": ratio " +
                          std::to_string(rep.max_ratio_ii) + " at (k, l) = (" +
                          std::to_string(rep.worst_k) + ", " + std::to_string(rep.worst_l) +
                          "), sup w " + std::to_string(rep.max_w_iii) + ", sup sigma " +
                          std::to_string(rep.max_sigma_iii));
  }
  FamilyInstance e = inner;
  e.name = "extended(" + inner.name + ")";
  e.w = periodic_reflect(inner.w);
  e.sigma = periodic_reflect(inner.sigma);
  e.f = periodic_reflect(inner.f);
  e.sigma_f = periodic_reflect(inner.sigma_f);
  e.f_power_sigma = periodic_reflect(inner.f_power_sigma);
  e.on_line = true;
  return e;
}

std::vector<double> line_anchors(const FamilyInstance& extended, double span) {
  std::vector<double> out;
  const auto reach = static_cast<long>(std::ceil(span)) + 2;
  for (long m = -reach; m <= reach; ++m) {
    const double base = 2.0 * static_cast<double>(m);
    for (double s : extended.singular_points) {
      for (double z : {base + s, base - s}) {
        if (z >= -span && z <= span) out.push_back(z);
      }
    }
    // the odd integers are images of the cell end x = 1, singular or not
    for (double z : {base + 1.0, base - 1.0}) {
      if (z >= -span && z <= span) out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dyadsq
