#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dyadsq/errors.hpp"
#include "dyadsq/families.hpp"
#include "dyadsq/squarefn.hpp"

using namespace dyadsq;
using doctest::Approx;

TEST_CASE("stored norms match integration") {
  const FamilyInstance fams[] = {lerner_family(3.0, 0.75), alternating_family(4.0, 0.5),
                                 power_pair(2.0, 0.5, PowerPairVariant::i),
                                 power_pair(3.0, 0.3, PowerPairVariant::ii),
                                 lai_treil_family(3.0, 0.4)};
  for (const auto& f : fams) {
    CAPTURE(f.name);
    CHECK(f.f_power_sigma.integrate(0.0, 1.0) == Approx(f.predicted.fnorm_p).epsilon(1e-10));
  }
  CHECK(fams[0].predicted.fnorm_p == Approx(4.0));
  CHECK(fams[1].predicted.fnorm_p == Approx(2.0));
  CHECK(fams[4].predicted.fnorm_p == Approx(5.0 * std::numbers::ln2));
}

TEST_CASE("alternating family identities") {
  const FamilyInstance f = alternating_family(3.0, 0.6);
  for (double x : {0.013, 0.2, 0.37, 0.9}) {
    CHECK(std::pow(std::fabs(f.f(x)), 3.0) * f.sigma(x) == Approx(std::pow(x, -0.6)).epsilon(1e-13));
    CHECK(f.f(x) * f.sigma(x) == Approx(f.sigma_f(x)).epsilon(1e-13));
  }
  for (int k = 0; k <= 50; ++k) {
    CHECK(f.sigma_f.spine_mean(k).to_double() == Approx(((k % 2) ? -1.0 : 1.0) / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("lai-treil pieces") {
  const FamilyInstance f = lai_treil_family(3.0, 0.4);
  CHECK(f.w.integrate(0.0, 1.0) == Approx(5.0 * std::numbers::ln2).epsilon(1e-13));
  for (double x : {0.01, 0.3, 0.8}) {
    CHECK(f.f(x) * f.sigma(x) == Approx(f.sigma_f(x)).epsilon(1e-13));
    CHECK(std::pow(std::fabs(f.f(x)), 3.0) * f.sigma(x) == Approx(f.f_power_sigma(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lai_treil_family(3.0, 0.3), DomainError);
  CHECK_THROWS_AS(lai_treil_family(3.0, 0.5), DomainError);
  CHECK_THROWS_AS(lai_treil_family(2.0, 0.45), DomainError);
}

TEST_CASE("direct sum gluing") {
  const double p = 3.0;
  const FamilyInstance f = direct_sum_family(p);
  // shell J_3 carries (1/3) u^{-2/3}
  for (double u : {0.1, 0.5, 0.9}) {
    CHECK(f.w(0.125 * (1 + u)) == Approx(std::pow(u, -2.0 / 3.0) / 3.0).epsilon(1e-13));
  }
  // matched singularity at 2^-3: same profile from both sides
  for (double eps : {1e-4, 1e-6}) {
    const double right = f.w(0.125 + eps), left = f.w(0.125 - eps);
    CHECK(left / right == Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(1e-9));
  }
  // block norms and their sum
  for (int k = 1; k <= 2001; k += 2) {
    const double mass = ldexp(f.f_power_sigma.shell_integral_scaled(k, 0.0, 1.0), -k).to_double();
    const double want = std::pow(k, -p / 2.0);
    if (k < 1000) CHECK(mass == Approx(want).epsilon(1e-12));
    const WideReal scaled = f.f_power_sigma.shell_integral_scaled(k, 0.0, 1.0);
    CHECK((ldexp(scaled, -k) / WideReal(want)).to_double() == Approx(1.0).epsilon(1e-12));
    CHECK(f.f_power_sigma.shell_integral_scaled(k + 1, 0.0, 1.0).is_zero());
  }
  double partial = 0.0;
  for (int k = 1; k < 200000; k += 2) partial += std::pow(k, -1.5);
  CHECK(direct_sum_fnorm_p(3.0) == Approx(partial + 1.0 / std::sqrt(200000.0)).epsilon(1e-6));
  // additivity across shell boundaries
  CHECK(f.w.integrate(0.1, 0.125) + f.w.integrate(0.125, 0.3) ==
        Approx(f.w.integrate(0.1, 0.3)).epsilon(1e-12));
  CHECK(f.w.integrate(0.0, 1.0) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("direct sum block change of variables") {
  const double p = 3.0;
  const int k = 3, d = 8;
  const FamilyInstance f = direct_sum_family(p);
  const DirectSumBlock b = direct_sum_block(p, k);
  // local square function of the glued product inside J_k, leaf by leaf
  const int level = k + d;
  const std::uint64_t first = std::uint64_t{1} << d;
  double glued = 0.0;
  for (std::uint64_t i = first; i < 2 * first; ++i) {
    DyadicInterval q(level, i);
    double sq = 0.0;
    DyadicInterval child = q;
    while (child.level() > k) {
      const DyadicInterval parent = child.parent();
      const auto [l, r] = martingale_difference(f.sigma_f, parent);
      const double v = (child.index() & 1) ? r : l;
      sq += v * v;
      child = parent;
    }
    glued += std::pow(sq, p / 2.0) * f.w.integrate(q.left(), q.right());
  }
  const SnormResult unit =
      weighted_snorm(b.unit_sigma_f, b.unit_w, p, SnormOptions{.mode = SnormMode::full, .depth = d});
  CHECK(glued == Approx(b.scale_p * unit.value_p).epsilon(1e-10));
  CHECK(b.scale_p == Approx(std::pow(b.c_k.to_double(), p) * std::ldexp(1.0, -k)).epsilon(1e-14));
}

TEST_CASE("line extension") {
  const FamilyInstance pair = power_pair(2.0, 0.5, PowerPairVariant::ii);
  const FamilyInstance e = extend_to_line(pair);
  CHECK(e.w(1.75) == Approx(0.5).epsilon(1e-15));
  for (int i = 0; i < 1000; ++i) {
    const double x = -7.0 + 14.0 * (i + 0.5) / 1000.0 + 1e-3 * std::sin(i);
    CHECK(e.w(x + 2.0) == Approx(e.w(x)).epsilon(1e-13));
    CHECK(e.sigma(x + 2.0) == Approx(e.sigma(x)).epsilon(1e-13));
    const double k = std::round(x);
    CHECK(e.w(k + (x - k)) == Approx(e.w(k - (x - k))).epsilon(1e-13));
  }
  const HypothesisReport rep = check_extension_hypotheses(power_pair(2.0, 0.5, PowerPairVariant::i));
  CHECK(rep.passed);
  CHECK(rep.max_ratio_ii <= 16.0);
  CHECK(check_extension_hypotheses(lai_treil_family(3.0, 0.4)).passed);
  CHECK(check_extension_hypotheses(direct_sum_family(3.0)).passed);
  CHECK_THROWS_AS(extend_to_line(pair, HypothesisOptions{.constant = 0.1}), HypothesisError);
  CHECK_THROWS_AS(extend_to_line(e), DomainError);
  const auto anchors = line_anchors(e, 2.0);
  CHECK(anchors.front() == -2.0);
  CHECK(anchors.back() == 2.0);
  CHECK(anchors.size() == 5);
}
