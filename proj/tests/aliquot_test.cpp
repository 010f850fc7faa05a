#include <gtest/gtest.h>

#include "gammak/aliquot.hpp"

using namespace gammak;

namespace {

const precision_context ctx40(40);

hp_real hp(long p, long d = 1) { return to_hp(make_rational(p, d)); }

const char* const i3_digits =
    "1.70535704219150383549859568728989967913313869097890590667136169819331192007797559594679011";

// integral_{-1}^{1} sqrt(1 - t^2) cos(2 pi y t) dt with t = sin(theta); the
// integrand is smooth and pi-periodic, so the trapezoidal rule converges fast.
hp_real semicircle_transform_by_quadrature(const hp_real& y, int n) {
  const hp_real pi = hp_pi();
  hp_real sum(0);
  for (int i = 0; i < n; ++i) {
    const hp_real th = -pi / 2 + pi * i / n;
    const hp_real c = cos(th);
    sum += c * c * cos(2 * pi * y * sin(th));
  }
  return sum * pi / n;
}

}  // namespace

TEST(Bessel, SmallAndLargeArguments) {
  scoped_precision sp(ctx40);
  EXPECT_EQ(bessel_j1(hp(0), ctx40), 0);
  EXPECT_GE(agreement_digits(bessel_j1(hp(1), ctx40), hp_real("0.44005058574493351595968220371891491312737230199277")), 38);
  EXPECT_GE(agreement_digits(bessel_j1(hp(100), ctx40), hp_real("-0.077145352014112158032685494927234470211611667099243")), 38);
  const hp_real y = hp(1000);
  EXPECT_LT(abs(bessel_j1(y, ctx40) - bessel_j1_cosine_form(y, ctx40)), sqrt(2 / (hp_pi() * y)) / (2 * y));
}

TEST(Bessel, SemicircleLimitAtZero) {
  scoped_precision sp(ctx40);
  const hp_real pi = hp_pi();
  EXPECT_GE(agreement_digits(semicircle_ft_power(hp(0), 1, ctx40), pi / 2), 38);
  EXPECT_GE(agreement_digits(semicircle_ft_power(hp(1, 1000000000), 1, ctx40), pi / 2), 17);
  EXPECT_GE(agreement_digits(semicircle_ft_power(hp(0), 3, ctx40), pow(pi / 2, 3)), 38);
}

TEST(Bessel, SemicircleFourierTransform) {
  scoped_precision sp(ctx40.working_digits());
  for (const auto& y : {hp(1, 3), hp(1), hp(2)}) {
    const hp_real lhs = semicircle_transform_by_quadrature(y, 200);
    EXPECT_GE(agreement_digits(lhs, semicircle_ft_power(y, 1, ctx40)), 38);
    EXPECT_GE(agreement_digits(lhs, bessel_j1(2 * hp_pi() * y, ctx40) / (2 * y)), 38);
  }
}

TEST(Bessel, TermEnvelope) {
  scoped_precision sp(ctx40);
  const auto b = bessel_term_envelope(3, 30, ctx40);
  EXPECT_EQ(b.n, 30);
  EXPECT_GE(agreement_digits(b.bound, pow(2 * hp_pi(), -3) * pow(hp(10), hp(-9, 2))), 38);
  EXPECT_THROW(bessel_term_envelope(0, 1, ctx40), std::domain_error);
}

TEST(AliquotIntegral, PoissonSmallCases) {
  scoped_precision sp(ctx40);
  EXPECT_GE(agreement_digits(i_d_poisson(1, ctx40), hp(1)), 40);
  EXPECT_GE(agreement_digits(i_d_poisson(2, ctx40), hp(4, 3)), 40);
  EXPECT_GE(agreement_digits(i_d_poisson(3, ctx40), hp_real(i3_digits)), 40);
}

TEST(AliquotIntegral, PrintedThreeValue) {
  const precision_context ctx(100);
  scoped_precision sp(ctx);
  const std::string got = to_decimal(i_d_poisson(3, ctx), 95);
  EXPECT_EQ(got.substr(0, std::string(i3_digits).size()), i3_digits);
}

TEST(AliquotIntegral, SpacingDoesNotMatter) {
  scoped_precision sp(ctx40);
  for (int d : {2, 3, 4}) {
    const hp_real a = i_d_riemann(d, d, ctx40);
    EXPECT_GE(agreement_digits(a, i_d_riemann(d, 2 * d, ctx40)), 40) << "d=" << d;
    EXPECT_GE(agreement_digits(a, i_d_riemann(d, d + 1, ctx40)), 40) << "d=" << d;
  }
  EXPECT_THROW(i_d_riemann(3, 2, ctx40), std::domain_error);
}

TEST(AliquotIntegral, QuadratureAgrees) {
  scoped_precision sp(ctx40);
  EXPECT_GE(agreement_digits(i_d_quadrature(1, ctx40), hp(1)), 32);
  EXPECT_GE(agreement_digits(i_d_quadrature(2, ctx40), hp(4, 3)), 32);
  for (int d = 3; d <= 6; ++d)
    EXPECT_GE(agreement_digits(i_d_quadrature(d, ctx40), i_d_poisson(d, ctx40)), 32) << "d=" << d;
}

TEST(AliquotIntegral, AsymptoticExpansion) {
  scoped_precision sp(ctx40);
  for (int d : {20, 50}) {
    const hp_real exact = i_d_poisson(d, ctx40);
    const hp_real e5 = abs(i_d_asymptotic(d, 5, ctx40) / exact - 1);
    EXPECT_LE(e5, 10 * pow(hp(1, d), 5)) << "d=" << d;
    const hp_real e1 = abs(i_d_asymptotic(d, 1, ctx40) / exact - 1);
    const hp_real e2 = abs(i_d_asymptotic(d, 2, ctx40) / exact - 1);
    EXPECT_LT(e2, e1 / (4 * d)) << "d=" << d;
    EXPECT_GT(e2, e1 / (64 * d)) << "d=" << d;
  }
  EXPECT_THROW(i_d_asymptotic(2, 3, ctx40), std::domain_error);
  EXPECT_THROW(i_d_asymptotic(20, 6, ctx40), std::domain_error);
}

TEST(ContinuedFraction, FourThirds) {
  scoped_precision sp(ctx40);
  const auto cf = continued_fraction(hp(4, 3), ctx40, 0);
  ASSERT_GE(cf.partial_quotients.size(), 2u);
  EXPECT_EQ(cf.partial_quotients[0], 1);
  EXPECT_EQ(cf.partial_quotients[1], 3);
  EXPECT_EQ(cf.convergents[1].first, 4);
  EXPECT_EQ(cf.convergents[1].second, 3);
  EXPECT_THROW(continued_fraction(hp(-1), ctx40), std::domain_error);
}

TEST(ContinuedFraction, ConvergentsAreBestApproximations) {
  scoped_precision sp(ctx40);
  const hp_real x = sqrt(hp(2));
  const auto cf = continued_fraction(x, ctx40, 0);
  for (std::size_t n = 0; n < cf.partial_quotients.size() && n < 15; ++n)
    EXPECT_EQ(cf.partial_quotients[n], n == 0 ? 1 : 2);
  for (int n = 1; n < cf.reliable_count; ++n) {
    const auto& [a, b] = cf.convergents[static_cast<std::size_t>(n)];
    const auto& [a0, b0] = cf.convergents[static_cast<std::size_t>(n - 1)];
    EXPECT_EQ(big_int(a * b0 - a0 * b), n % 2 ? 1 : -1);
  }
  const big_int bound = rational_denominator_bound(cf);
  EXPECT_LE(big_int(bound * bound), ipow(big_int(10), 40));
  EXPECT_GT(big_int(bound * bound * 100), ipow(big_int(10), 40));
}

TEST(LocalFactors, GroupOrderAndEnumeration) {
  EXPECT_EQ(gl2_order(2), 6);
  EXPECT_EQ(gl2_order(3), 48);
  EXPECT_EQ(gl2_local_factor(2, 1), make_rational(2, 3));
  EXPECT_EQ(gl2_local_factor(3, 1), make_rational(15, 16));
  EXPECT_EQ(gl2_local_factor(3, 2), make_rational(189, 256));
  EXPECT_EQ(gl2_local_factor(5, 3), make_rational(95125, 110592));
  for (int ell : {2, 3, 5})
    for (int d = 1; d <= 3; ++d)
      EXPECT_EQ(big_int(gl2_valid_tuples(ell, d)), gl2_valid_tuples_transfer(ell, d)) << ell << " " << d;
  EXPECT_THROW(gl2_local_factor(4, 1), std::domain_error);
}

TEST(LocalFactors, TruncatedConstant) {
  scoped_precision sp(ctx40);
  const auto c1 = c_aliquot_truncated(1, 1, ctx40);
  EXPECT_TRUE(c1.factors.empty());
  EXPECT_GE(agreement_digits(c1.value, 2 / hp_pi()), 38);
  const auto c2 = c_aliquot_truncated(2, 3, ctx40);
  ASSERT_EQ(c2.factors.size(), 2u);
  EXPECT_EQ(c2.factors[0].ell, 2);
  EXPECT_EQ(c2.factors[1].factor, make_rational(189, 256));
  const hp_real expect = pow(2 / hp_pi(), 2) * hp(4, 3) * to_hp(big_rational(make_rational(4, 9) * make_rational(189, 256)));
  EXPECT_GE(agreement_digits(c2.value, expect), 38);
}
