#include <gtest/gtest.h>

#include "data/gamma_tables.hpp"
#include "gammak/andreief.hpp"
#include "gammak/exactpoly.hpp"

using namespace gammak;

namespace {

big_rational q(long p, long d = 1) { return make_rational(p, d); }

rational_polynomial poly(std::initializer_list<long> ascending) {
  std::vector<big_rational> cs;
  for (long c : ascending) cs.emplace_back(c);
  return rational_polynomial(std::move(cs));
}

const gamma_poly_set& cached_gamma(int k) {
  static std::map<int, gamma_poly_set> cache;
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, gamma_exact(k, {7, 4})).first;
  return it->second;
}

}  // namespace

TEST(Rational, BarnesG) {
  EXPECT_EQ(barnes_g_int(1), 1);
  EXPECT_EQ(barnes_g_int(2), 1);
  EXPECT_EQ(barnes_g_int(5), 12);
  EXPECT_EQ(barnes_g_int(6), 288);
  EXPECT_THROW(barnes_g_int(0), std::domain_error);
}

TEST(Rational, Bernoulli) {
  EXPECT_EQ(bernoulli_b2n(1), q(1, 6));
  EXPECT_EQ(bernoulli_b2n(2), q(-1, 30));
  EXPECT_EQ(bernoulli_b2n(6), q(-691, 2730));
  EXPECT_EQ(bernoulli_b2n(20), big_rational(big_int("-261082718496449122051"), big_int(13530)));
}

TEST(Rational, Parse) {
  EXPECT_EQ(parse_rational("-1.25"), q(-5, 4));
  EXPECT_EQ(parse_rational("3/6"), q(1, 2));
  EXPECT_EQ(parse_rational("+7"), q(7));
  EXPECT_THROW(parse_rational("1/0"), std::domain_error);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Polynomial, ArithmeticAndShift) {
  const auto p = poly({1, 2, 3});
  EXPECT_EQ(p(q(2)), q(17));
  EXPECT_EQ(p.derivative(), poly({2, 6}));
  EXPECT_EQ(p.shifted(q(1)), poly({6, 8, 3}));
  EXPECT_EQ(p.scaled_argument(q(-1)), poly({1, -2, 3}));
  EXPECT_EQ(power_of_linear(q(2), 2), poly({4, -4, 1}));
  EXPECT_EQ(poly({0}).degree(), -1);
  EXPECT_EQ((p * poly({-1, 1})).degree(), 3);
  const auto [quo, rem] = (p * poly({-1, 1}) + poly({5})).divmod(poly({-1, 1}));
  EXPECT_EQ(quo, p);
  EXPECT_EQ(rem, poly({5}));
}

TEST(Convolve, IndicatorSelfConvolutionIsTent) {
  const auto one = piecewise_polynomial::unit_monomial(0);
  const auto tent = convolve(one, one);
  ASSERT_EQ(tent.left_knot(), 0);
  ASSERT_EQ(tent.piece_count(), 2u);
  EXPECT_EQ(tent.piece_at(0), poly({0, 1}));
  EXPECT_EQ(tent.piece_at(1), poly({2, -1}));
  EXPECT_EQ(integrate_pp(tent), 1);
}

TEST(Convolve, LinearWithIndicator) {
  const auto f = convolve(piecewise_polynomial::unit_monomial(1), piecewise_polynomial::unit_monomial(0));
  EXPECT_EQ(f.piece_at(0), rational_polynomial::monomial(2, q(1, 2)));
  // integral_{c-1}^{1} t dt on [1, 2]
  EXPECT_EQ(f.piece_at(1), rational_polynomial({q(0), q(1), q(-1, 2)}));
  EXPECT_EQ(integrate_pp(f), q(1, 2));
}

TEST(Convolve, ZeroAnnihilates) {
  EXPECT_TRUE(convolve(piecewise_polynomial{}, piecewise_polynomial::unit_monomial(3)).is_zero());
}

TEST(GammaExact, SmallCases) {
  const auto g1 = gamma_exact(1);
  ASSERT_EQ(g1.pp.piece_count(), 1u);
  EXPECT_EQ(g1.pp.piece_at(0), poly({1}));
  const auto& g2 = cached_gamma(2);
  EXPECT_EQ(g2.pp.piece_at(0), rational_polynomial::monomial(3, q(1, 6)));
  EXPECT_EQ(g2.pp.piece_at(1), power_of_linear(q(2), 3) * q(-1, 6));
}

TEST(GammaExact, ThreeMiddlePiece) {
  const std::vector<long> expect{-927, 4392, -8484, 8568, -4830, 1512, -252, 24, -2};
  const auto got = cached_gamma(3).scaled_piece(1);
  ASSERT_EQ(got.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(got[i], expect[i]) << "power " << i;
}

TEST(GammaExact, ReferenceTablesUpToFive) {
  for (const auto& row : testdata::gamma_table_rows()) {
    if (row.k > 5) continue;
    const auto got = cached_gamma(row.k).scaled_piece(row.j);
    ASSERT_EQ(got.size(), row.coeffs.size()) << "k=" << row.k << " j=" << row.j;
    for (std::size_t i = 0; i < got.size(); ++i)
      EXPECT_EQ(got[i], big_int(std::string(row.coeffs[i]))) << "k=" << row.k << " j=" << row.j << " power " << i;
  }
}

TEST(GammaExact, Invariants) {
  for (int k = 1; k <= 5; ++k) EXPECT_NO_THROW(verify_gamma_invariants(cached_gamma(k))) << "k=" << k;
}

TEST(GammaExact, ThreadCountDoesNotChangeResult) {
  const auto a = gamma_exact(4, {7, 1});
  const auto& b = cached_gamma(4);
  for (int j = 0; j < 4; ++j) EXPECT_EQ(a.pp.piece_at(j), b.pp.piece_at(j));
}

TEST(GammaExact, RejectsOutOfRange) {
  EXPECT_THROW(gamma_exact(0), std::domain_error);
  EXPECT_THROW(gamma_exact(8), std::domain_error);
}

TEST(GammaEval, Examples) {
  const auto& g2 = cached_gamma(2);
  EXPECT_EQ(eval_pp(g2.pp, q(1)), q(1, 6));
  EXPECT_EQ(g2.pp.piece_at(0)(q(1)), q(1, 6));
  EXPECT_EQ(g2.pp.piece_at(1)(q(1)), q(1, 6));
  EXPECT_EQ(eval_pp(g2.pp, q(-1)), 0);
  EXPECT_EQ(eval_pp(g2.pp, q(5)), 0);
  const auto mid = poly({-927, 4392, -8484, 8568, -4830, 1512, -252, 24, -2}) * big_rational(1, 40320);
  EXPECT_EQ(eval_pp(cached_gamma(3).pp, q(3, 2)), mid(q(3, 2)));
}

TEST(GammaEval, Symmetry) {
  for (int k = 2; k <= 5; ++k)
    for (int m = 0; m <= 8 * k; ++m) {
      const auto c = q(m, 8);
      EXPECT_EQ(eval_pp(cached_gamma(k).pp, c), eval_pp(cached_gamma(k).pp, q(k) - c)) << "k=" << k << " c=" << c;
    }
}

TEST(Smoothness, KnownOrders) {
  EXPECT_EQ(smoothness_order(cached_gamma(2), 1), 0);
  EXPECT_EQ(smoothness_order(cached_gamma(5), 2), 11);
  EXPECT_EQ(smoothness_order(cached_gamma(3), 1), nu(1, 3) - 2);
  EXPECT_THROW(smoothness_order(cached_gamma(3), 0), std::domain_error);
}

TEST(Smoothness, OrderIsNuMinusTwoUpToFive) {
  for (int k = 2; k <= 5; ++k)
    for (int j = 1; j < k; ++j) {
      EXPECT_EQ(smoothness_order(cached_gamma(k), j), nu(j, k) - 2) << "k=" << k << " j=" << j;
      EXPECT_EQ(knot_jump(cached_gamma(k), j).valuation(), nu(j, k) - 1) << "k=" << k << " j=" << j;
    }
}

TEST(Mass, Examples) {
  EXPECT_EQ(integrate_pp(cached_gamma(2).pp), q(1, 12));
  for (int k = 1; k <= 5; ++k) EXPECT_EQ(integrate_pp(cached_gamma(k).pp), gamma_mass_closed_form(k)) << "k=" << k;
  EXPECT_EQ(gamma_mass_closed_form(3), q(1, 8640));
}

TEST(Andreief, Examples) {
  const auto one = poly({1});
  const auto s = andreief_evaluate({0, 1}, {0, 1}, one);
  EXPECT_EQ(s.lhs, q(1, 12));
  EXPECT_EQ(s.rhs, q(1, 12));
  const auto z = andreief_evaluate({0, 1}, {0, 1}, poly({0}));
  EXPECT_EQ(z.lhs, 0);
  EXPECT_EQ(z.rhs, 0);
  EXPECT_TRUE(andreief_check(3, {0, 1, 2}, {0, 1, 2}, one));
  EXPECT_THROW(andreief_check(2, {0, 1, 2}, {0, 1, 2}, one), std::invalid_argument);
}

TEST(Andreief, ExhaustiveSmallCases) {
  const std::vector<rational_polynomial> weights{poly({1}), poly({0, 1}), poly({1, 1})};
  int cases = 0;
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::vector<unsigned>> lists;
    std::vector<unsigned> cur;
    std::function<void(unsigned)> rec = [&](unsigned start) {
      if (cur.size() == static_cast<std::size_t>(n)) {
        lists.push_back(cur);
        return;
      }
      for (unsigned d = start; d <= 4; ++d) {
        cur.push_back(d);
        rec(d + 1);
        cur.pop_back();
      }
    };
    rec(0);
    for (const auto& a : lists)
      for (const auto& b : lists)
        for (const auto& r : weights) {
          EXPECT_TRUE(andreief_check(n, a, b, r));
          ++cases;
        }
  }
  EXPECT_EQ(cases, 3 * (25 + 100 + 100));
}
