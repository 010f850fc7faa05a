#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "gammak/divisor.hpp"

using namespace gammak;

namespace {

const precision_context ctx30(30);

hp_real hp(long p, long d = 1) { return to_hp(make_rational(p, d)); }

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gammak_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Sieve, Examples) {
  EXPECT_EQ(sieve_dk(2, 10)[6], 4u);
  EXPECT_EQ(sieve_dk(3, 10)[4], 6u);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(sieve_dk(k, 5)[1], 1u);
  EXPECT_THROW(sieve_dk(0, 10), std::domain_error);
  EXPECT_THROW(sieve_dk(2, 0), std::domain_error);
}

TEST(Sieve, MatchesBruteForce) {
  for (int k = 1; k <= 4; ++k) {
    const auto s = sieve_dk(k, 1000);
    std::uint64_t running = 0;
    for (std::uint64_t n = 1; n <= 1000; ++n) {
      ASSERT_EQ(s[n], dk_direct(k, n)) << "k=" << k << " n=" << n;
      running += s[n];
      ASSERT_EQ(s.prefix[n], running);
    }
  }
}

TEST(Sieve, PartialSumOfRealArgument) {
  const auto s = sieve_dk(2, 100);
  EXPECT_EQ(s.partial_sum(hp(0)), 0u);
  EXPECT_EQ(s.partial_sum(hp(-3)), 0u);
  EXPECT_EQ(s.partial_sum(hp(13, 2)), 1u + 2 + 2 + 3 + 2 + 4);
  EXPECT_THROW(s.partial_sum(hp(101)), std::out_of_range);
}

TEST(SieveCache, RoundTripAndRejection) {
  const auto dir = scratch_dir("cache");
  auto s = sieve_dk(3, 5000);
  s.block_size = 777;
  const auto file = sieve_cache_path(dir, 3, 5000);
  save_sieve(s, file);
  divisor_sieve back;
  ASSERT_TRUE(load_sieve(file, 3, 5000, back));
  EXPECT_EQ(back.values, s.values);
  EXPECT_EQ(back.prefix, s.prefix);
  EXPECT_FALSE(load_sieve(file, 2, 5000, back));
  EXPECT_FALSE(load_sieve(file, 3, 4000, back));
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(40 + 8 * 100);
    const std::uint64_t bad = 12345;
    f.write(reinterpret_cast<const char*>(&bad), 8);
  }
  EXPECT_FALSE(load_sieve(file, 3, 5000, back));
  const auto fresh = cached_sieve_dk(3, 5000, dir);
  EXPECT_EQ(fresh.values, s.values);
  ASSERT_TRUE(load_sieve(file, 3, 5000, back));
  std::filesystem::remove_all(dir);
}

TEST(Stieltjes, KnownValues) {
  scoped_precision sp(ctx30);
  const auto g = stieltjes_constants(3, ctx30);
  EXPECT_GE(agreement_digits(g[0], hp_euler_gamma()), 29);
  EXPECT_GE(agreement_digits(g[1], hp_real("-0.0728158454836767248605863758749547")), 29);
  EXPECT_GE(agreement_digits(g[2], hp_real("-0.00969036319287231848453038603521252")), 28);
}

TEST(MainTerm, Examples) {
  scoped_precision sp(ctx30);
  const hp_real x = hp(12345, 7);
  EXPECT_GE(agreement_digits(main_term(1, x, ctx30), x), 29);
  EXPECT_GE(agreement_digits(main_term(2, x, ctx30), x * (log(x) + 2 * hp_euler_gamma() - 1)), 29);
  for (int k = 1; k <= 5; ++k) {
    const auto P = make_main_term(k, ctx30);
    ASSERT_EQ(P.coefficients.size(), static_cast<std::size_t>(k));
    EXPECT_GE(agreement_digits(P.coefficients.back() * to_hp(factorial(static_cast<unsigned>(k - 1))), hp(1)), 29);
  }
  EXPECT_EQ(main_term(2, hp(0), ctx30), 0);
}

TEST(MainTerm, TracksDivisorSums) {
  scoped_precision sp(ctx30);
  const auto s = sieve_dk(2, 100000);
  const hp_real x(100000);
  const hp_real err = hp_real(s.partial_sum(x)) - main_term(2, x, ctx30);
  EXPECT_LT(abs(err), 4 * sqrt(x));
}

TEST(DeltaK, Examples) {
  scoped_precision sp(ctx30);
  const auto s1 = sieve_dk(1, 1000);
  EXPECT_EQ(delta_k(hp(500), hp(0), s1, ctx30), 0);
  EXPECT_LT(abs(delta_k(hp(500), hp(37), s1, ctx30)), pow10(-25));
  EXPECT_LT(abs(delta_k(hp(1001, 2), hp(37, 3), s1, ctx30) - (hp(512 - 500) - hp(37, 3))), pow10(-25));

  const auto s2 = sieve_dk(2, 100200);
  std::uint64_t direct = 0;
  for (std::uint64_t n = 100001; n <= 100100; ++n)
    for (std::uint64_t a = 1; a * a <= n; ++a)
      if (n % a == 0) direct += a * a == n ? 1 : 2;
  const hp_real x(100000), H(100);
  const hp_real expect = hp_real(direct) - (main_term(2, x + H, ctx30) - main_term(2, x, ctx30));
  EXPECT_LT(abs(delta_k(x, H, s2, ctx30) - expect), pow10(-25));
  EXPECT_THROW(delta_k(hp(100150), H, s2, ctx30), std::out_of_range);
}

TEST(AkConstant, Examples) {
  scoped_precision sp(ctx30);
  EXPECT_GE(agreement_digits(a_k_constant(1, 1000, ctx30).value, hp(1)), 28);
  const auto a2 = a_k_constant(2, 20000, ctx30);
  const hp_real pi = hp_pi();
  EXPECT_LE(abs(a2.value - 6 / (pi * pi)), a2.tail_bound);
  EXPECT_GT(a2.tail_bound, 0);
  const auto a3 = a_k_constant(3, 20000, ctx30);
  EXPECT_GT(a3.value, 0);
  EXPECT_LT(abs(a3.value - hp_real("0.0493220296917792")), a3.tail_bound);
  EXPECT_THROW(a_k_constant(2, 1, ctx30), std::domain_error);
}

TEST(AkConstant, LocalFactorClosedFormForTwo) {
  scoped_precision sp(ctx30);
  hp_real prod(1);
  for (long p : primes_up_to(500)) prod *= 1 - hp_real(1) / (hp_real(p) * p);
  EXPECT_GE(agreement_digits(a_k_constant(2, 500, ctx30).value, prod), 28);
}

TEST(Variance, ReportIsConsistent) {
  scoped_precision sp(ctx30);
  const auto r = variance_experiment(2, 20000, make_rational(3, 10), 0, ctx30, nullptr, 1'000'000, 2000);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.samples, 20001u);
  EXPECT_GE(agreement_digits(r.H, pow(hp(20000), hp(3, 10))), 28);
  EXPECT_GT(r.empirical, 0);
  EXPECT_GE(agreement_digits(r.ratio, r.empirical / r.predicted), 28);
  EXPECT_GE(agreement_digits(r.gamma_value, pow(hp(4, 7), 3) / 6), 28);
}

TEST(Variance, SampledGrid) {
  scoped_precision sp(ctx30);
  const auto r = variance_experiment(2, 20000, make_rational(1, 4), 500, ctx30, nullptr, 1000, 2000);
  EXPECT_FALSE(r.exhaustive);
  EXPECT_EQ(r.samples, 500u);
  EXPECT_GT(r.empirical, 0);
}

TEST(Variance, RejectsAlphaOutOfRange) {
  EXPECT_THROW(variance_experiment(2, 1000, make_rational(1, 2), 0, ctx30), std::domain_error);
  EXPECT_THROW(variance_experiment(3, 1000, make_rational(0), 0, ctx30), std::domain_error);
}
