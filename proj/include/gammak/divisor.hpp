#pragma once

// d_k(n) sieve, the residue main term X P_{k-1}(log X), short-interval
// remainders Delta_k(x; H) and their mean square against the conjectured size.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gammak/errors.hpp"
#include "gammak/exactpoly.hpp"
#include "gammak/precision.hpp"
#include "gammak/rational.hpp"

namespace gammak {

struct divisor_sieve {
  int k = 0;
  std::uint64_t X = 0;
  std::uint64_t block_size = 1u << 16;
  std::vector<std::uint64_t> values;  // values[n] = d_k(n), values[0] = 0
  std::vector<std::uint64_t> prefix;  // prefix[n] = sum_{m <= n} d_k(m)

  [[nodiscard]] std::uint64_t operator[](std::uint64_t n) const { return values.at(n); }

  /// S_k(y) = sum_{n <= y} d_k(n) for real y in [0, X].
  [[nodiscard]] std::uint64_t partial_sum(const hp_real& y) const {
    if (y < 0) return 0;
    const auto n = static_cast<std::uint64_t>(floor(y));
    if (n > X) throw std::out_of_range("divisor_sieve: argument beyond sieve range");
    return prefix[n];
  }
};

namespace detail {

inline void fill_prefix(divisor_sieve& s) {
  s.prefix.assign(s.X + 1, 0);
  for (std::uint64_t n = 1; n <= s.X; ++n)
    if (__builtin_add_overflow(s.prefix[n - 1], s.values[n], &s.prefix[n]))
      throw std::overflow_error("divisor_sieve: partial sums overflow 64 bits");
}

}  // namespace detail

/// d_k(n) for n <= X by k-1 convolutions with the constant function 1.
inline divisor_sieve sieve_dk(int k, std::uint64_t X, std::uint64_t max_x = 100'000'000) {
  if (k < 1 || k > 6) throw std::domain_error("sieve_dk: k must be in 1..6");
  if (X < 1 || X > max_x) throw std::domain_error("sieve_dk: X out of range");
  divisor_sieve s;
  s.k = k;
  s.X = X;
  s.values.assign(X + 1, 1);
  s.values[0] = 0;
  std::vector<std::uint64_t> next;
  for (int step = 2; step <= k; ++step) {
    next.assign(X + 1, 0);
    for (std::uint64_t m = 1; m <= X; ++m) {
      const std::uint64_t v = s.values[m];
      for (std::uint64_t n = m; n <= X; n += m)
        if (__builtin_add_overflow(next[n], v, &next[n])) throw std::overflow_error("sieve_dk: d_k overflows 64 bits");
    }
    s.values.swap(next);
  }
  detail::fill_prefix(s);
  return s;
}

/// Ordered factorizations of n into k factors, by recursion over divisors.
inline std::uint64_t dk_direct(int k, std::uint64_t n) {
  if (k == 1) return 1;
  std::uint64_t total = 0;
  for (std::uint64_t a = 1; a <= n; ++a)
    if (n % a == 0) total += dk_direct(k - 1, n / a);
  return total;
}

// Cache files: header {magic, k, X, block_size, checksum} then X+1 little-endian u64 values.

inline constexpr std::uint64_t sieve_cache_magic = 0x31564453'4b4d4731ull;

inline std::uint64_t fnv1a64(const std::vector<std::uint64_t>& v) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint64_t x : v)
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  return h;
}

inline std::filesystem::path sieve_cache_path(const std::filesystem::path& dir, int k, std::uint64_t X) {
  return dir / ("dk_" + std::to_string(k) + "_" + std::to_string(X) + ".bin");
}

inline void save_sieve(const divisor_sieve& s, const std::filesystem::path& file) {
  std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_sieve: cannot open " + file.string());
  const std::uint64_t header[5] = {sieve_cache_magic, static_cast<std::uint64_t>(s.k), s.X, s.block_size,
                                   fnv1a64(s.values)};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  for (std::uint64_t lo = 0; lo < s.values.size(); lo += s.block_size) {
    const std::uint64_t len = std::min<std::uint64_t>(s.block_size, s.values.size() - lo);
    out.write(reinterpret_cast<const char*>(s.values.data() + lo), static_cast<std::streamsize>(len * 8));
  }
  if (!out) throw std::runtime_error("save_sieve: write failed for " + file.string());
}

/// Returns false when the file is missing, malformed, for other (k, X), or fails its checksum.
inline bool load_sieve(const std::filesystem::path& file, int k, std::uint64_t X, divisor_sieve& s) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return false;
  std::uint64_t header[5];
  if (!in.read(reinterpret_cast<char*>(header), sizeof header)) return false;
  if (header[0] != sieve_cache_magic || header[1] != static_cast<std::uint64_t>(k) || header[2] != X || header[3] == 0)
    return false;
  divisor_sieve t;
  t.k = k;
  t.X = X;
  t.block_size = header[3];
  t.values.resize(X + 1);
  if (!in.read(reinterpret_cast<char*>(t.values.data()), static_cast<std::streamsize>((X + 1) * 8))) return false;
  if (fnv1a64(t.values) != header[4]) return false;
  detail::fill_prefix(t);
  s = std::move(t);
  return true;
}

/// Sieve from `dir` when a valid cache exists, otherwise computed and written there.
inline divisor_sieve cached_sieve_dk(int k, std::uint64_t X, const std::filesystem::path& dir) {
  if (dir.empty()) return sieve_dk(k, X);
  const auto file = sieve_cache_path(dir, k, X);
  divisor_sieve s;
  if (load_sieve(file, k, X, s)) return s;
  s = sieve_dk(k, X);
  save_sieve(s, file);
  return s;
}

/// Stieltjes constants gamma_0..gamma_{count-1} by Euler-Maclaurin applied to
/// sum (log m)^n / m with cutoff N and `terms` Bernoulli corrections.
inline std::vector<hp_real> stieltjes_constants(int count, const precision_context& ctx, int N = 100, int terms = 40) {
  if (count < 1) throw std::domain_error("stieltjes_constants: count must be >= 1");
  scoped_precision sp(ctx);
  const hp_real lnN = log(hp_real(N));
  std::vector<hp_real> logs(N + 1);
  for (int m = 1; m <= N; ++m) logs[m] = log(hp_real(m));
  std::vector<hp_real> out;
  for (int n = 0; n < count; ++n) {
    hp_real s(0);
    for (int m = 1; m <= N; ++m) s += pow(logs[m], n) / m;
    s -= pow(lnN, n + 1) / (n + 1);
    s -= pow(lnN, n) / (2 * N);
    // f^{(r)}(x) = x^{-1-r} sum_i c[i] (log x)^i for f = (log x)^n / x
    std::vector<big_int> c(n + 1, 0);
    c[n] = 1;
    auto deriv_at_n = [&](int r) {
      hp_real v(0);
      for (int i = 0; i <= n; ++i)
        if (c[i] != 0) v += to_hp(c[i]) * pow(lnN, i);
      return v * pow(hp_real(N), -1 - r);
    };
    auto step = [&](int r) {
      std::vector<big_int> d(n + 1, 0);
      for (int i = 0; i <= n; ++i) {
        d[i] = -(r + 1) * c[i];
        if (i + 1 <= n) d[i] += (i + 1) * c[i + 1];
      }
      c.swap(d);
    };
    int order = 0;
    for (int j = 1; j <= terms; ++j) {
      while (order < 2 * j - 1) step(order++);
      s -= to_hp(bernoulli_b2n(j)) / to_hp(big_int(factorial(static_cast<unsigned>(2 * j)))) * deriv_at_n(order);
    }
    out.push_back(s);
  }
  return out;
}

struct main_term_poly {
  int k = 0;
  std::vector<hp_real> coefficients;  // P_{k-1}(L) = sum_i coefficients[i] L^i
  std::vector<hp_real> stieltjes;

  [[nodiscard]] hp_real operator()(const hp_real& L) const {
    hp_real v(0);
    for (std::size_t i = coefficients.size(); i-- > 0;) v = v * L + coefficients[i];
    return v;
  }
};

/// P_{k-1} from the Laurent series of zeta(s)^k x^s / s at s = 1.
inline main_term_poly make_main_term(int k, const precision_context& ctx) {
  if (k < 1) throw std::domain_error("make_main_term: k must be >= 1");
  main_term_poly out;
  out.k = k;
  out.stieltjes = stieltjes_constants(k, ctx);
  scoped_precision sp(ctx);
  // w zeta(1 + w) = 1 + sum_n (-1)^n gamma_n w^{n+1} / n!
  std::vector<hp_real> z(k, hp_real(0));
  z[0] = 1;
  for (int n = 0; n + 1 < k; ++n) {
    z[n + 1] = out.stieltjes[n] / to_hp(big_int(factorial(static_cast<unsigned>(n))));
    if (n % 2) z[n + 1] = -z[n + 1];
  }
  std::vector<hp_real> e(k, hp_real(0));
  e[0] = 1;
  for (int p = 0; p < k; ++p) {
    std::vector<hp_real> t(k, hp_real(0));
    for (int i = 0; i < k; ++i)
      for (int j = 0; i + j < k; ++j) t[i + j] += e[i] * z[j];
    e.swap(t);
  }
  for (int i = 1; i < k; ++i) e[i] -= e[i - 1];  // divide by 1 + w
  out.coefficients.resize(k);
  for (int i = 0; i < k; ++i) out.coefficients[i] = e[k - 1 - i] / to_hp(big_int(factorial(static_cast<unsigned>(i))));
  return out;
}

inline hp_real main_term(const main_term_poly& P, const hp_real& x) {
  if (!(x > 0)) return hp_real(0);
  return x * P(log(x));
}

inline hp_real main_term(int k, const hp_real& x, const precision_context& ctx) {
  const main_term_poly P = make_main_term(k, ctx);
  scoped_precision sp(ctx);
  return main_term(P, x);
}

/// [S_k(x+H) - S_k(x)] - [x P(log x)]_{x}^{x+H}.
inline hp_real delta_k(const hp_real& x, const hp_real& H, const divisor_sieve& sieve, const main_term_poly& P) {
  if (P.k != sieve.k) throw std::invalid_argument("delta_k: main term and sieve disagree on k");
  if (H < 0 || x < 0) throw std::domain_error("delta_k: need x >= 0 and H >= 0");
  if (x + H > hp_real(sieve.X)) throw std::out_of_range("delta_k: x + H beyond sieve range");
  const hp_real counted = hp_real(sieve.partial_sum(x + H)) - hp_real(sieve.partial_sum(x));
  return counted - (main_term(P, x + H) - main_term(P, x));
}

inline hp_real delta_k(const hp_real& x, const hp_real& H, const divisor_sieve& sieve, const precision_context& ctx) {
  const main_term_poly P = make_main_term(sieve.k, ctx);
  scoped_precision sp(ctx);
  return delta_k(x, H, sieve, P);
}

struct a_k_result {
  hp_real value;
  hp_real tail_bound;  // absolute error bar from the primes above the limit
  long prime_limit = 0;
};

inline std::vector<long> primes_up_to(long n) {
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  std::vector<long> out;
  for (long p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (long q = p * p; q <= n; q += p) composite[q] = true;
  }
  return out;
}

/// prod_{p <= limit} (1 - 1/p)^{k^2} sum_j C(k+j-1, j)^2 p^{-j}. Each local
/// factor is 1 - k^2(k-1)^2/(4p^2) + O(p^{-3}), so the omitted primes move
/// the product by a relative amount below 2 k^2 (k-1)^2 / (4 limit).
inline a_k_result a_k_constant(int k, long prime_limit, const precision_context& ctx) {
  if (k < 1) throw std::domain_error("a_k_constant: k must be >= 1");
  if (prime_limit < 2) throw std::domain_error("a_k_constant: prime_limit must be >= 2");
  scoped_precision sp(ctx);
  const hp_real eps = pow10(-ctx.working_digits());
  hp_real prod(1);
  for (long p : primes_up_to(prime_limit)) {
    const hp_real x = hp_real(1) / p;
    hp_real sum(1), xp(1);
    for (unsigned j = 1;; ++j) {
      xp *= x;
      const big_int c = binomial(static_cast<unsigned>(k) + j - 1, j);
      const hp_real term = to_hp(big_int(c * c)) * xp;
      sum += term;
      if (term < eps * sum) break;
    }
    prod *= pow(1 - x, k * k) * sum;
  }
  a_k_result out;
  out.value = prod;
  out.prime_limit = prime_limit;
  out.tail_bound = abs(prod) * 2 * hp_real(k) * k * (k - 1) * (k - 1) / (4 * hp_real(prime_limit));
  return out;
}

struct variance_report {
  int k = 0;
  std::uint64_t X = 0;
  big_rational alpha;
  hp_real H;
  bool exhaustive = true;
  std::uint64_t samples = 0;
  hp_real empirical;  // mean of Delta_k(x, H)^2 over the grid in [X, 2X]
  hp_real a_k;
  hp_real gamma_value;  // gamma_k(1 / (1 - alpha))
  hp_real predicted;   // a_k (1-alpha)^{k^2-1} gamma_k(1/(1-alpha)) H (log X)^{k^2-1}
  hp_real ratio;
};

/// Mean square of Delta_k(x, H), H = X^alpha, over x in [X, 2X]: every integer
/// when X <= exhaustive_limit, otherwise `samples` equispaced points.
inline variance_report variance_experiment(int k, std::uint64_t X, const big_rational& alpha, std::uint64_t samples,
                                           const precision_context& ctx, const divisor_sieve* sieve = nullptr,
                                           std::uint64_t exhaustive_limit = 1'000'000, long prime_limit = 100'000) {
  if (k < 2) throw std::domain_error("variance_experiment: k must be >= 2");
  if (!(alpha > 0) || !(alpha < 1 - big_rational(1, k)))
    throw std::domain_error("variance_experiment: alpha must satisfy 0 < alpha < 1 - 1/k");
  scoped_precision sp(ctx);
  variance_report r;
  r.k = k;
  r.X = X;
  r.alpha = alpha;
  r.H = pow(hp_real(X), to_hp(alpha));
  const std::uint64_t need = 2 * X + static_cast<std::uint64_t>(ceil(r.H)) + 1;
  divisor_sieve own;
  if (!sieve) {
    own = sieve_dk(k, need);
    sieve = &own;
  }
  if (sieve->k != k || sieve->X < need) throw std::invalid_argument("variance_experiment: sieve does not cover 2X + H");
  const main_term_poly P = make_main_term(k, ctx);

  r.exhaustive = X <= exhaustive_limit;
  const std::uint64_t count = r.exhaustive ? X + 1 : samples;
  if (count < 2) throw std::domain_error("variance_experiment: need at least two sample points");
  r.samples = count;
  hp_real sum(0);
  for (std::uint64_t i = 0; i < count; ++i) {
    const hp_real x = r.exhaustive ? hp_real(X + i) : hp_real(X) + hp_real(X) * i / (count - 1);
    const hp_real d = delta_k(x, r.H, *sieve, P);
    sum += d * d;
  }
  r.empirical = sum / count;

  r.a_k = a_k_constant(k, prime_limit, ctx).value;
  const gamma_poly_set g = gamma_exact(k);
  const big_rational one_minus = 1 - alpha;
  r.gamma_value = to_hp(g(big_rational(1 / one_minus)));
  const int e = k * k - 1;
  r.predicted = r.a_k * pow(to_hp(one_minus), e) * r.gamma_value * r.H * pow(log(hp_real(X)), e);
  r.ratio = r.empirical / r.predicted;
  return r;
}

}  // namespace gammak
