#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gammak/precision.hpp"

namespace gammak {

using big_int = mp::mpz_int;

/// Exact rational, always in lowest terms with positive denominator (GMP mpq
/// canonicalizes after every operation).
using big_rational = mp::mpq_rational;

inline big_rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  return big_rational(big_int(num), big_int(den));
}

template <class T>
T ipow(T base, unsigned n) {
  T r(1);
  while (n) {
    if (n & 1u) r *= base;
    n >>= 1u;
    if (n) base *= base;
  }
  return r;
}

inline big_int factorial(unsigned n) {
  big_int r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline big_int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  big_int r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Barnes G at a positive integer: G(n) = 1! 2! ... (n-2)!, with G(1) = G(2) = 1.
inline big_int barnes_g_int(int n) {
  if (n < 1) throw std::domain_error("barnes_g_int: n must be >= 1");
  big_int r = 1;
  big_int f = 1;
  for (int j = 1; j <= n - 2; ++j) {
    f *= j;
    r *= f;
  }
  return r;
}

/// B_{2n} for n >= 1, from tangent numbers (all integer arithmetic); cached.
inline big_rational bernoulli_b2n(int n) {
  if (n < 1) throw std::domain_error("bernoulli_b2n: n must be >= 1");
  static std::mutex mu;
  static std::vector<big_rational> cache;  // cache[n-1] = B_{2n}
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<std::size_t>(n) > cache.size()) {
    std::size_t m = cache.size() ? cache.size() : 16;
    while (m < static_cast<std::size_t>(n)) m *= 2;
    std::vector<big_int> t(m + 1, 0);
    t[1] = 1;
    for (std::size_t k = 2; k <= m; ++k) t[k] = (k - 1) * t[k - 1];
    for (std::size_t k = 2; k <= m; ++k)
      for (std::size_t j = k; j <= m; ++j) t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j];
    cache.clear();
    for (std::size_t k = 1; k <= m; ++k) {
      const big_int four = ipow(big_int(4), static_cast<unsigned>(k));
      big_rational b(big_int(2 * k) * t[k], big_int(four * (four - 1)));
      if (k % 2 == 0) b = -b;
      cache.push_back(std::move(b));
    }
  }
  return cache[n - 1];
}

/// Parses "p", "p/q" or a finite decimal such as "-1.25" into an exact rational.
inline big_rational parse_rational(std::string_view s) {
  std::string str(s);
  if (str.empty()) throw std::invalid_argument("parse_rational: empty string");
  if (auto slash = str.find('/'); slash != std::string::npos) {
    big_int p(str.substr(0, slash));
    big_int q(str.substr(slash + 1));
    if (q == 0) throw std::domain_error("parse_rational: zero denominator");
    return big_rational(p, q);
  }
  if (auto dot = str.find('.'); dot != std::string::npos) {
    std::string digits = str.substr(0, dot) + str.substr(dot + 1);
    const auto frac_len = str.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("parse_rational: bad decimal");
    if (digits[0] == '+') digits.erase(0, 1);
    big_int p(digits);
    big_int q = pow(big_int(10), static_cast<unsigned>(frac_len));
    return big_rational(p, q);
  }
  if (str[0] == '+') str.erase(0, 1);
  return big_rational(big_int(str));
}

inline std::string to_string(const big_rational& q) { return q.str(); }

/// Exact conversion of a binary float to a rational.
inline big_rational to_rational(const hp_real& x) {
  big_rational r;
  mpfr_get_q(r.backend().data(), x.backend().data());
  return r;
}

inline hp_real to_hp(const big_rational& q) { return hp_real(q); }
inline hp_real to_hp(const big_int& z) { return hp_real(z); }

/// Nearest integer (ties away from zero) and the distance to it.
inline big_int round_to_int(const hp_real& x, hp_real* distance = nullptr) {
  hp_real r = round(x);
  if (distance) *distance = abs(x - r);
  big_int z;
  mpfr_get_z(z.backend().data(), r.backend().data(), MPFR_RNDN);
  return z;
}

}  // namespace gammak
