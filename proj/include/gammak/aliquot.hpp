#pragma once

// The integrals I(d) = integral over R of (J_1(2 pi y) / (2y))^d dy, their
// continued fractions, and the GL_2 local factors of the aliquot constant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gammak/errors.hpp"
#include "gammak/precision.hpp"
#include "gammak/quadrature.hpp"
#include "gammak/rational.hpp"

namespace gammak {

namespace detail {

inline int bessel_guard_digits(const hp_real& x) {
  return static_cast<int>(std::ceil(static_cast<double>(abs(x)) / std::log(10.0))) + 5;
}

/// J_1(x)/x by its Maclaurin series at the current precision.
inline hp_real j1_over_x_series(const hp_real& x_in) {
  const hp_real x(x_in, hp_real::default_precision());
  const hp_real q = -(x * x) / 4;
  const hp_real eps = pow10(-static_cast<long>(hp_real::default_precision()) - 2);
  hp_real term = hp_real(1) / 2;
  hp_real sum = term;
  for (int k = 1;; ++k) {
    term *= q / (k * (k + 1));
    sum += term;
    if (abs(term) < eps * abs(sum) && 2 * k > abs(x)) break;
  }
  return sum;
}

}  // namespace detail

/// J_1(y) to ctx digits. The series is summed with |y|/ln 10 extra digits to
/// absorb its cancellation.
inline hp_real bessel_j1(const hp_real& y, const precision_context& ctx) {
  hp_real out;
  {
    scoped_precision sp(ctx.working_digits() + detail::bessel_guard_digits(y));
    out = hp_real(y, hp_real::default_precision()) * detail::j1_over_x_series(y);
  }
  out.precision(ctx.working_digits());
  return out;
}

/// sqrt(2/(pi y)) cos(y - 3 pi/4), the leading large-y behaviour of J_1.
inline hp_real bessel_j1_cosine_form(const hp_real& y, const precision_context& ctx) {
  scoped_precision sp(ctx);
  const hp_real pi = hp_pi();
  return sqrt(2 / (pi * y)) * cos(y - 3 * pi / 4);
}

/// (J_1(2 pi y) / (2y))^d, with the value (pi/2)^d at y = 0.
inline hp_real semicircle_ft_power(const hp_real& y, int d, const precision_context& ctx) {
  hp_real out;
  {
    const hp_real x0 = 2 * hp_pi() * y;
    scoped_precision sp(ctx.working_digits() + detail::bessel_guard_digits(x0));
    const hp_real pi = hp_pi();
    const hp_real x = 2 * pi * y;
    out = pow(pi * detail::j1_over_x_series(x), d);
  }
  out.precision(ctx.working_digits());
  return out;
}

struct bessel_term_bound {
  long n = 0;
  hp_real bound;  // (2 pi)^{-d} (n/d)^{-3d/2}
};

inline bessel_term_bound bessel_term_envelope(int d, long n, const precision_context& ctx) {
  if (d < 1 || n < 1) throw std::domain_error("bessel_term_envelope: need d >= 1 and n >= 1");
  scoped_precision sp(ctx);
  return {n, pow(2 * hp_pi(), -d) * pow(hp_real(n) / d, -hp_real(3 * d) / 2)};
}

namespace detail {

/// Large-x expansion (J_1(x) pi / x)^d ~ sum_j sum_m coef[j][m] e^{i(2j-d)x} x^{-3d/2-m},
/// from the Hankel expansion of J_1 truncated where its terms drop below eps at x_min.
struct bessel_power_asymptotic {
  int d = 0;
  std::vector<std::vector<hp_complex>> coef;

  [[nodiscard]] int max_order() const { return coef.empty() ? -1 : static_cast<int>(coef[0].size()) - 1; }
};

inline std::vector<hp_complex> truncated_product(const std::vector<hp_complex>& a, const std::vector<hp_complex>& b) {
  const std::size_t n = a.size();
  std::vector<hp_complex> c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline bessel_power_asymptotic make_bessel_power_asymptotic(int d, const hp_real& x_min, const hp_real& eps) {
  std::vector<hp_real> a{hp_real(1)};
  hp_real mag(1);
  for (int k = 1;; ++k) {
    hp_real next = a.back() * (4 - hp_real(2 * k - 1) * (2 * k - 1)) / (8 * k);
    hp_real next_mag = abs(next) / pow(x_min, k);
    if (next_mag > mag) throw precision_error("Bessel asymptotic expansion cannot reach the requested accuracy");
    a.push_back(std::move(next));
    mag = std::move(next_mag);
    if (mag < eps) break;
  }
  const std::size_t len = a.size();
  std::vector<hp_complex> s(len);
  for (std::size_t k = 0; k < len; ++k) s[k] = i_pow(static_cast<long>(k)) * a[k];

  std::vector<std::vector<hp_complex>> powers{std::vector<hp_complex>(len)};
  powers[0][0] = hp_complex(1);
  for (int j = 1; j <= d; ++j) powers.push_back(truncated_product(powers.back(), s));

  const hp_real pi = hp_pi();
  const hp_real pref = pow(pi, d) * pow(2 / pi, hp_real(d) / 2) / pow(hp_real(2), d);
  bessel_power_asymptotic out;
  out.d = d;
  for (int j = 0; j <= d; ++j) {
    std::vector<hp_complex> conj_part(len);
    for (std::size_t m = 0; m < len; ++m) conj_part[m] = powers[d - j][m].conj();
    std::vector<hp_complex> pj = truncated_product(powers[j], conj_part);
    const hp_complex phase = hp_complex::polar_unit(-hp_real(2 * j - d) * 3 * pi / 4);
    const hp_real scale = pref * hp_real(binomial(static_cast<unsigned>(d), static_cast<unsigned>(j)));
    for (auto& c : pj) c = c * phase * scale;
    out.coef.push_back(std::move(pj));
  }
  return out;
}

/// sum_{l >= 0} (b + l p)^{-s} by Euler-Maclaurin; b must be large against s.
inline hp_real progression_zeta(const hp_real& s, const hp_real& b, long p, const hp_real& eps) {
  const hp_real lead = pow(b, -s);
  hp_real sum = lead * b / (p * (s - 1)) + lead / 2;
  hp_real poch = s;   // (s)_{2j-1}
  hp_real bp = lead * p / b;  // p^{2j-1} b^{-s-2j+1}
  hp_real prev(-1);
  for (int j = 1;; ++j) {
    const hp_real term = to_hp(bernoulli_b2n(j)) / to_hp(big_rational(factorial(static_cast<unsigned>(2 * j)))) * poch * bp;
    sum += term;
    if (abs(term) < eps * abs(sum)) break;
    if (prev >= 0 && abs(term) > prev) throw precision_error("progression_zeta: Euler-Maclaurin terms diverge");
    prev = abs(term);
    poch *= (s + 2 * j - 1) * (s + 2 * j);
    bp *= hp_real(p) * p / (b * b);
  }
  return sum;
}

}  // namespace detail

/// Riemann sum (1/p) sum_{n in Z} f(n/p) of f(y) = (J_1(2 pi y)/(2y))^d. The
/// support of the d-fold semicircle convolution has half-width d, so every
/// p >= d gives I(d) exactly. Terms with 2 pi n/p below X0 use the series; the
/// rest come from the Hankel expansion summed per residue class mod p.
inline hp_real i_d_riemann(int d, long p, const precision_context& ctx) {
  if (d < 1) throw std::domain_error("i_d: d must be >= 1");
  if (p < d) throw std::domain_error("i_d_riemann: spacing 1/p must satisfy p >= d");
  const int wd = ctx.working_digits();
  scoped_precision sp(wd);
  const hp_real pi = hp_pi();
  const hp_real eps = pow10(-(wd + 5));
  const double x0 = std::max(60.0, 1.2 * (wd + 10));
  const long n_split = static_cast<long>(std::ceil(static_cast<double>(p) * x0 / (2 * M_PI)));

  hp_real direct(0);
  for (long n = 1; n < n_split; ++n) direct += semicircle_ft_power(hp_real(n) / p, d, ctx);

  const auto asym = detail::make_bessel_power_asymptotic(d, 2 * pi * n_split / p, eps);
  const int mmax = asym.max_order();
  const double s_max = 1.5 * d + mmax;
  const long a2 = static_cast<long>(std::ceil(3 * (s_max + wd * std::log(10.0)) / (2 * M_PI)));
  const long n_far = std::max(n_split, p * a2);

  // tot[r][m] = sum_{n >= n_split, n = r mod p} n^{-(3d/2 + m)}
  std::vector<std::vector<hp_real>> tot(p, std::vector<hp_real>(mmax + 1, hp_real(0)));
  for (long n = n_split; n < n_far; ++n) {
    hp_real v = pow(sqrt(hp_real(n)), -3 * d);
    auto& row = tot[n % p];
    for (int m = 0; m <= mmax; ++m) {
      row[m] += v;
      v /= n;
    }
  }
  for (long r = 0; r < p; ++r) {
    const long b = n_far + ((r - n_far % p) % p + p) % p;
    for (int m = 0; m <= mmax; ++m)
      tot[r][m] += detail::progression_zeta(hp_real(3 * d) / 2 + m, hp_real(b), p, eps);
  }

  hp_complex tail;
  const hp_real step = 2 * pi / p;
  for (int j = 0; j <= d; ++j) {
    const long q = 2L * j - d;
    std::vector<hp_complex> roots(p);
    for (long r = 0; r < p; ++r) roots[r] = hp_complex::polar_unit(step * static_cast<hp_real>((q * r) % p));
    hp_real scale = pow(step, -hp_real(3 * d) / 2);
    for (int m = 0; m <= mmax; ++m) {
      hp_complex z;
      for (long r = 0; r < p; ++r) z += roots[r] * tot[r][m];
      tail += asym.coef[j][m] * z * scale;
      scale /= step;
    }
  }
  return (pow(pi / 2, d) + 2 * (direct + tail.re)) / p;
}

/// I(d) from the Riemann sum with spacing 1/d.
inline hp_real i_d_poisson(int d, const precision_context& ctx) { return i_d_riemann(d, d, ctx); }

namespace detail {

inline int gl_nodes_for_half_phase(int wd) {
  const double target = (wd + 5) * std::log(10.0);
  for (int n = 8;; ++n)
    if (-2.0 * n * std::log(M_PI * M_E / (4.0 * n)) > target) return n;
}

}  // namespace detail

/// I(d) by Gauss-Legendre panels of width 1/(2d) on [0, Y] plus the tail
/// beyond Y integrated term by term from the Hankel expansion.
inline hp_real i_d_quadrature(int d, const precision_context& ctx) {
  if (d < 1) throw std::domain_error("i_d: d must be >= 1");
  const int wd = ctx.working_digits();
  scoped_precision sp(wd);
  const hp_real pi = hp_pi();
  const hp_real eps = pow10(-(wd + 5));
  const long y_max = static_cast<long>(std::ceil(2.3 * (wd + 10) / (2 * M_PI)));
  const int nodes = detail::gl_nodes_for_half_phase(wd);
  const hp_real head =
      integrate_panels([&](const hp_real& y) { return semicircle_ft_power(y, d, ctx); }, hp_real(0), hp_real(y_max),
                       2L * d * y_max, nodes);

  const hp_real xx = 2 * pi * y_max;
  const auto asym = detail::make_bessel_power_asymptotic(d, xx, eps);
  hp_complex tail;
  for (int j = 0; j <= d; ++j) {
    const long q = 2L * j - d;
    for (int m = 0; m <= asym.max_order(); ++m) {
      const hp_real s = hp_real(3 * d) / 2 + m;
      hp_complex integral;
      if (q == 0) {
        integral = hp_complex(pow(xx, 1 - s) / (s - 1));
      } else {
        // integral_X^inf e^{iqx} x^{-s} dx = -e^{iqX} sum_k (s)_k X^{-s-k} / (iq)^{k+1}
        const hp_complex iq(hp_real(0), hp_real(q));
        hp_complex term = -(hp_complex(pow(xx, -s)) / iq);
        hp_complex sum = term;
        hp_real prev = abs(term);
        for (int k = 0; abs(term) * abs(asym.coef[j][m]) > eps; ++k) {
          term = term * ((s + k) / xx) / iq;
          const hp_real mag = abs(term);
          if (mag > prev) throw precision_error("i_d_quadrature: tail expansion diverges before reaching tolerance");
          prev = mag;
          sum += term;
        }
        integral = sum * hp_complex::polar_unit(q * xx);
      }
      tail += asym.coef[j][m] * integral;
    }
  }
  return 2 * (head + tail.re / (2 * pi));
}

/// (pi/2)^{d-1/2} d^{-1/2} times the first `terms` terms of
/// 1 - 1/(8d) - 5/(384d^2) + 7/(3072d^3) + 3829/(491520d^4).
inline hp_real i_d_asymptotic(int d, int terms, const precision_context& ctx) {
  if (d < 3) throw std::domain_error("i_d_asymptotic: d must be >= 3");
  if (terms < 1 || terms > 5) throw std::domain_error("i_d_asymptotic: terms must be in 1..5");
  scoped_precision sp(ctx);
  static const long num[] = {1, -1, -5, 7, 3829};
  static const long den[] = {1, 8, 384, 3072, 491520};
  hp_real series(0);
  for (int i = 0; i < terms; ++i) series += hp_real(num[i]) / (den[i] * pow(hp_real(d), i));
  const hp_real pi = hp_pi();
  return pow(pi / 2, hp_real(d) - hp_real(1) / 2) / sqrt(hp_real(d)) * series;
}

struct convergent_list {
  std::vector<big_int> partial_quotients;
  std::vector<std::pair<big_int, big_int>> convergents;  // (A_n, B_n), n from 0
  int reliable_count = 0;  // convergents with B_n^2 <= 10^digits
};

/// Partial quotients of the exact binary value of x, continued `extra`
/// convergents past the reliability cutoff.
inline convergent_list continued_fraction(const hp_real& x, const precision_context& ctx, int extra = 2) {
  if (!(x > 0)) throw std::domain_error("continued_fraction: x must be positive");
  const big_int limit = ipow(big_int(10), static_cast<unsigned>(ctx.digits));
  big_rational rest = to_rational(x);
  big_int a_prev(1), a_prev2(0), b_prev(0), b_prev2(1);
  convergent_list out;
  int beyond = 0;
  while (true) {
    const big_int num = numerator(rest);
    const big_int den = denominator(rest);
    big_int q = num / den;
    big_int a = q * a_prev + a_prev2;
    big_int b = q * b_prev + b_prev2;
    if (b * b <= limit && beyond == 0) {
      ++out.reliable_count;
    } else {
      ++beyond;
    }
    if (beyond > extra) break;
    out.partial_quotients.push_back(q);
    out.convergents.emplace_back(a, b);
    a_prev2 = std::move(a_prev);
    a_prev = std::move(a);
    b_prev2 = std::move(b_prev);
    b_prev = std::move(b);
    const big_int r = num - q * den;
    if (r == 0) break;
    rest = big_rational(den, r);
  }
  return out;
}

/// Smallest denominator any rational closer to x than the last reliable
/// convergent can have (exclusive bound): B_n of that convergent.
inline big_int rational_denominator_bound(const convergent_list& cf) {
  if (cf.reliable_count == 0) return 0;
  return cf.convergents[cf.reliable_count - 1].second;
}

inline bool is_small_prime(int n) {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

/// |GL_2(Z/ell)| = (ell^2 - 1)(ell^2 - ell).
inline big_int gl2_order(int ell) {
  const long l = ell;
  return big_int((l * l - 1) * (l * l - l));
}

namespace detail {

/// (det, trace) of every invertible 2x2 matrix over F_ell.
inline std::vector<std::pair<int, int>> gl2_det_trace(int ell) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < ell; ++a)
    for (int b = 0; b < ell; ++b)
      for (int c = 0; c < ell; ++c)
        for (int e = 0; e < ell; ++e) {
          const int det = ((a * e - b * c) % ell + ell) % ell;
          if (det != 0) out.emplace_back(det, (a + e) % ell);
        }
  return out;
}

inline void check_gl2_args(int ell, int d) {
  if (!is_small_prime(ell)) throw std::domain_error("gl2: ell must be prime");
  if (d < 1) throw std::domain_error("gl2: d must be >= 1");
  double work = 1;
  for (int i = 0; i < d; ++i) work *= std::pow(static_cast<double>(ell), 4);
  if (work > 1e9) throw std::domain_error("gl2: enumeration of ell^(4d) tuples exceeds the 10^9 guard");
}

}  // namespace detail

/// Number of cyclic tuples (s_1..s_d) in GL_2(Z/ell)^d with
/// det s_j + 1 - tr s_j = det s_{j+1} (mod ell), s_{d+1} = s_1, by enumeration.
inline std::uint64_t gl2_valid_tuples(int ell, int d) {
  detail::check_gl2_args(ell, d);
  const auto mats = detail::gl2_det_trace(ell);
  std::uint64_t count = 0;
  std::vector<std::size_t> idx(d, 0);
  // depth-first over positions; position i is admissible once it links to i-1
  auto next_det = [ell](const std::pair<int, int>& m) { return ((m.first + 1 - m.second) % ell + ell) % ell; };
  std::vector<int> need(d, -1);
  int pos = 0;
  idx[0] = 0;
  while (pos >= 0) {
    if (idx[pos] == mats.size()) {
      --pos;
      if (pos >= 0) ++idx[pos];
      continue;
    }
    const auto& m = mats[idx[pos]];
    if (pos > 0 && m.first != need[pos]) {
      ++idx[pos];
      continue;
    }
    if (pos == d - 1) {
      if (next_det(m) == mats[idx[0]].first) ++count;
      ++idx[pos];
      continue;
    }
    need[pos + 1] = next_det(m);
    ++pos;
    idx[pos] = 0;
  }
  return count;
}

/// Same count as trace(A^d) for the (det, trace) transfer matrix.
inline big_int gl2_valid_tuples_transfer(int ell, int d) {
  detail::check_gl2_args(ell, d);
  const int states = ell * ell;
  std::vector<big_int> weight(states, 0);
  for (const auto& [det, tr] : detail::gl2_det_trace(ell)) weight[det * ell + tr] += 1;
  std::vector<std::vector<big_int>> a(states, std::vector<big_int>(states, 0));
  for (int s = 0; s < states; ++s)
    for (int t = 0; t < states; ++t)
      if (((s / ell + 1 - s % ell) % ell + ell) % ell == t / ell) a[s][t] = weight[t];
  std::vector<std::vector<big_int>> pw = a;
  for (int step = 1; step < d; ++step) {
    std::vector<std::vector<big_int>> next(states, std::vector<big_int>(states, 0));
    for (int i = 0; i < states; ++i)
      for (int k = 0; k < states; ++k) {
        if (pw[i][k] == 0) continue;
        for (int j = 0; j < states; ++j) next[i][j] += pw[i][k] * a[k][j];
      }
    pw = std::move(next);
  }
  big_int tr = 0;
  for (int i = 0; i < states; ++i) tr += pw[i][i];
  return tr;
}

/// ell^d #{valid tuples} / |GL_2(Z/ell)|^d.
inline big_rational gl2_local_factor(int ell, int d) {
  const big_int count(gl2_valid_tuples(ell, d));
  return big_rational(ipow(big_int(ell), static_cast<unsigned>(d)) * count,
                      ipow(gl2_order(ell), static_cast<unsigned>(d)));
}

struct local_factor_entry {
  int ell = 0;
  big_rational factor;
};

struct aliquot_constant {
  int d = 0;
  hp_real i_d;
  hp_real value;  // (2/pi)^d I(d) prod factors
  std::vector<local_factor_entry> factors;
};

inline aliquot_constant c_aliquot_truncated(int d, int ell_max, const precision_context& ctx) {
  aliquot_constant out;
  out.d = d;
  big_rational prod(1);
  for (int ell = 2; ell <= ell_max; ++ell) {
    if (!is_small_prime(ell)) continue;
    big_rational f = gl2_local_factor(ell, d);
    prod *= f;
    out.factors.push_back({ell, std::move(f)});
  }
  out.i_d = i_d_poisson(d, ctx);
  scoped_precision sp(ctx);
  out.value = pow(2 / hp_pi(), d) * out.i_d * to_hp(prod);
  return out;
}

}  // namespace gammak
