#pragma once

// D_k(t) = det( g^{(i+j)}(t) )_{0<=i,j<k} with g(t) = integral_0^1 exp(-t x) dx,
// its t-derivatives, H_k(t) = t D_k'/D_k + k^2, and the Painleve V / Toda checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gammak/errors.hpp"
#include "gammak/linalg.hpp"
#include "gammak/precision.hpp"
#include "gammak/rational.hpp"

namespace gammak {

namespace detail {

inline double approx_abs(const hp_real& t) { return std::fabs(static_cast<double>(t)); }
inline double approx_abs(const hp_complex& t) { return static_cast<double>(t.abs()); }

/// Working digits for D_k at t: Hankel moment matrices are Hilbert-like, so
/// k^2 extra digits cover the elimination, |t|/ln10 the series cancellation.
template <class T>
int hankel_working_digits(int k, const T& t, const precision_context& ctx) {
  return ctx.working_digits() + 2 * k * k + static_cast<int>(approx_abs(t) / 2.302585) + 5;
}

/// g^{(n)}(t) for n = 0..nmax at the current default precision.
template <class T>
std::vector<T> g_derivs(int nmax, const T& t) {
  std::vector<T> out(static_cast<std::size_t>(nmax + 1));
  const double at = approx_abs(t);
  if (at <= 30.0) {
    // (-1)^n sum_m (-t)^m / (m! (n+m+1))
    const hp_real eps = pow10(-static_cast<long>(hp_real::default_precision()) - 5);
    std::vector<T> terms;
    T term(1);
    const T minus_t = -t;
    for (int m = 0;; ++m) {
      terms.push_back(term);
      if (m > at && magnitude(term) < eps) break;
      term = term * minus_t / hp_real(m + 1);
    }
    for (int n = 0; n <= nmax; ++n) {
      T s(0);
      for (std::size_t m = 0; m < terms.size(); ++m) s += terms[m] / hp_real(static_cast<long>(n + m + 1));
      out[static_cast<std::size_t>(n)] = (n % 2 == 0) ? s : -s;
    }
    return out;
  }
  // I_n = integral_0^1 x^n e^{-tx} dx = (n I_{n-1} - e^{-t}) / t
  const T e = exp(-t);
  T in = (T(1) - e) / t;
  out[0] = in;
  for (int n = 1; n <= nmax; ++n) {
    in = (in * hp_real(n) - e) / t;
    out[static_cast<std::size_t>(n)] = (n % 2 == 0) ? in : -in;
  }
  return out;
}

template <class T>
T det_from_table(const std::vector<int>& offsets, const std::vector<T>& g) {
  const std::size_t k = offsets.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (offsets[a] == offsets[b]) return T(0);
  dense_matrix<T> m(k, std::vector<T>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m[i][j] = g[static_cast<std::size_t>(offsets[i]) + j];
  return determinant(std::move(m));
}

inline void for_each_composition(int total, int parts, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> c(static_cast<std::size_t>(parts), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      c[static_cast<std::size_t>(i)] = left;
      fn(c);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[static_cast<std::size_t>(i)] = v;
      rec(i + 1, left - v);
    }
  };
  if (parts > 0) rec(0, total);
}

/// D_k^{(order)} from a g-table: sum over ways of distributing `order` row
/// differentiations, each adding one to that row's offset.
template <class T>
T dk_deriv_from_table(int k, int order, const std::vector<T>& g) {
  if (k == 0) return order == 0 ? T(1) : T(0);
  T total(0);
  for_each_composition(order, k, [&](const std::vector<int>& add) {
    std::vector<int> off(static_cast<std::size_t>(k));
    big_int multinom = factorial(static_cast<unsigned>(order));
    for (int i = 0; i < k; ++i) {
      off[static_cast<std::size_t>(i)] = i + add[static_cast<std::size_t>(i)];
      multinom /= factorial(static_cast<unsigned>(add[static_cast<std::size_t>(i)]));
    }
    T d = det_from_table(off, g);
    if (!(magnitude(d) == 0)) total += d * hp_real(multinom);
  });
  return total;
}

}  // namespace detail

inline hp_real g_deriv(int n, const hp_real& t, const precision_context& ctx) {
  if (n < 0) throw std::domain_error("g_deriv: n must be >= 0");
  scoped_precision sp(ctx.working_digits() + static_cast<int>(detail::approx_abs(t) / 2.302585) + 5);
  return detail::g_derivs(n, t)[static_cast<std::size_t>(n)];
}

inline hp_complex g_deriv(int n, const hp_complex& t, const precision_context& ctx) {
  if (n < 0) throw std::domain_error("g_deriv: n must be >= 0");
  scoped_precision sp(ctx.working_digits() + static_cast<int>(detail::approx_abs(t) / 2.302585) + 5);
  return detail::g_derivs(n, t)[static_cast<std::size_t>(n)];
}

/// Determinant with entry (i, j) = g^{(offsets_i + j)}(t); exact zero when
/// two offsets coincide.
template <class T>
T det_row_offsets(const std::vector<int>& offsets, const T& t, const precision_context& ctx) {
  const int k = static_cast<int>(offsets.size());
  if (k > 12) throw std::domain_error("det_row_offsets: k must be <= 12");
  for (int o : offsets)
    if (o < 0) throw std::domain_error("det_row_offsets: offsets must be nonnegative");
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (offsets[static_cast<std::size_t>(a)] == offsets[static_cast<std::size_t>(b)]) return T(0);
  scoped_precision sp(detail::hankel_working_digits(k, t, ctx));
  const int top = k == 0 ? 0 : *std::max_element(offsets.begin(), offsets.end()) + k - 1;
  return detail::det_from_table(offsets, detail::g_derivs(top, t));
}

template <class T>
T dk_deriv(int k, const T& t, int order, const precision_context& ctx) {
  if (k < 0 || k > 10) throw std::domain_error("dk_deriv: k must lie in 0..10");
  if (order < 0 || order > 3) throw std::domain_error("dk_deriv: order must lie in 0..3");
  scoped_precision sp(detail::hankel_working_digits(k, t, ctx));
  return detail::dk_deriv_from_table(k, order, detail::g_derivs(std::max(0, 2 * k - 2 + order), t));
}

template <class T>
T dk_eval(int k, const T& t, const precision_context& ctx) {
  return dk_deriv(k, t, 0, ctx);
}

/// Central finite-difference derivative of dk_eval with step 10^{-digits/3},
/// evaluated at doubled working precision.
inline hp_real dk_deriv_fd(int k, const hp_real& t, int order, const precision_context& ctx) {
  if (order < 1 || order > 3) throw std::domain_error("dk_deriv_fd: order must lie in 1..3");
  const precision_context hi(ctx.digits, ctx.guard + detail::hankel_working_digits(k, t, ctx));
  scoped_precision sp(detail::hankel_working_digits(k, t, hi));
  const hp_real h = pow10(-ctx.digits / 3);
  auto f = [&](int m) { return dk_eval(k, hp_real(t + h * m), hi); };
  switch (order) {
    case 1: return (f(1) - f(-1)) / (2 * h);
    case 2: return (f(1) - 2 * f(0) + f(-1)) / (h * h);
    default: return (f(2) - 2 * f(1) + 2 * f(-1) - f(-2)) / (2 * h * h * h);
  }
}

/// H_k and its first two derivatives together with the D_k values used.
struct hk_values {
  hp_real d0, d1, d2, d3;
  hp_real h0, h1, h2;
};

inline hk_values hk_all(int k, const hp_real& t, const precision_context& ctx) {
  if (k < 1 || k > 10) throw std::domain_error("hk: k must lie in 1..10");
  scoped_precision sp(detail::hankel_working_digits(k, t, ctx));
  const auto g = detail::g_derivs(2 * k + 1, t);
  hk_values v;
  v.d0 = detail::dk_deriv_from_table(k, 0, g);
  v.d1 = detail::dk_deriv_from_table(k, 1, g);
  v.d2 = detail::dk_deriv_from_table(k, 2, g);
  v.d3 = detail::dk_deriv_from_table(k, 3, g);
  const auto g0 = detail::g_derivs(2 * k - 2, hp_real(0));
  const hp_real at_zero = detail::dk_deriv_from_table(k, 0, g0);
  if (abs(v.d0) < pow10(-ctx.digits / 2) * abs(at_zero))
    throw precision_error("hk: |D_k(t)| below 10^{-digits/2} |D_k(0)| at t = " + to_decimal(t, 10));
  const hp_real L = v.d1 / v.d0;
  const hp_real L1 = v.d2 / v.d0 - L * L;
  const hp_real L2 = v.d3 / v.d0 - 3 * v.d2 * v.d1 / (v.d0 * v.d0) + 2 * L * L * L;
  v.h0 = t * L + k * k;
  v.h1 = L + t * L1;
  v.h2 = 2 * L1 + t * L2;
  return v;
}

inline hp_real hk_eval(int k, const hp_real& t, const precision_context& ctx) { return hk_all(k, t, ctx).h0; }

inline hp_real hk_deriv(int k, const hp_real& t, int order, const precision_context& ctx) {
  if (order < 0 || order > 2) throw std::domain_error("hk_deriv: order must lie in 0..2");
  const auto v = hk_all(k, t, ctx);
  return order == 0 ? v.h0 : order == 1 ? v.h1 : v.h2;
}

/// Two sides of an identity with the scaled-residual convention
/// |lhs - rhs| <= tol * max(|lhs|, |rhs|, 1).
struct identity_sides {
  hp_real lhs;
  hp_real rhs;
  [[nodiscard]] hp_real residual() const { return lhs - rhs; }
  [[nodiscard]] hp_real scale() const {
    hp_real s(1);
    if (abs(lhs) > s) s = abs(lhs);
    if (abs(rhs) > s) s = abs(rhs);
    return s;
  }
  [[nodiscard]] hp_real scaled_residual() const { return abs(residual()) / scale(); }
};

/// (t H'')^2 versus (H + (2k - t) H')^2 - 4 H'^2 (k^2 - H + t H').
inline identity_sides painleve_sides(int k, const hp_real& t, const precision_context& ctx) {
  const auto v = hk_all(k, t, ctx);
  scoped_precision sp(detail::hankel_working_digits(k, t, ctx));
  identity_sides s;
  const hp_real th2 = t * v.h2;
  s.lhs = th2 * th2;
  const hp_real a = v.h0 + (2 * k - t) * v.h1;
  s.rhs = a * a - 4 * v.h1 * v.h1 * (k * k - v.h0 + t * v.h1);
  return s;
}

inline hp_real painleve_residual(int k, const hp_real& t, const precision_context& ctx) {
  return painleve_sides(k, t, ctx).residual();
}

/// D_{k-1} D_{k+1} / D_k^2 versus D_k''/D_k - (D_k'/D_k)^2.
inline identity_sides toda_sides(int k, const hp_real& t, const precision_context& ctx) {
  if (k < 1 || k > 9) throw std::domain_error("toda: k must lie in 1..9");
  scoped_precision sp(detail::hankel_working_digits(k + 1, t, ctx));
  const auto g = detail::g_derivs(2 * k + 2, t);
  const hp_real dm = detail::dk_deriv_from_table(k - 1, 0, g);
  const hp_real d0 = detail::dk_deriv_from_table(k, 0, g);
  const hp_real dp = detail::dk_deriv_from_table(k + 1, 0, g);
  const hp_real d1 = detail::dk_deriv_from_table(k, 1, g);
  const hp_real d2 = detail::dk_deriv_from_table(k, 2, g);
  const hp_real at_zero = detail::dk_deriv_from_table(k, 0, detail::g_derivs(2 * k, hp_real(0)));
  if (abs(d0) < pow10(-ctx.digits / 2) * abs(at_zero))
    throw precision_error("toda: |D_k(t)| below 10^{-digits/2} |D_k(0)| at t = " + to_decimal(t, 10));
  identity_sides s;
  s.lhs = dm * dp / (d0 * d0);
  const hp_real L = d1 / d0;
  s.rhs = d2 / d0 - L * L;
  return s;
}

inline hp_real toda_residual(int k, const hp_real& t, const precision_context& ctx) {
  return toda_sides(k, t, ctx).residual();
}

}  // namespace gammak
