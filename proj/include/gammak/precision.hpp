#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gammak/errors.hpp"

namespace gammak {

namespace mp = boost::multiprecision;

/// Variable-precision binary floating point (MPFR). Expression templates are
/// disabled so `auto` always yields a value.
using hp_real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

/// Target accuracy plus extra working digits. Every numeric routine takes
/// one of these explicitly and sets its own working precision from it.
struct precision_context {
  int digits = 50;
  int guard = 20;

  precision_context() = default;
  precision_context(int target_digits, int guard_digits = 20)
      : digits(target_digits), guard(guard_digits) {
    if (digits < 10) throw std::invalid_argument("precision_context: digits must be >= 10");
    if (guard < 0) throw std::invalid_argument("precision_context: guard must be >= 0");
  }

  [[nodiscard]] int working_digits() const { return digits + guard; }

  /// Same target, more working digits.
  [[nodiscard]] precision_context boosted(int extra) const {
    return precision_context(digits, guard + extra);
  }
};

/// RAII guard for the default precision of newly created hp_real values.
/// MPFR's default precision in Boost 1.74 is process-global, so numeric
/// code is single-threaded; the exact engine is the parallel one.
class scoped_precision {
 public:
  explicit scoped_precision(int digits10) : saved_(hp_real::default_precision()) {
    hp_real::default_precision(static_cast<unsigned>(std::max(digits10, 10)));
  }
  explicit scoped_precision(const precision_context& ctx) : scoped_precision(ctx.working_digits()) {}
  ~scoped_precision() { hp_real::default_precision(saved_); }
  scoped_precision(const scoped_precision&) = delete;
  scoped_precision& operator=(const scoped_precision&) = delete;

 private:
  unsigned saved_;
};

inline hp_real hp_pi() {
  hp_real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

inline hp_real hp_euler_gamma() {
  hp_real r;
  mpfr_const_euler(r.backend().data(), MPFR_RNDN);
  return r;
}

/// 10^e at the current default precision.
inline hp_real pow10(long e) { return pow(hp_real(10), e); }

/// Decimal rendering with `digits` significant digits, plain notation when
/// the exponent is moderate.
inline std::string to_decimal(const hp_real& x, int digits) {
  if (x == 0) return "0";
  const long e10 = static_cast<long>(floor(log10(abs(x))));
  if (e10 >= -8 && e10 < digits) {
    const int frac = std::max(0, digits - 1 - static_cast<int>(e10));
    return x.str(frac, std::ios_base::fixed);
  }
  return x.str(digits, std::ios_base::scientific);
}

/// Number of decimal digits to which a and b agree, relative to max(|a|,|b|,floor).
inline double agreement_digits(const hp_real& a, const hp_real& b, const hp_real& floor_scale = hp_real(0)) {
  hp_real scale = abs(a);
  if (abs(b) > scale) scale = abs(b);
  if (floor_scale > scale) scale = floor_scale;
  hp_real diff = abs(a - b);
  if (diff == 0) return 1e9;
  if (scale == 0) return 1e9;
  return -static_cast<double>(log10(diff / scale));
}

/// Complex number over hp_real; only the operations the numeric engines use.
struct hp_complex {
  hp_real re;
  hp_real im;

  hp_complex() : re(0), im(0) {}
  hp_complex(hp_real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  hp_complex(hp_real r, hp_real i) : re(std::move(r)), im(std::move(i)) {}
  hp_complex(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

  static hp_complex i() { return {hp_real(0), hp_real(1)}; }

  /// e^{i theta}
  static hp_complex polar_unit(const hp_real& theta) { return {cos(theta), sin(theta)}; }

  hp_complex& operator+=(const hp_complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  hp_complex& operator-=(const hp_complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  hp_complex& operator*=(const hp_complex& o) {
    hp_real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  hp_complex& operator*=(const hp_real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  hp_complex& operator/=(const hp_complex& o) {
    hp_real n = o.re * o.re + o.im * o.im;
    hp_real r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = std::move(r);
    return *this;
  }
  hp_complex& operator/=(const hp_real& s) {
    re /= s;
    im /= s;
    return *this;
  }

  friend hp_complex operator+(hp_complex a, const hp_complex& b) { return a += b; }
  friend hp_complex operator-(hp_complex a, const hp_complex& b) { return a -= b; }
  friend hp_complex operator*(hp_complex a, const hp_complex& b) { return a *= b; }
  friend hp_complex operator*(hp_complex a, const hp_real& s) { return a *= s; }
  friend hp_complex operator*(const hp_real& s, hp_complex a) { return a *= s; }
  friend hp_complex operator/(hp_complex a, const hp_complex& b) { return a /= b; }
  friend hp_complex operator/(hp_complex a, const hp_real& s) { return a /= s; }
  friend hp_complex operator-(const hp_complex& a) { return {-a.re, -a.im}; }

  [[nodiscard]] hp_complex conj() const { return {re, -im}; }
  [[nodiscard]] hp_real norm() const { return re * re + im * im; }
  [[nodiscard]] hp_real abs() const { return sqrt(norm()); }
};

inline hp_real abs(const hp_complex& z) { return z.abs(); }

inline hp_complex exp(const hp_complex& z) {
  hp_real m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

/// Principal branch.
inline hp_complex log(const hp_complex& z) { return {log(z.abs()), atan2(z.im, z.re)}; }

/// i^n for integer n.
inline hp_complex i_pow(long n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {hp_real(1), hp_real(0)};
    case 1: return {hp_real(0), hp_real(1)};
    case 2: return {hp_real(-1), hp_real(0)};
    default: return {hp_real(0), hp_real(-1)};
  }
}

}  // namespace gammak
