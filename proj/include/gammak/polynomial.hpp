#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "gammak/rational.hpp"

namespace gammak {

/// Dense univariate polynomial, coefficients in ascending degree.
/// The zero polynomial has no coefficients; otherwise the leading
/// coefficient is nonzero.
template <class T>
class polynomial {
 public:
  using value_type = T;

  polynomial() = default;
  polynomial(std::initializer_list<T> cs) : c_(cs) { trim(); }
  explicit polynomial(std::vector<T> cs) : c_(std::move(cs)) { trim(); }

  static polynomial monomial(std::size_t n, T coeff = T(1)) {
    std::vector<T> cs(n + 1, T(0));
    cs[n] = std::move(coeff);
    return polynomial(std::move(cs));
  }
  static polynomial constant(T v) { return polynomial(std::vector<T>{std::move(v)}); }

  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] std::span<const T> coefficients() const { return c_; }
  [[nodiscard]] std::size_t size() const { return c_.size(); }

  [[nodiscard]] T operator[](std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }

  /// Lowest power with a nonzero coefficient; -1 for zero.
  [[nodiscard]] int valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) return static_cast<int>(i);
    return -1;
  }

  [[nodiscard]] T operator()(const T& x) const { return eval<T>(x); }

  template <class X>
    requires(!boost::multiprecision::is_number_expression<X>::value && !std::is_same_v<X, T>)
  [[nodiscard]] X operator()(const X& x) const {
    return eval<X>(x);
  }

 private:
  template <class X>
  X eval(const X& x) const {
    X acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

 public:
  [[nodiscard]] polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return polynomial(std::move(d));
  }

  /// Antiderivative vanishing at 0.
  [[nodiscard]] polynomial antiderivative() const {
    if (c_.empty()) return {};
    std::vector<T> a(c_.size() + 1, T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / T(static_cast<long>(i + 1));
    return polynomial(std::move(a));
  }

  /// q(x) = p(x + a), by repeated synthetic division (Horner-Taylor shift).
  [[nodiscard]] polynomial shifted(const T& a) const {
    std::vector<T> b = c_;
    const std::size_t n = b.size();
    if (n == 0 || a == 0) return *this;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) b[j - 1] += a * b[j];
    return polynomial(std::move(b));
  }

  /// q(x) = p(s * x).
  [[nodiscard]] polynomial scaled_argument(const T& s) const {
    std::vector<T> b = c_;
    T pw(1);
    for (auto& v : b) {
      v *= pw;
      pw *= s;
    }
    return polynomial(std::move(b));
  }

  polynomial& operator+=(const polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  polynomial& operator-=(const polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  polynomial& operator*=(const T& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
  }
  /// this += s * o, without a temporary.
  void add_scaled(const polynomial& o, const T& s) {
    if (s == 0 || o.is_zero()) return;
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += s * o.c_[i];
    trim();
  }

  friend polynomial operator+(polynomial a, const polynomial& b) { return a += b; }
  friend polynomial operator-(polynomial a, const polynomial& b) { return a -= b; }
  friend polynomial operator-(polynomial a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend polynomial operator*(polynomial a, const T& s) { return a *= s; }
  friend polynomial operator*(const T& s, polynomial a) { return a *= s; }
  friend polynomial operator*(const polynomial& a, const polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return polynomial(std::move(r));
  }
  friend bool operator==(const polynomial& a, const polynomial& b) { return a.c_ == b.c_; }

  /// Quotient and remainder by a monic-or-not divisor (field coefficients).
  [[nodiscard]] std::pair<polynomial, polynomial> divmod(const polynomial& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial::divmod: division by zero polynomial");
    std::vector<T> r = c_;
    if (degree() < d.degree()) return {polynomial{}, *this};
    std::vector<T> q(r.size() - d.c_.size() + 1, T(0));
    const T& lead = d.c_.back();
    for (std::size_t i = q.size(); i-- > 0;) {
      T f = r[i + d.c_.size() - 1] / lead;
      q[i] = f;
      if (f == 0) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) r[i + j] -= f * d.c_[j];
    }
    return {polynomial(std::move(q)), polynomial(std::move(r))};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<T> c_;
};

using rational_polynomial = polynomial<big_rational>;

/// (x - a)^n with rational a.
inline rational_polynomial power_of_linear(const big_rational& a, unsigned n) {
  std::vector<big_rational> cs(n + 1);
  for (unsigned i = 0; i <= n; ++i) {
    big_rational term(binomial(n, i));
    big_rational pw = ipow(big_rational(-a), n - i);
    cs[i] = term * pw;
  }
  return rational_polynomial(std::move(cs));
}

/// Converts rational coefficients to hp_real at the current default precision.
inline polynomial<hp_real> to_hp(const rational_polynomial& p) {
  std::vector<hp_real> cs;
  cs.reserve(p.size());
  for (const auto& c : p.coefficients()) cs.emplace_back(c);
  return polynomial<hp_real>(std::move(cs));
}

}  // namespace gammak
