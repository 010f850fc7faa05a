#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "gammak/errors.hpp"
#include "gammak/polynomial.hpp"

namespace gammak {

/// Polynomial pieces on consecutive unit intervals [left+i, left+i+1),
/// zero outside. Each piece is stored as a polynomial in the global
/// variable c. Pieces are closed on the left and open on the right.
class piecewise_polynomial {
 public:
  piecewise_polynomial() = default;
  piecewise_polynomial(int left_knot, std::vector<rational_polynomial> pieces)
      : left_(left_knot), pieces_(std::move(pieces)) {
    normalize();
  }

  /// x^e on [0, 1).
  static piecewise_polynomial unit_monomial(unsigned e, big_rational coeff = big_rational(1)) {
    return {0, {rational_polynomial::monomial(e, std::move(coeff))}};
  }

  /// Builds from pieces given in local coordinates s = c - knot.
  static piecewise_polynomial from_local(int left_knot, const std::vector<rational_polynomial>& local) {
    std::vector<rational_polynomial> global;
    global.reserve(local.size());
    for (std::size_t i = 0; i < local.size(); ++i)
      global.push_back(local[i].shifted(big_rational(-(left_knot + static_cast<long>(i)))));
    return {left_knot, std::move(global)};
  }

  [[nodiscard]] std::vector<rational_polynomial> to_local() const {
    std::vector<rational_polynomial> local;
    local.reserve(pieces_.size());
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      local.push_back(pieces_[i].shifted(big_rational(left_ + static_cast<long>(i))));
    return local;
  }

  [[nodiscard]] bool is_zero() const { return pieces_.empty(); }
  [[nodiscard]] int left_knot() const { return left_; }
  [[nodiscard]] int right_knot() const { return left_ + static_cast<int>(pieces_.size()); }
  [[nodiscard]] std::size_t piece_count() const { return pieces_.size(); }
  [[nodiscard]] const std::vector<rational_polynomial>& pieces() const { return pieces_; }
  /// Piece living on [knot, knot+1); zero polynomial outside the support.
  [[nodiscard]] rational_polynomial piece_at(int knot) const {
    const int i = knot - left_;
    if (i < 0 || i >= static_cast<int>(pieces_.size())) return {};
    return pieces_[static_cast<std::size_t>(i)];
  }

  [[nodiscard]] int degree() const {
    int d = -1;
    for (const auto& p : pieces_) d = std::max(d, p.degree());
    return d;
  }

  /// Exact value at c. At an interior knot both neighbouring pieces must
  /// agree; a mismatch means the object is not a continuous piecewise
  /// polynomial and is reported as invariant_error.
  [[nodiscard]] big_rational operator()(const big_rational& c) const {
    if (pieces_.empty()) return 0;
    if (c < left_ || c >= right_knot()) return 0;
    big_int fl = numerator(c) / denominator(c);
    if (c < 0 && big_rational(fl) != c) fl -= 1;  // floor for negatives
    const int idx = static_cast<int>(fl) - left_;
    big_rational v = pieces_[static_cast<std::size_t>(idx)](c);
    if (big_rational(fl) == c && idx > 0) {
      big_rational w = pieces_[static_cast<std::size_t>(idx - 1)](c);
      if (w != v)
        throw invariant_error("piecewise_polynomial: neighbouring pieces disagree at knot " + c.str());
    }
    return v;
  }

  piecewise_polynomial& operator+=(const piecewise_polynomial& o) { return accumulate(o, big_rational(1)); }
  piecewise_polynomial& operator-=(const piecewise_polynomial& o) { return accumulate(o, big_rational(-1)); }
  piecewise_polynomial& accumulate(const piecewise_polynomial& o, const big_rational& s) {
    if (o.is_zero() || s == 0) return *this;
    if (is_zero()) {
      left_ = o.left_;
      pieces_.clear();
    }
    const int lo = std::min(left_, o.left_);
    const int hi = std::max(right_knot(), o.right_knot());
    std::vector<rational_polynomial> merged(static_cast<std::size_t>(hi - lo));
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      merged[static_cast<std::size_t>(left_ - lo) + i] = std::move(pieces_[i]);
    for (std::size_t i = 0; i < o.pieces_.size(); ++i)
      merged[static_cast<std::size_t>(o.left_ - lo) + i].add_scaled(o.pieces_[i], s);
    left_ = lo;
    pieces_ = std::move(merged);
    normalize();
    return *this;
  }
  piecewise_polynomial& operator*=(const big_rational& s) {
    if (s == 0) pieces_.clear();
    for (auto& p : pieces_) p *= s;
    return *this;
  }

  friend piecewise_polynomial operator+(piecewise_polynomial a, const piecewise_polynomial& b) { return a += b; }
  friend piecewise_polynomial operator-(piecewise_polynomial a, const piecewise_polynomial& b) { return a -= b; }
  friend piecewise_polynomial operator*(piecewise_polynomial a, const big_rational& s) { return a *= s; }
  friend bool operator==(const piecewise_polynomial& a, const piecewise_polynomial& b) {
    return a.left_ == b.left_ && a.pieces_ == b.pieces_;
  }

  /// Piecewise derivative (ignores jumps at knots).
  [[nodiscard]] piecewise_polynomial derivative() const {
    std::vector<rational_polynomial> d;
    d.reserve(pieces_.size());
    for (const auto& p : pieces_) d.push_back(p.derivative());
    return {left_, std::move(d)};
  }

 private:
  void normalize() {
    std::size_t first = 0;
    while (first < pieces_.size() && pieces_[first].is_zero()) ++first;
    if (first == pieces_.size()) {
      pieces_.clear();
      left_ = 0;
      return;
    }
    std::size_t last = pieces_.size();
    while (pieces_[last - 1].is_zero()) --last;
    if (first > 0 || last < pieces_.size()) {
      pieces_ = std::vector<rational_polynomial>(std::make_move_iterator(pieces_.begin() + static_cast<long>(first)),
                                                 std::make_move_iterator(pieces_.begin() + static_cast<long>(last)));
      left_ += static_cast<int>(first);
    }
  }

  int left_ = 0;
  std::vector<rational_polynomial> pieces_;
};

namespace detail {

/// Convolution kernels for x^i on [0,1) against y^j on [0,1), in local
/// coordinates of the two output unit intervals:
///   first(s)  = integral_0^s x^i (s-x)^j dx                 for s in [0,1)
///   second(s) = integral_s^1 x^i (1+s-x)^j dx               for s in [0,1), c = 1+s
struct monomial_kernel {
  rational_polynomial first;
  rational_polynomial second;
};

inline monomial_kernel compute_monomial_kernel(unsigned i, unsigned j) {
  monomial_kernel k;
  k.first = rational_polynomial::monomial(i + j + 1, big_rational(factorial(i) * factorial(j), factorial(i + j + 1)));
  // (1+s-x)^j = sum_m C(j,m) (1+s)^{j-m} (-x)^m ; integral_s^1 x^{i+m} dx = (1 - s^{i+m+1})/(i+m+1)
  const rational_polynomial one_plus_s{big_rational(1), big_rational(1)};
  rational_polynomial acc;
  for (unsigned m = 0; m <= j; ++m) {
    big_rational coeff(binomial(j, m), big_int(i + m + 1));
    if (m % 2 == 1) coeff = -coeff;
    rational_polynomial tail = rational_polynomial::constant(big_rational(1)) -
                               rational_polynomial::monomial(i + m + 1);
    rational_polynomial pw = power_of_linear(big_rational(-1), j - m);  // (s+1)^{j-m}
    acc.add_scaled(pw * tail, coeff);
  }
  k.second = std::move(acc);
  return k;
}

inline const monomial_kernel& monomial_kernel_cached(unsigned i, unsigned j) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, monomial_kernel> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({i, j});
  if (it == cache.end()) it = cache.emplace(std::make_pair(i, j), compute_monomial_kernel(i, j)).first;
  return it->second;  // std::map nodes are stable
}

/// Convolution of two single-piece functions phi, psi supported on [0,1),
/// returned as the two local pieces of the result on [0,1) and [1,2).
inline std::pair<rational_polynomial, rational_polynomial> convolve_unit(const rational_polynomial& phi,
                                                                          const rational_polynomial& psi) {
  std::vector<big_rational> a, b;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] == 0) continue;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      if (psi[j] == 0) continue;
      const big_rational w = phi[i] * psi[j];
      const auto& ker = monomial_kernel_cached(static_cast<unsigned>(i), static_cast<unsigned>(j));
      auto accum = [&w](std::vector<big_rational>& dst, const rational_polynomial& src) {
        if (dst.size() < src.size()) dst.resize(src.size(), big_rational(0));
        auto cs = src.coefficients();
        for (std::size_t t = 0; t < cs.size(); ++t)
          if (cs[t] != 0) dst[t] += w * cs[t];
      };
      accum(a, ker.first);
      accum(b, ker.second);
    }
  }
  return {rational_polynomial(std::move(a)), rational_polynomial(std::move(b))};
}

/// Convolution on local piece lists; the result's left knot is the sum of
/// the inputs' left knots.
inline std::vector<rational_polynomial> convolve_local(const std::vector<rational_polynomial>& f,
                                                       const std::vector<rational_polynomial>& g) {
  if (f.empty() || g.empty()) return {};
  std::vector<rational_polynomial> out(f.size() + g.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    if (f[p].is_zero()) continue;
    for (std::size_t q = 0; q < g.size(); ++q) {
      if (g[q].is_zero()) continue;
      auto [lo, hi] = convolve_unit(f[p], g[q]);
      out[p + q] += lo;
      out[p + q + 1] += hi;
    }
  }
  return out;
}

}  // namespace detail

/// Exact (f*g)(c) = integral f(t) g(c-t) dt. Output knots are sums of input
/// knots, so the support is the Minkowski sum of the supports.
inline piecewise_polynomial convolve(const piecewise_polynomial& f, const piecewise_polynomial& g) {
  if (f.is_zero() || g.is_zero()) return {};
  auto local = detail::convolve_local(f.to_local(), g.to_local());
  return piecewise_polynomial::from_local(f.left_knot() + g.left_knot(), local);
}

/// Exact integral over the whole support.
inline big_rational integrate(const piecewise_polynomial& pp) {
  big_rational total = 0;
  for (std::size_t i = 0; i < pp.piece_count(); ++i) {
    const auto anti = pp.pieces()[i].antiderivative();
    const big_rational a(pp.left_knot() + static_cast<long>(i));
    total += anti(a + 1) - anti(a);
  }
  return total;
}

/// Largest n such that the derivatives of orders 0..n of the two pieces
/// meeting at `knot` agree there; -1 when the values already differ.
/// Identical pieces give the common degree bound.
inline int knot_contact_order(const piecewise_polynomial& pp, int knot) {
  rational_polynomial left = pp.piece_at(knot - 1);
  rational_polynomial right = pp.piece_at(knot);
  const big_rational x(knot);
  rational_polynomial diff = (right - left).shifted(x);  // diff(s) at c = knot + s
  if (diff.is_zero()) return std::max(left.degree(), right.degree());
  return diff.valuation() - 1;
}

}  // namespace gammak
