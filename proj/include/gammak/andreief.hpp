#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gammak/polynomial.hpp"

namespace gammak {

struct andreief_sides {
  big_rational lhs;  // (1/N!) * integral over [0,1]^N of prod r(t_j) det(t_j^{a_i}) det(t_j^{b_i})
  big_rational rhs;  // det( integral_0^1 r(t) t^{a_i + b_j} dt )
  [[nodiscard]] bool equal() const { return lhs == rhs; }
};

namespace detail {

using multi_poly = std::map<std::vector<unsigned>, big_rational>;

inline multi_poly multiply(const multi_poly& a, const multi_poly& b) {
  multi_poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<unsigned> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

/// det(t_j^{deg_i}) as a polynomial in t_1..t_N.
inline multi_poly vandermonde_like(const std::vector<unsigned>& degs) {
  const std::size_t n = degs.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  multi_poly out;
  do {
    int inv = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inv;
    std::vector<unsigned> e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = degs[perm[j]];
    out[e] += big_rational(inv % 2 == 0 ? 1 : -1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline big_rational det_rational(std::vector<std::vector<big_rational>> a) {
  const std::size_t n = a.size();
  big_rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return big_rational(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      big_rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

}  // namespace detail

/// Both sides of the Andreief identity for monomial families on [0,1],
/// each computed by exact expansion.
inline andreief_sides andreief_evaluate(const std::vector<unsigned>& a_degrees, const std::vector<unsigned>& b_degrees,
                                        const rational_polynomial& r) {
  const std::size_t n = a_degrees.size();
  if (n < 1 || n != b_degrees.size()) throw std::invalid_argument("andreief: degree lists must have equal nonzero length");

  detail::multi_poly integrand = detail::multiply(detail::vandermonde_like(a_degrees), detail::vandermonde_like(b_degrees));
  for (std::size_t j = 0; j < n && !integrand.empty(); ++j) {
    detail::multi_poly rj;
    for (std::size_t p = 0; p < r.size(); ++p) {
      if (r[p] == 0) continue;
      std::vector<unsigned> e(n, 0);
      e[j] = static_cast<unsigned>(p);
      rj[e] = r[p];
    }
    integrand = detail::multiply(integrand, rj);
  }
  big_rational lhs(0);
  for (const auto& [e, c] : integrand) {
    big_rational term = c;
    for (unsigned ej : e) term /= big_rational(ej + 1);
    lhs += term;
  }
  lhs /= big_rational(factorial(static_cast<unsigned>(n)));

  auto moment = [&r](unsigned m) {
    big_rational s(0);
    for (std::size_t p = 0; p < r.size(); ++p) s += r[p] / big_rational(static_cast<long>(p + m + 1));
    return s;
  };
  std::vector<std::vector<big_rational>> mat(n, std::vector<big_rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mat[i][j] = moment(a_degrees[i] + b_degrees[j]);
  return {lhs, detail::det_rational(std::move(mat))};
}

inline bool andreief_check(int n, const std::vector<unsigned>& a_degrees, const std::vector<unsigned>& b_degrees,
                           const rational_polynomial& r) {
  if (n < 1 || static_cast<std::size_t>(n) != a_degrees.size())
    throw std::invalid_argument("andreief_check: N must match the degree lists");
  return andreief_evaluate(a_degrees, b_degrees, r).equal();
}

}  // namespace gammak
