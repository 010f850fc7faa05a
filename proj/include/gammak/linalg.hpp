#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "gammak/precision.hpp"

namespace gammak {

template <class T>
using dense_matrix = std::vector<std::vector<T>>;

namespace detail {
inline hp_real magnitude(const hp_real& x) { return abs(x); }
inline hp_real magnitude(const hp_complex& z) { return abs(z.re) + abs(z.im); }
}  // namespace detail

/// Determinant by Gaussian elimination with partial pivoting.
template <class T>
T determinant(dense_matrix<T> a) {
  const std::size_t n = a.size();
  T det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    hp_real best = detail::magnitude(a[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      hp_real m = detail::magnitude(a[r][col]);
      if (m > best) {
        best = std::move(m);
        piv = r;
      }
    }
    if (best == 0) return T(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      T f = a[r][col] / a[col][col];
      for (std::size_t c = col + 1; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

/// Solves a x = b in place by partial pivoting; throws on a singular system.
inline std::vector<hp_real> solve(dense_matrix<hp_real> a, std::vector<hp_real> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0) throw std::domain_error("solve: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      hp_real f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<hp_real> x(n);
  for (std::size_t i = n; i-- > 0;) {
    hp_real s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace gammak
