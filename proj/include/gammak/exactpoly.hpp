#pragma once

// Exact engine for gamma_k(c): expand det(c^{i+j-2} 1_(0,1)) Fourier-side as
// a signed sum over permutations and invert each term as an iterated
// convolution of monomials on the unit interval.

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gammak/parallel.hpp"
#include "gammak/piecewise.hpp"

namespace gammak {

struct gamma_exact_options {
  int max_k = 7;  ///< k! permutation terms; 7 takes minutes, 8 is impractical
  unsigned threads = 1;
};

/// gamma_k on [0, k] with one exact piece per unit interval. Coefficients
/// belong to gamma_k itself; scaled_piece() multiplies by (k^2-1)!.
struct gamma_poly_set {
  int k = 0;
  piecewise_polynomial pp;

  [[nodiscard]] big_int scale() const { return factorial(static_cast<unsigned>(k * k - 1)); }

  /// Integer coefficients of (k^2-1)! * gamma_k on [j, j+1] in powers of c.
  [[nodiscard]] std::vector<big_int> scaled_piece(int j) const {
    const rational_polynomial p = pp.piece_at(j) * big_rational(scale());
    std::vector<big_int> out;
    out.reserve(p.size());
    for (const auto& c : p.coefficients()) {
      if (denominator(c) != 1)
        throw invariant_error("gamma_poly_set: scaled coefficient is not an integer: " + c.str());
      out.push_back(numerator(c));
    }
    return out;
  }

  [[nodiscard]] big_rational operator()(const big_rational& c) const { return pp(c); }
};

/// Permutations of 0..k-1 grouped by the sorted exponent multiset
/// {i + sigma(i)}; the value is the signed count.
inline std::map<std::vector<unsigned>, long> gamma_exponent_multisets(int k) {
  std::vector<unsigned> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0u);
  std::map<std::vector<unsigned>, long> weights;
  do {
    int inversions = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)]) ++inversions;
    std::vector<unsigned> exps(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) exps[static_cast<std::size_t>(i)] = static_cast<unsigned>(i) + perm[static_cast<std::size_t>(i)];
    std::sort(exps.begin(), exps.end());
    weights[exps] += (inversions % 2 == 0) ? 1 : -1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::erase_if(weights, [](const auto& kv) { return kv.second == 0; });
  return weights;
}

/// Exact gamma_k(c) = G(1+k)^{-2} sum_sigma sgn(sigma) Conv_i[c^{i+sigma(i)-2} on (0,1)].
/// The (-2 pi i)^{k(k-1)} factors of the Fourier side cancel exactly.
inline gamma_poly_set gamma_exact(int k, const gamma_exact_options& opt = {}) {
  if (k < 1 || k > opt.max_k)
    throw std::domain_error("gamma_exact: k must lie in 1.." + std::to_string(opt.max_k));

  const auto weights = gamma_exponent_multisets(k);
  std::vector<std::pair<std::vector<unsigned>, long>> items(weights.begin(), weights.end());
  std::vector<std::vector<rational_polynomial>> terms(items.size());

  // Each worker memoizes convolutions of sorted exponent prefixes.
  const unsigned threads = std::max(1u, opt.threads);
  std::vector<std::map<std::vector<unsigned>, std::vector<rational_polynomial>>> memos(threads);
  parallel_for(threads, threads, [&](std::size_t t) {
    auto& memo = memos[t];
    const std::size_t lo = items.size() * t / threads;
    const std::size_t hi = items.size() * (t + 1) / threads;
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const auto& exps = items[idx].first;
      std::vector<unsigned> prefix;
      std::vector<rational_polynomial> acc;
      for (unsigned e : exps) {
        prefix.push_back(e);
        if (auto it = memo.find(prefix); it != memo.end()) {
          acc = it->second;
          continue;
        }
        const std::vector<rational_polynomial> mono{rational_polynomial::monomial(e)};
        acc = acc.empty() ? mono : detail::convolve_local(acc, mono);
        memo.emplace(prefix, acc);
      }
      terms[idx] = std::move(acc);
    }
  });

  std::vector<rational_polynomial> local(static_cast<std::size_t>(k));
  for (std::size_t idx = 0; idx < items.size(); ++idx) {
    const big_rational w(items[idx].second);
    for (std::size_t p = 0; p < terms[idx].size(); ++p) local[p].add_scaled(terms[idx][p], w);
  }
  const big_int g = barnes_g_int(k + 1);
  const big_rational norm(big_int(1), g * g);
  for (auto& p : local) p *= norm;

  gamma_poly_set out;
  out.k = k;
  out.pp = piecewise_polynomial::from_local(0, local);
  return out;
}

/// nu(c, k) = c^2 + (k-c)^2.
constexpr int nu(int c, int k) { return c * c + (k - c) * (k - c); }

/// Order to which gamma_k is differentiable at the interior knot j:
/// the largest n with derivatives 0..n of both neighbouring pieces equal.
inline int smoothness_order(const gamma_poly_set& g, int j) {
  if (j <= 0 || j >= g.k) throw std::domain_error("smoothness_order: need 0 < j < k");
  return knot_contact_order(g.pp, j);
}

/// Right piece minus left piece at knot j, as a polynomial in (c - j).
inline rational_polynomial knot_jump(const gamma_poly_set& g, int j) {
  return (g.pp.piece_at(j) - g.pp.piece_at(j - 1)).shifted(big_rational(j));
}

/// Minimum over interior knots, i.e. the global differentiability order.
inline int min_smoothness_order(const gamma_poly_set& g) {
  int best = std::numeric_limits<int>::max();
  for (int j = 1; j < g.k; ++j) best = std::min(best, smoothness_order(g, j));
  return best;
}

/// Exact total mass; equals G(k+1)^2/G(2k+1) for gamma_k.
inline big_rational integrate_pp(const piecewise_polynomial& pp) { return integrate(pp); }

inline big_rational gamma_mass_closed_form(int k) {
  const big_int g = barnes_g_int(k + 1);
  return big_rational(g * g, barnes_g_int(2 * k + 1));
}

/// Exact evaluation; see piecewise_polynomial::operator().
inline big_rational eval_pp(const piecewise_polynomial& pp, const big_rational& c) { return pp(c); }

/// Checks degree, support, symmetry gamma_k(c) = gamma_k(k - c) at the
/// coefficient level, the first piece c^{k^2-1}/(k^2-1)!, and nonnegativity
/// at the points j + m/8. Throws invariant_error describing the first violation.
inline void verify_gamma_invariants(const gamma_poly_set& g) {
  const int k = g.k;
  if (g.pp.left_knot() != 0 || static_cast<int>(g.pp.piece_count()) != k)
    throw invariant_error("gamma: support is not [0, k]");
  const int deg_bound = k * k - 1;
  for (int j = 0; j < k; ++j) {
    const auto piece = g.pp.piece_at(j);
    if (piece.degree() > deg_bound) throw invariant_error("gamma: piece degree exceeds k^2-1");
    // mirror piece: p_{k-1-j}(k - c)
    const auto mirror = g.pp.piece_at(k - 1 - j).shifted(big_rational(k)).scaled_argument(big_rational(-1));
    if (!(mirror == piece)) throw invariant_error("gamma: reflection symmetry fails on piece " + std::to_string(j));
  }
  const auto first = rational_polynomial::monomial(static_cast<std::size_t>(deg_bound),
                                                   big_rational(big_int(1), factorial(static_cast<unsigned>(deg_bound))));
  if (!(g.pp.piece_at(0) == first)) throw invariant_error("gamma: first piece is not c^{k^2-1}/(k^2-1)!");
  for (int m = 1; m < 8 * k; ++m)
    if (g.pp(make_rational(m, 8)) < 0) throw invariant_error("gamma: negative value at c = " + std::to_string(m) + "/8");
}

}  // namespace gammak
