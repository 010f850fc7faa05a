#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "gammak/precision.hpp"

namespace gammak {

struct gl_rule {
  std::vector<hp_real> nodes;    // on [-1, 1], ascending
  std::vector<hp_real> weights;
};

namespace detail {

inline gl_rule compute_gauss_legendre(int n) {
  gl_rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const hp_real pi = hp_pi();
  const hp_real eps = pow10(-static_cast<long>(hp_real::default_precision()) + 3);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    hp_real x = cos(pi * (i + hp_real(0.75)) / (n + hp_real(0.5)));
    hp_real dp;
    for (int iter = 0; iter < 200; ++iter) {
      hp_real p0(1), p1 = x;
      for (int m = 2; m <= n; ++m) {
        hp_real p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      hp_real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < eps) break;
    }
    {
      hp_real p0(1), p1 = x;
      for (int m = 2; m <= n; ++m) {
        hp_real p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const hp_real w = 2 / ((1 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = -x;
    r.nodes[hi] = x;
    r.weights[lo] = w;
    r.weights[hi] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0;
  return r;
}

}  // namespace detail

/// n-point Gauss-Legendre rule at the current default precision (cached).
inline const gl_rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<std::pair<int, unsigned>, gl_rule> cache;
  const auto key = std::make_pair(n, hp_real::default_precision());
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

/// Integral of f over [a, b] split into `panels` equal panels.
template <class F>
hp_real integrate_panels(F&& f, const hp_real& a, const hp_real& b, long panels, int nodes_per_panel = 32) {
  const gl_rule& rule = gauss_legendre(nodes_per_panel);
  const hp_real width = (b - a) / panels;
  const hp_real half = width / 2;
  hp_real total(0);
  for (long p = 0; p < panels; ++p) {
    const hp_real mid = a + width * p + half;
    hp_real s(0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += s * half;
  }
  return total;
}

}  // namespace gammak
