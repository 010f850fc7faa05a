#pragma once

// Coefficients c_m(k) of log D_k(t) = log D_k(0) + sum_m c_m(k) t^m / m,
// generated by the Toda recursion, plus the Gaussian centre approximation
// of gamma_k(c).

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gammak/errors.hpp"
#include "gammak/precision.hpp"
#include "gammak/rational.hpp"

namespace gammak {

class coeff_table {
 public:
  /// c_m(k) for m >= 1, k >= 0; c_m(0) = 0 since D_0 = 1.
  const big_rational& get(int m, int k) {
    if (m < 1 || k < 0) throw std::domain_error("c_coeff: need m >= 1 and k >= 0");
    std::lock_guard<std::mutex> lock(mu_);
    return get_locked(m, k);
  }

  [[nodiscard]] std::size_t size() const { return values_.size(); }

 private:
  const big_rational& get_locked(int m, int k) {
    const auto key = std::make_pair(m, k);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    big_rational v;
    if (k == 0) {
      v = 0;
    } else if (m == 1) {
      v = make_rational(-k, 2);
    } else if (m == 2) {
      v = make_rational(static_cast<long>(k) * k, 4L * (4L * k * k - 1));
    } else {
      // c_M(k) = 1/((M-1)(M-2)) sum_{j=0}^{M-3} (j+1) c_{j+2}(k) (c_{M-j-2}(k-1) + c_{M-j-2}(k+1) - 2 c_{M-j-2}(k))
      big_rational s(0);
      for (int j = 0; j <= m - 3; ++j) {
        const big_rational a = get_locked(j + 2, k);
        if (a == 0) continue;
        const int q = m - j - 2;
        const big_rational second = get_locked(q, k - 1) + get_locked(q, k + 1) - 2 * get_locked(q, k);
        s += big_rational(j + 1) * a * second;
      }
      v = s / big_rational(static_cast<long>(m - 1) * (m - 2));
    }
    return values_.emplace(key, std::move(v)).first->second;
  }

  std::mutex mu_;
  std::map<std::pair<int, int>, big_rational> values_;
};

inline coeff_table& global_coeff_table() {
  static coeff_table t;
  return t;
}

inline big_rational c_coeff(int m, int k) { return global_coeff_table().get(m, k); }

struct series_value {
  hp_real value;
  hp_real tail_bound;  // bound on the relative truncation error
  hp_real rho;         // empirical growth rate of |c_m/m|^{1/m}
};

/// D_k(0) exp(sum_{m<=M} c_m t^m / m) with a truncation estimate. The
/// tail bound uses rho = max |c_m/m|^{1/m} over the nonzero coefficients
/// with M/2 < m <= M, giving sum_{m>M} |c_m/m| |t|^m <= (rho|t|)^{M+1} / (1 - rho|t|)
/// (infinite when rho|t| >= 1). Odd c_m vanish for m >= 3, hence the window.
inline series_value dk_series_sum(int k, const hp_real& t, int M, const precision_context& ctx) {
  if (k < 1 || M < 2) throw std::domain_error("dk_series_eval: need k >= 1 and M >= 2");
  scoped_precision sp(ctx);
  const big_int g1 = barnes_g_int(k + 1);
  hp_real sum(0), tp(1);
  for (int m = 1; m <= M; ++m) {
    tp *= t;
    sum += to_hp(c_coeff(m, k)) * tp / m;
  }
  series_value out;
  out.value = to_hp(big_rational(g1 * g1 * g1 * g1, barnes_g_int(2 * k + 1))) * exp(sum);
  out.rho = 0;
  for (int m = M / 2 + 1; m <= M; ++m) {
    const big_rational c = c_coeff(m, k);
    if (c == 0) continue;
    hp_real r = pow(abs(to_hp(c)) / m, hp_real(1) / m);
    if (r > out.rho) out.rho = r;
  }
  const hp_real x = out.rho * abs(t);
  out.tail_bound = x < 1 ? hp_real(pow(x, M + 1) / (1 - x)) : hp_real(std::numeric_limits<double>::infinity());
  return out;
}

/// As dk_series_sum, but throws precision_error when the tail bound exceeds 10^{-digits}.
inline series_value dk_series_eval(int k, const hp_real& t, int M, const precision_context& ctx) {
  series_value out = dk_series_sum(k, t, M, ctx);
  if (!(out.tail_bound <= pow10(-ctx.digits)))
    throw precision_error("dk_series_eval: tail bound " + to_decimal(out.tail_bound, 5) + " exceeds 10^-" +
                          std::to_string(ctx.digits));
  return out;
}

/// b_k = 8 (1 - 1/(4k^2)).
inline hp_real gaussian_b(int k) { return 8 * (1 - hp_real(1) / (4 * k * k)); }

/// Printed first-order correction factor with x = c - k/2.
inline hp_real gaussian_correction(int k, const hp_real& c) {
  const hp_real x = c - hp_real(k) / 2;
  const hp_real x2 = x * x;
  const hp_real k2 = hp_real(k) * k;
  const hp_real inner = (64 * x2 * x2 - 24 * x2 + hp_real(3) / 4) / k2 - 2 * x2 * (16 * x2 - 3) / (k2 * k2) +
                        4 * x2 * x2 / (k2 * k2 * k2);
  return 1 + inner / (4 * k2 - 9);
}

inline hp_real gaussian_gamma(int k, const hp_real& c, const precision_context& ctx) {
  if (k < 1) throw std::domain_error("gaussian_gamma: k must be >= 1");
  scoped_precision sp(ctx);
  const big_int g1 = barnes_g_int(k + 1);
  const hp_real pref = to_hp(big_rational(g1 * g1, barnes_g_int(2 * k + 1)));
  const hp_real b = gaussian_b(k);
  const hp_real x = c - hp_real(k) / 2;
  return pref * sqrt(b / hp_pi()) * exp(-b * x * x) * gaussian_correction(k, c);
}

/// Size of the first term dropped by the printed correction at c = k/2:
/// the Gaussian average of the c_6 t^6/6 term of log D_k at t = 2 pi i u.
inline hp_real gaussian_next_order_envelope(int k, const precision_context& ctx) {
  scoped_precision sp(ctx);
  const hp_real pi = hp_pi();
  const hp_real a = hp_real(k) * k * pi * pi / (2 * (4 * hp_real(k) * k - 1));
  const hp_real moment6 = hp_real(15) / (8 * a * a * a);  // E[u^6] under exp(-a u^2)
  return abs(pow(2 * pi, 6) * to_hp(c_coeff(6, k)) / 6 * moment6);
}

}  // namespace gammak
