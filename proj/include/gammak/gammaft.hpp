#pragma once

// gamma_k(c) = G(k+1)^{-2} integral_R e^{2 pi i u (c - k/2)} I_k(u) du with
// I_k(u) = det( h^{(i+j)}(u) ) / (2 pi i)^{k(k-1)}, h(u) = sin(pi u)/(pi u).

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gammak/errors.hpp"
#include "gammak/linalg.hpp"
#include "gammak/polynomial.hpp"
#include "gammak/precision.hpp"
#include "gammak/quadrature.hpp"

namespace gammak {

struct quadrature_config {
  double U = 4.0;  ///< split point between panel quadrature and the exact tail
  int panels_per_period = 8;
  int nodes_per_panel = 32;
  precision_context ctx{};
};

// ---------------------------------------------------------------- h and I_k

namespace detail {

/// h^{(n)}(u) for n = 0..nmax at the current precision. Every value is real.
inline std::vector<hp_real> h_derivs(int nmax, const hp_real& u) {
  std::vector<hp_real> out(static_cast<std::size_t>(nmax + 1));
  const hp_real pi = hp_pi();
  if (abs(u) <= 1) {
    // h^{(n)}(u) = sum_{m : n+m even} (-1)^{(n+m)/2} pi^{n+m} u^m / (m! (n+m+1))
    const hp_real eps = pow10(-static_cast<long>(hp_real::default_precision()) - 5);
    for (int n = 0; n <= nmax; ++n) {
      hp_real s(0);
      hp_real um(1);    // u^m / m!
      hp_real pim = pow(pi, n);  // pi^{n+m}
      for (int m = 0;; ++m) {
        if ((n + m) % 2 == 0) {
          hp_real term = pim * um / (n + m + 1);
          if (((n + m) / 2) % 2 == 1) term = -term;
          s += term;
          if (m > 4 && abs(term) < eps * (abs(s) + eps)) break;
        }
        um = um * u / (m + 1);
        pim *= pi;
      }
      out[static_cast<std::size_t>(n)] = s;
    }
    return out;
  }
  // C_n = int x^n cos(bx), S_n = int x^n sin(bx) over [-1/2, 1/2], b = 2 pi u.
  const hp_real b = 2 * pi * u;
  const hp_real sb = sin(b / 2), cb = cos(b / 2);
  hp_real C = 2 * sb / b;
  hp_real S(0);
  hp_real half_pow(1);
  hp_real two_pi_n(1);
  out[0] = C;
  for (int n = 1; n <= nmax; ++n) {
    half_pow /= 2;
    two_pi_n *= 2 * pi;
    const bool even = n % 2 == 0;
    hp_real Cn = (even ? 2 * half_pow * sb / b : hp_real(0)) - n * S / b;
    hp_real Sn = (even ? hp_real(0) : -2 * half_pow * cb / b) + n * C / b;
    C = std::move(Cn);
    S = std::move(Sn);
    switch (n % 4) {
      case 0: out[static_cast<std::size_t>(n)] = two_pi_n * C; break;
      case 1: out[static_cast<std::size_t>(n)] = -two_pi_n * S; break;
      case 2: out[static_cast<std::size_t>(n)] = -two_pi_n * C; break;
      default: out[static_cast<std::size_t>(n)] = two_pi_n * S; break;
    }
  }
  return out;
}

inline int ik_guard_digits(int k) { return k * k + 10; }

/// I_k(u) at the current precision (caller supplies guard digits).
inline hp_real ik_value(int k, const hp_real& u) {
  if (k == 0) return hp_real(1);
  const auto h = h_derivs(2 * k - 2, u);
  dense_matrix<hp_real> m(static_cast<std::size_t>(k), std::vector<hp_real>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = h[static_cast<std::size_t>(i + j)];
  hp_real d = determinant(std::move(m));
  // (2 pi i)^{k(k-1)} = (2 pi)^{k(k-1)} (-1)^{k(k-1)/2}
  d /= pow(2 * hp_pi(), k * (k - 1));
  if ((k * (k - 1) / 2) % 2 == 1) d = -d;
  return d;
}

}  // namespace detail

inline hp_complex h_deriv(int n, const hp_real& u, const precision_context& ctx) {
  if (n < 0) throw std::domain_error("h_deriv: n must be >= 0");
  scoped_precision sp(ctx.working_digits() + 10);
  return hp_complex(detail::h_derivs(n, u)[static_cast<std::size_t>(n)]);
}

inline hp_real ik_eval(int k, const hp_real& u, const precision_context& ctx) {
  if (k < 1 || k > 8) throw std::domain_error("ik_eval: k must lie in 1..8");
  scoped_precision sp(ctx.working_digits() + detail::ik_guard_digits(k));
  return detail::ik_value(k, u);
}

// ------------------------------------------------- exact expansion of I_k

/// I_k(u) = sum_{l=0}^{k} e^{i pi u (k - 2l)} R_l(w), w = 1/(-2 pi i u) = i/(2 pi u),
/// with R_l polynomials with rational coefficients.
struct ik_expansion {
  int k = 0;
  std::vector<rational_polynomial> R;  // index l
};

namespace detail {

/// Element of Q[w][E] where index a counts factors of e^{-i pi u}; the
/// matching exponential is e^{i pi u (deg - 2a)} with deg the number of
/// moment factors multiplied together.
using exp_poly = std::vector<rational_polynomial>;

inline exp_poly exp_poly_mul(const exp_poly& x, const exp_poly& y) {
  if (x.empty() || y.empty()) return {};
  exp_poly out(x.size() + y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!y[j].is_zero()) out[i + j] += x[i] * y[j];
  }
  return out;
}

inline void exp_poly_add(exp_poly& acc, const exp_poly& x, const big_rational& s) {
  if (acc.size() < x.size()) acc.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) acc[i].add_scaled(x[i], s);
}

/// m_n(u) = integral_{-1/2}^{1/2} x^n e^{-2 pi i u x} dx = e^{-i pi u} A_n(w) - e^{i pi u} B_n(w).
inline exp_poly moment_exp_poly(unsigned n) {
  std::vector<big_rational> a(n + 2), b(n + 2);
  for (unsigned j = 0; j <= n; ++j) {
    big_rational f(factorial(n), factorial(n - j));
    if (j % 2 == 1) f = -f;
    const big_rational half_pow(big_int(1), pow(big_int(2), n - j));
    a[j + 1] = f * half_pow;
    b[j + 1] = f * half_pow;
    if ((n - j) % 2 == 1) b[j + 1] = -b[j + 1];
  }
  return {-rational_polynomial(std::move(b)), rational_polynomial(std::move(a))};
}

inline ik_expansion compute_ik_expansion(int k) {
  const std::size_t K = static_cast<std::size_t>(k);
  std::vector<exp_poly> mom(2 * K);
  for (std::size_t n = 0; n + 1 < 2 * K || n == 0; ++n) mom[n] = moment_exp_poly(static_cast<unsigned>(n));
  // Laplace expansion along rows, memoized on the set of used columns.
  std::vector<exp_poly> memo(std::size_t(1) << K);
  const std::size_t full = (std::size_t(1) << K) - 1;
  memo[full] = {rational_polynomial::constant(big_rational(1))};
  for (std::size_t mask = full; mask-- > 0;) {
    const std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask));
    exp_poly acc;
    int sign = 1;
    for (std::size_t col = 0; col < K; ++col) {
      if (mask & (std::size_t(1) << col)) continue;
      const std::size_t next = mask | (std::size_t(1) << col);
      exp_poly term = exp_poly_mul(mom[row + col], memo[next]);
      exp_poly_add(acc, term, big_rational(sign));
      sign = -sign;
    }
    memo[mask] = std::move(acc);
  }
  ik_expansion e;
  e.k = k;
  e.R.resize(K + 1);
  const exp_poly& det = memo[0];
  for (std::size_t a = 0; a < det.size() && a <= K; ++a) e.R[a] = det[a];
  return e;
}

}  // namespace detail

inline const ik_expansion& ik_exact_expansion(int k) {
  if (k < 1 || k > 8) throw std::domain_error("ik_exact_expansion: k must lie in 1..8");
  static std::mutex mu;
  static std::map<int, ik_expansion> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, detail::compute_ik_expansion(k)).first;
  return it->second;
}

/// Evaluates the exact expansion at u != 0 (complex result, real up to rounding).
inline hp_complex ik_from_expansion(int k, const hp_real& u) {
  const auto& e = ik_exact_expansion(k);
  const hp_real pi = hp_pi();
  const hp_complex w(hp_real(0), 1 / (2 * pi * u));
  hp_complex total;
  for (int l = 0; l <= k; ++l) {
    const auto& R = e.R[static_cast<std::size_t>(l)];
    hp_complex acc;
    for (std::size_t n = R.size(); n-- > 0;) acc = acc * w + hp_complex(to_hp(R[n]));
    total += hp_complex::polar_unit(pi * u * (k - 2 * l)) * acc;
  }
  return total;
}

// -------------------------------------------------- leading asymptotics

/// nu(c,k) and a(c,k) = (-1)^c (2 pi i)^{-nu} G(c+1)^2 G(k-c+1)^2.
struct nu_a {
  int c = 0;
  int nu = 0;
  hp_complex a;
};

inline nu_a asymptotic_term(int c, int k) {
  nu_a t;
  t.c = c;
  t.nu = c * c + (k - c) * (k - c);
  const big_int g1 = barnes_g_int(c + 1), g2 = barnes_g_int(k - c + 1);
  hp_real mag = to_hp(big_int(g1 * g1 * g2 * g2)) / pow(2 * hp_pi(), t.nu);
  if (c % 2 == 1) mag = -mag;
  t.a = i_pow(-t.nu) * mag;
  return t;
}

inline int nu_min(int k) {
  int best = k * k;
  for (int c = 0; c <= k; ++c) best = std::min(best, c * c + (k - c) * (k - c));
  return best;
}

/// |I_k(u) - sum_c e^{i pi u (k-2c)} a(c,k) u^{-nu(c,k)}| * u^{nu_min + 1}.
inline hp_real ik_asymptotic_check(int k, const hp_real& u, const precision_context& ctx) {
  if (u < 5) throw std::domain_error("ik_asymptotic_check: u must be >= 5");
  scoped_precision sp(ctx.working_digits() + detail::ik_guard_digits(k));
  const hp_real ik = detail::ik_value(k, u);
  hp_complex lead;
  const hp_real pi = hp_pi();
  for (int c = 0; c <= k; ++c) {
    const nu_a t = asymptotic_term(c, k);
    lead += hp_complex::polar_unit(pi * u * (k - 2 * c)) * t.a / pow(u, t.nu);
  }
  const hp_complex diff = hp_complex(ik) - lead;
  return diff.abs() * pow(u, nu_min(k) + 1);
}

// ------------------------------------------------------ Fourier inversion

namespace detail {

/// E(beta, n) = integral_U^inf e^{i beta u} u^{-n} du for n = 1..nmax,
/// beta != 0, as U^{1-n} E_n(-i beta U).
inline std::vector<hp_complex> oscillatory_tail(const hp_real& beta, const hp_real& U, int nmax) {
  const hp_real y = beta * U;
  const double ay = std::fabs(static_cast<double>(y));
  const unsigned outer = hp_real::default_precision();
  scoped_precision sp(static_cast<int>(outer) + static_cast<int>(2 * ay / 2.302585) + 20);
  const hp_real yy(y);
  // E_1(z), z = -i y: -gamma - ln z - sum_{m>=1} (iy)^m / (m m!)
  hp_complex series;
  hp_complex term(1);  // (iy)^m / m!
  const hp_complex iy(hp_real(0), yy);
  const hp_real eps = pow10(-static_cast<long>(hp_real::default_precision()) - 5);
  for (int m = 1;; ++m) {
    term = term * iy / hp_real(m);
    series += term / hp_real(m);
    if (m > ay && term.abs() < eps) break;
  }
  const hp_real pi = hp_pi();
  hp_complex e1(-hp_euler_gamma() - log(abs(yy)), yy > 0 ? pi / 2 : -pi / 2);
  e1 -= series;
  const hp_complex emz = hp_complex::polar_unit(yy);  // e^{-z}
  const hp_complex z(hp_real(0), -yy);
  std::vector<hp_complex> en(static_cast<std::size_t>(nmax + 1));
  en[1] = e1;
  for (int n = 1; n < nmax; ++n) en[static_cast<std::size_t>(n + 1)] = (emz - z * en[static_cast<std::size_t>(n)]) / hp_real(n);
  std::vector<hp_complex> out(static_cast<std::size_t>(nmax + 1));
  hp_real upow(1);  // U^{1-n}
  for (int n = 1; n <= nmax; ++n) {
    out[static_cast<std::size_t>(n)] = en[static_cast<std::size_t>(n)] * upow;
    upow /= U;
  }
  return out;
}

/// Extra digits lost to cancellation when the exact expansion is summed at
/// u = U: log10 of sum |r_{l,n}| (2 pi U)^{-n} relative to I_k(0).
inline int tail_guard_digits(int k, double U) {
  const auto& e = ik_exact_expansion(k);
  double log_total = -1e300;
  for (const auto& R : e.R)
    for (std::size_t n = 0; n < R.size(); ++n) {
      if (R[n] == 0) continue;
      const double lr = std::log10(std::fabs(static_cast<double>(numerator(R[n])))) -
                        std::log10(static_cast<double>(denominator(R[n]))) -
                        static_cast<double>(n) * std::log10(2 * M_PI * U);
      log_total = std::max(log_total, lr);
    }
  const big_int g = barnes_g_int(k + 1);
  const double log_i0 = std::log10(static_cast<double>(big_rational(g * g * g * g, barnes_g_int(2 * k + 1))));  // I_k(0)
  return std::max(0, static_cast<int>(std::ceil(log_total - log_i0 + 2 * std::log10(static_cast<double>(k * k + 1))))) + 10;
}

struct head_nodes {
  std::vector<hp_real> u;
  std::vector<hp_real> weighted_ik;  // w_i I_k(u_i)
};

inline const head_nodes& cached_head_nodes(int k, const hp_real& U, long panels, int nodes) {
  static std::mutex mu;
  static std::map<std::tuple<int, unsigned, std::string, long, int>, head_nodes> cache;
  const auto key = std::make_tuple(k, hp_real::default_precision(), U.str(0, std::ios_base::scientific), panels, nodes);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  head_nodes h;
  const gl_rule& rule = gauss_legendre(nodes);
  const hp_real width = U / panels;
  const hp_real half = width / 2;
  for (long p = 0; p < panels; ++p) {
    const hp_real mid = width * p + half;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      hp_real u = mid + half * rule.nodes[i];
      h.weighted_ik.push_back(rule.weights[i] * half * ik_value(k, u));
      h.u.push_back(std::move(u));
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(h)).first->second;
}

}  // namespace detail

/// Working digits used by gamma_numeric for the I_k node values.
inline int gamma_numeric_working_digits(int k, const quadrature_config& cfg) {
  return cfg.ctx.working_digits() + detail::ik_guard_digits(k) + detail::tail_guard_digits(k, cfg.U);
}

/// gamma_k(c) = (2/G(k+1)^2) [ integral_0^U cos(alpha u) I_k(u) du + Re integral_U^inf ... ],
/// alpha = 2 pi (c - k/2). The head uses Gauss-Legendre panels; the tail is
/// integrated exactly from the expansion of I_k in e^{i pi u m} u^{-n}.
inline hp_real gamma_numeric(int k, const big_rational& c, const quadrature_config& cfg = {}) {
  if (k < 1 || k > 8) throw std::domain_error("gamma_numeric: k must lie in 1..8");
  if (cfg.U <= 0 || cfg.panels_per_period < 1 || cfg.nodes_per_panel < 2)
    throw std::invalid_argument("gamma_numeric: quadrature configuration fields must be positive");
  scoped_precision sp(gamma_numeric_working_digits(k, cfg));
  const hp_real pi = hp_pi();
  const hp_real U(cfg.U);
  const big_rational shift = 2 * c - k;  // alpha = pi * shift
  const hp_real alpha = pi * to_hp(shift);

  const double omega = M_PI * k + std::max(std::fabs(static_cast<double>(alpha)), M_PI * k);
  const long panels = std::max<long>(1, static_cast<long>(std::ceil(cfg.U * cfg.panels_per_period * omega / (2 * M_PI))));
  const auto& head = detail::cached_head_nodes(k, U, panels, cfg.nodes_per_panel);
  hp_real head_sum(0);
  for (std::size_t i = 0; i < head.u.size(); ++i) head_sum += cos(alpha * head.u[i]) * head.weighted_ik[i];

  // tail: (1/2) sum_{+-} sum_l sum_n r_{l,n} (i/(2 pi))^n E(pi q, n),  q = +-shift + k - 2l
  const auto& e = ik_exact_expansion(k);
  std::map<big_rational, std::vector<big_rational>> groups;
  int nmax = 1;
  for (int l = 0; l <= k; ++l) {
    const auto& R = e.R[static_cast<std::size_t>(l)];
    if (R.is_zero()) continue;
    nmax = std::max(nmax, R.degree());
    for (int sgn : {1, -1}) {
      const big_rational q = big_rational(sgn) * shift + k - 2 * l;
      auto& v = groups[q];
      if (v.size() < R.size()) v.resize(R.size(), big_rational(0));
      for (std::size_t n = 0; n < R.size(); ++n) v[n] += R[n] / 2;
    }
  }
  hp_complex tail;
  for (const auto& [q, coeffs] : groups) {
    if (q == 0) {
      for (std::size_t n = 0; n < coeffs.size(); ++n) {
        if (coeffs[n] == 0) continue;
        if (n <= 1) throw invariant_error("gamma_numeric: non-integrable u^{-1} term in the tail");
        // integral_U^inf u^{-n} du = U^{1-n}/(n-1)
        const hp_complex f = i_pow(static_cast<long>(n)) * (to_hp(coeffs[n]) / pow(2 * pi, static_cast<long>(n)));
        tail += f * (pow(U, 1 - static_cast<long>(n)) / hp_real(static_cast<long>(n) - 1));
      }
      continue;
    }
    const auto E = detail::oscillatory_tail(pi * to_hp(q), U, std::max(1, static_cast<int>(coeffs.size()) - 1));
    for (std::size_t n = 1; n < coeffs.size(); ++n) {
      if (coeffs[n] == 0) continue;
      const hp_complex f = i_pow(static_cast<long>(n)) * (to_hp(coeffs[n]) / pow(2 * pi, static_cast<long>(n)));
      tail += f * E[n];
    }
    if (!coeffs.empty() && coeffs[0] != 0) throw invariant_error("gamma_numeric: constant term in the I_k expansion");
  }
  const big_int g = barnes_g_int(k + 1);
  return 2 * (head_sum + tail.re) / to_hp(big_int(g * g));
}

// ------------------------------------------------------------ interpolation

struct interpolation_result {
  rational_polynomial scaled;             // (k^2-1)! gamma_k on [j, j+1], powers of c
  std::vector<big_rational> nodes;        // the c values used
  double worst_log10_distance = -1e300;   // log10 of the largest rounding distance
};

/// k^2 rational nodes in (0,1) with denominator 4k^2 near the Chebyshev points.
inline std::vector<big_rational> interpolation_nodes(int k) {
  const int n = k * k;
  const long D = 4L * k * k;
  std::vector<bool> used(static_cast<std::size_t>(D), false);
  std::vector<long> picks;
  for (int i = 0; i < n; ++i) {
    const double s = (1 - std::cos(M_PI * (2 * i + 1) / (2.0 * n))) / 2;
    long idx = std::clamp(std::lround(s * D), 1L, D - 1);
    for (long step = 0;; ++step) {
      const long lo = idx - step, hi = idx + step;
      if (lo >= 1 && !used[static_cast<std::size_t>(lo)]) {
        idx = lo;
        break;
      }
      if (hi <= D - 1 && !used[static_cast<std::size_t>(hi)]) {
        idx = hi;
        break;
      }
    }
    used[static_cast<std::size_t>(idx)] = true;
    picks.push_back(idx);
  }
  std::sort(picks.begin(), picks.end());
  std::vector<big_rational> out;
  for (long p : picks) out.push_back(make_rational(p, D));
  return out;
}

/// Reconstructs the exact integer polynomial (k^2-1)! gamma_k on [j, j+1]
/// from gamma_numeric values. Throws precision_error when any coefficient is
/// farther than 10^{-digits/4} from an integer.
inline interpolation_result interpolate_piece(int k, int j, const quadrature_config& cfg = {}) {
  if (j < 0 || j >= k) throw std::domain_error("interpolate_piece: need 0 <= j < k");
  const int n = k * k;
  const auto local_nodes = interpolation_nodes(k);
  std::vector<hp_real> values;
  for (const auto& s : local_nodes) values.push_back(gamma_numeric(k, s + j, cfg));

  scoped_precision sp(gamma_numeric_working_digits(k, cfg));
  const hp_real scale = to_hp(factorial(static_cast<unsigned>(n - 1)));
  dense_matrix<hp_real> V(static_cast<std::size_t>(n), std::vector<hp_real>(static_cast<std::size_t>(n)));
  std::vector<hp_real> rhs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const hp_real s = to_hp(local_nodes[static_cast<std::size_t>(i)]);
    hp_real p(1);
    for (int m = 0; m < n; ++m) {
      V[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = p;
      p *= s;
    }
    rhs[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(i)] * scale;
  }
  const auto coeffs = solve(std::move(V), std::move(rhs));

  interpolation_result out;
  std::vector<big_rational> local;
  hp_real worst(0);
  for (const auto& x : coeffs) {
    hp_real dist;
    local.emplace_back(round_to_int(x, &dist));
    if (dist > worst) worst = dist;
  }
  out.worst_log10_distance = worst == 0 ? -1e300 : static_cast<double>(log10(worst));
  if (!(worst < pow10(-cfg.ctx.digits / 4)))
    throw precision_error("interpolate_piece: insufficient precision, worst rounding distance 10^" +
                          std::to_string(out.worst_log10_distance));
  out.scaled = rational_polynomial(std::move(local)).shifted(big_rational(-j));
  for (const auto& s : local_nodes) out.nodes.push_back(s + j);
  return out;
}

}  // namespace gammak
