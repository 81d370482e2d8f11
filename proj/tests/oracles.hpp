// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical kernels; only accessors are used.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "avoidpoly/geometry.hpp"
#include "avoidpoly/polynomial.hpp"

namespace oracle {

using avoidpoly::Basis;
using avoidpoly::PolynomialMap;
using avoidpoly::SampledCompactSet;

inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - b[i];
    s += d * d;
  }
  return static_cast<double>(std::sqrt(s));
}

inline std::vector<double> row(const SampledCompactSet& s, std::size_t i) {
  const auto p = s.point(i);
  return {p.begin(), p.end()};
}

/// min_i |s_i - p| by exhaustive scan in long double.
inline double brute_distance(const SampledCompactSet& s, const std::vector<double>& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) best = std::min(best, distance(row(s, i), p));
  return best;
}

/// d(S + xi, a) = min_i |s_i + xi - a|, exhaustive.
inline double brute_shifted_distance(const SampledCompactSet& s, const std::vector<double>& xi,
                                     const std::vector<double>& a) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto r = row(s, i);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += xi[k];
    best = std::min(best, distance(r, a));
  }
  return best;
}

/// Occupied origin-anchored cells, counted with exact rational snapping for
/// points that sit on grid lines up to rounding.
inline std::uint64_t box_count(const SampledCompactSet& s, double scale) {
  std::set<std::vector<long long>> cells;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<long long> c;
    for (double x : s.point(i)) {
      const double q = x / scale;
      const double r = std::round(q);
      c.push_back(static_cast<long long>(std::fabs(q - r) < 1e-9 ? r : std::floor(q)));
    }
    cells.insert(c);
  }
  return cells.size();
}

inline long double chebyshev_t(unsigned k, long double u) {
  if (std::fabs(u) <= 1.0L) return std::cos(k * std::acos(u));
  const long double v = std::cosh(k * std::acosh(std::fabs(u)));
  return (u < 0 && (k % 2 == 1)) ? -v : v;
}

/// Term-by-term expansion: sum_t c_t prod_v b_{e_v}(u_v) with std::pow or the
/// trigonometric form of T_k, after the stored prescale. Kept in long double.
inline std::vector<long double> naive_evaluate_ld(const PolynomialMap& p,
                                                  const std::vector<double>& x) {
  const auto& pre = p.prescale();
  const auto c = p.coefficients();
  if (p.basis() == Basis::complex_monomial) {
    const std::complex<long double> w(
        (static_cast<long double>(x[0]) - pre.center[0]) / pre.scale[0],
        (static_cast<long double>(x[1]) - pre.center[1]) / pre.scale[0]);
    std::complex<long double> sum = 0;
    for (unsigned k = 0; k <= p.degree(); ++k) {
      sum += std::complex<long double>(c[2 * k], c[2 * k + 1]) * std::pow(w, static_cast<int>(k));
    }
    return {sum.real(), sum.imag()};
  }
  const std::size_t n = p.domain_dim();
  const std::size_t terms = p.term_count();
  std::vector<long double> u(n);
  for (std::size_t v = 0; v < n; ++v) {
    u[v] = (static_cast<long double>(x[v]) - pre.center[v]) / pre.scale[v];
  }
  std::vector<long double> out(p.codomain_dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    long double sum = 0;
    for (std::size_t t = 0; t < terms; ++t) {
      long double term = c[i * terms + t];
      for (std::size_t v = 0; v < n; ++v) {
        const unsigned e = p.exponents()[t][v];
        term *= p.basis() == Basis::monomial
                    ? std::pow(u[v], static_cast<long double>(e))
                    : chebyshev_t(e, u[v]);
      }
      sum += term;
    }
    out[i] = sum;
  }
  return out;
}

inline std::vector<double> naive_evaluate(const PolynomialMap& p, const std::vector<double>& x) {
  const auto y = naive_evaluate_ld(p, x);
  return {y.begin(), y.end()};
}

/// Largest |P(x) - P(y)| / |x - y| over random pairs in the box.
inline double finite_difference_slope(const PolynomialMap& p, const avoidpoly::BoundingBox& box,
                                      std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double best = 0.0;
  const std::size_t n = box.dim();
  for (std::size_t s = 0; s < pairs; ++s) {
    std::vector<double> x(n), y(n);
    for (std::size_t v = 0; v < n; ++v) {
      x[v] = box.lo[v] + unit(rng) * (box.hi[v] - box.lo[v]);
      // Close pairs probe the derivative, far pairs the secant. Offsets stay in
      // [step/4, step/2] and are reflected at the box edge, so dx never
      // degenerates into rounding noise.
      const double step = (s % 2 == 0 ? 1e-4 : 1.0) * (box.hi[v] - box.lo[v]);
      double off = (0.25 + 0.25 * unit(rng)) * step * (unit(rng) < 0.5 ? -1.0 : 1.0);
      if (x[v] + off < box.lo[v] || x[v] + off > box.hi[v]) off = -off;
      y[v] = x[v] + off;
    }
    const double dx = distance(x, y);
    if (dx == 0.0) continue;
    const auto px = naive_evaluate_ld(p, x);
    const auto py = naive_evaluate_ld(p, y);
    long double s2 = 0;
    for (std::size_t i = 0; i < px.size(); ++i) s2 += (px[i] - py[i]) * (px[i] - py[i]);
    best = std::max(best, static_cast<double>(std::sqrt(s2) / dx));
  }
  return best;
}

}  // namespace oracle
