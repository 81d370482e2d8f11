#include "avoidpoly/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "avoidpoly/error.hpp"

namespace avoidpoly {

using cplx = std::complex<double>;

Point Target::operator()(const Point& x) const {
  if (x.dim() != in_dim) {
    throw Error(ErrorCode::dimension_mismatch,
                "target '" + name + "': input dimension mismatch");
  }
  std::vector<double> y(out_dim);
  fn(x.coords(), y);
  return Point(std::move(y));
}

std::string_view to_string(Basis b) {
  switch (b) {
    case Basis::complex_monomial:
      return "complex-monomial";
    case Basis::monomial:
      return "monomial";
    case Basis::chebyshev:
      return "chebyshev";
  }
  return "unknown";
}

Basis basis_from_string(std::string_view s) {
  if (s == "complex-monomial" || s == "complex") return Basis::complex_monomial;
  if (s == "monomial") return Basis::monomial;
  if (s == "chebyshev") return Basis::chebyshev;
  throw Error(ErrorCode::parse, "unknown basis '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Prescale

Prescale Prescale::identity(std::size_t n, bool complex) {
  Prescale p;
  p.center.assign(n, 0.0);
  p.scale.assign(complex ? 1 : n, 1.0);
  return p;
}

Prescale Prescale::fit_box(const BoundingBox& box, bool complex) {
  Prescale p;
  const std::size_t n = box.dim();
  for (std::size_t k = 0; k < n; ++k) {
    p.center.push_back(0.5 * (box.lo[k] + box.hi[k]));
  }
  if (complex) {
    double half = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      half = std::max(half, 0.5 * (box.hi[k] - box.lo[k]));
    }
    p.scale.push_back(half > 0.0 ? half : 1.0);
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const double half = 0.5 * (box.hi[k] - box.lo[k]);
      p.scale.push_back(half > 0.0 ? half : 1.0);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Basis combinatorics

namespace {

// Exponent tuples of length n summing to `total`, descending in the first slot.
void tuples_with_sum(std::size_t n, unsigned total,
                     std::vector<unsigned>& cur,
                     std::vector<std::vector<unsigned>>& out) {
  if (cur.size() + 1 == n) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (unsigned e = total + 1; e-- > 0;) {
    cur.push_back(e);
    tuples_with_sum(n, total - e, cur, out);
    cur.pop_back();
  }
}

void tuples_with_max(std::size_t n, unsigned level, std::vector<unsigned>& cur,
                     std::vector<std::vector<unsigned>>& out) {
  if (cur.size() == n) {
    if (*std::max_element(cur.begin(), cur.end()) == level) out.push_back(cur);
    return;
  }
  for (unsigned e = 0; e <= level; ++e) {
    cur.push_back(e);
    tuples_with_max(n, level, cur, out);
    cur.pop_back();
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::size_t basis_term_count(Basis basis, std::size_t n, unsigned degree) {
  switch (basis) {
    case Basis::complex_monomial:
      return degree + 1;
    case Basis::monomial:
      return binomial(n + degree, n);
    case Basis::chebyshev: {
      std::size_t c = 1;
      for (std::size_t i = 0; i < n; ++i) c *= degree + 1;
      return c;
    }
  }
  return 0;
}

std::vector<std::vector<unsigned>> basis_exponents(Basis basis, std::size_t n,
                                                   unsigned degree) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur;
  if (basis == Basis::monomial) {
    for (unsigned t = 0; t <= degree; ++t) tuples_with_sum(n, t, cur, out);
  } else if (basis == Basis::chebyshev) {
    for (unsigned t = 0; t <= degree; ++t) tuples_with_max(n, t, cur, out);
  }
  return out;
}

std::vector<double> chebyshev_to_monomial(unsigned k) {
  std::vector<double> prev{1.0};
  if (k == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (unsigned j = 1; j < k; ++j) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// PolynomialMap

PolynomialMap::PolynomialMap(Basis basis, std::size_t n, std::size_t m,
                             unsigned degree, Prescale prescale,
                             std::vector<double> coeffs)
    : basis_(basis),
      n_(n),
      m_(m),
      degree_(degree),
      prescale_(std::move(prescale)),
      coeffs_(std::move(coeffs)),
      exponents_(basis_exponents(basis, n, degree)) {
  if (n_ == 0 || m_ == 0) {
    throw Error(ErrorCode::invalid_argument,
                "polynomial map dimensions must be >= 1");
  }
  const bool complex = basis_ == Basis::complex_monomial;
  if (complex && (n_ != 2 || m_ != 2)) {
    throw Error(ErrorCode::invalid_argument,
                "complex basis requires n = m = 2 (one complex variable)");
  }
  const std::size_t expected =
      complex ? 2 * (degree_ + 1) : m_ * basis_term_count(basis_, n_, degree_);
  if (coeffs_.size() != expected) {
    std::ostringstream os;
    os << "coefficient count " << coeffs_.size() << " does not match "
       << to_string(basis_) << " degree " << degree_ << " (expected "
       << expected << ")";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  if (prescale_.center.size() != n_ ||
      prescale_.scale.size() != (complex ? 1 : n_)) {
    throw Error(ErrorCode::invalid_argument, "prescale has wrong dimension");
  }
  for (double s : prescale_.scale) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::invalid_argument, "prescale must be positive");
    }
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::numerical, "polynomial coefficients must be finite");
    }
  }
}

std::size_t PolynomialMap::term_count() const {
  return basis_term_count(basis_, n_, degree_);
}

PolynomialMap PolynomialMap::constant(std::size_t n, const Point& c,
                                      Basis basis) {
  const bool complex = basis == Basis::complex_monomial;
  std::vector<double> coeffs(c.coords().begin(), c.coords().end());
  return PolynomialMap(basis, n, c.dim(), 0, Prescale::identity(n, complex),
                       std::move(coeffs));
}

void PolynomialMap::evaluate_into(std::span<const double> x,
                                  std::span<double> y) const {
  if (basis_ == Basis::complex_monomial) {
    const cplx w = cplx(x[0] - prescale_.center[0], x[1] - prescale_.center[1]) /
                   prescale_.scale[0];
    cplx acc(coeffs_[2 * degree_], coeffs_[2 * degree_ + 1]);
    for (unsigned k = degree_; k-- > 0;) {
      acc = acc * w + cplx(coeffs_[2 * k], coeffs_[2 * k + 1]);
    }
    y[0] = acc.real();
    y[1] = acc.imag();
    return;
  }

  // Per-variable tables of w^e or T_e(w), e = 0..degree.
  const std::size_t stride = degree_ + 1;
  double table_small[64];
  std::vector<double> table_big;
  double* table = table_small;
  if (n_ * stride > 64) {
    table_big.resize(n_ * stride);
    table = table_big.data();
  }
  for (std::size_t v = 0; v < n_; ++v) {
    const double w = (x[v] - prescale_.center[v]) / prescale_.scale[v];
    double* row = table + v * stride;
    row[0] = 1.0;
    if (degree_ >= 1) row[1] = w;
    for (unsigned e = 2; e <= degree_; ++e) {
      row[e] = basis_ == Basis::chebyshev ? 2.0 * w * row[e - 1] - row[e - 2]
                                          : row[e - 1] * w;
    }
  }
  const std::size_t terms = exponents_.size();
  for (std::size_t i = 0; i < m_; ++i) y[i] = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    double phi = 1.0;
    const auto& e = exponents_[t];
    for (std::size_t v = 0; v < n_; ++v) phi *= table[v * stride + e[v]];
    for (std::size_t i = 0; i < m_; ++i) y[i] += coeffs_[i * terms + t] * phi;
  }
}

Point PolynomialMap::evaluate(const Point& x) const {
  if (x.dim() != n_) {
    std::ostringstream os;
    os << "evaluate: point has dimension " << x.dim() << ", map expects " << n_;
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
  std::vector<double> y(m_);
  evaluate_into(x.coords(), y);
  return Point(std::move(y));
}

Point evaluate(const PolynomialMap& p, const Point& x) { return p.evaluate(x); }

std::vector<double> PolynomialMap::evaluate_all(
    const SampledCompactSet& set) const {
  if (set.dim() != n_) {
    throw Error(ErrorCode::dimension_mismatch,
                "evaluate_all: sample dimension does not match the map");
  }
  std::vector<double> out(set.size() * m_);
  for (std::size_t i = 0; i < set.size(); ++i) {
    evaluate_into(set.point(i), std::span<double>(out.data() + i * m_, m_));
  }
  return out;
}

PolynomialMap PolynomialMap::shifted(const Point& shift) const {
  if (shift.dim() != m_) {
    throw Error(ErrorCode::dimension_mismatch,
                "shifted: shift dimension does not match the codomain");
  }
  std::vector<double> coeffs = coeffs_;
  if (basis_ == Basis::complex_monomial) {
    coeffs[0] += shift[0];
    coeffs[1] += shift[1];
  } else {
    // The first term is the constant in both real bases.
    const std::size_t terms = exponents_.size();
    for (std::size_t i = 0; i < m_; ++i) coeffs[i * terms] += shift[i];
  }
  PolynomialMap out(basis_, n_, m_, degree_, prescale_, std::move(coeffs));
  out.hint_ = hint_;
  return out;
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

BoundingBox box_of(std::size_t n, std::span<const double> flat) {
  BoundingBox b;
  b.lo.assign(flat.begin(), flat.begin() + static_cast<long>(n));
  b.hi = b.lo;
  for (std::size_t i = n; i < flat.size(); ++i) {
    b.lo[i % n] = std::min(b.lo[i % n], flat[i]);
    b.hi[i % n] = std::max(b.hi[i % n], flat[i]);
  }
  return b;
}

[[noreturn]] void overflow_error() {
  throw Error(ErrorCode::numerical,
              "least-squares fit overflowed; enable the affine prescaling of "
              "the inputs into [-1,1]^n");
}

}  // namespace

FitResult fit_polynomial(std::size_t n, std::span<const double> inputs,
                         std::size_t m, std::span<const double> outputs,
                         unsigned degree, Basis basis,
                         const FitOptions& options,
                         const BoundingBox* prescale_box) {
  if (n == 0 || m == 0 || inputs.empty() || inputs.size() % n != 0) {
    throw Error(ErrorCode::invalid_argument, "fit: malformed sample inputs");
  }
  const std::size_t count = inputs.size() / n;
  if (outputs.size() != count * m) {
    throw Error(ErrorCode::dimension_mismatch,
                "fit: outputs do not match inputs");
  }
  const bool complex = basis == Basis::complex_monomial;
  if (complex && (n != 2 || m != 2)) {
    throw Error(ErrorCode::dimension_mismatch,
                "fit: complex basis needs 2-dimensional inputs and outputs");
  }
  for (double v : inputs) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "fit: non-finite input");
  }
  for (double v : outputs) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "fit: non-finite output");
  }

  Prescale pre = Prescale::identity(n, complex);
  if (options.prescale) {
    pre = Prescale::fit_box(prescale_box ? *prescale_box : box_of(n, inputs),
                            complex);
  }
  const std::size_t terms = basis_term_count(basis, n, degree);

  FitResult res{PolynomialMap::constant(n, Point::zeros(m),
                                        complex ? Basis::complex_monomial
                                                : Basis::monomial)};
  res.basis_size = terms;
  res.underdetermined = count < terms;

  std::vector<double> coeffs;
  if (complex) {
    Eigen::MatrixXcd design(static_cast<long>(count), static_cast<long>(terms));
    Eigen::VectorXcd rhs(static_cast<long>(count));
    for (std::size_t i = 0; i < count; ++i) {
      const cplx w = cplx(inputs[2 * i] - pre.center[0],
                          inputs[2 * i + 1] - pre.center[1]) /
                     pre.scale[0];
      cplx pw(1.0, 0.0);
      for (std::size_t k = 0; k < terms; ++k) {
        design(static_cast<long>(i), static_cast<long>(k)) = pw;
        pw *= w;
      }
      rhs(static_cast<long>(i)) = cplx(outputs[2 * i], outputs[2 * i + 1]);
    }
    if (!design.allFinite()) overflow_error();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(design);
    const Eigen::VectorXcd sol = cod.solve(rhs);
    if (!sol.allFinite()) overflow_error();
    res.effective_rank = static_cast<std::size_t>(cod.rank());
    for (std::size_t k = 0; k < terms; ++k) {
      coeffs.push_back(sol(static_cast<long>(k)).real());
      coeffs.push_back(sol(static_cast<long>(k)).imag());
    }
  } else {
    const auto exps = basis_exponents(basis, n, degree);
    Eigen::MatrixXd design(static_cast<long>(count), static_cast<long>(terms));
    const std::size_t stride = degree + 1;
    std::vector<double> table(n * stride);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t v = 0; v < n; ++v) {
        const double w = (inputs[i * n + v] - pre.center[v]) / pre.scale[v];
        double* row = table.data() + v * stride;
        row[0] = 1.0;
        if (degree >= 1) row[1] = w;
        for (unsigned e = 2; e <= degree; ++e) {
          row[e] = basis == Basis::chebyshev ? 2.0 * w * row[e - 1] - row[e - 2]
                                             : row[e - 1] * w;
        }
      }
      for (std::size_t t = 0; t < terms; ++t) {
        double phi = 1.0;
        for (std::size_t v = 0; v < n; ++v) phi *= table[v * stride + exps[t][v]];
        design(static_cast<long>(i), static_cast<long>(t)) = phi;
      }
    }
    if (!design.allFinite()) overflow_error();
    Eigen::MatrixXd rhs(static_cast<long>(count), static_cast<long>(m));
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        rhs(static_cast<long>(i), static_cast<long>(j)) = outputs[i * m + j];
      }
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    const Eigen::MatrixXd sol = cod.solve(rhs);
    if (!sol.allFinite()) overflow_error();
    res.effective_rank = static_cast<std::size_t>(cod.rank());
    coeffs.resize(m * terms);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t t = 0; t < terms; ++t) {
        coeffs[j * terms + t] = sol(static_cast<long>(t), static_cast<long>(j));
      }
    }
  }

  res.map = PolynomialMap(basis, n, m, degree, std::move(pre), std::move(coeffs));
  double ss = 0.0;
  std::vector<double> y(m);
  for (std::size_t i = 0; i < count; ++i) {
    res.map.evaluate_into(inputs.subspan(i * n, n), y);
    for (std::size_t j = 0; j < m; ++j) {
      const double r = y[j] - outputs[i * m + j];
      ss += r * r;
    }
  }
  res.rms_residual = std::sqrt(ss / static_cast<double>(count));
  return res;
}

FitResult fit_polynomial(const std::vector<Point>& inputs,
                         const std::vector<Point>& outputs, unsigned degree,
                         Basis basis, const FitOptions& options) {
  if (inputs.empty() || inputs.size() != outputs.size()) {
    throw Error(ErrorCode::invalid_argument,
                "fit: need equally many (non-zero) inputs and outputs");
  }
  const std::size_t n = inputs.front().dim();
  const std::size_t m = outputs.front().dim();
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].dim() != n || outputs[i].dim() != m) {
      throw Error(ErrorCode::dimension_mismatch, "fit: ragged samples");
    }
    xs.insert(xs.end(), inputs[i].coords().begin(), inputs[i].coords().end());
    ys.insert(ys.end(), outputs[i].coords().begin(), outputs[i].coords().end());
  }
  return fit_polynomial(n, xs, m, ys, degree, basis, options);
}

double sup_error(const PolynomialMap& p, std::span<const double> inputs,
                 std::span<const double> outputs) {
  const std::size_t n = p.domain_dim();
  const std::size_t m = p.codomain_dim();
  if (inputs.empty() || inputs.size() % n != 0 ||
      outputs.size() != inputs.size() / n * m) {
    throw Error(ErrorCode::invalid_argument, "sup_error: malformed samples");
  }
  const std::size_t count = inputs.size() / n;
  std::vector<double> y(m);
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    p.evaluate_into(inputs.subspan(i * n, n), y);
    worst = std::max(worst, euclidean_distance(y, outputs.subspan(i * m, m)));
  }
  return worst;
}

double sup_error(const PolynomialMap& p, const std::vector<Point>& inputs,
                 const std::vector<Point>& outputs) {
  if (inputs.empty() || inputs.size() != outputs.size()) {
    throw Error(ErrorCode::invalid_argument, "sup_error: malformed samples");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    worst = std::max(worst, (p.evaluate(inputs[i]) - outputs[i]).norm());
  }
  return worst;
}

ApproximationResult approximate_to_tolerance(const Target& f,
                                             const SampledCompactSet& k,
                                             double budget,
                                             unsigned max_degree, Basis basis) {
  if (!(budget > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "approximation budget must be > 0");
  }
  if (f.in_dim != k.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "target '" + f.name + "' does not accept points of the sample set");
  }
  const std::size_t m = f.out_dim;
  std::vector<double> values(k.size() * m);
  for (std::size_t i = 0; i < k.size(); ++i) {
    f.fn(k.point(i), std::span<double>(values.data() + i * m, m));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::numerical,
                  "target '" + f.name + "' is not finite on the sample set");
    }
  }

  std::optional<ApproximationResult> best;
  std::vector<double> errors;
  for (unsigned deg = 0; deg <= max_degree; ++deg) {
    FitResult fit = fit_polynomial(k.dim(), k.data(), m, values, deg, basis, {},
                                   &k.bounds());
    const double err = sup_error(fit.map, k.data(), values);
    errors.push_back(err);
    if (!best || err < best->achieved_error) {
      best = ApproximationResult{std::move(fit.map), err, deg, {}};
    }
    if (err < budget) {
      best->error_by_degree = std::move(errors);
      return std::move(*best);
    }
  }
  std::ostringstream os;
  os << "sup-error budget " << budget << " not reached by degree "
     << max_degree << "; best error " << best->achieved_error << " at degree "
     << best->degree;
  throw ApproximationFailure(os.str(), best->achieved_error, best->degree);
}

// ---------------------------------------------------------------------------
// Lipschitz bound

double lipschitz_bound(const PolynomialMap& p, const BoundingBox& box) {
  const std::size_t n = p.domain_dim();
  if (box.dim() != n) {
    throw Error(ErrorCode::dimension_mismatch,
                "lipschitz_bound: box dimension does not match the map");
  }
  const auto& pre = p.prescale();
  const auto c = p.coefficients();
  constexpr double kSlack = 1.0 + 1e-12;

  if (p.basis() == Basis::complex_monomial) {
    double r = 0.0;
    for (double x : {box.lo[0], box.hi[0]}) {
      for (double y : {box.lo[1], box.hi[1]}) {
        r = std::max(r, std::abs(cplx(x - pre.center[0], y - pre.center[1])) /
                            pre.scale[0]);
      }
    }
    double sum = 0.0;
    double rp = 1.0;  // r^(k-1)
    for (unsigned k = 1; k <= p.degree(); ++k) {
      sum += k * std::abs(cplx(c[2 * k], c[2 * k + 1])) * rp;
      rp *= r;
    }
    return sum / pre.scale[0] * kSlack;
  }

  // max |w_v| over the box, per prescaled variable
  std::vector<double> wmax(n);
  for (std::size_t v = 0; v < n; ++v) {
    wmax[v] = std::max(std::fabs((box.lo[v] - pre.center[v]) / pre.scale[v]),
                       std::fabs((box.hi[v] - pre.center[v]) / pre.scale[v]));
  }

  // Express each output in monomials of w: exponents + coefficients.
  const std::size_t m = p.codomain_dim();
  const std::size_t terms = p.term_count();
  const auto& exps = p.exponents();
  std::vector<std::vector<unsigned>> mono_exps;
  std::vector<double> mono;  // m rows
  if (p.basis() == Basis::monomial) {
    mono_exps = exps;
    mono.assign(c.begin(), c.end());
  } else {
    // Dense tensor grid of exponents up to degree in each variable.
    const unsigned deg = p.degree();
    mono_exps = basis_exponents(Basis::chebyshev, n, deg);
    const std::size_t dense = mono_exps.size();
    auto flat_index = [&](const std::vector<unsigned>& e) {
      std::size_t idx = 0;
      for (std::size_t v = 0; v < n; ++v) idx = idx * (deg + 1) + e[v];
      return idx;
    };
    std::vector<std::size_t> position(dense);
    for (std::size_t t = 0; t < dense; ++t) position[flat_index(mono_exps[t])] = t;
    std::vector<std::vector<double>> cheb(deg + 1);
    for (unsigned k = 0; k <= deg; ++k) cheb[k] = chebyshev_to_monomial(k);
    mono.assign(m * dense, 0.0);
    for (std::size_t t = 0; t < terms; ++t) {
      // Expand prod_v T_{e_v}(w_v) into monomials.
      std::vector<std::pair<std::vector<unsigned>, double>> partial{{{}, 1.0}};
      for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::pair<std::vector<unsigned>, double>> next;
        const auto& poly = cheb[exps[t][v]];
        for (const auto& [e, a] : partial) {
          for (unsigned d = 0; d < poly.size(); ++d) {
            if (poly[d] == 0.0) continue;
            auto e2 = e;
            e2.push_back(d);
            next.emplace_back(std::move(e2), a * poly[d]);
          }
        }
        partial = std::move(next);
      }
      for (const auto& [e, a] : partial) {
        const std::size_t pos = position[flat_index(e)];
        for (std::size_t i = 0; i < m; ++i) {
          mono[i * dense + pos] += c[i * terms + t] * a;
        }
      }
    }
  }

  const std::size_t mterms = mono_exps.size();
  double frob = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      double b = 0.0;
      for (std::size_t t = 0; t < mterms; ++t) {
        const auto& e = mono_exps[t];
        if (e[l] == 0) continue;
        double mag = std::fabs(mono[i * mterms + t]) * e[l];
        for (std::size_t v = 0; v < n; ++v) {
          const unsigned power = v == l ? e[v] - 1 : e[v];
          for (unsigned q = 0; q < power; ++q) mag *= wmax[v];
        }
        b += mag;
      }
      b /= pre.scale[l];
      frob += b * b;
    }
  }
  return std::sqrt(frob) * kSlack;
}

}  // namespace avoidpoly
