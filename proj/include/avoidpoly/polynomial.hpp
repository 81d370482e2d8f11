#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avoidpoly/geometry.hpp"
#include "avoidpoly/target.hpp"

namespace avoidpoly {

enum class Basis {
  complex_monomial,  // sum c_k w^k over C, n = m = 2 real dims
  monomial,          // real total-degree monomials
  chebyshev,         // real tensor-product Chebyshev, max degree per variable
};

std::string_view to_string(Basis b);
Basis basis_from_string(std::string_view s);

/// Affine map x -> (x - center) / scale applied before the basis. For the
/// complex basis `center` has 2 entries and `scale` one (a real dilation keeps
/// the map holomorphic).
struct Prescale {
  std::vector<double> center;
  std::vector<double> scale;

  static Prescale identity(std::size_t n, bool complex);
  /// Maps the bounding box of `set` into [-1, 1]^n (the unit disc's bounding
  /// square for the complex basis).
  static Prescale fit_box(const BoundingBox& box, bool complex);
};

struct LipschitzHint {
  double value = 0.0;
  BoundingBox box;
};

/// Polynomial map R^n -> R^m (or C -> C) in one of the supported bases.
/// Coefficients are stored per output component, one row of term_count()
/// entries each; the complex basis stores (re, im) pairs for k = 0..degree.
class PolynomialMap {
 public:
  PolynomialMap(Basis basis, std::size_t n, std::size_t m, unsigned degree,
                Prescale prescale, std::vector<double> coeffs);

  /// Degree-0 map with value c.
  static PolynomialMap constant(std::size_t n, const Point& c,
                                Basis basis = Basis::monomial);

  Basis basis() const noexcept { return basis_; }
  std::size_t domain_dim() const noexcept { return n_; }
  std::size_t codomain_dim() const noexcept { return m_; }
  unsigned degree() const noexcept { return degree_; }
  const Prescale& prescale() const noexcept { return prescale_; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  /// Basis terms per output component.
  std::size_t term_count() const;

  /// Exponent multi-index of each real basis term (empty for the complex
  /// basis). Terms are graded so lower degrees form a prefix.
  const std::vector<std::vector<unsigned>>& exponents() const noexcept {
    return exponents_;
  }

  const std::optional<LipschitzHint>& lipschitz_hint() const noexcept {
    return hint_;
  }
  void set_lipschitz_hint(LipschitzHint hint) { hint_ = std::move(hint); }

  Point evaluate(const Point& x) const;
  void evaluate_into(std::span<const double> x, std::span<double> y) const;
  /// Evaluates every sample; result is row-major with codomain_dim() columns.
  std::vector<double> evaluate_all(const SampledCompactSet& set) const;

  /// Same map with the constant term raised by `shift` (p = q + shift).
  PolynomialMap shifted(const Point& shift) const;

 private:
  Basis basis_;
  std::size_t n_, m_;
  unsigned degree_;
  Prescale prescale_;
  std::vector<double> coeffs_;
  std::vector<std::vector<unsigned>> exponents_;
  std::optional<LipschitzHint> hint_;
};

/// Number of basis terms for one output component.
std::size_t basis_term_count(Basis basis, std::size_t n, unsigned degree);
std::vector<std::vector<unsigned>> basis_exponents(Basis basis, std::size_t n,
                                                   unsigned degree);

Point evaluate(const PolynomialMap& p, const Point& x);

struct FitOptions {
  bool prescale = true;
};

struct FitResult {
  PolynomialMap map;
  std::size_t effective_rank = 0;
  std::size_t basis_size = 0;
  bool underdetermined = false;  // fewer samples than basis terms
  double rms_residual = 0.0;
};

/// Least-squares fit of sum |P(x_i) - y_i|^2 via a complete orthogonal
/// decomposition of the design matrix (minimum-norm on rank deficiency).
/// `inputs` and `outputs` are row-major with n and m columns.
FitResult fit_polynomial(std::size_t n, std::span<const double> inputs,
                         std::size_t m, std::span<const double> outputs,
                         unsigned degree, Basis basis,
                         const FitOptions& options = {},
                         const BoundingBox* prescale_box = nullptr);

FitResult fit_polynomial(const std::vector<Point>& inputs,
                         const std::vector<Point>& outputs, unsigned degree,
                         Basis basis, const FitOptions& options = {});

/// max_i |P(x_i) - y_i|
double sup_error(const PolynomialMap& p, std::span<const double> inputs,
                 std::span<const double> outputs);
double sup_error(const PolynomialMap& p, const std::vector<Point>& inputs,
                 const std::vector<Point>& outputs);

struct ApproximationResult {
  PolynomialMap map;
  double achieved_error = 0.0;
  unsigned degree = 0;
  std::vector<double> error_by_degree;
};

/// Lowest degree <= max_degree whose sup error on the samples of K is below
/// `budget`. Throws ApproximationFailure carrying the best error otherwise.
ApproximationResult approximate_to_tolerance(const Target& f,
                                             const SampledCompactSet& k,
                                             double budget,
                                             unsigned max_degree, Basis basis);

/// Upper bound on the operator norm of DP over `box`, from absolute
/// coefficient sums of the partial derivatives with interval bounds on each
/// prescaled monomial.
double lipschitz_bound(const PolynomialMap& p, const BoundingBox& box);

/// Monomial coefficients (ascending) of the Chebyshev polynomial T_k.
std::vector<double> chebyshev_to_monomial(unsigned k);

}  // namespace avoidpoly
