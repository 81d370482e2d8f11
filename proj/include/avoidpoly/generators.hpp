#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avoidpoly/geometry.hpp"
#include "avoidpoly/target.hpp"

namespace avoidpoly {

enum class GeneratorKind { compact_set, enumeration, target_function };

/// Parsed `name:key=value,...` reference to a registered generator.
struct GeneratorSpec {
  std::string name;
  std::map<std::string, double> params;
  GeneratorKind kind = GeneratorKind::compact_set;

  double get(const std::string& key) const;  // registered default if absent
  std::string to_string() const;
};

/// Parses and validates against the registry (unknown names or parameters
/// are errors).
GeneratorSpec parse_generator_spec(std::string_view text);

/// Registered generator names of one kind, in registration order.
std::vector<std::string> generator_names(GeneratorKind kind);

// Compact sets --------------------------------------------------------------

/// Endpoints of the 2^depth middle-thirds intervals (2^(depth+1) points),
/// resolution 3^-depth. With `complex_plane` the set sits on the real axis of
/// C (dimension 2).
SampledCompactSet gen_cantor(unsigned depth, bool complex_plane = false);

/// Cantor x Cantor in R^2.
SampledCompactSet gen_cantor_dust(unsigned depth);

/// Surviving intervals of the Smith-Volterra-Cantor construction: at step
/// k = 0..depth-1 an open middle interval of length lambda * 4^-k is removed
/// from each of the 2^k intervals.
std::vector<std::pair<double, double>> fat_cantor_intervals(unsigned depth,
                                                            double lambda);

/// Endpoints of fat_cantor_intervals; resolution is the longest interval.
SampledCompactSet gen_fat_cantor(unsigned depth, double lambda);

/// [0,1] + iS for S a fat Cantor set: an n-point grid on the real axis times
/// the fat Cantor endpoints on the imaginary axis.
SampledCompactSet gen_fat_cantor_strip(unsigned depth, double lambda,
                                       std::size_t grid_n);

/// n equally spaced points on [0,1] along coordinate `axis` of R^dim.
SampledCompactSet gen_segment(std::size_t n, std::size_t dim = 1,
                              std::size_t axis = 0);

/// Points i/n, i = 0..n-1, in each coordinate of R^dim.
SampledCompactSet gen_grid(std::size_t n, std::size_t dim);

SampledCompactSet gen_point(const Point& p);

SampledCompactSet make_compact_set(const GeneratorSpec& spec);

// Enumerations --------------------------------------------------------------

/// p/q + i r/s (reduced) ordered by height max(|p|, q, |r|, s), ties broken
/// lexicographically on (|p|, p < 0, q, |r|, r < 0, s). 0 comes first.
CountableEnumeration gaussian_rationals(std::size_t truncation);

/// Q ∩ [0,1]^d by lowest common denominator q = 1, 2, ...; within a level the
/// numerator tuples (n_1..n_d), gcd(n_1..n_d, q) = 1, in lexicographic order.
CountableEnumeration rational_grid(std::size_t dim, std::size_t truncation);

/// scale * Z^d by max-norm shell, lexicographic within a shell.
CountableEnumeration lattice_scaled(std::size_t dim, double scale,
                                    std::size_t truncation);

CountableEnumeration gen_enumeration(std::string_view name,
                                     const GeneratorSpec& spec);
CountableEnumeration make_enumeration(const GeneratorSpec& spec);

// Targets -------------------------------------------------------------------

/// Named test functions: exp, identity, complex-square, abs-offset,
/// rosenbrock-like, sin-product. `dim` is the input dimension; `complex`
/// selects the C -> C reading where one exists.
Target gen_target(std::string_view name, std::size_t dim, bool complex);

}  // namespace avoidpoly
