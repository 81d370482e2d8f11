#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "avoidpoly/geometry.hpp"

namespace avoidpoly {

/// Geometric ladder of box sizes base^-k, k = k_min..k_max, or an explicit
/// strictly decreasing list.
class ScaleLadder {
 public:
  static ScaleLadder dyadic(int k_min, int k_max);
  static ScaleLadder triadic(int k_min, int k_max);
  static ScaleLadder geometric(int base, int k_min, int k_max);
  static ScaleLadder explicit_scales(std::vector<double> scales);

  /// Dyadic ladder sized to the extent and resolution of `set`.
  static ScaleLadder default_for(const SampledCompactSet& set);

  const std::vector<double>& scales() const noexcept { return scales_; }

 private:
  explicit ScaleLadder(std::vector<double> scales);
  std::vector<double> scales_;
};

/// Empirical upper box dimension: least-squares slope of log N(s) against
/// log(1/s) over the usable scales.
struct DimensionEstimate {
  double slope = 0.0;
  std::vector<double> scales;
  std::vector<std::uint64_t> counts;
  double r2 = 1.0;
  /// Set when the slope was overridden to 0 because the set is a truncated
  /// countable enumeration (Hausdorff dimension 0).
  bool forced_countable = false;
};

struct CoverageProfile {
  std::vector<double> scales;
  std::vector<double> fractions;

  bool strictly_decreasing() const;
};

/// Number of occupied cells of the origin-anchored grid with cell side
/// `scale`. A coordinate within 1e-9 cell widths below a grid line is counted
/// in the cell above it, so exactly representable lattice points do not
/// depend on rounding in x / scale.
std::uint64_t box_count(const SampledCompactSet& set, double scale);

/// Integer cell index of coordinate x for the given scale (snapped as above).
std::int64_t cell_index(double x, double scale);

/// Scales finer than the set's resolution_h are dropped; throws if fewer than
/// two remain.
DimensionEstimate estimate_box_dimension(const SampledCompactSet& set,
                                         const ScaleLadder& ladder);

/// Dimension of a countable set, as used in the sufficient conditions. The
/// box estimate of the truncated points is kept for reference but the slope is
/// forced to 0.
DimensionEstimate countable_dimension(const SampledCompactSet& truncated,
                                      const ScaleLadder& ladder);

struct SumDimReport {
  DimensionEstimate a;
  DimensionEstimate k;
  DimensionEstimate sum;
  SumSign sign = SumSign::plus;
  double tolerance = 0.15;
  double bound = 0.0;  // est(A) + est(K) + tolerance
  bool holds = false;
};

/// Empirical check of dim(A ± K) <= dim(A) + dim(K), with `tolerance`
/// absorbing estimator noise.
SumDimReport check_sum_dim_bound(const SampledCompactSet& a,
                                 const SampledCompactSet& k,
                                 const ScaleLadder& ladder,
                                 SumSign sign = SumSign::plus,
                                 double tolerance = 0.15,
                                 std::size_t cap = kDefaultMinkowskiCap);

struct ConditionCheck {
  bool holds = false;
  double slack = 0.0;  // ambient - (dim K + dim A)
  double safety_margin = 0.1;
};

/// dim K + dim A < ambient - safety_margin
ConditionCheck check_avoidance_condition(const DimensionEstimate& dim_k,
                                         const DimensionEstimate& dim_a,
                                         std::size_t ambient_dim,
                                         double safety_margin = 0.1);

/// Occupied fraction of the grid cells meeting the bounding box, per scale.
CoverageProfile coverage_profile(const SampledCompactSet& set,
                                 const std::vector<double>& scales);

}  // namespace avoidpoly
