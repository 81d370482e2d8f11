#include "avoidpoly/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "avoidpoly/error.hpp"

namespace avoidpoly {

namespace {

constexpr double kSnap = 1e-9;
constexpr double kIndexLimit = 4.0e18;

// Sorts the per-point cell tuples and counts distinct ones.
std::uint64_t count_distinct_cells(std::vector<std::int64_t>& cells,
                                   std::size_t dim) {
  const std::size_t n = cells.size() / dim;
  if (dim == 1) {
    std::sort(cells.begin(), cells.end());
    return static_cast<std::uint64_t>(
        std::unique(cells.begin(), cells.end()) - cells.begin());
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(
        cells.begin() + static_cast<long>(a * dim),
        cells.begin() + static_cast<long>(a * dim + dim),
        cells.begin() + static_cast<long>(b * dim),
        cells.begin() + static_cast<long>(b * dim + dim));
  };
  std::sort(order.begin(), order.end(), less);
  std::uint64_t distinct = n > 0 ? 1 : 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (less(order[i - 1], order[i])) ++distinct;
  }
  return distinct;
}

void require_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::invalid_argument, "box scale must be positive");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ScaleLadder

ScaleLadder::ScaleLadder(std::vector<double> scales)
    : scales_(std::move(scales)) {
  if (scales_.empty()) {
    throw Error(ErrorCode::invalid_argument, "scale ladder is empty");
  }
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    require_scale(scales_[i]);
    if (i > 0 && !(scales_[i] < scales_[i - 1])) {
      throw Error(ErrorCode::invalid_argument,
                  "scale ladder must be strictly decreasing");
    }
  }
}

ScaleLadder ScaleLadder::geometric(int base, int k_min, int k_max) {
  if (base < 2 || k_max < k_min) {
    throw Error(ErrorCode::invalid_argument, "invalid scale ladder bounds");
  }
  std::vector<double> s;
  for (int k = k_min; k <= k_max; ++k) {
    s.push_back(std::pow(static_cast<double>(base), -k));
  }
  return ScaleLadder(std::move(s));
}

ScaleLadder ScaleLadder::dyadic(int k_min, int k_max) {
  return geometric(2, k_min, k_max);
}

ScaleLadder ScaleLadder::triadic(int k_min, int k_max) {
  return geometric(3, k_min, k_max);
}

ScaleLadder ScaleLadder::explicit_scales(std::vector<double> scales) {
  return ScaleLadder(std::move(scales));
}

ScaleLadder ScaleLadder::default_for(const SampledCompactSet& set) {
  const double diam = set.bounds().diameter();
  int k_min = 0;
  if (diam > 0.0) k_min = std::max(0, static_cast<int>(std::ceil(-std::log2(diam))) + 1);
  const double floor_scale =
      std::max(set.resolution_h(), diam > 0.0 ? diam * std::ldexp(1.0, -10) : 0.0);
  int k_max = k_min + 8;
  if (floor_scale > 0.0) {
    k_max = std::min(k_max, static_cast<int>(std::floor(-std::log2(floor_scale))));
  }
  k_max = std::max(k_max, k_min + 1);
  return dyadic(k_min, k_max);
}

// ---------------------------------------------------------------------------
// Box counting

std::int64_t cell_index(double x, double scale) {
  const double q = x / scale + kSnap;
  if (!(std::fabs(q) < kIndexLimit)) {
    throw Error(ErrorCode::numerical, "box index overflow; scale too small");
  }
  return static_cast<std::int64_t>(std::floor(q));
}

std::uint64_t box_count(const SampledCompactSet& set, double scale) {
  require_scale(scale);
  std::vector<std::int64_t> cells(set.data().size());
  const auto data = set.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    cells[i] = cell_index(data[i], scale);
  }
  return count_distinct_cells(cells, set.dim());
}

DimensionEstimate estimate_box_dimension(const SampledCompactSet& set,
                                         const ScaleLadder& ladder) {
  DimensionEstimate est;
  for (double s : ladder.scales()) {
    if (s >= set.resolution_h()) est.scales.push_back(s);
  }
  if (est.scales.size() < 2) {
    std::ostringstream os;
    os << "box dimension needs at least 2 scales at or above the resolution "
       << set.resolution_h() << "; got " << est.scales.size();
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  for (double s : est.scales) est.counts.push_back(box_count(set, s));

  const std::size_t n = est.scales.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::log(1.0 / est.scales[i]);
    ys[i] = std::log(static_cast<double>(est.counts[i]));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  est.slope = sxy / sxx;
  const double intercept = my - est.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + est.slope * xs[i]);
    ss_res += r * r;
  }
  est.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  // Rounding can push a flat profile a hair below zero.
  if (est.slope < 0.0 && est.slope > -1e-12) est.slope = 0.0;
  return est;
}

DimensionEstimate countable_dimension(const SampledCompactSet& truncated,
                                      const ScaleLadder& ladder) {
  DimensionEstimate est = estimate_box_dimension(truncated, ladder);
  est.slope = 0.0;
  est.forced_countable = true;
  return est;
}

SumDimReport check_sum_dim_bound(const SampledCompactSet& a,
                                 const SampledCompactSet& k,
                                 const ScaleLadder& ladder, SumSign sign,
                                 double tolerance, std::size_t cap) {
  const SampledCompactSet sum = minkowski_sum(a, k, sign, cap);
  // One common ladder, restricted to what the coarsest-resolved set supports.
  std::vector<double> usable;
  for (double s : ladder.scales()) {
    if (s >= sum.resolution_h()) usable.push_back(s);
  }
  if (usable.size() < 2) {
    throw Error(ErrorCode::invalid_argument,
                "sumset resolution leaves fewer than 2 usable scales");
  }
  const auto common = ScaleLadder::explicit_scales(usable);
  SumDimReport rep;
  rep.sign = sign;
  rep.tolerance = tolerance;
  rep.a = estimate_box_dimension(a, common);
  rep.k = estimate_box_dimension(k, common);
  rep.sum = estimate_box_dimension(sum, common);
  rep.bound = rep.a.slope + rep.k.slope + tolerance;
  rep.holds = rep.sum.slope <= rep.bound;
  return rep;
}

ConditionCheck check_avoidance_condition(const DimensionEstimate& dim_k,
                                         const DimensionEstimate& dim_a,
                                         std::size_t ambient_dim,
                                         double safety_margin) {
  ConditionCheck c;
  c.safety_margin = safety_margin;
  c.slack = static_cast<double>(ambient_dim) - (dim_k.slope + dim_a.slope);
  c.holds = c.slack > safety_margin;
  return c;
}

// ---------------------------------------------------------------------------
// Coverage

bool CoverageProfile::strictly_decreasing() const {
  for (std::size_t i = 1; i < fractions.size(); ++i) {
    if (!(fractions[i] < fractions[i - 1])) return false;
  }
  return fractions.size() >= 2;
}

CoverageProfile coverage_profile(const SampledCompactSet& set,
                                 const std::vector<double>& scales) {
  CoverageProfile prof;
  const auto& box = set.bounds();
  for (double s : scales) {
    require_scale(s);
    double cells = 1.0;
    for (std::size_t k = 0; k < set.dim(); ++k) {
      cells *= static_cast<double>(cell_index(box.hi[k], s) -
                                   cell_index(box.lo[k], s) + 1);
    }
    const auto occupied = static_cast<double>(box_count(set, s));
    prof.scales.push_back(s);
    prof.fractions.push_back(std::min(1.0, occupied / cells));
  }
  return prof;
}

}  // namespace avoidpoly
