#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "avoidpoly/geometry.hpp"
#include "avoidpoly/polynomial.hpp"

namespace avoidpoly {

enum class ShiftMethod { deterministic, randomized };

std::string_view to_string(ShiftMethod m);

/// One forbidden point's entry in a shift certificate.
struct LedgerRow {
  std::size_t j = 0;
  Point a;
  double delta = 0.0;     // d(S + xi_j, a_j)
  double eps = 0.0;       // eps_j
  double realized = 0.0;  // d(S + xi, a_j) for the final xi
  Point xi_j;             // shift in force after step j

  /// (delta - eps) - image_cover_radius
  double certified_margin(double image_cover_radius) const {
    return (delta - eps) - image_cover_radius;
  }
};

struct ShiftCertificate {
  Point xi;
  std::vector<LedgerRow> ledger;
  double eps_budget = 0.0;
  double eps0 = 0.0;
  double image_cover_radius = 0.0;
  ShiftMethod method = ShiftMethod::deterministic;
  std::size_t trials_used = 0;  // randomized only

  bool all_certified() const;
  /// Smallest certified margin over the ledger (+inf when empty).
  double min_certified_margin() const;
};

/// |a| dependent threshold below which a distance is treated as zero.
double positivity_floor(const Point& a);

/// Candidate policy for the deterministic construction.
struct ProbePolicy {
  /// Ring radii as fractions of eps_{j-1}; each must be < 1/2.
  std::vector<double> ring_fractions{0.25, 0.4};
  std::size_t directions_per_ring = 16;
  /// Number of forbidden points (a_j onward) scored per candidate. With 0
  /// the candidate maximizing delta_j alone wins.
  std::size_t lookahead = 256;
};

/// Unit directions used for ring probes in dimension d: +-1 on the line,
/// golden-angle turns in the plane, a Fibonacci lattice on S^2 and a fixed
/// seeded Gaussian stream beyond.
std::vector<Point> probe_directions(std::size_t dim, std::size_t count);

/// Finite-horizon version of the recursive shift construction:
/// xi_0 = 0, eps_0 = 0.9 * budget, then for j = 1..N a step of length
/// < eps_{j-1} / 2 keeping a_j off S + xi_j, and
/// eps_j = 0.5 * min(delta_j, eps_{j-1} / 2).
/// The state can be advanced incrementally; rows for j <= N do not depend on
/// how far the search is later continued.
class DeterministicShiftSearch {
 public:
  DeterministicShiftSearch(SampledCompactSet set, CountableEnumeration forbidden,
                           double eps_budget, ProbePolicy policy = {});

  /// Runs the construction through index n (clamped to what the enumeration
  /// provides). Throws ShiftSearchFailure on probe exhaustion.
  void advance(std::size_t n);

  std::size_t horizon() const noexcept { return ledger_.size(); }
  const Point& current_shift() const noexcept { return xi_; }
  double current_eps() const noexcept { return eps_prev_; }

  /// Ledger with realized distances recomputed against the current shift.
  ShiftCertificate certificate() const;

 private:
  double distance_to_shifted(const Point& a, const Point& xi,
                             double cutoff) const;
  void refill_window(std::size_t j);

  SampledCompactSet set_;
  CountableEnumeration forbidden_;
  double eps_budget_;
  ProbePolicy policy_;
  std::shared_ptr<const NearestIndex> index_;
  std::vector<Point> directions_;

  Point xi_;
  double eps0_;
  double eps_prev_;
  std::vector<LedgerRow> ledger_;

  // Distances d(S + xi_, a_k) for k = window_start_ .. window_start_ + size - 1.
  std::size_t window_start_ = 1;
  std::deque<double> window_;
  std::vector<Point> window_points_;
};

ShiftCertificate shift_search_deterministic(const SampledCompactSet& set,
                                            const CountableEnumeration& forbidden,
                                            double eps_budget,
                                            const ProbePolicy& policy = {});

struct RandomizedOptions {
  std::size_t trials = 64;
  std::uint64_t seed = 0;
  /// Candidates scored together; the best of a batch is accepted when its
  /// margin is positive.
  std::size_t batch = 8;
};

/// Uniform-in-ball sampling of the shift (Gaussian direction, radius
/// budget * U^(1/d)), one derived stream per trial.
ShiftCertificate shift_search_randomized(const SampledCompactSet& set,
                                         const CountableEnumeration& forbidden,
                                         double eps_budget,
                                         const RandomizedOptions& options = {});

/// Point drawn uniformly from the open ball of radius r in R^d for the given
/// seed and trial number.
Point uniform_in_ball(std::size_t dim, double radius, std::uint64_t seed,
                      std::uint64_t trial);

enum class AvoidanceStatus { certified, uncertified_positive, violated };

std::string_view to_string(AvoidanceStatus s);

struct AvoidanceRow {
  std::size_t j = 0;
  Point a;
  double sample_distance = 0.0;  // d(P(K samples), a_j)
  double margin = 0.0;           // sample_distance - image_cover_radius
};

struct AvoidanceReport {
  double lipschitz = 0.0;
  double image_cover_radius = 0.0;
  std::vector<AvoidanceRow> rows;
  double min_margin = 0.0;
  double min_sample_distance = 0.0;
  AvoidanceStatus status = AvoidanceStatus::certified;
};

/// Checks P(K) against a_1..a_N. `lipschitz` must dominate the Lipschitz
/// constant of P on K's bounding box; when absent lipschitz_bound is used.
AvoidanceReport verify_avoidance(const PolynomialMap& p,
                                 const SampledCompactSet& k,
                                 const CountableEnumeration& forbidden,
                                 std::optional<double> lipschitz = std::nullopt);

/// Same check on an already computed image sample set whose resolution_h is
/// its covering radius.
AvoidanceReport verify_image_avoidance(const SampledCompactSet& image,
                                       const CountableEnumeration& forbidden,
                                       double lipschitz);

}  // namespace avoidpoly
