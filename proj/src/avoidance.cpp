#include "avoidpoly/avoidance.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "avoidpoly/error.hpp"

namespace avoidpoly {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> difference(const Point& a, const Point& xi) {
  std::vector<double> q(a.dim());
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = a[k] - xi[k];
  return q;
}

std::string describe(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t k = 0; k < p.dim(); ++k) os << (k ? ", " : "") << p[k];
  os << ")";
  return os.str();
}

void require_search_inputs(const SampledCompactSet& set,
                           const CountableEnumeration& forbidden,
                           double eps_budget) {
  if (!(eps_budget > 0.0) || !std::isfinite(eps_budget)) {
    throw Error(ErrorCode::invalid_argument, "shift budget must be positive");
  }
  if (set.dim() != forbidden.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "sample set and forbidden enumeration differ in dimension");
  }
}

}  // namespace

std::string_view to_string(ShiftMethod m) {
  return m == ShiftMethod::deterministic ? "deterministic" : "randomized";
}

std::string_view to_string(AvoidanceStatus s) {
  switch (s) {
    case AvoidanceStatus::certified:
      return "certified";
    case AvoidanceStatus::uncertified_positive:
      return "uncertified-positive";
    case AvoidanceStatus::violated:
      return "violated";
  }
  return "unknown";
}

double positivity_floor(const Point& a) { return 1e-12 * (1.0 + a.norm()); }

bool ShiftCertificate::all_certified() const {
  return min_certified_margin() > 0.0;
}

double ShiftCertificate::min_certified_margin() const {
  double m = kInf;
  for (const auto& row : ledger) {
    m = std::min(m, row.certified_margin(image_cover_radius));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Probe directions

std::vector<Point> probe_directions(std::size_t dim, std::size_t count) {
  std::vector<Point> dirs;
  if (dim == 1) {
    dirs.push_back(Point{1.0});
    dirs.push_back(Point{-1.0});
    return dirs;
  }
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double t = golden_angle * static_cast<double>(i);
      dirs.push_back(Point{std::cos(t), std::sin(t)});
    }
    return dirs;
  }
  if (dim == 3) {
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) /
                                 static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden_angle * static_cast<double>(i);
      dirs.push_back(Point{r * std::cos(t), r * std::sin(t), z});
    }
    return dirs;
  }
  std::mt19937_64 rng(0x5eedf00dULL);
  std::normal_distribution<double> normal;
  while (dirs.size() < count) {
    std::vector<double> v(dim);
    double n2 = 0.0;
    for (auto& c : v) {
      c = normal(rng);
      n2 += c * c;
    }
    if (n2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& c : v) c *= inv;
    dirs.emplace_back(std::move(v));
  }
  return dirs;
}

// ---------------------------------------------------------------------------
// Deterministic construction

DeterministicShiftSearch::DeterministicShiftSearch(
    SampledCompactSet set, CountableEnumeration forbidden, double eps_budget,
    ProbePolicy policy)
    : set_(std::move(set)),
      forbidden_(std::move(forbidden)),
      eps_budget_(eps_budget),
      policy_(std::move(policy)),
      xi_(Point::zeros(set_.dim())),
      eps0_(0.9 * eps_budget),
      eps_prev_(0.9 * eps_budget) {
  require_search_inputs(set_, forbidden_, eps_budget_);
  if (policy_.ring_fractions.empty() || policy_.directions_per_ring == 0) {
    throw Error(ErrorCode::invalid_argument, "probe policy has no candidates");
  }
  for (double f : policy_.ring_fractions) {
    if (!(f > 0.0 && f < 0.5)) {
      throw Error(ErrorCode::invalid_argument,
                  "ring fractions must lie in (0, 1/2)");
    }
  }
  index_ = std::make_shared<const NearestIndex>(set_);
  directions_ = probe_directions(set_.dim(), policy_.directions_per_ring);
}

double DeterministicShiftSearch::distance_to_shifted(const Point& a,
                                                     const Point& xi,
                                                     double cutoff) const {
  const auto q = difference(a, xi);
  return cutoff == kInf ? index_->distance(q) : index_->distance_bounded(q, cutoff);
}

void DeterministicShiftSearch::refill_window(std::size_t j) {
  const std::size_t width = std::max<std::size_t>(1, policy_.lookahead);
  // Drop entries before j.
  while (window_start_ < j && !window_points_.empty()) {
    window_points_.erase(window_points_.begin());
    window_.pop_front();
    ++window_start_;
  }
  if (window_points_.empty()) window_start_ = j;
  while (window_points_.size() < width &&
         forbidden_.has(window_start_ + window_points_.size())) {
    Point a = forbidden_.at(window_start_ + window_points_.size());
    window_.push_back(distance_to_shifted(a, xi_, kInf));
    window_points_.push_back(std::move(a));
  }
}

void DeterministicShiftSearch::advance(std::size_t n) {
  n = std::min(n, forbidden_.available());
  const double cover = set_.resolution_h();
  for (std::size_t j = ledger_.size() + 1; j <= n; ++j) {
    refill_window(j);
    const Point& a = window_points_.front();
    const double floor = positivity_floor(a);
    const double comfort = 2.0 * cover + floor;
    const bool use_lookahead = policy_.lookahead > 0;

    auto window_min = [&] {
      double m = kInf;
      for (double d : window_) m = std::min(m, d);
      return m;
    };
    const double stay_delta = window_.front();
    const double stay_score = use_lookahead ? window_min() : stay_delta;

    if (!(stay_delta > floor && stay_score >= comfort)) {
      // Probe rings around xi_{j-1}; the current shift competes as candidate 0.
      double best_score = stay_delta > floor ? stay_score : -kInf;
      std::optional<Point> best;
      for (double frac : policy_.ring_fractions) {
        const double radius = frac * eps_prev_;
        for (const auto& dir : directions_) {
          Point cand = xi_ + radius * dir;
          const double delta = distance_to_shifted(a, cand, kInf);
          if (!(delta > floor)) continue;
          double score = delta;
          if (use_lookahead && score > best_score) {
            for (std::size_t w = 1; w < window_points_.size(); ++w) {
              score = std::min(
                  score, distance_to_shifted(window_points_[w], cand, score));
              if (score <= best_score) break;
            }
          }
          if (score > best_score) {
            best_score = score;
            best = std::move(cand);
          }
        }
      }
      if (best) {
        xi_ = std::move(*best);
        for (std::size_t w = 0; w < window_points_.size(); ++w) {
          window_[w] = distance_to_shifted(window_points_[w], xi_, kInf);
        }
      } else if (!(stay_delta > floor)) {
        std::ostringstream os;
        os << "probe exhaustion at j = " << j << ": no admissible shift keeps a_j = "
           << describe(a) << " off the sample set (eps_{j-1} = " << eps_prev_
           << ")";
        throw ShiftSearchFailure(os.str(), j, a.vector(), 0.0);
      }
    }

    const double delta = window_.front();
    const double eps = 0.5 * std::min(delta, 0.5 * eps_prev_);
    if (!(eps >= DBL_MIN)) {
      std::ostringstream os;
      os << "tolerance schedule underflowed at j = " << j
         << "; the horizon is limited by double precision";
      throw ShiftSearchFailure(os.str(), j, a.vector(), 0.0);
    }
    ledger_.push_back(LedgerRow{j, a, delta, eps, 0.0, xi_});
    eps_prev_ = eps;
  }
}

ShiftCertificate DeterministicShiftSearch::certificate() const {
  ShiftCertificate cert;
  cert.xi = xi_;
  cert.eps_budget = eps_budget_;
  cert.eps0 = eps0_;
  cert.image_cover_radius = set_.resolution_h();
  cert.method = ShiftMethod::deterministic;
  cert.ledger = ledger_;
  for (auto& row : cert.ledger) {
    row.realized = distance_to_shifted(row.a, xi_, kInf);
  }
  return cert;
}

ShiftCertificate shift_search_deterministic(const SampledCompactSet& set,
                                            const CountableEnumeration& forbidden,
                                            double eps_budget,
                                            const ProbePolicy& policy) {
  DeterministicShiftSearch search(set, forbidden, eps_budget, policy);
  search.advance(forbidden.truncation());
  return search.certificate();
}

// ---------------------------------------------------------------------------
// Randomized search

Point uniform_in_ball(std::size_t dim, double radius, std::uint64_t seed,
                      std::uint64_t trial) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(trial)));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (;;) {
    std::vector<double> v(dim);
    double n2 = 0.0;
    for (auto& c : v) {
      c = normal(rng);
      n2 += c * c;
    }
    if (n2 == 0.0) continue;
    const double r =
        radius * std::pow(uniform(rng), 1.0 / static_cast<double>(dim));
    const double s = r / std::sqrt(n2);
    for (auto& c : v) c *= s;
    Point p(std::move(v));
    if (p.norm() < radius) return p;
  }
}

ShiftCertificate shift_search_randomized(const SampledCompactSet& set,
                                         const CountableEnumeration& forbidden,
                                         double eps_budget,
                                         const RandomizedOptions& options) {
  require_search_inputs(set, forbidden, eps_budget);
  if (options.trials == 0 || options.batch == 0) {
    throw Error(ErrorCode::invalid_argument,
                "randomized search needs at least one trial per batch");
  }
  const NearestIndex index(set);
  const double cover = set.resolution_h();
  const auto points = forbidden.truncated_points();
  std::vector<double> floors;
  for (const auto& a : points) floors.push_back(positivity_floor(a));

  // min_j d(S + xi, a_j) - cover, or -inf if some a_j sits on S + xi.
  // Scoring stops once the candidate cannot exceed `to_beat`.
  auto score = [&](const Point& xi, double to_beat) {
    double m = kInf;
    for (std::size_t j = 0; j < points.size(); ++j) {
      const auto q = difference(points[j], xi);
      const double d = index.distance_bounded(q, m);
      if (!(d > floors[j])) return -kInf;
      m = std::min(m, d);
      if (m - cover <= to_beat) return m - cover;
    }
    return m - cover;
  };

  std::optional<Point> overall;
  double overall_score = -kInf;
  for (std::size_t start = 0; start < options.trials; start += options.batch) {
    const std::size_t end = std::min(options.trials, start + options.batch);
    std::optional<Point> batch_best;
    double batch_score = -kInf;
    for (std::size_t t = start; t < end; ++t) {
      Point xi = uniform_in_ball(set.dim(), eps_budget, options.seed, t);
      const double s = score(xi, batch_score);
      if (!batch_best || s > batch_score) {
        batch_score = s;
        batch_best = std::move(xi);
      }
    }
    if (batch_score > overall_score) {
      overall_score = batch_score;
      overall = batch_best;
    }
    if (batch_score > 0.0) {
      ShiftCertificate cert;
      cert.xi = *batch_best;
      cert.eps_budget = eps_budget;
      cert.eps0 = eps_budget;
      cert.image_cover_radius = cover;
      cert.method = ShiftMethod::randomized;
      cert.trials_used = end;
      for (std::size_t j = 0; j < points.size(); ++j) {
        const double d = index.distance(difference(points[j], cert.xi));
        cert.ledger.push_back(LedgerRow{j + 1, points[j], d, 0.0, d, cert.xi});
      }
      return cert;
    }
  }
  std::ostringstream os;
  os << "randomized shift search: no positive margin in " << options.trials
     << " trials (best margin " << overall_score << ")";
  throw ShiftSearchFailure(os.str(), 0,
                           overall ? overall->vector() : std::vector<double>{},
                           overall_score);
}

// ---------------------------------------------------------------------------
// Verification

AvoidanceReport verify_image_avoidance(const SampledCompactSet& image,
                                       const CountableEnumeration& forbidden,
                                       double lipschitz) {
  if (image.dim() != forbidden.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "image and forbidden enumeration differ in dimension");
  }
  const NearestIndex index(image);
  AvoidanceReport rep;
  rep.lipschitz = lipschitz;
  rep.image_cover_radius = image.resolution_h();
  rep.min_margin = kInf;
  rep.min_sample_distance = kInf;
  bool violated = false;
  for (std::size_t j = 1; j <= forbidden.truncation(); ++j) {
    Point a = forbidden.at(j);
    const double d = index.distance(a.coords());
    const double margin = d - rep.image_cover_radius;
    violated = violated || !(d > positivity_floor(a));
    rep.min_margin = std::min(rep.min_margin, margin);
    rep.min_sample_distance = std::min(rep.min_sample_distance, d);
    rep.rows.push_back(AvoidanceRow{j, std::move(a), d, margin});
  }
  if (violated) {
    rep.status = AvoidanceStatus::violated;
  } else if (!(rep.min_margin > 0.0)) {
    rep.status = AvoidanceStatus::uncertified_positive;
  } else {
    rep.status = AvoidanceStatus::certified;
  }
  return rep;
}

AvoidanceReport verify_avoidance(const PolynomialMap& p,
                                 const SampledCompactSet& k,
                                 const CountableEnumeration& forbidden,
                                 std::optional<double> lipschitz) {
  const double lip = lipschitz ? *lipschitz : lipschitz_bound(p, k.bounds());
  if (!(lip >= 0.0) || !std::isfinite(lip)) {
    throw Error(ErrorCode::invalid_argument,
                "Lipschitz constant must be finite and non-negative");
  }
  const SampledCompactSet image(p.codomain_dim(), p.evaluate_all(k),
                                lip * k.resolution_h(), "image");
  return verify_image_avoidance(image, forbidden, lip);
}

}  // namespace avoidpoly
