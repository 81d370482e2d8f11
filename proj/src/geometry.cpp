#include "avoidpoly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "avoidpoly/error.hpp"

namespace avoidpoly {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::invalid_argument,
                  std::string(what) + ": coordinates must be finite");
    }
  }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Point

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw Error(ErrorCode::invalid_argument, "point must have dimension >= 1");
  }
  require_finite(coords_, "point");
}

Point::Point(std::initializer_list<double> coords)
    : Point(std::vector<double>(coords)) {}

Point Point::zeros(std::size_t dim) { return Point(std::vector<double>(dim)); }

double Point::norm() const {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return std::sqrt(s);
}

Point operator+(const Point& a, const Point& b) {
  require_same_dim(a.dim(), b.dim(), "point addition");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Point(std::move(out));
}

Point operator-(const Point& a, const Point& b) {
  require_same_dim(a.dim(), b.dim(), "point subtraction");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Point(std::move(out));
}

Point operator*(double s, const Point& a) {
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
  return Point(std::move(out));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double euclidean_distance(std::span<const double> a,
                          std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

// ---------------------------------------------------------------------------
// BoundingBox

double BoundingBox::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double w = hi[i] - lo[i];
    s += w * w;
  }
  return std::sqrt(s);
}

double BoundingBox::distance_to(std::span<const double> p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    double d = 0.0;
    if (p[i] < lo[i]) {
      d = lo[i] - p[i];
    } else if (p[i] > hi[i]) {
      d = p[i] - hi[i];
    }
    s += d * d;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// SampledCompactSet

SampledCompactSet::SampledCompactSet(std::size_t dim, std::vector<double> flat,
                                     double resolution_h, std::string label,
                                     bool is_complex_plane)
    : dim_(dim),
      data_(std::move(flat)),
      resolution_h_(resolution_h),
      label_(std::move(label)),
      is_complex_plane_(is_complex_plane) {
  if (dim_ == 0) {
    throw Error(ErrorCode::invalid_argument, "sample set dimension must be >= 1");
  }
  if (data_.empty()) {
    throw Error(ErrorCode::invalid_argument, "sample set must be non-empty");
  }
  if (data_.size() % dim_ != 0) {
    throw Error(ErrorCode::dimension_mismatch,
                "sample buffer length is not a multiple of the dimension");
  }
  if (!std::isfinite(resolution_h_) || resolution_h_ < 0.0) {
    throw Error(ErrorCode::invalid_argument,
                "resolution_h must be finite and non-negative");
  }
  if (is_complex_plane_ && dim_ != 2) {
    throw Error(ErrorCode::invalid_argument,
                "complex-plane sample sets must have dimension 2");
  }
  require_finite(data_, "sample set");

  bounds_.lo.assign(data_.begin(), data_.begin() + static_cast<long>(dim_));
  bounds_.hi = bounds_.lo;
  for (std::size_t i = 1; i < size(); ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const double v = data_[i * dim_ + k];
      bounds_.lo[k] = std::min(bounds_.lo[k], v);
      bounds_.hi[k] = std::max(bounds_.hi[k], v);
    }
  }
}

SampledCompactSet SampledCompactSet::from_points(
    const std::vector<Point>& points, double resolution_h, std::string label,
    bool is_complex_plane) {
  if (points.empty()) {
    throw Error(ErrorCode::invalid_argument, "sample set must be non-empty");
  }
  const std::size_t d = points.front().dim();
  std::vector<double> flat;
  flat.reserve(points.size() * d);
  for (const auto& p : points) {
    require_same_dim(d, p.dim(), "sample set");
    flat.insert(flat.end(), p.coords().begin(), p.coords().end());
  }
  return SampledCompactSet(d, std::move(flat), resolution_h, std::move(label),
                           is_complex_plane);
}

Point SampledCompactSet::point_at(std::size_t i) const {
  auto p = point(i);
  return Point(std::vector<double>(p.begin(), p.end()));
}

SampledCompactSet SampledCompactSet::with_resolution(double h) const {
  return SampledCompactSet(dim_, data_, h, label_, is_complex_plane_);
}

SampledCompactSet SampledCompactSet::with_label(std::string label) const {
  return SampledCompactSet(dim_, data_, resolution_h_, std::move(label),
                           is_complex_plane_);
}

// ---------------------------------------------------------------------------
// CountableEnumeration

CountableEnumeration::CountableEnumeration(std::string name, std::size_t dim,
                                           std::size_t truncation,
                                           Generator generator,
                                           std::size_t available)
    : name_(std::move(name)),
      dim_(dim),
      truncation_(truncation),
      generator_(std::move(generator)),
      available_(available) {
  if (dim_ == 0) {
    throw Error(ErrorCode::invalid_argument,
                "enumeration dimension must be >= 1");
  }
  if (truncation_ > available_) {
    throw Error(ErrorCode::invalid_argument,
                "truncation exceeds the number of available points");
  }
}

CountableEnumeration CountableEnumeration::from_points(
    std::string name, std::size_t dim, std::vector<Point> points) {
  for (const auto& p : points) require_same_dim(dim, p.dim(), "enumeration");
  auto shared = std::make_shared<const std::vector<Point>>(std::move(points));
  const std::size_t n = shared->size();
  return CountableEnumeration(
      std::move(name), dim, n,
      [shared](std::size_t j) { return (*shared)[j - 1]; }, n);
}

Point CountableEnumeration::at(std::size_t j) const {
  if (!has(j)) {
    std::ostringstream os;
    os << "enumeration '" << name_ << "' has no index " << j;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  Point p = generator_(j);
  require_same_dim(dim_, p.dim(), "enumeration");
  return p;
}

std::vector<Point> CountableEnumeration::truncated_points() const {
  std::vector<Point> out;
  out.reserve(truncation_);
  for (std::size_t j = 1; j <= truncation_; ++j) out.push_back(at(j));
  return out;
}

CountableEnumeration CountableEnumeration::with_truncation(std::size_t n) const {
  return CountableEnumeration(name_, dim_, n, generator_, available_);
}

// ---------------------------------------------------------------------------
// NearestIndex

namespace {
constexpr std::uint32_t kLeafSize = 16;
}

NearestIndex::NearestIndex(const SampledCompactSet& set)
    : dim_(set.dim()), points_(set.data().begin(), set.data().end()) {
  nodes_.reserve(2 * set.size() / kLeafSize + 2);
  build(0, static_cast<std::uint32_t>(set.size()));
}

std::int32_t NearestIndex::build(std::uint32_t begin, std::uint32_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo.assign(points_.begin() + static_cast<long>(begin * dim_),
                 points_.begin() + static_cast<long>(begin * dim_ + dim_));
  node.hi = node.lo;
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const double v = points_[i * dim_ + k];
      node.lo[k] = std::min(node.lo[k], v);
      node.hi[k] = std::max(node.hi[k], v);
    }
  }
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double w = node.hi[k] - node.lo[k];
    if (w > widest) {
      widest = w;
      axis = k;
    }
  }
  if (widest <= 0.0) return id;  // all points coincide

  // Median split on a permutation, then apply it to the flat buffer.
  std::vector<std::uint32_t> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  const std::uint32_t mid = (end - begin) / 2;
  std::nth_element(order.begin(), order.begin() + mid, order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double va = points_[a * dim_ + axis];
                     const double vb = points_[b * dim_ + axis];
                     return va < vb || (va == vb && a < b);
                   });
  std::vector<double> scratch;
  scratch.reserve(order.size() * dim_);
  for (std::uint32_t idx : order) {
    scratch.insert(scratch.end(), points_.begin() + static_cast<long>(idx * dim_),
                   points_.begin() + static_cast<long>(idx * dim_ + dim_));
  }
  std::copy(scratch.begin(), scratch.end(),
            points_.begin() + static_cast<long>(begin * dim_));

  const std::int32_t left = build(begin, begin + mid);
  const std::int32_t right = build(begin + mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

void NearestIndex::search(std::int32_t id, std::span<const double> p,
                          double& best_sq, double stop_sq) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const double d = squared_distance(
          p, std::span<const double>(points_.data() + i * dim_, dim_));
      if (d < best_sq) best_sq = d;
    }
    return;
  }
  auto box_sq = [&](const Node& n) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      double d = 0.0;
      if (p[k] < n.lo[k]) {
        d = n.lo[k] - p[k];
      } else if (p[k] > n.hi[k]) {
        d = p[k] - n.hi[k];
      }
      s += d * d;
    }
    return s;
  };
  const Node& l = nodes_[static_cast<std::size_t>(node.left)];
  const Node& r = nodes_[static_cast<std::size_t>(node.right)];
  const double dl = box_sq(l);
  const double dr = box_sq(r);
  const std::int32_t first = dl <= dr ? node.left : node.right;
  const std::int32_t second = dl <= dr ? node.right : node.left;
  const double d_first = std::min(dl, dr);
  const double d_second = std::max(dl, dr);
  // The box bound is a lower bound; prune only when it cannot beat the best.
  if (d_first < best_sq && d_first < stop_sq) search(first, p, best_sq, stop_sq);
  if (d_second < best_sq && d_second < stop_sq) {
    search(second, p, best_sq, stop_sq);
  }
}

double NearestIndex::distance(std::span<const double> p) const {
  double best = std::numeric_limits<double>::infinity();
  search(0, p, best, std::numeric_limits<double>::infinity());
  return std::sqrt(best);
}

double NearestIndex::distance_bounded(std::span<const double> p,
                                      double cutoff) const {
  double best = std::numeric_limits<double>::infinity();
  search(0, p, best, cutoff * cutoff);
  return std::sqrt(best);
}

// ---------------------------------------------------------------------------
// Metric operations

double dist_point_to_set(const Point& p, const SampledCompactSet& set) {
  require_same_dim(p.dim(), set.dim(), "dist_point_to_set");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.size(); ++i) {
    best = std::min(best, squared_distance(p.coords(), set.point(i)));
  }
  return std::sqrt(best);
}

SampledCompactSet translate(const SampledCompactSet& set, const Point& shift) {
  require_same_dim(set.dim(), shift.dim(), "translate");
  std::vector<double> flat(set.data().begin(), set.data().end());
  const std::size_t d = set.dim();
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] += shift[i % d];
  return SampledCompactSet(d, std::move(flat), set.resolution_h(), set.label(),
                           set.is_complex_plane());
}

SampledCompactSet minkowski_sum(const SampledCompactSet& s,
                                const SampledCompactSet& t, SumSign sign,
                                std::size_t cap) {
  require_same_dim(s.dim(), t.dim(), "minkowski_sum");
  if (t.size() != 0 && s.size() > cap / t.size()) {
    std::ostringstream os;
    os << "minkowski_sum: " << s.size() << " x " << t.size()
       << " pairs exceed the cap of " << cap
       << "; subsample one of the sets first";
    throw Error(ErrorCode::capacity, os.str());
  }
  const std::size_t d = s.dim();
  const double sgn = sign == SumSign::plus ? 1.0 : -1.0;
  std::vector<double> flat;
  flat.reserve(s.size() * t.size() * d);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto a = s.point(i);
    for (std::size_t j = 0; j < t.size(); ++j) {
      const auto b = t.point(j);
      for (std::size_t k = 0; k < d; ++k) flat.push_back(a[k] + sgn * b[k]);
    }
  }
  const char* op = sign == SumSign::plus ? " + " : " - ";
  return SampledCompactSet(d, std::move(flat),
                           s.resolution_h() + t.resolution_h(),
                           s.label() + op + t.label(),
                           s.is_complex_plane() && t.is_complex_plane());
}

}  // namespace avoidpoly
