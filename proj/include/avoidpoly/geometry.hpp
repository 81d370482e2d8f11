#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace avoidpoly {

/// A point of R^d. The complex plane is carried as d = 2 with
/// coords = [Re, Im]. Coordinates are always finite.
class Point {
 public:
  /// Dimension-0 placeholder; every other constructor enforces dim >= 1.
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point zeros(std::size_t dim);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& vector() const noexcept { return coords_; }

  double norm() const;

  friend Point operator+(const Point& a, const Point& b);
  friend Point operator-(const Point& a, const Point& b);
  friend Point operator*(double s, const Point& a);
  friend bool operator==(const Point& a, const Point& b) = default;

 private:
  std::vector<double> coords_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

struct BoundingBox {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const noexcept { return lo.size(); }
  double diameter() const;
  /// Lower bound on the distance from `p` to anything inside the box.
  double distance_to(std::span<const double> p) const;
};

/// Finite sample of a compact set K together with its declared covering
/// radius h: every point of K lies within h of some sample. Points are stored
/// row-major in one flat buffer.
class SampledCompactSet {
 public:
  SampledCompactSet(std::size_t dim, std::vector<double> flat,
                    double resolution_h, std::string label = {},
                    bool is_complex_plane = false);

  static SampledCompactSet from_points(const std::vector<Point>& points,
                                       double resolution_h,
                                       std::string label = {},
                                       bool is_complex_plane = false);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size() / dim_; }
  std::span<const double> point(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  Point point_at(std::size_t i) const;
  std::span<const double> data() const noexcept { return data_; }

  double resolution_h() const noexcept { return resolution_h_; }
  const std::string& label() const noexcept { return label_; }
  bool is_complex_plane() const noexcept { return is_complex_plane_; }
  const BoundingBox& bounds() const noexcept { return bounds_; }

  SampledCompactSet with_resolution(double h) const;
  SampledCompactSet with_label(std::string label) const;

 private:
  std::size_t dim_;
  std::vector<double> data_;
  double resolution_h_;
  std::string label_;
  bool is_complex_plane_;
  BoundingBox bounds_;
};

/// Indexable stream a_1, a_2, ... of forbidden points. The generator must be
/// pure. `truncation` is the horizon N the avoidance guarantees cover; indices
/// past N stay addressable (up to `available`) so searches may look ahead.
class CountableEnumeration {
 public:
  using Generator = std::function<Point(std::size_t)>;

  CountableEnumeration(std::string name, std::size_t dim,
                       std::size_t truncation, Generator generator,
                       std::size_t available =
                           std::numeric_limits<std::size_t>::max());

  /// Finite enumeration over an explicit list (available = list size).
  static CountableEnumeration from_points(std::string name, std::size_t dim,
                                          std::vector<Point> points);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t truncation() const noexcept { return truncation_; }
  std::size_t available() const noexcept { return available_; }
  bool has(std::size_t j) const noexcept { return j >= 1 && j <= available_; }

  /// a_j for 1-based j.
  Point at(std::size_t j) const;

  /// The first `truncation()` points.
  std::vector<Point> truncated_points() const;

  CountableEnumeration with_truncation(std::size_t n) const;

 private:
  std::string name_;
  std::size_t dim_;
  std::size_t truncation_;
  Generator generator_;
  std::size_t available_;
};

/// Exact nearest-neighbour queries over a sample set (k-d tree). Results are
/// bitwise identical to a brute-force scan using euclidean_distance.
class NearestIndex {
 public:
  explicit NearestIndex(const SampledCompactSet& set);

  /// min_i |s_i - p|
  double distance(std::span<const double> p) const;
  /// Like distance(), but may stop early and return any value >= cutoff once
  /// the true distance is known to be at least cutoff.
  double distance_bounded(std::span<const double> p, double cutoff) const;

  std::size_t dim() const noexcept { return dim_; }

 private:
  struct Node {
    std::uint32_t begin, end;
    std::int32_t left = -1, right = -1;
    std::vector<double> lo, hi;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, std::span<const double> p, double& best_sq,
              double stop_sq) const;

  std::size_t dim_;
  std::vector<double> points_;  // reordered copy, row-major
  std::vector<Node> nodes_;
};

// Metric primitives.

/// Minimum Euclidean distance from p to the samples of S (brute force).
double dist_point_to_set(const Point& p, const SampledCompactSet& set);

SampledCompactSet translate(const SampledCompactSet& set, const Point& shift);

enum class SumSign { plus, minus };

inline constexpr std::size_t kDefaultMinkowskiCap = std::size_t{1} << 22;

/// All pairwise s ± t; resolution adds.
SampledCompactSet minkowski_sum(const SampledCompactSet& s,
                                const SampledCompactSet& t, SumSign sign,
                                std::size_t cap = kDefaultMinkowskiCap);

}  // namespace avoidpoly
