#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "avoidpoly/geometry.hpp"

namespace avoidpoly {

/// A continuous function f : R^n -> R^m evaluated pointwise. When `complex`
/// is set, n = m = 2 and the map is read as a function C -> C.
struct Target {
  using Fn = std::function<void(std::span<const double>, std::span<double>)>;

  std::string name;
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  bool complex = false;
  std::string description;
  Fn fn;

  Point operator()(const Point& x) const;
};

}  // namespace avoidpoly
