#include "avoidpoly/generators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numeric>
#include <sstream>
#include <tuple>

#include "avoidpoly/error.hpp"

namespace avoidpoly {

namespace {

struct Registration {
  std::string name;
  GeneratorKind kind;
  std::vector<std::pair<std::string, double>> defaults;
};

const std::vector<Registration>& registry() {
  static const std::vector<Registration> r = {
      {"cantor", GeneratorKind::compact_set, {{"depth", 8}, {"complex", 0}}},
      {"cantor-dust", GeneratorKind::compact_set, {{"depth", 6}}},
      {"fat-cantor", GeneratorKind::compact_set, {{"depth", 8}, {"lambda", 0.25}}},
      {"fat-cantor-strip",
       GeneratorKind::compact_set,
       {{"depth", 6}, {"lambda", 0.25}, {"n", 65}}},
      {"segment", GeneratorKind::compact_set, {{"n", 1025}, {"dim", 1}, {"axis", 0}}},
      {"grid", GeneratorKind::compact_set, {{"n", 100}, {"dim", 2}}},
      {"point",
       GeneratorKind::compact_set,
       {{"dim", 1}, {"x0", 0}, {"x1", 0}, {"x2", 0}, {"x3", 0}}},
      {"gaussian-rationals", GeneratorKind::enumeration, {{"N", 200}}},
      {"rational-grid", GeneratorKind::enumeration, {{"d", 1}, {"N", 200}}},
      {"lattice-scaled",
       GeneratorKind::enumeration,
       {{"d", 2}, {"scale", 0.1}, {"N", 200}}},
      {"exp", GeneratorKind::target_function, {{"dim", 1}, {"complex", 0}}},
      {"identity", GeneratorKind::target_function, {{"dim", 1}}},
      {"complex-square", GeneratorKind::target_function, {}},
      {"abs-offset", GeneratorKind::target_function, {{"dim", 1}}},
      {"rosenbrock-like", GeneratorKind::target_function, {}},
      {"sin-product", GeneratorKind::target_function, {}},
  };
  return r;
}

const Registration& lookup(std::string_view name) {
  for (const auto& r : registry()) {
    if (r.name == name) return r;
  }
  throw Error(ErrorCode::parse, "unknown generator '" + std::string(name) + "'");
}

std::size_t as_count(const GeneratorSpec& spec, const std::string& key,
                     std::size_t min_value = 0) {
  const double v = spec.get(key);
  if (!(v >= static_cast<double>(min_value)) || v != std::floor(v) || v > 1e12) {
    std::ostringstream os;
    os << spec.name << ": parameter '" << key << "' must be an integer >= "
       << min_value;
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  return static_cast<std::size_t>(v);
}

void guard_size(std::size_t n, const char* what) {
  if (n > (std::size_t{1} << 22)) {
    throw Error(ErrorCode::capacity,
                std::string(what) + ": requested sample exceeds 2^22 points");
  }
}

long long gcd_ll(long long a, long long b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

// Enumerations are generated as prefixes; the first `cache` points are kept
// and later indices recompute a longer prefix.
CountableEnumeration cached_enumeration(
    std::string name, std::size_t dim, std::size_t truncation,
    std::function<std::vector<Point>(std::size_t)> prefix) {
  const std::size_t cache_len = truncation + 2048;
  auto cache = std::make_shared<const std::vector<Point>>(prefix(cache_len));
  return CountableEnumeration(
      std::move(name), dim, truncation,
      [cache, prefix](std::size_t j) {
        if (j <= cache->size()) return (*cache)[j - 1];
        return prefix(j)[j - 1];
      });
}

struct Fraction {
  long long p, q;
  long long height() const { return std::max(p < 0 ? -p : p, q); }
};

std::vector<Fraction> reduced_fractions(long long max_height) {
  std::vector<Fraction> out;
  for (long long q = 1; q <= max_height; ++q) {
    for (long long p = -max_height; p <= max_height; ++p) {
      if (gcd_ll(p, q) == 1 || (p == 0 && q == 1)) out.push_back({p, q});
    }
  }
  return out;
}

std::vector<Point> gaussian_rationals_prefix(std::size_t count) {
  std::vector<Point> out;
  for (long long h = 1; out.size() < count; ++h) {
    const auto fr = reduced_fractions(h);
    using Key = std::tuple<long long, bool, long long, long long, bool, long long>;
    std::vector<std::pair<Key, Point>> level;
    for (const auto& x : fr) {
      for (const auto& y : fr) {
        if (std::max(x.height(), y.height()) != h) continue;
        Key key{x.p < 0 ? -x.p : x.p, x.p < 0, x.q, y.p < 0 ? -y.p : y.p, y.p < 0, y.q};
        level.emplace_back(key, Point{static_cast<double>(x.p) / static_cast<double>(x.q),
                                      static_cast<double>(y.p) / static_cast<double>(y.q)});
      }
    }
    std::sort(level.begin(), level.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, pt] : level) {
      if (out.size() == count) break;
      out.push_back(std::move(pt));
    }
  }
  return out;
}

std::vector<Point> rational_grid_prefix(std::size_t dim, std::size_t count) {
  std::vector<Point> out;
  for (long long q = 1; out.size() < count; ++q) {
    std::vector<long long> num(dim, 0);
    for (;;) {
      long long g = q;
      for (long long n : num) g = std::gcd(g, n);
      if (g == 1) {
        std::vector<double> c(dim);
        for (std::size_t k = 0; k < dim; ++k) {
          c[k] = static_cast<double>(num[k]) / static_cast<double>(q);
        }
        out.emplace_back(std::move(c));
        if (out.size() == count) return out;
      }
      // Odometer over [0, q]^dim, last coordinate fastest.
      std::size_t k = dim;
      while (k > 0 && num[k - 1] == q) num[--k] = 0;
      if (k == 0) break;
      ++num[k - 1];
    }
  }
  return out;
}

std::vector<Point> lattice_prefix(std::size_t dim, double scale,
                                  std::size_t count) {
  std::vector<Point> out;
  for (long long r = 0; out.size() < count; ++r) {
    std::vector<long long> z(dim, -r);
    for (;;) {
      long long norm = 0;
      for (long long v : z) norm = std::max(norm, v < 0 ? -v : v);
      if (norm == r) {
        std::vector<double> c(dim);
        for (std::size_t k = 0; k < dim; ++k) c[k] = scale * static_cast<double>(z[k]);
        out.emplace_back(std::move(c));
        if (out.size() == count) return out;
      }
      std::size_t k = dim;
      while (k > 0 && z[k - 1] == r) z[--k] = -r;
      if (k == 0) break;
      ++z[k - 1];
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Specs

double GeneratorSpec::get(const std::string& key) const {
  if (auto it = params.find(key); it != params.end()) return it->second;
  for (const auto& [k, v] : lookup(name).defaults) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::invalid_argument,
              name + ": no parameter '" + key + "'");
}

std::string GeneratorSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    os << sep << k << '=' << v;
    sep = ',';
  }
  return os.str();
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  const Registration& reg = lookup(spec.name);
  spec.kind = reg.kind;
  if (colon == std::string_view::npos) return spec;

  std::string_view rest = text.substr(colon + 1);
  for (bool more = true; more;) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    more = comma != std::string_view::npos;
    if (more) rest = rest.substr(comma + 1);
    if (item.empty()) {
      throw Error(ErrorCode::parse,
                  "empty parameter in '" + std::string(text) + "'");
    }
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::parse, "expected key=value in '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    const bool known = std::any_of(reg.defaults.begin(), reg.defaults.end(),
                                   [&](const auto& d) { return d.first == key; });
    if (!known) {
      throw Error(ErrorCode::parse,
                  spec.name + ": unknown parameter '" + key + "'");
    }
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || !std::isfinite(v)) {
      throw Error(ErrorCode::parse, spec.name + ": parameter '" + key +
                                        "' is not a number: '" + value + "'");
    }
    spec.params[key] = v;
  }
  return spec;
}

std::vector<std::string> generator_names(GeneratorKind kind) {
  std::vector<std::string> out;
  for (const auto& r : registry()) {
    if (r.kind == kind) out.push_back(r.name);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compact sets

SampledCompactSet gen_cantor(unsigned depth, bool complex_plane) {
  if (depth > 20) {
    throw Error(ErrorCode::capacity, "cantor: depth above 20 is refused");
  }
  std::vector<std::uint64_t> lefts{0};
  for (unsigned k = 0; k < depth; ++k) {
    std::vector<std::uint64_t> next;
    next.reserve(lefts.size() * 2);
    for (auto l : lefts) {
      next.push_back(3 * l);
      next.push_back(3 * l + 2);
    }
    lefts = std::move(next);
  }
  const double denom = std::pow(3.0, static_cast<double>(depth));
  const std::size_t dim = complex_plane ? 2 : 1;
  std::vector<double> flat;
  flat.reserve(lefts.size() * 2 * dim);
  for (auto l : lefts) {
    for (auto n : {l, l + 1}) {
      flat.push_back(static_cast<double>(n) / denom);
      if (complex_plane) flat.push_back(0.0);
    }
  }
  std::ostringstream label;
  label << "cantor(depth=" << depth << ")";
  return SampledCompactSet(dim, std::move(flat), 1.0 / denom, label.str(),
                           complex_plane);
}

SampledCompactSet gen_cantor_dust(unsigned depth) {
  if (depth > 10) {
    throw Error(ErrorCode::capacity, "cantor-dust: depth above 10 is refused");
  }
  const auto line = gen_cantor(depth);
  std::vector<double> flat;
  flat.reserve(line.size() * line.size() * 2);
  for (std::size_t i = 0; i < line.size(); ++i) {
    for (std::size_t j = 0; j < line.size(); ++j) {
      flat.push_back(line.point(i)[0]);
      flat.push_back(line.point(j)[0]);
    }
  }
  std::ostringstream label;
  label << "cantor-dust(depth=" << depth << ")";
  return SampledCompactSet(2, std::move(flat),
                           std::sqrt(2.0) * line.resolution_h(), label.str());
}

std::vector<std::pair<double, double>> fat_cantor_intervals(unsigned depth,
                                                            double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0 / 3.0)) {
    throw Error(ErrorCode::invalid_argument,
                "fat-cantor: removal ratio must lie in (0, 1/3)");
  }
  if (depth > 20) {
    throw Error(ErrorCode::capacity, "fat-cantor: depth above 20 is refused");
  }
  std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
  double removal = lambda;
  for (unsigned k = 0; k < depth; ++k) {
    std::vector<std::pair<double, double>> next;
    next.reserve(iv.size() * 2);
    for (const auto& [a, b] : iv) {
      if (!(removal < b - a)) {
        throw Error(ErrorCode::invalid_argument,
                    "fat-cantor: removal exceeds interval length");
      }
      const double mid = 0.5 * (a + b);
      next.emplace_back(a, mid - 0.5 * removal);
      next.emplace_back(mid + 0.5 * removal, b);
    }
    iv = std::move(next);
    removal *= 0.25;
  }
  return iv;
}

SampledCompactSet gen_fat_cantor(unsigned depth, double lambda) {
  const auto iv = fat_cantor_intervals(depth, lambda);
  std::vector<double> flat;
  double longest = 0.0;
  for (const auto& [a, b] : iv) {
    flat.push_back(a);
    flat.push_back(b);
    longest = std::max(longest, b - a);
  }
  std::ostringstream label;
  label << "fat-cantor(depth=" << depth << ",lambda=" << lambda << ")";
  return SampledCompactSet(1, std::move(flat), longest, label.str());
}

SampledCompactSet gen_fat_cantor_strip(unsigned depth, double lambda,
                                       std::size_t grid_n) {
  if (grid_n < 2) {
    throw Error(ErrorCode::invalid_argument, "fat-cantor-strip: n must be >= 2");
  }
  const auto s = gen_fat_cantor(depth, lambda);
  guard_size(grid_n * s.size(), "fat-cantor-strip");
  std::vector<double> flat;
  flat.reserve(grid_n * s.size() * 2);
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid_n - 1);
    for (std::size_t j = 0; j < s.size(); ++j) {
      flat.push_back(x);
      flat.push_back(s.point(j)[0]);
    }
  }
  const double hx = 0.5 / static_cast<double>(grid_n - 1);
  std::ostringstream label;
  label << "fat-cantor-strip(depth=" << depth << ",lambda=" << lambda
        << ",n=" << grid_n << ")";
  return SampledCompactSet(2, std::move(flat), std::hypot(hx, s.resolution_h()),
                           label.str(), true);
}

SampledCompactSet gen_segment(std::size_t n, std::size_t dim, std::size_t axis) {
  if (n < 2 || dim == 0 || axis >= dim) {
    throw Error(ErrorCode::invalid_argument,
                "segment: need n >= 2 and axis < dim");
  }
  guard_size(n, "segment");
  std::vector<double> flat(n * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    flat[i * dim + axis] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  std::ostringstream label;
  label << "segment(n=" << n << ")";
  return SampledCompactSet(dim, std::move(flat),
                           0.5 / static_cast<double>(n - 1), label.str());
}

SampledCompactSet gen_grid(std::size_t n, std::size_t dim) {
  if (n == 0 || dim == 0) {
    throw Error(ErrorCode::invalid_argument, "grid: need n >= 1 and dim >= 1");
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    total *= n;
    guard_size(total, "grid");
  }
  std::vector<double> flat(total * dim);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (std::size_t k = dim; k-- > 0;) {
      flat[i * dim + k] = static_cast<double>(rest % n) / static_cast<double>(n);
      rest /= n;
    }
  }
  std::ostringstream label;
  label << "grid(n=" << n << ",dim=" << dim << ")";
  return SampledCompactSet(dim, std::move(flat),
                           std::sqrt(static_cast<double>(dim)) / static_cast<double>(n),
                           label.str());
}

SampledCompactSet gen_point(const Point& p) {
  return SampledCompactSet(p.dim(), p.vector(), 0.0, "point");
}

SampledCompactSet make_compact_set(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::enumeration) {
    // The truncated enumeration as a finite point set (resolution 0).
    const auto e = make_enumeration(spec);
    auto s = SampledCompactSet::from_points(e.truncated_points(), 0.0, spec.to_string());
    return s;
  }
  if (spec.kind != GeneratorKind::compact_set) {
    throw Error(ErrorCode::invalid_argument,
                "'" + spec.name + "' does not generate a point set");
  }
  const auto& n = spec.name;
  if (n == "cantor") {
    return gen_cantor(static_cast<unsigned>(as_count(spec, "depth")),
                      spec.get("complex") != 0.0);
  }
  if (n == "cantor-dust") {
    return gen_cantor_dust(static_cast<unsigned>(as_count(spec, "depth")));
  }
  if (n == "fat-cantor") {
    return gen_fat_cantor(static_cast<unsigned>(as_count(spec, "depth")),
                          spec.get("lambda"));
  }
  if (n == "fat-cantor-strip") {
    return gen_fat_cantor_strip(static_cast<unsigned>(as_count(spec, "depth")),
                                spec.get("lambda"), as_count(spec, "n", 2));
  }
  if (n == "segment") {
    return gen_segment(as_count(spec, "n", 2), as_count(spec, "dim", 1),
                       as_count(spec, "axis"));
  }
  if (n == "grid") {
    return gen_grid(as_count(spec, "n", 1), as_count(spec, "dim", 1));
  }
  if (n == "point") {
    const std::size_t d = as_count(spec, "dim", 1);
    if (d > 4) throw Error(ErrorCode::invalid_argument, "point: dim must be <= 4");
    std::vector<double> c(d);
    for (std::size_t k = 0; k < d; ++k) c[k] = spec.get("x" + std::to_string(k));
    return gen_point(Point(std::move(c)));
  }
  throw Error(ErrorCode::internal, "unhandled compact set generator " + n);
}

// ---------------------------------------------------------------------------
// Enumerations

CountableEnumeration gaussian_rationals(std::size_t truncation) {
  return cached_enumeration("gaussian-rationals", 2, truncation,
                            gaussian_rationals_prefix);
}

CountableEnumeration rational_grid(std::size_t dim, std::size_t truncation) {
  if (dim == 0) throw Error(ErrorCode::invalid_argument, "rational-grid: d >= 1");
  return cached_enumeration(
      "rational-grid", dim, truncation,
      [dim](std::size_t count) { return rational_grid_prefix(dim, count); });
}

CountableEnumeration lattice_scaled(std::size_t dim, double scale,
                                    std::size_t truncation) {
  if (dim == 0 || !(scale > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "lattice-scaled: need d >= 1 and scale > 0");
  }
  return cached_enumeration("lattice-scaled", dim, truncation,
                            [dim, scale](std::size_t count) {
                              return lattice_prefix(dim, scale, count);
                            });
}

CountableEnumeration gen_enumeration(std::string_view name,
                                     const GeneratorSpec& spec) {
  const std::size_t n = as_count(spec, "N");
  if (name == "gaussian-rationals") return gaussian_rationals(n);
  if (name == "rational-grid") return rational_grid(as_count(spec, "d", 1), n);
  if (name == "lattice-scaled") {
    return lattice_scaled(as_count(spec, "d", 1), spec.get("scale"), n);
  }
  throw Error(ErrorCode::invalid_argument,
              "'" + std::string(name) + "' is not an enumeration");
}

CountableEnumeration make_enumeration(const GeneratorSpec& spec) {
  return gen_enumeration(spec.name, spec);
}

// ---------------------------------------------------------------------------
// Targets

Target gen_target(std::string_view name, std::size_t dim, bool complex) {
  Target t;
  t.name = std::string(name);
  if (name == "exp") {
    if (complex) {
      t.in_dim = t.out_dim = 2;
      t.complex = true;
      t.description = "f(z) = exp(z) on C";
      t.fn = [](std::span<const double> x, std::span<double> y) {
        const auto v = std::exp(std::complex<double>(x[0], x[1]));
        y[0] = v.real();
        y[1] = v.imag();
      };
    } else {
      t.in_dim = t.out_dim = dim;
      t.description = "componentwise exp on R^d";
      t.fn = [](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(x[i]);
      };
    }
  } else if (name == "identity") {
    t.in_dim = t.out_dim = dim;
    t.complex = complex && dim == 2;
    t.description = "f(x) = x";
    t.fn = [](std::span<const double> x, std::span<double> y) {
      std::copy(x.begin(), x.end(), y.begin());
    };
  } else if (name == "complex-square") {
    t.in_dim = t.out_dim = 2;
    t.complex = true;
    t.description = "f(z) = z^2 on C";
    t.fn = [](std::span<const double> x, std::span<double> y) {
      y[0] = x[0] * x[0] - x[1] * x[1];
      y[1] = 2.0 * x[0] * x[1];
    };
  } else if (name == "abs-offset") {
    t.in_dim = t.out_dim = dim;
    t.description = "componentwise f(x) = |x - 1/2|";
    t.fn = [](std::span<const double> x, std::span<double> y) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::fabs(x[i] - 0.5);
    };
  } else if (name == "rosenbrock-like") {
    t.in_dim = t.out_dim = 2;
    t.description = "f(x, y) = (1 - x, 10 (y - x^2))";
    t.fn = [](std::span<const double> x, std::span<double> y) {
      y[0] = 1.0 - x[0];
      y[1] = 10.0 * (x[1] - x[0] * x[0]);
    };
  } else if (name == "sin-product") {
    t.in_dim = t.out_dim = 2;
    t.description = "f(x, y) = (sin x + y, x y)";
    t.fn = [](std::span<const double> x, std::span<double> y) {
      y[0] = std::sin(x[0]) + x[1];
      y[1] = x[0] * x[1];
    };
  } else {
    throw Error(ErrorCode::parse, "unknown target '" + std::string(name) + "'");
  }
  if (t.in_dim == 0) {
    throw Error(ErrorCode::invalid_argument, "target dimension must be >= 1");
  }
  return t;
}

}  // namespace avoidpoly
