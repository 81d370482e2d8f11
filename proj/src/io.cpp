#include "avoidpoly/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "avoidpoly/error.hpp"

namespace avoidpoly {

namespace {

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json num_array(std::span<const double> xs) {
  Json arr = Json::array();
  for (double x : xs) arr.push_back(num(x));
  return arr;
}

Json box_json(const BoundingBox& b) {
  return Json{{"lo", num_array(b.lo)}, {"hi", num_array(b.hi)}};
}

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) {
    throw Error(ErrorCode::parse, std::string(what) + ": expected an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw Error(ErrorCode::parse, std::string(what) + ": expected numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::parse, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view s) {
  const std::string str(trim(s));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (str.empty() || used != str.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::parse, "not a finite number: '" + str + "'");
  }
  return v;
}

std::string_view method_flag(ShiftMethod m) {
  return m == ShiftMethod::deterministic ? "det" : "rand";
}

}  // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Point sets

Json point_set_to_json(const SampledCompactSet& set) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < set.size(); ++i) pts.push_back(num_array(set.point(i)));
  Json j{{"dim", set.dim()}, {"resolution_h", set.resolution_h()}};
  if (!set.label().empty()) j["label"] = set.label();
  if (set.is_complex_plane()) j["is_complex_plane"] = true;
  j["points"] = std::move(pts);
  return j;
}

SampledCompactSet point_set_from_json(const Json& j) {
  const auto dim = field(j, "dim").get<std::size_t>();
  const double h = j.contains("resolution_h") ? j.at("resolution_h").get<double>() : 0.0;
  const auto& pts = field(j, "points");
  if (!pts.is_array()) throw Error(ErrorCode::parse, "points: expected an array");
  std::vector<double> flat;
  flat.reserve(pts.size() * dim);
  for (const auto& p : pts) {
    const auto c = doubles(p, "point");
    if (c.size() != dim) {
      throw Error(ErrorCode::dimension_mismatch, "point has the wrong dimension");
    }
    flat.insert(flat.end(), c.begin(), c.end());
  }
  return SampledCompactSet(dim, std::move(flat), h, j.value("label", std::string{}),
                           j.value("is_complex_plane", false));
}

std::string point_set_to_csv(const SampledCompactSet& set) {
  std::ostringstream os;
  os.precision(17);
  os << "# resolution_h=" << set.resolution_h() << "\n";
  for (std::size_t k = 0; k < set.dim(); ++k) os << (k ? "," : "") << 'x' << k;
  os << "\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto p = set.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) os << (k ? "," : "") << p[k];
    os << "\n";
  }
  return os.str();
}

SampledCompactSet point_set_from_csv(std::string_view text,
                                     double default_resolution) {
  double h = default_resolution;
  std::size_t dim = 0;
  bool header_seen = false;
  std::vector<double> flat;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "resolution_h=";
      line = trim(line.substr(1));
      if (line.substr(0, key.size()) == key) h = parse_double(line.substr(key.size()));
      continue;
    }
    std::vector<std::string_view> cells;
    for (std::size_t pos = 0;;) {
      const auto comma = line.find(',', pos);
      cells.push_back(trim(line.substr(pos, comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!header_seen) {
      header_seen = true;
      dim = cells.size();
      for (std::size_t k = 0; k < dim; ++k) {
        if (cells[k] != "x" + std::to_string(k)) {
          throw Error(ErrorCode::parse, "CSV header must be x0,...,x{d-1}");
        }
      }
      continue;
    }
    if (cells.size() != dim) {
      throw Error(ErrorCode::parse,
                  "CSV line " + std::to_string(line_no) + " has the wrong column count");
    }
    for (auto c : cells) flat.push_back(parse_double(c));
  }
  if (!header_seen) throw Error(ErrorCode::parse, "CSV has no header");
  return SampledCompactSet(dim, std::move(flat), h);
}

SampledCompactSet load_point_set(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return point_set_from_json(parse_json(text));
  }
  return point_set_from_csv(text);
}

Json to_json(const Point& p) { return num_array(p.coords()); }

// ---------------------------------------------------------------------------
// Polynomials

Json to_json(const PolynomialMap& p) {
  Json j{{"basis", std::string(to_string(p.basis()))},
         {"n", p.domain_dim()},
         {"m", p.codomain_dim()},
         {"degree", p.degree()},
         {"prescale",
          Json{{"center", num_array(p.prescale().center)},
               {"scale", num_array(p.prescale().scale)}}},
         {"coeffs", num_array(p.coefficients())}};
  if (const auto& hint = p.lipschitz_hint()) {
    j["lipschitz_hint"] = Json{{"value", num(hint->value)}, {"box", box_json(hint->box)}};
  } else {
    j["lipschitz_hint"] = nullptr;
  }
  return j;
}

PolynomialMap polynomial_from_json(const Json& j) {
  try {
    const Basis basis = basis_from_string(field(j, "basis").get<std::string>());
    const auto n = field(j, "n").get<std::size_t>();
    const auto m = field(j, "m").get<std::size_t>();
    const auto degree = field(j, "degree").get<unsigned>();
    const auto& pre = field(j, "prescale");
    Prescale prescale{doubles(field(pre, "center"), "prescale.center"),
                      doubles(field(pre, "scale"), "prescale.scale")};
    PolynomialMap map(basis, n, m, degree, std::move(prescale),
                      doubles(field(j, "coeffs"), "coeffs"));
    if (j.contains("lipschitz_hint") && j.at("lipschitz_hint").is_object()) {
      const auto& h = j.at("lipschitz_hint");
      const auto& box = field(h, "box");
      map.set_lipschitz_hint({field(h, "value").get<double>(),
                              {doubles(field(box, "lo"), "box.lo"),
                               doubles(field(box, "hi"), "box.hi")}});
    }
    return map;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("polynomial JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Dimension reports

Json to_json(const DimensionEstimate& d) {
  Json j{{"slope", num(d.slope)},
         {"scales", num_array(d.scales)},
         {"counts", d.counts},
         {"r2", num(d.r2)}};
  if (d.forced_countable) j["forced_countable"] = true;
  return j;
}

Json to_json(const CoverageProfile& c) {
  return Json{{"scales", num_array(c.scales)},
              {"fractions", num_array(c.fractions)},
              {"strictly_decreasing", c.strictly_decreasing()}};
}

Json to_json(const SumDimReport& r) {
  return Json{{"check", "empirical"},
              {"sign", r.sign == SumSign::plus ? "+" : "-"},
              {"a", to_json(r.a)},
              {"k", to_json(r.k)},
              {"sum", to_json(r.sum)},
              {"tolerance", r.tolerance},
              {"bound", num(r.bound)},
              {"holds", r.holds}};
}

Json to_json(const ConditionReport& r) {
  return Json{{"check", "empirical"},
              {"ambient_dim", r.ambient_dim},
              {"k", to_json(r.k)},
              {"a", to_json(r.a)},
              {"slack", num(r.check.slack)},
              {"safety_margin", r.check.safety_margin},
              {"holds", r.check.holds}};
}

// ---------------------------------------------------------------------------
// Avoidance

Json to_json(const ShiftCertificate& c) {
  Json ledger = Json::array();
  for (const auto& row : c.ledger) {
    ledger.push_back(Json{{"j", row.j},
                          {"a", to_json(row.a)},
                          {"delta", num(row.delta)},
                          {"eps", num(row.eps)},
                          {"realized", num(row.realized)},
                          {"certified_margin", num(row.certified_margin(c.image_cover_radius))},
                          {"xi_j", to_json(row.xi_j)}});
  }
  Json j{{"method", std::string(to_string(c.method))},
         {"xi", to_json(c.xi)},
         {"xi_norm", num(c.xi.norm())},
         {"eps_budget", num(c.eps_budget)},
         {"eps0", num(c.eps0)},
         {"image_cover_radius", num(c.image_cover_radius)}};
  if (c.method == ShiftMethod::randomized) j["trials_used"] = c.trials_used;
  j["all_certified"] = c.all_certified();
  j["min_certified_margin"] = num(c.min_certified_margin());
  j["ledger"] = std::move(ledger);
  return j;
}

Json to_json(const AvoidanceReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"j", row.j},
                        {"a", to_json(row.a)},
                        {"sample_distance", num(row.sample_distance)},
                        {"margin", num(row.margin)}});
  }
  return Json{{"status", std::string(to_string(r.status))},
              {"lipschitz", num(r.lipschitz)},
              {"image_cover_radius", num(r.image_cover_radius)},
              {"min_margin", num(r.min_margin)},
              {"min_sample_distance", num(r.min_sample_distance)},
              {"rows", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// Runs

Json to_json(const RunConfig& c) {
  const auto& p = c.pipeline;
  Json j{{"set", c.set}, {"target", c.target}, {"enumeration", c.enumeration},
         {"eps", num(p.eps)}, {"split", num(p.split)}, {"max_degree", p.max_degree}};
  j["basis"] = p.basis ? Json(std::string(to_string(*p.basis))) : Json(nullptr);
  j["method"] = std::string(method_flag(p.method));
  j["seed"] = p.randomized.seed;
  j["trials"] = p.randomized.trials;
  j["batch"] = p.randomized.batch;
  j["probe"] = Json{{"ring_fractions", num_array(p.probe.ring_fractions)},
                    {"directions_per_ring", p.probe.directions_per_ring},
                    {"lookahead", p.probe.lookahead}};
  j["condition_report"] = p.condition_report;
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::parse, "run config must be a JSON object");
  RunConfig c;
  try {
    c.set = field(j, "set").get<std::string>();
    c.target = field(j, "target").get<std::string>();
    c.enumeration = field(j, "enumeration").get<std::string>();
    auto& p = c.pipeline;
    p.eps = j.value("eps", p.eps);
    p.split = j.value("split", p.split);
    p.max_degree = j.value("max_degree", p.max_degree);
    if (j.contains("basis") && !j.at("basis").is_null()) {
      p.basis = basis_from_string(j.at("basis").get<std::string>());
    }
    const std::string method = j.value("method", std::string("det"));
    if (method == "det" || method == "deterministic") {
      p.method = ShiftMethod::deterministic;
    } else if (method == "rand" || method == "randomized") {
      p.method = ShiftMethod::randomized;
    } else {
      throw Error(ErrorCode::parse, "method must be det or rand");
    }
    p.randomized.seed = j.value("seed", p.randomized.seed);
    p.randomized.trials = j.value("trials", p.randomized.trials);
    p.randomized.batch = j.value("batch", p.randomized.batch);
    if (j.contains("probe")) {
      const auto& pr = j.at("probe");
      if (pr.contains("ring_fractions")) {
        p.probe.ring_fractions = doubles(pr.at("ring_fractions"), "ring_fractions");
      }
      p.probe.directions_per_ring =
          pr.value("directions_per_ring", p.probe.directions_per_ring);
      p.probe.lookahead = pr.value("lookahead", p.probe.lookahead);
    }
    p.condition_report = j.value("condition_report", p.condition_report);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("run config: ") + e.what());
  }
  return c;
}

Json to_json(const RunRecord& r) {
  RunConfig cfg{r.inputs.set, r.inputs.target, r.inputs.enumeration, r.config};
  Json j{{"schema", 1}, {"config", to_json(cfg)}, {"n_forbidden", r.n_forbidden},
         {"basis", std::string(to_string(r.basis))}};
  j["fit"] = Json{{"degree", r.fit_degree},
                  {"achieved_error", num(r.achieved_fit_error)},
                  {"budget", num(r.config.split * r.config.eps)},
                  {"error_by_degree", num_array(r.error_by_degree)}};
  j["q"] = r.q ? to_json(*r.q) : Json(nullptr);
  j["lipschitz"] = num(r.lipschitz);
  j["image_cover_radius"] = num(r.image_cover_radius);
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  j["p"] = r.p ? to_json(*r.p) : Json(nullptr);
  j["verification"] = r.verification ? to_json(*r.verification) : Json(nullptr);
  j["final_sup_error"] = r.final_sup_error ? num(*r.final_sup_error) : Json(nullptr);
  j["verdict"] = std::string(to_string(r.verdict));
  j["failed_stage"] = r.failed_stage.empty() ? Json(nullptr) : Json(r.failed_stage);
  j["message"] = r.message;
  j["condition"] = r.condition ? to_json(*r.condition) : Json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// SVG

std::string loglog_svg(const DimensionEstimate& d, const std::string& title) {
  constexpr double W = 480, H = 360, M = 50;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < d.scales.size(); ++i) {
    xs.push_back(std::log(1.0 / d.scales[i]));
    ys.push_back(std::log(static_cast<double>(std::max<std::uint64_t>(d.counts[i], 1))));
  }
  auto range = [](const std::vector<double>& v) {
    if (v.empty()) return std::pair{0.0, 1.0};
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double a = *lo, b = *hi;
    if (b - a < 1e-12) { a -= 0.5; b += 0.5; }
    return std::pair{a, b};
  };
  const auto [x0, x1] = range(xs);
  const auto [y0, y1] = range(ys);
  auto px = [&, x0 = x0, x1 = x1](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  auto py = [&, y0 = y0, y1 = y1](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };

  std::string escaped;
  for (char ch : title) {
    switch (ch) {
      case '<': escaped += "&lt;"; break;
      case '>': escaped += "&gt;"; break;
      case '&': escaped += "&amp;"; break;
      default: escaped += ch;
    }
  }

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n",
                W, H);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.0f\" y1=\"%.0f\" x2=\"%.0f\" y2=\"%.0f\" stroke=\"black\"/>\n",
                M, H - M, W - M, H - M);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.0f\" y1=\"%.0f\" x2=\"%.0f\" y2=\"%.0f\" stroke=\"black\"/>\n",
                M, M, M, H - M);
  out += buf;
  out += "<text x=\"" + std::to_string(static_cast<int>(W / 2)) +
         "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + escaped + "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"middle\" font-size=\"12\">"
                "log(1/s)</text>\n",
                W / 2, H - 12);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"14\" y=\"%.0f\" font-size=\"12\" transform=\"rotate(-90 14 %.0f)\">"
                "log N(s)</text>\n",
                H / 2, H / 2);
  out += buf;

  if (!xs.empty()) {
    // Least-squares line through the centroid with the estimated slope.
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    const double slope = std::isfinite(d.slope) && !d.forced_countable
                             ? d.slope
                             : 0.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"steelblue\"/>\n",
                  px(x0), py(my + slope * (x0 - mx)), px(x1), py(my + slope * (x1 - mx)));
    out += buf;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"firebrick\"/>\n",
                  px(xs[i]), py(ys[i]));
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"44\" font-size=\"12\">slope %.4f, r2 %.4f</text>\n",
                M + 8, d.slope, d.r2);
  out += buf;
  out += "</svg>\n";
  return out;
}

}  // namespace avoidpoly
