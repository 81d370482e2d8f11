// avoidpoly command line tool. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "avoidpoly/avoidpoly.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitCertified = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUncertified = 2;
constexpr int kExitStageFailure = 3;

struct Globals {
  std::optional<double> eps;
  std::optional<std::size_t> n_forbidden;
  std::optional<unsigned> max_degree;
  std::optional<std::string> method;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
};

// Owns a string returned by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { avp_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct CliError {
  int exit_code;
  std::string message;
};

void check(avp_status s, int exit_code = kExitUsage) {
  if (s != AVP_OK) {
    throw CliError{exit_code, std::string(avp_status_string(s)) + ": " + avp_last_error()};
  }
}

// Library failures that belong to a pipeline stage map to exit code 3.
int stage_exit(avp_status s) {
  return s == AVP_ERR_APPROXIMATION || s == AVP_ERR_SEARCH_EXHAUSTED ||
                 s == AVP_ERR_NUMERICAL
             ? kExitStageFailure
             : kExitUsage;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw CliError{kExitUsage, "cannot write '" + g.out + "'"};
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError{kExitUsage, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string with_n(const std::string& spec, std::optional<std::size_t> n) {
  if (!n) return spec;
  return spec + (spec.find(':') == std::string::npos ? ":" : ",") + "N=" + std::to_string(*n);
}

struct PointSet {
  avp_pointset* p = nullptr;
  ~PointSet() { avp_pointset_free(p); }
};

struct PolyMap {
  avp_polymap* p = nullptr;
  ~PolyMap() { avp_polymap_free(p); }
};

struct Record {
  avp_record* p = nullptr;
  ~Record() { avp_record_free(p); }
};

// A file path if one exists, else a generator spec.
void open_set(const std::string& source, PointSet& ps) {
  std::ifstream probe(source);
  if (probe.good()) {
    check(avp_pointset_load(source.c_str(), &ps.p));
  } else {
    check(avp_pointset_generate(source.c_str(), &ps.p));
  }
}

std::string fmt(double x, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string num_or_dash(const Json& v, const char* spec = "%.6g") {
  return v.is_number() ? fmt(v.get<double>(), spec) : std::string("-");
}

void print_certificate_table(const Json& cert, std::ostream& os) {
  os << "method " << cert["method"].get<std::string>() << ", |xi| = "
     << num_or_dash(cert["xi_norm"]) << " (budget " << num_or_dash(cert["eps_budget"])
     << "), image cover radius " << num_or_dash(cert["image_cover_radius"]) << "\n";
  os << "     j          delta            eps       realized        margin\n";
  for (const auto& row : cert["ledger"]) {
    char line[160];
    std::snprintf(line, sizeof line, "%6zu %14s %14s %14s %13s\n",
                  row["j"].get<std::size_t>(), num_or_dash(row["delta"]).c_str(),
                  num_or_dash(row["eps"]).c_str(), num_or_dash(row["realized"]).c_str(),
                  num_or_dash(row["certified_margin"]).c_str());
    os << line;
  }
  os << (cert["all_certified"].get<bool>() ? "all rows certified" : "some rows NOT certified")
     << ", min margin " << num_or_dash(cert["min_certified_margin"]) << "\n";
}

int exit_for_verdict(avp_verdict v) {
  switch (v) {
    case AVP_VERDICT_CERTIFIED: return kExitCertified;
    case AVP_VERDICT_UNCERTIFIED: return kExitUncertified;
    case AVP_VERDICT_FAILED: return kExitStageFailure;
  }
  return kExitStageFailure;
}

int run_config(Json cfg, const Globals& g) {
  if (g.eps) cfg["eps"] = *g.eps;
  if (g.max_degree) cfg["max_degree"] = *g.max_degree;
  if (g.method) cfg["method"] = *g.method;
  if (g.seed) cfg["seed"] = *g.seed;
  if (g.n_forbidden) cfg["enumeration"] = with_n(cfg.value("enumeration", std::string()), g.n_forbidden);
  const std::string text = cfg.dump();
  Record rec;
  check(avp_run(text.c_str(), &rec.p));
  LibString json;
  check(avp_record_serialize(rec.p, &json.p));
  emit(g, json.str());

  const Json r = Json::parse(json.str());
  std::cerr << "verdict: " << r["verdict"].get<std::string>();
  if (r["failed_stage"].is_string()) std::cerr << " (stage " << r["failed_stage"].get<std::string>() << ")";
  std::cerr << "\nfit degree " << r["fit"]["degree"].get<unsigned>() << ", fit error "
            << num_or_dash(r["fit"]["achieved_error"]) << ", final sup error "
            << num_or_dash(r["final_sup_error"]) << ", L*h " << num_or_dash(r["image_cover_radius"]);
  if (r["verification"].is_object()) {
    std::cerr << ", min margin " << num_or_dash(r["verification"]["min_margin"]);
  }
  std::cerr << "\n";
  if (!r["message"].get<std::string>().empty()) {
    std::cerr << r["message"].get<std::string>() << "\n";
  }
  return exit_for_verdict(avp_record_verdict(rec.p));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial approximation with value avoidance on sampled compact sets"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--eps", g.eps, "Approximation tolerance eps")->check(CLI::PositiveNumber);
  app.add_option("--n-forbidden", g.n_forbidden, "Truncation N of the forbidden enumeration");
  app.add_option("--max-degree", g.max_degree, "Largest polynomial degree tried");
  app.add_option("--method", g.method, "Shift search method")->check(CLI::IsMember({"det", "rand"}));
  app.add_option("--seed", g.seed, "Seed for the randomized shift search");
  app.add_option("--out", g.out, "Write the main output here instead of stdout");
  app.add_option("--format", g.format, "Point-set output format")
      ->check(CLI::IsMember({"json", "csv"}));

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a point set or truncated enumeration");
  std::string gen_spec;
  gen->add_option("spec", gen_spec, "Generator spec, e.g. cantor:depth=8")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a polynomial to a target on a point set");
  std::string fit_set, fit_target, fit_basis;
  std::optional<double> fit_budget;
  fit->add_option("--set", fit_set, "Point-set file or generator spec")->required();
  fit->add_option("--target", fit_target, "Target function spec")->required();
  fit->add_option("--basis", fit_basis, "complex-monomial, monomial or chebyshev");
  fit->add_option("--budget", fit_budget, "Sup-error budget (default eps/2)");

  // avoid
  auto* avoid = app.add_subcommand("avoid", "Shift a sample set off a forbidden enumeration");
  std::string avoid_set, avoid_enum;
  std::optional<double> avoid_budget;
  std::size_t trials = 64;
  avoid->add_option("--set", avoid_set,
                    "Point-set file or spec; its resolution is the cover radius")
      ->required();
  avoid->add_option("--enum", avoid_enum, "Enumeration spec, e.g. gaussian-rationals:N=200")
      ->required();
  avoid->add_option("--budget", avoid_budget, "Shift budget (default eps/2)");
  avoid->add_option("--trials", trials, "Trials for the randomized method");

  // dim
  auto* dim = app.add_subcommand("dim", "Box-counting dimension estimate");
  std::string dim_set, dim_svg;
  int base = 0, kmin = 0, kmax = 0;
  bool coverage = false;
  dim->add_option("--set", dim_set, "Point-set file or generator spec")->required();
  dim->add_option("--base", base, "Ladder base (0 = dyadic ladder sized to the set)");
  dim->add_option("--kmin", kmin, "Smallest exponent k of base^-k");
  dim->add_option("--kmax", kmax, "Largest exponent k of base^-k");
  dim->add_option("--svg", dim_svg, "Write a log-log plot to this path");
  dim->add_flag("--coverage", coverage, "Also report the coverage profile");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a polynomial image against forbidden points");
  std::string ver_map, ver_set, ver_enum;
  double ver_lip = -1.0;
  verify->add_option("--map", ver_map, "PolynomialMap JSON file")->required();
  verify->add_option("--set", ver_set, "Point-set file or generator spec")->required();
  verify->add_option("--enum", ver_enum, "Enumeration spec")->required();
  verify->add_option("--lipschitz", ver_lip, "Lipschitz constant (default: computed bound)");

  // run
  auto* run = app.add_subcommand("run", "Full pipeline: approximate, shift, verify");
  std::string run_config_path, run_set, run_target, run_enum;
  run->add_option("--config", run_config_path, "Run config JSON file");
  run->add_option("--set", run_set, "Point-set file or generator spec");
  run->add_option("--target", run_target, "Target function spec");
  run->add_option("--enum", run_enum, "Enumeration spec");

  // demo
  auto* demo = app.add_subcommand("demo", "Run a named scenario");
  std::string demo_name;
  demo->add_option("name", demo_name, "theorem2-cantor-exp, theorem4-dust or fat-cantor-strip")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      PointSet ps;
      std::string spec = gen_spec;
      if (g.n_forbidden) spec = with_n(spec, g.n_forbidden);
      check(avp_pointset_generate(spec.c_str(), &ps.p));
      LibString s;
      check(avp_pointset_serialize(ps.p, g.format.c_str(), &s.p));
      emit(g, s.str());
      return kExitCertified;
    }

    if (*fit) {
      PointSet ps;
      open_set(fit_set, ps);
      avp_fit_options opts;
      avp_fit_options_init(&opts);
      if (!fit_basis.empty()) opts.basis = fit_basis.c_str();
      if (g.max_degree) opts.max_degree = *g.max_degree;
      opts.budget = fit_budget ? *fit_budget : 0.5 * g.eps.value_or(1e-2);
      PolyMap map;
      double achieved = 0.0;
      const avp_status s = avp_fit(ps.p, fit_target.c_str(), &opts, &map.p, &achieved);
      if (s == AVP_ERR_APPROXIMATION) {
        std::cerr << avp_last_error() << "\nbest sup error " << fmt(achieved) << "\n";
        return kExitStageFailure;
      }
      check(s, stage_exit(s));
      LibString json;
      check(avp_polymap_serialize(map.p, &json.p));
      emit(g, json.str());
      std::cerr << "sup error " << fmt(achieved) << " (budget " << fmt(opts.budget) << ")\n";
      return kExitCertified;
    }

    if (*avoid) {
      PointSet ps;
      open_set(avoid_set, ps);
      avp_avoid_options opts;
      avp_avoid_options_init(&opts);
      opts.eps_budget = avoid_budget ? *avoid_budget : 0.5 * g.eps.value_or(1e-2);
      opts.method = g.method.value_or("det") == "rand" ? AVP_METHOD_RANDOMIZED
                                                       : AVP_METHOD_DETERMINISTIC;
      if (g.seed) opts.seed = *g.seed;
      opts.trials = trials;
      const std::string spec = with_n(avoid_enum, g.n_forbidden);
      LibString cert;
      const avp_status s = avp_avoid(ps.p, spec.c_str(), &opts, &cert.p);
      check(s, stage_exit(s));
      emit(g, cert.str());
      const Json j = Json::parse(cert.str());
      print_certificate_table(j, std::cerr);
      return j["all_certified"].get<bool>() ? kExitCertified : kExitUncertified;
    }

    if (*dim) {
      PointSet ps;
      open_set(dim_set, ps);
      LibString json;
      check(avp_dimension_report(ps.p, base, kmin, kmax, &json.p));
      Json report = Json::parse(json.str());
      std::cerr << "       scale        count\n";
      for (std::size_t i = 0; i < report["scales"].size(); ++i) {
        char line[96];
        std::snprintf(line, sizeof line, "%12.6g %12llu\n", report["scales"][i].get<double>(),
                      static_cast<unsigned long long>(report["counts"][i].get<std::uint64_t>()));
        std::cerr << line;
      }
      std::cerr << "slope " << fmt(report["slope"].get<double>(), "%.4f") << ", r2 "
                << fmt(report["r2"].get<double>(), "%.4f") << " (empirical)\n";
      if (coverage) {
        LibString cov;
        check(avp_coverage_report(ps.p, base, kmin, kmax, &cov.p));
        report = Json{{"dimension", report}, {"coverage", Json::parse(cov.str())}};
      }
      if (!dim_svg.empty()) {
        LibString svg;
        check(avp_dimension_svg(ps.p, base, kmin, kmax, nullptr, &svg.p));
        std::ofstream f(dim_svg, std::ios::binary);
        if (!f) throw CliError{kExitUsage, "cannot write '" + dim_svg + "'"};
        f << svg.str();
      }
      emit(g, report.dump(2) + "\n");
      return kExitCertified;
    }

    if (*verify) {
      PolyMap map;
      check(avp_polymap_parse(read_text(ver_map).c_str(), &map.p));
      PointSet ps;
      open_set(ver_set, ps);
      const std::string spec = with_n(ver_enum, g.n_forbidden);
      LibString json;
      avp_avoidance_status status = AVP_AVOID_VIOLATED;
      check(avp_verify(map.p, ps.p, spec.c_str(), ver_lip, &json.p, &status));
      emit(g, json.str());
      const Json r = Json::parse(json.str());
      std::cerr << r["status"].get<std::string>() << ", min margin "
                << num_or_dash(r["min_margin"]) << ", L*h "
                << num_or_dash(r["image_cover_radius"]) << "\n";
      return status == AVP_AVOID_CERTIFIED        ? kExitCertified
             : status == AVP_AVOID_UNCERTIFIED_POSITIVE ? kExitUncertified
                                                   : kExitStageFailure;
    }

    if (*run) {
      Json cfg = Json::object();
      if (!run_config_path.empty()) cfg = Json::parse(read_text(run_config_path));
      if (!run_set.empty()) cfg["set"] = run_set;
      if (!run_target.empty()) cfg["target"] = run_target;
      if (!run_enum.empty()) cfg["enumeration"] = run_enum;
      for (const char* key : {"set", "target", "enumeration"}) {
        if (!cfg.contains(key)) {
          throw CliError{kExitUsage, std::string("run needs --") +
                                         (std::string(key) == "enumeration" ? "enum" : key) +
                                         " or a --config providing it"};
        }
      }
      return run_config(std::move(cfg), g);
    }

    if (*demo) {
      LibString cfg;
      check(avp_demo_config(demo_name.c_str(), &cfg.p));
      return run_config(Json::parse(cfg.str()), g);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
