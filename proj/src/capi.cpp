#include "avoidpoly/avoidpoly.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "avoidpoly/error.hpp"
#include "avoidpoly/generators.hpp"
#include "avoidpoly/io.hpp"
#include "avoidpoly/pipeline.hpp"

using namespace avoidpoly;

struct avp_pointset {
  SampledCompactSet set;
};
struct avp_polymap {
  PolynomialMap map;
};
struct avp_record {
  RunRecord record;
};

namespace {

thread_local std::string g_last_error;

avp_status set_error(avp_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
avp_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return AVP_OK;
  } catch (const Error& e) {
    return set_error(static_cast<avp_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(AVP_ERR_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return set_error(AVP_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(AVP_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::invalid_argument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ScaleLadder ladder_for(const SampledCompactSet& set, int base, int kmin, int kmax) {
  if (base == 0) return ScaleLadder::default_for(set);
  return ScaleLadder::geometric(base, kmin, kmax);
}

}  // namespace

extern "C" {

const char* avp_version(void) { return "1.0.0"; }

const char* avp_status_string(avp_status status) {
  switch (status) {
    case AVP_OK: return "ok";
    case AVP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AVP_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case AVP_ERR_CAPACITY: return "capacity exceeded";
    case AVP_ERR_NUMERICAL: return "numerical failure";
    case AVP_ERR_APPROXIMATION: return "approximation budget not reached";
    case AVP_ERR_SEARCH_EXHAUSTED: return "shift search exhausted";
    case AVP_ERR_IO: return "i/o error";
    case AVP_ERR_PARSE: return "parse error";
    case AVP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* avp_last_error(void) { return g_last_error.c_str(); }

void avp_string_free(char* s) { std::free(s); }

// ---- Point sets -------------------------------------------------------------

avp_status avp_pointset_generate(const char* spec, avp_pointset** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = nullptr;
    *out = new avp_pointset{make_compact_set(parse_generator_spec(spec))};
  });
}

avp_status avp_pointset_load(const char* path, avp_pointset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new avp_pointset{load_point_set(path)};
  });
}

avp_status avp_pointset_parse(const char* text, const char* format, avp_pointset** out) {
  return guarded([&] {
    require(text, "text");
    require(format, "format");
    require(out, "out");
    *out = nullptr;
    const std::string f(format);
    if (f == "json") {
      *out = new avp_pointset{point_set_from_json(parse_json(text))};
    } else if (f == "csv") {
      *out = new avp_pointset{point_set_from_csv(text)};
    } else {
      throw Error(ErrorCode::invalid_argument, "format must be json or csv");
    }
  });
}

avp_status avp_pointset_serialize(const avp_pointset* set, const char* format, char** out) {
  return guarded([&] {
    require(set, "set");
    require(format, "format");
    require(out, "out");
    *out = nullptr;
    const std::string f(format);
    if (f == "json") {
      *out = dup_string(dump_json(point_set_to_json(set->set)));
    } else if (f == "csv") {
      *out = dup_string(point_set_to_csv(set->set));
    } else {
      throw Error(ErrorCode::invalid_argument, "format must be json or csv");
    }
  });
}

size_t avp_pointset_size(const avp_pointset* set) { return set ? set->set.size() : 0; }
size_t avp_pointset_dim(const avp_pointset* set) { return set ? set->set.dim() : 0; }
double avp_pointset_resolution(const avp_pointset* set) {
  return set ? set->set.resolution_h() : 0.0;
}

avp_status avp_pointset_point(const avp_pointset* set, size_t i, double* coords,
                              size_t capacity) {
  return guarded([&] {
    require(set, "set");
    require(coords, "coords");
    if (i >= set->set.size()) throw Error(ErrorCode::invalid_argument, "index out of range");
    if (capacity < set->set.dim()) {
      throw Error(ErrorCode::dimension_mismatch, "buffer smaller than the dimension");
    }
    const auto p = set->set.point(i);
    std::copy(p.begin(), p.end(), coords);
  });
}

void avp_pointset_free(avp_pointset* set) { delete set; }

// ---- Dimension --------------------------------------------------------------

avp_status avp_dimension_report(const avp_pointset* set, int base, int kmin, int kmax,
                                char** json) {
  return guarded([&] {
    require(set, "set");
    require(json, "json");
    *json = nullptr;
    const auto est = estimate_box_dimension(set->set, ladder_for(set->set, base, kmin, kmax));
    *json = dup_string(dump_json(to_json(est)));
  });
}

avp_status avp_dimension_svg(const avp_pointset* set, int base, int kmin, int kmax,
                             const char* title, char** svg) {
  return guarded([&] {
    require(set, "set");
    require(svg, "svg");
    *svg = nullptr;
    const auto est = estimate_box_dimension(set->set, ladder_for(set->set, base, kmin, kmax));
    *svg = dup_string(loglog_svg(est, title ? title : set->set.label()));
  });
}

avp_status avp_coverage_report(const avp_pointset* set, int base, int kmin, int kmax,
                               char** json) {
  return guarded([&] {
    require(set, "set");
    require(json, "json");
    *json = nullptr;
    const auto ladder = ladder_for(set->set, base, kmin, kmax);
    *json = dup_string(dump_json(to_json(coverage_profile(set->set, ladder.scales()))));
  });
}

avp_status avp_condition_report(const avp_pointset* k, const char* enumeration,
                                size_t ambient_dim, char** json) {
  return guarded([&] {
    require(k, "k");
    require(enumeration, "enumeration");
    require(json, "json");
    *json = nullptr;
    const auto a = resolve_enumeration(enumeration, ambient_dim);
    *json = dup_string(dump_json(to_json(condition_report(k->set, a, ambient_dim))));
  });
}

// ---- Polynomials ------------------------------------------------------------

void avp_fit_options_init(avp_fit_options* options) {
  if (!options) return;
  options->basis = nullptr;
  options->max_degree = 12;
  options->budget = 5e-3;
}

avp_status avp_fit(const avp_pointset* k, const char* target,
                   const avp_fit_options* options, avp_polymap** out, double* achieved) {
  return guarded([&] {
    require(k, "k");
    require(target, "target");
    require(out, "out");
    *out = nullptr;
    avp_fit_options opts;
    avp_fit_options_init(&opts);
    if (options) opts = *options;
    const Target f = resolve_target(target, k->set);
    const Basis basis =
        opts.basis ? basis_from_string(opts.basis)
                   : (k->set.is_complex_plane() && f.complex ? Basis::complex_monomial
                                                             : Basis::monomial);
    try {
      auto res = approximate_to_tolerance(f, k->set, opts.budget, opts.max_degree, basis);
      if (achieved) *achieved = res.achieved_error;
      *out = new avp_polymap{std::move(res.map)};
    } catch (const ApproximationFailure& e) {
      if (achieved) *achieved = e.best_error();
      throw;
    }
  });
}

avp_status avp_polymap_parse(const char* json, avp_polymap** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    *out = new avp_polymap{polynomial_from_json(parse_json(json))};
  });
}

avp_status avp_polymap_serialize(const avp_polymap* map, char** json) {
  return guarded([&] {
    require(map, "map");
    require(json, "json");
    *json = nullptr;
    *json = dup_string(dump_json(to_json(map->map)));
  });
}

size_t avp_polymap_domain_dim(const avp_polymap* map) {
  return map ? map->map.domain_dim() : 0;
}
size_t avp_polymap_codomain_dim(const avp_polymap* map) {
  return map ? map->map.codomain_dim() : 0;
}

avp_status avp_polymap_evaluate(const avp_polymap* map, const double* x, size_t n,
                                double* y, size_t m) {
  return guarded([&] {
    require(map, "map");
    require(x, "x");
    require(y, "y");
    if (n != map->map.domain_dim() || m != map->map.codomain_dim()) {
      throw Error(ErrorCode::dimension_mismatch, "buffer sizes do not match the map");
    }
    map->map.evaluate_into({x, n}, {y, m});
  });
}

avp_status avp_polymap_lipschitz(const avp_polymap* map, const avp_pointset* k,
                                 double* out) {
  return guarded([&] {
    require(map, "map");
    require(k, "k");
    require(out, "out");
    *out = lipschitz_bound(map->map, k->set.bounds());
  });
}

void avp_polymap_free(avp_polymap* map) { delete map; }

// ---- Avoidance --------------------------------------------------------------

void avp_avoid_options_init(avp_avoid_options* options) {
  if (!options) return;
  const RandomizedOptions r;
  options->eps_budget = 5e-3;
  options->method = AVP_METHOD_DETERMINISTIC;
  options->seed = r.seed;
  options->trials = r.trials;
  options->batch = r.batch;
  options->lookahead = ProbePolicy{}.lookahead;
}

avp_status avp_avoid(const avp_pointset* s, const char* enumeration,
                     const avp_avoid_options* options, char** certificate_json) {
  return guarded([&] {
    require(s, "s");
    require(enumeration, "enumeration");
    require(certificate_json, "certificate_json");
    *certificate_json = nullptr;
    avp_avoid_options opts;
    avp_avoid_options_init(&opts);
    if (options) opts = *options;
    const auto a = resolve_enumeration(enumeration, s->set.dim());
    ShiftCertificate cert;
    if (opts.method == AVP_METHOD_RANDOMIZED) {
      cert = shift_search_randomized(s->set, a, opts.eps_budget,
                                     {opts.trials, opts.seed, opts.batch});
    } else {
      ProbePolicy policy;
      policy.lookahead = opts.lookahead;
      cert = shift_search_deterministic(s->set, a, opts.eps_budget, policy);
    }
    *certificate_json = dup_string(dump_json(to_json(cert)));
  });
}

avp_status avp_verify(const avp_polymap* map, const avp_pointset* k, const char* enumeration,
                      double lipschitz, char** json, avp_avoidance_status* status) {
  return guarded([&] {
    require(map, "map");
    require(k, "k");
    require(enumeration, "enumeration");
    if (json) *json = nullptr;
    const auto a = resolve_enumeration(enumeration, map->map.codomain_dim());
    const auto rep = verify_avoidance(
        map->map, k->set, a, lipschitz < 0.0 ? std::nullopt : std::optional<double>(lipschitz));
    if (status) {
      *status = rep.status == AvoidanceStatus::certified ? AVP_AVOID_CERTIFIED
                : rep.status == AvoidanceStatus::uncertified_positive
                    ? AVP_AVOID_UNCERTIFIED_POSITIVE
                    : AVP_AVOID_VIOLATED;
    }
    if (json) *json = dup_string(dump_json(to_json(rep)));
  });
}

// ---- Pipeline ---------------------------------------------------------------

avp_status avp_run(const char* config_json, avp_record** out) {
  return guarded([&] {
    require(config_json, "config_json");
    require(out, "out");
    *out = nullptr;
    const RunConfig cfg = run_config_from_json(parse_json(config_json));
    *out = new avp_record{run_from_config(cfg)};
  });
}

avp_status avp_demo_config(const char* name, char** config_json) {
  return guarded([&] {
    require(name, "name");
    require(config_json, "config_json");
    *config_json = nullptr;
    *config_json = dup_string(dump_json(to_json(demo_config(name))));
  });
}

avp_status avp_record_serialize(const avp_record* record, char** json) {
  return guarded([&] {
    require(record, "record");
    require(json, "json");
    *json = nullptr;
    *json = dup_string(dump_json(to_json(record->record)));
  });
}

avp_verdict avp_record_verdict(const avp_record* record) {
  if (!record) return AVP_VERDICT_FAILED;
  switch (record->record.verdict) {
    case Verdict::certified: return AVP_VERDICT_CERTIFIED;
    case Verdict::uncertified: return AVP_VERDICT_UNCERTIFIED;
    case Verdict::failed: return AVP_VERDICT_FAILED;
  }
  return AVP_VERDICT_FAILED;
}

void avp_record_free(avp_record* record) { delete record; }

}  // extern "C"
