#include "avoidpoly/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "avoidpoly/error.hpp"
#include "avoidpoly/generators.hpp"
#include "avoidpoly/io.hpp"

namespace avoidpoly {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::uncertified: return "uncertified";
    case Verdict::failed: return "failed";
  }
  return "failed";
}

ConditionReport condition_report(const SampledCompactSet& k,
                                 const CountableEnumeration& a,
                                 std::size_t ambient_dim) {
  ConditionReport rep;
  rep.ambient_dim = ambient_dim;
  rep.k = estimate_box_dimension(k, ScaleLadder::default_for(k));
  if (a.truncation() == 0) {
    rep.a.slope = 0.0;
    rep.a.forced_countable = true;
  } else {
    const auto pts = SampledCompactSet::from_points(a.truncated_points(), 0.0,
                                                    a.name());
    rep.a = countable_dimension(pts, ScaleLadder::default_for(pts));
  }
  rep.check = check_avoidance_condition(rep.k, rep.a, ambient_dim);
  return rep;
}

namespace {

void fail(RunRecord& rec, std::string stage, std::string message) {
  rec.verdict = Verdict::failed;
  rec.failed_stage = std::move(stage);
  rec.message = std::move(message);
}

}  // namespace

RunRecord avoid_approximate(const Target& f, const SampledCompactSet& k,
                            const CountableEnumeration& a,
                            const PipelineConfig& config, RunInputs inputs) {
  if (!(config.eps > 0.0) || !std::isfinite(config.eps)) {
    throw Error(ErrorCode::invalid_argument, "eps must be positive and finite");
  }
  if (!(config.split > 0.0 && config.split < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "split must lie in (0, 1)");
  }
  if (f.in_dim != k.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "target input dimension does not match the point set");
  }
  if (a.dim() != f.out_dim) {
    throw Error(ErrorCode::dimension_mismatch,
                "forbidden points do not live in the target's codomain");
  }

  RunRecord rec;
  rec.inputs = std::move(inputs);
  rec.config = config;
  rec.n_forbidden = a.truncation();
  rec.basis = config.basis.value_or(
      k.is_complex_plane() && f.complex ? Basis::complex_monomial : Basis::monomial);

  if (config.condition_report) {
    try {
      rec.condition = condition_report(k, a, f.out_dim);
    } catch (const Error&) {
      // Advisory only: a set too small to estimate leaves the report empty.
    }
  }

  const double fit_budget = config.split * config.eps;
  const double shift_budget = config.eps - fit_budget;

  std::optional<ApproximationResult> fit;
  try {
    fit = approximate_to_tolerance(f, k, fit_budget, config.max_degree, rec.basis);
  } catch (const ApproximationFailure& e) {
    rec.achieved_fit_error = e.best_error();
    rec.fit_degree = e.best_degree();
    fail(rec, "approximate", e.what());
    return rec;
  }
  rec.q = fit->map;
  rec.achieved_fit_error = fit->achieved_error;
  rec.fit_degree = fit->degree;
  rec.error_by_degree = fit->error_by_degree;

  const PolynomialMap& q = *rec.q;
  rec.lipschitz = lipschitz_bound(q, k.bounds());
  rec.image_cover_radius = rec.lipschitz * k.resolution_h();
  const SampledCompactSet image(q.codomain_dim(), q.evaluate_all(k),
                                rec.image_cover_radius, "q(K)",
                                q.codomain_dim() == 2 && f.complex);

  try {
    if (config.method == ShiftMethod::deterministic) {
      rec.certificate = shift_search_deterministic(image, a, shift_budget, config.probe);
    } else {
      rec.certificate = shift_search_randomized(image, a, shift_budget, config.randomized);
    }
  } catch (const ShiftSearchFailure& e) {
    fail(rec, "shift", e.what());
    return rec;
  }

  PolynomialMap p = q.shifted(rec.certificate->xi);
  p.set_lipschitz_hint({rec.lipschitz, k.bounds()});
  rec.p = p;
  rec.verification = verify_avoidance(p, k, a, rec.lipschitz);

  std::vector<double> targets(k.size() * f.out_dim);
  for (std::size_t i = 0; i < k.size(); ++i) {
    f.fn(k.point(i), std::span<double>(targets.data() + i * f.out_dim, f.out_dim));
  }
  rec.final_sup_error = sup_error(p, k.data(), targets);

  if (!(*rec.final_sup_error < config.eps)) {
    fail(rec, "verify", "final sup error is not below eps");
    return rec;
  }
  switch (rec.verification->status) {
    case AvoidanceStatus::certified:
      rec.verdict = Verdict::certified;
      break;
    case AvoidanceStatus::uncertified_positive:
      rec.verdict = Verdict::uncertified;
      rec.message =
          "sample margins are positive but do not exceed the image covering "
          "radius; refine the sampling of K";
      break;
    case AvoidanceStatus::violated:
      fail(rec, "verify", "image samples meet a forbidden point");
      break;
  }
  return rec;
}

SampledCompactSet resolve_set(const std::string& spec_or_path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec_or_path, ec)) {
    return load_point_set(spec_or_path);
  }
  const GeneratorSpec spec = parse_generator_spec(spec_or_path);
  return make_compact_set(spec);
}

Target resolve_target(const std::string& text, const SampledCompactSet& k) {
  const GeneratorSpec spec = parse_generator_spec(text);
  if (spec.kind != GeneratorKind::target_function) {
    throw Error(ErrorCode::invalid_argument,
                "'" + spec.name + "' is not a target function");
  }
  std::size_t dim = k.dim();
  if (auto it = spec.params.find("dim"); it != spec.params.end()) {
    dim = static_cast<std::size_t>(it->second);
  }
  bool complex = k.is_complex_plane();
  if (auto it = spec.params.find("complex"); it != spec.params.end()) {
    complex = it->second != 0.0;
  }
  return gen_target(spec.name, dim, complex);
}

CountableEnumeration resolve_enumeration(const std::string& text, std::size_t dim) {
  GeneratorSpec spec = parse_generator_spec(text);
  if (spec.kind != GeneratorKind::enumeration) {
    throw Error(ErrorCode::invalid_argument,
                "'" + spec.name + "' is not an enumeration");
  }
  if (spec.name != "gaussian-rationals" && !spec.params.count("d")) {
    spec.params["d"] = static_cast<double>(dim);
  }
  return make_enumeration(spec);
}

RunRecord run_from_config(const RunConfig& config) {
  const SampledCompactSet k = resolve_set(config.set);
  const Target f = resolve_target(config.target, k);
  const CountableEnumeration a = resolve_enumeration(config.enumeration, f.out_dim);
  return avoid_approximate(f, k, a, config.pipeline,
                           {config.set, config.target, config.enumeration});
}

std::vector<std::string> demo_names() {
  return {"theorem2-cantor-exp", "theorem4-dust", "fat-cantor-strip"};
}

RunConfig demo_config(std::string_view name) {
  RunConfig c;
  c.pipeline.eps = 1e-2;
  if (name == "theorem2-cantor-exp") {
    c.set = "cantor:complex=1,depth=10";
    c.target = "exp";
    c.enumeration = "gaussian-rationals:N=200";
  } else if (name == "theorem4-dust") {
    c.set = "cantor-dust:depth=7";
    c.target = "sin-product";
    c.enumeration = "rational-grid:N=200,d=2";
    // The deterministic construction reaches at most about 2/3 of eps0; at
    // split 0.5 no shift in reach clears L*h for this sampling.
    c.pipeline.split = 0.2;
  } else if (name == "fat-cantor-strip") {
    c.set = "fat-cantor-strip:depth=6,lambda=0.25,n=65";
    c.target = "exp";
    c.enumeration = "gaussian-rationals:N=200";
  } else {
    throw Error(ErrorCode::invalid_argument,
                "unknown demo '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace avoidpoly
