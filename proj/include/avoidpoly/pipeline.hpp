#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avoidpoly/avoidance.hpp"
#include "avoidpoly/dimension.hpp"
#include "avoidpoly/geometry.hpp"
#include "avoidpoly/polynomial.hpp"
#include "avoidpoly/target.hpp"

namespace avoidpoly {

enum class Verdict { certified, uncertified, failed };

std::string_view to_string(Verdict v);

struct PipelineConfig {
  double eps = 1e-2;
  /// Fraction of eps given to the fit; the shift gets the rest.
  double split = 0.5;
  unsigned max_degree = 12;
  /// Complex monomials when K lies in C and f is complex, monomials otherwise.
  std::optional<Basis> basis;
  ShiftMethod method = ShiftMethod::deterministic;
  ProbePolicy probe;
  RandomizedOptions randomized;
  bool condition_report = true;
};

/// Advisory dimension check of dim K + dim A < m.
struct ConditionReport {
  DimensionEstimate k;
  DimensionEstimate a;
  std::size_t ambient_dim = 0;
  ConditionCheck check;
};

ConditionReport condition_report(const SampledCompactSet& k,
                                 const CountableEnumeration& a,
                                 std::size_t ambient_dim);

/// Generator specs (or file paths) the run was built from, echoed into the
/// record.
struct RunInputs {
  std::string set;
  std::string target;
  std::string enumeration;
};

struct RunRecord {
  RunInputs inputs;
  PipelineConfig config;
  std::size_t n_forbidden = 0;
  Basis basis = Basis::monomial;

  std::optional<PolynomialMap> q;
  std::optional<PolynomialMap> p;
  double achieved_fit_error = 0.0;
  unsigned fit_degree = 0;
  std::vector<double> error_by_degree;

  double lipschitz = 0.0;
  double image_cover_radius = 0.0;
  std::optional<ShiftCertificate> certificate;
  std::optional<AvoidanceReport> verification;
  std::optional<double> final_sup_error;

  Verdict verdict = Verdict::failed;
  std::string failed_stage;  // approximate, shift or verify
  std::string message;

  std::optional<ConditionReport> condition;
};

/// Fit q within split * eps, shift the image samples q(K) by some |xi| below
/// (1 - split) * eps so they avoid a_1..a_N, set p = q + xi and verify.
/// Stage failures are reported in the record; malformed inputs throw Error.
RunRecord avoid_approximate(const Target& f, const SampledCompactSet& k,
                            const CountableEnumeration& a,
                            const PipelineConfig& config,
                            RunInputs inputs = {});

struct RunConfig {
  std::string set;          // generator spec or point-set file
  std::string target;       // target spec, e.g. "exp" or "exp:complex=1"
  std::string enumeration;  // enumeration spec, e.g. "gaussian-rationals:N=200"
  PipelineConfig pipeline;
};

/// Loads a point set from a generator spec or a .csv / .json file.
SampledCompactSet resolve_set(const std::string& spec_or_path);

/// Target named by `spec`; unset dim and complex parameters follow K.
Target resolve_target(const std::string& spec, const SampledCompactSet& k);

/// Enumeration named by `spec`; an unset `d` follows `dim`.
CountableEnumeration resolve_enumeration(const std::string& spec,
                                         std::size_t dim);

RunRecord run_from_config(const RunConfig& config);

std::vector<std::string> demo_names();
RunConfig demo_config(std::string_view name);

}  // namespace avoidpoly
