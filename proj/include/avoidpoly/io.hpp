#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "avoidpoly/avoidance.hpp"
#include "avoidpoly/dimension.hpp"
#include "avoidpoly/geometry.hpp"
#include "avoidpoly/pipeline.hpp"
#include "avoidpoly/polynomial.hpp"

namespace avoidpoly {

using Json = nlohmann::ordered_json;

/// Two-space indented JSON with a trailing newline. Non-finite numbers are
/// written as null.
std::string dump_json(const Json& j);
Json parse_json(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Point sets. CSV carries a header x0,...,x{d-1}; the covering radius travels
// in an optional leading comment line "# resolution_h=<value>".
Json point_set_to_json(const SampledCompactSet& set);
SampledCompactSet point_set_from_json(const Json& j);
std::string point_set_to_csv(const SampledCompactSet& set);
SampledCompactSet point_set_from_csv(std::string_view text,
                                     double default_resolution = 0.0);
/// Dispatches on the extension (.json, otherwise CSV).
SampledCompactSet load_point_set(const std::string& path);

Json to_json(const Point& p);

Json to_json(const PolynomialMap& p);
PolynomialMap polynomial_from_json(const Json& j);

Json to_json(const DimensionEstimate& d);
Json to_json(const CoverageProfile& c);
Json to_json(const SumDimReport& r);
Json to_json(const ConditionReport& r);

Json to_json(const ShiftCertificate& c);
Json to_json(const AvoidanceReport& r);

Json to_json(const RunRecord& r);
Json to_json(const RunConfig& c);
/// Missing keys keep their defaults.
RunConfig run_config_from_json(const Json& j);

/// Log-log plot of box counts with the fitted line, as a standalone SVG.
std::string loglog_svg(const DimensionEstimate& d, const std::string& title);

}  // namespace avoidpoly
