/* C interface to the avoidpoly library.
 *
 * Every fallible call returns avp_status; on failure avp_last_error() holds
 * a message for the calling thread and output pointers are left NULL.
 * Strings handed out through char** must be released with avp_string_free;
 * handles with their matching *_free.
 */
#ifndef AVOIDPOLY_H
#define AVOIDPOLY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AVOIDPOLY_BUILDING)
#    define AVP_API __declspec(dllexport)
#  else
#    define AVP_API __declspec(dllimport)
#  endif
#else
#  define AVP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum avp_status {
  AVP_OK = 0,
  AVP_ERR_INVALID_ARGUMENT = 1,
  AVP_ERR_DIMENSION_MISMATCH = 2,
  AVP_ERR_CAPACITY = 3,
  AVP_ERR_NUMERICAL = 4,
  AVP_ERR_APPROXIMATION = 5,
  AVP_ERR_SEARCH_EXHAUSTED = 6,
  AVP_ERR_IO = 7,
  AVP_ERR_PARSE = 8,
  AVP_ERR_INTERNAL = 99
} avp_status;

/* Values match the CLI exit codes. */
typedef enum avp_verdict {
  AVP_VERDICT_CERTIFIED = 0,
  AVP_VERDICT_UNCERTIFIED = 2,
  AVP_VERDICT_FAILED = 3
} avp_verdict;

typedef enum avp_avoidance_status {
  AVP_AVOID_CERTIFIED = 0,
  AVP_AVOID_UNCERTIFIED_POSITIVE = 1,
  AVP_AVOID_VIOLATED = 2
} avp_avoidance_status;

typedef enum avp_method { AVP_METHOD_DETERMINISTIC = 0, AVP_METHOD_RANDOMIZED = 1 } avp_method;

typedef struct avp_pointset avp_pointset;
typedef struct avp_polymap avp_polymap;
typedef struct avp_record avp_record;

AVP_API const char* avp_version(void);
AVP_API const char* avp_status_string(avp_status status);
/* Message of the last failed call on this thread ("" if none). */
AVP_API const char* avp_last_error(void);
AVP_API void avp_string_free(char* s);

/* ---- Point sets --------------------------------------------------------- */

/* spec: "name:key=value,...", e.g. "cantor:depth=8". Enumeration specs yield
 * their truncated points with resolution 0. */
AVP_API avp_status avp_pointset_generate(const char* spec, avp_pointset** out);
/* .json files use the JSON layout, anything else is read as CSV. */
AVP_API avp_status avp_pointset_load(const char* path, avp_pointset** out);
/* format: "json" or "csv". */
AVP_API avp_status avp_pointset_parse(const char* text, const char* format,
                                      avp_pointset** out);
AVP_API avp_status avp_pointset_serialize(const avp_pointset* set, const char* format,
                                          char** out);
AVP_API size_t avp_pointset_size(const avp_pointset* set);
AVP_API size_t avp_pointset_dim(const avp_pointset* set);
AVP_API double avp_pointset_resolution(const avp_pointset* set);
/* Copies point i into coords[0..dim). */
AVP_API avp_status avp_pointset_point(const avp_pointset* set, size_t i, double* coords,
                                      size_t capacity);
AVP_API void avp_pointset_free(avp_pointset* set);

/* ---- Dimension ---------------------------------------------------------- */

/* Box-dimension estimate over scales base^-k, k = kmin..kmax. base = 0
 * selects a dyadic ladder sized to the set. */
AVP_API avp_status avp_dimension_report(const avp_pointset* set, int base, int kmin,
                                        int kmax, char** json);
AVP_API avp_status avp_dimension_svg(const avp_pointset* set, int base, int kmin,
                                     int kmax, const char* title, char** svg);
AVP_API avp_status avp_coverage_report(const avp_pointset* set, int base, int kmin,
                                       int kmax, char** json);
/* Advisory check dim K + dim A < ambient_dim (empirical). */
AVP_API avp_status avp_condition_report(const avp_pointset* k, const char* enumeration,
                                        size_t ambient_dim, char** json);

/* ---- Polynomials -------------------------------------------------------- */

typedef struct avp_fit_options {
  const char* basis; /* NULL: complex-monomial on complex sets, else monomial */
  unsigned max_degree;
  double budget; /* sup-error target on the samples */
} avp_fit_options;

AVP_API void avp_fit_options_init(avp_fit_options* options);

/* Lowest-degree fit of the named target on K below options->budget. On
 * AVP_ERR_APPROXIMATION *achieved still receives the best error reached. */
AVP_API avp_status avp_fit(const avp_pointset* k, const char* target,
                           const avp_fit_options* options, avp_polymap** out,
                           double* achieved);
AVP_API avp_status avp_polymap_parse(const char* json, avp_polymap** out);
AVP_API avp_status avp_polymap_serialize(const avp_polymap* map, char** json);
AVP_API size_t avp_polymap_domain_dim(const avp_polymap* map);
AVP_API size_t avp_polymap_codomain_dim(const avp_polymap* map);
AVP_API avp_status avp_polymap_evaluate(const avp_polymap* map, const double* x, size_t n,
                                        double* y, size_t m);
/* Upper bound on the Lipschitz constant over the bounding box of k. */
AVP_API avp_status avp_polymap_lipschitz(const avp_polymap* map, const avp_pointset* k,
                                         double* out);
AVP_API void avp_polymap_free(avp_polymap* map);

/* ---- Avoidance ---------------------------------------------------------- */

typedef struct avp_avoid_options {
  double eps_budget;
  avp_method method;
  uint64_t seed;
  size_t trials;
  size_t batch;
  size_t lookahead;
} avp_avoid_options;

AVP_API void avp_avoid_options_init(avp_avoid_options* options);

/* Shift search for the sample set s, whose resolution is taken as its
 * covering radius. Writes the certificate JSON. */
AVP_API avp_status avp_avoid(const avp_pointset* s, const char* enumeration,
                             const avp_avoid_options* options, char** certificate_json);

/* Checks map(K) against the enumeration. lipschitz < 0 uses the bound. */
AVP_API avp_status avp_verify(const avp_polymap* map, const avp_pointset* k,
                              const char* enumeration, double lipschitz, char** json,
                              avp_avoidance_status* status);

/* ---- Pipeline ----------------------------------------------------------- */

/* config_json: {"set", "target", "enumeration", "eps", "split", "max_degree",
 * "basis", "method", "seed", "trials", "batch", "probe", "condition_report"}.
 * Stage failures still produce a record (verdict failed). */
AVP_API avp_status avp_run(const char* config_json, avp_record** out);
AVP_API avp_status avp_demo_config(const char* name, char** config_json);
AVP_API avp_status avp_record_serialize(const avp_record* record, char** json);
AVP_API avp_verdict avp_record_verdict(const avp_record* record);
AVP_API void avp_record_free(avp_record* record);

#ifdef __cplusplus
}
#endif

#endif /* AVOIDPOLY_H */
