/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "avoidpoly/avoidpoly.h"

static int failures = 0;
static int checks = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    ++checks;                                                         \
    if (!(cond)) {                                                    \
      ++failures;                                                     \
      fprintf(stderr, "%s:%d: CHECK(%s) failed; last error: %s\n",    \
              __FILE__, __LINE__, #cond, avp_last_error());           \
    }                                                                 \
  } while (0)

static void test_pointsets(void) {
  avp_pointset* s = NULL;
  CHECK(avp_pointset_generate("cantor:depth=1", &s) == AVP_OK);
  CHECK(avp_pointset_size(s) == 4);
  CHECK(avp_pointset_dim(s) == 1);
  CHECK(fabs(avp_pointset_resolution(s) - 1.0 / 3.0) < 1e-15);
  double x[2] = {-1.0, -1.0};
  CHECK(avp_pointset_point(s, 1, x, 1) == AVP_OK);
  CHECK(x[0] > 0.0 && x[0] < 1.0);
  CHECK(avp_pointset_point(s, 9, x, 1) == AVP_ERR_INVALID_ARGUMENT);
  CHECK(avp_pointset_point(s, 0, x, 0) == AVP_ERR_DIMENSION_MISMATCH);

  char* csv = NULL;
  CHECK(avp_pointset_serialize(s, "csv", &csv) == AVP_OK);
  avp_pointset* back = NULL;
  CHECK(avp_pointset_parse(csv, "csv", &back) == AVP_OK);
  CHECK(avp_pointset_size(back) == 4);
  CHECK(avp_pointset_resolution(back) == avp_pointset_resolution(s));
  avp_string_free(csv);
  avp_pointset_free(back);

  char* json = NULL;
  CHECK(avp_pointset_serialize(s, "json", &json) == AVP_OK);
  CHECK(strstr(json, "\"resolution_h\"") != NULL);
  CHECK(avp_pointset_parse(json, "json", &back) == AVP_OK);
  CHECK(avp_pointset_size(back) == 4);
  avp_string_free(json);
  avp_pointset_free(back);
  CHECK(avp_pointset_serialize(s, "xml", &json) == AVP_ERR_INVALID_ARGUMENT);
  avp_pointset_free(s);

  s = (avp_pointset*)0x1;
  CHECK(avp_pointset_generate("cantor:depth=30", &s) == AVP_ERR_CAPACITY);
  CHECK(s == NULL);
  CHECK(strlen(avp_last_error()) > 0);
  CHECK(avp_pointset_generate("nosuch", &s) == AVP_ERR_PARSE);
  CHECK(avp_pointset_generate(NULL, &s) == AVP_ERR_INVALID_ARGUMENT);
  CHECK(avp_pointset_load("/nonexistent/set.csv", &s) == AVP_ERR_IO);
  CHECK(avp_pointset_parse("x0\n0\n", "csv", NULL) == AVP_ERR_INVALID_ARGUMENT);
  CHECK(avp_pointset_size(NULL) == 0);
  avp_pointset_free(NULL);

  /* A successful call clears the previous message. */
  CHECK(avp_pointset_generate("segment:n=3", &s) == AVP_OK);
  CHECK(strcmp(avp_last_error(), "") == 0);
  avp_pointset_free(s);
}

static void test_dimension(void) {
  avp_pointset* s = NULL;
  CHECK(avp_pointset_generate("cantor:depth=12", &s) == AVP_OK);
  char* json = NULL;
  CHECK(avp_dimension_report(s, 3, 2, 9, &json) == AVP_OK);
  const char* slope = strstr(json, "\"slope\":");
  CHECK(slope != NULL);
  if (slope) {
    const double v = strtod(slope + 8, NULL);
    CHECK(fabs(v - log(2.0) / log(3.0)) < 0.02);
  }
  avp_string_free(json);
  char* svg = NULL;
  CHECK(avp_dimension_svg(s, 0, 0, 0, NULL, &svg) == AVP_OK);
  CHECK(strncmp(svg, "<svg", 4) == 0);
  avp_string_free(svg);
  CHECK(avp_coverage_report(s, 3, 1, 6, &json) == AVP_OK);
  CHECK(strstr(json, "\"fractions\"") != NULL);
  avp_string_free(json);
  CHECK(avp_dimension_report(s, 3, 4, 4, &json) == AVP_ERR_INVALID_ARGUMENT);
  CHECK(avp_condition_report(s, "rational-grid:N=50", 1, &json) == AVP_OK);
  CHECK(strstr(json, "\"check\": \"empirical\"") != NULL);
  avp_string_free(json);
  avp_pointset_free(s);
}

static void test_fit_and_verify(void) {
  avp_pointset* k = NULL;
  CHECK(avp_pointset_generate("cantor:complex=1,depth=8", &k) == AVP_OK);
  avp_fit_options fo;
  avp_fit_options_init(&fo);
  CHECK(fo.max_degree == 12);
  fo.budget = 1e-6;
  avp_polymap* q = NULL;
  double achieved = -1.0;
  CHECK(avp_fit(k, "exp", &fo, &q, &achieved) == AVP_OK);
  CHECK(achieved >= 0.0 && achieved < 1e-6);
  CHECK(avp_polymap_domain_dim(q) == 2);
  CHECK(avp_polymap_codomain_dim(q) == 2);
  const double z[2] = {1.0, 0.0};
  const double z0[2] = {0.0, 0.0};
  double w[2] = {0.0, 0.0};
  double w0[2] = {0.0, 0.0};
  CHECK(avp_polymap_evaluate(q, z, 2, w, 2) == AVP_OK);
  CHECK(avp_polymap_evaluate(q, z0, 2, w0, 2) == AVP_OK);
  CHECK(fabs(w[0] - exp(1.0)) < 1e-6);
  CHECK(fabs(w[1]) < 1e-6);
  CHECK(avp_polymap_evaluate(q, z, 1, w, 2) == AVP_ERR_DIMENSION_MISMATCH);
  double lip = 0.0;
  CHECK(avp_polymap_lipschitz(q, k, &lip) == AVP_OK);
  CHECK(lip >= hypot(w[0] - w0[0], w[1] - w0[1]));

  char* json = NULL;
  CHECK(avp_polymap_serialize(q, &json) == AVP_OK);
  avp_polymap* q2 = NULL;
  CHECK(avp_polymap_parse(json, &q2) == AVP_OK);
  double w2[2];
  CHECK(avp_polymap_evaluate(q2, z, 2, w2, 2) == AVP_OK);
  CHECK(w2[0] == w[0] && w2[1] == w[1]);
  avp_string_free(json);
  avp_polymap_free(q2);

  /* exp(0) = 1 is a Gaussian rational; the unshifted fit meets it only up
   * to the fit error, so its margin is far below the covering radius. */
  avp_avoidance_status st = AVP_AVOID_CERTIFIED;
  CHECK(avp_verify(q, k, "gaussian-rationals:N=50", -1.0, &json, &st) == AVP_OK);
  CHECK(st != AVP_AVOID_CERTIFIED);
  CHECK(strstr(json, "\"rows\"") != NULL);
  avp_string_free(json);
  avp_polymap_free(q);

  avp_pointset* seg = NULL;
  CHECK(avp_pointset_generate("segment:n=513", &seg) == AVP_OK);
  fo.budget = 1e-7;
  fo.max_degree = 6;
  fo.basis = "chebyshev";
  achieved = -1.0;
  CHECK(avp_fit(seg, "abs-offset", &fo, &q, &achieved) == AVP_ERR_APPROXIMATION);
  CHECK(q == NULL);
  CHECK(achieved > 1e-3);
  fo.basis = "legendre";
  CHECK(avp_fit(seg, "abs-offset", &fo, &q, &achieved) == AVP_ERR_PARSE ||
        avp_fit(seg, "abs-offset", &fo, &q, &achieved) == AVP_ERR_INVALID_ARGUMENT);
  avp_pointset_free(seg);
  avp_pointset_free(k);
}

static void test_avoid(void) {
  avp_pointset* s = NULL;
  CHECK(avp_pointset_generate("cantor-dust:depth=7", &s) == AVP_OK);
  avp_avoid_options ao;
  avp_avoid_options_init(&ao);
  ao.eps_budget = 1e-2;
  char* cert = NULL;
  CHECK(avp_avoid(s, "rational-grid:N=40", &ao, &cert) == AVP_OK);
  CHECK(strstr(cert, "\"method\": \"deterministic\"") != NULL);
  CHECK(strstr(cert, "\"ledger\"") != NULL);
  avp_string_free(cert);
  ao.method = AVP_METHOD_RANDOMIZED;
  ao.seed = 3;
  CHECK(avp_avoid(s, "rational-grid:N=40", &ao, &cert) == AVP_OK);
  CHECK(strstr(cert, "\"trials_used\"") != NULL);
  avp_string_free(cert);
  ao.eps_budget = -1.0;
  CHECK(avp_avoid(s, "rational-grid:N=40", &ao, &cert) == AVP_ERR_INVALID_ARGUMENT);
  avp_pointset_free(s);

  /* A covering radius larger than every gap makes the randomized search give up. */
  CHECK(avp_pointset_parse("# resolution_h=5\nx0\n0\n0.5\n1\n", "csv", &s) == AVP_OK);
  ao.eps_budget = 1e-2;
  ao.trials = 8;
  cert = (char*)0x1;
  CHECK(avp_avoid(s, "rational-grid:N=5", &ao, &cert) == AVP_ERR_SEARCH_EXHAUSTED);
  CHECK(cert == NULL);
  avp_pointset_free(s);
}

static void test_pipeline(void) {
  char* cfg = NULL;
  CHECK(avp_demo_config("theorem2-cantor-exp", &cfg) == AVP_OK);
  avp_record* rec = NULL;
  CHECK(avp_run(cfg, &rec) == AVP_OK);
  CHECK(avp_record_verdict(rec) == AVP_VERDICT_CERTIFIED);
  char* json1 = NULL;
  char* json2 = NULL;
  CHECK(avp_record_serialize(rec, &json1) == AVP_OK);
  CHECK(strstr(json1, "\"schema\": 1") != NULL);
  avp_record_free(rec);
  CHECK(avp_run(cfg, &rec) == AVP_OK);
  CHECK(avp_record_serialize(rec, &json2) == AVP_OK);
  CHECK(strcmp(json1, json2) == 0);
  avp_record_free(rec);
  avp_string_free(json1);
  avp_string_free(json2);
  avp_string_free(cfg);

  CHECK(avp_demo_config("fat-cantor-strip", &cfg) == AVP_OK);
  CHECK(avp_run(cfg, &rec) == AVP_OK);
  CHECK(avp_record_verdict(rec) == AVP_VERDICT_UNCERTIFIED);
  avp_record_free(rec);
  avp_string_free(cfg);

  CHECK(avp_run("{\"set\":\"segment:n=257\",\"target\":\"abs-offset\","
                "\"enumeration\":\"rational-grid:N=5\",\"eps\":1e-7,\"max_degree\":5}",
                &rec) == AVP_OK);
  CHECK(avp_record_verdict(rec) == AVP_VERDICT_FAILED);
  avp_record_free(rec);

  CHECK(avp_run("{bad json", &rec) == AVP_ERR_PARSE);
  CHECK(rec == NULL);
  CHECK(avp_demo_config("no-such-demo", &cfg) == AVP_ERR_INVALID_ARGUMENT);
  CHECK(avp_record_verdict(NULL) == AVP_VERDICT_FAILED);
}

int main(void) {
  CHECK(strcmp(avp_version(), "1.0.0") == 0);
  CHECK(strcmp(avp_status_string(AVP_OK), "ok") == 0);
  CHECK(strcmp(avp_status_string(AVP_ERR_PARSE), "parse error") == 0);
  test_pointsets();
  test_dimension();
  test_fit_and_verify();
  test_avoid();
  test_pipeline();
  printf("%d checks, %d failed\n", checks, failures);
  return failures == 0 ? 0 : 1;
}
