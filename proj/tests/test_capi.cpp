// SPDX-License-Identifier: Apache-2.0
// Exercises the shared library through its C header only.
#include <cmath>
#include <cstdio>
#include <cstring>

#include "hom4/hom4.h"

static int failures = 0;

#define EXPECT(cond)                                                    \
  do {                                                                  \
    if (!(cond)) {                                                      \
      std::fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                       \
    }                                                                   \
  } while (0)

int main() {
  EXPECT(std::strlen(hom4_version()) > 0);
  EXPECT(std::strcmp(hom4_status_name(HOM4_NO_CONVERGENCE), "NoConvergence") == 0);

  hom4_config* cfg = nullptr;
  EXPECT(hom4_config_parse("{\"dim\": 2, \"bogus\": 1}", &cfg) == HOM4_BAD_ARGUMENT);
  EXPECT(std::strstr(hom4_last_error(), "bogus") != nullptr);
  EXPECT(cfg == nullptr);
  EXPECT(hom4_config_parse("{\"dim\": ", &cfg) == HOM4_BAD_ARGUMENT);
  EXPECT(hom4_config_load("/nonexistent.json", &cfg) == HOM4_IO);
  EXPECT(hom4_set_threads(-1) == HOM4_BAD_ARGUMENT);

  const char* text =
      "{\"dim\": 1, \"coefficient_family\": {\"kind\": \"d1_profile\", \"parameters\": [2.0, 1.0]},"
      " \"cell_grid\": 64, \"eps\": [0.25, 0.125, 0.0625], \"approximants\": [\"u_hat\", \"w\"]}";
  EXPECT(hom4_config_parse(text, &cfg) == HOM4_OK);
  EXPECT(hom4_config_set_seed(cfg, 42) == HOM4_OK);
  int count = 0, n = 0;
  EXPECT(hom4_config_eps_count(cfg, &count) == HOM4_OK && count == 3);
  EXPECT(hom4_config_eps_inverse(cfg, 2, &n) == HOM4_OK && n == 16);
  EXPECT(hom4_config_eps_inverse(cfg, 3, &n) == HOM4_BAD_ARGUMENT);

  hom4_cell* cell = nullptr;
  EXPECT(hom4_cell_solve(cfg, &cell) == HOM4_OK);
  double a_hat[1] = {0.0};
  EXPECT(hom4_cell_a_hat(cell, a_hat, 1) == HOM4_OK);
  EXPECT(std::fabs(a_hat[0] - std::sqrt(3.0)) < 1e-8);
  double too_small[1];
  EXPECT(hom4_cell_a_hat(cell, too_small, 0) == HOM4_BAD_ARGUMENT);
  double lambda0 = -1.0;
  EXPECT(hom4_cell_lambda0(cell, &lambda0) == HOM4_OK && lambda0 <= 1e-12);
  char* json = nullptr;
  EXPECT(hom4_cell_to_json(cell, &json) == HOM4_OK && std::strstr(json, "\"a_hat\"") != nullptr);
  hom4_string_free(json);

  double errors[5];
  EXPECT(hom4_solve(cfg, cell, 4, nullptr, errors) == HOM4_OK);
  EXPECT(errors[2] <= errors[0]);
  EXPECT(std::isnan(errors[1]));
  EXPECT(hom4_solve(cfg, cell, 1, nullptr, errors) == HOM4_BAD_ARGUMENT);

  hom4_report* rep = nullptr;
  EXPECT(hom4_converge(cfg, &rep) == HOM4_OK);
  int rows = 0;
  EXPECT(hom4_report_rows(rep, &rows) == HOM4_OK && rows == 3);
  double slope = 0.0;
  EXPECT(hom4_report_slope(rep, "err_u_hat_L2", &slope) == HOM4_OK && slope >= 1.7);
  EXPECT(hom4_report_slope(rep, "err_u_tilde_H2", &slope) == HOM4_BAD_ARGUMENT);
  double v = 0.0;
  EXPECT(hom4_report_value(rep, 0, "err_w_L2", &v) == HOM4_OK && v > 0.0);
  EXPECT(hom4_report_value(rep, 5, "err_w_L2", &v) == HOM4_BAD_ARGUMENT);
  char* csv = nullptr;
  EXPECT(hom4_report_to_csv(rep, &csv) == HOM4_OK && std::strncmp(csv, "eps,", 4) == 0);
  hom4_string_free(csv);
  hom4_report_free(rep);
  hom4_cell_free(cell);
  hom4_config_free(cfg);

  int passed = 0;
  EXPECT(hom4_check(1, 0, nullptr, &passed, nullptr) == HOM4_BAD_ARGUMENT);
  EXPECT(hom4_check(1, 1, "skew-flip", &passed, nullptr) == HOM4_OK && passed == 0);

  double g = 0.0;
  EXPECT(hom4_gamma(3, &g) == HOM4_OK && std::fabs(g - 0.125) < 1e-10);
  EXPECT(hom4_gamma(4, &g) == HOM4_UNSUPPORTED_ORDER);
  double chi = 0.0;
  EXPECT(hom4_kernel_chi(2, 0.25, &chi) == HOM4_OK && std::fabs(chi - 0.75) < 1e-15);

  // Null handles are rejected, never dereferenced.
  EXPECT(hom4_cell_solve(nullptr, &cell) == HOM4_BAD_ARGUMENT);
  hom4_config_free(nullptr);
  hom4_cell_free(nullptr);
  hom4_report_free(nullptr);

  if (failures) std::fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
