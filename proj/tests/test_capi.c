/* SPDX-License-Identifier: Apache-2.0 */
/* Exercises the C interface from a C translation unit. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qll/qll.h"

static int failures = 0;

#define EXPECT(cond)                                                       \
    do {                                                                   \
        if (!(cond)) {                                                     \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                    \
        }                                                                  \
    } while (0)

static const char* kSmall =
    "{\"grid\": {\"n\": 16}, \"t_final\": 0.1, \"sample_interval\": 0.05,"
    " \"eps_list\": [0.2, 0.1], \"dt\": {\"max\": 0.005}}";

static void test_config(void) {
    qll_config* cfg = NULL;
    EXPECT(qll_config_default(&cfg) == QLL_OK);
    EXPECT(strcmp(qll_last_error(), "") == 0);

    size_t len = 0;
    EXPECT(qll_config_to_json(cfg, NULL, &len) == QLL_OK);
    EXPECT(len > 10);
    char* buf = malloc(len);
    size_t small = 4;
    EXPECT(qll_config_to_json(cfg, buf, &small) == QLL_INVALID_ARGUMENT);
    EXPECT(small == len);
    EXPECT(qll_config_to_json(cfg, buf, &len) == QLL_OK);
    EXPECT(strlen(buf) + 1 == len);

    qll_config* back = NULL;
    EXPECT(qll_config_from_json(buf, &back) == QLL_OK);
    qll_config_free(back);
    free(buf);

    EXPECT(qll_config_set_threads(cfg, 0) == QLL_CONFIG);
    EXPECT(strlen(qll_last_error()) > 0);
    EXPECT(qll_config_set_threads(cfg, 2) == QLL_OK);
    qll_config_free(cfg);

    cfg = NULL;
    EXPECT(qll_config_from_json("{\"grid\": 3}", &cfg) == QLL_CONFIG);
    EXPECT(cfg == NULL);
    EXPECT(strstr(qll_last_error(), "grid") != NULL);
    EXPECT(qll_config_from_json("{\"params\": {\"beta1\": -5}}", &cfg) == QLL_INVARIANT);
    EXPECT(qll_config_from_file("/nonexistent.json", &cfg) == QLL_CONFIG);
    EXPECT(qll_config_default(NULL) == QLL_INVALID_ARGUMENT);
    qll_config_free(NULL);
}

static void test_pure_functions(void) {
    const double beta[8] = {1.0, 2.0, 0.5, 1.0, 1.0, 1.0, 0.5, 1.0};
    double out[13];
    EXPECT(qll_map_coefficients(beta, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0, out) == QLL_OK);
    const double want[13] = {2.25, -1.875, 2.625, 1.75, 1.5, 2.25, 4.5, 0.75, 4.5, 4.5, 4.5, 4.5, 0.0};
    for (int i = 0; i < 13; ++i) EXPECT(fabs(out[i] - want[i]) < 1e-12);
    EXPECT(qll_map_coefficients(beta, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 2, out) == QLL_OK);
    EXPECT(out[8] == 0.0);
    EXPECT(qll_map_coefficients(beta, 1.0, 1.0, -1.0, 1.0, 0.0, 0.0, 0, out) == QLL_INVARIANT);

    int ok = -1;
    EXPECT(qll_check_beta(beta, &ok) == QLL_OK);
    EXPECT(ok == 1);
    const double bad[7] = {-5.0, 2.0, 0.0, 0.0, 0.0, 1.0, 0.0};
    EXPECT(qll_check_beta(bad, &ok) == QLL_OK);
    EXPECT(ok == 0);

    EXPECT(qll_dissipation_criterion(-1.6, 1.0, 0.2, &ok) == QLL_OK);
    EXPECT(ok == 1);
    EXPECT(qll_dissipation_criterion(0.0, -0.1, 1.0, &ok) == QLL_OK);
    EXPECT(ok == 0);

    const double eps[3] = {0.2, 0.1, 0.05}, err[3] = {0.04, 0.01, 0.0025};
    double order = 0.0, res = 1.0;
    EXPECT(qll_fit_order(eps, err, 3, &order, &res) == QLL_OK);
    EXPECT(fabs(order - 2.0) < 1e-12);
    EXPECT(res < 1e-12);
    EXPECT(qll_fit_order(eps, err, 1, &order, &res) != QLL_OK);
}

static void test_runners(void) {
    qll_config* cfg = NULL;
    EXPECT(qll_config_from_json(kSmall, &cfg) == QLL_OK);
    double out[13];
    EXPECT(qll_config_map_coefficients(cfg, out) == QLL_OK);

    qll_report* rep = NULL;
    EXPECT(qll_verify_algebra(cfg, &rep) == QLL_OK);
    EXPECT(qll_report_passed(rep) == 1);
    EXPECT(qll_report_line_count(rep) >= 10);
    const char* name = NULL;
    const char* detail = NULL;
    int passed = 0;
    double value = 0.0;
    EXPECT(qll_report_line(rep, 0, &name, &passed, &value, &detail) == QLL_OK);
    EXPECT(name != NULL && strlen(name) > 0);
    EXPECT(qll_report_line(rep, 1000, &name, &passed, &value, &detail) == QLL_INVALID_ARGUMENT);
    EXPECT(qll_report_value(rep, "no such line", &value) == QLL_INVALID_ARGUMENT);
    qll_report_free(rep);

    rep = NULL;
    EXPECT(qll_run_sweep(cfg, NULL, &rep) == QLL_OK);
    EXPECT(qll_report_value(rep, "fitted_order", &value) == QLL_OK);
    EXPECT(isfinite(value));
    EXPECT(qll_report_value(rep, "err_v[eps=0.1]", &value) == QLL_OK);
    EXPECT(value > 0.0);
    qll_report_free(rep);

    rep = NULL;
    EXPECT(qll_run_simulation(cfg, "el", NULL, &rep) == QLL_OK);
    EXPECT(qll_report_value(rep, "steps", &value) == QLL_OK);
    EXPECT(value >= 1.0);
    double e0 = 0.0, e1 = 0.0;
    EXPECT(qll_report_value(rep, "initial_energy", &e0) == QLL_OK);
    EXPECT(qll_report_value(rep, "final_energy", &e1) == QLL_OK);
    EXPECT(e1 <= e0);
    qll_report_free(rep);

    rep = NULL;
    EXPECT(qll_run_simulation(cfg, "bogus", NULL, &rep) != QLL_OK);
    EXPECT(rep == NULL);
    qll_config_free(cfg);
}

int main(void) {
    test_config();
    test_pure_functions();
    test_runners();
    if (failures) {
        fprintf(stderr, "%d failed expectations\n", failures);
        return 1;
    }
    printf("C API: all expectations passed\n");
    return 0;
}
