/* SPDX-License-Identifier: Apache-2.0 */
/* C interface to the qll library. Handles are opaque; every call returns a
 * status code and leaves a message retrievable with qll_last_error() on the
 * calling thread. */
#ifndef QLL_QLL_H
#define QLL_QLL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QLL_API __declspec(dllexport)
#else
#define QLL_API __attribute__((visibility("default")))
#endif

typedef enum {
    QLL_OK = 0,
    QLL_INVALID_ARGUMENT = 1,
    QLL_CONFIG = 2,
    QLL_INVARIANT = 3,
    QLL_NUMERICAL = 4,
    QLL_IO = 5,
    QLL_INTERNAL = 6
} qll_status;

typedef struct qll_config qll_config;
typedef struct qll_report qll_report;

/* Message of the last failing call on this thread; "" after success. */
QLL_API const char* qll_last_error(void);

QLL_API qll_status qll_config_default(qll_config** out);
QLL_API qll_status qll_config_from_file(const char* path, qll_config** out);
QLL_API qll_status qll_config_from_json(const char* text, qll_config** out);
/* Overrides the worker count (QLL_THREADS in the environment wins). */
QLL_API qll_status qll_config_set_threads(qll_config* cfg, int threads);
/* Writes the canonical JSON; *len receives the size including the NUL. */
QLL_API qll_status qll_config_to_json(const qll_config* cfg, char* buf, size_t* len);
QLL_API void qll_config_free(qll_config* cfg);

QLL_API size_t qll_report_line_count(const qll_report* r);
/* name and detail stay valid until the report is freed. */
QLL_API qll_status qll_report_line(const qll_report* r, size_t i, const char** name, int* passed, double* value,
                                   const char** detail);
QLL_API int qll_report_passed(const qll_report* r);
/* Value of the first line with this name; QLL_INVALID_ARGUMENT if absent. */
QLL_API qll_status qll_report_value(const qll_report* r, const char* name, double* value);
QLL_API void qll_report_free(qll_report* r);

/* Runners. out_dir may be NULL to skip file output. */
QLL_API qll_status qll_verify_algebra(const qll_config* cfg, qll_report** out);
QLL_API qll_status qll_run_sweep(const qll_config* cfg, const char* out_dir, qll_report** out);
QLL_API qll_status qll_run_audit(const qll_config* cfg, const char* out_dir, qll_report** out);
/* model is "qs" or "el"; NULL keeps the config's model. */
QLL_API qll_status qll_run_simulation(const qll_config* cfg, const char* model, const char* out_dir,
                                      qll_report** out);

/* beta = {beta1, beta4, beta5, beta6, beta7, mu1, mu2, J}; out receives
 * {alpha1..alpha6, gamma1, gamma2, I, k1..k4} (13 entries). */
QLL_API qll_status qll_map_coefficients(const double beta[8], double a, double b, double c, double L1, double L2,
                                        double L3, int m, double out[13]);
/* Same map applied to the config's params and m. */
QLL_API qll_status qll_config_map_coefficients(const qll_config* cfg, double out[13]);
/* beta = {beta1, beta4, beta5, beta6, beta7, mu1, mu2}; *admissible is 0 or 1. */
QLL_API qll_status qll_check_beta(const double beta[7], int* admissible);
QLL_API qll_status qll_dissipation_criterion(double b1, double b2, double b3, int* result);
QLL_API qll_status qll_fit_order(const double* eps, const double* err, size_t n, double* order, double* residual);

#ifdef __cplusplus
}
#endif

#endif
