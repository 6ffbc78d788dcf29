/*
 * Copyright 2026 The qpa Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qpa library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching _free function. Every fallible call returns a qpa_status; on
 * failure qpa_last_error() describes the problem for the calling thread.
 * Results that are structured (curves, certificates, search and suite
 * reports) come back as JSON documents in which +inf is the string "inf".
 */

#ifndef QPA_QPA_H_
#define QPA_QPA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QPA_BUILDING_LIBRARY)
#define QPA_API __attribute__((visibility("default")))
#else
#define QPA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpa_status {
  QPA_OK = 0,
  QPA_INVARIANT_FAILED = 1,
  QPA_INVALID = 2,
  QPA_BUDGET_EXCEEDED = 3,
  QPA_INTERNAL = 4
} qpa_status;

typedef struct qpa_state qpa_state;
typedef struct qpa_config qpa_config;
typedef struct qpa_doc qpa_doc;

QPA_API const char* qpa_version(void);
/* Message for the last failed call on this thread; "" if none. */
QPA_API const char* qpa_last_error(void);
/* 64-bit FNV-1a of a byte buffer, used to fingerprint inputs. */
QPA_API uint64_t qpa_fnv1a64(const void* data, size_t length);

/* ---- states ---- */

/* Parses a state document: {"kind": "density", "dim", "entries"} or
 * {"kind": "cq", "symbols", "probs", "conditionals"}. */
QPA_API qpa_status qpa_state_parse(const char* json, size_t length, qpa_state** out);
/* entries: 2*dim*dim doubles, (re, im) pairs in row-major order. */
QPA_API qpa_status qpa_state_density(size_t dim, const double* entries, int subnormalized,
                                     qpa_state** out);
/* conditionals: symbols blocks of 2*dim_e*dim_e doubles as above. */
QPA_API qpa_status qpa_state_cq(size_t symbols, size_t dim_e, const double* probs,
                                const double* conditionals, qpa_state** out);
QPA_API void qpa_state_free(qpa_state* state);
QPA_API int qpa_state_is_cq(const qpa_state* state);
/* Hilbert-space dimension; for CQ states symbols * dim_e. */
QPA_API size_t qpa_state_dim(const qpa_state* state);

/* ---- configuration ---- */

QPA_API qpa_config* qpa_config_new(void);
QPA_API void qpa_config_free(qpa_config* config);
QPA_API void qpa_config_set_seed(qpa_config* config, uint64_t seed);
QPA_API qpa_status qpa_config_set_threads(qpa_config* config, int threads);
QPA_API qpa_status qpa_config_set_s_max(qpa_config* config, double s_max);
QPA_API qpa_status qpa_config_set_budget(qpa_config* config, uint64_t budget);
/* Keys: rate_tol, search_tol, fd_step, slack, resolution. */
QPA_API qpa_status qpa_config_set_tolerance(qpa_config* config, const char* key, double value);
/* JSON of every setting that affects results (the thread count does not). */
QPA_API qpa_status qpa_config_describe(const qpa_config* config, qpa_doc** out);

/* ---- scalar measures (bits; +inf where the quantity is unbounded) ---- */

QPA_API qpa_status qpa_fidelity(const qpa_state* rho, const qpa_state* sigma, double* out);
QPA_API qpa_status qpa_purified_distance(const qpa_state* rho, const qpa_state* sigma,
                                         double* out);
QPA_API qpa_status qpa_trace_distance(const qpa_state* rho, const qpa_state* sigma, double* out);
QPA_API qpa_status qpa_relative_entropy(const qpa_state* rho, const qpa_state* sigma,
                                        double* out);
QPA_API qpa_status qpa_sandwiched_renyi(const qpa_state* rho, const qpa_state* sigma,
                                        double alpha, double* out);
QPA_API qpa_status qpa_max_relative_entropy(const qpa_state* rho, const qpa_state* sigma,
                                            double* out);
/* H_alpha(X|E) of a CQ state; alpha = 1 gives H(X|E), alpha = +inf H_min. */
QPA_API qpa_status qpa_conditional_entropy(const qpa_state* cq, double alpha, double* out);

/* ---- exponents ---- */

typedef struct qpa_exponent {
  double value;
  double maximizer_s;
  int has_maximizer;
  int regime; /* 1 zero, 2 critical, 3 subcritical, 4 divergent */
  int capped;
  int boundary;
  double capped_value;
  int has_capped_value;
  int valid;
} qpa_exponent;

QPA_API qpa_status qpa_pa_upper_exponent(const qpa_state* cq, const qpa_config* config,
                                         double rate, qpa_exponent* out);
QPA_API qpa_status qpa_pa_lower_exponent(const qpa_state* cq, const qpa_config* config,
                                         double rate, qpa_exponent* out);
QPA_API qpa_status qpa_smoothing_exponent(const qpa_state* rho, const qpa_state* sigma,
                                          const qpa_config* config, double r, qpa_exponent* out);
QPA_API qpa_status qpa_r_hat(const qpa_state* cq, const qpa_config* config, double s, double* out);
QPA_API qpa_status qpa_r_critical(const qpa_state* cq, const qpa_config* config, double* out);

/* ---- documents ---- */

/* quantity: fidelity, purified, trace, relative, renyi (param = alpha), dmax,
 * entropy, renyi-entropy (param = alpha), min-entropy, smooth-min-entropy
 * (param = epsilon), r-critical. sigma may be NULL for the entropies. */
QPA_API qpa_status qpa_measure(const qpa_state* rho, const qpa_state* sigma, const char* quantity,
                               double param, const qpa_config* config, qpa_doc** out);
/* mode: upper, lower, both, renyi (renyi_s in (0, 1]). */
QPA_API qpa_status qpa_exponent_curve(const qpa_state* cq, const qpa_config* config,
                                      double r_min, double r_max, int count, const char* mode,
                                      double renyi_s, qpa_doc** out);
/* Certificates on eps(rho^n || sigma^n, n*rate) for n in [n_min, n_max]. */
QPA_API qpa_status qpa_smoothing_n_grid(const qpa_state* rho, const qpa_state* sigma,
                                        const qpa_config* config, double rate, int n_min,
                                        int n_max, double t, qpa_doc** out);
/* Single-copy certificates on `count` equally spaced lambdas. */
QPA_API qpa_status qpa_smoothing_lambda_grid(const qpa_state* rho, const qpa_state* sigma,
                                             const qpa_config* config, double lambda_min,
                                             double lambda_max, int count, double t,
                                             qpa_doc** out);
/* Exhaustive minimum over all functions from X^n to a range of `range`
 * symbols. measure: trace, purified, relative, renyi (order 1 + s). */
QPA_API qpa_status qpa_pa_search(const qpa_state* cq, const qpa_config* config, int n,
                                 size_t range, const char* measure, double s, qpa_doc** out);
/* Family average. family: all, affine (prime 0 picks the smallest prime
 * >= |X|^n), example2 (range fixed at 2^n). samples = 0 requests an
 * exhaustive average, falling back to 10^4 Monte-Carlo draws over budget. */
QPA_API qpa_status qpa_pa_family(const qpa_state* cq, const qpa_config* config,
                                 const char* family, uint64_t prime, int n, size_t range,
                                 const char* measure, double s, uint64_t samples, qpa_doc** out);
/* name: example1 (n, range_bits), example2 (n), properties. */
QPA_API qpa_status qpa_suite(const char* name, const qpa_config* config, int n, int range_bits,
                             qpa_doc** out);

QPA_API const char* qpa_doc_json(const qpa_doc* doc);
/* 1 unless the document reports a failed check. */
QPA_API int qpa_doc_passed(const qpa_doc* doc);
QPA_API void qpa_doc_free(qpa_doc* doc);

#ifdef __cplusplus
}
#endif

#endif /* QPA_QPA_H_ */
