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

#include "qpa/qpa.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "qpa/error.hpp"
#include "qpa/exponents.hpp"
#include "qpa/measures.hpp"
#include "qpa/parallel.hpp"
#include "qpa/privacy.hpp"
#include "qpa/report.hpp"
#include "qpa/smoothing.hpp"
#include "qpa/suites.hpp"

using qpa::report::Json;
using qpa::report::number;

struct qpa_state {
  qpa::report::StateFile file;
};

struct qpa_config {
  std::uint64_t seed = 0;
  int threads = 1;
  double s_max = 64.0;
  std::uint64_t budget = qpa::kEnumerationBudget;
  double rate_tol = 1e-9;
  double search_tol = 1e-11;
  double fd_step = 1e-4;
  double slack = 1e-9;
  double resolution = 1e-6;
};

struct qpa_doc {
  std::string text;
  bool passed = true;
};

namespace {

thread_local std::string g_last_error;

qpa_status status_for(qpa::ErrorCode code) {
  switch (code) {
    case qpa::ErrorCode::kInvalidArgument:
    case qpa::ErrorCode::kDimensionMismatch:
    case qpa::ErrorCode::kNonCommuting:
    case qpa::ErrorCode::kParse:
      return QPA_INVALID;
    case qpa::ErrorCode::kBudgetExceeded:
      return QPA_BUDGET_EXCEEDED;
    case qpa::ErrorCode::kNotConverged:
      return QPA_INVARIANT_FAILED;
  }
  return QPA_INTERNAL;
}

template <class Fn>
qpa_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return QPA_OK;
  } catch (const qpa::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QPA_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QPA_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) qpa::Fail(qpa::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

qpa::StateDescriptor as_density(const qpa_state* s) {
  require(s, "state");
  if (const auto* cq = std::get_if<qpa::CQState>(&s->file.state)) {
    return qpa::StateDescriptor(cq->to_dense());
  }
  return std::get<qpa::StateDescriptor>(s->file.state);
}

const qpa::CQState& as_cq(const qpa_state* s) {
  require(s, "state");
  const auto* cq = std::get_if<qpa::CQState>(&s->file.state);
  if (!cq) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "expected a CQ state (kind \"cq\")");
  return *cq;
}

qpa::ExponentOptions exponent_options(const qpa_config* c) {
  qpa::ExponentOptions o;
  if (c) {
    o.s_max = c->s_max;
    o.rate_tol = c->rate_tol;
    o.fd_step = c->fd_step;
    o.search_tol = c->search_tol;
  }
  return o;
}

const qpa_config& config_or_default(const qpa_config* c) {
  static const qpa_config defaults;
  return c ? *c : defaults;
}

qpa::Matrix read_matrix(std::size_t dim, const double* entries) {
  qpa::Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim * dim; ++i) m(i / dim, i % dim) = {entries[2 * i], entries[2 * i + 1]};
  return m;
}

void emit(const Json& j, qpa_doc** out, bool passed = true) {
  require(out, "output");
  *out = new qpa_doc{j.dump(), passed};
}

void fill(const qpa::ExponentValue& v, qpa_exponent* out) {
  require(out, "output");
  out->value = v.value;
  out->has_maximizer = v.maximizer_s.has_value();
  out->maximizer_s = v.maximizer_s.value_or(0.0);
  out->regime = static_cast<int>(v.regime);
  out->capped = v.capped;
  out->boundary = v.boundary;
  out->has_capped_value = v.capped_value.has_value();
  out->capped_value = v.capped_value.value_or(0.0);
  out->valid = v.valid;
}

qpa::MeasureSpec measure_spec(const char* measure, double s) {
  require(measure, "measure");
  return {qpa::parse_measure(measure), s};
}

double exponent_sample(double value, int n) {
  return value > 0.0 ? -std::log2(value) / n : qpa::kInf;
}

std::uint64_t next_prime(std::uint64_t x) {
  while (!qpa::is_prime(x)) ++x;
  return x;
}

}  // namespace

extern "C" {

const char* qpa_version(void) { return QPA_VERSION; }

const char* qpa_last_error(void) { return g_last_error.c_str(); }

uint64_t qpa_fnv1a64(const void* data, size_t length) {
  if (!data) return qpa::report::fnv1a64({});
  return qpa::report::fnv1a64(std::string_view(static_cast<const char*>(data), length));
}

qpa_status qpa_state_parse(const char* json, size_t length, qpa_state** out) {
  return guard([&] {
    require(json, "json");
    require(out, "output");
    *out = new qpa_state{qpa::report::parse_state(std::string_view(json, length))};
  });
}

qpa_status qpa_state_density(size_t dim, const double* entries, int subnormalized, qpa_state** out) {
  return guard([&] {
    require(entries, "entries");
    require(out, "output");
    if (dim == 0) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "dimension must be positive");
    qpa::StateDescriptor d(qpa::HermitianOperator(read_matrix(dim, entries)),
                           subnormalized ? qpa::StateKind::kSubnormalized : qpa::StateKind::kNormalized);
    *out = new qpa_state{{"", d}};
  });
}

qpa_status qpa_state_cq(size_t symbols, size_t dim_e, const double* probs, const double* conditionals,
                        qpa_state** out) {
  return guard([&] {
    require(probs, "probs");
    require(conditionals, "conditionals");
    require(out, "output");
    if (symbols == 0 || dim_e == 0) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "empty CQ state");
    std::vector<double> p(probs, probs + symbols);
    std::vector<qpa::HermitianOperator> c;
    for (std::size_t x = 0; x < symbols; ++x) {
      c.emplace_back(read_matrix(dim_e, conditionals + 2 * dim_e * dim_e * x));
    }
    *out = new qpa_state{{"", qpa::CQState(std::move(p), std::move(c))}};
  });
}

void qpa_state_free(qpa_state* state) { delete state; }

int qpa_state_is_cq(const qpa_state* state) { return state && state->file.is_cq(); }

size_t qpa_state_dim(const qpa_state* state) {
  if (!state) return 0;
  if (const auto* cq = std::get_if<qpa::CQState>(&state->file.state)) return cq->size() * cq->dim_e();
  return std::get<qpa::StateDescriptor>(state->file.state).dim();
}

qpa_config* qpa_config_new(void) { return new (std::nothrow) qpa_config(); }

void qpa_config_free(qpa_config* config) { delete config; }

void qpa_config_set_seed(qpa_config* config, uint64_t seed) {
  if (config) config->seed = seed;
}

qpa_status qpa_config_set_threads(qpa_config* config, int threads) {
  return guard([&] {
    require(config, "config");
    if (threads < 1) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "threads must be at least 1");
    config->threads = threads;
  });
}

qpa_status qpa_config_set_s_max(qpa_config* config, double s_max) {
  return guard([&] {
    require(config, "config");
    if (!(s_max > 1.0) || !std::isfinite(s_max)) {
      qpa::Fail(qpa::ErrorCode::kInvalidArgument, "s_max must be a finite number above 1");
    }
    config->s_max = s_max;
  });
}

qpa_status qpa_config_set_budget(qpa_config* config, uint64_t budget) {
  return guard([&] {
    require(config, "config");
    if (budget == 0) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "budget must be positive");
    config->budget = budget;
  });
}

qpa_status qpa_config_set_tolerance(qpa_config* config, const char* key, double value) {
  return guard([&] {
    require(config, "config");
    require(key, "key");
    if (!(value > 0.0) || !std::isfinite(value)) {
      qpa::Fail(qpa::ErrorCode::kInvalidArgument, "tolerance must be a positive finite number");
    }
    const std::string k = key;
    if (k == "rate_tol") config->rate_tol = value;
    else if (k == "search_tol") config->search_tol = value;
    else if (k == "fd_step") config->fd_step = value;
    else if (k == "slack") config->slack = value;
    else if (k == "resolution") config->resolution = value;
    else qpa::Fail(qpa::ErrorCode::kInvalidArgument,
                   "unknown tolerance '" + k + "' (rate_tol, search_tol, fd_step, slack, resolution)");
  });
}

qpa_status qpa_config_describe(const qpa_config* config, qpa_doc** out) {
  return guard([&] {
    const qpa_config& c = config_or_default(config);
    Json j;
    j["seed"] = c.seed;
    j["s_max"] = c.s_max;
    j["budget"] = c.budget;
    j["tolerances"] = {{"rate_tol", c.rate_tol},
                       {"search_tol", c.search_tol},
                       {"fd_step", c.fd_step},
                       {"slack", c.slack},
                       {"resolution", c.resolution},
                       {"cluster_tol", qpa::kClusterTol},
                       {"support_cut", qpa::kSupportCut}};
    emit(j, out);
  });
}

qpa_status qpa_fidelity(const qpa_state* rho, const qpa_state* sigma, double* out) {
  return guard([&] {
    require(out, "output");
    *out = qpa::fidelity(as_density(rho), as_density(sigma));
  });
}

qpa_status qpa_purified_distance(const qpa_state* rho, const qpa_state* sigma, double* out) {
  return guard([&] {
    require(out, "output");
    *out = qpa::purified_distance(as_density(rho), as_density(sigma));
  });
}

qpa_status qpa_trace_distance(const qpa_state* rho, const qpa_state* sigma, double* out) {
  return guard([&] {
    require(out, "output");
    *out = qpa::trace_distance(as_density(rho), as_density(sigma));
  });
}

qpa_status qpa_relative_entropy(const qpa_state* rho, const qpa_state* sigma, double* out) {
  return guard([&] {
    require(out, "output");
    *out = qpa::relative_entropy(as_density(rho), as_density(sigma).op()).value;
  });
}

qpa_status qpa_sandwiched_renyi(const qpa_state* rho, const qpa_state* sigma, double alpha, double* out) {
  return guard([&] {
    require(out, "output");
    *out = qpa::sandwiched_renyi(as_density(rho), as_density(sigma).op(), alpha).value;
  });
}

qpa_status qpa_max_relative_entropy(const qpa_state* rho, const qpa_state* sigma, double* out) {
  return guard([&] {
    require(out, "output");
    *out = qpa::d_max(as_density(rho), as_density(sigma).op()).value;
  });
}

qpa_status qpa_conditional_entropy(const qpa_state* cq, double alpha, double* out) {
  return guard([&] {
    require(out, "output");
    const qpa::CQState& state = as_cq(cq);
    if (std::isinf(alpha) && alpha > 0) *out = qpa::conditional_min_entropy(state);
    else if (alpha == 1.0) *out = qpa::conditional_entropy(state);
    else *out = qpa::renyi_conditional_entropy(state, alpha);
  });
}

qpa_status qpa_pa_upper_exponent(const qpa_state* cq, const qpa_config* config, double rate, qpa_exponent* out) {
  return guard([&] { fill(qpa::pa_upper_exponent(as_cq(cq), rate, exponent_options(config)), out); });
}

qpa_status qpa_pa_lower_exponent(const qpa_state* cq, const qpa_config* config, double rate, qpa_exponent* out) {
  return guard([&] { fill(qpa::pa_lower_exponent(as_cq(cq), rate, exponent_options(config)), out); });
}

qpa_status qpa_smoothing_exponent(const qpa_state* rho, const qpa_state* sigma, const qpa_config* config,
                                  double r, qpa_exponent* out) {
  return guard([&] {
    fill(qpa::smoothing_exponent(as_density(rho), as_density(sigma).op(), r, exponent_options(config)), out);
  });
}

qpa_status qpa_r_hat(const qpa_state* cq, const qpa_config* config, double s, double* out) {
  return guard([&] {
    require(out, "output");
    *out = qpa::r_hat(as_cq(cq), s, exponent_options(config));
  });
}

qpa_status qpa_r_critical(const qpa_state* cq, const qpa_config* config, double* out) {
  return guard([&] {
    require(out, "output");
    *out = qpa::r_critical(as_cq(cq), exponent_options(config));
  });
}

qpa_status qpa_measure(const qpa_state* rho, const qpa_state* sigma, const char* quantity, double param,
                       const qpa_config* config, qpa_doc** out) {
  return guard([&] {
    require(quantity, "quantity");
    const qpa_config& c = config_or_default(config);
    const std::string q = quantity;
    Json j;
    j["quantity"] = q;
    auto divergence = [&](const qpa::DivergenceResult& d) {
      j["value"] = number(d.value);
      j["support_violation"] = number(d.support_violation);
    };
    if (q == "fidelity") {
      j["value"] = number(qpa::fidelity(as_density(rho), as_density(sigma)));
    } else if (q == "purified") {
      j["value"] = number(qpa::purified_distance(as_density(rho), as_density(sigma)));
    } else if (q == "trace") {
      j["value"] = number(qpa::trace_distance(as_density(rho), as_density(sigma)));
    } else if (q == "relative") {
      divergence(qpa::relative_entropy(as_density(rho), as_density(sigma).op()));
    } else if (q == "renyi") {
      j["alpha"] = param;
      divergence(qpa::sandwiched_renyi(as_density(rho), as_density(sigma).op(), param));
    } else if (q == "dmax") {
      divergence(qpa::d_max(as_density(rho), as_density(sigma).op()));
    } else if (q == "entropy") {
      j["value"] = number(qpa::conditional_entropy(as_cq(rho)));
    } else if (q == "renyi-entropy") {
      j["alpha"] = param;
      j["value"] = number(qpa::renyi_conditional_entropy(as_cq(rho), param));
    } else if (q == "min-entropy") {
      j["value"] = number(qpa::conditional_min_entropy(as_cq(rho)));
    } else if (q == "smooth-min-entropy") {
      j["epsilon"] = param;
      j["resolution"] = c.resolution;
      j["value"] = number(qpa::smooth_min_entropy(as_cq(rho), param, c.resolution));
    } else if (q == "r-critical") {
      j["value"] = number(qpa::r_critical(as_cq(rho), exponent_options(config)));
    } else {
      qpa::Fail(qpa::ErrorCode::kInvalidArgument, "unknown quantity '" + q + "'");
    }
    emit(j, out);
  });
}

qpa_status qpa_exponent_curve(const qpa_state* cq, const qpa_config* config, double r_min, double r_max,
                              int count, const char* mode, double renyi_s, qpa_doc** out) {
  return guard([&] {
    require(mode, "mode");
    const std::string m = mode;
    qpa::CurveMode cm;
    if (m == "upper") cm = qpa::CurveMode::kUpper;
    else if (m == "lower") cm = qpa::CurveMode::kLower;
    else if (m == "both") cm = qpa::CurveMode::kBoth;
    else if (m == "renyi") cm = qpa::CurveMode::kRenyi;
    else qpa::Fail(qpa::ErrorCode::kInvalidArgument, "unknown curve mode '" + m + "' (upper, lower, both, renyi)");
    const qpa::ExponentCurve curve = qpa::exponent_curve(as_cq(cq), r_min, r_max, count, cm, renyi_s,
                                                         exponent_options(config), config_or_default(config).threads);
    emit(qpa::report::to_json(curve), out);
  });
}

namespace {

Json certificate_entry(const qpa::SmoothingCertificate& cert) {
  Json j = qpa::report::to_json(cert);
  j.erase("witness");
  const double n = cert.n;
  // + 0.0 folds -0 into 0
  j["exponent_bracket"] = {{"lower", number(cert.upper > 0.0 ? -std::log2(cert.upper) / n + 0.0 : qpa::kInf)},
                           {"upper", number(cert.lower > 0.0 ? -std::log2(cert.lower) / n : qpa::kInf)}};
  return j;
}

qpa::CertificateOptions certificate_options(const qpa_config& c, double t) {
  qpa::CertificateOptions o;
  o.t = t;
  o.s_max = c.s_max;
  o.search_tol = c.search_tol;
  return o;
}

}  // namespace

qpa_status qpa_smoothing_n_grid(const qpa_state* rho, const qpa_state* sigma, const qpa_config* config,
                                double rate, int n_min, int n_max, double t, qpa_doc** out) {
  return guard([&] {
    const qpa_config& c = config_or_default(config);
    if (n_min < 1 || n_max < n_min) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "n grid must satisfy 1 <= n_min <= n_max");
    const qpa::StateDescriptor r = as_density(rho);
    const qpa::HermitianOperator s = as_density(sigma).op();
    std::vector<Json> entries(static_cast<std::size_t>(n_max - n_min + 1));
    qpa::parallel_for(entries.size(), c.threads, [&](std::size_t i) {
      entries[i] = certificate_entry(
          qpa::iid_smoothing_certificate(r, s, rate, n_min + static_cast<int>(i), certificate_options(c, t)));
    });
    Json j;
    j["grid"] = "n";
    j["rate"] = number(rate);
    j["t"] = t;
    j["D"] = number(qpa::relative_entropy(r, s).value);
    j["D_max"] = number(qpa::d_max(r, s).value);
    j["smoothing_exponent"] = qpa::report::to_json(qpa::smoothing_exponent(r, s, rate, exponent_options(config)));
    j["certificates"] = entries;
    emit(j, out);
  });
}

qpa_status qpa_smoothing_lambda_grid(const qpa_state* rho, const qpa_state* sigma, const qpa_config* config,
                                     double lambda_min, double lambda_max, int count, double t, qpa_doc** out) {
  return guard([&] {
    const qpa_config& c = config_or_default(config);
    if (count < 1 || (count > 1 && !(lambda_min < lambda_max))) {
      qpa::Fail(qpa::ErrorCode::kInvalidArgument, "lambda grid must have count >= 1 and min < max");
    }
    const qpa::StateDescriptor r = as_density(rho);
    const qpa::HermitianOperator s = as_density(sigma).op();
    std::vector<Json> entries(static_cast<std::size_t>(count));
    qpa::parallel_for(entries.size(), c.threads, [&](std::size_t i) {
      const double lambda = count == 1 ? lambda_min : lambda_min + (lambda_max - lambda_min) * i / (count - 1);
      qpa::SmoothingCertificate cert = qpa::iid_smoothing_certificate(r, s, lambda, 1, certificate_options(c, t));
      Json e = qpa::report::to_json(cert);
      e.erase("n");
      entries[i] = std::move(e);
    });
    Json j;
    j["grid"] = "lambda";
    j["t"] = t;
    j["certificates"] = entries;
    emit(j, out);
  });
}

qpa_status qpa_pa_search(const qpa_state* cq, const qpa_config* config, int n, size_t range, const char* measure,
                         double s, qpa_doc** out) {
  return guard([&] {
    const qpa_config& c = config_or_default(config);
    if (n < 1) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "n must be positive");
    if (range < 1) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "range must be positive");
    const qpa::MeasureSpec ms = measure_spec(measure, s);
    const qpa::CQState source = as_cq(cq).tensor_power(n);
    const qpa::InsecurityReport r = qpa::min_insecurity_exhaustive(source, range, ms, c.threads, c.budget);
    Json j;
    j["n"] = n;
    j["range_size"] = range;
    j["log_range"] = number(std::log2(static_cast<double>(range)));
    j["rate"] = number(std::log2(static_cast<double>(range)) / n);
    j["result"] = qpa::report::to_json(r);
    j["exponent_sample"] = number(exponent_sample(r.value, n));
    if (ms.measure == qpa::Measure::kRenyi) j["normalized_value"] = number(r.value / n);
    emit(j, out, ms.measure != qpa::Measure::kRelativeEntropy || r.identity_gap <= c.slack);
  });
}

qpa_status qpa_pa_family(const qpa_state* cq, const qpa_config* config, const char* family, uint64_t prime, int n,
                         size_t range, const char* measure, double s, uint64_t samples, qpa_doc** out) {
  return guard([&] {
    require(family, "family");
    const qpa_config& c = config_or_default(config);
    if (n < 1) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "n must be positive");
    const qpa::MeasureSpec ms = measure_spec(measure, s);
    const qpa::CQState& base = as_cq(cq);
    const qpa::CQState source = base.tensor_power(n);
    const std::string f = family;
    std::optional<qpa::HashFamily> fam;
    if (f == "all") {
      fam = qpa::HashFamily::AllFunctions(source.size(), range);
    } else if (f == "affine") {
      fam = qpa::HashFamily::AffinePrime(prime ? prime : next_prime(source.size()), range, source.size());
    } else if (f == "example2") {
      if (base.size() != 4) qpa::Fail(qpa::ErrorCode::kInvalidArgument, "example2 family needs a 4-symbol source");
      fam = qpa::HashFamily::Example2Permutation(n);
    } else {
      qpa::Fail(qpa::ErrorCode::kInvalidArgument, "unknown family '" + f + "' (all, affine, example2)");
    }
    qpa::Sampling sampling{samples == 0, samples == 0 ? 10'000 : samples, c.seed};
    const qpa::FamilyExpectation e = qpa::family_expectation(*fam, source, ms, sampling, c.threads, c.budget);
    Json j;
    j["family"] = fam->name();
    j["n"] = n;
    j["range_size"] = fam->range_size();
    j["measure"] = qpa::measure_name(ms.measure);
    if (ms.measure == qpa::Measure::kRenyi) j["s"] = ms.s;
    j["expectation"] = qpa::report::to_json(e);
    j["exponent_sample"] = number(exponent_sample(e.mean, n));
    try {
      j["collision"] = qpa::report::to_json(fam->certify());
    } catch (const qpa::Error& err) {
      if (err.code() != qpa::ErrorCode::kBudgetExceeded) throw;
      j["collision"] = nullptr;
    }
    emit(j, out);
  });
}

qpa_status qpa_suite(const char* name, const qpa_config* config, int n, int range_bits, qpa_doc** out) {
  return guard([&] {
    require(name, "suite name");
    const qpa_config& c = config_or_default(config);
    qpa::SuiteOptions opt;
    opt.seed = c.seed;
    opt.threads = c.threads;
    opt.budget = c.budget;
    opt.slack = c.slack;
    const std::string s = name;
    Json j;
    if (s == "example1") j = qpa::example1_suite(n, range_bits, opt);
    else if (s == "example2") j = qpa::example2_suite(n, opt);
    else if (s == "properties") j = qpa::properties_suite(opt);
    else qpa::Fail(qpa::ErrorCode::kInvalidArgument, "unknown suite '" + s + "' (example1, example2, properties)");
    emit(j, out, qpa::passed(j));
  });
}

const char* qpa_doc_json(const qpa_doc* doc) { return doc ? doc->text.c_str() : ""; }

int qpa_doc_passed(const qpa_doc* doc) { return doc && doc->passed; }

void qpa_doc_free(qpa_doc* doc) { delete doc; }

}  // extern "C"
