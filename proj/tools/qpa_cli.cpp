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

// qpa command-line front end. Talks to the library only through qpa.h.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpa/qpa.h"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kInvariant = 1, kValidation = 2, kBudget = 3 };

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void invalid(const std::string& msg) { throw Failure{kValidation, msg}; }

void check(qpa_status st, const std::string& context = {}) {
  if (st == QPA_OK) return;
  std::string msg = qpa_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  switch (st) {
    case QPA_INVALID: throw Failure{kValidation, msg};
    case QPA_BUDGET_EXCEEDED: throw Failure{kBudget, msg};
    default: throw Failure{kInvariant, msg};
  }
}

struct DocDeleter {
  void operator()(qpa_doc* d) const { qpa_doc_free(d); }
};
struct StateDeleter {
  void operator()(qpa_state* s) const { qpa_state_free(s); }
};
struct ConfigDeleter {
  void operator()(qpa_config* c) const { qpa_config_free(c); }
};
using DocPtr = std::unique_ptr<qpa_doc, DocDeleter>;
using StatePtr = std::unique_ptr<qpa_state, StateDeleter>;
using ConfigPtr = std::unique_ptr<qpa_config, ConfigDeleter>;

// Takes ownership of a finished document.
struct Result {
  Json body;
  bool passed = true;
};

Result take(qpa_doc* raw) {
  DocPtr doc(raw);
  return {Json::parse(qpa_doc_json(doc.get())), qpa_doc_passed(doc.get()) != 0};
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// 12 significant digits, '.' separator regardless of locale.
std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

std::string cell(const Json& j) {
  if (j.is_null()) return "";
  if (j.is_number()) return format_number(j.get<double>());
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

const Json& at_or_null(const Json& j, const char* key) {
  static const Json null;
  auto it = j.find(key);
  return it == j.end() ? null : *it;
}

struct Input {
  std::string path;
  StatePtr state;
  std::uint64_t hash;
};

Input load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  qpa_state* raw = nullptr;
  check(qpa_state_parse(text.data(), text.size(), &raw), path);
  return {path, StatePtr(raw), qpa_fnv1a64(text.data(), text.size())};
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  if (s == "inf") return INFINITY;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::size_t range_for_rate(double rate, int n) {
  const double m = std::floor(std::exp2(rate * n) + 1e-9);
  if (!(m >= 1.0) || m > 1e15) invalid("rate gives an unusable range size");
  return static_cast<std::size_t>(m);
}

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  double s_max = 64.0;
  std::uint64_t budget = 1ull << 24;
  std::vector<std::string> tol;
  std::string format = "json";
};

ConfigPtr make_config(const Globals& g) {
  ConfigPtr cfg(qpa_config_new());
  if (!cfg) throw Failure{kInvariant, "out of memory"};
  qpa_config_set_seed(cfg.get(), g.seed);
  check(qpa_config_set_threads(cfg.get(), g.threads), "--threads");
  check(qpa_config_set_s_max(cfg.get(), g.s_max), "--s-max");
  check(qpa_config_set_budget(cfg.get(), g.budget), "--budget");
  for (const auto& kv : g.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) invalid("--tol expects KEY=VAL, got '" + kv + "'");
    const auto v = parse_double(kv.substr(eq + 1));
    if (!v) invalid("--tol value is not a number: '" + kv + "'");
    check(qpa_config_set_tolerance(cfg.get(), kv.substr(0, eq).c_str(), *v), "--tol");
  }
  return cfg;
}

// Everything needed to reproduce a run, minus the thread count.
Json make_header(const std::string& command, const Json& arguments, const qpa_config* cfg,
                 const std::vector<Input>& inputs, const std::string& format) {
  qpa_doc* raw = nullptr;
  check(qpa_config_describe(cfg, &raw));
  Json h;
  h["artifact"] = "qpa";
  h["version"] = qpa_version();
  h["command"] = command;
  h["format"] = format;
  h["config"] = take(raw).body;
  h["arguments"] = arguments;
  Json in = Json::array();
  for (const auto& i : inputs) in.push_back({{"file", i.path}, {"fnv1a64", hex64(i.hash)}});
  h["inputs"] = std::move(in);
  return h;
}

void write_csv_header(std::ostream& os, const Json& header) {
  os << "# artifact=" << header["artifact"].get<std::string>() << "\n";
  os << "# version=" << header["version"].get<std::string>() << "\n";
  os << "# command=" << header["command"].get<std::string>() << "\n";
  os << "# config=" << header["config"].dump() << "\n";
  os << "# arguments=" << header["arguments"].dump() << "\n";
  for (const auto& i : header["inputs"]) {
    os << "# input=" << i["file"].get<std::string>() << " fnv1a64=" << i["fnv1a64"].get<std::string>() << "\n";
  }
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << "\n";
}

// ---- csv layouts ----

void curve_csv(std::ostream& os, const Json& r) {
  for (const auto& [k, v] : r["annotations"].items()) os << "# annotation," << k << "," << cell(v) << "\n";
  if (r["mode"] == "renyi") {
    write_row(os, {"R", "E_renyi", "valid", "maximizer_s"});
    for (const auto& p : r["points"]) {
      const Json& e = p["renyi"];
      write_row(os, {cell(p["R"]), cell(e["value"]), cell(e["valid"]), cell(at_or_null(e, "maximizer_s"))});
    }
    return;
  }
  write_row(os, {"R", "E_u", "E_l", "regime", "maximizer_s"});
  for (const auto& p : r["points"]) {
    const Json& u = at_or_null(p, "upper");
    const Json& l = at_or_null(p, "lower");
    const Json& lead = u.is_null() ? l : u;
    write_row(os, {cell(p["R"]), u.is_null() ? "" : cell(u["value"]), l.is_null() ? "" : cell(l["value"]),
                   cell(lead["regime"]), cell(at_or_null(lead, "maximizer_s"))});
  }
}

void smooth_csv(std::ostream& os, const Json& r) {
  const bool by_n = r["grid"] == "n";
  for (const char* k : {"rate", "D", "D_max"}) {
    if (r.contains(k)) os << "# annotation," << k << "," << cell(r[k]) << "\n";
  }
  if (r.contains("smoothing_exponent")) {
    os << "# annotation,smoothing_exponent," << cell(r["smoothing_exponent"]["value"]) << "\n";
  }
  std::vector<std::string> cols = {by_n ? "n" : "lambda", "lower", "exact", "upper", "upper_s", "witness_value"};
  if (by_n) {
    cols.push_back("bracket_lower");
    cols.push_back("bracket_upper");
  }
  write_row(os, cols);
  for (const auto& c : r["certificates"]) {
    std::vector<std::string> row = {cell(by_n ? c["n"] : c["lambda"]), cell(c["lower"]), cell(c["exact"]),
                                    cell(c["upper"]), cell(c["upper_s"]), cell(c["witness_value"])};
    if (by_n) {
      row.push_back(cell(c["exponent_bracket"]["lower"]));
      row.push_back(cell(c["exponent_bracket"]["upper"]));
    }
    write_row(os, row);
  }
}

void measure_csv(std::ostream& os, const Json& r) {
  write_row(os, {"quantity", "param", "value", "support_violation"});
  for (const auto& m : r["measurements"]) {
    Json param = at_or_null(m, "alpha");
    if (param.is_null()) param = at_or_null(m, "epsilon");
    write_row(os, {m["quantity"].get<std::string>(), cell(param), cell(m["value"]),
                   cell(at_or_null(m, "support_violation"))});
  }
}

// ---- commands ----

struct MeasureArgs {
  std::vector<std::string> files;
  std::string divergence, entropy;
  double alpha = 2.0, epsilon = 0.01;
};

struct CurveArgs {
  std::string file, mode = "both";
  double r_min = 0.0, r_max = 0.0, s = 0.5;
  int points = 21;
};

struct SmoothArgs {
  std::vector<std::string> files;
  std::string grid = "n";
  double rate = 0.0, lambda_min = 0.0, lambda_max = 1.0, t = 9.0;
  int n_min = 1, n_max = 12, points = 11;
};

struct SearchArgs {
  std::string file, measure = "trace", family = "all";
  int n = 1;
  std::size_t range = 0;
  std::optional<double> rate;
  double s = 1.0;
  std::uint64_t prime = 0, samples = 0;
};

struct SuiteArgs {
  std::string name;
  int n = 1, range_bits = 1;
};

struct Run {
  Json arguments;
  std::vector<Input> inputs;
  Result result;
  void (*csv)(std::ostream&, const Json&) = nullptr;
};

void run_measure(const MeasureArgs& a, const qpa_config* cfg, Run& run) {
  for (const auto& f : a.files) run.inputs.push_back(load(f));
  std::vector<std::pair<std::string, double>> quantities;
  const bool pair = run.inputs.size() == 2;
  std::string div = a.divergence, ent = a.entropy;
  if (!div.empty() && !ent.empty()) invalid("choose either --divergence or --entropy");
  if (div.empty() && ent.empty()) (pair ? div : ent) = "all";
  if (!div.empty()) {
    if (!pair) invalid("divergences need two state files");
    if (div == "all") {
      for (const char* q : {"fidelity", "purified", "trace", "relative"}) quantities.emplace_back(q, 0.0);
      quantities.emplace_back("renyi", a.alpha);
      quantities.emplace_back("dmax", 0.0);
    } else {
      quantities.emplace_back(div, a.alpha);
    }
  } else {
    if (pair) invalid("entropies take a single CQ state file");
    if (ent == "all") {
      quantities = {{"entropy", 0.0}, {"renyi-entropy", a.alpha}, {"min-entropy", 0.0},
                    {"smooth-min-entropy", a.epsilon}, {"r-critical", 0.0}};
    } else {
      const std::string q = ent == "shannon" ? "entropy"
                            : ent == "renyi" ? "renyi-entropy"
                            : ent == "min"   ? "min-entropy"
                            : ent == "smooth-min" ? "smooth-min-entropy"
                                                  : ent;
      quantities.emplace_back(q, q == "smooth-min-entropy" ? a.epsilon : a.alpha);
    }
  }
  run.arguments = {{"divergence", div}, {"entropy", ent}, {"alpha", a.alpha}, {"epsilon", a.epsilon}};
  if (pair && qpa_state_dim(run.inputs[0].state.get()) != qpa_state_dim(run.inputs[1].state.get())) {
    invalid("states have different dimensions (" + std::to_string(qpa_state_dim(run.inputs[0].state.get())) + " vs " +
            std::to_string(qpa_state_dim(run.inputs[1].state.get())) + ")");
  }
  const bool listing = div == "all" || ent == "all";
  Json list = Json::array();
  for (const auto& [q, param] : quantities) {
    qpa_doc* raw = nullptr;
    const qpa_status st =
        qpa_measure(run.inputs[0].state.get(), pair ? run.inputs[1].state.get() : nullptr, q.c_str(), param, cfg, &raw);
    // a blanket listing skips quantities that do not apply to this state
    if (listing && st == QPA_INVALID) {
      list.push_back({{"quantity", q}, {"value", nullptr}, {"unavailable", qpa_last_error()}});
      continue;
    }
    check(st, q);
    list.push_back(take(raw).body);
  }
  run.result.body = {{"measurements", std::move(list)}};
  run.csv = measure_csv;
}

void run_curve(const CurveArgs& a, const qpa_config* cfg, Run& run) {
  run.inputs.push_back(load(a.file));
  run.arguments = {{"r_min", a.r_min}, {"r_max", a.r_max}, {"points", a.points}, {"mode", a.mode}};
  if (a.mode == "renyi") run.arguments["s"] = a.s;
  qpa_doc* raw = nullptr;
  check(qpa_exponent_curve(run.inputs[0].state.get(), cfg, a.r_min, a.r_max, a.points, a.mode.c_str(), a.s, &raw));
  run.result = take(raw);
  run.csv = curve_csv;
}

void run_smooth(const SmoothArgs& a, const qpa_config* cfg, Run& run) {
  for (const auto& f : a.files) run.inputs.push_back(load(f));
  qpa_doc* raw = nullptr;
  if (a.grid == "n") {
    run.arguments = {{"grid", "n"}, {"rate", a.rate}, {"n_min", a.n_min}, {"n_max", a.n_max}, {"t", a.t}};
    check(qpa_smoothing_n_grid(run.inputs[0].state.get(), run.inputs[1].state.get(), cfg, a.rate, a.n_min, a.n_max,
                               a.t, &raw));
  } else if (a.grid == "lambda") {
    run.arguments = {{"grid", "lambda"}, {"lambda_min", a.lambda_min}, {"lambda_max", a.lambda_max},
                     {"points", a.points}, {"t", a.t}};
    check(qpa_smoothing_lambda_grid(run.inputs[0].state.get(), run.inputs[1].state.get(), cfg, a.lambda_min,
                                    a.lambda_max, a.points, a.t, &raw));
  } else {
    invalid("--grid must be n or lambda");
  }
  run.result = take(raw);
  run.csv = smooth_csv;
}

std::size_t resolve_range(const SearchArgs& a) {
  if (a.rate && a.range) invalid("give either --range or --rate, not both");
  if (a.rate) return range_for_rate(*a.rate, a.n);
  return a.range ? a.range : 2;
}

void run_search(const SearchArgs& a, const qpa_config* cfg, Run& run) {
  run.inputs.push_back(load(a.file));
  const std::size_t range = resolve_range(a);
  run.arguments = {{"n", a.n}, {"range", range}, {"measure", a.measure}};
  if (a.rate) run.arguments["rate"] = *a.rate;
  if (a.measure == "renyi") run.arguments["s"] = a.s;
  qpa_doc* raw = nullptr;
  check(qpa_pa_search(run.inputs[0].state.get(), cfg, a.n, range, a.measure.c_str(), a.s, &raw));
  run.result = take(raw);
}

void run_family(const SearchArgs& a, const qpa_config* cfg, Run& run) {
  run.inputs.push_back(load(a.file));
  const std::size_t range = resolve_range(a);
  run.arguments = {{"family", a.family}, {"n", a.n}, {"range", range}, {"measure", a.measure},
                   {"samples", a.samples}};
  if (a.rate) run.arguments["rate"] = *a.rate;
  if (a.measure == "renyi") run.arguments["s"] = a.s;
  if (a.family == "affine") run.arguments["prime"] = a.prime;
  qpa_doc* raw = nullptr;
  check(qpa_pa_family(run.inputs[0].state.get(), cfg, a.family.c_str(), a.prime, a.n, range, a.measure.c_str(), a.s,
                      a.samples, &raw));
  run.result = take(raw);
}

void run_suite(const SuiteArgs& a, const qpa_config* cfg, Run& run) {
  run.arguments = {{"suite", a.name}, {"n", a.n}, {"range_bits", a.range_bits}};
  qpa_doc* raw = nullptr;
  check(qpa_suite(a.name.c_str(), cfg, a.n, a.range_bits, &raw));
  run.result = take(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpa: quantum privacy amplification and smoothing toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(qpa_version()));

  Globals g;
  app.add_option("--seed", g.seed, "random seed for sampling commands");
  app.add_option("--threads", g.threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--s-max", g.s_max, "upper end of the exponent parameter search");
  app.add_option("--tol", g.tol, "tolerance override KEY=VAL (rate_tol, search_tol, fd_step, slack, resolution)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--budget", g.budget, "enumeration budget")->check(CLI::PositiveNumber);

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "divergences of a state pair or entropies of a CQ state");
  measure->add_option("files", ma.files, "one CQ state, or rho and sigma")->required()->expected(1, 2);
  measure->add_option("--divergence", ma.divergence, "fidelity, purified, trace, relative, renyi, dmax, all");
  measure->add_option("--entropy", ma.entropy, "shannon, renyi, min, smooth-min, r-critical, all");
  measure->add_option("--alpha", ma.alpha, "Renyi order");
  measure->add_option("--epsilon", ma.epsilon, "smoothing radius for smooth-min");

  CurveArgs ca;
  auto* curve = app.add_subcommand("exponent-curve", "security exponents over a grid of rates");
  curve->add_option("file", ca.file, "CQ state")->required();
  curve->add_option("--r-min", ca.r_min, "smallest rate");
  curve->add_option("--r-max", ca.r_max, "largest rate")->required();
  curve->add_option("--points", ca.points, "grid size");
  curve->add_option("--mode", ca.mode, "upper, lower, both or renyi")
      ->check(CLI::IsMember({"upper", "lower", "both", "renyi"}));
  curve->add_option("--s", ca.s, "order parameter for renyi mode");

  SmoothArgs sa;
  auto* smooth = app.add_subcommand("smooth", "smoothing certificates over n or lambda grids");
  smooth->add_option("files", sa.files, "rho and sigma")->required()->expected(2);
  smooth->add_option("--grid", sa.grid, "n or lambda")->check(CLI::IsMember({"n", "lambda"}));
  smooth->add_option("--rate", sa.rate, "threshold per copy for the n grid");
  smooth->add_option("--n-min", sa.n_min);
  smooth->add_option("--n-max", sa.n_max);
  smooth->add_option("--lambda-min", sa.lambda_min);
  smooth->add_option("--lambda-max", sa.lambda_max);
  smooth->add_option("--points", sa.points, "lambda grid size");
  smooth->add_option("--t", sa.t, "converse parameter, > 4");

  SearchArgs pa;
  auto* search = app.add_subcommand("pa-search", "exhaustive minimum insecurity over all hash functions");
  SearchArgs fa;
  auto* family = app.add_subcommand("pa-family", "average insecurity over a hash family");
  for (auto [cmd, args] : {std::pair{search, &pa}, std::pair{family, &fa}}) {
    cmd->add_option("file", args->file, "CQ state")->required();
    cmd->add_option("--n", args->n, "blocklength")->check(CLI::PositiveNumber);
    cmd->add_option("--range", args->range, "number of output symbols");
    cmd->add_option("--rate", args->rate, "output rate; range = floor(2^(n*rate))");
    cmd->add_option("--measure", args->measure, "trace, purified, relative or renyi")
        ->check(CLI::IsMember({"trace", "purified", "relative", "renyi"}));
    cmd->add_option("--s", args->s, "order 1+s for the renyi measure");
  }
  family->add_option("--family", fa.family, "all, affine or example2")
      ->check(CLI::IsMember({"all", "affine", "example2"}));
  family->add_option("--prime", fa.prime, "modulus for the affine family (0 = smallest fitting prime)");
  family->add_option("--samples", fa.samples, "Monte-Carlo draws (0 = exhaustive)");

  SuiteArgs su;
  auto* suite = app.add_subcommand("suite", "verification suites");
  suite->add_option("name", su.name, "example1, example2 or properties")
      ->required()
      ->check(CLI::IsMember({"example1", "example2", "properties"}));
  suite->add_option("--n", su.n, "blocklength");
  suite->add_option("--range-bits", su.range_bits, "log of the output size (example1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    ConfigPtr cfg = make_config(g);
    Run run;
    std::string command;
    if (*measure) command = "measure", run_measure(ma, cfg.get(), run);
    else if (*curve) command = "exponent-curve", run_curve(ca, cfg.get(), run);
    else if (*smooth) command = "smooth", run_smooth(sa, cfg.get(), run);
    else if (*search) command = "pa-search", run_search(pa, cfg.get(), run);
    else if (*family) command = "pa-family", run_family(fa, cfg.get(), run);
    else command = "suite", run_suite(su, cfg.get(), run);

    const Json header = make_header(command, run.arguments, cfg.get(), run.inputs, g.format);
    if (g.format == "csv") {
      if (!run.csv) invalid("csv output is available for measure, exponent-curve and smooth");
      write_csv_header(std::cout, header);
      run.csv(std::cout, run.result.body);
    } else {
      Json out;
      out["header"] = header;
      out["result"] = run.result.body;
      out["passed"] = run.result.passed;
      std::cout << out.dump(2) << "\n";
    }
    if (!run.result.passed) {
      std::cerr << "error: one or more invariants failed\n";
      return kInvariant;
    }
    return kOk;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariant;
  }
}
