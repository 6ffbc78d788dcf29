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

#include "qpa/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "qpa/error.hpp"
#include "qpa/measures.hpp"

namespace qpa::report {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

Json number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

double to_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  Fail(ErrorCode::kParse, "expected a number or \"inf\"");
}

std::string format_number(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const ExponentValue& v) {
  Json j;
  j["value"] = number(v.value);
  j["purified"] = number(v.purified());
  j["maximizer_s"] = number(v.maximizer_s);
  j["regime"] = regime_name(v.regime);
  j["regime_index"] = static_cast<int>(v.regime);
  j["capped"] = v.capped;
  j["boundary"] = v.boundary;
  j["capped_value"] = number(v.capped_value);
  j["valid"] = v.valid;
  return j;
}

namespace {

const char* mode_name(CurveMode m) {
  switch (m) {
    case CurveMode::kUpper: return "upper";
    case CurveMode::kLower: return "lower";
    case CurveMode::kBoth: return "both";
    case CurveMode::kRenyi: return "renyi";
  }
  return "unknown";
}

}  // namespace

Json to_json(const ExponentCurve& c) {
  Json j;
  j["mode"] = mode_name(c.mode);
  if (c.mode == CurveMode::kRenyi) j["renyi_s"] = c.renyi_s;
  j["annotations"] = {{"H", number(c.h)},
                      {"H_min", number(c.h_min)},
                      {"H_2", number(c.h_2)},
                      {"R_critical", number(c.r_critical)}};
  j["options"] = {{"s_max", c.options.s_max},
                  {"rate_tol", c.options.rate_tol},
                  {"fd_step", c.options.fd_step},
                  {"search_tol", c.options.search_tol}};
  Json pts = Json::array();
  for (const auto& p : c.points) {
    Json q;
    q["R"] = number(p.rate);
    if (p.upper) q["upper"] = to_json(*p.upper);
    if (p.lower) q["lower"] = to_json(*p.lower);
    if (p.renyi) q["renyi"] = to_json(*p.renyi);
    pts.push_back(std::move(q));
  }
  j["points"] = std::move(pts);
  return j;
}

Json to_json(const HermitianOperator& a) {
  Json entries = Json::array();
  const Matrix& m = a.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  return Json{{"dim", a.dim()}, {"entries", std::move(entries)}};
}

Json to_json(const SmoothingCertificate& c) {
  Json j;
  j["n"] = c.n;
  j["lambda"] = number(c.lambda);
  j["lower"] = number(c.lower);
  j["upper"] = number(c.upper);
  j["upper_s"] = number(c.upper_s);
  j["exact"] = number(c.exact);
  j["witness_value"] = number(c.witness_value);
  j["log2_v"] = number(c.log2_v);
  j["commuting"] = c.commuting;
  j["converse_available"] = c.converse_available;
  if (c.witness) j["witness"] = to_json(c.witness->op());
  return j;
}

Json to_json(const InsecurityReport& r) {
  Json j;
  j["measure"] = measure_name(r.measure.measure);
  if (r.measure.measure == Measure::kRenyi) j["s"] = r.measure.s;
  j["value"] = number(r.value);
  j["hash"] = r.hash_id;
  j["index"] = r.index;
  j["evaluated"] = r.evaluated;
  j["ideal"] = r.ideal;
  if (r.measure.measure == Measure::kRelativeEntropy) j["identity_gap"] = number(r.identity_gap);
  return j;
}

Json to_json(const FamilyExpectation& e) {
  return Json{{"mean", number(e.mean)},
              {"std_error", number(e.std_error)},
              {"count", e.count},
              {"exhaustive", e.exhaustive},
              {"max", number(e.max_value)}};
}

Json to_json(const CollisionCertificate& c) {
  return Json{{"max_collision", number(c.max_collision)},
              {"numerator", c.numerator},
              {"denominator", c.denominator},
              {"bound", number(c.bound)},
              {"two_universal", c.two_universal},
              {"method", c.method},
              {"worst_pair", Json::array({c.worst_x, c.worst_y})}};
}

Json to_json(const BoundCheck& c) {
  return Json{{"lhs", number(c.lhs)}, {"rhs", number(c.rhs)}, {"slack", number(c.slack)}};
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  Fail(ErrorCode::kParse, path + ": " + what);
}

std::complex<double> parse_entry(const Json& e, const std::string& path) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  schema_error(path, "expected a number or [re, im]");
}

HermitianOperator parse_matrix(const Json& entries, std::size_t dim, const std::string& path) {
  if (!entries.is_array()) schema_error(path, "expected an array of entries");
  if (entries.size() != dim * dim) {
    schema_error(path, "expected " + std::to_string(dim * dim) + " entries, found " +
                           std::to_string(entries.size()));
  }
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim * dim; ++i) {
    m(i / dim, i % dim) = parse_entry(entries[i], path + "[" + std::to_string(i) + "]");
  }
  try {
    return HermitianOperator(m);
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

std::size_t square_dim(std::size_t n, const std::string& path) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d == 0 || d * d != n) schema_error(path, "entry count is not a perfect square");
  return d;
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

StateFile parse_state(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kParse, "malformed JSON at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) schema_error("$", "expected an object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) schema_error("$.kind", "missing or not a string");
  StateFile out{doc.value("name", std::string()), StateDescriptor(HermitianOperator::Identity(1))};
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "density") {
    if (!doc.contains("entries")) schema_error("$.entries", "missing");
    std::size_t dim = 0;
    if (doc.contains("dim")) {
      if (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::size_t>() == 0) {
        schema_error("$.dim", "expected a positive integer");
      }
      dim = doc["dim"].get<std::size_t>();
    } else {
      dim = square_dim(doc["entries"].size(), "$.entries");
    }
    HermitianOperator op = parse_matrix(doc["entries"], dim, "$.entries");
    const bool sub = doc.value("subnormalized", false);
    try {
      out.state = StateDescriptor(op, sub ? StateKind::kSubnormalized : StateKind::kNormalized);
    } catch (const Error& e) {
      schema_error("$", e.what());
    }
    return out;
  }
  if (kind == "cq") {
    if (!doc.contains("probs") || !doc["probs"].is_array()) schema_error("$.probs", "missing or not an array");
    std::vector<double> probs;
    for (std::size_t i = 0; i < doc["probs"].size(); ++i) {
      const Json& p = doc["probs"][i];
      if (!p.is_number()) schema_error("$.probs[" + std::to_string(i) + "]", "expected a number");
      probs.push_back(p.get<double>());
    }
    std::vector<std::string> symbols;
    if (doc.contains("symbols")) {
      if (!doc["symbols"].is_array() || doc["symbols"].size() != probs.size()) {
        schema_error("$.symbols", "expected one label per probability");
      }
      for (const auto& s : doc["symbols"]) symbols.push_back(s.is_string() ? s.get<std::string>() : s.dump());
    } else {
      for (std::size_t i = 0; i < probs.size(); ++i) symbols.push_back(std::to_string(i));
    }
    std::vector<HermitianOperator> conds;
    if (doc.contains("conditionals")) {
      const Json& c = doc["conditionals"];
      if (!c.is_array() || c.size() != probs.size()) {
        schema_error("$.conditionals", "expected one operator per probability");
      }
      for (std::size_t i = 0; i < c.size(); ++i) {
        const std::string path = "$.conditionals[" + std::to_string(i) + "]";
        const Json& entries = c[i].is_object() ? c[i].value("entries", Json()) : c[i];
        if (!entries.is_array()) schema_error(path, "expected an array of entries");
        conds.push_back(parse_matrix(entries, square_dim(entries.size(), path), path));
      }
    } else {
      conds.assign(probs.size(), HermitianOperator::Identity(1));
    }
    try {
      out.state = CQState(std::move(symbols), std::move(probs), std::move(conds));
    } catch (const Error& e) {
      schema_error("$", e.what());
    }
    return out;
  }
  schema_error("$.kind", "expected \"density\" or \"cq\", found \"" + kind + "\"");
}

}  // namespace qpa::report
