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

#include <doctest.h>

#include <clocale>
#include <cmath>
#include <string>

#include "qpa/error.hpp"
#include "qpa/measures.hpp"
#include "qpa/report.hpp"

using namespace qpa;
using namespace qpa::report;

namespace {

std::string parse_error(const std::string& text) {
  try {
    parse_state(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("infinite values are serialized as strings") {
  CHECK(number(kInf) == "inf");
  CHECK(number(-kInf) == "-inf");
  CHECK(number(std::nan("")) == "nan");
  CHECK(number(std::optional<double>{}).is_null());
  CHECK(number(0.5) == 0.5);
  CHECK(to_double(Json("inf")) == kInf);
  CHECK(to_double(Json(0.25)) == 0.25);
}

TEST_CASE("csv numbers use 12 significant digits regardless of locale") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1e-20) == "1e-20");
  std::setlocale(LC_ALL, "de_DE.UTF-8");
  CHECK(format_number(0.5) == "0.5");
  std::setlocale(LC_ALL, "C");
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("density files") {
  const auto f = parse_state(R"({"kind": "density", "name": "x", "dim": 2, "entries": [0.5, [0, 0], 0, 0.5]})");
  CHECK(f.name == "x");
  CHECK_FALSE(f.is_cq());
  const auto& s = std::get<StateDescriptor>(f.state);
  CHECK(s.dim() == 2);
  CHECK(s.trace() == doctest::Approx(1.0));
  const auto g = parse_state(R"({"kind": "density", "entries": [[0.5, 0], [0.4, -0.1], [0.4, 0.1], [0.5, 0]]})");
  CHECK(std::get<StateDescriptor>(g.state).op().matrix()(0, 1).imag() == doctest::Approx(-0.1));
}

TEST_CASE("cq files") {
  const auto f = parse_state(R"({"kind": "cq", "symbols": ["a", "b"], "probs": [0.25, 0.75],
    "conditionals": [[1, 0, 0, 0], {"entries": [0, 0, 0, 1]}]})");
  REQUIRE(f.is_cq());
  const auto& cq = std::get<CQState>(f.state);
  CHECK(cq.size() == 2);
  CHECK(cq.dim_e() == 2);
  CHECK(cq.symbols()[1] == "b");
  const auto g = parse_state(R"({"kind": "cq", "probs": [0.5, 0.5]})");
  CHECK(std::get<CQState>(g.state).dim_e() == 1);
}

TEST_CASE("diagnostics carry positions and paths") {
  const std::string syntax = parse_error("{\n  \"kind\": \"density\",\n  \"entries\": [1, 0,, 0]\n}");
  CHECK(syntax.find("line 3") != std::string::npos);
  CHECK(parse_error(R"({"kind": "density", "entries": [1, 0, 0]})").find("$.entries") != std::string::npos);
  CHECK(parse_error(R"({"kind": "density", "entries": [1, "x", 0, 0]})").find("$.entries[1]") != std::string::npos);
  CHECK(parse_error(R"({"kind": "density", "entries": [0.6, 0, 0, 0.6]})").find("trace") != std::string::npos);
  CHECK(parse_error(R"({"kind": "cq", "probs": [0.5, 0.5], "conditionals": [[1]]})").find("$.conditionals") !=
        std::string::npos);
  CHECK(parse_error(R"({"kind": "cq", "probs": [0.5, 0.6]})").size() > 0);
  CHECK(parse_error(R"({"kind": "pure"})").find("$.kind") != std::string::npos);
  CHECK(parse_error("[1, 2]").size() > 0);
}
