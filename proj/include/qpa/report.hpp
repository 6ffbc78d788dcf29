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

// JSON and CSV encodings of results, state files and content hashes.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "qpa/cq_state.hpp"
#include "qpa/exponents.hpp"
#include "qpa/hashing.hpp"
#include "qpa/operator.hpp"
#include "qpa/privacy.hpp"
#include "qpa/smoothing.hpp"

namespace qpa::report {

using Json = nlohmann::ordered_json;

// Finite values as JSON numbers; ±∞ and NaN as "inf", "-inf", "nan".
Json number(double v);
Json number(const std::optional<double>& v);
// Inverse of number(); accepts numbers and the three strings.
double to_double(const Json& j);

// Locale-independent text with `digits` significant digits; "inf" for +∞.
std::string format_number(double v, int digits = 12);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t h);

Json to_json(const ExponentValue& v);
Json to_json(const ExponentCurve& c);
Json to_json(const SmoothingCertificate& c);
Json to_json(const InsecurityReport& r);
Json to_json(const FamilyExpectation& e);
Json to_json(const CollisionCertificate& c);
Json to_json(const BoundCheck& c);
Json to_json(const HermitianOperator& a);  // {"dim", "entries": [[re, im], ...]}

// A parsed state file.
struct StateFile {
  std::string name;
  std::variant<StateDescriptor, CQState> state;

  bool is_cq() const { return std::holds_alternative<CQState>(state); }
};

// Parses {"kind": "density", "dim", "entries"} or
// {"kind": "cq", "symbols", "probs", "conditionals"}. Errors carry the line
// and column for syntax errors and the JSON path for schema errors.
StateFile parse_state(std::string_view text);

}  // namespace qpa::report
