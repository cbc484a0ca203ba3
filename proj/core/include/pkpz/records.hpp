/*
   Copyright 2026 The pkpz authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Machine-readable result records. One record per computed quantity, with
// the inputs echoed, the numeric quality indicators, and provenance
// (toolkit version, seed). Serialized as CSV (stable header, complex values
// as re/im columns) or JSON; doubles are written with 17 significant digits
// so that re-parsing reproduces the in-memory record exactly. Wall time is
// emitted only on request to keep identical runs byte-identical.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pkpz::records {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct ResultRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // ordered echo
  double value = 0.0;
  double value_im = 0.0;
  double imag_residual = 0.0;
  double quad_proxy = 0.0;
  double trunc_proxy = 0.0;
  double std_error = 0.0;
  double wall_ms = 0.0;  // serialized only with timing enabled
  std::string version = kToolkitVersion;
  std::uint64_t seed = 0;

  bool operator==(const ResultRecord&) const = default;
};

std::string format_double(double v);

// All records in one batch must share the command and input keys.
std::string to_csv(std::span<const ResultRecord> records, bool with_timing = false);
std::string to_json(std::span<const ResultRecord> records, bool with_timing = false);

std::vector<ResultRecord> from_csv(const std::string& text);
std::vector<ResultRecord> from_json(const std::string& text);

}  // namespace pkpz::records
