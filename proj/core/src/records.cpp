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

#include "pkpz/records.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pkpz::records {

namespace {

void require_clean(const std::string& s) {
  if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos)
    throw std::invalid_argument("record fields must not contain commas or newlines");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

const char* kFixedColumns[] = {"value",       "value_im",   "imag_residual", "quad_proxy",
                               "trunc_proxy", "std_error",  "version",       "seed"};

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(std::span<const ResultRecord> records, bool with_timing) {
  if (records.empty()) return "";
  std::ostringstream os;
  os << "command";
  for (const auto& [k, v] : records[0].inputs) {
    require_clean(k);
    os << ',' << k;
  }
  for (const char* col : kFixedColumns) os << ',' << col;
  if (with_timing) os << ",wall_ms";
  os << '\n';

  for (const ResultRecord& r : records) {
    if (r.inputs.size() != records[0].inputs.size() || r.command != records[0].command)
      throw std::invalid_argument("to_csv: records in one batch must share the schema");
    require_clean(r.command);
    os << r.command;
    for (const auto& [k, v] : r.inputs) {
      require_clean(v);
      os << ',' << v;
    }
    os << ',' << format_double(r.value) << ',' << format_double(r.value_im) << ','
       << format_double(r.imag_residual) << ',' << format_double(r.quad_proxy) << ','
       << format_double(r.trunc_proxy) << ',' << format_double(r.std_error) << ','
       << r.version << ',' << r.seed;
    if (with_timing) os << ',' << format_double(r.wall_ms);
    os << '\n';
  }
  return os.str();
}

std::vector<ResultRecord> from_csv(const std::string& text) {
  std::vector<ResultRecord> out;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) return out;
  const std::vector<std::string> header = split(line, ',');
  if (header.empty() || header[0] != "command")
    throw std::invalid_argument("from_csv: malformed header");

  std::size_t value_col = header.size();
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] == "value") {
      value_col = i;
      break;
    }
  if (value_col == header.size()) throw std::invalid_argument("from_csv: no value column");
  const bool timed = header.back() == "wall_ms";

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != header.size()) throw std::invalid_argument("from_csv: ragged row");
    ResultRecord r;
    r.command = f[0];
    for (std::size_t i = 1; i < value_col; ++i) r.inputs.emplace_back(header[i], f[i]);
    std::size_t c = value_col;
    r.value = std::stod(f[c++]);
    r.value_im = std::stod(f[c++]);
    r.imag_residual = std::stod(f[c++]);
    r.quad_proxy = std::stod(f[c++]);
    r.trunc_proxy = std::stod(f[c++]);
    r.std_error = std::stod(f[c++]);
    r.version = f[c++];
    r.seed = std::stoull(f[c++]);
    if (timed) r.wall_ms = std::stod(f[c++]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_json(std::span<const ResultRecord> records, bool with_timing) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ResultRecord& r : records) {
    nlohmann::ordered_json obj;
    obj["command"] = r.command;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& [k, v] : r.inputs) inputs.push_back({{"name", k}, {"value", v}});
    obj["inputs"] = inputs;
    obj["value"] = format_double(r.value);
    obj["value_im"] = format_double(r.value_im);
    obj["imag_residual"] = format_double(r.imag_residual);
    obj["quad_proxy"] = format_double(r.quad_proxy);
    obj["trunc_proxy"] = format_double(r.trunc_proxy);
    obj["std_error"] = format_double(r.std_error);
    if (with_timing) obj["wall_ms"] = format_double(r.wall_ms);
    obj["version"] = r.version;
    obj["seed"] = r.seed;
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

std::vector<ResultRecord> from_json(const std::string& text) {
  const auto arr = nlohmann::ordered_json::parse(text);
  std::vector<ResultRecord> out;
  for (const auto& obj : arr) {
    ResultRecord r;
    r.command = obj.at("command").get<std::string>();
    for (const auto& kv : obj.at("inputs"))
      r.inputs.emplace_back(kv.at("name").get<std::string>(), kv.at("value").get<std::string>());
    r.value = std::stod(obj.at("value").get<std::string>());
    r.value_im = std::stod(obj.at("value_im").get<std::string>());
    r.imag_residual = std::stod(obj.at("imag_residual").get<std::string>());
    r.quad_proxy = std::stod(obj.at("quad_proxy").get<std::string>());
    r.trunc_proxy = std::stod(obj.at("trunc_proxy").get<std::string>());
    r.std_error = std::stod(obj.at("std_error").get<std::string>());
    if (obj.contains("wall_ms")) r.wall_ms = std::stod(obj.at("wall_ms").get<std::string>());
    r.version = obj.at("version").get<std::string>();
    r.seed = obj.at("seed").get<std::uint64_t>();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pkpz::records
