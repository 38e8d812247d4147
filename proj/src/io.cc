// Copyright 2026 The LQS Solver Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "lqs/io.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "lqs/errors.h"
#include "lqs/fits.h"

namespace lqs {
namespace {

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (std::string& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
  }
  return fields;
}

double ParseNumber(const std::string& field, int line) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError("csv line " + std::to_string(line) +
                          ": not a number: '" + field + "'");
  }
  return value;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset ParseCsv(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      header = SplitFields(line);
      break;
    }
  }
  if (header.size() < 2 || header[0] != "y") {
    throw ValidationError("csv: header must be y,x1,...,xp");
  }
  const int p = static_cast<int>(header.size()) - 1;
  for (int j = 1; j <= p; ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      throw ValidationError("csv: header column " + std::to_string(j + 1) +
                            " must be x" + std::to_string(j));
    }
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = SplitFields(line);
    if (static_cast<int>(fields.size()) != p + 1) {
      throw ValidationError("csv line " + std::to_string(line_no) +
                            ": expected " + std::to_string(p + 1) +
                            " fields");
    }
    for (const std::string& f : fields) {
      values.push_back(ParseNumber(f, line_no));
    }
  }
  const int n = static_cast<int>(values.size()) / (p + 1);
  if (n == 0) throw ValidationError("csv: no samples");
  Eigen::VectorXd y(n);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i) {
    y(i) = values[i * (p + 1)];
    for (int j = 0; j < p; ++j) X(i, j) = values[i * (p + 1) + 1 + j];
  }
  return Dataset::FromColumns(std::move(y), std::move(X));
}

Dataset ReadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return ParseCsv(in);
}

std::string CsvString(const Dataset& data) {
  data.Validate();
  std::string out = "y";
  for (int j = 1; j <= data.p(); ++j) out += ",x" + std::to_string(j);
  out += '\n';
  for (int i = 0; i < data.n(); ++i) {
    out += FormatDouble(data.y(i));
    for (int j = 0; j < data.p(); ++j) {
      out += ',';
      out += FormatDouble(data.X(i, j));
    }
    out += '\n';
  }
  return out;
}

void WriteCsv(const Dataset& data, const std::string& path) {
  WriteTextFile(path, CsvString(data));
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

nlohmann::ordered_json ResultToJson(const ResultRecord& record,
                                    const Dataset& data, QuantileSpec q) {
  if (record.beta.size() != data.p()) {
    throw ValidationError("result: beta length does not match p");
  }
  nlohmann::ordered_json j;
  j["schema_version"] = kResultSchemaVersion;
  j["algo"] = record.algo;
  j["config"] = record.config;
  j["n"] = data.n();
  j["p"] = data.p();
  j["q"] = q.q;
  j["beta"] = std::vector<double>(record.beta.data(),
                                  record.beta.data() + record.beta.size());
  j["objective"] = record.objective;
  if (record.bounds.has_value()) {
    j["bounds"] = {{"upper", record.bounds->upper},
                   {"lower", record.bounds->lower},
                   {"gap", record.bounds->gap}};
  }
  if (record.status.has_value()) j["status"] = *record.status;
  if (record.nodes.has_value()) j["nodes"] = *record.nodes;

  const Eigen::VectorXd r = data.Residuals(record.beta);
  std::vector<double> abs_r(r.size());
  for (int i = 0; i < r.size(); ++i) abs_r[i] = std::abs(r(i));
  std::sort(abs_r.begin(), abs_r.end());
  const double at_q = abs_r[q.q - 1];
  j["residuals"] = {{"min_abs", abs_r.front()},
                    {"median_abs", abs_r[(abs_r.size() - 1) / 2]},
                    {"quantile_abs", at_q},
                    {"max_abs", abs_r.back()},
                    {"at_quantile_level", CountAtLevel(r, at_q)}};
  j["wall_time_s"] = record.wall_time_s;
  j["seed"] = record.seed;
  return j;
}

std::string ResultJsonString(const ResultRecord& record, const Dataset& data,
                             QuantileSpec q) {
  return ResultToJson(record, data, q).dump(2) + "\n";
}

void WriteResultJson(const ResultRecord& record, const Dataset& data,
                     QuantileSpec q, const std::string& path) {
  WriteTextFile(path, ResultJsonString(record, data, q));
}

ResultRecord ParseResultJson(const std::string& text,
                             std::optional<int> expected_p) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("result: invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("schema_version") ||
        j.at("schema_version").get<int>() != kResultSchemaVersion) {
      throw ValidationError("result: unsupported schema_version");
    }
    ResultRecord record;
    record.algo = j.at("algo").get<std::string>();
    if (j.contains("config")) record.config = j.at("config");
    const std::vector<double> beta = j.at("beta").get<std::vector<double>>();
    if (beta.empty()) throw ValidationError("result: empty beta");
    if (expected_p.has_value() &&
        static_cast<int>(beta.size()) != *expected_p) {
      throw ValidationError("result: beta has " +
                            std::to_string(beta.size()) +
                            " entries, data has p=" +
                            std::to_string(*expected_p));
    }
    record.beta = Eigen::Map<const Eigen::VectorXd>(
        beta.data(), static_cast<Eigen::Index>(beta.size()));
    if (!record.beta.allFinite()) {
      throw ValidationError("result: beta is not finite");
    }
    record.objective = j.at("objective").get<double>();
    if (j.contains("bounds")) {
      const auto& b = j.at("bounds");
      record.bounds = ResultBounds{b.at("upper").get<double>(),
                                   b.at("lower").get<double>(),
                                   b.at("gap").get<double>()};
    }
    if (j.contains("status")) record.status = j.at("status").get<std::string>();
    if (j.contains("nodes")) record.nodes = j.at("nodes").get<std::int64_t>();
    if (j.contains("wall_time_s")) {
      record.wall_time_s = j.at("wall_time_s").get<double>();
    }
    if (j.contains("seed")) record.seed = j.at("seed").get<std::uint64_t>();
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("result: bad field: ") + e.what());
  }
}

ResultRecord ReadResultJson(const std::string& path,
                            std::optional<int> expected_p) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseResultJson(ss.str(), expected_p);
}

}  // namespace lqs
