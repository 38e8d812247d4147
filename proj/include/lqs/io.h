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


// Dataset CSV files and the versioned result.json records.
//
// CSV: a header `y,x1,...,xp`, one sample per line, `.` decimal separator,
// LF line endings. Values are written with 17 significant digits so that a
// write/read round trip is exact.

#ifndef LQS_IO_H_
#define LQS_IO_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"
#include "lqs/dataset.h"

namespace lqs {

inline constexpr int kResultSchemaVersion = 1;

// Parses CSV text. Throws ValidationError on malformed content.
Dataset ParseCsv(std::istream& in);
// Throws IoError when the file cannot be opened.
Dataset ReadCsv(const std::string& path);

std::string CsvString(const Dataset& data);
// Throws IoError when the file cannot be written.
void WriteCsv(const Dataset& data, const std::string& path);

struct ResultBounds {
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;
};

struct ResultRecord {
  std::string algo;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  Eigen::VectorXd beta;
  double objective = 0.0;
  std::optional<ResultBounds> bounds;
  std::optional<std::string> status;
  std::optional<std::int64_t> nodes;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

// Serializes `record` with a residual summary of beta on `data` at `q`.
// Key order is fixed, so equal records give identical bytes.
nlohmann::ordered_json ResultToJson(const ResultRecord& record,
                                    const Dataset& data, QuantileSpec q);
std::string ResultJsonString(const ResultRecord& record, const Dataset& data,
                             QuantileSpec q);
void WriteResultJson(const ResultRecord& record, const Dataset& data,
                     QuantileSpec q, const std::string& path);

// Reads a result.json, checking the schema version and, when `expected_p` is
// given, the length of beta. Throws IoError or ValidationError.
ResultRecord ParseResultJson(const std::string& text,
                             std::optional<int> expected_p = std::nullopt);
ResultRecord ReadResultJson(const std::string& path,
                            std::optional<int> expected_p = std::nullopt);

// Writes `text` to `path`, throwing IoError on failure.
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace lqs

#endif  // LQS_IO_H_
