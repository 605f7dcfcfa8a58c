//
// Copyright 2026 The BiasLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef BIASLENS_CSV_H_
#define BIASLENS_CSV_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace biaslens {

// One parsed CSV record and the 1-based line on which it starts.
struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// Streaming RFC 4180 reader. Accepts LF or CRLF line endings and quoted
// fields spanning lines. A UTF-8 byte order mark at the very start is
// skipped.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Returns the next record, std::nullopt at end of input, or an
  // InvalidArgument error naming the line of a malformed record.
  absl::StatusOr<std::optional<CsvRecord>> Next();

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  bool at_start_ = true;
};

// Quotes `field` only when it contains a comma, quote, CR or LF.
std::string CsvEscape(std::string_view field);

// Joins escaped fields with commas (no trailing newline).
std::string CsvJoin(const std::vector<std::string>& fields);

}  // namespace biaslens

#endif  // BIASLENS_CSV_H_
