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

#include "biaslens/csv.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace biaslens {

absl::StatusOr<std::optional<CsvRecord>> CsvReader::Next() {
  if (at_start_) {
    at_start_ = false;
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(bom[1] == '\xBB' && bom[2] == '\xBF')) {
        return absl::InvalidArgumentError("line 1: invalid byte order mark");
      }
    }
  }
  if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

  CsvRecord record;
  record.line = line_;
  std::string field;
  bool quoted = false;
  bool after_quote = false;
  for (;;) {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", record.line, ": unterminated quoted field"));
      }
      record.fields.push_back(std::move(field));
      return record;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == ',') {
      record.fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      continue;
    } else if (ch == '\n') {
      ++line_;
      record.fields.push_back(std::move(field));
      return record;
    } else if (ch == '"') {
      if (!field.empty() || after_quote) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_, ": unexpected quote inside unquoted field"));
      }
      quoted = true;
    } else {
      if (after_quote) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_, ": characters after closing quote"));
      }
      field.push_back(ch);
    }
  }
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string CsvJoin(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += CsvEscape(fields[i]);
  }
  return out;
}

}  // namespace biaslens
