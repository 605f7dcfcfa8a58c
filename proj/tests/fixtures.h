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

#ifndef BIASLENS_TESTS_FIXTURES_H_
#define BIASLENS_TESTS_FIXTURES_H_

// File-backed fixtures shared by the unit and acceptance suites.

#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "biaslens/lexicon.h"

namespace biaslens::testing {

inline std::string SourcePath(const std::string& relative) {
  return std::string(BIASLENS_SOURCE_DIR) + "/" + relative;
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

inline Lexicon BundledLexicon() {
  return *LoadLexiconFile(SourcePath("data/phrases.csv"));
}

struct GoldenDiff {
  std::size_t sentence_id = 0;
  std::string phrase;
  double diff = 0.0;
};

inline std::vector<GoldenDiff> LoadGoldenDiffs() {
  std::vector<GoldenDiff> out;
  for (const std::string& line : ReadLines(SourcePath("tests/golden/audit_diffs.tsv"))) {
    const std::vector<std::string> parts = absl::StrSplit(line, '\t');
    if (parts.size() != 3) continue;
    GoldenDiff g;
    g.sentence_id = std::stoul(parts[0]);
    g.phrase = parts[1];
    g.diff = std::stod(parts[2]);
    out.push_back(g);
  }
  return out;
}

}  // namespace biaslens::testing

#endif  // BIASLENS_TESTS_FIXTURES_H_
