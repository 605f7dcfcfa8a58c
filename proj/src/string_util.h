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

#ifndef BIASLENS_STRING_UTIL_H_
#define BIASLENS_STRING_UTIL_H_

#include <string_view>

#include "absl/strings/string_view.h"

namespace biaslens {

// The system abseil is built with its own string_view type; this adapts
// std::string_view for absl::StrCat and friends.
inline absl::string_view Sv(std::string_view s) { return {s.data(), s.size()}; }

}  // namespace biaslens

#endif  // BIASLENS_STRING_UTIL_H_
