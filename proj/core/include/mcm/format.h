// Copyright 2026 The MCM Toolkit Authors.
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

#ifndef MCM_FORMAT_H_
#define MCM_FORMAT_H_

#include <span>
#include <string>
#include <string_view>

namespace mcm {

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

// Strict inverse of format_double; throws FormatError on trailing garbage.
double parse_double(std::string_view text);

std::string join_doubles(std::span<const double> values, std::string_view sep);

}  // namespace mcm

#endif  // MCM_FORMAT_H_
