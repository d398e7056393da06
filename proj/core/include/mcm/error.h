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

#ifndef MCM_ERROR_H_
#define MCM_ERROR_H_

#include <stdexcept>
#include <string>

namespace mcm {

// Every failure raised by the toolkit carries one of these codes. The CLI maps
// kUsage to exit status 2 and everything else to 1.
enum class ErrorCode {
  kDimensionMismatch,
  kZeroVector,
  kEmptyInput,
  kNonFinite,
  kEmptyText,
  kMissingEmbedding,
  kTransport,
  kProtocol,
  kFormat,
  kIo,
  kMalformedTemplate,
  kVocabularyTooSmall,
  kDegenerateData,
  kLengthMismatch,
  kZeroVariance,
  kInvalidInput,
  kInsufficientData,
  kEmptyAfterFilter,
  kUsage,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Missing keys keep the offending text so callers can report it verbatim.
class MissingEmbedding : public Error {
 public:
  explicit MissingEmbedding(std::string text)
      : Error(ErrorCode::kMissingEmbedding, "no embedding for \"" + text + "\""),
        text_(std::move(text)) {}

  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

}  // namespace mcm

#endif  // MCM_ERROR_H_
