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

#include "mcm/error.h"

namespace mcm {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kTransport: return "TransportError";
    case ErrorCode::kProtocol: return "ProtocolError";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMalformedTemplate: return "MalformedTemplate";
    case ErrorCode::kVocabularyTooSmall: return "VocabularyTooSmall";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kEmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::kUsage: return "UsageError";
  }
  return "Error";
}

}  // namespace mcm
