// Copyright 2026 The eqpd Authors
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

#include "eqpd/error.h"

namespace eqpd {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid dimension";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kSingularMatrix: return "singular matrix";
    case ErrorCode::kEmptyDataset: return "empty dataset";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kCorruptFile: return "corrupt file";
    case ErrorCode::kDegenerateOutput: return "degenerate output";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kBracketFailure: return "bracket failure";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kMisalignedReference: return "misaligned reference";
    case ErrorCode::kConfiguration: return "configuration error";
  }
  return "unknown error";
}

}  // namespace eqpd
