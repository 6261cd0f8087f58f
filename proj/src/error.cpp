// Copyright 2026 The stillmotion Authors. All Rights Reserved.
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

#include "error.hpp"

namespace stillmotion {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kDecode: return "decode_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kNoBoundary: return "no_boundary";
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kState: return "state_error";
    case ErrorCode::kInternal: return "internal_error";
  }
  return "unknown";
}

}  // namespace stillmotion
