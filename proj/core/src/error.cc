// Copyright 2026 The civb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "civb/error.h"

#include <utility>

namespace civb {
namespace {

std::string Compose(ErrorCode code, const std::string& message,
                    const std::string& stage) {
  std::string out;
  if (!stage.empty()) out += "[" + stage + "] ";
  out += std::string(ErrorCodeName(code));
  out += ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kFileUnreadable: return "unreadable file";
    case ErrorCode::kFileUnwritable: return "unwritable file";
    case ErrorCode::kUnsupportedEncoding: return "unsupported encoding";
    case ErrorCode::kMalformedFile: return "malformed file";
    case ErrorCode::kDegenerateInput: return "degenerate input";
    case ErrorCode::kNumeric: return "numeric failure";
  }
  return "error";
}

Error::Error(ErrorCode code, const std::string& message, std::string stage)
    : std::runtime_error(Compose(code, message, stage)),
      code_(code),
      stage_(std::move(stage)),
      detail_(message) {}

Error Error::WithStage(std::string stage) const {
  return Error(code_, detail_, std::move(stage));
}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace civb
