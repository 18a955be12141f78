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

#ifndef CIVB_ERROR_H_
#define CIVB_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace civb {

enum class ErrorCode {
  kInvalidArgument,
  kFileUnreadable,
  kFileUnwritable,
  kUnsupportedEncoding,
  kMalformedFile,
  kDegenerateInput,
  kNumeric,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library. `stage` is filled in by the
// experiment runner so a failure deep in the pipeline still says where it
// happened.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

  Error WithStage(std::string stage) const;

 private:
  ErrorCode code_;
  std::string stage_;
  std::string detail_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace civb

#endif  // CIVB_ERROR_H_
