// include/taog/error.h

// Copyright 2026 The taog Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//  http://www.apache.org/licenses/LICENSE-2.0

// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TAOG_ERROR_H_
#define TAOG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace taog {

/// Error classes. The command-line tool maps each to its own exit code.
enum class ErrorCode {
  kMalformedDocument = 10,
  kNormalization = 11,
  kUndefinedSymbol = 12,
  kInvalidGrammar = 13,
  kDepthExceeded = 14,
  kUnderivable = 15,
  kInvalidArgument = 16,
  kIo = 17,
  kStage = 18,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace taog

#endif  // TAOG_ERROR_H_
