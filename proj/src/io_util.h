// src/io_util.h

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

#ifndef TAOG_SRC_IO_UTIL_H_
#define TAOG_SRC_IO_UTIL_H_

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "taog/error.h"

namespace taog::internal {

inline std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, std::string("cannot open ") + what + ": " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text, const char* what) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, std::string("cannot write ") + what + ": " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, std::string("write failed for ") + what + ": " + path);
}

/// Decimal that round-trips exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace taog::internal

#endif  // TAOG_SRC_IO_UTIL_H_
