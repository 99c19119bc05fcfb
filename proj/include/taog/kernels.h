// include/taog/kernels.h

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

#ifndef TAOG_KERNELS_H_
#define TAOG_KERNELS_H_

// Numeric inner loops of segment scoring. A portable scalar table is the
// reference; an AVX2 table is selected at runtime when the CPU supports it.
// Element-wise kernels and argmax are bit-identical across tables; reductions
// (log_sum_exp) agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace taog::kernels {

struct KernelTable {
  const char* name;
  /// out[i] = a[i] + b[i]
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  /// out[i] = (hi[i] - lo[i]) * scale
  void (*interval_mean)(const double* hi, const double* lo, double scale, double* out,
                        std::size_t n);
  /// Index of the first maximum; n > 0.
  std::size_t (*argmax)(const double* x, std::size_t n);
  double (*max_value)(const double* x, std::size_t n);
  /// log(sum(exp(x))); -inf for an all -inf input.
  double (*log_sum_exp)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2_table();

/// Table used by the library. Chosen on first use: TAOG_KERNELS=scalar|avx2
/// forces a table, otherwise AVX2 when available.
const KernelTable& active();
/// Returns false when the requested table is unavailable.
bool select(std::string_view name);

inline void add(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  active().add(a.data(), b.data(), out.data(), out.size());
}
inline void interval_mean(std::span<const double> hi, std::span<const double> lo, double scale,
                          std::span<double> out) {
  active().interval_mean(hi.data(), lo.data(), scale, out.data(), out.size());
}
inline std::size_t argmax(std::span<const double> x) { return active().argmax(x.data(), x.size()); }
inline double max_value(std::span<const double> x) { return active().max_value(x.data(), x.size()); }
inline double log_sum_exp(std::span<const double> x) {
  return active().log_sum_exp(x.data(), x.size());
}

}  // namespace taog::kernels

#endif  // TAOG_KERNELS_H_
