// src/kernels/kernels_avx2.cc

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

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "kernels_internal.h"

namespace taog::kernels::internal {
namespace {

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void interval_mean(const double* hi, const double* lo, double scale, double* out, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(hi + i), _mm256_loadu_pd(lo + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, s));
  }
  for (; i < n; ++i) out[i] = (hi[i] - lo[i]) * scale;
}

double max_value(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_set1_pd(m);
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (double v : lanes)
      if (v > m) m = v;
  }
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

std::size_t argmax(const double* x, std::size_t n) {
  const double m = max_value(x, n);
  const __m256d target = _mm256_set1_pd(m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), target, _CMP_EQ_OQ));
    if (mask != 0) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i)
    if (x[i] == m) return i;
  return 0;
}

double log_sum_exp(const double* x, std::size_t n) {
  const double m = max_value(x, n);
  if (std::isinf(m)) return m;
  // exp has no AVX2 instruction; shift in vector lanes, accumulate in four
  // partial sums.
  const __m256d shift = _mm256_set1_pd(m);
  double partial[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  alignas(32) double lanes[4];
  for (; i + 4 <= n; i += 4) {
    _mm256_store_pd(lanes, _mm256_sub_pd(_mm256_loadu_pd(x + i), shift));
    for (int l = 0; l < 4; ++l) partial[l] += std::exp(lanes[l]);
  }
  double s = (partial[0] + partial[1]) + (partial[2] + partial[3]);
  for (; i < n; ++i) s += std::exp(x[i] - m);
  return m + std::log(s);
}

}  // namespace

const KernelTable kAvx2Table{"avx2", add, interval_mean, argmax, max_value, log_sum_exp};

}  // namespace taog::kernels::internal
