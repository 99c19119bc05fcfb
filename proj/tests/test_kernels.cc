// tests/test_kernels.cc

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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "taog/kernels.h"
#include "taog/logmath.h"

using namespace taog;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, bool with_inf) {
  std::uniform_real_distribution<double> u(-50.0, 5.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  if (with_inf && n > 2) v[n / 2] = kNegInf;
  return v;
}

}  // namespace

TEST_CASE("scalar reference behaviour") {
  const auto& k = kernels::scalar_table();
  const double x[] = {1.0, 3.0, 3.0, -2.0};
  CHECK(k.argmax(x, 4) == 1);
  CHECK(k.max_value(x, 4) == 3.0);
  const double inf[] = {kNegInf, kNegInf};
  CHECK(k.log_sum_exp(inf, 2) == kNegInf);
  const double two[] = {std::log(0.25), std::log(0.75)};
  CHECK(k.log_sum_exp(two, 2) == doctest::Approx(0.0));
}

TEST_CASE("AVX2 table matches the scalar reference") {
  const kernels::KernelTable* avx = kernels::avx2_table();
  if (avx == nullptr) {
    MESSAGE("AVX2 unavailable; equivalence not exercised");
    return;
  }
  const auto& ref = kernels::scalar_table();
  std::mt19937_64 rng(99);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 257u}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto a = random_vec(rng, n, rep % 3 == 0);
      auto b = random_vec(rng, n, rep % 5 == 0);
      std::vector<double> o1(n), o2(n);
      ref.add(a.data(), b.data(), o1.data(), n);
      avx->add(a.data(), b.data(), o2.data(), n);
      CHECK(o1 == o2);
      ref.interval_mean(a.data(), b.data(), 1.0 / 7.0, o1.data(), n);
      avx->interval_mean(a.data(), b.data(), 1.0 / 7.0, o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        // NaN from inf - inf must agree too.
        CHECK(((std::isnan(o1[i]) && std::isnan(o2[i])) || o1[i] == o2[i]));
      }
      // Duplicated maxima: both must report the first.
      if (n > 3) a[n - 1] = a[1] = 100.0;
      CHECK(ref.argmax(a.data(), n) == avx->argmax(a.data(), n));
      CHECK(ref.max_value(a.data(), n) == avx->max_value(a.data(), n));
      CHECK(avx->log_sum_exp(a.data(), n) ==
            doctest::Approx(ref.log_sum_exp(a.data(), n)).epsilon(1e-13));
    }
  }
  std::vector<double> all_inf(9, kNegInf);
  CHECK(avx->log_sum_exp(all_inf.data(), all_inf.size()) == kNegInf);
  CHECK(avx->argmax(all_inf.data(), all_inf.size()) == 0);
}

TEST_CASE("runtime selection") {
  CHECK(kernels::select("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_FALSE(kernels::select("bogus"));
  if (kernels::avx2_table() != nullptr) {
    CHECK(kernels::select("avx2"));
    CHECK(std::string(kernels::active().name) == "avx2");
  }
}
