// tests/fixtures.h

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

#ifndef TAOG_TESTS_FIXTURES_H_
#define TAOG_TESTS_FIXTURES_H_

// Random models and detection streams for property tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "taog/emission.h"
#include "taog/parse_types.h"

namespace taog::fixtures {

inline Alphabets small_alphabets(int S, int A, int O, int U) {
  Alphabets ab;
  for (int i = 0; i < S; ++i) ab.subactivities.push_back("s" + std::to_string(i));
  for (int i = 0; i < A; ++i) ab.actions.push_back("a" + std::to_string(i));
  for (int i = 0; i < O; ++i) ab.objects.push_back("o" + std::to_string(i));
  for (int i = 0; i < U; ++i) ab.affordances.push_back("u" + std::to_string(i));
  return ab;
}

inline std::vector<double> random_categorical(std::mt19937_64& rng, int n, double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = e(rng) + floor);
  for (auto& x : p) x /= total;
  return p;
}

inline EmissionModel random_model(std::mt19937_64& rng, const Alphabets& ab) {
  EmissionModel m;
  m.alphabets = ab;
  const int S = static_cast<int>(ab.subactivities.size());
  std::uniform_real_distribution<double> mu(std::log(2.0), std::log(6.0)), sigma(0.3, 1.0);
  for (int s = 0; s < S; ++s) {
    m.actions_given_s.push_back(random_categorical(rng, static_cast<int>(ab.actions.size()), 0.05));
    m.objects_given_s.push_back(random_categorical(rng, static_cast<int>(ab.objects.size()), 0.05));
    m.affordances_given_s.push_back(random_categorical(rng, static_cast<int>(ab.affordances.size()), 0.05));
    m.duration.push_back(Duration{mu(rng), sigma(rng)});
  }
  m.prior_s = random_categorical(rng, S, 0.1);
  m.defaulted.assign(S, false);
  return m;
}

/// Piecewise-constant peaks with random noise; `tracks` objects per frame.
inline DetectionStream random_stream(std::mt19937_64& rng, const Alphabets& ab, int T, int tracks) {
  const int A = static_cast<int>(ab.actions.size()), O = static_cast<int>(ab.objects.size()),
            U = static_cast<int>(ab.affordances.size());
  std::uniform_int_distribution<int> pa(0, A - 1), pu(0, U - 1), len(1, 6);
  std::uniform_real_distribution<double> peak(0.5, 3.0);
  auto peaked = [&](int n, int at) {
    auto p = random_categorical(rng, n, 0.01);
    double total = 0.0;
    p[at] += peak(rng);
    for (double x : p) total += x;
    for (auto& x : p) x /= total;
    return p;
  };
  DetectionStream out;
  int a = pa(rng), u = pu(rng), left = len(rng);
  std::vector<int> objs;
  for (int j = 0; j < tracks; ++j) objs.push_back(std::uniform_int_distribution<int>(0, O - 1)(rng));
  for (int t = 0; t < T; ++t) {
    if (left-- == 0) {
      a = pa(rng);
      u = pu(rng);
      left = len(rng);
    }
    DetectionFrame f;
    f.t = t;
    f.action_scores = peaked(A, a);
    for (int j = 0; j < tracks; ++j)
      f.objects.push_back(ObjectDetection{j, peaked(O, objs[j]), peaked(U, j == 0 ? u : 0)});
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace taog::fixtures

#endif  // TAOG_TESTS_FIXTURES_H_
