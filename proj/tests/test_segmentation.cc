// tests/test_segmentation.cc

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

#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.h"
#include "segmentation_oracle.h"
#include "taog/error.h"
#include "taog/logmath.h"
#include "taog/segmentation.h"

using namespace taog;
using taog::oracle::exhaustive;
using taog::oracle::starts_of;

namespace {

double ln_pdf_log(double x, double mu, double sigma) {
  const double z = (std::log(x) - mu) / sigma;
  return -std::log(x * sigma * std::sqrt(2 * M_PI)) - 0.5 * z * z;
}

/// Enumerates every label tuple: (a, o, u) maximize the averaged detections
/// jointly (which factorizes), then s maximizes the symbolic terms.
SegmentInterpretation brute_interpretation(const DetectionStream& st, int t1, int t2,
                                           const EmissionModel& m) {
  const int len = t2 - t1 + 1;
  auto geo = [&](auto get, int n) {
    std::vector<double> g(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double l = 0.0;
      for (int t = t1; t <= t2; ++t) l += std::log(std::max(get(st[t])[i], 1e-12));
      total += (g[i] = std::exp(l / len));
    }
    for (auto& x : g) x /= total;
    return g;
  };
  const int A = static_cast<int>(m.alphabets.actions.size());
  const int O = static_cast<int>(m.alphabets.objects.size());
  const int U = static_cast<int>(m.alphabets.affordances.size());
  const int M = static_cast<int>(st[0].objects.size());
  auto ga = geo([](const DetectionFrame& f) { return f.action_scores; }, A);
  std::vector<std::vector<double>> go, gu;
  for (int j = 0; j < M; ++j) {
    go.push_back(geo([j](const DetectionFrame& f) { return f.objects[j].object_scores; }, O));
    gu.push_back(geo([j](const DetectionFrame& f) { return f.objects[j].affordance_scores; }, U));
  }
  // Joint enumeration over (a, o_1.., u_1..).
  SegmentInterpretation best;
  double best_det = -1.0;
  const int combos = A * static_cast<int>(std::pow(O * U, M));
  for (int c = 0; c < combos; ++c) {
    int rest = c;
    const int a = rest % A;
    rest /= A;
    double det = ga[a];
    std::vector<int> o(M), u(M);
    for (int j = 0; j < M; ++j) {
      o[j] = rest % O;
      rest /= O;
      u[j] = rest % U;
      rest /= U;
      det *= go[j][o[j]] * gu[j][u[j]];
    }
    if (det > best_det * (1 + 1e-12)) {
      best_det = det;
      best.a = a;
      best.o = o;
      best.u = u;
    }
  }
  best.detection = std::log(best_det);
  double best_s = kNegInf;
  for (int s = 0; s < m.num_subactivities(); ++s) {
    double v = std::log(m.prior_s[s]) + std::log(m.actions_given_s[s][best.a]) +
               ln_pdf_log(len, m.duration[s].mu, m.duration[s].sigma);
    for (int j = 0; j < M; ++j)
      v += std::log(m.objects_given_s[s][best.o[j]]) + std::log(m.affordances_given_s[s][best.u[j]]);
    if (v > best_s) {
      best_s = v;
      best.s = s;
    }
  }
  best.log_score = best.detection + best_s;
  return best;
}

}  // namespace

TEST_CASE("segment interpretation") {
  const Alphabets ab = fixtures::small_alphabets(2, 2, 2, 2);
  EmissionModel m = learn_emissions(std::vector<Segment>{}, ab, 1.0);
  DetectionStream one{DetectionFrame{0, {0.9, 0.1}, {}}};
  CHECK(best_segment_interpretation(one, 0, 0, m).a == 0);

  // s1 is the only sub-activity that explains action a1.
  m.actions_given_s = {{0.99, 0.01}, {0.01, 0.99}};
  DetectionStream two{DetectionFrame{0, {0.2, 0.8}, {}}};
  CHECK(best_segment_interpretation(two, 0, 0, m).s == 1);
}

TEST_CASE("interpretation matches tuple enumeration") {
  std::mt19937_64 rng(17);
  const Alphabets ab = fixtures::small_alphabets(2, 2, 2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const EmissionModel m = fixtures::random_model(rng, ab);
    const auto st = fixtures::random_stream(rng, ab, 6, 1 + trial % 2);
    const int t1 = trial % 3, t2 = t1 + 3;
    auto lib = best_segment_interpretation(st, t1, t2, m);
    auto ref = brute_interpretation(st, t1, t2, m);
    CHECK(lib.a == ref.a);
    CHECK(lib.o == ref.o);
    CHECK(lib.u == ref.u);
    CHECK(lib.s == ref.s);
    CHECK(lib.log_score == doctest::Approx(ref.log_score).epsilon(1e-12));
  }
}

TEST_CASE("DP matches exhaustive search") {
  std::mt19937_64 rng(4242);
  const Alphabets ab = fixtures::small_alphabets(3, 3, 2, 3);
  for (int trial = 0; trial < 60; ++trial) {
    const EmissionModel m = fixtures::random_model(rng, ab);
    const int T = 1 + trial % 10;
    const auto st = fixtures::random_stream(rng, ab, T, 1 + trial % 2);
    for (int L : {T, 3}) {
      SegmenterConfig cfg;
      cfg.max_segment_length = L;
      auto dp = segment_stream(st, m, cfg);
      auto ex = exhaustive(st, m, L);
      CHECK(dp.log_score == doctest::Approx(ex.score).epsilon(1e-12));
      CHECK(starts_of(dp) == ex.starts);
      double total = 0.0;
      for (double s : dp.segment_scores) total += s;
      CHECK(total == doctest::Approx(dp.log_score).epsilon(1e-12));
    }
  }
}

TEST_CASE("abrupt flip yields a boundary at the flip") {
  const Alphabets ab = fixtures::small_alphabets(2, 2, 1, 1);
  EmissionModel m = learn_emissions(std::vector<Segment>{}, ab, 1.0);
  m.actions_given_s = {{0.95, 0.05}, {0.05, 0.95}};
  m.duration = {Duration{std::log(5.0), 0.3}, Duration{std::log(5.0), 0.3}};
  DetectionStream st;
  for (int t = 0; t < 10; ++t) {
    st.push_back(DetectionFrame{t, t < 5 ? std::vector<double>{0.9, 0.1} : std::vector<double>{0.1, 0.9},
                                {ObjectDetection{0, {1.0}, {1.0}}}});
  }
  auto seg = segment_stream(st, m);
  REQUIRE(seg.segments.size() == 2);
  CHECK(seg.segments[0].t2 == 4);
  CHECK(seg.segments[1].t1 == 5);
  CHECK(seg.segments[0].s == 0);
  CHECK(seg.segments[1].s == 1);
  CHECK(starts_of(seg) == exhaustive(st, m, 10).starts);

  // Duration peaked at T on a homogeneous stream: one segment.
  m.duration = {Duration{std::log(10.0), 0.1}, Duration{std::log(10.0), 0.1}};
  DetectionStream flat(st.begin(), st.begin() + 5);
  for (int t = 5; t < 10; ++t) flat.push_back(DetectionFrame{t, {0.9, 0.1}, {ObjectDetection{0, {1.0}, {1.0}}}});
  CHECK(segment_stream(flat, m).segments.size() == 1);
}

TEST_CASE("online segmentation equals batch") {
  std::mt19937_64 rng(8);
  const Alphabets ab = fixtures::small_alphabets(4, 5, 3, 4);
  for (int trial = 0; trial < 5; ++trial) {
    const EmissionModel m = fixtures::random_model(rng, ab);
    const auto st = fixtures::random_stream(rng, ab, 200, 2);
    SegmenterConfig cfg;
    cfg.max_segment_length = 50;
    OnlineSegmenter online(m, cfg);
    for (int t = 0; t < 200; ++t) {
      online.append(st[t]);
      if (t % 37 == 0 || t == 199) {
        DetectionStream prefix(st.begin(), st.begin() + t + 1);
        auto batch = segment_stream(prefix, m, cfg);
        auto inc = online.result();
        CHECK(inc.segments == batch.segments);
        CHECK(inc.segment_scores == batch.segment_scores);
        CHECK(inc.log_score == batch.log_score);
      }
    }
  }
  CHECK_THROWS_AS(segment_stream(DetectionStream{}, learn_emissions(std::vector<Segment>{}, ab)), Error);
}
