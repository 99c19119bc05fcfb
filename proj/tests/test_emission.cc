// tests/test_emission.cc

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

#include "doctest.h"
#include "taog/emission.h"
#include "taog/error.h"
#include "taog/logmath.h"

using namespace taog;

namespace {

Alphabets alphabets2() { return Alphabets{{"s0", "s1"}, {"a0", "a1"}, {"o0", "o1"}, {"u0", "u1"}}; }

Segment seg(int s, int a, int o, int u, int len) { return Segment{0, len - 1, s, a, {o}, {u}}; }

double ln_pdf(double x, double mu, double sigma) {
  return std::exp(-std::pow(std::log(x) - mu, 2) / (2 * sigma * sigma)) /
         (x * sigma * std::sqrt(2 * M_PI));
}

}  // namespace

TEST_CASE("learning from counts") {
  std::vector<Segment> segs{seg(0, 0, 0, 0, 7), seg(0, 0, 1, 0, 7), seg(0, 1, 0, 1, 7), seg(0, 1, 1, 1, 7)};
  auto m = learn_emissions(segs, alphabets2(), 0.0);
  CHECK(m.actions_given_s[0][0] == 0.5);
  CHECK(m.actions_given_s[0][1] == 0.5);
  CHECK(m.prior_s[0] == 1.0);
  CHECK(m.defaulted[1]);
  CHECK_FALSE(m.defaulted[0]);
  CHECK(m.actions_given_s[1][0] == 0.5);
  CHECK(m.duration[1] == kDefaultDuration);
  CHECK(kDefaultDuration.mu == doctest::Approx(std::log(20.0)).epsilon(1e-15));
  CHECK_NOTHROW(m.validate());

  // Laplace smoothing.
  auto sm = learn_emissions(std::vector<Segment>{seg(0, 0, 0, 0, 3)}, alphabets2(), 1.0);
  CHECK(sm.actions_given_s[0][0] == doctest::Approx(2.0 / 3.0));
  CHECK(sm.actions_given_s[0][1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("duration estimation and sigma floor") {
  const int e2 = static_cast<int>(std::lround(std::exp(2.0)));  // 7 frames
  std::vector<Segment> same{seg(0, 0, 0, 0, e2), seg(0, 0, 0, 0, e2)};
  auto m = learn_emissions(same, alphabets2(), 0.0);
  CHECK(m.duration[0].mu == doctest::Approx(std::log(7.0)));
  CHECK(m.duration[0].sigma == kMinDurationSigma);

  std::vector<Segment> spread{seg(0, 0, 0, 0, 4), seg(0, 0, 0, 0, 16)};
  auto m2 = learn_emissions(spread, alphabets2(), 0.0);
  CHECK(m2.duration[0].mu == doctest::Approx(std::log(8.0)));
  // Sample std of {log 4, log 16} with n - 1.
  CHECK(m2.duration[0].sigma == doctest::Approx(std::sqrt(2.0) * std::log(2.0)));
}

TEST_CASE("learning is order invariant") {
  std::vector<Segment> segs{seg(0, 0, 0, 0, 3), seg(1, 1, 0, 1, 9), seg(0, 1, 1, 0, 5), seg(1, 1, 1, 1, 2)};
  auto a = learn_emissions(segs, alphabets2(), 1.0);
  std::reverse(segs.begin(), segs.end());
  auto b = learn_emissions(segs, alphabets2(), 1.0);
  CHECK(a.actions_given_s == b.actions_given_s);
  CHECK(a.prior_s == b.prior_s);
  CHECK(a.duration[0].mu == doctest::Approx(b.duration[0].mu).epsilon(1e-15));
  for (const auto& row : a.affordances_given_s)
    for (double x : row) CHECK(x > 0.0);
}

TEST_CASE("Monte Carlo recovery of planted tables") {
  const std::vector<std::vector<double>> pa{{0.7, 0.3}, {0.2, 0.8}};
  const std::vector<std::vector<double>> po{{0.5, 0.5}, {0.9, 0.1}};
  const std::vector<std::vector<double>> pu{{0.1, 0.9}, {0.6, 0.4}};
  std::mt19937_64 rng(77);
  std::bernoulli_distribution coin(0.5);
  std::lognormal_distribution<double> dur(std::log(15.0), 0.3);
  std::vector<Segment> segs;
  for (int i = 0; i < 5000; ++i) {
    const int s = coin(rng);
    auto draw = [&](const std::vector<double>& p) { return std::bernoulli_distribution(p[1])(rng) ? 1 : 0; };
    const int len = std::max(1, static_cast<int>(std::lround(dur(rng))));
    segs.push_back(seg(s, draw(pa[s]), draw(po[s]), draw(pu[s]), len));
  }
  auto m = learn_emissions(segs, alphabets2(), 0.0);
  for (int s = 0; s < 2; ++s) {
    for (int x = 0; x < 2; ++x) {
      CHECK(std::abs(m.actions_given_s[s][x] - pa[s][x]) <= 0.02);
      CHECK(std::abs(m.objects_given_s[s][x] - po[s][x]) <= 0.02);
      CHECK(std::abs(m.affordances_given_s[s][x] - pu[s][x]) <= 0.02);
    }
    CHECK(std::abs(m.duration[s].mu - std::log(15.0)) <= 0.02);
  }
}

TEST_CASE("segment_prior closed forms") {
  EmissionModel m = learn_emissions(std::vector<Segment>{}, alphabets2(), 1.0);
  // Uniform tables, duration at the log-normal mode exp(mu - sigma^2).
  const Duration d = m.duration[0];
  const double mode = std::exp(d.mu - d.sigma * d.sigma);
  const double lp = std::log(0.5) * 3 + std::log(ln_pdf(mode, d.mu, d.sigma));
  const int o[] = {1}, u[] = {0};
  // Integer durations only; check the density piece at the nearest integer.
  const int n = static_cast<int>(std::lround(mode));
  CHECK(segment_prior(1, o, u, n, 0, m) ==
        doctest::Approx(std::log(0.5) * 3 + std::log(ln_pdf(n, d.mu, d.sigma))).epsilon(1e-12));
  CHECK(lp < 0.0);

  // Hand-built model, two objects.
  EmissionModel h;
  h.alphabets = alphabets2();
  h.actions_given_s = {{0.9, 0.1}, {0.3, 0.7}};
  h.objects_given_s = {{0.6, 0.4}, {0.5, 0.5}};
  h.affordances_given_s = {{1.0, 0.0}, {0.25, 0.75}};
  h.prior_s = {0.4, 0.6};
  h.duration = {Duration{2.0, 0.5}, Duration{3.0, 0.2}};
  h.defaulted = {false, false};
  REQUIRE_NOTHROW(h.validate());
  const int oo[] = {0, 1}, uu[] = {1, 1};
  CHECK(segment_prior(1, oo, uu, 20, 1, h) ==
        doctest::Approx(std::log(0.7 * 0.5 * 0.5 * 0.75 * 0.75 * ln_pdf(20, 3.0, 0.2))).epsilon(1e-12));
  const int u1[] = {1};
  const int o1[] = {0};
  CHECK(segment_prior(0, o1, u1, 5, 0, h) == kNegInf);
}

TEST_CASE("parse_graph_prior") {
  EmissionModel m = learn_emissions(std::vector<Segment>{seg(0, 0, 0, 0, 5), seg(1, 1, 1, 1, 8)},
                                    alphabets2(), 1.0);
  const Grammar single("E", {"s0"}, {{"E", NodeKind::kAnd, {"s0"}, {}}});
  std::vector<Segment> one{Segment{0, 4, 0, 0, {0}, {0}}};
  CHECK(parse_graph_prior(one, single, m) == doctest::Approx(segment_prior(one[0], m)));

  const Grammar pair("E", {"s0", "s1"}, {{"E", NodeKind::kAnd, {"s0", "s1"}, {}}});
  std::vector<Segment> two{Segment{0, 4, 0, 0, {0}, {0}}, Segment{5, 12, 1, 1, {1}, {1}}};
  CHECK(parse_graph_prior(two, pair, m) ==
        doctest::Approx(segment_prior(two[0], m) + segment_prior(two[1], m)));
  std::vector<Segment> wrong{Segment{0, 4, 1, 0, {0}, {0}}, Segment{5, 12, 0, 1, {1}, {1}}};
  CHECK(parse_graph_prior(wrong, pair, m) == kNegInf);
}

TEST_CASE("model documents round trip exactly") {
  auto m = learn_emissions(std::vector<Segment>{seg(0, 0, 1, 0, 5), seg(0, 1, 1, 0, 9), seg(1, 1, 1, 1, 8)},
                           alphabets2(), 1.0);
  auto back = deserialize_model(serialize_model(m));
  CHECK(back == m);
  auto bad = serialize_model(m);
  bad.replace(bad.find("\"prior\""), 7, "\"prjor\"");
  CHECK_THROWS_AS(deserialize_model(bad), Error);
}
