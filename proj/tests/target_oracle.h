// tests/target_oracle.h

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

#ifndef TAOG_TESTS_TARGET_ORACLE_H_
#define TAOG_TESTS_TARGET_ORACLE_H_

// Refinement target recomputed from the raw stream, plus a small toy setup
// (grammar, random model and stream, random tiling) shared by the refinement
// tests and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fixtures.h"
#include "oracles.h"
#include "taog/logmath.h"
#include "taog/refinement.h"

namespace taog::oracle {

// ---------------------------------------------------------------------------
// Independent target: everything recomputed from the raw stream.

inline double ln_pdf_log(double x, double mu, double sigma) {
  const double z = (std::log(x) - mu) / sigma;
  return -std::log(x * sigma * std::sqrt(2 * M_PI)) - 0.5 * z * z;
}

template <class Get>
double geo_log(const DetectionStream& st, int t1, int t2, Get get, int n, int at) {
  std::vector<double> g(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double l = 0.0;
    for (int t = t1; t <= t2; ++t) l += std::log(std::max(get(st[t])[i], 1e-12));
    total += (g[i] = std::exp(l / (t2 - t1 + 1)));
  }
  return std::log(g[at] / total);
}

inline double oracle_target(const DetectionStream& st, const std::vector<Segment>& segs, const std::vector<int>& subs,
                     const Grammar& g, const EmissionModel& m, GrammarTerm term) {
  const int A = static_cast<int>(m.alphabets.actions.size());
  const int O = static_cast<int>(m.alphabets.objects.size());
  const int U = static_cast<int>(m.alphabets.affordances.size());
  double total = 0.0;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Segment& x = segs[k];
    const int s = subs[k];
    total += geo_log(st, x.t1, x.t2, [](const DetectionFrame& f) { return f.action_scores; }, A, x.a);
    total += std::log(m.actions_given_s[s][x.a]);
    for (std::size_t j = 0; j < x.o.size(); ++j) {
      total += geo_log(st, x.t1, x.t2, [j](const DetectionFrame& f) { return f.objects[j].object_scores; }, O, x.o[j]);
      total += geo_log(st, x.t1, x.t2, [j](const DetectionFrame& f) { return f.objects[j].affordance_scores; }, U,
                       x.u[j]);
      total += std::log(m.objects_given_s[s][x.o[j]]) + std::log(m.affordances_given_s[s][x.u[j]]);
    }
  }
  Sentence sentence;
  for (std::size_t k = 0; k < segs.size();) {
    std::size_t end = k;
    int frames = 0;
    while (end < segs.size() && subs[end] == subs[k]) frames += segs[end++].length();
    total += ln_pdf_log(frames, m.duration[subs[k]].mu, m.duration[subs[k]].sigma);
    sentence.push_back(m.alphabets.subactivities[subs[k]]);
    k = end;
  }
  double gp = 0.0;
  if (term == GrammarTerm::kPrefix) {
    gp = completion_mass(language(g), sentence);
  } else {
    const auto trees = best_trees(g);
    const auto it = trees.find(sentence);
    gp = it == trees.end() ? 0.0 : it->second.probability;
  }
  return total + std::log(gp);
}

// EV -> X (0.7) | Y (0.3); X -> s0 s1 s2; Y -> s0 s2.
inline Grammar toy_grammar() {
  return Grammar("EV", {"s0", "s1", "s2"},
                 {{"EV", NodeKind::kOr, {"X", "Y"}, {0.7, 0.3}},
                  {"X", NodeKind::kAnd, {"s0", "s1", "s2"}, {}},
                  {"Y", NodeKind::kAnd, {"s0", "s2"}, {}}});
}

inline std::vector<Segment> random_tiling(std::mt19937_64& rng, int T, int K, int S, int A, int O, int U, int tracks) {
  std::vector<int> cuts;
  for (int t = 1; t < T; ++t) cuts.push_back(t);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(K - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(T);
  std::vector<Segment> out;
  for (int k = 0; k < K; ++k) {
    Segment x{cuts[k], cuts[k + 1] - 1, std::uniform_int_distribution<int>(0, S - 1)(rng),
              std::uniform_int_distribution<int>(0, A - 1)(rng), {}, {}};
    for (int j = 0; j < tracks; ++j) {
      x.o.push_back(std::uniform_int_distribution<int>(0, O - 1)(rng));
      x.u.push_back(std::uniform_int_distribution<int>(0, U - 1)(rng));
    }
    out.push_back(x);
  }
  return out;
}

inline std::vector<int> subs_of(const std::vector<Segment>& segs) {
  std::vector<int> out;
  for (const auto& x : segs) out.push_back(x.s);
  return out;
}

struct Toy {
  Alphabets ab = fixtures::small_alphabets(3, 3, 3, 3);
  Grammar g = toy_grammar();
  EmissionModel m;
  DetectionStream st;
  std::vector<Segment> segs;
  Toy(std::uint64_t seed, int T, int K) {
    std::mt19937_64 rng(seed);
    m = fixtures::random_model(rng, ab);
    st = fixtures::random_stream(rng, ab, T, 1);
    segs = random_tiling(rng, T, K, 3, 3, 3, 3, 1);
  }
  ParseGraphSeq parse() const { return ParseGraphSeq{"ev", segs, 0.0}; }
};

}  // namespace taog::oracle

#endif  // TAOG_TESTS_TARGET_ORACLE_H_
