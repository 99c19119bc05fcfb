// src/refinement.cc

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

#include "taog/refinement.h"

#include <algorithm>
#include <cmath>

#include "taog/error.h"
#include "taog/lattice.h"
#include "taog/logmath.h"
#include "taog/parallel.h"

namespace taog {

double sweep_temperature(const RefineConfig& config, int i) {
  if (i >= config.sweeps - 1) return 0.0;
  return config.t0 * std::pow(config.beta, i);
}

GibbsChain::GibbsChain(const ParseGraphSeq& pg, const StreamLogCumulants& c, const Grammar& grammar,
                       const EmissionModel& model, GrammarTerm term, SegmentScoring scoring,
                       GrammarScorer* scorer)
    : grammar_(&grammar),
      model_(&model),
      tables_(model),
      term_(term),
      own_scorer_(grammar),
      scorer_(scorer != nullptr ? scorer : &own_scorer_),
      event_(pg.event),
      segments_(pg.segments),
      num_actions_(c.num_actions()),
      num_affordances_(c.num_affordances()),
      flagged_(pg.segments.size(), false) {
  if (scorer != nullptr && &scorer->grammar() != &grammar)
    fail(ErrorCode::kInvalidArgument, "scorer belongs to another grammar");
  action_offset_ = c.action_offset();
  for (int j = 0; j < c.num_tracks(); ++j) {
    object_offset_.push_back(c.object_offset(j));
    affordance_offset_.push_back(c.affordance_offset(j));
  }
  int next = 0;
  for (const auto& seg : segments_) {
    if (seg.t1 != next || seg.t2 < seg.t1 || seg.t2 >= c.num_frames())
      fail(ErrorCode::kInvalidArgument, "parse does not tile the stream");
    if (static_cast<int>(seg.o.size()) != c.num_tracks() || static_cast<int>(seg.u.size()) != c.num_tracks())
      fail(ErrorCode::kInvalidArgument, "segment labels do not match the object tracks");
    next = seg.t2 + 1;
    std::vector<double> logs(static_cast<std::size_t>(c.width()));
    c.interval(seg.t1, seg.t2, scoring, logs);
    detection_.push_back(std::move(logs));
  }
  for (const auto& name : model.alphabets.subactivities) {
    const int id = grammar.id(name);
    gids_.push_back(id >= 0 && grammar.terminal(id) ? id : -1);
  }
}

double GibbsChain::grammar_log(std::span<const int> subs) {
  std::vector<int> ids;
  ids.reserve(subs.size());
  for (std::size_t k = 0; k < subs.size(); ++k) {
    if (gids_[subs[k]] < 0) return kNegInf;
    if (k > 0 && subs[k] == subs[k - 1]) continue;
    ids.push_back(gids_[subs[k]]);
  }
  return term_ == GrammarTerm::kPrefix ? scorer_->prefix_log_likelihood(ids)
                                       : scorer_->sentence_viterbi_log_likelihood(ids);
}

double GibbsChain::symbolic(int k, int s) const {
  const Segment& seg = segments_[k];
  double v = tables_.action[seg.a][s];
  for (int o : seg.o) v += tables_.object[o][s];
  for (int u : seg.u) v += tables_.affordance[u][s];
  return v;
}

double GibbsChain::log_target(std::span<const int> subs) {
  double total = 0.0;
  for (int k = 0; k < num_segments(); ++k) {
    const Segment& seg = segments_[k];
    total += detection_[k][action_offset_ + seg.a];
    for (std::size_t j = 0; j < seg.o.size(); ++j) {
      total += detection_[k][object_offset_[j] + seg.o[j]];
      total += detection_[k][affordance_offset_[j] + seg.u[j]];
    }
    total += symbolic(k, subs[k]);
  }
  for (int k = 0; k < num_segments();) {
    int end = k, frames = 0;
    while (end < num_segments() && subs[end] == subs[k]) frames += segments_[end++].length();
    total += tables_.log_duration(subs[k], frames);
    k = end;
  }
  if (total == kNegInf || subs.empty()) return total;
  return total + grammar_log(subs);
}

double GibbsChain::log_posterior() {
  std::vector<int> subs;
  for (const auto& seg : segments_) subs.push_back(seg.s);
  return log_target(subs);
}

bool GibbsChain::make_grammatical() {
  std::vector<int> subs;
  for (const auto& seg : segments_) subs.push_back(seg.s);
  if (subs.empty() || grammar_log(subs) > kNegInf) return true;
  // Grammar terminal id -> sub-activity id.
  std::vector<int> sub_of(static_cast<std::size_t>(grammar_->num_symbols()), -1);
  for (std::size_t s = 0; s < gids_.size(); ++s)
    if (gids_[s] >= 0) sub_of[gids_[s]] = static_cast<int>(s);
  const int K = num_segments();
  std::vector<int> starts(K + 1, 0);
  for (int k = 0; k < K; ++k) starts[k + 1] = starts[k] + segments_[k].length();
  auto leaf = [&](int t, int i, int j) {
    const int s = sub_of[t];
    if (s < 0) return kNegInf;
    double v = tables_.log_duration(s, starts[j] - starts[i]);
    for (int k = i; k < j; ++k) v += symbolic(k, s);
    return v;
  };
  const LatticeParse lp = lattice_viterbi(*grammar_, K, leaf, term_ == GrammarTerm::kPrefix);
  if (lp.labels.empty()) {
    std::fill(flagged_.begin(), flagged_.end(), true);
    return false;
  }
  for (int k = 0; k < K; ++k) segments_[k].s = sub_of[lp.labels[k]];
  return true;
}

std::vector<double> GibbsChain::action_weights(int k) const {
  const Segment& seg = segments_[k];
  std::vector<double> w(static_cast<std::size_t>(num_actions_));
  for (int a = 0; a < num_actions_; ++a)
    w[a] = detection_[k][action_offset_ + a] + tables_.action[a][seg.s];
  return w;
}

std::vector<double> GibbsChain::affordance_weights(int k, int track) const {
  const Segment& seg = segments_[k];
  std::vector<double> w(static_cast<std::size_t>(num_affordances_));
  for (int u = 0; u < num_affordances_; ++u)
    w[u] = detection_[k][affordance_offset_[track] + u] + tables_.affordance[u][seg.s];
  return w;
}

std::vector<double> GibbsChain::subactivity_weights(int k) {
  const int S = tables_.num_subactivities;
  std::vector<int> subs;
  for (const auto& x : segments_) subs.push_back(x.s);
  std::vector<double> w(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) {
    subs[k] = s;
    w[s] = log_target(subs);
  }
  return w;
}

int GibbsChain::draw(const std::vector<double>& logw, int current, double temperature,
                     std::mt19937_64& rng, bool* all_neg_inf) {
  const auto best = std::max_element(logw.begin(), logw.end());
  *all_neg_inf = *best == kNegInf;
  if (*all_neg_inf) return current;
  if (temperature <= 0.0) return static_cast<int>(best - logw.begin());
  std::vector<double> p(logw.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    p[i] = logw[i] == kNegInf ? 0.0 : std::exp((logw[i] - *best) / temperature);
    total += p[i];
  }
  const double r = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    last = i;
    acc += p[i];
    if (r < acc) return static_cast<int>(i);
  }
  return static_cast<int>(last);
}

void GibbsChain::resample_action(int k, double temperature, std::mt19937_64& rng) {
  bool dead = false;
  segments_[k].a = draw(action_weights(k), segments_[k].a, temperature, rng, &dead);
  if (dead) flagged_[k] = true;
}

void GibbsChain::resample_affordance(int k, int track, double temperature, std::mt19937_64& rng) {
  bool dead = false;
  segments_[k].u[track] = draw(affordance_weights(k, track), segments_[k].u[track], temperature, rng, &dead);
  if (dead) flagged_[k] = true;
}

void GibbsChain::resample_subactivity(int k, double temperature, std::mt19937_64& rng) {
  bool dead = false;
  segments_[k].s = draw(subactivity_weights(k), segments_[k].s, temperature, rng, &dead);
  if (dead) flagged_[k] = true;
}

void GibbsChain::sweep(double temperature, std::mt19937_64& rng) {
  for (int k = 0; k < num_segments(); ++k) {
    resample_action(k, temperature, rng);
    for (int j = 0; j < static_cast<int>(segments_[k].u.size()); ++j) resample_affordance(k, j, temperature, rng);
    resample_subactivity(k, temperature, rng);
  }
}

ParseGraphSeq GibbsChain::parse() {
  ParseGraphSeq pg;
  pg.event = event_;
  pg.segments = segments_;
  pg.log_posterior = log_posterior();
  return pg;
}

ParseGraphSeq gibbs_refine(const ParseGraphSeq& pg, const DetectionStream& stream,
                           const Grammar& grammar, const EmissionModel& model,
                           const RefineConfig& config, std::uint64_t seed) {
  if (config.sweeps < 1) fail(ErrorCode::kInvalidArgument, "at least one sweep is required");
  if (!(config.t0 > 0.0) || !(config.beta > 0.0))
    fail(ErrorCode::kInvalidArgument, "annealing parameters must be positive");
  const StreamLogCumulants c = make_cumulants(stream);
  GibbsChain chain(pg, c, grammar, model, config.grammar_term, config.scoring);
  chain.make_grammatical();
  std::mt19937_64 rng(seed);
  for (int i = 0; i < config.sweeps; ++i) chain.sweep(sweep_temperature(config, i), rng);
  return chain.parse();
}

JointParse joint_parse(const DetectionStream& stream, std::span<const EventModel> events,
                       const JointParseConfig& config, std::uint64_t seed) {
  if (events.empty()) fail(ErrorCode::kInvalidArgument, "no candidate events");
  std::vector<ParseGraphSeq> parses(events.size());
  parallel_for(events.size(), config.threads, [&](std::size_t e) {
    const EventModel& ev = events[e];
    ParseGraphSeq pg = segment_stream(stream, ev.model, config.segmenter).to_parse();
    pg.event = ev.name;
    // Per-event seeds keep results independent of evaluation order.
    parses[e] = gibbs_refine(pg, stream, ev.grammar, ev.model, config.refine,
                             seed ^ (0x9e3779b97f4a7c15ull * (e + 1)));
  });
  JointParse out;
  std::size_t best = 0;
  for (std::size_t e = 0; e < parses.size(); ++e) {
    out.event_scores.push_back(parses[e].log_posterior);
    if (parses[e].log_posterior > parses[best].log_posterior) best = e;
  }
  out.event = events[best].name;
  out.parse = std::move(parses[best]);
  return out;
}

}  // namespace taog
