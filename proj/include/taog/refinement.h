// include/taog/refinement.h

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

#ifndef TAOG_REFINEMENT_H_
#define TAOG_REFINEMENT_H_

// Grammar-aware relabeling of a segmented stream. Segment boundaries are fixed;
// the chain resamples each segment's action, per-object affordances and
// sub-activity under an annealed temperature and finishes with an argmax sweep.
//
// Target (log):
//   sum_k [ det(a_k, o_k, u_k) + log p(a_k|s_k) + sum_j log p(o_kj|s_k)
//           + sum_j log p(u_kj|s_k) ]
//   + sum_runs log LogNormal(|run|; s_run) + log G(s_run_1 .. s_run_R)
// Consecutive segments with the same sub-activity form one run: one
// sub-activity instance for the duration model and one grammar symbol. G is
// the prefix likelihood of the run sentence (streams that may still continue)
// or its Viterbi likelihood (complete episodes).

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "taog/earley.h"
#include "taog/emission.h"
#include "taog/grammar.h"
#include "taog/parse_types.h"
#include "taog/segmentation.h"

namespace taog {

enum class GrammarTerm { kPrefix, kSentence };

struct RefineConfig {
  int sweeps = 100;
  double t0 = 2.0;
  double beta = 0.9;
  GrammarTerm grammar_term = GrammarTerm::kPrefix;
  SegmentScoring scoring = SegmentScoring::kGeometricMean;
};

/// Temperature of sweep i; the last sweep is an argmax (temperature 0).
double sweep_temperature(const RefineConfig& config, int i);

class GibbsChain {
 public:
  GibbsChain(const ParseGraphSeq& pg, const StreamLogCumulants& cumulants, const Grammar& grammar,
             const EmissionModel& model, GrammarTerm term, SegmentScoring scoring,
             GrammarScorer* scorer = nullptr);

  int num_segments() const { return static_cast<int>(segments_.size()); }
  const std::vector<Segment>& segments() const { return segments_; }
  Segment& segment(int k) { return segments_[k]; }
  const std::vector<bool>& flagged() const { return flagged_; }

  /// Unnormalized log weights of each conditional (temperature 1).
  std::vector<double> action_weights(int k) const;
  std::vector<double> affordance_weights(int k, int track) const;
  std::vector<double> subactivity_weights(int k);

  /// Draw from a conditional raised to 1/temperature; temperature 0 takes the
  /// argmax (lowest index on ties). All -inf leaves the label unchanged.
  void resample_action(int k, double temperature, std::mt19937_64& rng);
  void resample_affordance(int k, int track, double temperature, std::mt19937_64& rng);
  void resample_subactivity(int k, double temperature, std::mt19937_64& rng);
  void sweep(double temperature, std::mt19937_64& rng);

  /// Log target for the current labels.
  double log_posterior();
  /// Log target with sub-activities replaced by `subactivities`.
  double log_target(std::span<const int> subactivities);
  ParseGraphSeq parse();

  /// If the current sub-activity sentence has zero grammar probability,
  /// relabels every segment's s with the best grammatical labeling (lattice
  /// Viterbi over the symbolic terms). Returns false when none exists.
  bool make_grammatical();

 private:
  double grammar_log(std::span<const int> subactivities);
  double symbolic(int k, int s) const;
  int draw(const std::vector<double>& logw, int current, double temperature, std::mt19937_64& rng,
           bool* all_neg_inf);

  const Grammar* grammar_;
  const EmissionModel* model_;
  EmissionLogTables tables_;
  GrammarTerm term_;
  GrammarScorer own_scorer_;
  GrammarScorer* scorer_;
  std::string event_;
  std::vector<Segment> segments_;
  std::vector<std::vector<double>> detection_;  // per-segment interval log-scores
  int action_offset_ = 0;
  std::vector<int> object_offset_, affordance_offset_;
  int num_actions_ = 0, num_affordances_ = 0;
  std::vector<bool> flagged_;
  std::vector<int> gids_;  // sub-activity id -> grammar terminal id (or -1)
};

/// Anneals from `pg` and returns the refined parse with its log target.
ParseGraphSeq gibbs_refine(const ParseGraphSeq& pg, const DetectionStream& stream,
                           const Grammar& grammar, const EmissionModel& model,
                           const RefineConfig& config, std::uint64_t seed);

struct EventModel {
  std::string name;
  Grammar grammar;
  EmissionModel model;
};

struct JointParseConfig {
  SegmenterConfig segmenter;
  RefineConfig refine{100, 2.0, 0.9, GrammarTerm::kSentence, SegmentScoring::kGeometricMean};
  int threads = 1;
};

struct JointParse {
  std::string event;
  ParseGraphSeq parse;
  /// Log posterior per candidate event, in input order.
  std::vector<double> event_scores;
};

/// Segments and refines under every candidate event and keeps the best.
JointParse joint_parse(const DetectionStream& stream, std::span<const EventModel> events,
                       const JointParseConfig& config, std::uint64_t seed);

}  // namespace taog

#endif  // TAOG_REFINEMENT_H_
