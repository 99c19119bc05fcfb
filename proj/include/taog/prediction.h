// include/taog/prediction.h

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

#ifndef TAOG_PREDICTION_H_
#define TAOG_PREDICTION_H_

// Future activity prediction. The grammar proposes the next sub-activities,
// the duration model says when they start, and Monte Carlo continuations of
// the current parse graph are scored against synthetic future detections.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "taog/earley.h"
#include "taog/emission.h"
#include "taog/grammar.h"
#include "taog/parse_types.h"
#include "taog/refinement.h"
#include "taog/simulator.h"

namespace taog {

/// Distribution over the terminals that may follow `prefix`, weighted by the
/// prefix likelihood of each extension and normalized. Empty when the prefix
/// is a complete sentence with no continuation. Throws kUnderivable when the
/// prefix itself is not accepted.
std::vector<ScoredSymbol> predict_next_subactivity(const Grammar& grammar, const Sentence& prefix);

/// Frames still to come for sub-activity `s` after `elapsed` frames. Total
/// durations are log-normal draws rounded to whole frames and conditioned on
/// reaching `elapsed`; after 1,000 rejected draws the answer is 1.
int sample_remaining_duration(int s, int elapsed, const EmissionModel& model, Rng& rng);

/// Longest common subsequence length.
int lcs_length(const Sentence& a, const Sentence& b);

/// Corpus sentence with the longest common subsequence with `observed`; ties
/// go to the shorter sentence, then the lexicographically smaller one.
Sentence correct_sentence(const Sentence& observed, std::span<const Sentence> corpus);

struct PredictionConfig {
  int horizon = 42;       // 3 s at 14 Hz
  int samples = 100;
  double frame_rate = 14.0;
  /// Per-frame vote over continuations (weighted by their posterior) instead
  /// of the single best continuation.
  bool marginal = false;
  int threads = 1;
  /// Observation model for the synthetic future detections.
  NoiseModel noise = NoiseModel::uniform(0.5, 0.1, 20.0);
  SegmentScoring scoring = SegmentScoring::kGeometricMean;
  /// Sentences for repairing ungrammatical parses; sampled from the grammar
  /// (`correction_corpus_size` of them) when empty.
  std::vector<Sentence> correction_corpus;
  int correction_corpus_size = 1000;

  void validate() const;
};

struct Prediction {
  /// Labels for the `horizon` frames after the parse.
  std::vector<FrameLabels> frames;
  /// Score of the chosen continuation (the best one in marginal mode).
  double score = 0.0;
  int chosen = 0;
  std::vector<double> sample_scores;
  /// Sub-activity sentence the grammar was conditioned on, after correction.
  Sentence context;
  bool corrected = false;
};

/// `current` parses frames 0..t of `stream`.
Prediction predict_labels(const ParseGraphSeq& current, const DetectionStream& stream,
                          const Grammar& grammar, const EmissionModel& model,
                          const PredictionConfig& config, std::uint64_t seed);

/// Segments frames 0..t of `stream`, refines the parse under the prefix
/// grammar term and predicts the frames after t.
struct StreamPredictor {
  StreamPredictor(const Grammar& grammar, const EmissionModel& model, SegmenterConfig segmenter,
                  RefineConfig refine, PredictionConfig config);

  /// Frames must be fed in order; `predict` covers everything appended so far.
  void append(const DetectionFrame& frame);
  Prediction predict(std::uint64_t seed) const;
  const ParseGraphSeq& last_parse() const { return last_parse_; }

 private:
  const Grammar* grammar_;
  const EmissionModel* model_;
  RefineConfig refine_;
  PredictionConfig config_;
  OnlineSegmenter segmenter_;
  DetectionStream stream_;
  mutable ParseGraphSeq last_parse_;
};

}  // namespace taog

#endif  // TAOG_PREDICTION_H_
