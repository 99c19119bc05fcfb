// include/taog/eval.h

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

#ifndef TAOG_EVAL_H_
#define TAOG_EVAL_H_

// Frame-level metrics and the end-to-end experiment: simulate a benchmark,
// induce grammars, learn label models, parse, predict and score.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "taog/induction.h"
#include "taog/parse_types.h"
#include "taog/prediction.h"
#include "taog/refinement.h"
#include "taog/segmentation.h"
#include "taog/simulator.h"

namespace taog {

/// Percentages. Macro averages run over the classes present in the truth; a
/// class that is never predicted has precision 0. F1 is the harmonic mean of
/// macro precision and macro recall.
struct ChannelScores {
  double micro = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  long samples = 0;
};

ChannelScores score_labels(std::span<const int> predicted, std::span<const int> truth, int num_classes);

struct LabelScores {
  ChannelScores subactivity, action, affordance;
};

/// Affordances are scored per object track. Throws kInvalidArgument on a
/// length or track mismatch.
LabelScores score_detection(std::span<const FrameLabels> predicted, std::span<const FrameLabels> truth,
                            const Alphabets& alphabets);

/// Averages per-evaluation-point scores.
class PredictionScorer {
 public:
  explicit PredictionScorer(const Alphabets& alphabets) : alphabets_(alphabets) {}
  /// `predicted` covers frames t+1..t+d; frames past the end of `truth` are
  /// dropped. Returns false when nothing is left to score.
  bool add(std::span<const FrameLabels> predicted, std::span<const FrameLabels> truth, int t);
  int points() const { return points_; }
  LabelScores mean() const;

 private:
  Alphabets alphabets_;
  LabelScores sum_;
  int points_ = 0;
};

/// Per-frame argmax of every channel (sub-activity left at -1).
std::vector<FrameLabels> argmax_labels(const DetectionStream& stream);

enum class EvalPoints { kBoundaries, kStride, kBoth };

/// Frames t after which prediction is evaluated: the last frame of every
/// segment but the final one and/or every `stride`-th frame, excluding the
/// last frame of the episode.
std::vector<int> evaluation_points(const ParseGraphSeq& truth, EvalPoints which, int stride);

struct ExperimentConfig {
  BenchmarkSpec benchmark;
  InductionConfig induction;
  double branch_smoothing = 0.0;
  double emission_smoothing = kDefaultSmoothing;
  /// Share of each event's episodes used to learn the label model; the rest
  /// are scored.
  double train_fraction = 0.5;
  /// Segment scoring for every stage (refinement and prediction follow the
  /// segmenter). Products of frame scores: averaged scores let one long
  /// segment absorb a whole episode once detections are noisy.
  SegmenterConfig segmenter{200, SegmentScoring::kProduct};
  RefineConfig refine{100, 2.0, 0.9, GrammarTerm::kSentence, SegmentScoring::kProduct};
  bool predict = true;
  PredictionConfig prediction;
  /// Synthetic future detections use the benchmark's noise unless set.
  bool prediction_noise_from_benchmark = true;
  EvalPoints points = EvalPoints::kBoth;
  int stride = 14;
  std::uint64_t seed = 1;
  int threads = 1;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(std::string_view text);
std::string serialize_experiment_config(const ExperimentConfig& config);

struct EpisodeResult {
  std::string id, event, recognized;
  int frames = 0;
  double raw_action = 0.0, refined_action = 0.0;  // micro accuracy, %
};

struct ExperimentReport {
  int train_episodes = 0, test_episodes = 0;
  double event_accuracy = 0.0;
  LabelScores raw, segmented, refined;
  LabelScores prediction;
  int prediction_points = 0;
  std::vector<EpisodeResult> episodes;
  std::vector<std::string> grammars;  // induced, per event

  std::string to_json(const ExperimentConfig& config) const;
  std::string to_table(const ExperimentConfig& config) const;
};

/// Stage failures are rethrown as kStage naming the stage.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Models learned from a benchmark: induced grammars and label models from
/// the training episodes of each event.
struct LearnedEvents {
  std::vector<EventModel> events;
  std::vector<std::size_t> test;  // indices into benchmark.episodes
  int train_episodes = 0;
};
LearnedEvents learn_events(const Benchmark& benchmark, const ExperimentConfig& config);

}  // namespace taog

#endif  // TAOG_EVAL_H_
