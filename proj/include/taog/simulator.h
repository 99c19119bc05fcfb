// include/taog/simulator.h

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

#ifndef TAOG_SIMULATOR_H_
#define TAOG_SIMULATOR_H_

// Synthetic episodes: a planted grammar and label model generate ground-truth
// segment labels, and a per-channel noise model turns them into detection
// distributions. Also generates random grammars for testing and whole
// benchmark datasets on disk.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taog/emission.h"
#include "taog/grammar.h"
#include "taog/parse_types.h"

namespace taog {

using Rng = std::mt19937_64;

struct NoiseChannel {
  /// Softening of the one-hot centre; 0 gives a sharp peak.
  double temperature = 0.0;
  /// Probability of replacing the true label by a uniformly drawn other label.
  double flip_rate = 0.0;
  /// Dirichlet concentration around the centre (used when temperature > 0).
  double concentration = 20.0;
};

struct NoiseModel {
  NoiseChannel action, object, affordance;

  static NoiseModel noiseless() { return {}; }
  static NoiseModel uniform(double temperature, double flip_rate, double concentration);
  /// Throws kInvalidArgument on out-of-range parameters.
  void validate() const;
};

/// Off-peak mass of a noiseless frame.
inline constexpr double kPeakSlack = 1e-4;

/// One frame's scores for a channel with `n` labels whose true label is `label`.
std::vector<double> noisy_scores(int label, int n, const NoiseChannel& channel, Rng& rng);

/// Index of the track the subject interacts with during sub-activity `s`: the
/// track whose object class is most probable under p(o|s); ties to the lowest.
int interacted_track(const EmissionModel& model, int s, std::span<const int> track_objects);

struct Episode {
  ParseGraphSeq truth;
  DetectionStream stream;
  std::vector<int> track_objects;
};

struct EpisodeConfig {
  /// Minimum number of object tracks; episodes touching more objects get more.
  int tracks = 2;
  int max_depth = kDefaultMaxDepth;
};

/// Labels for a segment of sub-activity `s`: a ~ p(a|s); the interacted track
/// draws u ~ p(u|s) restricted to non-stationary labels (when any has mass),
/// the others are `stationary` when that label exists.
Segment sample_segment_labels(const EmissionModel& model, int s, std::span<const int> track_objects,
                              int t1, int t2, Rng& rng);

/// Frame scores for labeled frames; `first_t` numbers the first frame.
DetectionStream render_stream(std::span<const FrameLabels> frames, int first_t,
                              std::span<const int> track_ids, const Alphabets& alphabets,
                              const NoiseModel& noise, Rng& rng);

Episode generate_episode(const Grammar& grammar, const EmissionModel& model, const NoiseModel& noise,
                         std::uint64_t seed, const EpisodeConfig& config = {});

/// Frames from a log-normal duration, rounded, at least 1.
int sample_duration(const Duration& d, Rng& rng);

// ---------------------------------------------------------------------------
// Planted structures

/// Alphabets sized like the household-activity setting: 10 sub-activities,
/// 10 actions, 10 objects, 12 affordances.
Alphabets benchmark_alphabets();

/// Label model with each sub-activity's (action, object, affordance) peak
/// taking `peak` of the mass; durations log-normal(mu_s, sigma) with exp(mu_s)
/// drawn from [min_frames, max_frames]. Object and affordance rows reserve
/// `companion_share` for the tracks the subject is not touching: spread over
/// all objects, and on `stationary` for affordances.
struct PlantedModelConfig {
  double peak = 0.85;
  double min_frames = 20.0;
  double max_frames = 50.0;
  double sigma = 0.3;
  double companion_share = 0.5;
};
EmissionModel planted_model(const Alphabets& alphabets, Rng& rng, const PlantedModelConfig& config = {});

/// Random non-recursive grammar over `num_terminals` terminals (named t0..)
/// with at most `max_productions` productions; nonterminals form a DAG.
struct RandomGrammarConfig {
  int num_terminals = 6;
  int max_productions = 8;
  int max_children = 3;
};
Grammar random_grammar(Rng& rng, const RandomGrammarConfig& config = {});

/// Event grammar with planted structure: `patterns` And-nodes of
/// `pattern_length` terminals, `classes` Or-nodes of `class_size` terminals and
/// a root Or over templates "P_r E_(r mod C) P_(r+1 mod K)".
struct PlantedGrammarConfig {
  int patterns = 3;
  int pattern_length = 2;
  int classes = 1;
  int class_size = 2;
  double min_branch = 0.2;
};
Grammar planted_grammar(std::span<const std::string> terminals, Rng& rng,
                        const PlantedGrammarConfig& config = {});

// ---------------------------------------------------------------------------
// Benchmark datasets

struct BenchmarkSpec {
  int events = 4;
  int episodes_per_event = 30;
  int corpus_size = 500;
  int tracks = 2;
  std::uint64_t seed = 1;
  NoiseModel noise = NoiseModel::uniform(0.5, 0.1, 20.0);
  PlantedGrammarConfig grammar;
  PlantedModelConfig model;
  /// Single-sentence grammars with one-hot label tables: a fully predictable
  /// control set.
  bool deterministic = false;
};

BenchmarkSpec load_benchmark_spec(const std::string& path);
BenchmarkSpec parse_benchmark_spec(std::string_view text);
std::string serialize_benchmark_spec(const BenchmarkSpec& spec);

struct BenchmarkEvent {
  std::string name;
  Grammar grammar;
  EmissionModel model;
  std::vector<Sentence> corpus;
};

struct BenchmarkEpisode {
  std::string id;
  std::string event;
  Episode episode;
};

struct Benchmark {
  Alphabets alphabets;
  std::vector<BenchmarkEvent> events;
  std::vector<BenchmarkEpisode> episodes;
};

Benchmark generate_benchmark(const BenchmarkSpec& spec);
/// Layout: alphabets.json, manifest.json, events/<e>/{grammar.json,model.json,
/// corpus.txt}, episodes/<id>/{stream.jsonl,truth.json}.
void write_benchmark(const Benchmark& benchmark, const BenchmarkSpec& spec, const std::string& dir);
Benchmark read_benchmark(const std::string& dir);

// Corpus files: one sentence per line, '#' starts a comment.
std::vector<Sentence> read_corpus(const std::string& path);
std::string format_corpus(std::span<const Sentence> corpus);

}  // namespace taog

#endif  // TAOG_SIMULATOR_H_
