// include/taog/emission.h

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

#ifndef TAOG_EMISSION_H_
#define TAOG_EMISSION_H_

// Symbolic label model conditioned on the sub-activity: p(a|s), p(o|s), p(u|s),
// the sub-activity prior p(s) and a log-normal duration per sub-activity.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taog/grammar.h"
#include "taog/parse_types.h"

namespace taog {

struct Duration {
  double mu = 0.0;     // mean of log(frames)
  double sigma = 1.0;  // std of log(frames), > 0

  bool operator==(const Duration&) const = default;
};

/// Fallback for sub-activities without training segments.
inline const Duration kDefaultDuration{2.995732273553991, 1.0};  // log(20)
inline constexpr double kMinDurationSigma = 0.1;

struct EmissionModel {
  Alphabets alphabets;
  std::vector<std::vector<double>> actions_given_s;      // [S][A]
  std::vector<std::vector<double>> objects_given_s;      // [S][O]
  std::vector<std::vector<double>> affordances_given_s;  // [S][U]
  std::vector<double> prior_s;
  std::vector<Duration> duration;
  /// Sub-activities that had no training segments.
  std::vector<bool> defaulted;

  int num_subactivities() const { return static_cast<int>(alphabets.subactivities.size()); }

  /// Throws kNormalization / kMalformedDocument on broken tables.
  void validate() const;
  bool operator==(const EmissionModel&) const = default;
};

/// Laplace-smoothed counts; the smoothing used for inference.
inline constexpr double kDefaultSmoothing = 1.0;

/// Frequency tables per sub-activity with `smoothing` pseudo-counts. When the
/// affordance alphabet has `stationary`, p(o|s) counts only the objects of
/// tracks with another affordance (all tracks if none has one).
EmissionModel learn_emissions(std::span<const Segment> segments, const Alphabets& alphabets,
                              double smoothing = kDefaultSmoothing);

/// log p(a|s) + sum_j [log p(o_j|s) + log p(u_j|s)] + log LogNormal(duration).
double segment_prior(int a, std::span<const int> o, std::span<const int> u, int duration, int s,
                     const EmissionModel& model);
double segment_prior(const Segment& segment, const EmissionModel& model);

/// Sum of segment priors plus the log Viterbi likelihood of the sub-activity
/// sentence under `grammar`.
double parse_graph_prior(std::span<const Segment> segments, const Grammar& grammar,
                         const EmissionModel& model);

/// Sub-activity label ids translated to grammar terminal ids (-1 when absent).
std::vector<int> to_grammar_ids(std::span<const int> subactivities, const EmissionModel& model,
                                const Grammar& grammar);

/// Log tables transposed for vectorized scoring: row x holds log p(x|s) over s.
struct EmissionLogTables {
  explicit EmissionLogTables(const EmissionModel& model);

  int num_subactivities;
  std::vector<std::vector<double>> action;      // [A][S]
  std::vector<std::vector<double>> object;      // [O][S]
  std::vector<std::vector<double>> affordance;  // [U][S]
  std::vector<double> log_prior;                // [S]
  std::vector<Duration> duration;

  double log_duration(int s, int frames) const;
};

std::string serialize_model(const EmissionModel& model);
EmissionModel deserialize_model(std::string_view text);
EmissionModel load_model(const std::string& path);
void save_model(const EmissionModel& model, const std::string& path);

}  // namespace taog

#endif  // TAOG_EMISSION_H_
