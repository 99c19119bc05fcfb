// include/taog/parse_types.h

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

#ifndef TAOG_PARSE_TYPES_H_
#define TAOG_PARSE_TYPES_H_

// Inference data model: per-frame detection distributions (the stand-in for
// detector likelihoods), labeled segments and parse-graph sequences. Frames are
// 0-based; a segment [t1, t2] is inclusive.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taog {

/// Label vocabularies. Every integer label in the inference code indexes one of
/// these lists.
struct Alphabets {
  std::vector<std::string> subactivities;
  std::vector<std::string> actions;
  std::vector<std::string> objects;
  std::vector<std::string> affordances;

  bool operator==(const Alphabets&) const = default;
};

/// Index of `label` in `alphabet`, or -1.
int index_of(std::span<const std::string> alphabet, std::string_view label);

struct ObjectDetection {
  int object_id = 0;
  std::vector<double> object_scores;
  std::vector<double> affordance_scores;
};

struct DetectionFrame {
  int t = 0;
  std::vector<double> action_scores;
  std::vector<ObjectDetection> objects;
};

using DetectionStream = std::vector<DetectionFrame>;

/// Checks categorical normalization (1e-6), alphabet sizes and that object ids
/// are identical on every frame. Throws kMalformedDocument.
void validate_stream(const DetectionStream& stream, const Alphabets& alphabets);

struct FrameLabels {
  int s = 0;
  int a = 0;
  std::vector<int> o;
  std::vector<int> u;

  bool operator==(const FrameLabels&) const = default;
};

struct Segment {
  int t1 = 0;
  int t2 = 0;
  int s = 0;
  int a = 0;
  std::vector<int> o;
  std::vector<int> u;

  int length() const { return t2 - t1 + 1; }
  FrameLabels labels() const { return FrameLabels{s, a, o, u}; }
  bool operator==(const Segment&) const = default;
};

struct ParseGraphSeq {
  std::string event;
  std::vector<Segment> segments;
  double log_posterior = 0.0;

  int num_frames() const { return segments.empty() ? 0 : segments.back().t2 + 1; }
  std::vector<FrameLabels> frame_labels() const;
  std::vector<int> subactivity_sentence() const;
};

/// Maximal runs of identical label tuples become segments starting at
/// `first_frame`.
std::vector<Segment> merge_frames(std::span<const FrameLabels> frames, int first_frame = 0);
std::vector<FrameLabels> expand_segments(std::span<const Segment> segments);

enum class SegmentScoring {
  /// Renormalized per-label geometric mean of frame scores.
  kGeometricMean,
  /// Sum of frame log-scores (the literal product of detections).
  kProduct,
};

/// Scores below this floor are clamped before taking logs.
inline constexpr double kScoreFloor = 1e-12;

/// Averaged segment-level distributions over [t1, t2].
struct SegmentScores {
  std::vector<double> action;
  std::vector<std::vector<double>> objects;
  std::vector<std::vector<double>> affordances;
};

SegmentScores segment_average_scores(const DetectionStream& stream, int t1, int t2);

/// Prefix sums of clamped log-scores for O(width) interval queries. Channels are
/// laid out as [actions | object 0 | affordance 0 | object 1 | ...]. Frames can
/// be appended one at a time.
class StreamLogCumulants {
 public:
  StreamLogCumulants() = default;
  StreamLogCumulants(int num_actions, int num_objects, int num_affordances, int num_tracks);

  void append(const DetectionFrame& frame);
  int num_frames() const { return frames_; }
  int num_tracks() const { return tracks_; }
  int width() const { return width_; }

  /// Per-label segment log-scores over [t1, t2] written into `out` (width()).
  /// Geometric mean: log of the renormalized mean; product: summed logs.
  void interval(int t1, int t2, SegmentScoring mode, std::span<double> out) const;

  int action_offset() const { return 0; }
  int object_offset(int track) const { return actions_ + track * (objects_ + affordances_); }
  int affordance_offset(int track) const { return object_offset(track) + objects_; }
  int num_actions() const { return actions_; }
  int num_objects() const { return objects_; }
  int num_affordances() const { return affordances_; }

 private:
  void normalize(std::span<double> block) const;

  int actions_ = 0, objects_ = 0, affordances_ = 0, tracks_ = 0, width_ = 0;
  int frames_ = 0;
  std::vector<double> cum_;  // (frames + 1) x width
  std::vector<double> row_;
};

StreamLogCumulants make_cumulants(const DetectionStream& stream);

// Line-delimited stream files: one JSON object per frame.
DetectionStream read_stream(std::istream& in);
DetectionStream load_stream(const std::string& path);
void write_stream(std::ostream& out, const DetectionStream& stream);
void save_stream(const DetectionStream& stream, const std::string& path);

// Ground-truth / parse documents with string labels.
std::string serialize_parse(const ParseGraphSeq& pg, const Alphabets& alphabets);
ParseGraphSeq deserialize_parse(std::string_view text, const Alphabets& alphabets);
ParseGraphSeq load_parse(const std::string& path, const Alphabets& alphabets);
void save_parse(const ParseGraphSeq& pg, const Alphabets& alphabets, const std::string& path);

std::string serialize_alphabets(const Alphabets& alphabets);
Alphabets deserialize_alphabets(std::string_view text);

}  // namespace taog

#endif  // TAOG_PARSE_TYPES_H_
