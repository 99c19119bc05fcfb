// include/taog/segmentation.h

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

#ifndef TAOG_SEGMENTATION_H_
#define TAOG_SEGMENTATION_H_

// Bottom-up labeling of a detection stream: each candidate interval gets its
// detection argmax labels (a, o, u) and then the best sub-activity s; a forward
// DP over end frames picks the segmentation maximizing the summed segment
// scores. The online segmenter extends the same DP one frame at a time.

#include <span>
#include <vector>

#include "taog/emission.h"
#include "taog/parse_types.h"

namespace taog {

struct SegmenterConfig {
  int max_segment_length = 200;
  SegmentScoring scoring = SegmentScoring::kGeometricMean;
};

struct SegmentInterpretation {
  int a = 0;
  std::vector<int> o;
  std::vector<int> u;
  int s = 0;
  /// Detection part: log-scores of the chosen a, o_j, u_j.
  double detection = 0.0;
  /// detection + max_s [log p(a,o,u|s) + log p(|gamma| | s) + log p(s)]
  double log_score = 0.0;
};

/// Labels one interval. `scratch` must hold cumulants.width() plus
/// tables.num_subactivities doubles.
SegmentInterpretation interpret_segment(const StreamLogCumulants& cumulants,
                                        const EmissionLogTables& tables, int t1, int t2,
                                        SegmentScoring scoring, std::span<double> scratch);

SegmentInterpretation best_segment_interpretation(const DetectionStream& stream, int t1, int t2,
                                                  const EmissionModel& model,
                                                  SegmentScoring scoring = SegmentScoring::kGeometricMean);

/// Per-segment scores alongside the labeled segmentation.
struct Segmentation {
  std::vector<Segment> segments;
  std::vector<double> segment_scores;
  double log_score = 0.0;

  ParseGraphSeq to_parse() const;
};

Segmentation segment_stream(const DetectionStream& stream, const EmissionModel& model,
                            const SegmenterConfig& config = {});

/// Incremental form of segment_stream; after every append() the result equals
/// the batch segmentation of the frames seen so far.
class OnlineSegmenter {
 public:
  OnlineSegmenter(const EmissionModel& model, SegmenterConfig config = {});

  void append(const DetectionFrame& frame);
  int num_frames() const { return static_cast<int>(best_.size()) - 1; }
  Segmentation result() const;
  /// Best score of a segmentation of the first f frames.
  double prefix_score(int f) const { return best_[f]; }

 private:
  friend Segmentation segment_stream(const DetectionStream&, const EmissionModel&,
                                     const SegmenterConfig&);
  void relax(int f);

  const EmissionModel* model_;
  EmissionLogTables tables_;
  SegmenterConfig config_;
  StreamLogCumulants cumulants_;
  std::vector<double> scratch_;

  // DP over end frames f = 0..T: best_[f] is the best score of frames [0, f).
  std::vector<double> best_;
  std::vector<int> count_;                // segments on the best path
  std::vector<int> back_;                 // start frame of the last segment
  std::vector<std::vector<int>> starts_;  // segment start frames after 0
  std::vector<SegmentInterpretation> last_;
};

}  // namespace taog

#endif  // TAOG_SEGMENTATION_H_
