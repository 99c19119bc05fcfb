// src/segmentation.cc

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

#include "taog/segmentation.h"

#include <algorithm>

#include "taog/error.h"
#include "taog/kernels.h"
#include "taog/logmath.h"

namespace taog {

SegmentInterpretation interpret_segment(const StreamLogCumulants& c, const EmissionLogTables& tables,
                                        int t1, int t2, SegmentScoring scoring,
                                        std::span<double> scratch) {
  const std::size_t w = static_cast<std::size_t>(c.width());
  const std::size_t S = static_cast<std::size_t>(tables.num_subactivities);
  std::span<double> logs = scratch.first(w);
  std::span<double> by_s = scratch.subspan(w, S);
  c.interval(t1, t2, scoring, logs);

  SegmentInterpretation r;
  r.a = static_cast<int>(kernels::argmax(logs.subspan(c.action_offset(), c.num_actions())));
  r.detection = logs[c.action_offset() + r.a];
  std::copy(tables.log_prior.begin(), tables.log_prior.end(), by_s.begin());
  kernels::add(by_s, tables.action[r.a], by_s);
  for (int j = 0; j < c.num_tracks(); ++j) {
    const int o =
        static_cast<int>(kernels::argmax(logs.subspan(c.object_offset(j), c.num_objects())));
    const int u = static_cast<int>(
        kernels::argmax(logs.subspan(c.affordance_offset(j), c.num_affordances())));
    r.o.push_back(o);
    r.u.push_back(u);
    r.detection += logs[c.object_offset(j) + o] + logs[c.affordance_offset(j) + u];
    kernels::add(by_s, tables.object[o], by_s);
    kernels::add(by_s, tables.affordance[u], by_s);
  }
  const int len = t2 - t1 + 1;
  for (std::size_t s = 0; s < S; ++s) by_s[s] += tables.log_duration(static_cast<int>(s), len);
  r.s = static_cast<int>(kernels::argmax(by_s));
  r.log_score = r.detection + by_s[r.s];
  return r;
}

SegmentInterpretation best_segment_interpretation(const DetectionStream& stream, int t1, int t2,
                                                  const EmissionModel& model,
                                                  SegmentScoring scoring) {
  if (t1 < 0 || t2 < t1 || t2 >= static_cast<int>(stream.size()))
    fail(ErrorCode::kInvalidArgument, "segment outside the stream");
  const StreamLogCumulants c = make_cumulants(stream);
  const EmissionLogTables tables(model);
  std::vector<double> scratch(static_cast<std::size_t>(c.width() + tables.num_subactivities));
  return interpret_segment(c, tables, t1, t2, scoring, scratch);
}

ParseGraphSeq Segmentation::to_parse() const {
  ParseGraphSeq pg;
  pg.segments = segments;
  pg.log_posterior = log_score;
  return pg;
}

// ---------------------------------------------------------------------------

OnlineSegmenter::OnlineSegmenter(const EmissionModel& model, SegmenterConfig config)
    : model_(&model), tables_(model), config_(config) {
  if (config_.max_segment_length < 1) fail(ErrorCode::kInvalidArgument, "max segment length must be >= 1");
  best_.push_back(0.0);
  count_.push_back(0);
  back_.push_back(0);
  starts_.emplace_back();
  last_.emplace_back();
}

void OnlineSegmenter::append(const DetectionFrame& frame) {
  if (cumulants_.width() == 0) {
    const int objects = frame.objects.empty() ? 0 : static_cast<int>(frame.objects[0].object_scores.size());
    const int affordances =
        frame.objects.empty() ? 0 : static_cast<int>(frame.objects[0].affordance_scores.size());
    if (static_cast<int>(frame.action_scores.size()) != static_cast<int>(model_->alphabets.actions.size()) ||
        (!frame.objects.empty() &&
         (objects != static_cast<int>(model_->alphabets.objects.size()) ||
          affordances != static_cast<int>(model_->alphabets.affordances.size())))) {
      fail(ErrorCode::kMalformedDocument, "stream alphabets do not match the model");
    }
    cumulants_ = StreamLogCumulants(static_cast<int>(frame.action_scores.size()), objects,
                                    affordances, static_cast<int>(frame.objects.size()));
    scratch_.assign(static_cast<std::size_t>(cumulants_.width() + tables_.num_subactivities), 0.0);
  }
  cumulants_.append(frame);
  relax(cumulants_.num_frames());
}

void OnlineSegmenter::relax(int f) {
  const int lo = std::max(0, f - config_.max_segment_length);
  double best = kNegInf;
  int best_b = -1, best_count = 0;
  SegmentInterpretation best_interp;
  std::vector<int> best_starts, cand_starts;
  for (int b = lo; b < f; ++b) {
    SegmentInterpretation interp =
        interpret_segment(cumulants_, tables_, b, f - 1, config_.scoring, scratch_);
    const double score = best_[b] + interp.log_score;
    const int count = count_[b] + 1;
    bool take = best_b < 0 || score > best;
    if (!take && score == best) {
      // Ties: fewer segments, then the lexicographically latest start vector.
      if (count != best_count) {
        take = count < best_count;
      } else {
        cand_starts = starts_[b];
        if (b > 0) cand_starts.push_back(b);
        take = cand_starts > best_starts;
      }
    }
    if (!take) continue;
    best = score;
    best_b = b;
    best_count = count;
    best_interp = std::move(interp);
    best_starts = starts_[b];
    if (b > 0) best_starts.push_back(b);
  }
  best_.push_back(best);
  count_.push_back(best_count);
  back_.push_back(best_b);
  starts_.push_back(std::move(best_starts));
  last_.push_back(std::move(best_interp));
}

Segmentation OnlineSegmenter::result() const {
  Segmentation out;
  const int T = num_frames();
  if (T == 0) return out;
  out.log_score = best_[T];
  for (int f = T; f > 0; f = back_[f]) {
    const SegmentInterpretation& r = last_[f];
    out.segments.push_back(Segment{back_[f], f - 1, r.s, r.a, r.o, r.u});
    out.segment_scores.push_back(r.log_score);
  }
  std::reverse(out.segments.begin(), out.segments.end());
  std::reverse(out.segment_scores.begin(), out.segment_scores.end());
  return out;
}

Segmentation segment_stream(const DetectionStream& stream, const EmissionModel& model,
                            const SegmenterConfig& config) {
  if (stream.empty()) fail(ErrorCode::kInvalidArgument, "cannot segment an empty stream");
  OnlineSegmenter seg(model, config);
  // Batch form: all cumulants first, then the DP sweep.
  const StreamLogCumulants c = make_cumulants(stream);
  if (c.num_actions() != static_cast<int>(model.alphabets.actions.size()) ||
      (c.num_tracks() > 0 && (c.num_objects() != static_cast<int>(model.alphabets.objects.size()) ||
                              c.num_affordances() != static_cast<int>(model.alphabets.affordances.size())))) {
    fail(ErrorCode::kMalformedDocument, "stream alphabets do not match the model");
  }
  seg.cumulants_ = c;
  seg.scratch_.assign(static_cast<std::size_t>(c.width() + seg.tables_.num_subactivities), 0.0);
  for (int f = 1; f <= c.num_frames(); ++f) seg.relax(f);
  return seg.result();
}

}  // namespace taog
