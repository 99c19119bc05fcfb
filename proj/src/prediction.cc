// src/prediction.cc

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

#include "taog/prediction.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "taog/error.h"
#include "taog/logmath.h"
#include "taog/parallel.h"

namespace taog {

std::vector<ScoredSymbol> predict_next_subactivity(const Grammar& grammar, const Sentence& prefix) {
  const EarleyChart chart = parse_prefix(grammar, prefix);
  if (!chart.accepted()) fail(ErrorCode::kUnderivable, "prefix is not derivable by the grammar");
  std::vector<ScoredSymbol> out = next_symbols(chart);
  double total = 0.0;
  for (const auto& s : out) total += s.score;
  if (total <= 0.0) return {};
  for (auto& s : out) s.score /= total;
  return out;
}

int sample_remaining_duration(int s, int elapsed, const EmissionModel& model, Rng& rng) {
  if (elapsed < 0) fail(ErrorCode::kInvalidArgument, "elapsed frames must be non-negative");
  const Duration& d = model.duration.at(static_cast<std::size_t>(s));
  std::normal_distribution<double> z(d.mu, d.sigma);
  for (int i = 0; i < 1000; ++i) {
    const double total = std::exp(z(rng));
    if (total > 1e9) continue;
    const long frames = std::lround(total);
    if (frames >= elapsed) return static_cast<int>(frames - elapsed);
  }
  return 1;
}

int lcs_length(const Sentence& a, const Sentence& b) {
  std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Sentence correct_sentence(const Sentence& observed, std::span<const Sentence> corpus) {
  if (corpus.empty()) fail(ErrorCode::kInvalidArgument, "correction corpus is empty");
  const Sentence* best = nullptr;
  int best_lcs = -1;
  for (const auto& c : corpus) {
    const int l = lcs_length(observed, c);
    if (best == nullptr || l > best_lcs ||
        (l == best_lcs && (c.size() < best->size() || (c.size() == best->size() && c < *best)))) {
      best = &c;
      best_lcs = l;
    }
  }
  return *best;
}

void PredictionConfig::validate() const {
  if (horizon < 1) fail(ErrorCode::kInvalidArgument, "prediction horizon must be >= 1");
  if (samples < 1) fail(ErrorCode::kInvalidArgument, "at least one continuation is required");
  if (!(frame_rate > 0.0)) fail(ErrorCode::kInvalidArgument, "frame rate must be positive");
  if (correction_corpus.empty() && correction_corpus_size < 1)
    fail(ErrorCode::kInvalidArgument, "correction corpus size must be >= 1");
  noise.validate();
}

namespace {

double log_survival(const Duration& d, int frames) {
  const double z = (std::log(static_cast<double>(frames)) - d.mu) / d.sigma;
  return std::log(0.5 * std::erfc(z / std::sqrt(2.0)));
}

struct FutureSegment {
  int t1 = 0, t2 = 0;  // within the horizon
  int s = -1, a = 0;
  std::vector<int> o, u;
};

struct Continuation {
  std::vector<FrameLabels> frames;
  double score = kNegInf;
};

// Caches grammar queries shared by concurrent continuations.
class GrammarOracle {
 public:
  explicit GrammarOracle(const Grammar& g) : g_(g) {}

  std::vector<ScoredSymbol> next(const Sentence& prefix) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = next_.find(prefix);
      if (it != next_.end()) return it->second;
    }
    auto v = predict_next_subactivity(g_, prefix);
    std::lock_guard<std::mutex> lock(mu_);
    return next_.emplace(prefix, std::move(v)).first->second;
  }

  double prefix_log(const Sentence& prefix) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = prefix_.find(prefix);
      if (it != prefix_.end()) return it->second;
    }
    double v = kNegInf;
    bool known = true;
    for (const auto& w : prefix) known = known && g_.id(w) >= 0 && g_.terminal(g_.id(w));
    if (known) v = prefix_likelihood(g_, prefix).log_probability;
    std::lock_guard<std::mutex> lock(mu_);
    return prefix_.emplace(prefix, v).first->second;
  }

 private:
  const Grammar& g_;
  std::mutex mu_;
  std::map<Sentence, std::vector<ScoredSymbol>> next_;
  std::map<Sentence, double> prefix_;
};

int draw_symbol(const std::vector<ScoredSymbol>& dist, Rng& rng) {
  std::vector<double> w;
  for (const auto& s : dist) w.push_back(s.score);
  return std::discrete_distribution<int>(w.begin(), w.end())(rng);
}

}  // namespace

Prediction predict_labels(const ParseGraphSeq& current, const DetectionStream& stream,
                          const Grammar& grammar, const EmissionModel& model,
                          const PredictionConfig& config, std::uint64_t seed) {
  config.validate();
  model.validate();
  const Alphabets& ab = model.alphabets;
  const EmissionLogTables tables(model);
  const int d = config.horizon;
  const int S = static_cast<int>(ab.subactivities.size());

  // Tracks and their object classes.
  std::vector<int> track_ids, track_objects;
  if (!stream.empty()) {
    for (const auto& obj : stream.back().objects) {
      track_ids.push_back(obj.object_id);
      track_objects.push_back(static_cast<int>(
          std::max_element(obj.object_scores.begin(), obj.object_scores.end()) - obj.object_scores.begin()));
    }
  }
  const Segment* last = current.segments.empty() ? nullptr : &current.segments.back();
  if (last != nullptr) {
    if (last->o.size() != track_ids.size())
      fail(ErrorCode::kInvalidArgument, "parse and stream disagree on object tracks");
    track_objects = last->o;
  }

  // Current run and the grammar context.
  int elapsed = 0;
  Prediction out;
  for (std::size_t k = 0; k < current.segments.size(); ++k) {
    const int s = current.segments[k].s;
    if (s < 0 || s >= S) fail(ErrorCode::kInvalidArgument, "sub-activity label out of range");
    if (k == 0 || current.segments[k - 1].s != s) out.context.push_back(ab.subactivities[s]);
  }
  if (last != nullptr)
    for (auto it = current.segments.rbegin(); it != current.segments.rend() && it->s == last->s; ++it)
      elapsed += it->length();

  GrammarOracle oracle(grammar);
  if (!out.context.empty() && oracle.prefix_log(out.context) == kNegInf) {
    std::vector<Sentence> sampled;
    std::span<const Sentence> corpus = config.correction_corpus;
    if (corpus.empty()) {
      Rng crng(split_seed(seed, ~0ull));
      for (int i = 0; i < config.correction_corpus_size; ++i) sampled.push_back(sample_sentence(grammar, crng));
      corpus = sampled;
    }
    Sentence fixed = correct_sentence(out.context, corpus);
    fixed.resize(std::min(fixed.size(), out.context.size()));
    out.context = std::move(fixed);
    out.corrected = true;
  }

  const int null_s = index_of(ab.subactivities, "null");
  const int null_a = std::max(0, index_of(ab.actions, "null"));
  const int stationary = index_of(ab.affordances, "stationary");

  std::vector<Continuation> conts(static_cast<std::size_t>(config.samples));
  parallel_for(conts.size(), config.threads, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    std::vector<FutureSegment> segs;
    double score = 0.0;
    int covered = 0;
    Sentence sentence = out.context;
    if (last != nullptr) {
      const int r = sample_remaining_duration(last->s, elapsed, model, rng);
      if (r <= d) {
        score += tables.log_duration(last->s, elapsed + r);
      } else {
        score += log_survival(model.duration[last->s], elapsed + d);
      }
      if (r > 0) segs.push_back(FutureSegment{0, std::min(r, d) - 1, last->s, last->a, last->o, last->u});
      covered = std::min(r, d);
    }
    while (covered < d) {
      const auto dist = oracle.next(sentence);
      if (dist.empty()) {
        // Event complete: idle padding.
        FutureSegment pad{covered, d - 1, null_s >= 0 ? null_s : (last != nullptr ? last->s : 0), null_a,
                          track_objects, {}};
        pad.u.assign(track_objects.size(), std::max(0, stationary));
        segs.push_back(std::move(pad));
        break;
      }
      const std::string& name = dist[draw_symbol(dist, rng)].symbol;
      const int s = index_of(ab.subactivities, name);
      if (s < 0) fail(ErrorCode::kUndefinedSymbol, "grammar terminal '" + name + "' is not a sub-activity");
      sentence.push_back(name);
      const int len = sample_duration(model.duration[s], rng);
      const int take = std::min(len, d - covered);
      Segment labels = sample_segment_labels(model, s, track_objects, covered, covered + take - 1, rng);
      score += take == len ? tables.log_duration(s, len) : log_survival(model.duration[s], take);
      score += tables.action[labels.a][s];
      for (std::size_t j = 0; j < labels.o.size(); ++j)
        score += tables.object[labels.o[j]][s] + tables.affordance[labels.u[j]][s];
      segs.push_back(FutureSegment{covered, covered + take - 1, s, labels.a, labels.o, labels.u});
      covered += take;
    }
    if (!sentence.empty()) score += oracle.prefix_log(sentence);

    Continuation& c = conts[i];
    for (const auto& seg : segs)
      for (int t = seg.t1; t <= seg.t2; ++t) c.frames.push_back(FrameLabels{seg.s, seg.a, seg.o, seg.u});

    // Synthetic future detections for this continuation.
    const DetectionStream future = render_stream(c.frames, 0, track_ids, ab, config.noise, rng);
    const StreamLogCumulants cum = make_cumulants(future);
    std::vector<double> logs(static_cast<std::size_t>(cum.width()));
    for (const auto& seg : segs) {
      cum.interval(seg.t1, seg.t2, config.scoring, logs);
      score += logs[cum.action_offset() + seg.a];
      for (std::size_t j = 0; j < seg.o.size(); ++j)
        score += logs[cum.object_offset(static_cast<int>(j)) + seg.o[j]] +
                 logs[cum.affordance_offset(static_cast<int>(j)) + seg.u[j]];
    }
    c.score = score;
  });

  int best = 0;
  for (std::size_t i = 0; i < conts.size(); ++i) {
    out.sample_scores.push_back(conts[i].score);
    if (conts[i].score > conts[best].score) best = static_cast<int>(i);
  }
  out.chosen = best;
  out.score = conts[best].score;
  if (!config.marginal || conts[best].score == kNegInf) {
    out.frames = conts[best].frames;
    return out;
  }

  // Posterior-weighted vote per frame and channel; ties to the lowest label.
  std::vector<double> w(conts.size());
  for (std::size_t i = 0; i < conts.size(); ++i) w[i] = std::exp(conts[i].score - out.score);
  auto vote = [&](int n, auto get) {
    std::vector<double> tally(static_cast<std::size_t>(n), 0.0);
    for (std::size_t i = 0; i < conts.size(); ++i) tally[get(conts[i])] += w[i];
    return static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
  };
  const int A = static_cast<int>(ab.actions.size()), U = static_cast<int>(ab.affordances.size());
  for (int t = 0; t < d; ++t) {
    FrameLabels f;
    f.s = vote(S, [t](const Continuation& c) { return c.frames[t].s; });
    f.a = vote(A, [t](const Continuation& c) { return c.frames[t].a; });
    f.o = conts[best].frames[t].o;
    for (std::size_t j = 0; j < f.o.size(); ++j)
      f.u.push_back(vote(U, [t, j](const Continuation& c) { return c.frames[t].u[j]; }));
    out.frames.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------

StreamPredictor::StreamPredictor(const Grammar& grammar, const EmissionModel& model,
                                 SegmenterConfig segmenter, RefineConfig refine, PredictionConfig config)
    : grammar_(&grammar),
      model_(&model),
      refine_(refine),
      config_(std::move(config)),
      segmenter_(model, segmenter) {
  refine_.grammar_term = GrammarTerm::kPrefix;
  config_.validate();
}

void StreamPredictor::append(const DetectionFrame& frame) {
  segmenter_.append(frame);
  stream_.push_back(frame);
}

Prediction StreamPredictor::predict(std::uint64_t seed) const {
  if (stream_.empty()) {
    last_parse_ = ParseGraphSeq{};
  } else {
    last_parse_ = gibbs_refine(segmenter_.result().to_parse(), stream_, *grammar_, *model_, refine_, seed);
  }
  return predict_labels(last_parse_, stream_, *grammar_, *model_, config_, split_seed(seed, 0x5eed));
}

}  // namespace taog
