// src/eval.cc

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

#include "taog/eval.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "io_util.h"
#include "json.hpp"
#include "taog/emission.h"
#include "taog/error.h"
#include "taog/parallel.h"

namespace taog {

using nlohmann::json;
using nlohmann::ordered_json;

ChannelScores score_labels(std::span<const int> pred, std::span<const int> truth, int num_classes) {
  if (pred.size() != truth.size()) fail(ErrorCode::kInvalidArgument, "prediction and truth lengths differ");
  ChannelScores out;
  out.samples = static_cast<long>(truth.size());
  if (truth.empty()) return out;
  std::vector<long> tp(num_classes, 0), predicted(num_classes, 0), actual(num_classes, 0);
  long correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes) fail(ErrorCode::kInvalidArgument, "truth label out of range");
    ++actual[truth[i]];
    if (pred[i] >= 0 && pred[i] < num_classes) ++predicted[pred[i]];
    if (pred[i] == truth[i]) {
      ++correct;
      ++tp[truth[i]];
    }
  }
  out.micro = 100.0 * static_cast<double>(correct) / static_cast<double>(truth.size());
  int present = 0;
  for (int c = 0; c < num_classes; ++c) {
    if (actual[c] == 0) continue;
    ++present;
    out.macro_recall += static_cast<double>(tp[c]) / static_cast<double>(actual[c]);
    if (predicted[c] > 0) out.macro_precision += static_cast<double>(tp[c]) / static_cast<double>(predicted[c]);
  }
  out.macro_precision *= 100.0 / present;
  out.macro_recall *= 100.0 / present;
  const double pr = out.macro_precision + out.macro_recall;
  out.macro_f1 = pr > 0.0 ? 2.0 * out.macro_precision * out.macro_recall / pr : 0.0;
  return out;
}

LabelScores score_detection(std::span<const FrameLabels> pred, std::span<const FrameLabels> truth,
                            const Alphabets& ab) {
  if (pred.size() != truth.size()) fail(ErrorCode::kInvalidArgument, "prediction and truth lengths differ");
  std::vector<int> ps, ts, pa, ta, pu, tu;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (pred[i].u.size() != truth[i].u.size()) fail(ErrorCode::kInvalidArgument, "object tracks differ");
    ps.push_back(pred[i].s);
    ts.push_back(truth[i].s);
    pa.push_back(pred[i].a);
    ta.push_back(truth[i].a);
    pu.insert(pu.end(), pred[i].u.begin(), pred[i].u.end());
    tu.insert(tu.end(), truth[i].u.begin(), truth[i].u.end());
  }
  LabelScores out;
  out.subactivity = score_labels(ps, ts, static_cast<int>(ab.subactivities.size()));
  out.action = score_labels(pa, ta, static_cast<int>(ab.actions.size()));
  out.affordance = score_labels(pu, tu, static_cast<int>(ab.affordances.size()));
  return out;
}

namespace {

void accumulate(ChannelScores& sum, const ChannelScores& x) {
  sum.micro += x.micro;
  sum.macro_precision += x.macro_precision;
  sum.macro_recall += x.macro_recall;
  sum.macro_f1 += x.macro_f1;
  sum.samples += x.samples;
}

ChannelScores divided(ChannelScores x, int n) {
  if (n == 0) return x;
  x.micro /= n;
  x.macro_precision /= n;
  x.macro_recall /= n;
  x.macro_f1 /= n;
  return x;
}

}  // namespace

bool PredictionScorer::add(std::span<const FrameLabels> predicted, std::span<const FrameLabels> truth, int t) {
  if (predicted.empty()) fail(ErrorCode::kInvalidArgument, "empty prediction horizon");
  if (t < 0) fail(ErrorCode::kInvalidArgument, "evaluation frame must be non-negative");
  const std::size_t first = static_cast<std::size_t>(t) + 1;
  if (first >= truth.size()) return false;
  const std::size_t n = std::min(predicted.size(), truth.size() - first);
  const LabelScores s = score_detection(predicted.first(n), truth.subspan(first, n), alphabets_);
  accumulate(sum_.subactivity, s.subactivity);
  accumulate(sum_.action, s.action);
  accumulate(sum_.affordance, s.affordance);
  ++points_;
  return true;
}

LabelScores PredictionScorer::mean() const {
  return LabelScores{divided(sum_.subactivity, points_), divided(sum_.action, points_),
                     divided(sum_.affordance, points_)};
}

std::vector<FrameLabels> argmax_labels(const DetectionStream& stream) {
  auto argmax = [](const std::vector<double>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  };
  std::vector<FrameLabels> out;
  for (const auto& f : stream) {
    FrameLabels l{-1, argmax(f.action_scores), {}, {}};
    for (const auto& o : f.objects) {
      l.o.push_back(argmax(o.object_scores));
      l.u.push_back(argmax(o.affordance_scores));
    }
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<int> evaluation_points(const ParseGraphSeq& truth, EvalPoints which, int stride) {
  if (stride < 1) fail(ErrorCode::kInvalidArgument, "evaluation stride must be >= 1");
  const int T = truth.num_frames();
  std::set<int> pts;
  if (which != EvalPoints::kStride)
    for (std::size_t k = 0; k + 1 < truth.segments.size(); ++k) pts.insert(truth.segments[k].t2);
  if (which != EvalPoints::kBoundaries)
    for (int t = stride - 1; t < T - 1; t += stride) pts.insert(t);
  pts.erase(T - 1);
  return {pts.begin(), pts.end()};
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

const char* points_name(EvalPoints p) {
  switch (p) {
    case EvalPoints::kBoundaries: return "boundaries";
    case EvalPoints::kStride: return "stride";
    case EvalPoints::kBoth: return "both";
  }
  return "both";
}

const char* scoring_name(SegmentScoring s) {
  return s == SegmentScoring::kProduct ? "product" : "geometric_mean";
}

SegmentScoring scoring_from(const std::string& s) {
  if (s == "product") return SegmentScoring::kProduct;
  if (s == "geometric_mean") return SegmentScoring::kGeometricMean;
  fail(ErrorCode::kMalformedDocument, "unknown segment scoring '" + s + "'");
}

EvalPoints points_from(const std::string& s) {
  if (s == "boundaries") return EvalPoints::kBoundaries;
  if (s == "stride") return EvalPoints::kStride;
  if (s == "both") return EvalPoints::kBoth;
  fail(ErrorCode::kMalformedDocument, "unknown evaluation points '" + s + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig c;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) fail(ErrorCode::kMalformedDocument, "experiment config must be an object");
    if (doc.contains("benchmark")) c.benchmark = parse_benchmark_spec(doc["benchmark"].dump());
    if (doc.contains("induction")) {
      const auto& i = doc["induction"];
      c.induction.eta = i.value("eta", c.induction.eta);
      c.induction.alpha = i.value("alpha", c.induction.alpha);
      c.induction.context_size = i.value("context_size", c.induction.context_size);
      c.induction.coverage = i.value("coverage", c.induction.coverage);
    }
    c.branch_smoothing = doc.value("branch_smoothing", c.branch_smoothing);
    c.emission_smoothing = doc.value("emission_smoothing", c.emission_smoothing);
    c.train_fraction = doc.value("train_fraction", c.train_fraction);
    if (doc.contains("segmenter")) {
      const auto& s = doc["segmenter"];
      c.segmenter.max_segment_length = s.value("max_segment_length", c.segmenter.max_segment_length);
      c.segmenter.scoring = scoring_from(s.value("scoring", std::string(scoring_name(c.segmenter.scoring))));
    }
    c.refine.scoring = c.segmenter.scoring;
    if (doc.contains("refine")) {
      const auto& r = doc["refine"];
      c.refine.sweeps = r.value("sweeps", c.refine.sweeps);
      c.refine.t0 = r.value("t0", c.refine.t0);
      c.refine.beta = r.value("beta", c.refine.beta);
    }
    c.predict = doc.value("predict", c.predict);
    if (doc.contains("prediction")) {
      const auto& p = doc["prediction"];
      c.prediction.horizon = p.value("horizon", c.prediction.horizon);
      c.prediction.samples = p.value("samples", c.prediction.samples);
      c.prediction.frame_rate = p.value("frame_rate", c.prediction.frame_rate);
      c.prediction.marginal = p.value("marginal", c.prediction.marginal);
      c.prediction.correction_corpus_size = p.value("correction_corpus_size", c.prediction.correction_corpus_size);
      const std::string noise = p.value("noise", std::string("benchmark"));
      if (noise == "benchmark") {
        c.prediction_noise_from_benchmark = true;
      } else if (noise == "noiseless") {
        c.prediction_noise_from_benchmark = false;
        c.prediction.noise = NoiseModel::noiseless();
      } else {
        fail(ErrorCode::kMalformedDocument, "prediction noise must be \"benchmark\" or \"noiseless\"");
      }
      c.points = points_from(p.value("points", std::string(points_name(c.points))));
      c.stride = p.value("stride", c.stride);
    }
    c.prediction.scoring = c.segmenter.scoring;
    c.seed = doc.value("seed", c.seed);
    c.threads = doc.value("threads", c.threads);
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedDocument, std::string("experiment config: ") + e.what());
  }
  c.induction.validate();
  c.prediction.validate();
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0))
    fail(ErrorCode::kInvalidArgument, "train fraction must be in (0, 1)");
  if (c.stride < 1) fail(ErrorCode::kInvalidArgument, "evaluation stride must be >= 1");
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(internal::read_file(path, "experiment config"));
}

namespace {

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json doc;
  doc["benchmark"] = ordered_json::parse(serialize_benchmark_spec(c.benchmark));
  doc["induction"] = ordered_json{{"eta", c.induction.eta},
                                  {"alpha", c.induction.alpha},
                                  {"context_size", c.induction.context_size},
                                  {"coverage", c.induction.coverage}};
  doc["branch_smoothing"] = c.branch_smoothing;
  doc["emission_smoothing"] = c.emission_smoothing;
  doc["train_fraction"] = c.train_fraction;
  doc["segmenter"] = ordered_json{{"max_segment_length", c.segmenter.max_segment_length},
                                  {"scoring", scoring_name(c.segmenter.scoring)}};
  doc["refine"] = ordered_json{{"sweeps", c.refine.sweeps}, {"t0", c.refine.t0}, {"beta", c.refine.beta}};
  doc["predict"] = c.predict;
  doc["prediction"] = ordered_json{{"horizon", c.prediction.horizon},
                                   {"samples", c.prediction.samples},
                                   {"frame_rate", c.prediction.frame_rate},
                                   {"marginal", c.prediction.marginal},
                                   {"correction_corpus_size", c.prediction.correction_corpus_size},
                                   {"noise", c.prediction_noise_from_benchmark ? "benchmark" : "noiseless"},
                                   {"points", points_name(c.points)},
                                   {"stride", c.stride}};
  doc["seed"] = c.seed;
  doc["threads"] = c.threads;
  return doc;
}

}  // namespace

std::string serialize_experiment_config(const ExperimentConfig& c) { return config_json(c).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Experiment

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kStage) throw;
    fail(ErrorCode::kStage, std::string("stage '") + name + "': " + e.what());
  }
}

ordered_json channel_json(const ChannelScores& c) {
  return ordered_json{{"micro", c.micro},
                      {"macro_precision", c.macro_precision},
                      {"macro_recall", c.macro_recall},
                      {"macro_f1", c.macro_f1},
                      {"samples", c.samples}};
}

ordered_json scores_json(const LabelScores& s) {
  return ordered_json{{"subactivity", channel_json(s.subactivity)},
                      {"action", channel_json(s.action)},
                      {"affordance", channel_json(s.affordance)}};
}

std::string protocol(const ExperimentConfig& c) {
  std::string p = "detection: frame labels pooled over test episodes; prediction: next " +
                  std::to_string(c.prediction.horizon) + " frames scored after ";
  switch (c.points) {
    case EvalPoints::kBoundaries: p += "the last frame of every segment"; break;
    case EvalPoints::kStride: p += "every " + std::to_string(c.stride) + "th frame"; break;
    case EvalPoints::kBoth:
      p += "the last frame of every segment and every " + std::to_string(c.stride) + "th frame";
      break;
  }
  p += ", truncated at the episode end, averaged over evaluation points; prediction conditions on the "
       "true event's learned models";
  return p;
}

}  // namespace

LearnedEvents learn_events(const Benchmark& b, const ExperimentConfig& c) {
  LearnedEvents out;
  for (const auto& ev : b.events) {
    std::vector<std::size_t> eps;
    for (std::size_t i = 0; i < b.episodes.size(); ++i)
      if (b.episodes[i].event == ev.name) eps.push_back(i);
    const std::size_t train = std::min(
        eps.size(), static_cast<std::size_t>(std::ceil(c.train_fraction * static_cast<double>(eps.size()))));
    std::vector<Segment> segments;
    for (std::size_t k = 0; k < train; ++k) {
      const auto& truth = b.episodes[eps[k]].episode.truth.segments;
      segments.insert(segments.end(), truth.begin(), truth.end());
    }
    out.train_episodes += static_cast<int>(train);
    out.test.insert(out.test.end(), eps.begin() + static_cast<long>(train), eps.end());

    const Grammar grammar = stage("induce", [&] {
      const Corpus corpus{ev.name, ev.corpus};
      return estimate_branch_probabilities(induce(corpus, c.induction), corpus.sentences, c.branch_smoothing);
    });
    const EmissionModel model = stage("learn", [&] {
      if (segments.empty()) fail(ErrorCode::kInvalidArgument, "event '" + ev.name + "' has no training episodes");
      return learn_emissions(segments, b.alphabets, c.emission_smoothing);
    });
    out.events.push_back(EventModel{ev.name, grammar, model});
  }
  std::sort(out.test.begin(), out.test.end());
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& c) {
  const Benchmark b = stage("simulate", [&] { return generate_benchmark(c.benchmark); });
  const LearnedEvents learned = learn_events(b, c);
  ExperimentReport report;
  report.train_episodes = learned.train_episodes;
  report.test_episodes = static_cast<int>(learned.test.size());
  for (const auto& ev : learned.events) report.grammars.push_back(serialize_grammar(ev.grammar));

  struct Work {
    EpisodeResult result;
    std::vector<FrameLabels> truth, raw, segmented, refined;
    PredictionScorer scorer;
  };
  std::vector<Work> work;
  for (std::size_t i = 0; i < learned.test.size(); ++i) work.push_back(Work{{}, {}, {}, {}, {}, PredictionScorer(b.alphabets)});

  JointParseConfig jp_cfg;
  jp_cfg.segmenter = c.segmenter;
  jp_cfg.refine = c.refine;
  jp_cfg.refine.grammar_term = GrammarTerm::kSentence;
  jp_cfg.refine.scoring = c.segmenter.scoring;
  RefineConfig refine = c.refine;
  refine.scoring = c.segmenter.scoring;
  PredictionConfig pc = c.prediction;
  pc.scoring = c.segmenter.scoring;
  if (c.prediction_noise_from_benchmark) pc.noise = c.benchmark.deterministic ? NoiseModel::noiseless() : c.benchmark.noise;
  pc.threads = 1;

  parallel_for(work.size(), c.threads, [&](std::size_t w) {
    const BenchmarkEpisode& ep = b.episodes[learned.test[w]];
    Work& out = work[w];
    out.truth = ep.episode.truth.frame_labels();
    out.raw = argmax_labels(ep.episode.stream);
    const std::uint64_t seed = split_seed(c.seed, learned.test[w]);
    const JointParse jp = stage("parse", [&] { return joint_parse(ep.episode.stream, learned.events, jp_cfg, seed); });
    std::size_t chosen = 0;
    for (std::size_t e = 0; e < learned.events.size(); ++e)
      if (learned.events[e].name == jp.event) chosen = e;
    out.segmented = stage("segment", [&] {
      return segment_stream(ep.episode.stream, learned.events[chosen].model, c.segmenter).to_parse().frame_labels();
    });
    out.refined = jp.parse.frame_labels();
    out.result = EpisodeResult{ep.id, ep.event, jp.event, static_cast<int>(out.truth.size()), 0.0, 0.0};
    out.result.raw_action = score_detection(out.raw, out.truth, b.alphabets).action.micro;
    out.result.refined_action = score_detection(out.refined, out.truth, b.alphabets).action.micro;
    if (!c.predict) return;

    std::size_t truth_event = 0;
    for (std::size_t e = 0; e < learned.events.size(); ++e)
      if (learned.events[e].name == ep.event) truth_event = e;
    stage("predict", [&] {
      StreamPredictor predictor(learned.events[truth_event].grammar, learned.events[truth_event].model, c.segmenter,
                                refine, pc);
      const std::vector<int> points = evaluation_points(ep.episode.truth, c.points, c.stride);
      std::size_t next = 0;
      for (int t = 0; t < static_cast<int>(ep.episode.stream.size()) && next < points.size(); ++t) {
        predictor.append(ep.episode.stream[t]);
        if (t != points[next]) continue;
        ++next;
        const Prediction p = predictor.predict(split_seed(seed, static_cast<std::uint64_t>(t)));
        out.scorer.add(p.frames, out.truth, t);
      }
      return 0;
    });
  });

  return stage("score", [&] {
    std::vector<FrameLabels> truth, raw, segmented, refined;
    int correct_events = 0;
    PredictionScorer pooled(b.alphabets);
    LabelScores sum;
    int points = 0;
    for (const auto& w : work) {
      truth.insert(truth.end(), w.truth.begin(), w.truth.end());
      raw.insert(raw.end(), w.raw.begin(), w.raw.end());
      segmented.insert(segmented.end(), w.segmented.begin(), w.segmented.end());
      refined.insert(refined.end(), w.refined.begin(), w.refined.end());
      correct_events += w.result.event == w.result.recognized;
      report.episodes.push_back(w.result);
      const LabelScores m = w.scorer.mean();
      const int n = w.scorer.points();
      auto add = [n](ChannelScores& s, const ChannelScores& x) {
        s.micro += x.micro * n;
        s.macro_precision += x.macro_precision * n;
        s.macro_recall += x.macro_recall * n;
        s.macro_f1 += x.macro_f1 * n;
        s.samples += x.samples;
      };
      add(sum.subactivity, m.subactivity);
      add(sum.action, m.action);
      add(sum.affordance, m.affordance);
      points += n;
    }
    // Raw detections carry no sub-activity; score that channel as all wrong.
    for (auto& f : raw) f.s = -1;
    report.raw = score_detection(raw, truth, b.alphabets);
    report.segmented = score_detection(segmented, truth, b.alphabets);
    report.refined = score_detection(refined, truth, b.alphabets);
    report.event_accuracy = work.empty() ? 0.0 : 100.0 * correct_events / static_cast<double>(work.size());
    report.prediction = LabelScores{divided(sum.subactivity, points), divided(sum.action, points),
                                    divided(sum.affordance, points)};
    report.prediction_points = points;
    return report;
  });
}

std::string ExperimentReport::to_json(const ExperimentConfig& c) const {
  ordered_json doc;
  doc["protocol"] = protocol(c);
  doc["config"] = config_json(c);
  doc["config"].erase("threads");  // results do not depend on it
  doc["train_episodes"] = train_episodes;
  doc["test_episodes"] = test_episodes;
  doc["event_accuracy"] = event_accuracy;
  doc["detection"] = ordered_json{{"raw", scores_json(raw)},
                                  {"segmented", scores_json(segmented)},
                                  {"refined", scores_json(refined)}};
  doc["prediction"] = ordered_json{{"points", prediction_points}, {"scores", scores_json(prediction)}};
  ordered_json eps = ordered_json::array();
  for (const auto& e : episodes)
    eps.push_back(ordered_json{{"id", e.id},
                               {"event", e.event},
                               {"recognized", e.recognized},
                               {"frames", e.frames},
                               {"raw_action", e.raw_action},
                               {"refined_action", e.refined_action}});
  doc["episodes"] = eps;
  ordered_json gs = ordered_json::array();
  for (const auto& g : grammars) gs.push_back(ordered_json::parse(g));
  doc["grammars"] = gs;
  return doc.dump(2) + "\n";
}

std::string ExperimentReport::to_table(const ExperimentConfig& c) const {
  std::string out;
  char line[256];
  auto row = [&](const char* label, const ChannelScores& s) {
    std::snprintf(line, sizeof line, "  %-22s %9.1f %9.1f %9.1f %9.1f\n", label, s.micro, s.macro_precision,
                  s.macro_recall, s.macro_f1);
    out += line;
  };
  const Alphabets ab = benchmark_alphabets();
  out += "Protocol: " + protocol(c) + "\n\n";
  std::snprintf(line, sizeof line, "Detection (%d test episodes, %d training)\n", test_episodes, train_episodes);
  out += line;
  std::snprintf(line, sizeof line, "  %-22s %9s %9s %9s %9s\n", "", "Micro P/R", "Macro P", "Macro R", "F1");
  out += line;
  std::snprintf(line, sizeof line, "  %-22s %9.1f\n", "chance (action)", 100.0 / static_cast<double>(ab.actions.size()));
  out += line;
  row("action: raw", raw.action);
  row("action: segmented", segmented.action);
  row("action: refined", refined.action);
  std::snprintf(line, sizeof line, "  %-22s %9.1f\n", "chance (affordance)",
                100.0 / static_cast<double>(ab.affordances.size()));
  out += line;
  row("affordance: raw", raw.affordance);
  row("affordance: segmented", segmented.affordance);
  row("affordance: refined", refined.affordance);
  row("sub-activity: segmented", segmented.subactivity);
  row("sub-activity: refined", refined.subactivity);
  std::snprintf(line, sizeof line, "  %-22s %9.1f\n\n", "event recognition", event_accuracy);
  out += line;
  if (c.predict) {
    std::snprintf(line, sizeof line, "Prediction (%d frames ahead, %d evaluation points)\n", c.prediction.horizon,
                  prediction_points);
    out += line;
    std::snprintf(line, sizeof line, "  %-22s %9s %9s %9s %9s\n", "", "Micro P/R", "Macro P", "Macro R", "F1");
    out += line;
    row("action", prediction.action);
    row("affordance", prediction.affordance);
    row("sub-activity", prediction.subactivity);
  }
  return out;
}

}  // namespace taog
