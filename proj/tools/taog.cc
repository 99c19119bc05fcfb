// tools/taog.cc

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

// Command-line front end: one verb per pipeline stage plus `run` for the whole
// experiment. Every library error class exits with its own code.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "taog/earley.h"
#include "taog/emission.h"
#include "taog/error.h"
#include "taog/eval.h"
#include "taog/induction.h"
#include "taog/prediction.h"
#include "taog/refinement.h"
#include "taog/segmentation.h"
#include "taog/simulator.h"

namespace fs = std::filesystem;
using namespace taog;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 1;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorCode::kIo, "cannot write " + path);
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join_labels(const std::vector<int>& ids, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += ids[i] >= 0 && ids[i] < static_cast<int>(names.size()) ? names[ids[i]] : "-";
  }
  return out.empty() ? "-" : out;
}

std::string segment_line(const Segment& s, const Alphabets& ab, double score) {
  return std::to_string(s.t1) + '\t' + std::to_string(s.t2) + '\t' + ab.subactivities[s.s] + '\t' +
         ab.actions[s.a] + '\t' + join_labels(s.o, ab.objects) + '\t' + join_labels(s.u, ab.affordances) + '\t' +
         fmt_double(score) + '\n';
}

std::string frame_line(int t, const FrameLabels& f, const Alphabets& ab) {
  const std::string s = f.s >= 0 ? ab.subactivities[f.s] : "-";
  return std::to_string(t) + '\t' + s + '\t' + ab.actions[f.a] + '\t' + join_labels(f.u, ab.affordances) + '\n';
}

Sentence split_words(const std::string& text) {
  std::istringstream in(text);
  Sentence out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Grammar/model pairs matched by file stem: <dir>/<event>.json.
std::vector<EventModel> load_events(const std::string& grammar_dir, const std::string& model_dir) {
  std::vector<EventModel> events;
  std::error_code ec;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(grammar_dir, ec))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  if (ec) fail(ErrorCode::kIo, "cannot list " + grammar_dir);
  std::sort(files.begin(), files.end());
  for (const auto& g : files) {
    const fs::path m = fs::path(model_dir) / g.filename();
    events.push_back(EventModel{g.stem().string(), load_grammar(g.string()), load_model(m.string())});
  }
  if (events.empty()) fail(ErrorCode::kInvalidArgument, "no grammars found in " + grammar_dir);
  return events;
}

struct Globals {
  std::uint64_t seed = 1;
  bool seed_set = false;
  int threads = 1;
  bool threads_set = false;
  std::string log_level = "warn";
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal And-Or grammar toolkit: induce event grammars, parse detection streams, predict."};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->each([&](const std::string&) { g.seed_set = true; });
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { g.threads_set = true; });
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a benchmark dataset");
  std::string spec_path, out_path;
  simulate->add_option("--spec", spec_path, "Benchmark spec (JSON); defaults when omitted");
  simulate->add_option("--out", out_path, "Output directory")->required();

  // induce
  auto* induce_cmd = app.add_subcommand("induce", "Induce an event grammar from a corpus");
  std::string corpus_path, event_label;
  InductionConfig icfg;
  double branch_smoothing = 0.0;
  induce_cmd->add_option("--corpus", corpus_path, "One sentence per line")->required();
  induce_cmd->add_option("--event", event_label, "Root name (default: corpus file stem)");
  induce_cmd->add_option("--eta", icfg.eta, "Ratio threshold");
  induce_cmd->add_option("--alpha", icfg.alpha, "Significance level");
  induce_cmd->add_option("--context-size", icfg.context_size, "Equivalence-class window");
  induce_cmd->add_option("--coverage", icfg.coverage, "Neighbour overlap for class members");
  induce_cmd->add_option("--smoothing", branch_smoothing, "Pseudo-count for branch probabilities");
  induce_cmd->add_option("--out", out_path, "Grammar file (default: stdout)");

  // learn
  auto* learn = app.add_subcommand("learn", "Learn label and duration tables from labeled parses");
  std::vector<std::string> truth_paths;
  std::string alphabets_path;
  double emission_smoothing = kDefaultSmoothing;
  learn->add_option("--truth", truth_paths, "Parse documents")->required();
  learn->add_option("--alphabets", alphabets_path, "Alphabets document")->required();
  learn->add_option("--smoothing", emission_smoothing, "Pseudo-count");
  learn->add_option("--out", out_path, "Model file (default: stdout)");

  // parse-symbolic
  auto* symbolic = app.add_subcommand("parse-symbolic", "Parse a sub-activity sentence or prefix");
  std::string grammar_path, sentence_text;
  bool want_predict = false;
  symbolic->add_option("--grammar", grammar_path, "Grammar file")->required();
  symbolic->add_option("--sentence", sentence_text, "Whitespace-separated sub-activities")->required();
  symbolic->add_flag("--predict", want_predict, "Also list the next sub-activities with scores");

  // segment
  auto* segment = app.add_subcommand("segment", "Bottom-up segmentation of a detection stream");
  std::string stream_path, model_path;
  SegmenterConfig scfg;
  std::string scoring = "geometric_mean";
  bool online = false;
  segment->add_option("--stream", stream_path, "Detection stream (JSON lines)")->required();
  segment->add_option("--model", model_path, "Label model")->required();
  segment->add_option("--max-seg-len", scfg.max_segment_length, "Longest segment in frames")
      ->check(CLI::PositiveNumber);
  segment->add_option("--segment-score", scoring, "product or geometric_mean")
      ->check(CLI::IsMember({"product", "geometric_mean"}));
  segment->add_flag("--online", online, "Feed frames one at a time");

  // parse
  auto* parse = app.add_subcommand("parse", "Joint parse of a detection stream over candidate events");
  std::string grammar_dir, model_dir;
  JointParseConfig jcfg;
  parse->add_option("--stream", stream_path, "Detection stream")->required();
  parse->add_option("--grammars", grammar_dir, "Directory of <event>.json grammars")->required();
  parse->add_option("--models", model_dir, "Directory of <event>.json models")->required();
  parse->add_option("--sweeps", jcfg.refine.sweeps, "Gibbs sweeps");
  parse->add_option("--t0", jcfg.refine.t0, "Initial temperature");
  parse->add_option("--beta", jcfg.refine.beta, "Cooling rate");
  parse->add_option("--segment-score", scoring, "product or geometric_mean")
      ->check(CLI::IsMember({"product", "geometric_mean"}));
  parse->add_option("--out", out_path, "Write the parse document here");

  // predict
  auto* predict = app.add_subcommand("predict", "Predict labels after a frame of a detection stream");
  PredictionConfig pcfg;
  int at_frame = -1;
  predict->add_option("--stream", stream_path, "Detection stream")->required();
  predict->add_option("--grammar", grammar_path, "Grammar file")->required();
  predict->add_option("--model", model_path, "Label model")->required();
  predict->add_option("--at-frame", at_frame, "Last observed frame (default: last frame)");
  predict->add_option("--horizon", pcfg.horizon, "Frames to predict")->check(CLI::PositiveNumber);
  predict->add_option("--samples", pcfg.samples, "Sampled continuations")->check(CLI::PositiveNumber);
  predict->add_option("--sweeps", jcfg.refine.sweeps, "Gibbs sweeps for the current parse");
  predict->add_option("--segment-score", scoring, "product or geometric_mean")
      ->check(CLI::IsMember({"product", "geometric_mean"}));
  predict->add_flag("--marginal", pcfg.marginal, "Per-frame vote instead of the best continuation");

  // eval
  auto* eval = app.add_subcommand("eval", "Score a parse against ground truth");
  std::string pred_path, truth_path;
  eval->add_option("--pred", pred_path, "Predicted parse document")->required();
  eval->add_option("--truth", truth_path, "Ground-truth parse document")->required();
  eval->add_option("--alphabets", alphabets_path, "Alphabets document")->required();

  // run
  auto* run = app.add_subcommand("run", "Run an experiment end to end");
  std::string config_path, table_path;
  run->add_option("--config", config_path, "Experiment config (JSON); defaults when omitted");
  run->add_option("--out", out_path, "Report file (default: stdout)");
  run->add_option("--table", table_path, "Also write the readable table here ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  spdlog::set_default_logger(spdlog::stderr_color_mt("taog"));
  spdlog::set_level(spdlog::level::from_str(g.log_level));
  const SegmentScoring score_mode =
      scoring == "product" ? SegmentScoring::kProduct : SegmentScoring::kGeometricMean;

  try {
    if (*simulate) {
      BenchmarkSpec spec = spec_path.empty() ? BenchmarkSpec{} : load_benchmark_spec(spec_path);
      if (g.seed_set) spec.seed = g.seed;
      spdlog::info("generating {} events x {} episodes", spec.events, spec.episodes_per_event);
      write_benchmark(generate_benchmark(spec), spec, out_path);
    } else if (*induce_cmd) {
      Corpus corpus{event_label.empty() ? fs::path(corpus_path).stem().string() : event_label,
                    read_corpus(corpus_path)};
      spdlog::info("inducing from {} sentences", corpus.sentences.size());
      const Grammar grammar =
          estimate_branch_probabilities(induce(corpus, icfg), corpus.sentences, branch_smoothing);
      write_text(out_path, serialize_grammar(grammar));
    } else if (*learn) {
      const Alphabets ab = deserialize_alphabets(read_text(alphabets_path));
      std::vector<Segment> segments;
      for (const auto& p : truth_paths) {
        const ParseGraphSeq pg = load_parse(p, ab);
        segments.insert(segments.end(), pg.segments.begin(), pg.segments.end());
      }
      spdlog::info("learning from {} segments", segments.size());
      write_text(out_path, serialize_model(learn_emissions(segments, ab, emission_smoothing)));
    } else if (*symbolic) {
      const Grammar grammar = load_grammar(grammar_path);
      const Sentence sentence = split_words(sentence_text);
      const ViterbiResult v = viterbi_likelihood(grammar, sentence);
      const PrefixLikelihood prefix = prefix_likelihood(grammar, sentence);
      std::cout << "accepted\t" << (v.probability > 0.0 ? "yes" : "no") << '\n';
      std::cout << "viterbi\t" << fmt_double(v.probability) << '\n';
      std::cout << "prefix\t" << fmt_double(prefix.probability) << (prefix.truncated ? "\ttruncated" : "") << '\n';
      bool rejected = false;
      for (std::size_t i = 0; i <= sentence.size(); ++i) {
        const Sentence head(sentence.begin(), sentence.begin() + static_cast<long>(i));
        if (prefix_likelihood(grammar, head).probability == 0.0) {
          std::cout << "rejected_at\t" << i - 1 << '\t' << sentence[i - 1] << '\n';
          rejected = true;
          break;
        }
        std::string set;
        for (const auto& s : next_symbols(parse_prefix(grammar, head))) set += (set.empty() ? "" : " ") + s.symbol;
        std::cout << "expected[" << i << "]\t" << (set.empty() ? "-" : set) << '\n';
      }
      if (want_predict && !rejected)
        for (const auto& s : predict_next_subactivity(grammar, sentence))
          std::cout << "next\t" << s.symbol << '\t' << fmt_double(s.score) << '\n';
    } else if (*segment) {
      const EmissionModel model = load_model(model_path);
      const DetectionStream stream = load_stream(stream_path);
      validate_stream(stream, model.alphabets);
      scfg.scoring = score_mode;
      Segmentation seg;
      if (online) {
        OnlineSegmenter online_seg(model, scfg);
        for (const auto& f : stream) online_seg.append(f);
        seg = online_seg.result();
      } else {
        seg = segment_stream(stream, model, scfg);
      }
      std::cout << "# t1\tt2\tsub-activity\taction\tobjects\taffordances\tlog-score\n";
      for (std::size_t k = 0; k < seg.segments.size(); ++k)
        std::cout << segment_line(seg.segments[k], model.alphabets, seg.segment_scores[k]);
      std::cout << "# total\t" << fmt_double(seg.log_score) << '\n';
    } else if (*parse) {
      const std::vector<EventModel> events = load_events(grammar_dir, model_dir);
      const DetectionStream stream = load_stream(stream_path);
      jcfg.segmenter.scoring = jcfg.refine.scoring = score_mode;
      jcfg.threads = g.threads;
      const JointParse jp = joint_parse(stream, events, jcfg, g.seed);
      const Alphabets& ab = events.front().model.alphabets;
      std::cout << "event\t" << jp.event << '\n';
      for (std::size_t e = 0; e < events.size(); ++e)
        std::cout << "event_score\t" << events[e].name << '\t' << fmt_double(jp.event_scores[e]) << '\n';
      std::cout << "log_posterior\t" << fmt_double(jp.parse.log_posterior) << '\n';
      const EmissionModel* chosen = &events.front().model;
      for (const auto& e : events)
        if (e.name == jp.event) chosen = &e.model;
      for (const auto& s : jp.parse.segments)
        std::cout << "segment\t" << segment_line(s, ab, segment_prior(s, *chosen));
      const auto frames = jp.parse.frame_labels();
      for (std::size_t t = 0; t < frames.size(); ++t) std::cout << "frame\t" << frame_line(static_cast<int>(t), frames[t], ab);
      if (!out_path.empty()) write_text(out_path, serialize_parse(jp.parse, ab));
    } else if (*predict) {
      const Grammar grammar = load_grammar(grammar_path);
      const EmissionModel model = load_model(model_path);
      const DetectionStream stream = load_stream(stream_path);
      validate_stream(stream, model.alphabets);
      if (stream.empty()) fail(ErrorCode::kInvalidArgument, "empty stream");
      const int last = at_frame < 0 ? static_cast<int>(stream.size()) - 1 : at_frame;
      if (last >= static_cast<int>(stream.size()))
        fail(ErrorCode::kInvalidArgument, "--at-frame is past the end of the stream");
      SegmenterConfig seg_cfg;
      seg_cfg.scoring = score_mode;
      RefineConfig rcfg = jcfg.refine;
      rcfg.scoring = pcfg.scoring = score_mode;
      pcfg.threads = g.threads;
      StreamPredictor predictor(grammar, model, seg_cfg, rcfg, pcfg);
      for (int t = 0; t <= last; ++t) predictor.append(stream[t]);
      const Prediction p = predictor.predict(g.seed);
      std::cout << "score\t" << fmt_double(p.score) << '\n';
      std::string ctx;
      for (const auto& w : p.context) ctx += (ctx.empty() ? "" : " ") + w;
      std::cout << "context\t" << (ctx.empty() ? "-" : ctx) << (p.corrected ? "\tcorrected" : "") << '\n';
      for (std::size_t k = 0; k < p.frames.size(); ++k)
        std::cout << "frame\t" << frame_line(last + 1 + static_cast<int>(k), p.frames[k], model.alphabets);
    } else if (*eval) {
      const Alphabets ab = deserialize_alphabets(read_text(alphabets_path));
      const auto pred = load_parse(pred_path, ab).frame_labels();
      const auto truth = load_parse(truth_path, ab).frame_labels();
      const LabelScores s = score_detection(pred, truth, ab);
      std::cout << "channel\tmicro\tmacro_precision\tmacro_recall\tmacro_f1\n";
      auto row = [](const char* name, const ChannelScores& c) {
        std::printf("%s\t%.2f\t%.2f\t%.2f\t%.2f\n", name, c.micro, c.macro_precision, c.macro_recall, c.macro_f1);
      };
      row("action", s.action);
      row("affordance", s.affordance);
      row("sub-activity", s.subactivity);
    } else if (*run) {
      ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
      if (g.seed_set) cfg.seed = g.seed;
      if (g.threads_set) cfg.threads = g.threads;
      spdlog::info("running experiment (seed {}, {} threads)", cfg.seed, cfg.threads);
      const ExperimentReport report = run_experiment(cfg);
      write_text(out_path, report.to_json(cfg));
      if (!table_path.empty()) write_text(table_path, report.to_table(cfg));
    }
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.code()), e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kExitInternal;
  }
  return 0;
}
