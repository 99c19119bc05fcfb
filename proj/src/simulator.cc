// src/simulator.cc

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

#include "taog/simulator.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "io_util.h"
#include "json.hpp"
#include "taog/error.h"

namespace taog {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

NoiseModel NoiseModel::uniform(double temperature, double flip_rate, double concentration) {
  const NoiseChannel c{temperature, flip_rate, concentration};
  return NoiseModel{c, c, c};
}

void NoiseModel::validate() const {
  for (const NoiseChannel* c : {&action, &object, &affordance}) {
    if (!(c->temperature >= 0.0) || !std::isfinite(c->temperature))
      fail(ErrorCode::kInvalidArgument, "noise temperature must be >= 0");
    if (!(c->flip_rate >= 0.0 && c->flip_rate < 1.0))
      fail(ErrorCode::kInvalidArgument, "flip rate must be in [0, 1)");
    if (!(c->concentration > 0.0)) fail(ErrorCode::kInvalidArgument, "concentration must be > 0");
  }
}

std::vector<double> noisy_scores(int label, int n, const NoiseChannel& c, Rng& rng) {
  std::vector<double> p(static_cast<std::size_t>(n));
  if (n == 1) {
    p[0] = 1.0;
    return p;
  }
  if (c.flip_rate > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < c.flip_rate) {
    const int other = std::uniform_int_distribution<int>(0, n - 2)(rng);
    label = other >= label ? other + 1 : other;
  }
  if (c.temperature == 0.0) {
    std::fill(p.begin(), p.end(), kPeakSlack / (n - 1));
    p[label] = 1.0 - kPeakSlack;
    return p;
  }
  // Dirichlet around softmax(onehot / temperature).
  const double hi = std::exp(1.0 / c.temperature);
  const double z = hi + (n - 1);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double alpha = c.concentration * (i == label ? hi : 1.0) / z;
    p[i] = std::gamma_distribution<double>(alpha, 1.0)(rng);
    total += p[i];
  }
  if (!(total > 0.0)) {
    std::fill(p.begin(), p.end(), 0.0);
    p[label] = 1.0;
    return p;
  }
  for (auto& x : p) x /= total;
  return p;
}

int interacted_track(const EmissionModel& model, int s, std::span<const int> track_objects) {
  int best = -1;
  double best_p = -1.0;
  for (std::size_t j = 0; j < track_objects.size(); ++j) {
    const double p = model.objects_given_s[s][track_objects[j]];
    if (p > best_p) {
      best_p = p;
      best = static_cast<int>(j);
    }
  }
  return best;
}

namespace {

int draw(const std::vector<double>& p, Rng& rng) {
  return std::discrete_distribution<int>(p.begin(), p.end())(rng);
}

}  // namespace

int sample_duration(const Duration& d, Rng& rng) {
  const double x = std::exp(std::normal_distribution<double>(d.mu, d.sigma)(rng));
  return static_cast<int>(std::max(1L, std::lround(std::min(x, 1e6))));
}

Segment sample_segment_labels(const EmissionModel& model, int s, std::span<const int> track_objects,
                              int t1, int t2, Rng& rng) {
  Segment seg{t1, t2, s, draw(model.actions_given_s[s], rng), {}, {}};
  const int stationary = index_of(model.alphabets.affordances, "stationary");
  const int active = interacted_track(model, s, track_objects);
  for (std::size_t j = 0; j < track_objects.size(); ++j) {
    seg.o.push_back(track_objects[j]);
    if (static_cast<int>(j) == active || stationary < 0) {
      std::vector<double> row = model.affordances_given_s[s];
      if (stationary >= 0) {
        const double kept = 1.0 - row[stationary];
        if (kept > 0.0) row[stationary] = 0.0;
      }
      seg.u.push_back(draw(row, rng));
    } else {
      seg.u.push_back(stationary);
    }
  }
  return seg;
}

DetectionStream render_stream(std::span<const FrameLabels> frames, int first_t,
                              std::span<const int> track_ids, const Alphabets& ab,
                              const NoiseModel& noise, Rng& rng) {
  const int A = static_cast<int>(ab.actions.size()), O = static_cast<int>(ab.objects.size()),
            U = static_cast<int>(ab.affordances.size());
  DetectionStream out;
  out.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameLabels& f = frames[i];
    DetectionFrame df;
    df.t = first_t + static_cast<int>(i);
    df.action_scores = noisy_scores(f.a, A, noise.action, rng);
    for (std::size_t j = 0; j < f.o.size(); ++j) {
      ObjectDetection od;
      od.object_id = j < track_ids.size() ? track_ids[j] : static_cast<int>(j);
      od.object_scores = noisy_scores(f.o[j], O, noise.object, rng);
      od.affordance_scores = noisy_scores(f.u[j], U, noise.affordance, rng);
      df.objects.push_back(std::move(od));
    }
    out.push_back(std::move(df));
  }
  return out;
}

Episode generate_episode(const Grammar& grammar, const EmissionModel& model, const NoiseModel& noise,
                         std::uint64_t seed, const EpisodeConfig& config) {
  noise.validate();
  Rng rng(seed);
  const Sentence sentence = sample_sentence(grammar, rng, config.max_depth);
  std::vector<int> subs;
  for (const auto& w : sentence) {
    const int s = index_of(model.alphabets.subactivities, w);
    if (s < 0) fail(ErrorCode::kUndefinedSymbol, "grammar terminal not in the model: " + w);
    subs.push_back(s);
  }

  Episode ep;
  // Track classes: the most probable object of every sub-activity in the
  // episode, in order of appearance, topped up with unused classes. Keeping
  // each sub-activity's own object in view makes the interacted track a
  // property of the sub-activity rather than of the episode's draw.
  const int O = static_cast<int>(model.alphabets.objects.size());
  const int M = std::min(config.tracks, O);
  for (int s : subs) {
    const auto& row = model.objects_given_s[s];
    const int o = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    if (std::find(ep.track_objects.begin(), ep.track_objects.end(), o) == ep.track_objects.end())
      ep.track_objects.push_back(o);
  }
  while (static_cast<int>(ep.track_objects.size()) < M) {
    const int o = std::uniform_int_distribution<int>(0, O - 1)(rng);
    if (std::find(ep.track_objects.begin(), ep.track_objects.end(), o) == ep.track_objects.end())
      ep.track_objects.push_back(o);
  }

  int t = 0;
  for (int s : subs) {
    const int len = sample_duration(model.duration[s], rng);
    ep.truth.segments.push_back(sample_segment_labels(model, s, ep.track_objects, t, t + len - 1, rng));
    t += len;
  }
  ep.truth.event = grammar.root();
  ep.truth.log_posterior = 0.0;
  std::vector<int> ids(ep.track_objects.size());
  std::iota(ids.begin(), ids.end(), 0);
  const auto frames = expand_segments(ep.truth.segments);
  ep.stream = render_stream(frames, 0, ids, model.alphabets, noise, rng);
  return ep;
}

// ---------------------------------------------------------------------------

namespace {

struct SubactivitySpec {
  const char* name;
  const char* action;
  const char* object;
  const char* affordance;
};

constexpr SubactivitySpec kSubactivities[] = {
    {"reach_cup", "reaching", "cup", "reachable"},
    {"move_cup", "moving", "cup", "movable"},
    {"pour_cup", "pouring", "cup", "pourable"},
    {"drink_cup", "drinking", "cup", "drinkable"},
    {"open_microwave", "opening", "microwave", "openable"},
    {"place_bowl", "placing", "bowl", "placeable"},
    {"close_microwave", "closing", "microwave", "closeable"},
    {"clean_plate", "cleaning", "plate", "cleanable"},
    {"eat_food", "eating", "bowl", "containable"},
    {"null", "null", "book", "stationary"},
};

}  // namespace

Alphabets benchmark_alphabets() {
  Alphabets ab;
  for (const auto& s : kSubactivities) ab.subactivities.push_back(s.name);
  ab.actions = {"reaching", "moving", "pouring", "eating", "drinking",
                "opening",  "placing", "closing", "cleaning", "null"};
  ab.objects = {"bowl", "cup", "plate", "microwave", "box", "milk", "medcinebox", "cloth", "book", "remote"};
  ab.affordances = {"movable",   "stationary", "reachable", "pourable", "pourto",   "containable",
                    "drinkable", "openable",   "placeable", "closeable", "cleanable", "cleaner"};
  return ab;
}

EmissionModel planted_model(const Alphabets& ab, Rng& rng, const PlantedModelConfig& config) {
  if (!(config.peak > 0.0 && config.peak <= 1.0))
    fail(ErrorCode::kInvalidArgument, "peak must be in (0, 1]");
  if (!(config.companion_share >= 0.0 && config.companion_share < 1.0))
    fail(ErrorCode::kInvalidArgument, "companion share must be in [0, 1)");
  const int stationary = index_of(ab.affordances, "stationary");
  const double share = config.companion_share;
  const std::size_t S = ab.subactivities.size();
  auto peaked = [&](std::size_t n, int at) {
    std::vector<double> row(n, n > 1 ? (1.0 - config.peak) / static_cast<double>(n - 1) : 0.0);
    row[at] = n > 1 ? config.peak : 1.0;
    return row;
  };
  EmissionModel m;
  m.alphabets = ab;
  std::uniform_real_distribution<double> frames(config.min_frames, config.max_frames);
  for (std::size_t s = 0; s < S; ++s) {
    int a = static_cast<int>(s % ab.actions.size());
    int o = static_cast<int>(s % ab.objects.size());
    int u = static_cast<int>(s % ab.affordances.size());
    // Known sub-activity names map to their semantic labels.
    for (const auto& spec : kSubactivities) {
      if (ab.subactivities[s] != spec.name) continue;
      const int ia = index_of(ab.actions, spec.action), io = index_of(ab.objects, spec.object),
                iu = index_of(ab.affordances, spec.affordance);
      if (ia >= 0) a = ia;
      if (io >= 0) o = io;
      if (iu >= 0) u = iu;
    }
    m.actions_given_s.push_back(peaked(ab.actions.size(), a));
    auto objects = peaked(ab.objects.size(), o);
    for (auto& x : objects) x = (1.0 - share) * x + share / static_cast<double>(objects.size());
    auto affordances = peaked(ab.affordances.size(), u);
    for (std::size_t i = 0; i < affordances.size(); ++i) {
      const double background = stationary >= 0 ? (static_cast<int>(i) == stationary ? 1.0 : 0.0)
                                                 : 1.0 / static_cast<double>(affordances.size());
      affordances[i] = (1.0 - share) * affordances[i] + share * background;
    }
    m.objects_given_s.push_back(std::move(objects));
    m.affordances_given_s.push_back(std::move(affordances));
    m.duration.push_back(Duration{std::log(frames(rng)), config.sigma});
  }
  m.prior_s.assign(S, 1.0 / static_cast<double>(S));
  m.defaulted.assign(S, false);
  return m;
}

Grammar random_grammar(Rng& rng, const RandomGrammarConfig& config) {
  if (config.num_terminals < 1 || config.max_productions < 1 || config.max_children < 1)
    fail(ErrorCode::kInvalidArgument, "random grammar sizes must be positive");
  std::vector<std::string> terminals;
  for (int i = 0; i < config.num_terminals; ++i) terminals.push_back("t" + std::to_string(i));
  std::uniform_int_distribution<int> nprod(1, config.max_productions);
  const int P = nprod(rng);
  auto nt = [](int i) { return i == 0 ? std::string("S") : "N" + std::to_string(i); };
  std::vector<Production> prods;
  std::vector<bool> referenced(P, false);
  referenced[0] = true;
  std::uniform_int_distribution<int> term(0, config.num_terminals - 1);
  std::uniform_int_distribution<int> nchildren(1, config.max_children);
  std::bernoulli_distribution is_or(0.5);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  for (int i = 0; i < P; ++i) {
    Production p;
    p.head = nt(i);
    p.kind = is_or(rng) ? NodeKind::kOr : NodeKind::kAnd;
    int n = nchildren(rng);
    if (p.kind == NodeKind::kOr) n = std::max(n, 2);
    for (int c = 0; c < n; ++c) {
      // Nonterminal children only point forward, keeping the graph acyclic;
      // the first unreferenced successor is preferred so every one is reachable.
      int child = -1;
      if (i + 1 < P && std::bernoulli_distribution(0.4)(rng)) {
        int unref = -1;
        for (int j = i + 1; j < P; ++j)
          if (!referenced[j]) {
            unref = j;
            break;
          }
        child = unref >= 0 ? unref : std::uniform_int_distribution<int>(i + 1, P - 1)(rng);
      }
      if (child >= 0) {
        referenced[child] = true;
        p.children.push_back(nt(child));
      } else {
        p.children.push_back(terminals[term(rng)]);
      }
    }
    if (p.kind == NodeKind::kOr) {
      double total = 0.0;
      for (int c = 0; c < n; ++c) total += p.probabilities.emplace_back(weight(rng));
      for (auto& q : p.probabilities) q /= total;
    }
    prods.push_back(std::move(p));
  }
  // Any nonterminal never referenced is hung off the root's first Or/And body.
  for (int j = 1; j < P; ++j) {
    if (referenced[j]) continue;
    Production& root = prods[0];
    root.children.push_back(nt(j));
    if (root.kind == NodeKind::kOr) {
      for (auto& q : root.probabilities) q *= 0.8;
      root.probabilities.push_back(0.2);
    }
  }
  // Only terminals that occur are declared.
  std::vector<std::string> used;
  for (const auto& p : prods)
    for (const auto& c : p.children)
      if (c[0] == 't' && std::find(used.begin(), used.end(), c) == used.end()) used.push_back(c);
  std::sort(used.begin(), used.end());
  return Grammar("S", used, std::move(prods));
}

Grammar planted_grammar(std::span<const std::string> terminals, Rng& rng,
                        const PlantedGrammarConfig& config) {
  const int K = config.patterns, C = config.classes;
  const int need = K * config.pattern_length + C * config.class_size;
  if (K < 1 || C < 0 || config.pattern_length < 1 || config.class_size < 2 ||
      static_cast<int>(terminals.size()) < need) {
    fail(ErrorCode::kInvalidArgument, "planted grammar needs " + std::to_string(need) + " terminals");
  }
  std::vector<std::string> pool(terminals.begin(), terminals.end());
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t next = 0;
  std::vector<Production> prods;
  std::uniform_real_distribution<double> branch(config.min_branch, 1.0 - config.min_branch);
  auto probabilities = [&](int n) {
    std::vector<double> p(n);
    if (n == 2) {
      p[0] = branch(rng);
      p[1] = 1.0 - p[0];
      return p;
    }
    double total = 0.0;
    for (auto& x : p) total += (x = branch(rng));
    for (auto& x : p) x /= total;
    return p;
  };

  Production root{"EVENT", NodeKind::kOr, {}, {}};
  prods.push_back(root);
  for (int k = 0; k < K; ++k) {
    Production p{"P" + std::to_string(k), NodeKind::kAnd, {}, {}};
    for (int i = 0; i < config.pattern_length; ++i) p.children.push_back(pool[next++]);
    prods.push_back(std::move(p));
  }
  for (int c = 0; c < C; ++c) {
    Production p{"E" + std::to_string(c), NodeKind::kOr, {}, {}};
    for (int i = 0; i < config.class_size; ++i) p.children.push_back(pool[next++]);
    p.probabilities = probabilities(config.class_size);
    prods.push_back(std::move(p));
  }
  for (int r = 0; r < K; ++r) {
    Production t{"T" + std::to_string(r), NodeKind::kAnd, {"P" + std::to_string(r)}, {}};
    if (C > 0) t.children.push_back("E" + std::to_string(r % C));
    t.children.push_back("P" + std::to_string((r + 1) % K));
    prods[0].children.push_back(t.head);
    prods.push_back(std::move(t));
  }
  prods[0].probabilities = probabilities(K);
  std::vector<std::string> used(pool.begin(), pool.begin() + static_cast<long>(next));
  std::sort(used.begin(), used.end());
  return Grammar("EVENT", used, std::move(prods));
}

// ---------------------------------------------------------------------------

namespace {

ordered_json channel_json(const NoiseChannel& c) {
  return ordered_json{{"temperature", c.temperature}, {"flip_rate", c.flip_rate},
                      {"concentration", c.concentration}};
}

NoiseChannel channel_from(const json& j, NoiseChannel d) {
  d.temperature = j.value("temperature", d.temperature);
  d.flip_rate = j.value("flip_rate", d.flip_rate);
  d.concentration = j.value("concentration", d.concentration);
  return d;
}

}  // namespace

std::string serialize_benchmark_spec(const BenchmarkSpec& s) {
  ordered_json doc;
  doc["events"] = s.events;
  doc["episodes_per_event"] = s.episodes_per_event;
  doc["corpus_size"] = s.corpus_size;
  doc["tracks"] = s.tracks;
  doc["seed"] = s.seed;
  doc["deterministic"] = s.deterministic;
  doc["noise"] = ordered_json{{"action", channel_json(s.noise.action)},
                              {"object", channel_json(s.noise.object)},
                              {"affordance", channel_json(s.noise.affordance)}};
  doc["grammar"] = ordered_json{{"patterns", s.grammar.patterns},
                                {"pattern_length", s.grammar.pattern_length},
                                {"classes", s.grammar.classes},
                                {"class_size", s.grammar.class_size},
                                {"min_branch", s.grammar.min_branch}};
  doc["model"] = ordered_json{{"peak", s.model.peak},
                              {"min_frames", s.model.min_frames},
                              {"max_frames", s.model.max_frames},
                              {"sigma", s.model.sigma},
                              {"companion_share", s.model.companion_share}};
  return doc.dump(2) + "\n";
}

BenchmarkSpec load_benchmark_spec(const std::string& path) {
  return parse_benchmark_spec(internal::read_file(path, "benchmark spec"));
}

BenchmarkSpec parse_benchmark_spec(std::string_view text) {
  BenchmarkSpec s;
  try {
    const json doc = json::parse(text);
    s.events = doc.value("events", s.events);
    s.episodes_per_event = doc.value("episodes_per_event", s.episodes_per_event);
    s.corpus_size = doc.value("corpus_size", s.corpus_size);
    s.tracks = doc.value("tracks", s.tracks);
    s.seed = doc.value("seed", s.seed);
    s.deterministic = doc.value("deterministic", s.deterministic);
    if (doc.contains("noise")) {
      const auto& n = doc["noise"];
      if (n.contains("action") || n.contains("object") || n.contains("affordance")) {
        s.noise.action = channel_from(n.value("action", json::object()), s.noise.action);
        s.noise.object = channel_from(n.value("object", json::object()), s.noise.object);
        s.noise.affordance = channel_from(n.value("affordance", json::object()), s.noise.affordance);
      } else {
        const NoiseChannel c = channel_from(n, s.noise.action);
        s.noise = NoiseModel{c, c, c};
      }
    }
    if (doc.contains("grammar")) {
      const auto& g = doc["grammar"];
      s.grammar.patterns = g.value("patterns", s.grammar.patterns);
      s.grammar.pattern_length = g.value("pattern_length", s.grammar.pattern_length);
      s.grammar.classes = g.value("classes", s.grammar.classes);
      s.grammar.class_size = g.value("class_size", s.grammar.class_size);
      s.grammar.min_branch = g.value("min_branch", s.grammar.min_branch);
    }
    if (doc.contains("model")) {
      const auto& m = doc["model"];
      s.model.peak = m.value("peak", s.model.peak);
      s.model.min_frames = m.value("min_frames", s.model.min_frames);
      s.model.max_frames = m.value("max_frames", s.model.max_frames);
      s.model.sigma = m.value("sigma", s.model.sigma);
      s.model.companion_share = m.value("companion_share", s.model.companion_share);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedDocument, std::string("benchmark spec: ") + e.what());
  }
  return s;
}

namespace {

/// Single-sentence event over distinct terminals.
Grammar chain_grammar(std::span<const std::string> terminals, Rng& rng, int length) {
  std::vector<std::string> pool(terminals.begin(), terminals.end());
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(std::min<int>(length, static_cast<int>(pool.size()))));
  std::vector<std::string> sorted = pool;
  std::sort(sorted.begin(), sorted.end());
  return Grammar("EVENT", sorted, {Production{"EVENT", NodeKind::kAnd, pool, {}}});
}

}  // namespace

Benchmark generate_benchmark(const BenchmarkSpec& spec) {
  if (spec.events < 1 || spec.episodes_per_event < 0 || spec.corpus_size < 0 || spec.tracks < 0)
    fail(ErrorCode::kInvalidArgument, "benchmark counts must be non-negative");
  spec.noise.validate();
  Benchmark b;
  b.alphabets = benchmark_alphabets();
  Rng rng(spec.seed);
  for (int e = 0; e < spec.events; ++e) {
    BenchmarkEvent ev;
    ev.name = "event" + std::to_string(e);
    Rng erng(rng());
    if (spec.deterministic) {
      ev.grammar = chain_grammar(b.alphabets.subactivities, erng, 4);
      PlantedModelConfig mc = spec.model;
      mc.peak = 1.0;
      mc.min_frames = mc.max_frames = 80.0;
      mc.sigma = 1e-3;
      ev.model = planted_model(b.alphabets, erng, mc);
    } else {
      ev.grammar = planted_grammar(b.alphabets.subactivities, erng, spec.grammar);
      ev.model = planted_model(b.alphabets, erng, spec.model);
    }
    for (int i = 0; i < spec.corpus_size; ++i) ev.corpus.push_back(sample_sentence(ev.grammar, erng));
    b.events.push_back(std::move(ev));
  }
  const NoiseModel noise = spec.deterministic ? NoiseModel::noiseless() : spec.noise;
  for (int i = 0; i < spec.episodes_per_event; ++i) {
    for (int e = 0; e < spec.events; ++e) {
      BenchmarkEpisode ep;
      char id[32];
      std::snprintf(id, sizeof id, "ep%04d", static_cast<int>(b.episodes.size()));
      ep.id = id;
      ep.event = b.events[e].name;
      EpisodeConfig cfg;
      cfg.tracks = spec.tracks;
      ep.episode = generate_episode(b.events[e].grammar, b.events[e].model, noise, rng(), cfg);
      ep.episode.truth.event = ep.event;
      b.episodes.push_back(std::move(ep));
    }
  }
  return b;
}

std::string format_corpus(std::span<const Sentence> corpus) {
  std::string out;
  for (const auto& s : corpus) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += ' ';
      out += s[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<Sentence> read_corpus(const std::string& path) {
  std::istringstream in(internal::read_file(path, "corpus"));
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    Sentence s;
    std::string w;
    while (ls >> w) s.push_back(w);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

void write_benchmark(const Benchmark& b, const BenchmarkSpec& spec, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "events", ec);
  fs::create_directories(fs::path(dir) / "episodes", ec);
  if (ec) fail(ErrorCode::kIo, "cannot create dataset directory: " + dir);
  internal::write_file((fs::path(dir) / "alphabets.json").string(), serialize_alphabets(b.alphabets),
                       "alphabets");
  internal::write_file((fs::path(dir) / "spec.json").string(), serialize_benchmark_spec(spec), "spec");
  ordered_json manifest;
  manifest["events"] = ordered_json::array();
  for (const auto& ev : b.events) {
    const fs::path ed = fs::path(dir) / "events" / ev.name;
    fs::create_directories(ed, ec);
    save_grammar(ev.grammar, (ed / "grammar.json").string());
    save_model(ev.model, (ed / "model.json").string());
    internal::write_file((ed / "corpus.txt").string(), format_corpus(ev.corpus), "corpus");
    manifest["events"].push_back(ev.name);
  }
  manifest["episodes"] = ordered_json::array();
  for (const auto& ep : b.episodes) {
    const fs::path pd = fs::path(dir) / "episodes" / ep.id;
    fs::create_directories(pd, ec);
    save_stream(ep.episode.stream, (pd / "stream.jsonl").string());
    save_parse(ep.episode.truth, b.alphabets, (pd / "truth.json").string());
    manifest["episodes"].push_back(ordered_json{{"id", ep.id},
                                                {"event", ep.event},
                                                {"frames", ep.episode.truth.num_frames()},
                                                {"track_objects", ep.episode.track_objects}});
  }
  internal::write_file((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n", "manifest");
}

Benchmark read_benchmark(const std::string& dir) {
  Benchmark b;
  b.alphabets = deserialize_alphabets(
      internal::read_file((fs::path(dir) / "alphabets.json").string(), "alphabets"));
  json manifest;
  try {
    manifest = json::parse(internal::read_file((fs::path(dir) / "manifest.json").string(), "manifest"));
    for (const auto& name : manifest.at("events")) {
      BenchmarkEvent ev;
      ev.name = name.get<std::string>();
      const fs::path ed = fs::path(dir) / "events" / ev.name;
      ev.grammar = load_grammar((ed / "grammar.json").string());
      ev.model = load_model((ed / "model.json").string());
      ev.corpus = read_corpus((ed / "corpus.txt").string());
      b.events.push_back(std::move(ev));
    }
    for (const auto& je : manifest.at("episodes")) {
      BenchmarkEpisode ep;
      ep.id = je.at("id").get<std::string>();
      ep.event = je.at("event").get<std::string>();
      const fs::path pd = fs::path(dir) / "episodes" / ep.id;
      ep.episode.stream = load_stream((pd / "stream.jsonl").string());
      ep.episode.truth = load_parse((pd / "truth.json").string(), b.alphabets);
      ep.episode.track_objects = je.value("track_objects", std::vector<int>{});
      validate_stream(ep.episode.stream, b.alphabets);
      b.episodes.push_back(std::move(ep));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedDocument, std::string("manifest: ") + e.what());
  }
  return b;
}

}  // namespace taog
