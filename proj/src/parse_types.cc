// src/parse_types.cc

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

#include "taog/parse_types.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "io_util.h"
#include "json.hpp"
#include "taog/error.h"
#include "taog/kernels.h"
#include "taog/logmath.h"

namespace taog {

using nlohmann::json;
using nlohmann::ordered_json;

int index_of(std::span<const std::string> alphabet, std::string_view label) {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == label) return static_cast<int>(i);
  return -1;
}

namespace {

void check_categorical(const std::vector<double>& p, std::size_t size, const char* what, int t) {
  if (p.size() != size) {
    fail(ErrorCode::kMalformedDocument, std::string(what) + " scores at frame " + std::to_string(t) +
                                            " have " + std::to_string(p.size()) + " entries, expected " +
                                            std::to_string(size));
  }
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      fail(ErrorCode::kMalformedDocument,
           std::string(what) + " score out of range at frame " + std::to_string(t));
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    fail(ErrorCode::kMalformedDocument,
         std::string(what) + " scores at frame " + std::to_string(t) + " sum to " +
             std::to_string(total));
  }
}

}  // namespace

void validate_stream(const DetectionStream& stream, const Alphabets& alphabets) {
  if (stream.empty()) return;
  const auto& first = stream.front().objects;
  for (std::size_t f = 0; f < stream.size(); ++f) {
    const auto& frame = stream[f];
    if (frame.t != static_cast<int>(f)) {
      fail(ErrorCode::kMalformedDocument, "frames must be numbered 0..T-1 in order; got t=" +
                                              std::to_string(frame.t) + " at position " +
                                              std::to_string(f));
    }
    check_categorical(frame.action_scores, alphabets.actions.size(), "action", frame.t);
    if (frame.objects.size() != first.size()) {
      fail(ErrorCode::kMalformedDocument, "object tracks change at frame " + std::to_string(frame.t));
    }
    for (std::size_t j = 0; j < frame.objects.size(); ++j) {
      const auto& o = frame.objects[j];
      if (o.object_id != first[j].object_id) {
        fail(ErrorCode::kMalformedDocument, "object ids change at frame " + std::to_string(frame.t));
      }
      check_categorical(o.object_scores, alphabets.objects.size(), "object", frame.t);
      check_categorical(o.affordance_scores, alphabets.affordances.size(), "affordance", frame.t);
    }
  }
}

std::vector<FrameLabels> ParseGraphSeq::frame_labels() const { return expand_segments(segments); }

std::vector<int> ParseGraphSeq::subactivity_sentence() const {
  std::vector<int> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.s);
  return out;
}

std::vector<Segment> merge_frames(std::span<const FrameLabels> frames, int first_frame) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const int t = first_frame + static_cast<int>(i);
    if (!out.empty() && out.back().labels() == frames[i]) {
      out.back().t2 = t;
      continue;
    }
    const auto& f = frames[i];
    out.push_back(Segment{t, t, f.s, f.a, f.o, f.u});
  }
  return out;
}

std::vector<FrameLabels> expand_segments(std::span<const Segment> segments) {
  std::vector<FrameLabels> out;
  for (const auto& s : segments) {
    for (int t = s.t1; t <= s.t2; ++t) out.push_back(s.labels());
  }
  return out;
}

// ---------------------------------------------------------------------------

StreamLogCumulants::StreamLogCumulants(int num_actions, int num_objects, int num_affordances,
                                       int num_tracks)
    : actions_(num_actions),
      objects_(num_objects),
      affordances_(num_affordances),
      tracks_(num_tracks),
      width_(num_actions + num_tracks * (num_objects + num_affordances)),
      cum_(static_cast<std::size_t>(width_), 0.0),
      row_(static_cast<std::size_t>(width_)) {}

void StreamLogCumulants::append(const DetectionFrame& frame) {
  if (static_cast<int>(frame.action_scores.size()) != actions_ ||
      static_cast<int>(frame.objects.size()) != tracks_) {
    fail(ErrorCode::kMalformedDocument, "frame shape does not match the stream");
  }
  auto put = [&](int offset, const std::vector<double>& p, int n) {
    if (static_cast<int>(p.size()) != n) fail(ErrorCode::kMalformedDocument, "frame shape mismatch");
    for (int i = 0; i < n; ++i) row_[offset + i] = std::log(std::max(p[i], kScoreFloor));
  };
  put(action_offset(), frame.action_scores, actions_);
  for (int j = 0; j < tracks_; ++j) {
    put(object_offset(j), frame.objects[j].object_scores, objects_);
    put(affordance_offset(j), frame.objects[j].affordance_scores, affordances_);
  }
  const std::size_t base = static_cast<std::size_t>(frames_) * width_;
  cum_.resize(base + 2 * static_cast<std::size_t>(width_));
  kernels::add({cum_.data() + base, static_cast<std::size_t>(width_)}, row_,
               {cum_.data() + base + width_, static_cast<std::size_t>(width_)});
  ++frames_;
}

void StreamLogCumulants::normalize(std::span<double> block) const {
  const double z = kernels::log_sum_exp(block);
  for (double& x : block) x -= z;
}

void StreamLogCumulants::interval(int t1, int t2, SegmentScoring mode, std::span<double> out) const {
  if (t1 < 0 || t2 < t1 || t2 >= frames_) {
    fail(ErrorCode::kInvalidArgument, "segment [" + std::to_string(t1) + ", " + std::to_string(t2) +
                                          "] outside stream of " + std::to_string(frames_) +
                                          " frames");
  }
  const std::size_t w = static_cast<std::size_t>(width_);
  const double scale = mode == SegmentScoring::kGeometricMean ? 1.0 / (t2 - t1 + 1) : 1.0;
  kernels::interval_mean({cum_.data() + (t2 + 1) * w, w}, {cum_.data() + t1 * w, w}, scale,
                         out.first(w));
  if (mode != SegmentScoring::kGeometricMean) return;
  normalize(out.subspan(action_offset(), actions_));
  for (int j = 0; j < tracks_; ++j) {
    normalize(out.subspan(object_offset(j), objects_));
    normalize(out.subspan(affordance_offset(j), affordances_));
  }
}

StreamLogCumulants make_cumulants(const DetectionStream& stream) {
  if (stream.empty()) return StreamLogCumulants();
  const auto& f0 = stream.front();
  const int objects = f0.objects.empty() ? 0 : static_cast<int>(f0.objects[0].object_scores.size());
  const int affordances =
      f0.objects.empty() ? 0 : static_cast<int>(f0.objects[0].affordance_scores.size());
  StreamLogCumulants c(static_cast<int>(f0.action_scores.size()), objects, affordances,
                       static_cast<int>(f0.objects.size()));
  for (const auto& f : stream) c.append(f);
  return c;
}

SegmentScores segment_average_scores(const DetectionStream& stream, int t1, int t2) {
  if (t2 < t1) fail(ErrorCode::kInvalidArgument, "empty interval");
  if (t1 < 0 || t2 >= static_cast<int>(stream.size()))
    fail(ErrorCode::kInvalidArgument, "interval outside the stream");
  // Only the requested frames are needed; renumber them from zero.
  DetectionStream window(stream.begin() + t1, stream.begin() + t2 + 1);
  StreamLogCumulants c = make_cumulants(window);
  std::vector<double> logs(static_cast<std::size_t>(c.width()));
  c.interval(0, t2 - t1, SegmentScoring::kGeometricMean, logs);
  auto block = [&](int offset, int n) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[i] = std::exp(logs[offset + i]);
    return p;
  };
  SegmentScores out;
  out.action = block(c.action_offset(), c.num_actions());
  for (int j = 0; j < c.num_tracks(); ++j) {
    out.objects.push_back(block(c.object_offset(j), c.num_objects()));
    out.affordances.push_back(block(c.affordance_offset(j), c.num_affordances()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stream files

namespace {

std::vector<double> read_scores(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array()) fail(ErrorCode::kMalformedDocument, std::string(key) + " must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (x.is_number()) out.push_back(x.get<double>());
    else if (x.is_string()) out.push_back(std::stod(x.get<std::string>()));
    else fail(ErrorCode::kMalformedDocument, std::string(key) + " entries must be decimals");
  }
  return out;
}

}  // namespace

DetectionStream read_stream(std::istream& in) {
  DetectionStream out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      DetectionFrame f;
      f.t = j.at("t").get<int>();
      f.action_scores = read_scores(j, "action");
      if (j.contains("objects")) {
        for (const auto& jo : j.at("objects")) {
          ObjectDetection o;
          o.object_id = jo.at("id").get<int>();
          o.object_scores = read_scores(jo, "object");
          o.affordance_scores = read_scores(jo, "affordance");
          f.objects.push_back(std::move(o));
        }
      }
      out.push_back(std::move(f));
    } catch (const json::exception& e) {
      fail(ErrorCode::kMalformedDocument, "stream line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::kMalformedDocument, "stream line " + std::to_string(lineno) + ": bad number");
    }
  }
  return out;
}

DetectionStream load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open stream: " + path);
  return read_stream(in);
}

void write_stream(std::ostream& out, const DetectionStream& stream) {
  for (const auto& f : stream) {
    ordered_json j;
    j["t"] = f.t;
    j["action"] = f.action_scores;
    auto objs = ordered_json::array();
    for (const auto& o : f.objects) {
      ordered_json jo;
      jo["id"] = o.object_id;
      jo["object"] = o.object_scores;
      jo["affordance"] = o.affordance_scores;
      objs.push_back(std::move(jo));
    }
    j["objects"] = std::move(objs);
    out << j.dump() << '\n';
  }
}

void save_stream(const DetectionStream& stream, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write stream: " + path);
  write_stream(out, stream);
}

// ---------------------------------------------------------------------------
// Parse documents

namespace {

int lookup(const std::vector<std::string>& alphabet, const std::string& label, const char* what) {
  const int i = index_of(alphabet, label);
  if (i < 0) fail(ErrorCode::kUndefinedSymbol, std::string("unknown ") + what + " label: " + label);
  return i;
}

std::string name_of(const std::vector<std::string>& alphabet, int i, const char* what) {
  if (i < 0 || i >= static_cast<int>(alphabet.size()))
    fail(ErrorCode::kInvalidArgument, std::string(what) + " index out of range");
  return alphabet[i];
}

}  // namespace

std::string serialize_parse(const ParseGraphSeq& pg, const Alphabets& alphabets) {
  ordered_json doc;
  doc["event"] = pg.event;
  doc["log_posterior"] = pg.log_posterior;
  auto segs = ordered_json::array();
  for (const auto& s : pg.segments) {
    ordered_json js;
    js["t1"] = s.t1;
    js["t2"] = s.t2;
    js["s"] = name_of(alphabets.subactivities, s.s, "sub-activity");
    js["a"] = name_of(alphabets.actions, s.a, "action");
    std::vector<std::string> o, u;
    for (int x : s.o) o.push_back(name_of(alphabets.objects, x, "object"));
    for (int x : s.u) u.push_back(name_of(alphabets.affordances, x, "affordance"));
    js["o"] = o;
    js["u"] = u;
    segs.push_back(std::move(js));
  }
  doc["segments"] = std::move(segs);
  // Non-finite posteriors are not representable in JSON.
  if (!std::isfinite(pg.log_posterior)) doc["log_posterior"] = nullptr;
  return doc.dump(2) + "\n";
}

ParseGraphSeq deserialize_parse(std::string_view text, const Alphabets& alphabets) {
  ParseGraphSeq pg;
  try {
    const json doc = json::parse(text);
    pg.event = doc.value("event", std::string());
    if (doc.contains("log_posterior") && doc["log_posterior"].is_number())
      pg.log_posterior = doc["log_posterior"].get<double>();
    else
      pg.log_posterior = kNegInf;
    int next = 0;
    for (const auto& js : doc.at("segments")) {
      Segment s;
      s.t1 = js.at("t1").get<int>();
      s.t2 = js.at("t2").get<int>();
      if (s.t1 != next || s.t2 < s.t1)
        fail(ErrorCode::kMalformedDocument, "segments must tile the frames contiguously");
      next = s.t2 + 1;
      s.s = lookup(alphabets.subactivities, js.at("s").get<std::string>(), "sub-activity");
      s.a = lookup(alphabets.actions, js.at("a").get<std::string>(), "action");
      for (const auto& x : js.at("o")) s.o.push_back(lookup(alphabets.objects, x.get<std::string>(), "object"));
      for (const auto& x : js.at("u"))
        s.u.push_back(lookup(alphabets.affordances, x.get<std::string>(), "affordance"));
      pg.segments.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedDocument, std::string("parse document: ") + e.what());
  }
  return pg;
}

ParseGraphSeq load_parse(const std::string& path, const Alphabets& alphabets) {
  return deserialize_parse(internal::read_file(path, "parse document"), alphabets);
}

void save_parse(const ParseGraphSeq& pg, const Alphabets& alphabets, const std::string& path) {
  internal::write_file(path, serialize_parse(pg, alphabets), "parse document");
}

std::string serialize_alphabets(const Alphabets& a) {
  ordered_json doc;
  doc["subactivities"] = a.subactivities;
  doc["actions"] = a.actions;
  doc["objects"] = a.objects;
  doc["affordances"] = a.affordances;
  return doc.dump(2) + "\n";
}

Alphabets deserialize_alphabets(std::string_view text) {
  Alphabets a;
  try {
    const json doc = json::parse(text);
    a.subactivities = doc.at("subactivities").get<std::vector<std::string>>();
    a.actions = doc.at("actions").get<std::vector<std::string>>();
    a.objects = doc.at("objects").get<std::vector<std::string>>();
    a.affordances = doc.at("affordances").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedDocument, std::string("alphabet document: ") + e.what());
  }
  for (const auto* list : {&a.subactivities, &a.actions, &a.objects, &a.affordances}) {
    if (list->empty()) fail(ErrorCode::kMalformedDocument, "alphabets must be non-empty");
    std::vector<std::string> sorted = *list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorCode::kMalformedDocument, "duplicate label in alphabet");
  }
  return a;
}

}  // namespace taog
