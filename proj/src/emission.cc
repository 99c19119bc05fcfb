// src/emission.cc

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

#include "taog/emission.h"

#include <cmath>

#include "io_util.h"
#include "json.hpp"
#include "taog/error.h"
#include "taog/logmath.h"

namespace taog {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_row(const std::vector<double>& row, std::size_t size, const std::string& what) {
  if (row.size() != size) fail(ErrorCode::kMalformedDocument, what + ": wrong row length");
  double total = 0.0;
  for (double x : row) {
    if (!(x >= 0.0) || x > 1.0) fail(ErrorCode::kNormalization, what + ": entry outside [0, 1]");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorCode::kNormalization, what + ": row does not sum to 1");
}

std::vector<double> normalized_counts(const std::vector<double>& counts, double smoothing) {
  double total = 0.0;
  for (double c : counts) total += c;
  std::vector<double> out(counts.size());
  const double denom = total + smoothing * static_cast<double>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = (counts[i] + smoothing) / denom;
  return out;
}

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

void check_label(int x, std::size_t n, const char* what) {
  if (x < 0 || x >= static_cast<int>(n))
    fail(ErrorCode::kInvalidArgument, std::string(what) + " label out of range");
}

}  // namespace

void EmissionModel::validate() const {
  const std::size_t S = alphabets.subactivities.size();
  if (S == 0) fail(ErrorCode::kMalformedDocument, "model has no sub-activities");
  if (actions_given_s.size() != S || objects_given_s.size() != S ||
      affordances_given_s.size() != S || duration.size() != S || prior_s.size() != S) {
    fail(ErrorCode::kMalformedDocument, "model tables do not match the sub-activity alphabet");
  }
  for (std::size_t s = 0; s < S; ++s) {
    const std::string& name = alphabets.subactivities[s];
    check_row(actions_given_s[s], alphabets.actions.size(), "p(action|" + name + ")");
    check_row(objects_given_s[s], alphabets.objects.size(), "p(object|" + name + ")");
    check_row(affordances_given_s[s], alphabets.affordances.size(), "p(affordance|" + name + ")");
    if (!(duration[s].sigma > 0.0) || !std::isfinite(duration[s].mu))
      fail(ErrorCode::kMalformedDocument, "invalid duration parameters for " + name);
  }
  check_row(prior_s, S, "p(s)");
}

EmissionModel learn_emissions(std::span<const Segment> segments, const Alphabets& alphabets,
                              double smoothing) {
  if (!(smoothing >= 0.0)) fail(ErrorCode::kInvalidArgument, "smoothing must be >= 0");
  const std::size_t S = alphabets.subactivities.size();
  const std::size_t A = alphabets.actions.size(), O = alphabets.objects.size(),
                    U = alphabets.affordances.size();
  std::vector<std::vector<double>> ca(S, std::vector<double>(A)), co(S, std::vector<double>(O)),
      cu(S, std::vector<double>(U));
  std::vector<double> cs(S);
  std::vector<std::vector<double>> logs(S);
  const int stationary = index_of(alphabets.affordances, "stationary");
  for (const auto& seg : segments) {
    check_label(seg.s, S, "sub-activity");
    check_label(seg.a, A, "action");
    if (seg.length() < 1) fail(ErrorCode::kInvalidArgument, "segment durations must be >= 1");
    ca[seg.s][seg.a] += 1.0;
    // Objects count on the tracks being acted on (affordance other than
    // `stationary`); background tracks say nothing about the sub-activity.
    bool acted = false;
    for (std::size_t j = 0; j < seg.o.size() && j < seg.u.size(); ++j) acted |= seg.u[j] != stationary;
    for (std::size_t j = 0; j < seg.o.size(); ++j) {
      const int o = seg.o[j];
      check_label(o, O, "object");
      if (!acted || stationary < 0 || j >= seg.u.size() || seg.u[j] != stationary) co[seg.s][o] += 1.0;
    }
    for (int u : seg.u) {
      check_label(u, U, "affordance");
      cu[seg.s][u] += 1.0;
    }
    cs[seg.s] += 1.0;
    logs[seg.s].push_back(std::log(static_cast<double>(seg.length())));
  }

  EmissionModel m;
  m.alphabets = alphabets;
  m.defaulted.assign(S, false);
  for (std::size_t s = 0; s < S; ++s) {
    const auto& l = logs[s];
    if (l.empty()) {
      m.defaulted[s] = true;
      m.actions_given_s.push_back(uniform(A));
      m.objects_given_s.push_back(uniform(O));
      m.affordances_given_s.push_back(uniform(U));
      m.duration.push_back(kDefaultDuration);
      continue;
    }
    auto row_or_uniform = [&](const std::vector<double>& c) {
      double total = 0.0;
      for (double x : c) total += x;
      return total + smoothing > 0.0 ? normalized_counts(c, smoothing) : uniform(c.size());
    };
    m.actions_given_s.push_back(row_or_uniform(ca[s]));
    // Object-free segments leave the object rows uninformed.
    m.objects_given_s.push_back(row_or_uniform(co[s]));
    m.affordances_given_s.push_back(row_or_uniform(cu[s]));
    double mean = 0.0;
    for (double x : l) mean += x;
    mean /= static_cast<double>(l.size());
    double sigma = 0.0;
    if (l.size() >= 2) {
      double ss = 0.0;
      for (double x : l) ss += (x - mean) * (x - mean);
      sigma = std::sqrt(ss / static_cast<double>(l.size() - 1));
    }
    m.duration.push_back(Duration{mean, std::max(sigma, kMinDurationSigma)});
  }
  if (segments.empty()) {
    m.prior_s = uniform(S);
  } else {
    // Unsmoothed segment frequency; unseen sub-activities keep probability 0.
    m.prior_s = normalized_counts(cs, 0.0);
  }
  return m;
}

double segment_prior(int a, std::span<const int> o, std::span<const int> u, int duration, int s,
                     const EmissionModel& model) {
  check_label(s, model.alphabets.subactivities.size(), "sub-activity");
  check_label(a, model.alphabets.actions.size(), "action");
  double total = safe_log(model.actions_given_s[s][a]);
  for (int x : o) {
    check_label(x, model.alphabets.objects.size(), "object");
    total += safe_log(model.objects_given_s[s][x]);
  }
  for (int x : u) {
    check_label(x, model.alphabets.affordances.size(), "affordance");
    total += safe_log(model.affordances_given_s[s][x]);
  }
  const Duration& d = model.duration[s];
  return total + log_normal_log_pdf(static_cast<double>(duration), d.mu, d.sigma);
}

double segment_prior(const Segment& seg, const EmissionModel& model) {
  return segment_prior(seg.a, seg.o, seg.u, seg.length(), seg.s, model);
}

std::vector<int> to_grammar_ids(std::span<const int> subactivities, const EmissionModel& model,
                                const Grammar& grammar) {
  std::vector<int> out;
  out.reserve(subactivities.size());
  for (int s : subactivities) {
    check_label(s, model.alphabets.subactivities.size(), "sub-activity");
    const int id = grammar.id(model.alphabets.subactivities[s]);
    out.push_back(id >= 0 && grammar.terminal(id) ? id : -1);
  }
  return out;
}

double parse_graph_prior(std::span<const Segment> segments, const Grammar& grammar,
                         const EmissionModel& model) {
  double total = 0.0;
  std::vector<int> sentence;
  for (const auto& seg : segments) {
    total += segment_prior(seg, model);
    sentence.push_back(seg.s);
  }
  const std::vector<int> ids = to_grammar_ids(sentence, model, grammar);
  return total + viterbi_likelihood(grammar, std::span<const int>(ids)).log_probability;
}

// ---------------------------------------------------------------------------

EmissionLogTables::EmissionLogTables(const EmissionModel& model)
    : num_subactivities(model.num_subactivities()), duration(model.duration) {
  const int S = num_subactivities;
  auto transpose = [&](const std::vector<std::vector<double>>& rows, std::size_t n) {
    std::vector<std::vector<double>> out(n, std::vector<double>(S));
    for (int s = 0; s < S; ++s)
      for (std::size_t x = 0; x < n; ++x) out[x][s] = safe_log(rows[s][x]);
    return out;
  };
  action = transpose(model.actions_given_s, model.alphabets.actions.size());
  object = transpose(model.objects_given_s, model.alphabets.objects.size());
  affordance = transpose(model.affordances_given_s, model.alphabets.affordances.size());
  for (double p : model.prior_s) log_prior.push_back(safe_log(p));
}

double EmissionLogTables::log_duration(int s, int frames) const {
  return log_normal_log_pdf(static_cast<double>(frames), duration[s].mu, duration[s].sigma);
}

// ---------------------------------------------------------------------------

namespace {

ordered_json rows_to_json(const std::vector<std::vector<double>>& rows) {
  auto out = ordered_json::array();
  for (const auto& r : rows) {
    auto jr = ordered_json::array();
    for (double x : r) jr.push_back(internal::format_double(x));
    out.push_back(std::move(jr));
  }
  return out;
}

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size()) return v;
  }
  fail(ErrorCode::kMalformedDocument, "expected a decimal");
}

std::vector<std::vector<double>> rows_from_json(const json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& jr : j) {
    std::vector<double> r;
    for (const auto& x : jr) r.push_back(number(x));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string serialize_model(const EmissionModel& m) {
  ordered_json doc;
  doc["alphabets"] = ordered_json::parse(serialize_alphabets(m.alphabets));
  auto prior = ordered_json::array();
  for (double p : m.prior_s) prior.push_back(internal::format_double(p));
  doc["prior"] = std::move(prior);
  doc["actions_given_s"] = rows_to_json(m.actions_given_s);
  doc["objects_given_s"] = rows_to_json(m.objects_given_s);
  doc["affordances_given_s"] = rows_to_json(m.affordances_given_s);
  auto dur = ordered_json::array();
  for (std::size_t s = 0; s < m.duration.size(); ++s) {
    ordered_json d;
    d["mu"] = internal::format_double(m.duration[s].mu);
    d["sigma"] = internal::format_double(m.duration[s].sigma);
    d["defaulted"] = s < m.defaulted.size() && m.defaulted[s];
    dur.push_back(std::move(d));
  }
  doc["duration"] = std::move(dur);
  return doc.dump(2) + "\n";
}

EmissionModel deserialize_model(std::string_view text) {
  EmissionModel m;
  try {
    const json doc = json::parse(text);
    m.alphabets = deserialize_alphabets(doc.at("alphabets").dump());
    for (const auto& x : doc.at("prior")) m.prior_s.push_back(number(x));
    m.actions_given_s = rows_from_json(doc.at("actions_given_s"));
    m.objects_given_s = rows_from_json(doc.at("objects_given_s"));
    m.affordances_given_s = rows_from_json(doc.at("affordances_given_s"));
    for (const auto& d : doc.at("duration")) {
      m.duration.push_back(Duration{number(d.at("mu")), number(d.at("sigma"))});
      m.defaulted.push_back(d.value("defaulted", false));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedDocument, std::string("model document: ") + e.what());
  }
  m.validate();
  return m;
}

EmissionModel load_model(const std::string& path) {
  return deserialize_model(internal::read_file(path, "model"));
}

void save_model(const EmissionModel& model, const std::string& path) {
  internal::write_file(path, serialize_model(model), "model");
}

}  // namespace taog
