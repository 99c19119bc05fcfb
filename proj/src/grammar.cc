// src/grammar.cc

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

#include "taog/grammar.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "taog/error.h"
#include "taog/logmath.h"
#include "inside_chart.h"

namespace taog {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedDocument: return "malformed-document";
    case ErrorCode::kNormalization: return "normalization";
    case ErrorCode::kUndefinedSymbol: return "undefined-symbol";
    case ErrorCode::kInvalidGrammar: return "invalid-grammar";
    case ErrorCode::kDepthExceeded: return "depth-exceeded";
    case ErrorCode::kUnderivable: return "underivable";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kStage: return "stage";
  }
  return "unknown";
}

std::string_view to_string(NodeKind kind) {
  return kind == NodeKind::kAnd ? "And" : "Or";
}

namespace {

bool reserved(std::string_view s) { return s == kBeginMarker || s == kEndMarker; }

}  // namespace

Grammar::Grammar(std::string root, std::vector<std::string> terminals,
                 std::vector<Production> productions)
    : root_(std::move(root)),
      terminals_(std::move(terminals)),
      productions_(std::move(productions)) {
  build();
}

void Grammar::build() {
  names_.clear();
  ids_.clear();
  is_terminal_.clear();
  terminal_ids_.clear();

  for (const auto& t : terminals_) {
    if (t.empty()) fail(ErrorCode::kInvalidGrammar, "empty terminal name");
    if (reserved(t)) fail(ErrorCode::kInvalidGrammar, "reserved marker used as terminal: " + t);
    if (!ids_.emplace(t, static_cast<int>(names_.size())).second) {
      fail(ErrorCode::kInvalidGrammar, "duplicate terminal: " + t);
    }
    terminal_ids_.push_back(static_cast<int>(names_.size()));
    names_.push_back(t);
    is_terminal_.push_back(true);
  }
  for (const auto& p : productions_) {
    if (p.head.empty()) fail(ErrorCode::kInvalidGrammar, "empty production head");
    if (reserved(p.head)) fail(ErrorCode::kInvalidGrammar, "reserved marker used as head: " + p.head);
    auto it = ids_.find(p.head);
    if (it != ids_.end()) {
      if (is_terminal_[it->second]) fail(ErrorCode::kInvalidGrammar, "terminal has a production: " + p.head);
      fail(ErrorCode::kInvalidGrammar, "nonterminal has more than one production: " + p.head);
    }
    ids_.emplace(p.head, static_cast<int>(names_.size()));
    names_.push_back(p.head);
    is_terminal_.push_back(false);
  }

  auto root_it = ids_.find(root_);
  if (root_it == ids_.end()) fail(ErrorCode::kUndefinedSymbol, "root has no production: " + root_);
  if (is_terminal_[root_it->second]) fail(ErrorCode::kInvalidGrammar, "root must be a nonterminal: " + root_);
  root_id_ = root_it->second;

  rules_.assign(names_.size(), Rule{});
  for (auto& p : productions_) {
    Rule& r = rules_[ids_.at(p.head)];
    r.kind = p.kind;
    if (p.children.empty()) fail(ErrorCode::kInvalidGrammar, "production without children: " + p.head);
    for (const auto& c : p.children) {
      if (reserved(c)) fail(ErrorCode::kInvalidGrammar, "reserved marker inside production: " + p.head);
      auto it = ids_.find(c);
      if (it == ids_.end()) fail(ErrorCode::kUndefinedSymbol, "undefined symbol '" + c + "' in production " + p.head);
      r.children.push_back(it->second);
    }
    if (p.kind == NodeKind::kAnd) {
      if (!p.probabilities.empty()) fail(ErrorCode::kInvalidGrammar, "And-node with probabilities: " + p.head);
      continue;
    }
    if (p.probabilities.size() != p.children.size()) {
      fail(ErrorCode::kInvalidGrammar, "Or-node probability count mismatch: " + p.head);
    }
    double sum = 0.0;
    for (double q : p.probabilities) {
      if (!(q > 0.0 && q <= 1.0)) {
        fail(ErrorCode::kNormalization, "Or branch probability outside (0, 1] in " + p.head);
      }
      sum += q;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      fail(ErrorCode::kNormalization, "Or branch probabilities of " + p.head + " sum to " + std::to_string(sum));
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      for (double& q : p.probabilities) q /= sum;
    }
    r.probs = p.probabilities;
    for (double q : r.probs) r.log_probs.push_back(std::log(q));
  }

  // Reachability, recursion and productivity over the reachable part.
  const int n = num_symbols();
  std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
  recursive_ = false;
  std::function<void(int)> dfs = [&](int v) {
    color[v] = 1;
    if (!is_terminal_[v]) {
      for (int c : rules_[v].children) {
        if (color[c] == 1) recursive_ = true;
        else if (color[c] == 0) dfs(c);
      }
    }
    color[v] = 2;
  };
  dfs(root_id_);

  // Yield bounds by fixed point; a symbol with no finite yield is unproductive.
  constexpr int kInf = kUnbounded;
  std::vector<int> lo(n, kInf), hi(n, 0);
  for (int t : terminal_ids_) lo[t] = hi[t] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (is_terminal_[v]) continue;
      const Rule& r = rules_[v];
      long long best;
      if (r.kind == NodeKind::kAnd) {
        best = 0;
        for (int c : r.children) best = std::min<long long>(kInf, best + lo[c]);
      } else {
        best = kInf;
        for (int c : r.children) best = std::min<long long>(best, lo[c]);
      }
      if (best < lo[v]) {
        lo[v] = static_cast<int>(best);
        changed = true;
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (color[v] == 2 && lo[v] >= kInf) {
      fail(ErrorCode::kInvalidGrammar, "nonterminal derives no finite sentence: " + names_[v]);
    }
  }
  if (recursive_) {
    for (int v = 0; v < n; ++v) hi[v] = is_terminal_[v] ? 1 : kInf;
  } else {
    std::vector<int> order;
    std::vector<bool> seen(n, false);
    std::function<void(int)> post = [&](int v) {
      seen[v] = true;
      if (!is_terminal_[v])
        for (int c : rules_[v].children)
          if (!seen[c]) post(c);
      order.push_back(v);
    };
    for (int v = 0; v < n; ++v)
      if (!seen[v]) post(v);
    for (int v : order) {
      if (is_terminal_[v]) continue;
      const Rule& r = rules_[v];
      long long h = 0;
      for (int c : r.children) {
        if (r.kind == NodeKind::kAnd) h = std::min<long long>(kInf, h + hi[c]);
        else h = std::max<long long>(h, hi[c]);
      }
      hi[v] = static_cast<int>(h);
    }
  }
  for (int v = 0; v < n; ++v) {
    rules_[v].min_yield = lo[v];
    rules_[v].max_yield = hi[v];
  }
}

const Production* Grammar::find(std::string_view head) const {
  for (const auto& p : productions_)
    if (p.head == head) return &p;
  return nullptr;
}

bool Grammar::is_terminal(std::string_view symbol) const {
  int i = id(symbol);
  return i >= 0 && is_terminal_[i];
}

int Grammar::id(std::string_view symbol) const {
  auto it = ids_.find(std::string(symbol));
  return it == ids_.end() ? -1 : it->second;
}

std::vector<int> Grammar::encode(std::span<const std::string> sentence) const {
  std::vector<int> out;
  out.reserve(sentence.size());
  for (const auto& s : sentence) {
    int i = id(s);
    out.push_back(i >= 0 && is_terminal_[i] ? i : -1);
  }
  return out;
}

Sentence Grammar::decode(std::span<const int> ids) const {
  Sentence out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(names_.at(i));
  return out;
}

bool operator==(const Grammar& a, const Grammar& b) {
  if (a.root_ != b.root_) return false;
  std::set<std::string> ta(a.terminals_.begin(), a.terminals_.end());
  std::set<std::string> tb(b.terminals_.begin(), b.terminals_.end());
  if (ta != tb) return false;
  std::map<std::string, const Production*> pa, pb;
  for (const auto& p : a.productions_) pa[p.head] = &p;
  for (const auto& p : b.productions_) pb[p.head] = &p;
  if (pa.size() != pb.size()) return false;
  for (const auto& [head, p] : pa) {
    auto it = pb.find(head);
    if (it == pb.end() || !(*p == *it->second)) return false;
  }
  return true;
}

Sentence ParseTree::frontier() const {
  Sentence out;
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
    if (t.children.empty()) {
      out.push_back(t.symbol);
      return;
    }
    for (const auto& c : t.children) walk(c);
  };
  walk(*this);
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

void expand(const Grammar& g, int sym, int depth, int max_depth, std::mt19937_64& rng,
            std::vector<int>& out) {
  if (g.terminal(sym)) {
    out.push_back(sym);
    return;
  }
  if (depth > max_depth) {
    fail(ErrorCode::kDepthExceeded, "derivation depth exceeded " + std::to_string(max_depth));
  }
  const auto& r = g.rule(sym);
  if (r.kind == NodeKind::kAnd) {
    for (int c : r.children) expand(g, c, depth + 1, max_depth, rng, out);
    return;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  std::size_t pick = r.children.size() - 1;
  double acc = 0.0;
  for (std::size_t b = 0; b < r.children.size(); ++b) {
    acc += r.probs[b];
    if (u < acc) {
      pick = b;
      break;
    }
  }
  expand(g, r.children[pick], depth + 1, max_depth, rng, out);
}

}  // namespace

Sentence sample_sentence(const Grammar& grammar, std::mt19937_64& rng, int max_depth) {
  std::vector<int> ids;
  expand(grammar, grammar.root_id(), 0, max_depth, rng, ids);
  return grammar.decode(ids);
}

Sentence sample_sentence(const Grammar& grammar, std::uint64_t seed, int max_depth) {
  std::mt19937_64 rng(seed);
  return sample_sentence(grammar, rng, max_depth);
}

// ---------------------------------------------------------------------------
// Viterbi with deterministic tie-breaking on preorder Or choices.

namespace {


struct Best {
  double logp = kNegInf;
  std::vector<int> choices;  // Or choices in preorder
  int branch = -1;           // Or nodes
  std::vector<int> splits;   // And nodes: boundaries, size = children + 1
};

bool tie(double a, double b) {
  if (a == b) return true;
  if (a == kNegInf || b == kNegInf) return false;
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

/// True when (la, ca) is preferred over (lb, cb).
bool better(double la, const std::vector<int>& ca, double lb, const std::vector<int>& cb) {
  if (la == kNegInf) return false;
  if (lb == kNegInf) return true;
  if (!tie(la, lb)) return la > lb;
  return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

class ViterbiChart {
 public:
  ViterbiChart(const Grammar& g, std::span<const int> w)
      : g_(g), w_(w), n_(static_cast<int>(w.size())),
        memo_(static_cast<std::size_t>(g.num_symbols()) * (n_ + 1) * (n_ + 1)),
        state_(memo_.size(), 0) {}

  const Best& span(int sym, int i, int j) {
    static const Best kNone;
    static const Best kLeaf{0.0, {}, -1, {}};
    const int len = j - i;
    if (g_.terminal(sym)) return (len == 1 && w_[i] == sym) ? kLeaf : kNone;
    const auto& r = g_.rule(sym);
    if (len < r.min_yield || len > r.max_yield) return kNone;
    const std::size_t key = index(sym, i, j);
    if (state_[key] == 2) return memo_[key];
    if (state_[key] == 1) fail(ErrorCode::kDepthExceeded, "unit-production cycle at " + g_.name(sym));
    state_[key] = 1;
    Best out;
    if (r.kind == NodeKind::kOr) {
      for (std::size_t b = 0; b < r.children.size(); ++b) {
        const Best& child = span(r.children[b], i, j);
        if (child.logp == kNegInf) continue;
        std::vector<int> choices;
        choices.reserve(child.choices.size() + 1);
        choices.push_back(static_cast<int>(b));
        choices.insert(choices.end(), child.choices.begin(), child.choices.end());
        double lp = r.log_probs[b] + child.logp;
        if (better(lp, choices, out.logp, out.choices)) {
          out.logp = lp;
          out.choices = std::move(choices);
          out.branch = static_cast<int>(b);
        }
      }
    } else {
      out = sequence(r.children, i, j);
    }
    state_[key] = 2;
    memo_[key] = std::move(out);
    return memo_[key];
  }

  ParseTree tree(int sym, int i, int j) {
    ParseTree t;
    t.symbol = g_.name(sym);
    if (g_.terminal(sym)) return t;
    const Best& b = span(sym, i, j);
    const auto& r = g_.rule(sym);
    if (r.kind == NodeKind::kOr) {
      t.chosen_branch = b.branch;
      t.children.push_back(tree(r.children[b.branch], i, j));
    } else {
      for (std::size_t c = 0; c < r.children.size(); ++c) {
        t.children.push_back(tree(r.children[c], b.splits[c], b.splits[c + 1]));
      }
    }
    return t;
  }

 private:
  Best sequence(std::span<const int> body, int i, int j) {
    const int m = static_cast<int>(body.size());
    std::vector<Best> cur(n_ + 1), next(n_ + 1);
    cur[i].logp = 0.0;
    cur[i].splits = {i};
    for (int c = 0; c < m; ++c) {
      for (auto& e : next) e = Best{};
      const int remaining = m - c - 1;
      for (int p = i + c; p <= j - remaining - 1; ++p) {
        if (cur[p].logp == kNegInf) continue;
        for (int q = p + 1; q <= j - remaining; ++q) {
          if (c == m - 1 && q != j) continue;
          const Best& s = span(body[c], p, q);
          if (s.logp == kNegInf) continue;
          double lp = cur[p].logp + s.logp;
          std::vector<int> choices = cur[p].choices;
          choices.insert(choices.end(), s.choices.begin(), s.choices.end());
          if (better(lp, choices, next[q].logp, next[q].choices)) {
            next[q].logp = lp;
            next[q].choices = std::move(choices);
            next[q].splits = cur[p].splits;
            next[q].splits.push_back(q);
          }
        }
      }
      std::swap(cur, next);
    }
    return cur[j];
  }

  std::size_t index(int sym, int i, int j) const {
    return (static_cast<std::size_t>(sym) * (n_ + 1) + i) * (n_ + 1) + j;
  }

  const Grammar& g_;
  std::span<const int> w_;
  int n_;
  std::vector<Best> memo_;
  std::vector<char> state_;
};

bool all_known(std::span<const int> ids) {
  return std::all_of(ids.begin(), ids.end(), [](int i) { return i >= 0; });
}

}  // namespace

ViterbiResult viterbi_likelihood(const Grammar& grammar, std::span<const int> sentence) {
  ViterbiResult out;
  out.log_probability = kNegInf;
  if (sentence.empty() || !all_known(sentence)) return out;
  ViterbiChart chart(grammar, sentence);
  const int n = static_cast<int>(sentence.size());
  const Best& best = chart.span(grammar.root_id(), 0, n);
  if (best.logp == kNegInf) return out;
  out.log_probability = best.logp;
  out.probability = std::exp(best.logp);
  out.tree = chart.tree(grammar.root_id(), 0, n);
  return out;
}

ViterbiResult viterbi_likelihood(const Grammar& grammar, const Sentence& sentence) {
  return viterbi_likelihood(grammar, std::span<const int>(grammar.encode(sentence)));
}

double sentence_log_likelihood(const Grammar& grammar, std::span<const int> sentence) {
  if (sentence.empty() || !all_known(sentence)) return kNegInf;
  internal::InsideChart chart(grammar, sentence);
  return chart.span(grammar.root_id(), 0, static_cast<int>(sentence.size()));
}

double sentence_likelihood(const Grammar& grammar, const Sentence& sentence) {
  return std::exp(sentence_log_likelihood(grammar, grammar.encode(sentence)));
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string format_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

double parse_probability(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) fail(ErrorCode::kMalformedDocument, "probability must be a decimal string");
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    fail(ErrorCode::kMalformedDocument, "bad probability literal: " + s);
  }
  return v;
}

}  // namespace

std::string serialize_grammar(const Grammar& grammar) {
  nlohmann::ordered_json doc;
  doc["root"] = grammar.root();
  doc["terminals"] = grammar.terminals();
  auto prods = nlohmann::ordered_json::array();
  for (const auto& p : grammar.productions()) {
    nlohmann::ordered_json jp;
    jp["head"] = p.head;
    jp["kind"] = std::string(to_string(p.kind));
    jp["children"] = p.children;
    auto probs = nlohmann::ordered_json::array();
    for (double q : p.probabilities) probs.push_back(format_probability(q));
    jp["probabilities"] = probs;
    prods.push_back(std::move(jp));
  }
  doc["productions"] = std::move(prods);
  return doc.dump(2) + "\n";
}

Grammar deserialize_grammar(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMalformedDocument, std::string("grammar document: ") + e.what());
  }
  std::string root;
  std::vector<std::string> terminals;
  std::vector<Production> productions;
  try {
    root = doc.at("root").get<std::string>();
    terminals = doc.at("terminals").get<std::vector<std::string>>();
    for (const auto& jp : doc.at("productions")) {
      Production p;
      p.head = jp.at("head").get<std::string>();
      const std::string kind = jp.at("kind").get<std::string>();
      if (kind == "And") p.kind = NodeKind::kAnd;
      else if (kind == "Or") p.kind = NodeKind::kOr;
      else fail(ErrorCode::kMalformedDocument, "unknown production kind: " + kind);
      p.children = jp.at("children").get<std::vector<std::string>>();
      if (jp.contains("probabilities")) {
        for (const auto& q : jp.at("probabilities")) p.probabilities.push_back(parse_probability(q));
      }
      productions.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMalformedDocument, std::string("grammar document: ") + e.what());
  }
  return Grammar(std::move(root), std::move(terminals), std::move(productions));
}

Grammar load_grammar(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open grammar file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_grammar(ss.str());
}

void save_grammar(const Grammar& grammar, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write grammar file: " + path);
  out << serialize_grammar(grammar);
}

}  // namespace taog
