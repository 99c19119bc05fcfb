// src/earley.cc

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

#include "taog/earley.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "inside_chart.h"
#include "taog/logmath.h"

namespace taog {

std::vector<EarleyRule> compile_earley_rules(const Grammar& grammar) {
  std::vector<EarleyRule> rules;
  rules.push_back(EarleyRule{-1, {grammar.root_id()}, 1.0});
  for (int v = 0; v < grammar.num_symbols(); ++v) {
    if (grammar.terminal(v)) continue;
    const auto& r = grammar.rule(v);
    if (r.kind == NodeKind::kAnd) {
      rules.push_back(EarleyRule{v, r.children, 1.0});
    } else {
      for (std::size_t b = 0; b < r.children.size(); ++b) {
        rules.push_back(EarleyRule{v, {r.children[b]}, r.probs[b]});
      }
    }
  }
  return rules;
}

namespace {

std::uint64_t state_key(const EarleyState& s) {
  return (static_cast<std::uint64_t>(s.rule) << 42) | (static_cast<std::uint64_t>(s.dot) << 21) |
         static_cast<std::uint64_t>(s.origin);
}

}  // namespace

EarleyChart parse_prefix(const Grammar& grammar, std::span<const int> prefix) {
  EarleyChart chart;
  chart.grammar_ = &grammar;
  chart.rules_ = std::make_shared<const std::vector<EarleyRule>>(compile_earley_rules(grammar));
  chart.input_.assign(prefix.begin(), prefix.end());
  const auto& rules = *chart.rules_;

  std::vector<std::vector<int>> by_head(grammar.num_symbols());
  for (std::size_t r = 1; r < rules.size(); ++r) by_head[rules[r].head].push_back(static_cast<int>(r));

  const int n = static_cast<int>(prefix.size());
  auto& sets = chart.sets_;
  std::vector<std::unordered_set<std::uint64_t>> seen;
  auto add = [&](int k, EarleyState s) {
    if (seen[k].insert(state_key(s)).second) sets[k].push_back(s);
  };

  sets.emplace_back();
  seen.emplace_back();
  add(0, EarleyState{0, 0, 0});
  for (int k = 0;; ++k) {
    // Prediction and completion to closure.
    for (std::size_t idx = 0; idx < sets[k].size(); ++idx) {
      const EarleyState s = sets[k][idx];
      const EarleyRule& rule = rules[s.rule];
      if (s.dot < static_cast<int>(rule.body.size())) {
        const int sym = rule.body[s.dot];
        if (!grammar.terminal(sym)) {
          for (int r : by_head[sym]) add(k, EarleyState{r, 0, k});
        }
      } else if (rule.head >= 0) {
        for (std::size_t j = 0; j < sets[s.origin].size(); ++j) {
          const EarleyState& p = sets[s.origin][j];
          const EarleyRule& pr = rules[p.rule];
          if (p.dot < static_cast<int>(pr.body.size()) && pr.body[p.dot] == rule.head) {
            add(k, EarleyState{p.rule, p.dot + 1, p.origin});
          }
        }
      }
    }
    if (k == n) break;
    // Scanning.
    sets.emplace_back();
    seen.emplace_back();
    const int token = prefix[k];
    for (const EarleyState& s : sets[k]) {
      const EarleyRule& rule = rules[s.rule];
      if (s.dot < static_cast<int>(rule.body.size()) && rule.body[s.dot] == token && token >= 0 &&
          grammar.terminal(token)) {
        add(k + 1, EarleyState{s.rule, s.dot + 1, s.origin});
      }
    }
    if (sets[k + 1].empty()) {
      chart.failed_at_ = k + 1;
      break;
    }
  }
  return chart;
}

EarleyChart parse_prefix(const Grammar& grammar, const Sentence& prefix) {
  return parse_prefix(grammar, std::span<const int>(grammar.encode(prefix)));
}

std::vector<int> EarleyChart::expected(int k) const {
  std::vector<int> out;
  if (k < 0 || k >= static_cast<int>(sets_.size())) return out;
  for (const EarleyState& s : sets_[k]) {
    const EarleyRule& rule = (*rules_)[s.rule];
    if (s.dot < static_cast<int>(rule.body.size()) && grammar_->terminal(rule.body[s.dot])) {
      out.push_back(rule.body[s.dot]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool EarleyChart::complete() const {
  if (!accepted() || input_.empty()) return false;
  for (const EarleyState& s : sets_.back())
    if (s.rule == 0 && s.dot == 1 && s.origin == 0) return true;
  return false;
}

std::string EarleyChart::describe(const EarleyState& s) const {
  const EarleyRule& rule = (*rules_)[s.rule];
  std::ostringstream out;
  out << "(" << (rule.head < 0 ? std::string("START") : grammar_->name(rule.head)) << " ->";
  for (std::size_t i = 0; i <= rule.body.size(); ++i) {
    if (static_cast<int>(i) == s.dot) out << " .";
    if (i < rule.body.size()) out << " " << grammar_->name(rule.body[i]);
  }
  out << ", " << s.origin << ")";
  return out.str();
}

// ---------------------------------------------------------------------------
// Prefix likelihood

namespace {

/// log P(X yields a string that has w[i:n) as a prefix), for i < n. The prefix
/// ends inside exactly one child of an And-node because no rule is nullable.
class PrefixChart {
 public:
  PrefixChart(const Grammar& g, std::span<const int> w)
      : g_(g), w_(w), n_(static_cast<int>(w.size())), inside_(g, w),
        memo_(static_cast<std::size_t>(g.num_symbols()) * n_, internal::kUnset) {}

  double prefix(int sym, int i) {
    if (g_.terminal(sym)) return (n_ - i == 1 && w_[i] == sym) ? 0.0 : kNegInf;
    const auto& r = g_.rule(sym);
    if (r.max_yield < n_ - i) return kNegInf;
    const std::size_t key = static_cast<std::size_t>(sym) * n_ + i;
    if (!std::isnan(memo_[key])) return memo_[key];
    double total = kNegInf;
    if (r.kind == NodeKind::kOr) {
      for (std::size_t b = 0; b < r.children.size(); ++b) {
        total = log_add(total, r.log_probs[b] + prefix(r.children[b], i));
      }
    } else {
      // cur[p]: log P(children[0..c) derive exactly w[i:p)), p < n.
      std::vector<double> cur(n_, kNegInf), next(n_);
      cur[i] = 0.0;
      const int m = static_cast<int>(r.children.size());
      for (int c = 0; c < m; ++c) {
        const int child = r.children[c];
        for (int p = i; p < n_; ++p) {
          if (cur[p] == kNegInf) continue;
          total = log_add(total, cur[p] + prefix(child, p));
        }
        if (c == m - 1) break;
        std::fill(next.begin(), next.end(), kNegInf);
        for (int p = i; p < n_; ++p) {
          if (cur[p] == kNegInf) continue;
          for (int q = p + 1; q < n_; ++q) {
            double s = inside_.span(child, p, q);
            if (s != kNegInf) next[q] = log_add(next[q], cur[p] + s);
          }
        }
        std::swap(cur, next);
      }
    }
    memo_[key] = total;
    return total;
  }

 private:
  const Grammar& g_;
  std::span<const int> w_;
  int n_;
  internal::InsideChart inside_;
  std::vector<double> memo_;
};

/// Leftmost-derivation enumeration of completions, pruned at `cutoff` mass.
PrefixLikelihood enumerate_prefix(const Grammar& g, std::span<const int> w, double cutoff) {
  struct Form {
    std::vector<int> pending;  // symbols still to expand, back() is leftmost
    int matched = 0;
    double prob = 1.0;
    int idle = 0;  // expansions since the last scanned token
  };
  PrefixLikelihood out;
  const int n = static_cast<int>(w.size());
  double total = 0.0;
  std::vector<Form> stack;
  stack.push_back(Form{{g.root_id()}, 0, 1.0, 0});
  while (!stack.empty()) {
    Form f = std::move(stack.back());
    stack.pop_back();
    bool alive = true;
    while (alive) {
      if (f.matched == n) {
        total += f.prob;
        break;
      }
      if (f.pending.empty()) break;
      const int sym = f.pending.back();
      if (g.terminal(sym)) {
        if (sym != w[f.matched]) break;
        f.pending.pop_back();
        ++f.matched;
        f.idle = 0;
        continue;
      }
      if (++f.idle > kDefaultMaxDepth) {
        out.truncated = true;
        break;
      }
      f.pending.pop_back();
      const auto& r = g.rule(sym);
      if (r.kind == NodeKind::kAnd) {
        for (auto it = r.children.rbegin(); it != r.children.rend(); ++it) f.pending.push_back(*it);
        continue;
      }
      for (std::size_t b = 0; b < r.children.size(); ++b) {
        Form next = f;
        next.prob *= r.probs[b];
        if (next.prob < cutoff) {
          out.truncated = true;
          continue;
        }
        next.pending.push_back(r.children[b]);
        stack.push_back(std::move(next));
      }
      alive = false;
    }
  }
  out.probability = total;
  out.log_probability = safe_log(total);
  return out;
}

}  // namespace

PrefixLikelihood prefix_likelihood(const Grammar& grammar, std::span<const int> prefix,
                                   double cutoff) {
  PrefixLikelihood out;
  if (prefix.empty()) {
    out.probability = 1.0;
    out.log_probability = 0.0;
    return out;
  }
  if (std::any_of(prefix.begin(), prefix.end(), [](int t) { return t < 0; })) {
    out.log_probability = kNegInf;
    return out;
  }
  if (grammar.is_recursive()) return enumerate_prefix(grammar, prefix, cutoff);
  PrefixChart chart(grammar, prefix);
  out.log_probability = chart.prefix(grammar.root_id(), 0);
  out.probability = std::exp(out.log_probability);
  return out;
}

PrefixLikelihood prefix_likelihood(const Grammar& grammar, const Sentence& prefix, double cutoff) {
  return prefix_likelihood(grammar, std::span<const int>(grammar.encode(prefix)), cutoff);
}

std::vector<ScoredSymbol> next_symbols(const EarleyChart& chart) {
  std::vector<ScoredSymbol> out;
  if (!chart.accepted()) return out;
  const Grammar& g = chart.grammar();
  const int k = static_cast<int>(chart.input().size());
  std::vector<int> extended = chart.input();
  extended.push_back(-1);
  for (int a : chart.expected(k)) {
    extended.back() = a;
    out.push_back(ScoredSymbol{g.name(a), prefix_likelihood(g, extended).probability});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t GrammarScorer::Hash::operator()(const std::vector<int>& v) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

double GrammarScorer::prefix_log_likelihood(std::span<const int> prefix) {
  std::vector<int> key(prefix.begin(), prefix.end());
  auto it = prefix_cache_.find(key);
  if (it != prefix_cache_.end()) return it->second;
  double v = prefix_likelihood(*grammar_, prefix).log_probability;
  prefix_cache_.emplace(std::move(key), v);
  return v;
}

double GrammarScorer::sentence_viterbi_log_likelihood(std::span<const int> sentence) {
  std::vector<int> key(sentence.begin(), sentence.end());
  auto it = viterbi_cache_.find(key);
  if (it != viterbi_cache_.end()) return it->second;
  double v = viterbi_likelihood(*grammar_, sentence).log_probability;
  viterbi_cache_.emplace(std::move(key), v);
  return v;
}

}  // namespace taog
