// tests/oracles.h

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

#ifndef TAOG_TESTS_ORACLES_H_
#define TAOG_TESTS_ORACLES_H_

// Brute-force reference computations. These deliberately avoid the library's
// charts: derivations are enumerated from the Production list alone.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "taog/grammar.h"

namespace taog::oracle {

struct Derivation {
  Sentence sentence;
  double probability = 1.0;
  std::vector<int> choices;  // Or choices in preorder
};

inline std::vector<Derivation> derivations(const Grammar& g, const std::string& symbol) {
  const Production* p = g.find(symbol);
  if (p == nullptr) return {Derivation{{symbol}, 1.0, {}}};
  std::vector<Derivation> out;
  if (p->kind == NodeKind::kOr) {
    for (std::size_t b = 0; b < p->children.size(); ++b) {
      for (auto d : derivations(g, p->children[b])) {
        d.probability *= p->probabilities[b];
        d.choices.insert(d.choices.begin(), static_cast<int>(b));
        out.push_back(std::move(d));
      }
    }
    return out;
  }
  out.push_back(Derivation{});
  for (const auto& c : p->children) {
    auto sub = derivations(g, c);
    std::vector<Derivation> next;
    for (const auto& a : out) {
      for (const auto& b : sub) {
        Derivation d = a;
        d.sentence.insert(d.sentence.end(), b.sentence.begin(), b.sentence.end());
        d.probability *= b.probability;
        d.choices.insert(d.choices.end(), b.choices.begin(), b.choices.end());
        next.push_back(std::move(d));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Derivation> derivations(const Grammar& g) { return derivations(g, g.root()); }

/// Language with summed probabilities.
inline std::map<Sentence, double> language(const Grammar& g) {
  std::map<Sentence, double> out;
  for (const auto& d : derivations(g)) out[d.sentence] += d.probability;
  return out;
}

struct BestTree {
  double probability = 0.0;
  std::vector<int> choices;
  int count = 0;
};

inline std::map<Sentence, BestTree> best_trees(const Grammar& g) {
  std::map<Sentence, BestTree> out;
  for (const auto& d : derivations(g)) {
    auto& b = out[d.sentence];
    ++b.count;
    // Probabilities equal up to rounding are ties, broken by the Or choices.
    const bool tie = std::abs(d.probability - b.probability) <= 1e-12 * std::max(d.probability, b.probability);
    if (b.count == 1 || (!tie && d.probability > b.probability) || (tie && d.choices < b.choices)) {
      b.probability = d.probability;
      b.choices = d.choices;
    }
  }
  return out;
}

/// Terminals that can follow `prefix` in some language sentence.
inline std::set<std::string> continuations(const std::map<Sentence, double>& lang,
                                           const Sentence& prefix) {
  std::set<std::string> out;
  for (const auto& [s, p] : lang) {
    if (s.size() > prefix.size() && std::equal(prefix.begin(), prefix.end(), s.begin())) {
      out.insert(s[prefix.size()]);
    }
  }
  return out;
}

inline double completion_mass(const std::map<Sentence, double>& lang, const Sentence& prefix) {
  double total = 0.0;
  for (const auto& [s, p] : lang) {
    if (s.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), s.begin())) total += p;
  }
  return total;
}

/// Preorder Or choices of a parse tree.
inline void tree_choices(const ParseTree& t, std::vector<int>& out) {
  if (t.chosen_branch >= 0) out.push_back(t.chosen_branch);
  for (const auto& c : t.children) tree_choices(c, out);
}

inline Sentence words(const std::string& text) {
  Sentence out;
  std::string cur;
  for (char c : text) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace taog::oracle

#endif  // TAOG_TESTS_ORACLES_H_
