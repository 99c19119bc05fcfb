// include/taog/earley.h

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

#ifndef TAOG_EARLEY_H_
#define TAOG_EARLEY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "taog/grammar.h"

namespace taog {

/// Dotted rule (X -> alpha . beta, origin). `rule` indexes EarleyChart::rules().
struct EarleyState {
  int rule = 0;
  int dot = 0;
  int origin = 0;

  bool operator==(const EarleyState&) const = default;
};

/// One Earley production. And-nodes compile to a single rule; each Or branch
/// becomes its own single-symbol rule. Rule 0 is the synthetic start rule
/// whose head is -1 and whose body is the grammar root.
struct EarleyRule {
  int head = -1;
  std::vector<int> body;
  double probability = 1.0;
};

class EarleyChart {
 public:
  const Grammar& grammar() const { return *grammar_; }
  const std::vector<EarleyRule>& rules() const { return *rules_; }
  const std::vector<std::vector<EarleyState>>& state_sets() const { return sets_; }
  const std::vector<int>& input() const { return input_; }

  /// True when every prefix token was scanned.
  bool accepted() const { return !failed_at_.has_value(); }
  /// Position k (1-based) of the first empty state set.
  std::optional<int> failed_at() const { return failed_at_; }
  /// Terminals expected at position k: the symbols right of the dot in S(k).
  std::vector<int> expected(int k) const;
  /// True when the consumed input is a complete sentence.
  bool complete() const;

  std::string describe(const EarleyState& s) const;

 private:
  friend EarleyChart parse_prefix(const Grammar&, std::span<const int>);

  const Grammar* grammar_ = nullptr;
  std::shared_ptr<const std::vector<EarleyRule>> rules_;
  std::vector<std::vector<EarleyState>> sets_;
  std::vector<int> input_;
  std::optional<int> failed_at_;
};

std::vector<EarleyRule> compile_earley_rules(const Grammar& grammar);

/// The chart keeps a reference to `grammar`, which must outlive it.
EarleyChart parse_prefix(const Grammar& grammar, std::span<const int> prefix);
EarleyChart parse_prefix(const Grammar& grammar, const Sentence& prefix);

struct PrefixLikelihood {
  double probability = 0.0;
  double log_probability = 0.0;
  /// Set when mass below the cutoff was discarded (recursive grammars only).
  bool truncated = false;
};

inline constexpr double kDefaultMassCutoff = 1e-6;

/// Total probability of complete sentences that start with `prefix`. Exact for
/// non-recursive grammars; recursive grammars use bounded completion
/// enumeration with the given mass cutoff.
PrefixLikelihood prefix_likelihood(const Grammar& grammar, std::span<const int> prefix,
                                   double cutoff = kDefaultMassCutoff);
PrefixLikelihood prefix_likelihood(const Grammar& grammar, const Sentence& prefix,
                                   double cutoff = kDefaultMassCutoff);

struct ScoredSymbol {
  std::string symbol;
  double score = 0.0;
};

/// Prediction set: every terminal that may follow the consumed prefix, scored
/// by the prefix likelihood of the extended prefix.
std::vector<ScoredSymbol> next_symbols(const EarleyChart& chart);

/// Memoizes prefix and Viterbi log-likelihoods for one grammar. Not
/// thread-safe; use one per sampling chain.
class GrammarScorer {
 public:
  explicit GrammarScorer(const Grammar& grammar) : grammar_(&grammar) {}

  const Grammar& grammar() const { return *grammar_; }
  double prefix_log_likelihood(std::span<const int> prefix);
  double sentence_viterbi_log_likelihood(std::span<const int> sentence);

 private:
  struct Hash {
    std::size_t operator()(const std::vector<int>& v) const noexcept;
  };
  const Grammar* grammar_;
  std::unordered_map<std::vector<int>, double, Hash> prefix_cache_;
  std::unordered_map<std::vector<int>, double, Hash> viterbi_cache_;
};

}  // namespace taog

#endif  // TAOG_EARLEY_H_
