// include/taog/induction.h

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

#ifndef TAOG_INDUCTION_H_
#define TAOG_INDUCTION_H_

// Grammar induction from sub-activity sentences in the style of ADIOS: the
// corpus is loaded onto a graph as begin..end paths; significant patterns
// become And-nodes, interchangeable symbols become Or-nodes, and the residual
// paths become the alternatives of the event root.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taog/grammar.h"

namespace taog {

struct Corpus {
  std::string event_label;
  std::vector<Sentence> sentences;

  /// Non-empty sentences without the reserved begin/end markers.
  void validate() const;
};

struct InductionConfig {
  double eta = 0.9;        // ratio threshold
  double alpha = 0.1;      // significance level
  int context_size = 4;    // equivalence-class window
  double coverage = 0.5;   // neighbour overlap for class members
  int max_iterations = 10000;

  void validate() const;
};

class AdiosGraph {
 public:
  enum class SymbolKind { kMarker, kTerminal, kPattern, kClass };

  /// Each path element remembers what it replaced, so paths always expand
  /// back to the corpus.
  struct Token {
    int symbol = -1;
    std::vector<Token> parts;
  };

  static constexpr int kBegin = 0;
  static constexpr int kEnd = 1;

  explicit AdiosGraph(const Corpus& corpus);

  int num_paths() const { return static_cast<int>(paths_.size()); }
  int num_symbols() const { return static_cast<int>(names_.size()); }
  const std::string& name(int symbol) const { return names_[symbol]; }
  SymbolKind kind(int symbol) const { return kinds_[symbol]; }
  /// Pattern sequence or class members (sorted by name).
  const std::vector<int>& children(int symbol) const { return children_[symbol]; }
  /// -1 when unknown.
  int id(const std::string& name) const;

  /// Top-level symbols of path p, begin and end markers included.
  std::vector<int> path(int p) const;
  const std::vector<Token>& tokens(int p) const { return paths_[p]; }
  /// Symbols on all paths, markers included.
  long total_length() const;
  /// Number of positions where `subpath` occurs.
  int count(std::span<const int> subpath) const;

  Sentence expand(int p) const;
  std::vector<Sentence> expand_all() const;

  /// Replaces non-overlapping occurrences (left to right) with a new And
  /// symbol; returns its id.
  int rewire_pattern(std::span<const int> pattern);
  /// Replaces members sitting in `slot` of every window matching `context`
  /// with the class symbol; a class with the same members is reused. Returns
  /// the class id.
  int rewire_class(std::span<const int> context, int slot, std::span<const int> members);

 private:
  int add_symbol(const std::string& prefix, SymbolKind kind, std::vector<int> children);

  std::vector<std::string> names_;
  std::vector<SymbolKind> kinds_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<Token>> paths_;
  int next_pattern_ = 1, next_class_ = 1;
};

/// Right and left ratio profiles along `search_path`:
///   right[i] = l(s_0..s_{i+1}) / l(s_0..s_i)
///   left[i]  = l(s_i..s_{n-1}) / l(s_{i+1}..s_{n-1})
/// where l counts path occurrences; absent when the denominator is zero.
struct RatioProfile {
  std::vector<std::optional<double>> right, left;
};
RatioProfile path_ratios(const AdiosGraph& graph, std::span<const int> search_path);

/// P(X <= k) for X ~ Binomial(n, p).
double binomial_cdf(int k, int n, double p);

struct Pattern {
  std::vector<int> symbols;
  int count = 0;
};

/// Best significant pattern: every inner ratio >= eta, and at both edges the
/// most frequent extension is significantly rarer than eta (one-sided
/// binomial test at level alpha; reaching begin/end counts as an edge).
/// Shorter patterns win, then more frequent, then lexicographically smaller.
std::optional<Pattern> find_significant_pattern(const AdiosGraph& graph, const InductionConfig& config);

struct EquivalenceClass {
  /// Window of context_size symbols; `slot` is the wildcard position.
  std::vector<int> context;
  int slot = 0;
  std::vector<int> members;
};

/// Members seen in `slot` of windows matching `context`, when there are at
/// least two and every pair shares at least `coverage` of their
/// (previous, next) neighbour pairs (relative to the smaller set).
std::optional<EquivalenceClass> equivalence_class_at(const AdiosGraph& graph, std::span<const int> context,
                                                     int slot, const InductionConfig& config);
/// First qualifying class scanning windows in corpus order, wildcard slots
/// left to right.
std::optional<EquivalenceClass> find_equivalence_class(const AdiosGraph& graph, const InductionConfig& config);

/// Grammar built from the graph's symbols: root (named `root`) is an Or over
/// the distinct residual paths; all Or-nodes uniform.
Grammar graph_grammar(const AdiosGraph& graph, const std::string& root);

/// Pattern then class discovery per iteration until neither is found.
Grammar induce(const Corpus& corpus, const InductionConfig& config = {});

/// Or probabilities from Viterbi-parse branch counts with pseudo-count
/// `smoothing`. Throws kUnderivable naming the first sentence without a parse.
Grammar estimate_branch_probabilities(const Grammar& grammar, std::span<const Sentence> corpus,
                                      double smoothing = 0.0);

}  // namespace taog

#endif  // TAOG_INDUCTION_H_
