// include/taog/grammar.h

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

#ifndef TAOG_GRAMMAR_H_
#define TAOG_GRAMMAR_H_

// Temporal And-Or grammar: a stochastic context-free grammar whose And-nodes
// are ordered decompositions and whose Or-nodes are weighted switches. Terminals
// are sub-activity labels; the root is the event.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taog {

using Sentence = std::vector<std::string>;

/// Reserved corpus markers; they may never appear inside a grammar.
inline constexpr std::string_view kBeginMarker = "begin";
inline constexpr std::string_view kEndMarker = "end";

enum class NodeKind { kAnd, kOr };

std::string_view to_string(NodeKind kind);

struct Production {
  std::string head;
  NodeKind kind = NodeKind::kAnd;
  std::vector<std::string> children;
  /// Branch probabilities, parallel to `children`. Empty for And-nodes.
  std::vector<double> probabilities;

  bool operator==(const Production&) const = default;
};

/// Immutable, validated grammar. Symbols are interned to dense ids so the
/// parsers can work on integer sentences; the string surface is kept for I/O.
class Grammar {
 public:
  struct Rule {
    NodeKind kind = NodeKind::kAnd;
    std::vector<int> children;
    std::vector<double> probs;
    std::vector<double> log_probs;
    /// Shortest and longest terminal yield; kUnbounded when recursive.
    int min_yield = 0;
    int max_yield = 0;
  };

  static constexpr int kUnbounded = 1 << 28;

  Grammar() = default;

  /// Validates every invariant; throws taog::Error on violation. Or-branch
  /// sums within 1e-6 of one are accepted and renormalized when they are off
  /// by more than 1e-9.
  Grammar(std::string root, std::vector<std::string> terminals,
          std::vector<Production> productions);

  const std::string& root() const { return root_; }
  const std::vector<std::string>& terminals() const { return terminals_; }
  /// Productions in declaration order.
  const std::vector<Production>& productions() const { return productions_; }
  const Production* find(std::string_view head) const;

  bool is_terminal(std::string_view symbol) const;
  /// True when some nonterminal can derive a sentential form containing itself.
  bool is_recursive() const { return recursive_; }

  int num_symbols() const { return static_cast<int>(names_.size()); }
  int root_id() const { return root_id_; }
  /// -1 when the symbol is unknown.
  int id(std::string_view symbol) const;
  const std::string& name(int id) const { return names_[id]; }
  bool terminal(int id) const { return is_terminal_[id]; }
  const Rule& rule(int id) const { return rules_[id]; }
  /// Terminal ids in declaration order.
  const std::vector<int>& terminal_ids() const { return terminal_ids_; }

  /// Maps a sentence to terminal ids; unknown or non-terminal tokens map to -1.
  std::vector<int> encode(std::span<const std::string> sentence) const;
  Sentence decode(std::span<const int> ids) const;

  /// Structural equality: same root, terminal set and productions (by head),
  /// with bit-identical probabilities.
  friend bool operator==(const Grammar& a, const Grammar& b);

 private:
  void build();

  std::string root_;
  std::vector<std::string> terminals_;
  std::vector<Production> productions_;

  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
  std::vector<bool> is_terminal_;
  std::vector<Rule> rules_;
  std::vector<int> terminal_ids_;
  int root_id_ = -1;
  bool recursive_ = false;
};

/// A derivation. Or-nodes record the chosen branch index; leaves are terminals.
struct ParseTree {
  std::string symbol;
  int chosen_branch = -1;
  std::vector<ParseTree> children;

  Sentence frontier() const;
  bool operator==(const ParseTree&) const = default;
};

inline constexpr int kDefaultMaxDepth = 64;

Sentence sample_sentence(const Grammar& grammar, std::mt19937_64& rng,
                         int max_depth = kDefaultMaxDepth);
Sentence sample_sentence(const Grammar& grammar, std::uint64_t seed,
                         int max_depth = kDefaultMaxDepth);

struct ViterbiResult {
  double probability = 0.0;
  double log_probability = 0.0;
  std::optional<ParseTree> tree;
};

/// Probability of the single best parse tree. Equal-probability trees are
/// resolved toward the lower branch index at the leftmost differing Or-node.
ViterbiResult viterbi_likelihood(const Grammar& grammar, const Sentence& sentence);
ViterbiResult viterbi_likelihood(const Grammar& grammar, std::span<const int> sentence);

/// Sum over all parse trees. Throws kDepthExceeded on a unit-production cycle.
double sentence_likelihood(const Grammar& grammar, const Sentence& sentence);
double sentence_log_likelihood(const Grammar& grammar, std::span<const int> sentence);

std::string serialize_grammar(const Grammar& grammar);
Grammar deserialize_grammar(std::string_view text);
Grammar load_grammar(const std::string& path);
void save_grammar(const Grammar& grammar, const std::string& path);

}  // namespace taog

#endif  // TAOG_GRAMMAR_H_
