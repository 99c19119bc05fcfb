// src/lattice.cc

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

#include "taog/lattice.h"

#include <cmath>
#include <limits>

#include "taog/logmath.h"

namespace taog {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

class LatticeChart {
 public:
  LatticeChart(const Grammar& g, int n, const LeafScore& leaf)
      : g_(g), n_(n), leaf_(leaf),
        span_(static_cast<std::size_t>(g.num_symbols()) * (n + 1) * (n + 1), kUnset),
        span_busy_(span_.size(), false),
        prefix_(static_cast<std::size_t>(g.num_symbols()) * (n + 1), kUnset),
        prefix_busy_(prefix_.size(), false),
        free_(static_cast<std::size_t>(g.num_symbols()), kNegInf) {
    // Best unconstrained derivation per symbol, by relaxation (probabilities
    // are <= 1, so cycles never improve a derivation).
    for (int v = 0; v < g.num_symbols(); ++v)
      if (g.terminal(v)) free_[v] = 0.0;
    for (bool changed = true; changed;) {
      changed = false;
      for (int v = 0; v < g.num_symbols(); ++v) {
        if (g.terminal(v)) continue;
        const auto& r = g.rule(v);
        double best = kNegInf;
        if (r.kind == NodeKind::kOr) {
          for (std::size_t b = 0; b < r.children.size(); ++b)
            best = std::max(best, r.log_probs[b] + free_[r.children[b]]);
        } else {
          best = 0.0;
          for (int c : r.children) best += free_[c];
        }
        if (best > free_[v]) {
          free_[v] = best;
          changed = true;
        }
      }
    }
  }

  /// Best score of `sym` deriving exactly positions [i, j).
  double span(int sym, int i, int j) {
    if (g_.terminal(sym)) return leaf_(sym, i, j);
    const std::size_t key = (static_cast<std::size_t>(sym) * (n_ + 1) + i) * (n_ + 1) + j;
    if (!std::isnan(span_[key])) return span_[key];
    if (span_busy_[key]) return kNegInf;
    span_busy_[key] = true;
    const auto& r = g_.rule(sym);
    double best = kNegInf;
    if (r.kind == NodeKind::kOr) {
      for (std::size_t b = 0; b < r.children.size(); ++b)
        best = std::max(best, r.log_probs[b] + span(r.children[b], i, j));
    } else {
      best = sequence(r.children, 0, i, j, nullptr);
    }
    span_busy_[key] = false;
    span_[key] = best;
    return best;
  }

  /// Children [c, end) deriving exactly [i, j); records the split points.
  double sequence(const std::vector<int>& children, std::size_t c, int i, int j,
                  std::vector<int>* splits) {
    const std::size_t m = children.size();
    if (c + 1 == m) return span(children[c], i, j);
    double best = kNegInf;
    int best_p = -1;
    const int remaining = static_cast<int>(m - c - 1);
    for (int p = i + 1; p + remaining <= j; ++p) {
      const double head = span(children[c], i, p);
      if (head == kNegInf) continue;
      const double v = head + sequence(children, c + 1, p, j, nullptr);
      if (v > best) {
        best = v;
        best_p = p;
      }
    }
    if (splits != nullptr && best_p >= 0) {
      splits->push_back(best_p);
      sequence(children, c + 1, best_p, j, splits);
    }
    return best;
  }

  /// Best score of `sym` deriving a string that covers [i, n) and continues
  /// freely afterwards.
  double prefix(int sym, int i) {
    if (g_.terminal(sym)) return leaf_(sym, i, n_);
    const std::size_t key = static_cast<std::size_t>(sym) * (n_ + 1) + i;
    if (!std::isnan(prefix_[key])) return prefix_[key];
    if (prefix_busy_[key]) return kNegInf;
    prefix_busy_[key] = true;
    const auto& r = g_.rule(sym);
    double best = kNegInf;
    if (r.kind == NodeKind::kOr) {
      for (std::size_t b = 0; b < r.children.size(); ++b)
        best = std::max(best, r.log_probs[b] + prefix(r.children[b], i));
    } else {
      best = and_prefix(r.children, i).score;
    }
    prefix_busy_[key] = false;
    prefix_[key] = best;
    return best;
  }

  struct AndPrefix {
    double score = kNegInf;
    std::size_t child = 0;  // child in which the lattice ends
    int start = -1;         // where that child starts
  };

  AndPrefix and_prefix(const std::vector<int>& children, int i) {
    AndPrefix best;
    double tail = 0.0;  // free completion of children after c
    std::vector<double> tails(children.size(), 0.0);
    for (std::size_t c = children.size(); c-- > 0;) {
      tails[c] = tail;
      tail += free_[children[c]];
    }
    for (std::size_t c = 0; c < children.size(); ++c) {
      for (int p = i; p < n_; ++p) {
        const double head = c == 0 ? (p == i ? 0.0 : kNegInf) : head_sequence(children, c, i, p);
        if (head == kNegInf) continue;
        const double v = head + prefix(children[c], p) + tails[c];
        if (v > best.score) best = AndPrefix{v, c, p};
      }
    }
    return best;
  }

  /// Children [0, c) deriving exactly [i, p).
  double head_sequence(const std::vector<int>& children, std::size_t c, int i, int p) {
    if (p - i < static_cast<int>(c)) return kNegInf;
    std::vector<int> head(children.begin(), children.begin() + static_cast<long>(c));
    return sequence(head, 0, i, p, nullptr);
  }

  void read_span(int sym, int i, int j, std::vector<int>& labels) {
    if (g_.terminal(sym)) {
      for (int p = i; p < j; ++p) labels[p] = sym;
      return;
    }
    const auto& r = g_.rule(sym);
    const double target = span(sym, i, j);
    if (r.kind == NodeKind::kOr) {
      for (std::size_t b = 0; b < r.children.size(); ++b) {
        if (r.log_probs[b] + span(r.children[b], i, j) == target) {
          read_span(r.children[b], i, j, labels);
          return;
        }
      }
      return;
    }
    read_children(r.children, i, j, labels);
  }

  void read_children(const std::vector<int>& children, int i, int j, std::vector<int>& labels) {
    std::vector<int> splits;
    sequence(children, 0, i, j, &splits);
    int start = i;
    for (std::size_t c = 0; c < children.size(); ++c) {
      const int end = c < splits.size() ? splits[c] : j;
      read_span(children[c], start, end, labels);
      start = end;
    }
  }

  void read_prefix(int sym, int i, std::vector<int>& labels) {
    if (g_.terminal(sym)) {
      for (int p = i; p < n_; ++p) labels[p] = sym;
      return;
    }
    const auto& r = g_.rule(sym);
    const double target = prefix(sym, i);
    if (r.kind == NodeKind::kOr) {
      for (std::size_t b = 0; b < r.children.size(); ++b) {
        if (r.log_probs[b] + prefix(r.children[b], i) == target) {
          read_prefix(r.children[b], i, labels);
          return;
        }
      }
      return;
    }
    const AndPrefix ap = and_prefix(r.children, i);
    if (ap.child > 0) {
      std::vector<int> head(r.children.begin(), r.children.begin() + static_cast<long>(ap.child));
      read_children(head, i, ap.start, labels);
    }
    read_prefix(r.children[ap.child], ap.start, labels);
  }

 private:
  const Grammar& g_;
  int n_;
  const LeafScore& leaf_;
  std::vector<double> span_;
  std::vector<bool> span_busy_;
  std::vector<double> prefix_;
  std::vector<bool> prefix_busy_;
  std::vector<double> free_;
};

}  // namespace

LatticeParse lattice_viterbi(const Grammar& grammar, int n, const LeafScore& leaf, bool prefix) {
  LatticeParse out;
  if (n <= 0) return out;
  LatticeChart chart(grammar, n, leaf);
  const int root = grammar.root_id();
  out.score = prefix ? chart.prefix(root, 0) : chart.span(root, 0, n);
  if (out.score == kNegInf) return out;
  out.labels.assign(static_cast<std::size_t>(n), -1);
  if (prefix) chart.read_prefix(root, 0, out.labels);
  else chart.read_span(root, 0, n, out.labels);
  return out;
}

}  // namespace taog
