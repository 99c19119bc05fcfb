// src/inside_chart.h

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

#ifndef TAOG_SRC_INSIDE_CHART_H_
#define TAOG_SRC_INSIDE_CHART_H_

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "taog/error.h"
#include "taog/grammar.h"
#include "taog/logmath.h"

namespace taog::internal {

/// Memoized inside probabilities log P(X =>* w[i:j)) over one sentence.
inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

class InsideChart {
 public:
  InsideChart(const Grammar& g, std::span<const int> w)
      : g_(g), w_(w), n_(static_cast<int>(w.size())),
        memo_(static_cast<std::size_t>(g.num_symbols()) * (n_ + 1) * (n_ + 1), kUnset),
        busy_(memo_.size(), false) {}

  double span(int sym, int i, int j) {
    const int len = j - i;
    if (g_.terminal(sym)) return (len == 1 && w_[i] == sym) ? 0.0 : kNegInf;
    const auto& r = g_.rule(sym);
    if (len < r.min_yield || len > r.max_yield) return kNegInf;
    const std::size_t key = index(sym, i, j);
    if (!std::isnan(memo_[key])) return memo_[key];
    if (busy_[key]) fail(ErrorCode::kDepthExceeded, "unit-production cycle at " + g_.name(sym));
    busy_[key] = true;
    double total = kNegInf;
    if (r.kind == NodeKind::kOr) {
      for (std::size_t b = 0; b < r.children.size(); ++b) {
        total = log_add(total, r.log_probs[b] + span(r.children[b], i, j));
      }
    } else {
      total = sequence(r.children, i, j);
    }
    busy_[key] = false;
    memo_[key] = total;
    return total;
  }

  /// log P(body derives exactly w[i:j)), every element consuming >= 1 token.
  double sequence(std::span<const int> body, int i, int j) {
    const int m = static_cast<int>(body.size());
    std::vector<double> cur(n_ + 1, kNegInf), next(n_ + 1);
    cur[i] = 0.0;
    for (int c = 0; c < m; ++c) {
      std::fill(next.begin(), next.end(), kNegInf);
      const int remaining = m - c - 1;
      for (int p = i + c; p <= j - remaining - 1; ++p) {
        if (cur[p] == kNegInf) continue;
        for (int q = p + 1; q <= j - remaining; ++q) {
          if (c == m - 1 && q != j) continue;
          double s = span(body[c], p, q);
          if (s == kNegInf) continue;
          next[q] = log_add(next[q], cur[p] + s);
        }
      }
      std::swap(cur, next);
    }
    return cur[j];
  }

 private:
  std::size_t index(int sym, int i, int j) const {
    return (static_cast<std::size_t>(sym) * (n_ + 1) + i) * (n_ + 1) + j;
  }

  const Grammar& g_;
  std::span<const int> w_;
  int n_;
  std::vector<double> memo_;
  std::vector<bool> busy_;
};

}  // namespace taog::internal

#endif  // TAOG_SRC_INSIDE_CHART_H_
