// tests/segmentation_oracle.h

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

#ifndef TAOG_TESTS_SEGMENTATION_ORACLE_H_
#define TAOG_TESTS_SEGMENTATION_ORACLE_H_

// Exhaustive segmentation search for short streams.

#include <vector>

#include "taog/logmath.h"
#include "taog/segmentation.h"

namespace taog::oracle {

struct Exhaustive {
  double score = kNegInf;
  std::vector<int> starts;
};

/// All 2^(T-1) segmentations with the library's tie rule.
inline Exhaustive exhaustive(const DetectionStream& st, const EmissionModel& m, int L) {
  const int T = static_cast<int>(st.size());
  Exhaustive best;
  int best_count = 0;
  bool any = false;
  for (unsigned mask = 0; mask < (1u << (T - 1)); ++mask) {
    std::vector<int> starts;
    for (int t = 1; t < T; ++t)
      if (mask & (1u << (t - 1))) starts.push_back(t);
    std::vector<int> bounds{0};
    bounds.insert(bounds.end(), starts.begin(), starts.end());
    bounds.push_back(T);
    bool ok = true;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
      if (bounds[k + 1] - bounds[k] > L) ok = false;
      total += best_segment_interpretation(st, bounds[k], bounds[k + 1] - 1, m).log_score;
    }
    if (!ok) continue;
    const int count = static_cast<int>(starts.size()) + 1;
    bool take = !any || total > best.score;
    if (any && total == best.score)
      take = count < best_count || (count == best_count && starts > best.starts);
    if (take) {
      any = true;
      best.score = total;
      best.starts = starts;
      best_count = count;
    }
  }
  return best;
}

inline std::vector<int> starts_of(const Segmentation& s) {
  std::vector<int> out;
  for (std::size_t k = 1; k < s.segments.size(); ++k) out.push_back(s.segments[k].t1);
  return out;
}

}  // namespace taog::oracle

#endif  // TAOG_TESTS_SEGMENTATION_ORACLE_H_
