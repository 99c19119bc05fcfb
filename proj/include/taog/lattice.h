// include/taog/lattice.h

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

#ifndef TAOG_LATTICE_H_
#define TAOG_LATTICE_H_

// Max-product parsing of a scored lattice: find the terminal labeling of n
// positions that maximizes (leaf scores + log probability of the best
// derivation). A leaf is one terminal covering a run of consecutive positions
// [i, j), so repeated labels collapse into a single grammar symbol.

#include <functional>
#include <vector>

#include "taog/grammar.h"

namespace taog {

struct LatticeParse {
  double score = 0.0;
  /// Grammar terminal id per position; empty when nothing derives the lattice.
  std::vector<int> labels;
};

/// leaf(t, i, j): log score of terminal id t covering positions [i, j).
using LeafScore = std::function<double(int terminal, int i, int j)>;

/// Sentence mode: the collapsed labeling must be a complete sentence.
/// Prefix mode: it must be a prefix of some sentence; the completion is scored
/// by its most probable derivation.
LatticeParse lattice_viterbi(const Grammar& grammar, int n, const LeafScore& leaf, bool prefix);

}  // namespace taog

#endif  // TAOG_LATTICE_H_
