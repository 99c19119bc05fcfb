// tests/test_grammar.cc

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

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "taog/error.h"
#include "taog/grammar.h"

using namespace taog;
using oracle::words;

namespace {

Grammar single() { return Grammar("S", {"a"}, {{"S", NodeKind::kAnd, {"a"}, {}}}); }

Grammar coin(double pa) {
  return Grammar("S", {"a", "b"}, {{"S", NodeKind::kOr, {"a", "b"}, {pa, 1.0 - pa}}});
}

// Two trees for "x y z": (A z) with A -> x y, and (x B) with B -> y z.
Grammar ambiguous() {
  return Grammar("S", {"x", "y", "z", "w"},
                 {{"S", NodeKind::kOr, {"L", "R", "W"}, {0.2, 0.3, 0.5}},
                  {"L", NodeKind::kAnd, {"A", "z"}, {}},
                  {"R", NodeKind::kAnd, {"x", "B"}, {}},
                  {"A", NodeKind::kOr, {"XY", "w"}, {0.6, 0.4}},
                  {"XY", NodeKind::kAnd, {"x", "y"}, {}},
                  {"B", NodeKind::kOr, {"YZ", "w"}, {0.6, 0.4}},
                  {"YZ", NodeKind::kAnd, {"y", "z"}, {}},
                  {"W", NodeKind::kAnd, {"w"}, {}}});
}

}  // namespace

TEST_CASE("sample_sentence on trivial grammars") {
  CHECK(sample_sentence(single(), 7u) == Sentence{"a"});
  const Grammar g = coin(0.5);
  CHECK(sample_sentence(g, 11u) == sample_sentence(g, 11u));
  std::mt19937_64 rng(2024);
  int a = 0;
  for (int i = 0; i < 10000; ++i) a += sample_sentence(g, rng)[0] == "a";
  CHECK(a / 10000.0 >= 0.47);
  CHECK(a / 10000.0 <= 0.53);
}

TEST_CASE("sample_sentence enforces the depth cap on recursive grammars") {
  const Grammar g("S", {"a"},
                  {{"S", NodeKind::kOr, {"a", "SS"}, {0.01, 0.99}},
                   {"SS", NodeKind::kAnd, {"a", "S"}, {}}});
  CHECK(g.is_recursive());
  bool threw = false;
  try {
    for (std::uint64_t s = 0; s < 20; ++s) sample_sentence(g, s, 8);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::kDepthExceeded;
  }
  CHECK(threw);
}

TEST_CASE("viterbi and sum on trivial grammars") {
  CHECK(viterbi_likelihood(single(), words("a")).probability == doctest::Approx(1.0));
  const Grammar g = coin(0.3);
  CHECK(viterbi_likelihood(g, words("b")).probability == doctest::Approx(0.7));
  CHECK(sentence_likelihood(g, words("a")) + sentence_likelihood(g, words("b")) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(viterbi_likelihood(g, words("a a")).probability == 0.0);
  CHECK_FALSE(viterbi_likelihood(g, words("a a")).tree.has_value());
  CHECK(viterbi_likelihood(g, words("q")).probability == 0.0);
}

TEST_CASE("ambiguous grammar: best tree 0.18, sum 0.30") {
  const Grammar g = ambiguous();
  // L: 0.2 * 0.6 = 0.12, R: 0.3 * 0.6 = 0.18.
  auto lang = oracle::best_trees(g);
  auto s = words("x y z");
  REQUIRE(lang.count(s) == 1);
  CHECK(lang[s].count == 2);
  CHECK(lang[s].probability == doctest::Approx(0.18));
  auto v = viterbi_likelihood(g, s);
  CHECK(v.probability == doctest::Approx(0.18).epsilon(1e-12));
  REQUIRE(v.tree.has_value());
  CHECK(v.tree->frontier() == s);
  CHECK(v.tree->chosen_branch == 1);
  CHECK(sentence_likelihood(g, s) == doctest::Approx(0.30).epsilon(1e-12));
}

TEST_CASE("viterbi tie-break prefers the lower branch at the leftmost difference") {
  const Grammar g("S", {"x", "y"},
                  {{"S", NodeKind::kOr, {"L", "R"}, {0.5, 0.5}},
                   {"L", NodeKind::kAnd, {"XY"}, {}},
                   {"R", NodeKind::kAnd, {"x", "y"}, {}},
                   {"XY", NodeKind::kAnd, {"x", "y"}, {}}});
  auto v = viterbi_likelihood(g, words("x y"));
  REQUIRE(v.tree);
  CHECK(v.tree->chosen_branch == 0);
  CHECK(v.probability == doctest::Approx(0.5));
  CHECK(sentence_likelihood(g, words("x y")) == doctest::Approx(1.0));
}

TEST_CASE("language mass sums to one and viterbi <= sum") {
  const Grammar g = ambiguous();
  double total = 0.0;
  for (const auto& [s, p] : oracle::language(g)) {
    const double sum = sentence_likelihood(g, s);
    const auto v = viterbi_likelihood(g, s);
    CHECK(sum == doctest::Approx(p).epsilon(1e-12));
    CHECK(v.probability <= sum + 1e-15);
    total += sum;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("validation errors carry distinct codes") {
  auto code_of = [](auto&& make) {
    try {
      make();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kStage;
  };
  CHECK(code_of([] { Grammar("S", {"a"}, {{"S", NodeKind::kAnd, {"B"}, {}}}); }) ==
        ErrorCode::kUndefinedSymbol);
  CHECK(code_of([] { Grammar("S", {"a", "b"}, {{"S", NodeKind::kOr, {"a", "b"}, {0.5, 0.4}}}); }) ==
        ErrorCode::kNormalization);
  CHECK(code_of([] { Grammar("S", {"begin"}, {{"S", NodeKind::kAnd, {"begin"}, {}}}); }) ==
        ErrorCode::kInvalidGrammar);
  CHECK(code_of([] { Grammar("S", {"a"}, {{"S", NodeKind::kAnd, {}, {}}}); }) ==
        ErrorCode::kInvalidGrammar);
  // S -> a S has no finite yield.
  CHECK(code_of([] { Grammar("S", {"a"}, {{"S", NodeKind::kAnd, {"a", "S"}, {}}}); }) ==
        ErrorCode::kInvalidGrammar);
}

TEST_CASE("serialization round trip and document errors") {
  const Grammar g("E", {"a", "b", "c"},
                  {{"E", NodeKind::kOr, {"A", "c"}, {1.0 / 3.0, 2.0 / 3.0}},
                   {"A", NodeKind::kAnd, {"a", "b"}, {}}});
  const std::string text = serialize_grammar(g);
  const Grammar back = deserialize_grammar(text);
  CHECK(back == g);
  CHECK(back.find("E")->probabilities[0] == g.find("E")->probabilities[0]);
  CHECK(serialize_grammar(back) == text);

  auto code_of = [](const std::string& doc) {
    try {
      deserialize_grammar(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kStage;
  };
  CHECK(code_of("{not json") == ErrorCode::kMalformedDocument);
  CHECK(code_of(R"({"root":"S","terminals":["a"]})") == ErrorCode::kMalformedDocument);
  CHECK(code_of(R"({"root":"S","terminals":["a","b"],"productions":[
      {"head":"S","kind":"Or","children":["a","b"],"probabilities":["0.5","0.4"]}]})") ==
        ErrorCode::kNormalization);
  CHECK(code_of(R"({"root":"S","terminals":["a"],"productions":[
      {"head":"S","kind":"And","children":["a","X"],"probabilities":[]}]})") ==
        ErrorCode::kUndefinedSymbol);
}
