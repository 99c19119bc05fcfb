// tests/test_induction.cc

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
#include <set>

#include "doctest.h"
#include "oracles.h"
#include "taog/error.h"
#include "taog/induction.h"
#include "taog/simulator.h"

using namespace taog;
using oracle::words;

namespace {

Corpus corpus_of(std::initializer_list<const char*> lines) {
  Corpus c;
  for (const char* l : lines) c.sentences.push_back(words(l));
  return c;
}

std::vector<int> ids(const AdiosGraph& g, const std::string& text) {
  std::vector<int> out;
  for (const auto& w : words(text)) out.push_back(g.id(w));
  return out;
}

std::set<std::string> names(const AdiosGraph& g, const std::vector<int>& v) {
  std::set<std::string> out;
  for (int x : v) out.insert(g.name(x));
  return out;
}

std::set<Sentence> yield_language(const Grammar& g, const std::string& symbol) {
  std::set<Sentence> out;
  for (const auto& d : oracle::derivations(g, symbol)) out.insert(d.sentence);
  return out;
}

}  // namespace

TEST_CASE("path ratios by counting") {
  {
    AdiosGraph g(corpus_of({"a b c", "a b d"}));
    const auto r = path_ratios(g, ids(g, "a b c"));
    REQUIRE(r.right.size() == 2);
    CHECK(*r.right[0] == 1.0);
    CHECK(*r.right[1] == 0.5);
  }
  {
    AdiosGraph g(corpus_of({"x y z", "x y z", "x y z"}));
    const auto r = path_ratios(g, ids(g, "x y z"));
    for (const auto& v : r.right) CHECK(*v == 1.0);
    for (const auto& v : r.left) CHECK(*v == 1.0);
  }
  {
    AdiosGraph g(corpus_of({"a b", "c b"}));
    const auto r = path_ratios(g, ids(g, "a b"));
    CHECK(*r.left[0] == 0.5);
  }
  {
    AdiosGraph g(corpus_of({"a b"}));
    std::vector<int> absent{g.id("b"), g.id("b"), g.id("a")};
    const auto r = path_ratios(g, absent);
    CHECK(*r.right[0] == 0.0);
    CHECK_FALSE(r.right[1].has_value());
  }
}

TEST_CASE("binomial tail against direct summation") {
  for (int n : {1, 5, 20, 60}) {
    for (double p : {0.1, 0.5, 0.9}) {
      double acc = 0.0;
      for (int k = 0; k <= n; ++k) {
        acc += std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) * std::pow(p, k) *
               std::pow(1 - p, n - k);
        CHECK(binomial_cdf(k, n, p) == doctest::Approx(std::min(acc, 1.0)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("embedded pattern is found") {
  Rng rng(4);
  const std::vector<std::string> filler{"f0", "f1", "f2", "f3", "f4", "f5"};
  std::uniform_int_distribution<int> pick(0, 5), len(0, 3);
  Corpus c;
  for (int i = 0; i < 200; ++i) {
    Sentence s;
    for (int k = len(rng); k > 0; --k) s.push_back(filler[pick(rng)]);
    if (i % 5 != 0) {
      for (const char* w : {"open_microwave", "put_food", "close_microwave"}) s.push_back(w);
    }
    for (int k = len(rng) + (i % 5 == 0); k > 0; --k) s.push_back(filler[pick(rng)]);
    c.sentences.push_back(s);
  }
  AdiosGraph g(c);
  const auto p = find_significant_pattern(g, {});
  REQUIRE(p.has_value());
  CHECK(p->symbols == ids(g, "open_microwave put_food close_microwave"));
  CHECK(p->count == 160);
}

TEST_CASE("random unigram corpora yield no pattern") {
  Rng rng(6);
  std::uniform_int_distribution<int> pick(0, 5);
  Corpus c;
  for (int i = 0; i < 200; ++i) {
    Sentence s;
    for (int k = 0; k < 6; ++k) s.push_back("w" + std::to_string(pick(rng)));
    c.sentences.push_back(s);
  }
  AdiosGraph g(c);
  CHECK_FALSE(find_significant_pattern(g, {}).has_value());
}

TEST_CASE("repeated sentence: the whole sentence is the pattern") {
  Corpus c;
  for (int i = 0; i < 20; ++i) c.sentences.push_back(words("a b c"));
  AdiosGraph g(c);
  const auto p = find_significant_pattern(g, {});
  REQUIRE(p.has_value());
  CHECK(p->symbols == ids(g, "a b c"));
}

TEST_CASE("equivalence classes") {
  {
    AdiosGraph g(corpus_of({"reach cup move cup", "reach bowl move bowl"}));
    const std::vector<int> ctx{AdiosGraph::kBegin, g.id("reach"), -1, g.id("move")};
    const auto cls = equivalence_class_at(g, ctx, 2, {});
    REQUIRE(cls.has_value());
    CHECK(names(g, cls->members) == std::set<std::string>{"bowl", "cup"});
    const auto found = find_equivalence_class(g, {});
    REQUIRE(found.has_value());
    CHECK(names(g, found->members) == std::set<std::string>{"bowl", "cup"});
  }
  {
    AdiosGraph g(corpus_of({"a b c d", "a b c d"}));
    CHECK_FALSE(find_equivalence_class(g, {}).has_value());
  }
  {
    AdiosGraph g(corpus_of({"reach cup move", "reach bowl move", "drop cup go", "lift bowl put"}));
    const std::vector<int> ctx{AdiosGraph::kBegin, g.id("reach"), -1, g.id("move")};
    InductionConfig strict;
    strict.coverage = 1.0;
    CHECK_FALSE(equivalence_class_at(g, ctx, 2, strict).has_value());
    CHECK(equivalence_class_at(g, ctx, 2, {}).has_value());
  }
}

TEST_CASE("rewiring arithmetic, idempotence and expansion") {
  Corpus c;
  for (int i = 0; i < 10; ++i) c.sentences.push_back(words(i % 2 ? "x a b c" : "a b c y"));
  AdiosGraph g(c);
  const long before = g.total_length();
  g.rewire_pattern(ids(g, "a b c"));
  CHECK(before - g.total_length() == 20);
  CHECK(g.expand_all() == c.sentences);
  const long after = g.total_length();
  std::vector<std::vector<int>> paths;
  for (int p = 0; p < g.num_paths(); ++p) paths.push_back(g.path(p));
  g.rewire_pattern(ids(g, "a b c"));
  CHECK(g.total_length() == after);
  for (int p = 0; p < g.num_paths(); ++p) CHECK(g.path(p) == paths[p]);

  AdiosGraph h(corpus_of({"reach cup move cup", "reach bowl move bowl"}));
  const auto cls = find_equivalence_class(h, {});
  REQUIRE(cls.has_value());
  const int e = h.rewire_class(cls->context, cls->slot, cls->members);
  CHECK(h.kind(e) == AdiosGraph::SymbolKind::kClass);
  CHECK(h.expand_all() == corpus_of({"reach cup move cup", "reach bowl move bowl"}).sentences);
  // Same members again: the class is reused.
  CHECK(h.rewire_class(cls->context, cls->slot, cls->members) == e);
}

TEST_CASE("induction on small corpora") {
  {
    const Grammar g = induce(corpus_of({"a b c"}));
    const auto lang = oracle::language(g);
    REQUIRE(lang.size() == 1);
    CHECK(lang.begin()->first == words("a b c"));
  }
  {
    const Grammar g = induce(corpus_of({"a b", "c d"}));
    const auto* root = g.find(g.root());
    REQUIRE(root != nullptr);
    CHECK(root->kind == NodeKind::kOr);
    CHECK(root->children.size() == 2);
    for (const auto& ch : root->children) CHECK(g.find(ch)->kind == NodeKind::kAnd);
    CHECK(oracle::language(g).size() == 2);
  }
  CHECK_THROWS_AS(induce(Corpus{}), Error);
  CHECK_THROWS_AS(induce(corpus_of({"a begin"})), Error);
}

TEST_CASE("induction invariants on planted corpora") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Rng rng(seed);
    std::vector<std::string> terms;
    for (int i = 0; i < 20; ++i) terms.push_back("t" + std::to_string(i));
    const Grammar planted = planted_grammar(terms, rng, PlantedGrammarConfig{3 + static_cast<int>(seed % 3), 2,
                                                                             1 + static_cast<int>(seed % 2), 2, 0.2});
    Corpus c{"ev", {}};
    for (int i = 0; i < 300; ++i) c.sentences.push_back(sample_sentence(planted, rng));
    const InductionConfig cfg;
    AdiosGraph g(c);
    long length = g.total_length();
    for (int it = 0; it < 100; ++it) {
      bool changed = false;
      if (auto p = find_significant_pattern(g, cfg)) {
        g.rewire_pattern(p->symbols);
        CHECK(g.total_length() < length);
        changed = true;
      }
      if (auto cls = find_equivalence_class(g, cfg)) {
        g.rewire_class(cls->context, cls->slot, cls->members);
        changed = true;
      }
      CHECK(g.total_length() <= length);
      length = g.total_length();
      CHECK(g.expand_all() == c.sentences);
      if (!changed) break;
    }
    const Grammar induced = induce(c, cfg);
    CHECK(induced == induce(c, cfg));
    CHECK(induced == graph_grammar(g, "ev"));
    for (const auto& s : c.sentences) CHECK(viterbi_likelihood(induced, s).probability > 0.0);
  }
}

TEST_CASE("branch estimation") {
  const Grammar g("S", {"a", "b"}, {{"S", NodeKind::kOr, {"a", "b"}, {0.5, 0.5}}});
  const std::vector<Sentence> counts{words("a"), words("a"), words("a"), words("b")};
  const Grammar e = estimate_branch_probabilities(g, counts);
  CHECK(e.find("S")->probabilities == std::vector<double>{0.75, 0.25});
  const Grammar half = estimate_branch_probabilities(g, std::vector<Sentence>{words("a"), words("a"), words("b"), words("b")});
  CHECK(half.find("S")->probabilities[0] == 0.5);
  const Grammar smoothed = estimate_branch_probabilities(g, counts, 1.0);
  CHECK(smoothed.find("S")->probabilities[0] == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK_THROWS_AS(estimate_branch_probabilities(g, std::vector<Sentence>{words("c")}), Error);
  try {
    estimate_branch_probabilities(g, std::vector<Sentence>{words("a a")});
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kUnderivable);
    CHECK(std::string(err.what()).find("a a") != std::string::npos);
  }
}

TEST_CASE("planted Or probabilities are recovered") {
  Rng rng(17);
  std::vector<std::string> terms;
  for (int i = 0; i < 20; ++i) terms.push_back("t" + std::to_string(i));
  const Grammar planted = planted_grammar(terms, rng, PlantedGrammarConfig{4, 2, 2, 2, 0.2});
  Corpus c{"ev", {}};
  for (int i = 0; i < 2000; ++i) c.sentences.push_back(sample_sentence(planted, rng));
  const Grammar g = estimate_branch_probabilities(induce(c), c.sentences);
  for (const auto& p : g.productions()) {
    if (p.kind != NodeKind::kOr) continue;
    double sum = 0.0;
    for (double x : p.probabilities) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Match Or-nodes by the yield languages of their branches.
  for (const auto& pp : planted.productions()) {
    if (pp.kind != NodeKind::kOr) continue;
    std::map<std::set<Sentence>, double> want;
    for (std::size_t b = 0; b < pp.children.size(); ++b)
      want[yield_language(planted, pp.children[b])] = pp.probabilities[b];
    bool matched = false;
    for (const auto& ip : g.productions()) {
      if (ip.kind != NodeKind::kOr || ip.children.size() != pp.children.size()) continue;
      std::map<std::set<Sentence>, double> got;
      for (std::size_t b = 0; b < ip.children.size(); ++b)
        got[yield_language(g, ip.children[b])] = ip.probabilities[b];
      bool same = got.size() == want.size();
      for (const auto& [lang, p] : want) same = same && got.count(lang) > 0;
      if (!same) continue;
      matched = true;
      for (const auto& [lang, p] : want) CHECK(std::abs(got[lang] - p) <= 0.03);
    }
    CHECK_MESSAGE(matched, "no induced Or-node for " << pp.head);
  }
}
