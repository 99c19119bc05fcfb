// src/induction.cc

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

#include "taog/induction.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "taog/error.h"

namespace taog {

void Corpus::validate() const {
  if (sentences.empty()) fail(ErrorCode::kInvalidArgument, "corpus is empty");
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sentences[i].empty()) fail(ErrorCode::kInvalidArgument, "corpus sentence " + std::to_string(i + 1) + " is empty");
    for (const auto& w : sentences[i])
      if (w == kBeginMarker || w == kEndMarker)
        fail(ErrorCode::kInvalidArgument, "corpus sentence " + std::to_string(i + 1) + " uses a reserved marker");
  }
}

void InductionConfig::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) fail(ErrorCode::kInvalidArgument, "eta must be in (0, 1]");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::kInvalidArgument, "alpha must be in (0, 1)");
  if (context_size < 3) fail(ErrorCode::kInvalidArgument, "context size must be >= 3");
  if (!(coverage > 0.0 && coverage <= 1.0)) fail(ErrorCode::kInvalidArgument, "coverage must be in (0, 1]");
  if (max_iterations < 0) fail(ErrorCode::kInvalidArgument, "max iterations must be non-negative");
}

// ---------------------------------------------------------------------------

AdiosGraph::AdiosGraph(const Corpus& corpus) {
  corpus.validate();
  names_ = {std::string(kBeginMarker), std::string(kEndMarker)};
  kinds_ = {SymbolKind::kMarker, SymbolKind::kMarker};
  children_.resize(2);
  std::set<std::string> vocab;
  for (const auto& s : corpus.sentences) vocab.insert(s.begin(), s.end());
  std::map<std::string, int> ids;
  for (const auto& w : vocab) {
    ids[w] = static_cast<int>(names_.size());
    names_.push_back(w);
    kinds_.push_back(SymbolKind::kTerminal);
    children_.emplace_back();
  }
  for (const auto& s : corpus.sentences) {
    std::vector<Token> p{Token{kBegin, {}}};
    for (const auto& w : s) p.push_back(Token{ids[w], {}});
    p.push_back(Token{kEnd, {}});
    paths_.push_back(std::move(p));
  }
}

int AdiosGraph::id(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

std::vector<int> AdiosGraph::path(int p) const {
  std::vector<int> out;
  for (const auto& t : paths_[p]) out.push_back(t.symbol);
  return out;
}

long AdiosGraph::total_length() const {
  long n = 0;
  for (const auto& p : paths_) n += static_cast<long>(p.size());
  return n;
}

int AdiosGraph::count(std::span<const int> sub) const {
  if (sub.empty()) return 0;
  int n = 0;
  for (const auto& p : paths_) {
    for (std::size_t i = 0; i + sub.size() <= p.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < sub.size() && match; ++k) match = p[i + k].symbol == sub[k];
      n += match;
    }
  }
  return n;
}

namespace {

void expand_token(const AdiosGraph& g, const AdiosGraph::Token& t, Sentence& out) {
  if (g.kind(t.symbol) == AdiosGraph::SymbolKind::kTerminal) {
    out.push_back(g.name(t.symbol));
    return;
  }
  for (const auto& part : t.parts) expand_token(g, part, out);
}

}  // namespace

Sentence AdiosGraph::expand(int p) const {
  Sentence out;
  for (const auto& t : paths_[p])
    if (kind(t.symbol) != SymbolKind::kMarker) expand_token(*this, t, out);
  return out;
}

std::vector<Sentence> AdiosGraph::expand_all() const {
  std::vector<Sentence> out;
  for (int p = 0; p < num_paths(); ++p) out.push_back(expand(p));
  return out;
}

int AdiosGraph::add_symbol(const std::string& prefix, SymbolKind k, std::vector<int> children) {
  int& counter = k == SymbolKind::kPattern ? next_pattern_ : next_class_;
  std::string name;
  do {
    name = prefix + std::to_string(counter++);
  } while (id(name) >= 0);
  names_.push_back(name);
  kinds_.push_back(k);
  children_.push_back(std::move(children));
  return num_symbols() - 1;
}

int AdiosGraph::rewire_pattern(std::span<const int> pattern) {
  if (pattern.size() < 2) fail(ErrorCode::kInvalidArgument, "a pattern needs at least two symbols");
  for (int s : pattern)
    if (s < 0 || s >= num_symbols() || kind(s) == SymbolKind::kMarker)
      fail(ErrorCode::kInvalidArgument, "pattern symbol out of range");
  const int sym = add_symbol("P", SymbolKind::kPattern, std::vector<int>(pattern.begin(), pattern.end()));
  for (auto& p : paths_) {
    std::vector<Token> out;
    for (std::size_t i = 0; i < p.size();) {
      bool match = i + pattern.size() <= p.size();
      for (std::size_t k = 0; k < pattern.size() && match; ++k) match = p[i + k].symbol == pattern[k];
      if (!match) {
        out.push_back(std::move(p[i++]));
        continue;
      }
      Token t{sym, {}};
      for (std::size_t k = 0; k < pattern.size(); ++k) t.parts.push_back(std::move(p[i + k]));
      out.push_back(std::move(t));
      i += pattern.size();
    }
    p = std::move(out);
  }
  return sym;
}

int AdiosGraph::rewire_class(std::span<const int> context, int slot, std::span<const int> members) {
  if (slot < 0 || slot >= static_cast<int>(context.size()) || members.size() < 2)
    fail(ErrorCode::kInvalidArgument, "invalid equivalence class");
  std::vector<int> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end(), [&](int a, int b) { return names_[a] < names_[b]; });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  int sym = -1;
  for (int s = 0; s < num_symbols() && sym < 0; ++s)
    if (kind(s) == SymbolKind::kClass && children_[s] == sorted) sym = s;
  if (sym < 0) sym = add_symbol("E", SymbolKind::kClass, sorted);
  const std::size_t w = context.size();
  for (auto& p : paths_) {
    for (std::size_t i = 0; i + w <= p.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < w && match; ++k)
        if (static_cast<int>(k) != slot) match = p[i + k].symbol == context[k];
      Token& t = p[i + slot];
      if (!match || !std::binary_search(sorted.begin(), sorted.end(), t.symbol,
                                        [&](int a, int b) { return names_[a] < names_[b]; }))
        continue;
      t = Token{sym, {std::move(t)}};
    }
  }
  return sym;
}

// ---------------------------------------------------------------------------

RatioProfile path_ratios(const AdiosGraph& g, std::span<const int> s) {
  RatioProfile r;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int den_r = g.count(s.subspan(0, i + 1));
    r.right.push_back(den_r > 0 ? std::optional<double>(static_cast<double>(g.count(s.subspan(0, i + 2))) / den_r)
                                : std::nullopt);
    const int den_l = g.count(s.subspan(i + 1));
    r.left.push_back(den_l > 0 ? std::optional<double>(static_cast<double>(g.count(s.subspan(i))) / den_l)
                               : std::nullopt);
  }
  return r;
}

double binomial_cdf(int k, int n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  double total = 0.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  for (int i = 0; i <= k; ++i) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * lp + (n - i) * lq);
  }
  return std::min(total, 1.0);
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
    return h;
  }
};

}  // namespace

std::optional<Pattern> find_significant_pattern(const AdiosGraph& g, const InductionConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<int>> paths;
  std::size_t longest = 0;
  for (int p = 0; p < g.num_paths(); ++p) {
    paths.push_back(g.path(p));
    longest = std::max(longest, paths.back().size());
  }
  // Occurrence counts of every subpath, and the most frequent one-symbol
  // extension on each side (markers excluded: reaching them is an edge).
  std::unordered_map<std::vector<int>, int, VecHash> counts, best_right, best_left;
  for (const auto& p : paths)
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j <= p.size(); ++j) ++counts[std::vector<int>(p.begin() + i, p.begin() + j)];
  for (const auto& [sub, c] : counts) {
    if (sub.size() < 2) continue;
    if (sub.back() != AdiosGraph::kEnd) {
      int& r = best_right[std::vector<int>(sub.begin(), sub.end() - 1)];
      r = std::max(r, c);
    }
    if (sub.front() != AdiosGraph::kBegin) {
      int& l = best_left[std::vector<int>(sub.begin() + 1, sub.end())];
      l = std::max(l, c);
    }
  }
  auto l = [&](std::span<const int> s) {
    const auto it = counts.find(std::vector<int>(s.begin(), s.end()));
    return it == counts.end() ? 0 : it->second;
  };
  auto lookup = [](const auto& m, const std::vector<int>& s) {
    const auto it = m.find(s);
    return it == m.end() ? 0 : it->second;
  };
  auto names = [&](const std::vector<int>& s) {
    std::vector<std::string> out;
    for (int x : s) out.push_back(g.name(x));
    return out;
  };

  std::optional<Pattern> best;
  for (const auto& [sub, n] : counts) {
    if (sub.size() < 2 || n < 2) continue;
    if (std::any_of(sub.begin(), sub.end(), [](int x) { return x == AdiosGraph::kBegin || x == AdiosGraph::kEnd; }))
      continue;
    if (best && (sub.size() > best->symbols.size() || (sub.size() == best->symbols.size() && n < best->count)))
      continue;
    const std::span<const int> s(sub);
    bool inner = true;
    for (std::size_t k = 1; k < s.size() && inner; ++k) {
      inner = l(s.first(k + 1)) >= cfg.eta * l(s.first(k)) && l(s.subspan(k - 1)) >= cfg.eta * l(s.subspan(k));
    }
    if (!inner) continue;
    if (binomial_cdf(lookup(best_right, sub), n, cfg.eta) >= cfg.alpha) continue;
    if (binomial_cdf(lookup(best_left, sub), n, cfg.eta) >= cfg.alpha) continue;
    if (best && sub.size() == best->symbols.size() && n == best->count && names(sub) >= names(best->symbols))
      continue;
    best = Pattern{sub, n};
  }
  return best;
}

namespace {

using NeighbourSets = std::map<int, std::set<std::pair<int, int>>>;

NeighbourSets neighbour_pairs(const AdiosGraph& g) {
  NeighbourSets out;
  for (int p = 0; p < g.num_paths(); ++p) {
    const auto path = g.path(p);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) out[path[i]].insert({path[i - 1], path[i + 1]});
  }
  return out;
}

std::vector<int> members_at(const AdiosGraph& g, std::span<const int> context, int slot) {
  std::set<int> members;
  const std::size_t w = context.size();
  for (int p = 0; p < g.num_paths(); ++p) {
    const auto path = g.path(p);
    for (std::size_t i = 0; i + w <= path.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < w && match; ++k)
        if (static_cast<int>(k) != slot) match = path[i + k] == context[k];
      if (match) members.insert(path[i + slot]);
    }
  }
  return {members.begin(), members.end()};
}

std::optional<EquivalenceClass> check_class(const AdiosGraph& g, std::span<const int> context, int slot,
                                            std::vector<int> members, const NeighbourSets& nb,
                                            const InductionConfig& cfg) {
  if (members.size() < 2) return std::nullopt;
  for (int m : members)
    if (g.kind(m) == AdiosGraph::SymbolKind::kMarker) return std::nullopt;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const auto& x = nb.at(members[a]);
      const auto& y = nb.at(members[b]);
      std::size_t shared = 0;
      for (const auto& pair : x) shared += y.count(pair);
      if (static_cast<double>(shared) < cfg.coverage * static_cast<double>(std::min(x.size(), y.size())))
        return std::nullopt;
    }
  }
  std::sort(members.begin(), members.end(), [&](int a, int b) { return g.name(a) < g.name(b); });
  EquivalenceClass out{std::vector<int>(context.begin(), context.end()), slot, std::move(members)};
  out.context[slot] = -1;
  return out;
}

}  // namespace

std::optional<EquivalenceClass> equivalence_class_at(const AdiosGraph& g, std::span<const int> context, int slot,
                                                     const InductionConfig& cfg) {
  cfg.validate();
  if (slot <= 0 || slot + 1 >= static_cast<int>(context.size()))
    fail(ErrorCode::kInvalidArgument, "the wildcard must be an interior window slot");
  return check_class(g, context, slot, members_at(g, context, slot), neighbour_pairs(g), cfg);
}

std::optional<EquivalenceClass> find_equivalence_class(const AdiosGraph& g, const InductionConfig& cfg) {
  cfg.validate();
  const std::size_t w = static_cast<std::size_t>(cfg.context_size);
  const NeighbourSets nb = neighbour_pairs(g);
  // Window (with the wildcard blanked) -> members, over the whole graph.
  std::map<std::pair<std::vector<int>, int>, std::set<int>> windows;
  std::vector<std::vector<int>> paths;
  for (int p = 0; p < g.num_paths(); ++p) paths.push_back(g.path(p));
  for (const auto& path : paths) {
    for (std::size_t i = 0; i + w <= path.size(); ++i) {
      for (std::size_t slot = 1; slot + 1 < w; ++slot) {
        std::vector<int> key(path.begin() + i, path.begin() + i + w);
        key[slot] = -1;
        windows[{std::move(key), static_cast<int>(slot)}].insert(path[i + slot]);
      }
    }
  }
  std::set<std::pair<std::vector<int>, int>> tried;
  for (const auto& path : paths) {
    for (std::size_t i = 0; i + w <= path.size(); ++i) {
      for (std::size_t slot = 1; slot + 1 < w; ++slot) {
        std::vector<int> key(path.begin() + i, path.begin() + i + w);
        key[slot] = -1;
        std::pair<std::vector<int>, int> k{key, static_cast<int>(slot)};
        if (!tried.insert(k).second) continue;
        const auto& m = windows.at(k);
        auto cls = check_class(g, key, static_cast<int>(slot), std::vector<int>(m.begin(), m.end()), nb, cfg);
        if (cls) return cls;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Grammar graph_grammar(const AdiosGraph& g, const std::string& root_name) {
  std::vector<std::string> terminals;
  for (int s = 0; s < g.num_symbols(); ++s)
    if (g.kind(s) == AdiosGraph::SymbolKind::kTerminal) terminals.push_back(g.name(s));
  std::set<std::string> taken;
  for (int s = 0; s < g.num_symbols(); ++s) taken.insert(g.name(s));
  auto fresh = [&](const std::string& prefix, int& counter) {
    std::string name;
    do {
      name = prefix + std::to_string(counter++);
    } while (taken.count(name) > 0);
    taken.insert(name);
    return name;
  };
  std::string root = root_name.empty() ? "EVENT" : root_name;
  if (taken.count(root) > 0) {
    int c = 1;
    root = fresh(root + "_", c);
  }
  taken.insert(root);

  Production top{root, NodeKind::kOr, {}, {}};
  std::vector<Production> forms;
  std::set<std::vector<int>> seen;
  std::vector<bool> used(static_cast<std::size_t>(g.num_symbols()), false);
  std::vector<int> stack;
  int counter = 1;
  for (int p = 0; p < g.num_paths(); ++p) {
    auto path = g.path(p);
    std::vector<int> form(path.begin() + 1, path.end() - 1);
    if (!seen.insert(form).second) continue;
    for (int s : form) stack.push_back(s);
    if (form.size() == 1) {
      top.children.push_back(g.name(form[0]));
      continue;
    }
    Production f{fresh("R", counter), NodeKind::kAnd, {}, {}};
    for (int s : form) f.children.push_back(g.name(s));
    top.children.push_back(f.head);
    forms.push_back(std::move(f));
  }
  top.probabilities.assign(top.children.size(), 1.0 / static_cast<double>(top.children.size()));

  // Nonterminals reachable from the residual paths, in creation order.
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    if (used[s]) continue;
    used[s] = true;
    for (int c : g.children(s)) stack.push_back(c);
  }
  std::vector<Production> prods{top};
  for (int s = 0; s < g.num_symbols(); ++s) {
    if (!used[s]) continue;
    const auto k = g.kind(s);
    if (k != AdiosGraph::SymbolKind::kPattern && k != AdiosGraph::SymbolKind::kClass) continue;
    Production pr{g.name(s), k == AdiosGraph::SymbolKind::kPattern ? NodeKind::kAnd : NodeKind::kOr, {}, {}};
    for (int c : g.children(s)) pr.children.push_back(g.name(c));
    if (pr.kind == NodeKind::kOr) pr.probabilities.assign(pr.children.size(), 1.0 / static_cast<double>(pr.children.size()));
    prods.push_back(std::move(pr));
  }
  for (auto& f : forms) prods.push_back(std::move(f));
  return Grammar(root, terminals, std::move(prods));
}

Grammar induce(const Corpus& corpus, const InductionConfig& cfg) {
  cfg.validate();
  AdiosGraph g(corpus);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    bool changed = false;
    if (auto p = find_significant_pattern(g, cfg)) {
      g.rewire_pattern(p->symbols);
      changed = true;
    }
    if (auto c = find_equivalence_class(g, cfg)) {
      g.rewire_class(c->context, c->slot, c->members);
      changed = true;
    }
    if (!changed) break;
  }
  return graph_grammar(g, corpus.event_label);
}

namespace {

void count_branches(const Grammar& g, const ParseTree& t, std::map<std::string, std::vector<double>>& counts) {
  if (t.chosen_branch >= 0) {
    auto& c = counts[t.symbol];
    if (c.empty()) c.assign(g.find(t.symbol)->children.size(), 0.0);
    c[t.chosen_branch] += 1.0;
  }
  for (const auto& child : t.children) count_branches(g, child, counts);
}

}  // namespace

Grammar estimate_branch_probabilities(const Grammar& grammar, std::span<const Sentence> corpus, double smoothing) {
  if (!(smoothing >= 0.0)) fail(ErrorCode::kInvalidArgument, "smoothing must be non-negative");
  std::map<std::string, std::vector<double>> counts;
  for (const auto& s : corpus) {
    const ViterbiResult v = viterbi_likelihood(grammar, s);
    if (!v.tree) {
      std::string text;
      for (const auto& w : s) text += (text.empty() ? "" : " ") + w;
      fail(ErrorCode::kUnderivable, "sentence has no parse: \"" + text + "\"");
    }
    count_branches(grammar, *v.tree, counts);
  }
  std::vector<Production> prods = grammar.productions();
  for (auto& p : prods) {
    if (p.kind != NodeKind::kOr) continue;
    const std::size_t n = p.children.size();
    std::vector<double> c = counts.count(p.head) ? counts[p.head] : std::vector<double>(n, 0.0);
    double total = 0.0;
    for (auto& x : c) total += (x += smoothing);
    if (total <= 0.0) continue;  // never used: keep the current probabilities
    for (std::size_t i = 0; i < n; ++i) p.probabilities[i] = c[i] / total;
  }
  return Grammar(grammar.root(), grammar.terminals(), std::move(prods));
}

}  // namespace taog
