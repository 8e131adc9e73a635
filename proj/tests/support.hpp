#pragma once

// Shared test helpers and brute-force oracles. The oracles work on node
// paths directly and never call the algebra folds they are checked against.

#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clatter/geometry.hpp"
#include "clatter/inductive.hpp"
#include "clatter/isomorphism.hpp"
#include "clatter/peaks.hpp"
#include "clatter/rewriting.hpp"
#include "clatter/terms.hpp"

namespace clatter::testing {

inline const std::set<std::string>& default_vars() {
  static const std::set<std::string> vars{"x1", "x2", "x3", "x4", "x",
                                          "y",  "z",  "y1", "y2"};
  return vars;
}

inline Term T(std::string_view text) { return parse_term(text, default_vars()); }

inline Term S(std::string_view text, const std::set<std::string>& gaps) {
  Signature sig;
  return parse_term(text, default_vars(), sig, gaps);
}

inline PositionSet P(std::initializer_list<const char*> items) {
  PositionSet out;
  for (const char* s : items) out.insert(Position::parse(s));
  return out;
}

/// Inductive cluster from a skeleton and gap patterns in text form.
inline InductiveCluster IC(
    std::string_view skeleton,
    std::initializer_list<std::pair<const char*, const char*>> patterns = {}) {
  std::set<std::string> gaps;
  for (const auto& [gap, pattern] : patterns) gaps.insert(gap);
  InductiveCluster c{S(skeleton, gaps), {}};
  for (const auto& [gap, pattern] : patterns) c.assignment.emplace(gap, T(pattern));
  return c;
}

/// Running example term; its inner constant is e.
inline Term running_term() { return T("a(b(c(e),0))"); }

struct RunningRow {
  PositionSet positions;
  InductiveCluster cluster;
};

/// Six geometric/inductive cluster pairs of the running term.
inline std::vector<RunningRow> running_rows() {
  return {
      {{}, IC("a(b(c(e),0))")},
      {P({"eps:v"}), IC("X1(b(c(e),0))", {{"X1", "a(x1)"}})},
      {P({"1:v", "1.1:v"}),
       IC("a(X1(X2(e),0))", {{"X1", "b(x1,x2)"}, {"X2", "c(x1)"}})},
      {P({"1:v", "1.1:e", "1.1:v"}), IC("a(X1(e,0))", {{"X1", "b(c(x1),x2)"}})},
      {P({"1:v", "1.2:e", "1.2:v"}), IC("a(X1(c(e)))", {{"X1", "b(x1,0)"}})},
      {P({"eps:v", "1:e", "1:v", "1.1:e", "1.1:v", "1.1.1:e", "1.1.1:v",
          "1.2:e", "1.2:v"}),
       IC("X1", {{"X1", "a(b(c(e),0))"}})},
  };
}

/// Two unary, one binary, two constants.
inline Signature small_signature() {
  Signature sig;
  sig.declare("a", 1);
  sig.declare("g", 1);
  sig.declare("f", 2);
  sig.declare("0", 0);
  sig.declare("e", 0);
  return sig;
}

// Sample systems.
inline TRS drop_trs() { return make_trs({{"a(x)", "x"}, {"a(x)", "0"}}, {"x"}); }
inline TRS collapse_trs() { return make_trs({{"a(a(x))", "b'(x)"}}, {"x"}); }
inline TRS parallel_trs() { return make_trs({{"f(0,0)", "c'"}, {"0", "b'"}}, {}); }
inline TRS development_trs() {
  return make_trs({{"a(0)", "c'"}, {"b'(a(x))", "x"}, {"0", "b''"}}, {"x"});
}
inline TRS orthogonal_trs() {
  return make_trs({{"a(x)", "b'(x)"}, {"c''", "d''"}}, {"x"});
}

/// a^n(x1)
inline Term tower(std::size_t n) {
  Term t = Term::variable("x1");
  for (std::size_t i = 0; i < n; ++i) t = Term::function("a", {t});
  return t;
}

/// The two maximal disjoint occurrence sets of a(a(x1)) -> b'(x1) in
/// a^(2n+1)(x1): one starting at the root, one starting just below it.
inline Peak tower_peak(std::size_t n) {
  auto trs = collapse_trs();
  std::vector<std::pair<std::string, Path>> from_top, from_below;
  for (std::size_t k = 0; k < n; ++k) {
    from_top.emplace_back("r1", Path(2 * k, 1));
    from_below.emplace_back("r1", Path(2 * k + 1, 1));
  }
  Term source = tower(2 * n + 1);
  return Peak{source, make_multistep(source, trs, from_top),
              make_multistep(source, trs, from_below)};
}

/// Internal positions read off node paths: a vertex per function node and
/// an edge into every non-root function node.
inline PositionSet oracle_internal_positions(const Term& t) {
  PositionSet out;
  for (const auto& p : node_paths(t)) {
    if (!subterm_at(t, p).is_function()) continue;
    out.insert(Position::vertex(p));
    if (!p.empty()) out.insert(Position::edge(p));
  }
  return out;
}

inline bool oracle_edge_closed(const PositionSet& s) {
  for (const auto& p : s) {
    if (!p.is_edge()) continue;
    Path parent(p.path.begin(), p.path.end() - 1);
    if (!s.contains(Position::vertex(parent)) ||
        !s.contains(Position::vertex(p.path)))
      return false;
  }
  return true;
}

/// Every edge-closed subset, unordered.
inline std::set<PositionSet> oracle_clusters(const Term& t) {
  auto internal = oracle_internal_positions(t);
  std::vector<Position> members(internal.begin(), internal.end());
  std::set<PositionSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << members.size()); ++mask) {
    PositionSet s;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (mask >> i & 1) s.insert(members[i]);
    if (oracle_edge_closed(s)) out.insert(s);
  }
  return out;
}

/// Positions of an inductive cluster computed on the flattened term: each
/// gap's pattern is located by its site and contributes the internal
/// positions of the pattern, shifted there.
inline PositionSet oracle_cluster_positions(const InductiveCluster& c) {
  PositionSet out;
  for (const auto& site : gap_sites(c)) {
    for (const auto& q : oracle_internal_positions(c.assignment.at(site.gap))) {
      Path p = site.root;
      p.insert(p.end(), q.path.begin(), q.path.end());
      out.insert(Position{p, q.kind});
    }
  }
  return out;
}

/// Classical one-step rewriting, enumerated over node paths.
inline std::set<std::pair<Term, Term>> oracle_step_pairs(const Term& t,
                                                         const TRS& trs) {
  std::set<std::pair<Term, Term>> out;
  for (const auto& p : node_paths(t))
    for (const auto& r : trs.rules)
      if (auto s = rewrite_step_at(t, p, r)) out.emplace(t, *s);
  return out;
}

/// Multi-step peak out of `source` from (rule, path) lists.
inline Peak make_peak(const Term& source, const TRS& trs,
                      const std::vector<std::pair<std::string, Path>>& left,
                      const std::vector<std::pair<std::string, Path>>& right) {
  return Peak{source, make_multistep(source, trs, left),
              make_multistep(source, trs, right)};
}

}  // namespace clatter::testing
