#include "clatter/peaks.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "clatter/isomorphism.hpp"

namespace clatter {

std::string Peak::to_string() const {
  return project(left, Side::Right).to_string() + " <- " + source.to_string() +
         " -> " + project(right, Side::Right).to_string();
}

void check_peak(const Peak& p) {
  if (!(p.left.source == p.source) || !(p.right.source == p.source))
    throw PreconditionError("peak steps do not start at " +
                            p.source.to_string());
}

InductiveCluster lhs_cluster(const MultiStep& m) { return m.lhs_cluster(); }

CriticalityReport is_critical(const Peak& p) {
  check_peak(p);
  // Positions do not depend on variable names, so standardizing the source
  // leaves the test unchanged; only linearity matters.
  CriticalityReport r;
  auto left = to_geometric(p.left.lhs_cluster());
  auto right = to_geometric(p.right.lhs_cluster());
  r.join_positions = g_join(left, right).positions();
  r.top_positions = internal_positions(p.source);
  r.missing = set_difference(r.top_positions, r.join_positions);
  r.is_critical = r.missing.empty();
  r.is_trivial = p.left == p.right;
  r.overlap_size = g_meet(left, right).size();
  r.source_linear = is_linear(p.source);
  return r;
}

namespace {

RedexOccurrence occurrence_at(const Term& t, const Rule& rule,
                              const Path& path) {
  auto sigma = match_pattern(rule.lhs, subterm_at(t, path));
  if (!sigma)
    throw std::logic_error("rule " + rule.name + " does not match " +
                           t.to_string() + " at " + path_to_string(path));
  return {rule, path, shifted(path, internal_positions(rule.lhs)), *sigma};
}

using RedexKey = std::pair<std::string, Path>;

std::multiset<RedexKey> redex_keys(const MultiStep& a, const MultiStep& b) {
  std::multiset<RedexKey> out;
  for (const auto* m : {&a, &b})
    for (const auto& occ : occurrences_of(*m))
      out.emplace(occ.rule.name, occ.position);
  return out;
}

bool has_prefix(const Path& p, const Path& prefix) {
  return p.size() >= prefix.size() &&
         std::equal(prefix.begin(), prefix.end(), p.begin());
}

}  // namespace

std::vector<CriticalPair> classical_critical_peaks(const TRS& trs) {
  std::vector<CriticalPair> out;
  for (std::size_t o = 0; o < trs.rules.size(); ++o) {
    const Rule& outer = trs.rules[o];
    const Term outer_lhs = rename_with_prefix(outer.lhs, "yR").term;
    for (std::size_t i = 0; i < trs.rules.size(); ++i) {
      const Rule& inner = trs.rules[i];
      const Term inner_lhs = rename_with_prefix(inner.lhs, "xL").term;
      for (const auto& p : node_paths(outer_lhs)) {
        if (subterm_at(outer_lhs, p).is_variable()) continue;
        if (o == i && p.empty()) continue;  // trivial root self-overlap
        auto mgu = unify(inner_lhs, subterm_at(outer_lhs, p));
        if (!mgu) continue;
        Term source = standardize(apply_subst(*mgu, outer_lhs)).term;
        auto left = make_multistep(source, {occurrence_at(source, outer, {})});
        auto right = make_multistep(source, {occurrence_at(source, inner, p)});
        CriticalPair cp{Peak{source, left, right},
                        {project(left, Side::Right), project(right, Side::Right)},
                        outer.name,
                        inner.name,
                        p};
        out.push_back(std::move(cp));
      }
    }
  }
  return out;
}

EquivalenceReport equivalence_check(const TRS& trs, std::size_t size_bound) {
  EquivalenceReport report;
  auto classical = classical_critical_peaks(trs);
  report.classical_peaks = classical.size();

  std::map<Term, std::vector<std::multiset<RedexKey>>> known;
  for (const auto& cp : classical) {
    auto verdict = is_critical(cp.peak);
    if (!verdict.is_critical) {
      report.classical_are_critical = false;
      report.counterexamples.push_back(
          "classical peak " + cp.peak.to_string() + " (outer " +
          cp.outer_rule + ", inner " + cp.inner_rule + " at " +
          path_to_string(cp.position) + ") is not lattice-critical; missing " +
          to_string(verdict.missing));
    }
    known[cp.peak.source].push_back(redex_keys(cp.peak.left, cp.peak.right));
  }

  for (const auto& t : enumerate_standard_terms(trs.signature, size_bound)) {
    ++report.terms_checked;
    std::vector<MultiStep> singles;
    for (const auto& occ : redex_occurrences(t, trs))
      singles.push_back(make_multistep(t, {occ}));
    for (std::size_t a = 0; a < singles.size(); ++a) {
      for (std::size_t b = a + 1; b < singles.size(); ++b) {
        ++report.local_peaks_checked;
        Peak peak{t, singles[a], singles[b]};
        auto verdict = is_critical(peak);
        if (!verdict.is_critical || verdict.is_trivial) continue;
        ++report.lattice_critical;
        auto keys = redex_keys(peak.left, peak.right);
        auto it = known.find(t);
        bool matched = it != known.end() &&
                       std::find(it->second.begin(), it->second.end(), keys) !=
                           it->second.end();
        if (!matched) {
          report.critical_are_classical = false;
          report.counterexamples.push_back("lattice-critical peak " +
                                           peak.to_string() +
                                           " has no classical counterpart");
        }
      }
    }
  }
  return report;
}

std::optional<CriticalGeneralization> critical_generalization(const Peak& p) {
  auto verdict = is_critical(p);
  if (!verdict.is_critical) return std::nullopt;
  // Every symbol is covered, so fresh variables at the leaves lose nothing.
  std::size_t next = 1;
  std::function<Term(const Term&)> linearize = [&](const Term& t) -> Term {
    if (t.is_variable()) return Term::variable(standard_variable(next++));
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(linearize(a));
    return Term::function(t.name(), std::move(args));
  };
  Term general = linearize(p.source);
  auto rebuild = [&](const MultiStep& m) {
    std::vector<RedexOccurrence> occs;
    for (const auto& occ : occurrences_of(m))
      occs.push_back(occurrence_at(general, occ.rule, occ.position));
    return make_multistep(general, occs);
  };
  CriticalGeneralization out{Peak{general, rebuild(p.left), rebuild(p.right)},
                             *match_pattern(general, p.source)};
  return out;
}

std::size_t skeleton_size(const MultiStep& m) {
  std::size_t n = 0;
  std::function<void(const Term&)> count = [&](const Term& t) {
    if (!t.is_variable()) ++n;
    for (const auto& a : t.args()) count(a);
  };
  count(m.skeleton);
  return n;
}

namespace {

std::string fresh_variable(const Term& t) {
  auto used = variables(t);
  std::string name = "z";
  for (std::size_t i = 1; used.contains(name); ++i)
    name = "z" + std::to_string(i);
  return name;
}

Term rename_gaps_with_suffix(const Term& t, const std::string& suffix) {
  if (!t.has_gaps()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rename_gaps_with_suffix(a, suffix));
  if (t.is_gap()) return Term::gap(t.name() + suffix, std::move(args));
  return Term::function(t.name(), std::move(args));
}

}  // namespace

MultiStep recompose(const MultiStep& outer, const std::string& variable,
                    const MultiStep& inner) {
  Substitution at_source{{variable, inner.source}};
  Substitution at_skeleton{
      {variable, rename_gaps_with_suffix(inner.skeleton, "'")}};
  MultiStep out{apply_subst(at_source, outer.source),
                apply_subst(at_skeleton, outer.skeleton), outer.assignment};
  for (const auto& [gap, rule] : inner.assignment)
    out.assignment.emplace(gap + "'", rule);
  return out;
}

Decomposition decompose(const Peak& p) {
  check_peak(p);
  auto verdict = is_critical(p);
  if (verdict.is_critical)
    throw PreconditionError("peak is critical: " + p.to_string());
  if (p.pattern_count() < 2)
    throw PreconditionError(
        "peak has fewer than two redex patterns: proper instance of a rule "
        "application, no analysis");

  std::vector<Path> uncovered;
  for (const auto& pos : verdict.missing)
    if (pos.is_edge()) uncovered.push_back(pos.path);
  if (uncovered.empty())
    throw std::logic_error("non-critical peak " + p.to_string() +
                           " with several patterns has no uncovered edge");
  const Path split = *std::min_element(uncovered.begin(), uncovered.end(),
                                       preorder_less);

  const std::string x = fresh_variable(p.source);
  const Term t0 = replace_at(p.source, split, Term::variable(x));
  const Term t1 = subterm_at(p.source, split);

  auto divide = [&](const MultiStep& m) {
    std::vector<RedexOccurrence> outer_occs, inner_occs;
    for (const auto& occ : occurrences_of(m)) {
      if (has_prefix(occ.position, split)) {
        Path rel(occ.position.begin() + static_cast<long>(split.size()),
                 occ.position.end());
        inner_occs.push_back(occurrence_at(t1, occ.rule, rel));
      } else {
        outer_occs.push_back(occurrence_at(t0, occ.rule, occ.position));
      }
    }
    return std::pair{make_multistep(t0, outer_occs),
                     make_multistep(t1, inner_occs)};
  };
  auto [left0, left1] = divide(p.left);
  auto [right0, right1] = divide(p.right);

  Decomposition d{Peak{t0, left0, right0}, Peak{t1, left1, right1},
                  Position::edge(split), x};

  for (const auto& [whole, part0, part1] :
       {std::tuple{&p.left, &left0, &left1},
        std::tuple{&p.right, &right0, &right1}}) {
    if (!(recompose(*part0, x, *part1) == *whole))
      throw std::logic_error("decomposition of " + p.to_string() +
                             " does not recompose");
    for (auto side : {Side::Left, Side::Right}) {
      Substitution plug{{x, project(*part1, side)}};
      if (!(apply_subst(plug, project(*part0, side)) == project(*whole, side)))
        throw std::logic_error("decomposition of " + p.to_string() +
                               " does not recompose its projections");
    }
    if (skeleton_size(*part0) >= skeleton_size(*whole) ||
        skeleton_size(*part1) >= skeleton_size(*whole))
      throw std::logic_error("decomposition of " + p.to_string() +
                             " does not shrink the skeletons");
  }
  return d;
}

// ---------------------------------------------------------------------------
// Joinability

std::string to_string(JoinVerdict v) {
  switch (v) {
    case JoinVerdict::Joinable:
      return "joinable";
    case JoinVerdict::NotJoinable:
      return "not joinable";
    case JoinVerdict::NotJoinableWithinDepth:
      return "not joinable within depth";
    case JoinVerdict::Unknown:
      return "unknown";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Refuted:
      return "refuted";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

namespace {

struct Reach {
  std::map<Term, std::pair<std::size_t, std::optional<Term>>> seen;  // depth, parent
  bool exhausted = false;
  bool capped = false;

  std::vector<Term> trace_to(const Term& t) const {
    std::vector<Term> out{t};
    for (auto parent = seen.at(t).second; parent;
         parent = seen.at(*parent).second)
      out.push_back(*parent);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

Reach explore(const Term& start, const TRS& trs, std::size_t depth,
              std::size_t max_states) {
  Reach r;
  r.seen.emplace(start, std::pair{std::size_t{0}, std::optional<Term>{}});
  std::vector<Term> frontier{start};
  for (std::size_t d = 1; d <= depth && !frontier.empty(); ++d) {
    std::vector<Term> next;
    for (const auto& t : frontier) {
      for (auto& reduct : one_step_reducts(t, trs)) {
        if (r.seen.contains(reduct.result)) continue;
        if (r.seen.size() >= max_states) {
          r.capped = true;
          return r;
        }
        r.seen.emplace(reduct.result, std::pair{d, std::optional<Term>{t}});
        next.push_back(reduct.result);
      }
    }
    frontier = std::move(next);
  }
  if (frontier.empty()) {
    r.exhausted = true;
  } else {
    // Frontier at the depth limit: exhausted only if it is all normal forms.
    r.exhausted = std::all_of(frontier.begin(), frontier.end(), [&](auto& t) {
      for (auto& reduct : one_step_reducts(t, trs))
        if (!r.seen.contains(reduct.result)) return false;
      return true;
    });
  }
  return r;
}

}  // namespace

JoinResult bounded_joinable(const Term& a, const Term& b, const TRS& trs,
                            std::size_t depth, std::size_t max_states) {
  auto ra = explore(a, trs, depth, max_states);
  auto rb = explore(b, trs, depth, max_states);
  JoinResult out;
  std::optional<std::pair<std::size_t, Term>> best;
  for (const auto& [t, info] : ra.seen) {
    auto it = rb.seen.find(t);
    if (it == rb.seen.end()) continue;
    std::size_t cost = info.first + it->second.first;
    if (!best || cost < best->first) best = std::pair{cost, t};
  }
  if (best) {
    out.verdict = JoinVerdict::Joinable;
    out.witness = best->second;
    out.left_trace = ra.trace_to(best->second);
    out.right_trace = rb.trace_to(best->second);
    return out;
  }
  if (ra.capped || rb.capped)
    out.verdict = JoinVerdict::Unknown;
  else if (ra.exhausted && rb.exhausted)
    out.verdict = JoinVerdict::NotJoinable;
  else
    out.verdict = JoinVerdict::NotJoinableWithinDepth;
  return out;
}

LocalConfluenceReport local_confluence_report(const TRS& trs,
                                              std::size_t depth) {
  LocalConfluenceReport report;
  report.pairs = classical_critical_peaks(trs);
  bool unknown = false;
  for (const auto& cp : report.pairs) {
    auto j = bounded_joinable(cp.targets.first, cp.targets.second, trs, depth);
    if (j.verdict == JoinVerdict::NotJoinable)
      report.counterexamples.push_back(cp.targets);
    else if (j.verdict != JoinVerdict::Joinable)
      unknown = true;
    report.joins.push_back(std::move(j));
  }
  if (!report.counterexamples.empty())
    report.verdict = Verdict::Refuted;
  else
    report.verdict = unknown ? Verdict::Unknown : Verdict::Holds;
  return report;
}

OrthogonalityReport orthogonality(const TRS& trs) {
  OrthogonalityReport r;
  for (const auto& rule : trs.rules) check_rule(rule);
  r.pairs = classical_critical_peaks(trs);
  r.orthogonal = r.pairs.empty();
  return r;
}

DiamondReport diamond_check(const TRS& trs, const Term& t,
                            std::size_t max_occurrences) {
  DiamondReport report;
  std::map<Term, std::set<Term>> cache;
  auto one_multistep = [&](const Term& s) -> const std::set<Term>& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    std::set<Term> out;
    for (const auto& m : multisteps_from(s, trs, max_occurrences))
      out.insert(project(m, Side::Right));
    return cache.emplace(s, std::move(out)).first->second;
  };
  try {
    auto steps = multisteps_from(t, trs, max_occurrences);
    for (std::size_t i = 0; i < steps.size(); ++i) {
      for (std::size_t j = i; j < steps.size(); ++j) {
        ++report.peaks_checked;
        auto s = project(steps[i], Side::Right);
        auto u = project(steps[j], Side::Right);
        const auto& from_s = one_multistep(s);
        const auto& from_u = one_multistep(u);
        bool closed = std::any_of(from_s.begin(), from_s.end(),
                                  [&](const Term& r) { return from_u.contains(r); });
        if (!closed)
          report.counterexamples.push_back(
              "peak " + Peak{t, steps[i], steps[j]}.to_string() +
              " is not closed by single multi-steps");
      }
    }
  } catch (const CapExceeded&) {
    report.verdict = Verdict::Unknown;
    return report;
  }
  report.verdict =
      report.counterexamples.empty() ? Verdict::Holds : Verdict::Refuted;
  return report;
}

}  // namespace clatter
