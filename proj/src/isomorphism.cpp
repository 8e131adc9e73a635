#include "clatter/isomorphism.hpp"

#include <functional>

namespace clatter {

namespace {

// Tree interpretation of a pattern; its variables are bound to the sets
// already computed for the gap's arguments.
PositionSet eval_tree(const Term& pattern,
                      const std::map<std::string, PositionSet>& env) {
  if (pattern.is_variable()) return env.at(pattern.name());
  PositionSet out{Position::edge({}), Position::vertex({})};
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    out.merge(shifted({i + 1}, eval_tree(pattern.arg(i), env)));
  return out;
}

// Shift interpretation of the skeleton.
PositionSet eval_shift(const Term& skel, const PatternAssignment& patterns) {
  switch (skel.kind()) {
    case TermKind::Variable:
      return {};
    case TermKind::Function: {
      PositionSet out;
      for (std::size_t i = 0; i < skel.arity(); ++i)
        out.merge(shifted({i + 1}, eval_shift(skel.arg(i), patterns)));
      return out;
    }
    case TermKind::Gap: {
      std::map<std::string, PositionSet> env;
      for (std::size_t i = 0; i < skel.arity(); ++i)
        env.emplace(standard_variable(i + 1),
                    eval_shift(skel.arg(i), patterns));
      auto out = eval_tree(patterns.at(skel.name()), env);
      out.erase(Position::edge({}));
      return out;
    }
  }
  return {};
}

class InductiveBuilder {
 public:
  explicit InductiveBuilder(const PositionSet& positions)
      : positions_(positions) {}

  Term build(const Term& t, Path& here) {
    if (t.is_variable()) return t;
    if (positions_.contains(Position::vertex(here))) return abstract(t, here);
    std::vector<Term> args;
    for (std::size_t i = 0; i < t.arity(); ++i) {
      here.push_back(i + 1);
      args.push_back(build(t.arg(i), here));
      here.pop_back();
    }
    return Term::function(t.name(), std::move(args));
  }

  PatternAssignment take_assignment() { return std::move(assignment_); }

 private:
  // `t` at `here` roots a component. The gap is named before its arguments
  // are processed, so names come out in preorder.
  Term abstract(const Term& t, Path& here) {
    std::string gap = canonical_gap(assignment_.size() + 1);
    assignment_.emplace(gap, t);  // placeholder until the pattern is known
    std::vector<std::pair<Path, const Term*>> fringe;
    std::size_t next = 1;
    std::function<Term(const Term&, Path&)> pattern_of =
        [&](const Term& node, Path& at) -> Term {
      std::vector<Term> args;
      for (std::size_t i = 0; i < node.arity(); ++i) {
        at.push_back(i + 1);
        if (positions_.contains(Position::edge(at))) {
          args.push_back(pattern_of(node.arg(i), at));
        } else {
          fringe.emplace_back(at, &node.arg(i));
          args.push_back(Term::variable(standard_variable(next++)));
        }
        at.pop_back();
      }
      return Term::function(node.name(), std::move(args));
    };
    Path at = here;
    Term pattern = pattern_of(t, at);
    assignment_.insert_or_assign(gap, pattern);
    std::vector<Term> args;
    for (auto& [path, sub] : fringe) args.push_back(build(*sub, path));
    return Term::gap(gap, std::move(args));
  }

  const PositionSet& positions_;
  PatternAssignment assignment_;
};

}  // namespace

GeometricCluster to_geometric(const InductiveCluster& c) {
  require_valid(c);
  return {flatten(c), eval_shift(c.skeleton, c.assignment)};
}

InductiveCluster to_inductive(const Term& t, const PositionSet& positions) {
  if (t.has_gaps())
    throw PreconditionError("to_inductive: subject contains gaps");
  if (auto check = is_cluster(t, positions); !check)
    throw InvalidCluster("not a cluster: " + check.violation);
  InductiveBuilder builder(positions);
  Path here;
  Term skeleton = builder.build(t, here);
  return {std::move(skeleton), builder.take_assignment()};
}

InductiveCluster to_inductive(const GeometricCluster& g) {
  return to_inductive(g.subject(), g.positions());
}

InductiveCluster ind_join(const InductiveCluster& a, const InductiveCluster& b) {
  return to_inductive(g_join(to_geometric(a), to_geometric(b)));
}

InductiveCluster ind_meet(const InductiveCluster& a, const InductiveCluster& b) {
  return to_inductive(g_meet(to_geometric(a), to_geometric(b)));
}

InductiveCluster ind_top(const Term& t) { return to_inductive(g_top(t)); }

InductiveCluster ind_bottom(const Term& t) {
  return to_inductive(g_bottom(t));
}

}  // namespace clatter
