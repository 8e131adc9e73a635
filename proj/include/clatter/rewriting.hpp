#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clatter/geometry.hpp"
#include "clatter/inductive.hpp"
#include "clatter/terms.hpp"

namespace clatter {

/// A left-linear rule with a standard left-hand side. The right-hand side
/// only uses x1..xn (n = arity) but may repeat or drop them.
struct Rule {
  std::string name;
  Term lhs;
  Term rhs;

  std::size_t arity() const { return variable_occurrences(lhs).size(); }
  /// Printable name of the rule symbol; ':' keeps it out of the term syntax.
  std::string symbol() const { return "ρ:" + name; }
  std::string to_string() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Throws PreconditionError unless `r` satisfies the Rule invariants.
void check_rule(const Rule& r);

struct TRS {
  Signature signature;
  std::vector<Rule> rules;
  /// Variable names from the VAR block, used to read terms in that file's
  /// vocabulary.
  std::set<std::string> declared_variables;

  const Rule& rule(const std::string& name) const;
  /// Compares signature and rules; the VAR vocabulary is not part of the
  /// system.
  friend bool operator==(const TRS& a, const TRS& b) {
    return a.signature == b.signature && a.rules == b.rules;
  }
};

/// Reads the COPS subset: (VAR ...) (RULES l -> r ...) with optional
/// (COMMENT ...) blocks. Inside RULES, "(COMMENT @name)" names the next
/// rule; otherwise rules are named r1, r2, ... in file order.
TRS load_trs(std::string_view text);
TRS load_trs_file(const std::string& path);

/// Writes a TRS so that load_trs reads it back unchanged.
std::string print_trs(const TRS& trs);

/// Builds a TRS from rules written in term syntax over `vars`, running the
/// same checks and standardization as load_trs. Handy in tests.
TRS make_trs(const std::vector<std::pair<std::string, std::string>>& rules,
             const std::set<std::string>& vars);

std::optional<Term> rewrite_step_at(const Term& t, const Path& p,
                                    const Rule& rule);

/// All one-step reducts of t with the redex position and rule used.
struct Reduct {
  Term result;
  Path position;
  std::string rule;
};
std::vector<Reduct> one_step_reducts(const Term& t, const TRS& trs);

struct RedexOccurrence {
  Rule rule;
  Path position;
  PositionSet pattern_positions;
  Substitution bindings;

  friend bool operator==(const RedexOccurrence&,
                         const RedexOccurrence&) = default;
};

/// Outermost-leftmost (preorder), then rule order.
std::vector<RedexOccurrence> redex_occurrences(const Term& t, const TRS& trs);

/// Simultaneous contraction of non-overlapping redex patterns, stored as a
/// cluster over `source` whose gaps carry rule symbols.
struct MultiStep {
  Term source;
  Term skeleton;
  std::map<std::string, Rule> assignment;

  std::size_t pattern_count() const { return assignment.size(); }
  /// The cluster with rule symbols replaced by left-hand sides.
  InductiveCluster lhs_cluster() const;
  /// The cluster with gaps assigned rule symbols applied to x1..xn.
  InductiveCluster rule_cluster() const;
  std::string to_string() const;

  /// Equality up to renaming of gaps.
  friend bool operator==(const MultiStep& a, const MultiStep& b);
};

class OverlapError : public Error {
 public:
  using Error::Error;
};

MultiStep make_multistep(const Term& t,
                         const std::vector<RedexOccurrence>& occurrences);

/// Reads back the contracted redexes, preorder.
std::vector<RedexOccurrence> occurrences_of(const MultiStep& m);

/// Looks up rules by name and positions by path, e.g. for CLI input.
MultiStep make_multistep(
    const Term& t, const TRS& trs,
    const std::vector<std::pair<std::string, Path>>& redexes);

enum class Side { Left, Right };
Term project(const MultiStep& m, Side side);

inline constexpr std::size_t kDefaultMaxOccurrences = 20;

/// Every multi-step from t (the empty one included), in lexicographic order
/// of the chosen occurrence indices.
std::vector<MultiStep> multisteps_from(
    const Term& t, const TRS& trs,
    std::size_t max_occurrences = kDefaultMaxOccurrences);

enum class StepClass { Empty, Single, Parallel, Multi };
std::string to_string(StepClass c);
StepClass classify(const MultiStep& m);

/// Applies a first-order substitution to the source and skeleton alike.
MultiStep substitute(const Substitution& sigma, const MultiStep& m);

}  // namespace clatter
