#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clatter/geometry.hpp"
#include "clatter/inductive.hpp"
#include "clatter/rewriting.hpp"

namespace clatter {

/// Two multi-steps out of a common source.
struct Peak {
  Term source;
  MultiStep left;
  MultiStep right;

  std::size_t pattern_count() const {
    return left.pattern_count() + right.pattern_count();
  }
  std::string to_string() const;
};

/// Throws PreconditionError unless both steps start at `source`.
void check_peak(const Peak& p);

/// The step's cluster with rule symbols replaced by their left-hand sides.
InductiveCluster lhs_cluster(const MultiStep& m);

struct CriticalityReport {
  PositionSet join_positions;
  PositionSet top_positions;
  PositionSet missing;  // top \ join
  bool is_critical = false;
  bool is_trivial = false;
  /// Size of the meet of the two left-hand-side clusters.
  std::size_t overlap_size = 0;
  /// False when the source repeats a variable and so has no standard form;
  /// the peak is then an instance of a critical peak at best.
  bool source_linear = true;
};

/// A peak is critical when the join of its left-hand-side clusters is the
/// top cluster of the source.
CriticalityReport is_critical(const Peak& p);

struct CriticalPair {
  Peak peak;  // left: outer step at the root, right: inner step
  std::pair<Term, Term> targets;
  std::string outer_rule;
  std::string inner_rule;
  Path position;  // of the inner redex
};

/// Unification-based overlaps of every ordered rule pair at every
/// non-variable position of the outer left-hand side, excluding a rule
/// overlapping itself at the root. Ordered by outer rule, inner rule, then
/// position (preorder).
std::vector<CriticalPair> classical_critical_peaks(const TRS& trs);

struct EquivalenceReport {
  std::size_t classical_peaks = 0;
  std::size_t terms_checked = 0;
  std::size_t local_peaks_checked = 0;
  std::size_t lattice_critical = 0;
  bool classical_are_critical = true;   // every classical peak passes
  bool critical_are_classical = true;   // every lattice-critical peak is one
  std::vector<std::string> counterexamples;

  bool passed() const {
    return classical_are_critical && critical_are_classical;
  }
};

inline constexpr std::size_t kDefaultEquivalenceSize = 6;

/// Cross-checks the lattice definition against the classical construction
/// on all local peaks out of standard terms up to `size_bound` nodes.
EquivalenceReport equivalence_check(
    const TRS& trs, std::size_t size_bound = kDefaultEquivalenceSize);

/// A critical peak that the given one is a variable instance of.
struct CriticalGeneralization {
  Peak critical;
  Substitution instance;  // instance(critical.source) == original source
};

/// Defined when the steps' patterns cover the whole source: linearizes and
/// standardizes the source and returns the matching substitution.
std::optional<CriticalGeneralization> critical_generalization(const Peak& p);

struct Decomposition {
  Peak outer;  // over source[split := variable]
  Peak inner;  // over source|split
  Position split_edge;
  std::string variable;
};

/// Splits a non-critical peak with at least two redex patterns at its
/// leftmost-outermost edge not covered by either step. Recomposition and
/// the size decrease are re-verified before returning.
Decomposition decompose(const Peak& p);

/// Plugs `inner` into `outer` at the single occurrence of `variable`.
MultiStep recompose(const MultiStep& outer, const std::string& variable,
                    const MultiStep& inner);

/// Function symbols plus gaps of a step's skeleton.
std::size_t skeleton_size(const MultiStep& m);

enum class JoinVerdict { Joinable, NotJoinable, NotJoinableWithinDepth, Unknown };
std::string to_string(JoinVerdict v);

struct JoinResult {
  JoinVerdict verdict = JoinVerdict::Unknown;
  std::optional<Term> witness;
  std::vector<Term> left_trace;   // from the first term to the witness
  std::vector<Term> right_trace;  // from the second term to the witness
};

inline constexpr std::size_t kDefaultMaxDepth = 8;
inline constexpr std::size_t kDefaultMaxStates = 20000;

/// Breadth-first search for a common reduct within `depth` steps on each
/// side. NotJoinable means both reachable sets were exhausted; hitting
/// `max_states` without a common reduct gives Unknown.
JoinResult bounded_joinable(const Term& a, const Term& b, const TRS& trs,
                            std::size_t depth,
                            std::size_t max_states = kDefaultMaxStates);

enum class Verdict { Holds, Refuted, Unknown };
std::string to_string(Verdict v);

struct LocalConfluenceReport {
  Verdict verdict = Verdict::Unknown;
  std::vector<CriticalPair> pairs;
  std::vector<JoinResult> joins;  // parallel to `pairs`
  std::vector<std::pair<Term, Term>> counterexamples;
};

LocalConfluenceReport local_confluence_report(const TRS& trs,
                                              std::size_t depth);

struct OrthogonalityReport {
  bool orthogonal = false;
  std::vector<CriticalPair> pairs;
};

/// Left-linearity holds for every loaded TRS; orthogonal means no
/// classical critical peaks besides the excluded root self-overlaps.
OrthogonalityReport orthogonality(const TRS& trs);

struct DiamondReport {
  Verdict verdict = Verdict::Unknown;
  std::size_t peaks_checked = 0;
  std::vector<std::string> counterexamples;
};

/// Checks that every multi-step peak out of `t` is closed by one multi-step
/// on each side.
DiamondReport diamond_check(const TRS& trs, const Term& t,
                            std::size_t max_occurrences = kDefaultMaxOccurrences);

}  // namespace clatter
