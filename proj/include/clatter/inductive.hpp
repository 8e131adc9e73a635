#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clatter/terms.hpp"

namespace clatter {

/// Gap name to pattern (a standard, linear, non-variable term).
using PatternAssignment = std::map<std::string, Term>;

/// A skeleton linear in its gaps, paired with patterns for the gaps.
///
/// Two clusters are equal when their canonical forms coincide, i.e. up to
/// renaming of gaps.
struct InductiveCluster {
  Term skeleton;
  PatternAssignment assignment;

  std::string to_string() const;

  friend bool operator==(const InductiveCluster& a, const InductiveCluster& b);
};

/// Canonical gap name "X<index>".
std::string canonical_gap(std::size_t index);

/// Gap names in preorder (outermost-leftmost) of the skeleton.
std::vector<std::string> gap_order(const Term& skeleton);

/// Second-order substitution: each gap occurrence X(N1..Nn) with X in
/// `templates` becomes templates[X] with xi replaced by the substituted Ni.
/// Gaps inside the templates are left alone.
Term instantiate_gaps(const Term& skeleton,
                      const std::map<std::string, Term>& templates);

/// Empty iff `c` is gap-linear, assigns exactly its gaps, respects arities,
/// and assigns only standard non-variable gap-free patterns.
std::vector<std::string> validate(const InductiveCluster& c);

/// Throws InvalidCluster listing the violations.
void require_valid(const InductiveCluster& c);

/// The term the cluster is for.
Term flatten(const InductiveCluster& c);

InductiveCluster canonicalize(const InductiveCluster& c);

/// Where a gap's pattern sits once the cluster is flattened.
struct GapSite {
  std::string gap;
  Path root;
};

/// Sites in preorder of the skeleton.
std::vector<GapSite> gap_sites(const InductiveCluster& c);

/// Coarse gap name to a pattern-skeleton over the fine cluster's gaps.
using Witness = std::map<std::string, Term>;

/// If `fine` is a refinement of `coarse`, returns the substitution mapping
/// coarse's skeleton onto fine's; nullopt otherwise. Throws SubjectMismatch
/// when the clusters are for different terms.
std::optional<Witness> coarsening_le(const InductiveCluster& fine,
                                     const InductiveCluster& coarse);

/// Checks both defining equations of the coarsening order for `gamma`.
bool witness_check(const InductiveCluster& fine,
                   const InductiveCluster& coarse, const Witness& gamma);

std::string witness_to_string(const Witness& w);

}  // namespace clatter
