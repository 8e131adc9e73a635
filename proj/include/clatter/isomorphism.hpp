#pragma once

#include "clatter/geometry.hpp"
#include "clatter/inductive.hpp"

namespace clatter {

/// Evaluates the cluster algebra: the skeleton under Shift (symbols add no
/// positions of their own, variables give the empty set) and each gap's
/// pattern under Tree with its variables bound to the argument sets, minus
/// the pattern's root edge.
GeometricCluster to_geometric(const InductiveCluster& c);

/// Inverse of to_geometric: each connected component becomes a gap whose
/// pattern is the component with its fringe subterms abstracted to
/// x1..xn left to right. The result is canonical.
InductiveCluster to_inductive(const Term& t, const PositionSet& positions);
InductiveCluster to_inductive(const GeometricCluster& g);

InductiveCluster ind_join(const InductiveCluster& a, const InductiveCluster& b);
InductiveCluster ind_meet(const InductiveCluster& a, const InductiveCluster& b);
InductiveCluster ind_top(const Term& t);
InductiveCluster ind_bottom(const Term& t);

}  // namespace clatter
