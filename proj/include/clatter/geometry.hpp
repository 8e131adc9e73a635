#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clatter/terms.hpp"

namespace clatter {

// Edge sorts before the vertex it leads into, so "1:e" precedes "1:v".
enum class PositionKind : std::uint8_t { Edge, Vertex };

/// A vertex position names a node; an edge position p.i names the edge from
/// node p to its i-th child (so the edge shares its path with its lower
/// endpoint). The root edge is the edge position with the empty path.
struct Position {
  Path path;
  PositionKind kind = PositionKind::Vertex;

  static Position vertex(Path p) { return {std::move(p), PositionKind::Vertex}; }
  static Position edge(Path p) { return {std::move(p), PositionKind::Edge}; }

  bool is_vertex() const { return kind == PositionKind::Vertex; }
  bool is_edge() const { return kind == PositionKind::Edge; }
  bool is_root_edge() const { return is_edge() && path.empty(); }

  /// "eps:v", "1:e", "1.2:v".
  std::string to_string() const;
  static Position parse(std::string_view text);

  friend bool operator==(const Position&, const Position&) = default;
  /// Canonical order: path length, then lexicographic path, then kind.
  friend std::strong_ordering operator<=>(const Position& a,
                                          const Position& b);
};

using PositionSet = std::set<Position>;

/// "{eps:v, 1:e, 1:v}"
std::string to_string(const PositionSet& s);
PositionSet parse_position_set(const std::vector<std::string>& items);

/// `prefix`·P for every member of P.
PositionSet shifted(const Path& prefix, const PositionSet& s);

PositionSet set_union(const PositionSet& a, const PositionSet& b);
PositionSet set_intersection(const PositionSet& a, const PositionSet& b);
PositionSet set_difference(const PositionSet& a, const PositionSet& b);
bool is_subset(const PositionSet& a, const PositionSet& b);

/// All positions: fold with f(P...) = {eps_e, eps_v} u U_i i.P_i and
/// variables interpreted as {eps_e, eps_v}.
PositionSet tree_positions(const Term& t);

/// Fold with variables interpreted as the empty set, minus the root edge.
PositionSet internal_positions(const Term& t);

struct ClusterCheck {
  bool ok = true;
  std::string violation;
  explicit operator bool() const { return ok; }
};

/// Subset of internal positions closed under taking edge endpoints.
ClusterCheck is_cluster(const Term& t, const PositionSet& positions);

class InvalidCluster : public Error {
 public:
  using Error::Error;
};

class SubjectMismatch : public Error {
 public:
  using Error::Error;
};

/// An edge-closed set of internal positions of `subject`.
class GeometricCluster {
 public:
  /// Throws InvalidCluster with the first violation.
  GeometricCluster(Term subject, PositionSet positions);

  const Term& subject() const { return subject_; }
  const PositionSet& positions() const { return positions_; }
  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }

  friend bool operator==(const GeometricCluster&,
                         const GeometricCluster&) = default;

 private:
  Term subject_;
  PositionSet positions_;
};

/// Connected components (patterns), outermost-leftmost first (by the
/// preorder of their root vertices).
std::vector<PositionSet> components(const GeometricCluster& c);

/// Connected components of an arbitrary position set; vertices p and p.i
/// are adjacent iff edge p.i is in the set.
std::vector<PositionSet> components(const PositionSet& positions);

/// Vertex paths in preorder (prefix before extension, then left to right).
bool preorder_less(const Path& a, const Path& b);

GeometricCluster g_join(const GeometricCluster& a, const GeometricCluster& b);
GeometricCluster g_meet(const GeometricCluster& a, const GeometricCluster& b);
GeometricCluster g_top(const Term& t);
GeometricCluster g_bottom(const Term& t);
bool g_le(const GeometricCluster& a, const GeometricCluster& b);

inline constexpr std::size_t kDefaultMaxClusterPositions = 14;

/// Every cluster of `t`, ordered by size and then lexicographically on the
/// canonically ordered members. Throws CapExceeded when `t` has more than
/// `max_positions` internal positions.
std::vector<GeometricCluster> enumerate_clusters(
    const Term& t, std::size_t max_positions = kDefaultMaxClusterPositions);

}  // namespace clatter
