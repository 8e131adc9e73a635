#include "clatter/geometry.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

namespace clatter {

std::strong_ordering operator<=>(const Position& a, const Position& b) {
  if (auto c = a.path.size() <=> b.path.size(); c != 0) return c;
  if (auto c = a.path <=> b.path; c != 0) return c;
  return a.kind <=> b.kind;
}

std::string Position::to_string() const {
  return path_to_string(path) + (is_vertex() ? ":v" : ":e");
}

Position Position::parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon + 2 != text.size())
    throw ParseError("position must look like '1.2:v' or 'eps:e'", 0);
  Position p;
  p.path = parse_path(text.substr(0, colon));
  switch (text[colon + 1]) {
    case 'v':
      p.kind = PositionKind::Vertex;
      break;
    case 'e':
      p.kind = PositionKind::Edge;
      break;
    default:
      throw ParseError("position kind must be 'v' or 'e'", colon + 1);
  }
  return p;
}

std::string to_string(const PositionSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : s) {
    if (!first) out += ", ";
    first = false;
    out += p.to_string();
  }
  return out + "}";
}

PositionSet parse_position_set(const std::vector<std::string>& items) {
  PositionSet out;
  for (const auto& s : items) out.insert(Position::parse(s));
  return out;
}

PositionSet shifted(const Path& prefix, const PositionSet& s) {
  PositionSet out;
  for (const auto& p : s) {
    Path q = prefix;
    q.insert(q.end(), p.path.begin(), p.path.end());
    out.insert(Position{std::move(q), p.kind});
  }
  return out;
}

PositionSet set_union(const PositionSet& a, const PositionSet& b) {
  PositionSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

PositionSet set_intersection(const PositionSet& a, const PositionSet& b) {
  PositionSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

PositionSet set_difference(const PositionSet& a, const PositionSet& b) {
  PositionSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

bool is_subset(const PositionSet& a, const PositionSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

// The Tree algebra with a caller-chosen interpretation of variables.
PositionSet tree_fold(const Term& t, const PositionSet& at_variable) {
  if (t.is_variable()) return at_variable;
  PositionSet out{Position::edge({}), Position::vertex({})};
  for (std::size_t i = 0; i < t.arity(); ++i)
    out.merge(shifted({i + 1}, tree_fold(t.arg(i), at_variable)));
  return out;
}

}  // namespace

PositionSet tree_positions(const Term& t) {
  return tree_fold(t, {Position::edge({}), Position::vertex({})});
}

PositionSet internal_positions(const Term& t) {
  auto out = tree_fold(t, {});
  out.erase(Position::edge({}));
  return out;
}

namespace {

// Same test as membership in internal_positions(t), without building it.
bool is_internal(const Term& t, const Position& p) {
  if (p.is_root_edge()) return false;
  const Term* node = &t;
  for (auto i : p.path) {
    if (i == 0 || i > node->arity()) return false;
    node = &node->arg(i - 1);
  }
  return node->is_function();
}

}  // namespace

ClusterCheck is_cluster(const Term& t, const PositionSet& positions) {
  for (const auto& p : positions) {
    if (!is_internal(t, p))
      return {false, "position " + p.to_string() +
                         " is not an internal position of " + t.to_string()};
  }
  for (const auto& p : positions) {
    if (!p.is_edge()) continue;
    Path upper(p.path.begin(), p.path.end() - 1);
    if (!positions.contains(Position::vertex(upper)))
      return {false, "edge " + p.to_string() + " lacks its endpoint " +
                         Position::vertex(upper).to_string()};
    if (!positions.contains(Position::vertex(p.path)))
      return {false, "edge " + p.to_string() + " lacks its endpoint " +
                         Position::vertex(p.path).to_string()};
  }
  return {};
}

GeometricCluster::GeometricCluster(Term subject, PositionSet positions)
    : subject_(std::move(subject)), positions_(std::move(positions)) {
  if (auto check = is_cluster(subject_, positions_); !check)
    throw InvalidCluster("not a cluster: " + check.violation);
}

bool preorder_less(const Path& a, const Path& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<PositionSet> components(const PositionSet& positions) {
  std::vector<Path> vertices;
  for (const auto& p : positions)
    if (p.is_vertex()) vertices.push_back(p.path);
  std::sort(vertices.begin(), vertices.end(), preorder_less);
  std::map<Path, std::size_t> index;
  for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i]] = i;

  std::vector<std::size_t> parent(vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<Position> dangling;
  for (const auto& p : positions) {
    if (!p.is_edge()) continue;
    if (p.path.empty()) {
      dangling.push_back(p);
      continue;
    }
    Path upper(p.path.begin(), p.path.end() - 1);
    auto lo = index.find(p.path);
    auto hi = index.find(upper);
    if (lo == index.end() || hi == index.end()) {
      dangling.push_back(p);
      continue;
    }
    // Roots stay the preorder-smallest member, i.e. the component root.
    auto a = find(hi->second), b = find(lo->second);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::map<std::size_t, PositionSet> grouped;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    grouped[find(i)].insert(Position::vertex(vertices[i]));
  for (const auto& p : positions) {
    if (!p.is_edge() || p.path.empty()) continue;
    auto lo = index.find(p.path);
    Path upper(p.path.begin(), p.path.end() - 1);
    if (lo == index.end() || !index.contains(upper)) continue;
    grouped[find(lo->second)].insert(p);
  }
  std::vector<PositionSet> out;
  for (auto& [root, set] : grouped) out.push_back(std::move(set));
  for (const auto& e : dangling) out.push_back({e});
  return out;
}

std::vector<PositionSet> components(const GeometricCluster& c) {
  return components(c.positions());
}

namespace {

void require_same_subject(const GeometricCluster& a,
                          const GeometricCluster& b) {
  if (!(a.subject() == b.subject()))
    throw SubjectMismatch("clusters are for different terms: " +
                          a.subject().to_string() + " vs " +
                          b.subject().to_string());
}

}  // namespace

GeometricCluster g_join(const GeometricCluster& a, const GeometricCluster& b) {
  require_same_subject(a, b);
  return {a.subject(), set_union(a.positions(), b.positions())};
}

GeometricCluster g_meet(const GeometricCluster& a, const GeometricCluster& b) {
  require_same_subject(a, b);
  return {a.subject(), set_intersection(a.positions(), b.positions())};
}

GeometricCluster g_top(const Term& t) { return {t, internal_positions(t)}; }

GeometricCluster g_bottom(const Term& t) { return {t, {}}; }

bool g_le(const GeometricCluster& a, const GeometricCluster& b) {
  require_same_subject(a, b);
  return is_subset(a.positions(), b.positions());
}

std::vector<GeometricCluster> enumerate_clusters(const Term& t,
                                                 std::size_t max_positions) {
  auto internal = internal_positions(t);
  if (internal.size() > max_positions)
    throw CapExceeded(t.to_string() + " has " +
                      std::to_string(internal.size()) +
                      " internal positions; cluster enumeration is capped at " +
                      std::to_string(max_positions));
  std::vector<Position> members(internal.begin(), internal.end());
  std::map<Position, std::size_t> index;
  for (std::size_t i = 0; i < members.size(); ++i) index[members[i]] = i;

  // For each edge, the bitmask of the edge plus both endpoints.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> closure;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!members[i].is_edge()) continue;
    Path upper(members[i].path.begin(), members[i].path.end() - 1);
    std::uint32_t ends = (1u << index.at(Position::vertex(upper))) |
                         (1u << index.at(Position::vertex(members[i].path)));
    closure.emplace_back(1u << i, ends);
  }

  std::vector<std::uint32_t> masks;
  const std::uint32_t limit = 1u << members.size();
  for (std::uint32_t m = 0; m < limit; ++m) {
    bool closed = std::all_of(closure.begin(), closure.end(), [m](auto e) {
      return !(m & e.first) || (m & e.second) == e.second;
    });
    if (closed) masks.push_back(m);
  }
  // Size, then lexicographic on the ascending member indices.
  auto key = [](std::uint32_t m) {
    std::vector<int> idx;
    for (int i = 0; m; ++i, m >>= 1)
      if (m & 1u) idx.push_back(i);
    return idx;
  };
  std::sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    auto pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return key(a) < key(b);
  });

  std::vector<GeometricCluster> out;
  out.reserve(masks.size());
  for (auto m : masks) {
    PositionSet s;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (m & (1u << i)) s.insert(members[i]);
    out.emplace_back(t, std::move(s));
  }
  return out;
}

}  // namespace clatter
