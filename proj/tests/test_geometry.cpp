#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace clatter;
using clatter::testing::P;
using clatter::testing::running_term;
using clatter::testing::T;

TEST_CASE("position text and canonical order") {
  auto p = Position::parse("1.2:e");
  CHECK(p.path == Path{1, 2});
  CHECK(p.is_edge());
  CHECK(Position::parse("eps:v").to_string() == "eps:v");
  CHECK_THROWS_AS(Position::parse("1.2"), ParseError);
  CHECK_THROWS_AS(Position::parse("1:x"), ParseError);
  CHECK(to_string(P({"1.1:v", "1:v", "1:e", "eps:v", "2:v"})) ==
        "{eps:v, 1:e, 1:v, 2:v, 1.1:v}");
}

TEST_CASE("tree_positions") {
  CHECK(tree_positions(T("a(x1)")) == P({"eps:e", "eps:v", "1:e", "1:v"}));
  CHECK(tree_positions(T("x1")) == P({"eps:e", "eps:v"}));
  auto all = tree_positions(running_term());
  CHECK(all.size() == 10);
  CHECK(set_difference(all, internal_positions(running_term())) == P({"eps:e"}));
}

TEST_CASE("internal_positions") {
  CHECK(internal_positions(T("a(x1)")) == P({"eps:v"}));
  CHECK(internal_positions(T("a(e)")) == P({"eps:v", "1:e", "1:v"}));
  CHECK(internal_positions(running_term()) ==
        P({"eps:v", "1:e", "1:v", "1.1:e", "1.1:v", "1.1.1:e", "1.1.1:v",
           "1.2:e", "1.2:v"}));
  CHECK(internal_positions(T("x1")).empty());
}

TEST_CASE("internal positions agree with the path oracle and the full fold") {
  for (const auto& t :
       enumerate_standard_terms(clatter::testing::small_signature(), 5)) {
    auto internal = internal_positions(t);
    CHECK(internal == clatter::testing::oracle_internal_positions(t));
    // Tree positions minus the root edge minus everything at or below a
    // variable occurrence.
    auto expected = tree_positions(t);
    expected.erase(Position::edge({}));
    for (const auto& path : node_paths(t)) {
      if (!subterm_at(t, path).is_variable()) continue;
      expected.erase(Position::vertex(path));
      expected.erase(Position::edge(path));
    }
    CHECK(internal == expected);
  }
}

TEST_CASE("is_cluster") {
  auto t = running_term();
  auto bad = is_cluster(t, P({"1:v", "1.1:e"}));
  CHECK_FALSE(bad);
  CHECK(bad.violation.find("1.1:v") != std::string::npos);
  CHECK(is_cluster(t, P({"1:v", "1.1:e", "1.1:v"})));
  CHECK(is_cluster(t, {}));
  CHECK_FALSE(is_cluster(t, P({"eps:e"})));  // the root edge is not internal
  CHECK_FALSE(is_cluster(T("a(x1)"), P({"1:v"})));
  CHECK_THROWS_AS(GeometricCluster(t, P({"1.1:e"})), InvalidCluster);
}

TEST_CASE("components") {
  auto t = running_term();
  auto two = components(GeometricCluster(t, P({"1:v", "1.1:v"})));
  REQUIRE(two.size() == 2);
  CHECK(two[0] == P({"1:v"}));
  CHECK(two[1] == P({"1.1:v"}));

  auto one = components(GeometricCluster(t, P({"1:v", "1.1:e", "1.1:v"})));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == P({"1:v", "1.1:e", "1.1:v"}));

  CHECK(components(g_bottom(t)).empty());

  // Outermost-leftmost: the component rooted at 1.1 precedes the one at 1.2.
  auto order = components(
      GeometricCluster(t, P({"1.2:v", "1.1:v", "1.1.1:e", "1.1.1:v", "eps:v"})));
  REQUIRE(order.size() == 3);
  CHECK(order[0] == P({"eps:v"}));
  CHECK(order[1] == P({"1.1:v", "1.1.1:e", "1.1.1:v"}));
  CHECK(order[2] == P({"1.2:v"}));
}

TEST_CASE("lattice operations") {
  auto t = running_term();
  GeometricCluster root(t, P({"eps:v"}));
  GeometricCluster row3(t, P({"1:v", "1.1:v"}));
  CHECK(g_join(root, row3).positions() == P({"eps:v", "1:v", "1.1:v"}));

  GeometricCluster row4(t, P({"1:v", "1.1:e", "1.1:v"}));
  GeometricCluster row5(t, P({"1:v", "1.2:e", "1.2:v"}));
  CHECK(g_join(row4, row5).positions() ==
        P({"1:v", "1.1:e", "1.1:v", "1.2:e", "1.2:v"}));
  CHECK(g_meet(row4, row5).positions() == P({"1:v"}));

  for (const auto& c : {g_bottom(t), root, row3, row4, row5, g_top(t)})
    CHECK(g_meet(g_top(t), c) == c);

  CHECK_THROWS_AS(g_join(root, g_bottom(T("a(e)"))), SubjectMismatch);
}

TEST_CASE("enumerate_clusters matches the brute-force subset filter") {
  // Frozen from the oracle: a(e) has 5 clusters, e has 2, x1 has 1.
  CHECK(clatter::testing::oracle_clusters(T("a(e)")).size() == 5);
  CHECK(enumerate_clusters(T("a(e)")).size() == 5);
  CHECK(enumerate_clusters(T("e")).size() == 2);
  auto var = enumerate_clusters(T("x1"));
  REQUIRE(var.size() == 1);
  CHECK(var[0].empty());

  auto ae = enumerate_clusters(T("a(e)"));
  CHECK(ae[0].positions().empty());
  CHECK(ae.back().positions() == P({"eps:v", "1:e", "1:v"}));

  // Frozen from the oracle, and by hand: 20 sets without 1:v plus 3*3*8 with it.
  CHECK(clatter::testing::oracle_clusters(running_term()).size() == 92);

  for (const auto& t :
       enumerate_standard_terms(clatter::testing::small_signature(), 5)) {
    std::set<PositionSet> fast;
    for (const auto& c : enumerate_clusters(t)) fast.insert(c.positions());
    CHECK(fast == clatter::testing::oracle_clusters(t));
  }

  CHECK_THROWS_AS(enumerate_clusters(running_term(), 8), CapExceeded);
}

TEST_CASE("lattice properties on random cluster pairs") {
  std::mt19937 rng(7);
  auto t = T("f(a(g(0)),f(e,a(x1)))");
  auto clusters = enumerate_clusters(t);
  std::uniform_int_distribution<std::size_t> pick(0, clusters.size() - 1);
  for (int i = 0; i < 500; ++i) {
    const auto& a = clusters[pick(rng)];
    const auto& b = clusters[pick(rng)];
    auto j = g_join(a, b);
    auto m = g_meet(a, b);
    CHECK(is_cluster(t, j.positions()));
    CHECK(is_cluster(t, m.positions()));
    CHECK(g_le(a, j));
    CHECK(g_le(m, b));
    // Components are clusters and reassemble the input.
    PositionSet whole;
    for (const auto& comp : components(a)) {
      CHECK(is_cluster(t, comp));
      CHECK(components(comp).size() == 1);
      whole = set_union(whole, comp);
    }
    CHECK(whole == a.positions());
  }
}
