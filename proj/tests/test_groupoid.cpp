#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pgact/groupoid.hpp"

using namespace pgact;

namespace {

// One arrow g between two objects, plus its inverse: {d(g), r(g), g, g^{-1}}.
GroupoidTable single_arrow_table() {
  GroupoidTable t;
  t.elements = {"dg", "rg", "g", "gi"};
  t.inverses = {{"dg", "dg"}, {"rg", "rg"}, {"g", "gi"}, {"gi", "g"}};
  t.compositions = {{"dg", "dg", "dg"}, {"rg", "rg", "rg"}, {"g", "dg", "g"},
                    {"dg", "gi", "gi"}, {"rg", "g", "g"},   {"gi", "rg", "gi"},
                    {"g", "gi", "rg"},  {"gi", "g", "dg"}};
  return t;
}

// One extra loop g3 at the object g2, with g3*g3 = g2; g1 is isolated.
GroupoidTable loop_table(const std::string& g3g3 = "g2") {
  GroupoidTable t;
  t.elements = {"g1", "g2", "g3"};
  t.inverses = {{"g1", "g1"}, {"g2", "g2"}, {"g3", "g3"}};
  t.compositions = {{"g1", "g1", "g1"},
                    {"g2", "g2", "g2"},
                    {"g2", "g3", "g3"},
                    {"g3", "g2", "g3"},
                    {"g3", "g3", g3g3}};
  return t;
}

}  // namespace

TEST_CASE("single arrow groupoid verifies with the expected derived data") {
  auto rep = Groupoid::verify(single_arrow_table());
  CHECK(rep.ok());
  auto G = Groupoid::make(single_arrow_table());
  CHECK(G->size() == 4);
  const int dg = G->index("dg"), rg = G->index("rg"), g = G->index("g"), gi = G->index("gi");
  CHECK(G->source(g) == dg);
  CHECK(G->target(g) == rg);
  CHECK(G->inverse(g) == gi);
  CHECK(G->identities() == std::vector<int>{dg, rg});
  CHECK(G->compose(g, gi) == rg);

  // Independent count of composable pairs straight from the definition.
  int pairs = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (G->source(a) == G->target(b)) ++pairs;
  CHECK(pairs == 8);
  CHECK(G->composable_pairs().size() == 8);

  CHECK(G->xset(dg) == std::vector<int>{dg, gi});
  CHECK(G->xset(rg) == std::vector<int>{rg, g});
  CHECK(G->isotropy(dg) == std::vector<int>{dg});
}

TEST_CASE("xset enumeration follows declaration order with the identity first") {
  GroupoidTable t = single_arrow_table();
  // Re-declare with the arrows before the identities.
  t.elements = {"g", "gi", "dg", "rg"};
  auto G = Groupoid::make(t);
  CHECK(G->xset(G->index("rg")) == std::vector<int>{G->index("rg"), G->index("g")});
  CHECK(G->xset(G->index("dg")) == std::vector<int>{G->index("dg"), G->index("gi")});
}

TEST_CASE("loop groupoid has a two-element isotropy group") {
  auto G = Groupoid::make(loop_table());
  const int g1 = G->index("g1"), g2 = G->index("g2"), g3 = G->index("g3");
  CHECK(G->identities() == std::vector<int>{g1, g2});
  CHECK(G->isotropy(g2) == std::vector<int>{g2, g3});
  CHECK(G->compose(g3, g3) == g2);
  CHECK(G->xset(g2) == std::vector<int>{g2, g3});
  CHECK(G->composable_pairs().size() == 5);
}

TEST_CASE("wrong identity in a loop composition is rejected with a witness") {
  auto rep = Groupoid::verify(loop_table("g1"));
  CHECK(!rep.ok());
  CHECK(!rep.structural_failure());
  CHECK(rep.first_failure().find("g3") != std::string::npos);
  CHECK_THROWS_AS(Groupoid::make(loop_table("g1")), PreconditionError);
}

TEST_CASE("cross-fibre composition is a structural error") {
  auto t = Groupoid::disjoint_union({Groupoid::group_table(2, [](int a, int b) { return a ^ b; }),
                                     Groupoid::group_table(2, [](int a, int b) { return a ^ b; })});
  t.compositions.emplace_back("c0_a1", "c1_a1", "c0_a0");
  auto rep = Groupoid::verify(t);
  CHECK(!rep.ok());
  CHECK(rep.structural_failure());
  CHECK_THROWS_AS(Groupoid::make(t), StructuralError);
}

TEST_CASE("group multiplication tables verify as one-object groupoids") {
  for (int n : {1, 2, 3, 4, 6}) {
    auto t = Groupoid::group_table(n, [n](int a, int b) { return (a + b) % n; });
    auto rep = Groupoid::verify(t);
    CHECK(rep.ok());
    auto G = Groupoid::make(t);
    CHECK(G->identities().size() == 1);
    CHECK(static_cast<int>(G->isotropy(G->identities()[0]).size()) == n);
  }
  // Symmetric group on three letters via permutation composition.
  const int perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  auto mul = [&](int a, int b) {
    int c[3];
    for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
    for (int k = 0; k < 6; ++k)
      if (c[0] == perms[k][0] && c[1] == perms[k][1] && c[2] == perms[k][2]) return k;
    return -1;
  };
  CHECK(Groupoid::verify(Groupoid::group_table(6, mul, "s")).ok());
}

TEST_CASE("disjoint unions of groups verify with one identity per part") {
  auto t = Groupoid::disjoint_union({Groupoid::group_table(2, [](int a, int b) { return a ^ b; }),
                                     Groupoid::group_table(3, [](int a, int b) { return (a + b) % 3; })});
  auto rep = Groupoid::verify(t);
  CHECK(rep.ok());
  auto G = Groupoid::make(t);
  CHECK(G->identities().size() == 2);
  CHECK(G->composable_pairs().size() == 4 + 9);
}

TEST_CASE("pair groupoid on two objects") {
  // Arrows p_ij : j -> i with p_ij p_jk = p_ik.
  GroupoidTable t;
  t.elements = {"p11", "p12", "p21", "p22"};
  t.inverses = {{"p11", "p11"}, {"p12", "p21"}, {"p21", "p12"}, {"p22", "p22"}};
  auto arrow = [](int i, int j) { return "p" + std::to_string(i) + std::to_string(j); };
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k) t.compositions.emplace_back(arrow(i, j), arrow(j, k), arrow(i, k));
  auto G = Groupoid::make(t);
  CHECK(G->identities().size() == 2);
  CHECK(G->xset(G->index("p11")) == std::vector<int>{G->index("p11"), G->index("p12")});
  CHECK(G->isotropy(G->index("p11")) == std::vector<int>{G->index("p11")});
}

TEST_CASE("missing composition inside a fibre fails the existence axiom") {
  auto t = single_arrow_table();
  t.compositions.pop_back();  // drop gi*g = dg
  auto rep = Groupoid::verify(t);
  CHECK(!rep.ok());
}
