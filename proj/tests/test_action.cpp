#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pgact/action.hpp"
#include "pgact/fixtures.hpp"
#include "pgact/scalar.hpp"

using namespace pgact;
using Q = Rational;

namespace {

Mat<Q> qmat(std::initializer_list<std::initializer_list<long long>> rows) {
  Mat<Q> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (auto x : r) m(i, j++) = Q(x);
    ++i;
  }
  return m;
}

RowVec<Q> qrow(std::initializer_list<long long> xs) {
  RowVec<Q> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (auto x : xs) v(i++) = Q(x);
  return v;
}

CheckStatus status_of(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks())
    if (c.name == name) return c.status;
  FAIL("no check named " << name);
  return CheckStatus::fail;
}

// the arrow groupoid acting globally on K^4, ready for restriction
PartialAction<Q> arrow_global() {
  auto G = fixture_groupoid_arrow();
  auto R = Algebra<Q>::coordinate_ring(4, Q(1));
  std::map<std::string, Mat<Q>> ideals, maps;
  ideals["dg"] = qmat({{1, 0, 0, 0}, {0, 1, 0, 0}});
  ideals["gi"] = ideals["dg"];
  ideals["rg"] = qmat({{0, 0, 1, 0}, {0, 0, 0, 1}});
  ideals["g"] = ideals["rg"];
  maps["g"] = qmat({{0, 0, 1, 0}, {0, 0, 0, 1}});
  maps["gi"] = qmat({{1, 0, 0, 0}, {0, 1, 0, 0}});
  return PartialAction<Q>::make(G, R, ideals, maps);
}

}  // namespace

TEST_CASE("the bundled fixtures are valid partial actions") {
  for (const auto& name : fixture_names()) {
    auto A = fixture_action<Q>(name, Q(1));
    auto rep = verify_partial_action(A);
    INFO(name << "\n" << rep.text());
    CHECK(rep.ok());
  }
  CHECK(fixture_action<Q>("FX-E", Q(1)).is_global());
  CHECK_FALSE(fixture_action<Q>("FX-A", Q(1)).is_global());
  CHECK_FALSE(fixture_action<Q>("FX-C", Q(1)).is_global());
  CHECK_THROWS_AS(fixture_action<Q>("FX-Z", Q(1)), StructuralError);
}

TEST_CASE("standing hypotheses separate the fixtures as designed") {
  CHECK(standing_hypotheses(fixture_action<Q>("FX-A", Q(1))).ok());
  CHECK(standing_hypotheses(fixture_action<Q>("FX-B", Q(1))).ok());
  CHECK(standing_hypotheses(fixture_action<Q>("FX-D", Q(1))).ok());
  CHECK(standing_hypotheses(fixture_action<Q>("FX-E", Q(1))).ok());

  auto rep = standing_hypotheses(fixture_action<Q>("FX-C", Q(1)));
  CHECK_FALSE(rep.ok());
  CHECK(rep.first_failure().find("overlap") != std::string::npos);
}

TEST_CASE("a sign flip on a nilpotent ideal is a valid action without units") {
  auto G = Groupoid::make(Groupoid::group_table(2, [](int a, int b) { return (a + b) % 2; }));
  std::map<std::pair<int, int>, RowVec<Q>> p;  // K[x]/(x^2) on {1, x}
  p[{0, 0}] = qrow({1, 0});
  p[{0, 1}] = qrow({0, 1});
  p[{1, 0}] = qrow({0, 1});
  auto R = Algebra<Q>::make({"one", "x"}, p, Q(1));
  std::map<std::string, Mat<Q>> ideals, maps;
  ideals["a0"] = qmat({{1, 0}, {0, 1}});
  ideals["a1"] = qmat({{0, 1}});
  maps["a1"] = qmat({{0, -1}});
  auto A = PartialAction<Q>::make(G, R, ideals, maps);
  CHECK(verify_partial_action(A).ok());

  auto hyp = standing_hypotheses(A);
  CHECK_FALSE(hyp.ok());
  CHECK(hyp.first_failure().find("D_a1") != std::string::npos);
}

TEST_CASE("a wrong composite map is caught by the composition axiom") {
  // cyclic shift for a1 but the identity for a2 = a1*a1
  auto G = Groupoid::make(Groupoid::group_table(3, [](int a, int b) { return (a + b) % 3; }));
  auto R = Algebra<Q>::coordinate_ring(3, Q(1));
  Mat<Q> full = qmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  std::map<std::string, Mat<Q>> ideals, maps;
  ideals["a0"] = ideals["a1"] = ideals["a2"] = full;
  maps["a1"] = qmat({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  maps["a2"] = full;
  auto A = PartialAction<Q>::make(G, R, ideals, maps);
  auto rep = verify_partial_action(A);
  CHECK_FALSE(rep.ok());
  CHECK(status_of(rep, "alpha_g . alpha_h agrees with alpha_{gh} on its domain") ==
        CheckStatus::fail);
  CHECK(status_of(rep, "alpha_{g^-1} inverts alpha_g") == CheckStatus::fail);
}

TEST_CASE("a domain that escapes its composite ideal is caught") {
  auto G = Groupoid::make(Groupoid::group_table(3, [](int a, int b) { return (a + b) % 3; }));
  auto R = Algebra<Q>::coordinate_ring(3, Q(1));
  std::map<std::string, Mat<Q>> ideals, maps;
  ideals["a0"] = qmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  ideals["a1"] = qmat({{1, 0, 0}, {0, 1, 0}});
  ideals["a2"] = qmat({{0, 1, 0}, {0, 0, 1}});
  maps["a1"] = qmat({{1, 0, 0}, {0, 1, 0}});  // e2 -> e1, e3 -> e2
  maps["a2"] = qmat({{0, 1, 0}, {0, 0, 1}});  // e1 -> e2, e2 -> e3
  auto A = PartialAction<Q>::make(G, R, ideals, maps);
  auto rep = verify_partial_action(A);
  CHECK_FALSE(rep.ok());
  auto fail = rep.first_failure();
  CHECK(fail.find("lies in D_{(gh)^-1}") != std::string::npos);
  CHECK(fail.find("(a1,a1)") != std::string::npos);
}

TEST_CASE("a non-multiplicative map is rejected as a ring isomorphism") {
  auto G = fixture_groupoid_arrow();
  auto R = Algebra<Q>::coordinate_ring(3, Q(1));
  std::map<std::string, Mat<Q>> ideals, maps;
  ideals["dg"] = qmat({{1, 0, 0}, {0, 1, 0}});
  ideals["rg"] = qmat({{0, 0, 1}});
  ideals["g"] = qmat({{0, 0, 1}});
  ideals["gi"] = qmat({{1, 0, 0}});
  maps["g"] = qmat({{0, 0, 2}});
  maps["gi"] = qmat({{1, 0, 0}});
  auto A = PartialAction<Q>::make(G, R, ideals, maps);
  auto rep = verify_partial_action(A);
  CHECK_FALSE(rep.ok());
  CHECK(rep.first_failure().find("ring isomorphism") != std::string::npos);
}

TEST_CASE("replacing the swap in FX-C by the identity still verifies") {
  // the identity on span{e2,e3} is a ring isomorphism and composes to the
  // identity on D_{g2} restricted, so every axiom still holds
  auto G = fixture_groupoid_loop();
  auto R = Algebra<Q>::coordinate_ring(4, Q(1));
  std::map<std::string, Mat<Q>> ideals, maps;
  ideals["g1"] = qmat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  ideals["g2"] = qmat({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  ideals["g3"] = qmat({{0, 1, 0, 0}, {0, 0, 1, 0}});
  maps["g3"] = qmat({{0, 1, 0, 0}, {0, 0, 1, 0}});
  auto A = PartialAction<Q>::make(G, R, ideals, maps);
  CHECK(verify_partial_action(A).ok());
}

TEST_CASE("truncated application multiplies by the domain unit first") {
  auto A = fixture_action<Q>("FX-D", Q(1));
  const int g3 = A.G->index("g3");
  CHECK(A.truncated_apply(g3, qrow({0, 0, 1, 0, 0})) == qrow({0, 0, 0, 1, 0}));
  CHECK(is_zero(A.truncated_apply(g3, qrow({1, 0, 0, 0, 0}))));
  CHECK(A.truncated_apply(g3, qrow({0, 0, 2, 5, 1})) == qrow({0, 0, 5, 2, 0}));
}

TEST_CASE("shape errors in the input are structural") {
  auto G = fixture_groupoid_arrow();
  auto R = Algebra<Q>::coordinate_ring(3, Q(1));
  std::map<std::string, Mat<Q>> ideals, maps;
  ideals["dg"] = qmat({{1, 0, 0}});
  CHECK_THROWS_AS(PartialAction<Q>::make(G, R, ideals, maps), StructuralError);

  ideals["rg"] = qmat({{0, 0, 1}});
  ideals["g"] = qmat({{0, 0, 1}});
  ideals["gi"] = qmat({{1, 0, 0}});
  CHECK_THROWS_AS(PartialAction<Q>::make(G, R, ideals, maps), StructuralError);  // no map for g

  maps["g"] = qmat({{0, 0, 1}, {0, 1, 0}});  // wrong row count for a 1-dim domain
  maps["gi"] = qmat({{1, 0, 0}});
  CHECK_THROWS_AS(PartialAction<Q>::make(G, R, ideals, maps), StructuralError);
}

TEST_CASE("restricting a global arrow action recovers the FX-A pattern") {
  auto B = arrow_global();
  CHECK(B.is_global());
  CHECK(verify_partial_action(B).ok());

  auto res = restrict_action<Q>(B, {qmat({{1, 0, 0, 0}}), qmat({{0, 0, 1, 0}, {0, 0, 0, 1}})});
  CHECK(res.carrier == qmat({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));

  const auto& A = res.action;
  CHECK(A.R->dim() == 3);
  REQUIRE(A.R->unit().has_value());
  CHECK(*A.R->unit() == qrow({1, 1, 1}));
  CHECK(verify_partial_action(A).ok());
  CHECK_FALSE(A.is_global());
  CHECK(A.D[A.G->index("g")].rows == qmat({{0, 1, 0}}));
  CHECK(A.D[A.G->index("gi")].rows == qmat({{1, 0, 0}}));
  CHECK(A.alpha(A.G->index("g")).apply(qrow({1, 0, 0})) == qrow({0, 1, 0}));

  CHECK_THROWS_AS(restrict_action<Q>(fixture_action<Q>("FX-A", Q(1)), {}), PreconditionError);
}

TEST_CASE("restriction tolerates a subideal that meets nothing across the arrow") {
  auto G = Groupoid::make(Groupoid::group_table(2, [](int a, int b) { return (a + b) % 2; }));
  auto R = Algebra<Q>::coordinate_ring(2, Q(1));
  std::map<std::string, Mat<Q>> ideals, maps;
  ideals["a0"] = ideals["a1"] = qmat({{1, 0}, {0, 1}});
  maps["a1"] = qmat({{0, 1}, {1, 0}});  // swap
  auto B = PartialAction<Q>::make(G, R, ideals, maps);

  auto res = restrict_action<Q>(B, {qmat({{1, 0}})});
  CHECK(res.action.R->dim() == 1);
  CHECK(res.action.D[res.action.G->index("a1")].dim() == 0);
  CHECK(verify_partial_action(res.action).ok());
}

TEST_CASE("the isotropy group of FX-C at g2 acts by the swap on D_{g2}") {
  auto A = fixture_action<Q>("FX-C", Q(1));
  auto res = isotropy_restriction(A, A.G->index("g2"));
  CHECK(res.carrier == A.D[A.G->index("g2")].rows);
  CHECK(res.action.G->size() == 2);
  CHECK(res.action.R->dim() == 3);
  CHECK(verify_partial_action(res.action).ok());
  CHECK_FALSE(res.action.is_global());  // D_{g3} is a proper ideal of D_{g2}
  const int g3 = res.action.G->index("g3");
  CHECK(res.action.D[g3].rows == qmat({{1, 0, 0}, {0, 1, 0}}));
  CHECK(res.action.alpha(g3).apply(qrow({1, 0, 0})) == qrow({0, 1, 0}));

  CHECK_THROWS_AS(isotropy_restriction(A, A.G->index("g3")), PreconditionError);
}

TEST_CASE("fixtures also verify over a prime field") {
  for (const auto& name : fixture_names()) {
    auto A = fixture_action<Fp>(name, Fp(1, 7));
    INFO(name);
    CHECK(verify_partial_action(A).ok());
  }
}
