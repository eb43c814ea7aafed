#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "pgact/fixtures.hpp"
#include "pgact/instance.hpp"

using namespace pgact;
using Q = Rational;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_instance<Q>(text, Q(1));
  } catch (const StructuralError& ex) {
    return ex.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

typename Algebra<Q>::Ptr dual_numbers() {
  std::map<std::pair<int, int>, RowVec<Q>> p;
  RowVec<Q> one(2), x(2), zero(2);
  one << Q(1), Q(0);
  x << Q(0), Q(1);
  zero.setZero();
  p[{0, 0}] = one;
  p[{0, 1}] = x;
  p[{1, 0}] = x;
  p[{1, 1}] = zero;
  return Algebra<Q>::make({"one", "x"}, p, Q(1));
}

}  // namespace

TEST_CASE("a fixture action survives the serialize/parse round trip") {
  for (const auto& name : fixture_names()) {
    auto A = fixture_action<Q>(name, Q(1));
    const std::string s = serialize_instance(instance_for_action(A));
    INFO(name);
    auto back = parse_instance<Q>(s, Q(1));
    REQUIRE(back.action.has_value());
    CHECK(back.G->names() == A.G->names());
    CHECK(back.R->dim() == A.R->dim());
    for (int g = 0; g < A.G->size(); ++g) {
      CHECK(mat_eq<Q>(back.action->D[g].rows, A.D[g].rows));
      CHECK(mat_eq<Q>(back.action->alpha(g).dom(), A.alpha(g).dom()));
      CHECK(mat_eq<Q>(back.action->alpha(g).img(), A.alpha(g).img()));
    }
    CHECK(serialize_instance(back) == s);
  }
}

TEST_CASE("the serialized form uses the compact spellings") {
  auto A = fixture_action<Q>("FX-A", Q(1));
  const std::string s = serialize_instance(instance_for_action(A));
  CHECK(contains(s, "pgact-instance v1"));
  CHECK(contains(s, "field rational"));
  CHECK(contains(s, "elements dg rg g gi"));
  CHECK(contains(s, "coordinate-ring 3"));
  CHECK(contains(s, "map dg identity"));
  CHECK(!contains(s, "map dg 1"));
}

TEST_CASE("coordinate systems and modules ride along with the action") {
  auto A = fixture_action<Q>("FX-D", Q(1));
  auto ins = instance_for_action(A);
  auto sys = find_galois(A);
  REQUIRE(sys.has_value());
  ins.system = *sys;
  auto S = SkewRing<Q>::build(A);
  ins.modules.push_back(function_module(S));
  const std::string s = serialize_instance(ins);

  auto back = parse_instance<Q>(s, Q(1));
  REQUIRE(back.system.has_value());
  CHECK(mat_eq<Q>(back.system->xs, sys->xs));
  CHECK(mat_eq<Q>(back.system->ys, sys->ys));
  CHECK(verify_galois(*back.action, *back.system).ok());
  REQUIRE(back.modules.size() == 1);
  CHECK(back.modules[0].name == "F");
  CHECK(back.modules[0].dim == ins.modules[0].dim);
  REQUIRE(back.modules[0].act.size() == ins.modules[0].act.size());
  for (size_t k = 0; k < ins.modules[0].act.size(); ++k)
    CHECK(mat_eq<Q>(back.modules[0].act[k], ins.modules[0].act[k]));
  CHECK(serialize_instance(back) == s);
}

TEST_CASE("a built globalization round trips and re-verifies") {
  for (const auto& name : {std::string("FX-A"), std::string("FX-D")}) {
    auto A = fixture_action<Q>(name, Q(1));
    auto Gl = build_globalization(A);
    REQUIRE(Gl.report.ok());
    const std::string s = serialize_instance(instance_for_globalization(Gl));
    INFO(name);

    auto back = parse_instance<Q>(s, Q(1));
    REQUIRE(back.globalization.has_value());
    CHECK(back.globalization->beta.R->dim() == Gl.T()->dim());
    auto rebuilt = assemble_globalization(back);
    CHECK(rebuilt.report.ok());
    REQUIRE(rebuilt.emb.has_value());
    auto canonical = build_globalization(*back.action);
    auto eq = globalization_equivalence(canonical, rebuilt);
    CHECK(eq.report.ok());
    CHECK(eq.eta.has_value());
    CHECK(serialize_instance(back) == s);
  }
}

TEST_CASE("a skew groupoid ring round trips through its structure constants") {
  auto A = fixture_action<Q>("FX-D", Q(1));
  auto S = SkewRing<Q>::build(A);
  const std::string s = serialize_instance(instance_for_skew_ring(S));
  auto back = parse_instance<Q>(s, Q(1));
  CHECK(!back.action.has_value());
  REQUIRE(back.R->dim() == S.A->dim());
  CHECK(back.R->labels() == S.A->labels());
  REQUIRE(back.R->unit().has_value());
  REQUIRE(S.A->unit().has_value());
  CHECK(mat_eq<Q>(Mat<Q>(*back.R->unit()), Mat<Q>(*S.A->unit())));
  for (int i = 0; i < S.A->dim(); ++i)
    for (int j = 0; j < S.A->dim(); ++j) {
      RowVec<Q> got = back.R->mul(back.R->basis_row(i), back.R->basis_row(j));
      RowVec<Q> want = S.A->mul(S.A->basis_row(i), S.A->basis_row(j));
      CHECK(mat_eq<Q>(Mat<Q>(got), Mat<Q>(want)));
    }
  CHECK(serialize_instance(back) == s);
}

TEST_CASE("an algebra without the coordinate pattern serializes longhand") {
  Instance<Q> ins;
  ins.G = fixture_groupoid_loop();
  ins.R = dual_numbers();
  const std::string s = serialize_instance(ins);
  CHECK(contains(s, "labels one x"));
  CHECK(contains(s, "unit 1 0"));
  CHECK(contains(s, "product one x 0 1"));
  CHECK(!contains(s, "product x x"));
  auto back = parse_instance<Q>(s, Q(1));
  CHECK(back.R->labels() == ins.R->labels());
  RowVec<Q> sq = back.R->mul(back.R->basis_row(1), back.R->basis_row(1));
  CHECK(is_zero(sq));
  CHECK(serialize_instance(back) == s);
}

TEST_CASE("instances carry prime-field scalars") {
  const Fp one(1, 7);
  auto A = fixture_action<Fp>("FX-D", one);
  const std::string s = serialize_instance(instance_for_action(A));
  CHECK(contains(s, "field fp 7"));
  FieldSpec f = sniff_field(s);
  CHECK(!f.rational);
  CHECK(f.p == 7);
  auto back = parse_instance<Fp>(s, one);
  for (int g = 0; g < A.G->size(); ++g) CHECK(mat_eq<Fp>(back.action->D[g].rows, A.D[g].rows));
  CHECK(serialize_instance(back) == s);
}

TEST_CASE("parse failures cite the offending line") {
  CHECK(contains(error_of("nonsense\n"), "line 1"));
  CHECK(contains(error_of("nonsense\n"), "pgact-instance"));

  const std::string base =
      "pgact-instance v1\n"
      "field rational\n"
      "groupoid\n"
      "  elements e\n"
      "  inverse e e\n"
      "  compose e e e\n"
      "end\n"
      "algebra\n"
      "  coordinate-ring 2\n"
      "end\n";

  SUBCASE("unknown section") {
    const std::string msg = error_of(base + "mystery\n");
    CHECK(contains(msg, "line 11"));
    CHECK(contains(msg, "mystery"));
  }
  SUBCASE("unknown arrow in an action row") {
    const std::string msg = error_of(base + "action\n  ideal f 1 0\nend\n");
    CHECK(contains(msg, "line 12"));
    CHECK(contains(msg, "'f'"));
  }
  SUBCASE("a scalar that does not parse") {
    const std::string msg = error_of(base + "action\n  ideal e z 0\nend\n");
    CHECK(contains(msg, "line 12"));
    CHECK(contains(msg, "cannot parse"));
  }
  SUBCASE("a row of the wrong width") {
    const std::string msg = error_of(base + "action\n  ideal e 1\nend\n");
    CHECK(contains(msg, "line 12"));
    CHECK(contains(msg, "expected 2 entries"));
  }
  SUBCASE("unpaired coordinate rows") {
    const std::string msg = error_of(base + "galois-system\n  x 1 0\nend\n");
    CHECK(contains(msg, "line 13"));
    CHECK(contains(msg, "unpaired"));
  }
  SUBCASE("module headers carry a name and a dimension") {
    const std::string msg = error_of(base + "module M\nend\n");
    CHECK(contains(msg, "line 11"));
    CHECK(contains(msg, "module <name> <dim>"));
  }
  SUBCASE("repeated sections are rejected") {
    const std::string act = "action\n  ideal e 1 0\n  ideal e 0 1\n  map e identity\nend\n";
    CHECK(contains(error_of(base + act + act), "duplicate action section"));
    const std::string sys = "galois-system\n  x 1 0\n  y 1 0\nend\n";
    CHECK(contains(error_of(base + sys + sys), "duplicate galois-system section"));
  }
  SUBCASE("the identity-map shorthand needs an identity arrow") {
    const std::string two =
        "pgact-instance v1\n"
        "field rational\n"
        "groupoid\n"
        "  elements e g\n"
        "  inverse e e\n"
        "  inverse g g\n"
        "  compose e e e\n"
        "  compose g g e\n"
        "  compose e g g\n"
        "  compose g e g\n"
        "end\n"
        "algebra\n"
        "  coordinate-ring 2\n"
        "end\n"
        "action\n"
        "  ideal e 1 0\n"
        "  ideal e 0 1\n"
        "  ideal g 1 0\n"
        "  ideal g 0 1\n"
        "  map g identity\n"
        "end\n";
    const std::string msg = error_of(two);
    CHECK(contains(msg, "line 20"));
    CHECK(contains(msg, "identity arrow"));
  }
  SUBCASE("a non-identity arrow with an ideal needs map rows") {
    const std::string msg = error_of(
        "pgact-instance v1\n"
        "field rational\n"
        "groupoid\n"
        "  elements e g\n"
        "  inverse e e\n"
        "  inverse g g\n"
        "  compose e e e\n"
        "  compose g g e\n"
        "  compose e g g\n"
        "  compose g e g\n"
        "end\n"
        "algebra\n"
        "  coordinate-ring 2\n"
        "end\n"
        "action\n"
        "  ideal e 1 0\n"
        "  ideal e 0 1\n"
        "  ideal g 1 0\n"
        "end\n");
    CHECK(contains(msg, "no map rows for arrow g"));
  }
  SUBCASE("missing sections are reported") {
    CHECK(contains(error_of("pgact-instance v1\nfield rational\n"), "no groupoid section"));
    CHECK(contains(error_of("pgact-instance v1\nfield rational\ngroupoid\n  elements e\n"
                            "  inverse e e\n  compose e e e\nend\n"),
                   "no algebra section"));
  }
  SUBCASE("the field line is validated") {
    CHECK(contains(error_of("pgact-instance v1\nfield bogus\n"), "line 2"));
    CHECK_THROWS_AS(sniff_field("field fp 6\n"), StructuralError);
    CHECK_THROWS_WITH(sniff_field("field fp 6\n"),
                      doctest::Contains("not prime"));
  }
}

TEST_CASE("comment lines and blank lines are ignored") {
  const std::string s =
      "pgact-instance v1\n"
      "# a remark\n"
      "field rational\n\n"
      "groupoid\n"
      "  elements e\n"
      "  inverse e e\n"
      "  compose e e e\n"
      "end\n"
      "algebra\n"
      "  coordinate-ring 1\n"
      "end\n"
      "action\n"
      "  ideal e 1\n"
      "  map e identity\n"
      "end\n";
  auto ins = parse_instance<Q>(s, Q(1));
  REQUIRE(ins.action.has_value());
  CHECK(verify_partial_action(*ins.action).ok());
}
