#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pgact/linalg.hpp"

using namespace pgact;

namespace {

Mat<Rational> qmat(std::initializer_list<std::initializer_list<int>> rows) {
  Mat<Rational> m(rows.size(), rows.begin()->size());
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (int v : r) m(i, j++) = Rational(v);
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("rational arithmetic basics") {
  Rational a(1);
  Rational b = a / Rational(3);
  CHECK(b + b + b == a);
  CHECK(to_string(Rational("-21/6")) == "-7/2");
  CHECK(Rational("4/2") == Rational(2));
  CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("prime field arithmetic and modulus adoption") {
  Fp a(3, 5), b(4, 5);
  CHECK(a + b == Fp(2, 5));
  CHECK(a * b == Fp(2, 5));
  CHECK((a / b).value() == 2);  // 4^{-1} = 4 mod 5, 3*4 = 12 = 2
  CHECK(Fp(1) + a == Fp(4, 5));
  CHECK(-a == Fp(2, 5));
  CHECK_THROWS(Fp(3, 5) + Fp(3, 7));
  CHECK_THROWS(Fp(0, 5).inverse());
  CHECK(is_prime(7919));
  CHECK(!is_prime(7917));
  CHECK(parse_scalar("9/2", Fp(1, 7)) == Fp(8, 7));
}

TEST_CASE("rref on a hand-reduced matrix") {
  // [[2,4,0],[1,2,1]] -> [[1,2,0],[0,0,1]], pivots 0 and 2.
  auto m = qmat({{2, 4, 0}, {1, 2, 1}});
  auto e = rref(m);
  CHECK(e.rank == 2);
  CHECK(e.pivots == std::vector<Index>{0, 2});
  CHECK(mat_eq(e.R, qmat({{1, 2, 0}, {0, 0, 1}})));
  CHECK(mat_eq(Mat<Rational>(e.T * m), e.R));
}

TEST_CASE("row space is canonical across shuffled generating sets") {
  auto a = qmat({{1, 2, 3}, {0, 1, 1}});
  auto b = qmat({{2, 5, 7}, {1, 3, 4}, {3, 7, 10}});  // same span
  CHECK(mat_eq(row_space(a), row_space(b)));
  CHECK(subspace_eq(a, b));
}

TEST_CASE("left kernel annihilates the rows") {
  auto m = qmat({{1, 2}, {2, 4}, {0, 1}});
  auto k = left_kernel(m);
  CHECK(k.rows() == 1);
  CHECK(is_zero(RowVec<Rational>(k.row(0) * m)));
  // The relation is 2*r0 - r1 = 0 up to scale.
  CHECK(!scalar_is_zero(k(0, 0)));
}

TEST_CASE("span solver coordinates and membership") {
  auto m = qmat({{1, 0, 1}, {0, 1, 1}});
  SpanSolver<Rational> s{m};
  RowVec<Rational> x(3);
  x << Rational(2), Rational(-3), Rational(-1);
  auto c = s.coords(x);
  REQUIRE(c.has_value());
  CHECK(is_zero(RowVec<Rational>(*c * m - x)));
  RowVec<Rational> y(3);
  y << Rational(1), Rational(0), Rational(0);
  CHECK(!s.coords(y).has_value());
  CHECK(!s.contains(y));
}

TEST_CASE("intersection of coordinate planes") {
  auto a = qmat({{1, 0, 0}, {0, 1, 0}});
  auto b = qmat({{0, 1, 0}, {0, 0, 1}});
  auto meet = intersect_rows(a, b);
  CHECK(mat_eq(meet, qmat({{0, 1, 0}})));
  auto join = sum_rows(a, b);
  CHECK(join.rows() == 3);
}

TEST_CASE("intersection of generic planes in Q^3 is a line") {
  auto a = qmat({{1, 0, 1}, {0, 1, 1}});
  auto b = qmat({{1, 1, 0}, {0, 0, 1}});
  auto meet = intersect_rows(a, b);
  REQUIRE(meet.rows() == 1);
  CHECK(SpanSolver<Rational>(a).contains(RowVec<Rational>(meet.row(0))));
  CHECK(SpanSolver<Rational>(b).contains(RowVec<Rational>(meet.row(0))));
  // The line is spanned by (1,1,2).
  CHECK(mat_eq(meet, qmat({{1, 1, 2}})));
}

TEST_CASE("rank drop happens exactly over the right prime") {
  Mat<Fp> m(2, 2);
  m << Fp(2, 5), Fp(1, 5), Fp(1, 5), Fp(3, 5);
  CHECK(rref(m).rank == 1);  // determinant 5 vanishes mod 5
  Mat<Fp> m7(2, 2);
  m7 << Fp(2, 7), Fp(1, 7), Fp(1, 7), Fp(3, 7);
  CHECK(rref(m7).rank == 2);
  Mat<Rational> mq(2, 2);
  mq << Rational(2), Rational(1), Rational(1), Rational(3);
  CHECK(rref(mq).rank == 2);
}

TEST_CASE("randomized: canonical form is basis independent") {
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int iter = 0; iter < 50; ++iter) {
    Mat<Rational> m(3, 5);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 5; ++j) m(i, j) = Rational(entry(rng));
    // Random invertible row operations.
    Mat<Rational> g = m;
    g.row(0) += Rational(entry(rng)) * g.row(1);
    g.row(2) += Rational(entry(rng)) * g.row(0);
    g.row(1) *= Rational(3);
    CHECK(subspace_eq(m, g));
    // Dimension formula dim(A) + dim(B) = dim(A+B) + dim(A meet B).
    Mat<Rational> b(2, 5);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 5; ++j) b(i, j) = Rational(entry(rng));
    const Index lhs = row_space(m).rows() + row_space(b).rows();
    const Index rhs = sum_rows(m, b).rows() + intersect_rows(m, b).rows();
    CHECK(lhs == rhs);
  }
}
