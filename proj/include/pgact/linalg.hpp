#ifndef PGACT_LINALG_HPP
#define PGACT_LINALG_HPP

// Exact dense linear algebra over a field scalar K.  Everything is built on
// reduced row echelon form with first-nonzero pivoting; the echelon basis of
// a row space is the canonical representative used for all subspace
// comparisons.

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "pgact/report.hpp"
#include "pgact/scalar.hpp"

namespace pgact {

template <typename K>
using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <typename K>
using RowVec = Eigen::Matrix<K, 1, Eigen::Dynamic>;

using Eigen::Index;

template <typename K>
bool is_zero(const RowVec<K>& v) {
  for (Index j = 0; j < v.cols(); ++j)
    if (!scalar_is_zero(v(j))) return false;
  return true;
}

template <typename K>
bool mat_eq(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

// a * b accumulated through the nonzero entries of a; pays off when a is
// sparse, as the structure matrices of modules over skew rings tend to be
template <typename K>
Mat<K> sparse_mul(const Mat<K>& a, const Mat<K>& b) {
  Mat<K> out(a.rows(), b.cols());
  out.setZero();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index t = 0; t < a.cols(); ++t)
      if (!scalar_is_zero(a(i, t))) out.row(i) += a(i, t) * b.row(t);
  return out;
}

template <typename K>
Mat<K> vstack(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  Mat<K> r(a.rows() + b.rows(), a.cols());
  r.topRows(a.rows()) = a;
  r.bottomRows(b.rows()) = b;
  return r;
}

template <typename K>
struct Rref {
  Mat<K> R;                   // reduced row echelon form of the input
  Mat<K> T;                   // transform with T * input = R
  std::vector<Index> pivots;  // pivot column per nonzero row of R
  Index rank = 0;
};

template <typename K>
Rref<K> rref(const Mat<K>& m) {
  const Index rows = m.rows(), cols = m.cols();
  Rref<K> out;
  out.R = m;
  out.T = Mat<K>(rows, rows);
  out.T.setZero();
  for (Index i = 0; i < rows; ++i) out.T(i, i) = K(1);

  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index pivot = -1;
    for (Index i = r; i < rows; ++i)
      if (!scalar_is_zero(out.R(i, c))) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r) {
      out.R.row(pivot).swap(out.R.row(r));
      out.T.row(pivot).swap(out.T.row(r));
    }
    const K inv = K(1) / out.R(r, c);
    out.R.row(r) *= inv;
    out.T.row(r) *= inv;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || scalar_is_zero(out.R(i, c))) continue;
      const K f = out.R(i, c);
      out.R.row(i) -= f * out.R.row(r);
      out.T.row(i) -= f * out.T.row(r);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

// Canonical basis of the row space (echelon rows, zero rows dropped).
template <typename K>
Mat<K> row_space(const Mat<K>& m) {
  auto e = rref(m);
  return Mat<K>(e.R.topRows(e.rank));
}

// Canonical basis of the relations among the rows: all x with x * m = 0.
template <typename K>
Mat<K> left_kernel(const Mat<K>& m) {
  auto e = rref(m);
  const Index k = m.rows() - e.rank;
  Mat<K> ker(k, m.rows());
  for (Index i = 0; i < k; ++i) ker.row(i) = e.T.row(e.rank + i);
  return row_space(ker);
}

// Membership and coordinate queries against a fixed spanning family.
template <typename K>
class SpanSolver {
 public:
  explicit SpanSolver(Mat<K> rows) : rows_(std::move(rows)), e_(rref(rows_)) {}

  Index rank() const { return e_.rank; }
  const Mat<K>& rows() const { return rows_; }
  Mat<K> basis() const { return Mat<K>(e_.R.topRows(e_.rank)); }

  // Coefficients over the original rows, or nullopt when x is outside the
  // span.  Underdetermined families yield one valid coefficient vector.
  std::optional<RowVec<K>> coords(const RowVec<K>& x) const {
    RowVec<K> rem = x;
    RowVec<K> c(e_.rank);
    c.setZero();
    for (Index i = 0; i < e_.rank; ++i) {
      const K f = rem(e_.pivots[i]);
      if (!scalar_is_zero(f)) {
        c(i) = f;
        rem -= f * e_.R.row(i);
      }
    }
    if (!is_zero(rem)) return std::nullopt;
    RowVec<K> lambda(rows_.rows());
    lambda.setZero();
    for (Index i = 0; i < e_.rank; ++i)
      if (!scalar_is_zero(c(i))) lambda += c(i) * e_.T.row(i);
    return lambda;
  }

  bool contains(const RowVec<K>& x) const {
    RowVec<K> rem = x;
    for (Index i = 0; i < e_.rank; ++i) {
      const K f = rem(e_.pivots[i]);
      if (!scalar_is_zero(f)) rem -= f * e_.R.row(i);
    }
    return is_zero(rem);
  }

  bool contains_all(const Mat<K>& xs) const {
    for (Index i = 0; i < xs.rows(); ++i)
      if (!contains(RowVec<K>(xs.row(i)))) return false;
    return true;
  }

 private:
  Mat<K> rows_;
  Rref<K> e_;
};

template <typename K>
Mat<K> sum_rows(const Mat<K>& a, const Mat<K>& b) {
  return row_space(vstack(a, b));
}

template <typename K>
Mat<K> intersect_rows(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() == 0 || b.rows() == 0) return Mat<K>(0, a.cols() ? a.cols() : b.cols());
  Mat<K> stacked = vstack(a, Mat<K>(-b));
  Mat<K> rel = left_kernel(stacked);
  Mat<K> meet(rel.rows(), a.cols());
  for (Index i = 0; i < rel.rows(); ++i) {
    RowVec<K> v(a.cols());
    v.setZero();
    for (Index j = 0; j < a.rows(); ++j)
      if (!scalar_is_zero(rel(i, j))) v += rel(i, j) * a.row(j);
    meet.row(i) = v;
  }
  return row_space(meet);
}

template <typename K>
bool subspace_eq(const Mat<K>& a, const Mat<K>& b) {
  return mat_eq(row_space(a), row_space(b));
}

template <typename K>
bool subspace_leq(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() == 0) return true;
  return SpanSolver<K>(b).contains_all(a);
}

template <typename K>
Mat<K> zero_rows(Index cols) {
  return Mat<K>(0, cols);
}

template <typename K>
RowVec<K> unit_row(Index cols, Index j, const K& one) {
  RowVec<K> v(cols);
  v.setZero();
  v(j) = one;
  return v;
}

}  // namespace pgact

#endif
