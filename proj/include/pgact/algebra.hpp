#ifndef PGACT_ALGEBRA_HPP
#define PGACT_ALGEBRA_HPP

// Finite-dimensional associative algebras over an exact field, presented by
// structure constants on a distinguished basis.  Products are stored
// sparsely; everything downstream (ideals, ring maps, closures) works on
// row-space coordinates from linalg.hpp.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgact/linalg.hpp"
#include "pgact/report.hpp"

namespace pgact {

template <typename K>
struct SparseTerm {
  int idx;
  K c;
};

template <typename K>
class Algebra {
 public:
  using Ptr = std::shared_ptr<const Algebra<K>>;
  using Terms = std::vector<SparseTerm<K>>;

  // products maps (i,j) to the row b_i*b_j; absent entries are zero rows.
  static Ptr make(std::vector<std::string> labels,
                  const std::map<std::pair<int, int>, RowVec<K>>& products, const K& one,
                  std::optional<RowVec<K>> declared_unit = std::nullopt,
                  std::string subject = "algebra", bool search_unit_if_absent = true) {
    auto a = std::make_shared<Algebra<K>>();
    a->labels_ = std::move(labels);
    a->n_ = static_cast<int>(a->labels_.size());
    a->one_ = one;
    a->table_.assign(static_cast<size_t>(a->n_) * a->n_, Terms{});
    for (const auto& [ij, row] : products) {
      if (row.cols() != a->n_) throw StructuralError(subject + ": product row has wrong length");
      Terms t;
      for (Index k = 0; k < row.cols(); ++k)
        if (!scalar_is_zero(row(k))) t.push_back({static_cast<int>(k), row(k)});
      a->table_[ij.first * a->n_ + ij.second] = std::move(t);
    }
    a->verify(declared_unit, subject, search_unit_if_absent);
    return a;
  }

  static Ptr coordinate_ring(int n, const K& one, const std::string& label_prefix = "e") {
    std::vector<std::string> labels;
    std::map<std::pair<int, int>, RowVec<K>> prods;
    RowVec<K> unit(n);
    for (int i = 0; i < n; ++i) {
      labels.push_back(label_prefix + std::to_string(i + 1));
      prods[{i, i}] = unit_row<K>(n, i, one);
      unit(i) = one;
    }
    return make(std::move(labels), prods, one, unit, "coordinate ring");
  }

  // m pointwise-multiplying copies of R side by side; block b spans columns
  // [b*dim(R), (b+1)*dim(R)).
  static Ptr block_power(const Ptr& R, int m, const std::vector<std::string>& block_tags) {
    const int n = R->dim();
    std::vector<std::string> labels;
    std::map<std::pair<int, int>, RowVec<K>> prods;
    for (int b = 0; b < m; ++b)
      for (int i = 0; i < n; ++i) labels.push_back(block_tags[b] + ":" + R->label(i));
    for (int b = 0; b < m; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Terms& t = R->basis_product(i, j);
          if (t.empty()) continue;
          RowVec<K> row(m * n);
          row.setZero();
          for (const auto& term : t) row(b * n + term.idx) = term.c;
          prods[{b * n + i, b * n + j}] = std::move(row);
        }
    std::optional<RowVec<K>> unit;
    if (R->unit()) {
      RowVec<K> u(m * n);
      u.setZero();
      for (int b = 0; b < m; ++b) u.segment(b * n, n) = *R->unit();
      unit = u;
    }
    return make(std::move(labels), prods, R->one(), unit, "block power");
  }

  // The subalgebra spanned by the given independent rows, with those rows as
  // its basis in declaration order.  The span must be closed under products;
  // callers use this only for spans that are closed by construction.
  struct Sub {
    Ptr alg;
    Mat<K> rows;  // basis, in parent coordinates
  };
  static Sub subalgebra_on_rows(const Ptr& parent, const Mat<K>& rows,
                                std::vector<std::string> labels,
                                std::optional<RowVec<K>> unit_in_parent = std::nullopt,
                                const std::string& subject = "subalgebra") {
    SpanSolver<K> span{rows};
    if (span.rank() != rows.rows())
      throw InternalError(subject + ": basis rows are dependent");
    const int k = static_cast<int>(rows.rows());
    if (labels.empty())
      for (int i = 0; i < k; ++i) labels.push_back("b" + std::to_string(i + 1));
    std::map<std::pair<int, int>, RowVec<K>> prods;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        RowVec<K> p = parent->mul(rows.row(i), rows.row(j));
        if (is_zero(p)) continue;
        auto c = span.coords(p);
        if (!c) throw InternalError(subject + ": span is not closed under products");
        prods[{i, j}] = *c;
      }
    std::optional<RowVec<K>> unit;
    if (unit_in_parent) {
      auto c = span.coords(*unit_in_parent);
      if (!c) throw InternalError(subject + ": declared unit lies outside the span");
      unit = *c;
    }
    return {make(std::move(labels), prods, parent->one(), unit, subject), rows};
  }

  int dim() const { return n_; }
  const K& one() const { return one_; }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Terms& basis_product(int i, int j) const { return table_[i * n_ + j]; }
  const std::optional<RowVec<K>>& unit() const { return unit_; }
  bool commutative() const { return commutative_; }
  const VerificationReport& report() const { return report_; }

  RowVec<K> zero() const {
    RowVec<K> v(n_);
    v.setZero();
    return v;
  }
  RowVec<K> basis_row(int i) const { return unit_row<K>(n_, i, one_); }
  Mat<K> full_rows() const {
    Mat<K> m(n_, n_);
    m.setZero();
    for (int i = 0; i < n_; ++i) m(i, i) = one_;
    return m;
  }

  RowVec<K> mul(const RowVec<K>& x, const RowVec<K>& y) const {
    RowVec<K> out = zero();
    for (Index i = 0; i < n_; ++i) {
      if (scalar_is_zero(x(i))) continue;
      for (Index j = 0; j < n_; ++j) {
        if (scalar_is_zero(y(j))) continue;
        for (const auto& t : table_[i * n_ + j]) out(t.idx) += x(i) * y(j) * t.c;
      }
    }
    return out;
  }

  // Matrix of v -> v*u on the distinguished basis (row i is b_i*u).
  Mat<K> right_mult(const RowVec<K>& u) const {
    Mat<K> m(n_, n_);
    m.setZero();
    for (int i = 0; i < n_; ++i)
      for (Index j = 0; j < n_; ++j) {
        if (scalar_is_zero(u(j))) continue;
        for (const auto& t : table_[i * n_ + j]) m(i, t.idx) += u(j) * t.c;
      }
    return m;
  }
  // Matrix of v -> u*v on the distinguished basis (row i is u*b_i).
  Mat<K> left_mult(const RowVec<K>& u) const {
    Mat<K> m(n_, n_);
    m.setZero();
    for (int i = 0; i < n_; ++i)
      for (Index j = 0; j < n_; ++j) {
        if (scalar_is_zero(u(j))) continue;
        for (const auto& t : table_[j * n_ + i]) m(i, t.idx) += u(j) * t.c;
      }
    return m;
  }

  std::string format(const RowVec<K>& v) const {
    std::string s;
    for (Index i = 0; i < n_; ++i) {
      if (scalar_is_zero(v(i))) continue;
      if (!s.empty()) s += " + ";
      if (v(i) == one_)
        s += labels_[i];
      else
        s += to_string(v(i)) + "*" + labels_[i];
    }
    return s.empty() ? "0" : s;
  }

 private:
  int n_ = 0;
  std::vector<std::string> labels_;
  Terms empty_;
  std::vector<Terms> table_;
  K one_ = K(1);
  std::optional<RowVec<K>> unit_;
  bool commutative_ = true;
  VerificationReport report_;

  void verify(const std::optional<RowVec<K>>& declared_unit, const std::string& subject,
              bool search_unit_if_absent) {
    report_ = VerificationReport(subject);
    bool assoc = true;
    std::string witness;
    RowVec<K> left = zero(), right = zero();
    for (int i = 0; i < n_ && assoc; ++i)
      for (int j = 0; j < n_ && assoc; ++j) {
        const Terms& ij = table_[i * n_ + j];
        for (int k = 0; k < n_; ++k) {
          const Terms& jk = table_[j * n_ + k];
          if (ij.empty() && jk.empty()) continue;
          left.setZero();
          right.setZero();
          for (const auto& t : ij)
            for (const auto& s : table_[t.idx * n_ + k]) left(s.idx) += t.c * s.c;
          for (const auto& t : jk)
            for (const auto& s : table_[i * n_ + t.idx]) right(s.idx) += t.c * s.c;
          if (!is_zero(RowVec<K>(left - right))) {
            assoc = false;
            witness = "(" + labels_[i] + "," + labels_[j] + "," + labels_[k] + ")";
            break;
          }
        }
      }
    report_.check("associativity on basis triples", assoc, witness);

    commutative_ = true;
    for (int i = 0; i < n_ && commutative_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        const Terms &a = table_[i * n_ + j], &b = table_[j * n_ + i];
        RowVec<K> d = zero();
        for (const auto& t : a) d(t.idx) += t.c;
        for (const auto& t : b) d(t.idx) -= t.c;
        if (!is_zero(d)) {
          commutative_ = false;
          break;
        }
      }

    if (declared_unit) {
      if (is_two_sided_unit(*declared_unit)) {
        unit_ = declared_unit;
        report_.pass("declared unit is a two-sided identity");
      } else {
        report_.fail("declared unit is a two-sided identity", format(*declared_unit));
      }
    } else if (search_unit_if_absent) {
      unit_ = search_unit();
      if (unit_)
        report_.pass("two-sided identity found");
      else
        report_.vacuous("two-sided identity found", "algebra has no unit");
    } else {
      report_.vacuous("two-sided identity found", "not searched");
    }
  }

  bool is_two_sided_unit(const RowVec<K>& u) const {
    for (int i = 0; i < n_; ++i) {
      RowVec<K> b = basis_row(i);
      if (!is_zero(RowVec<K>(mul(u, b) - b)) || !is_zero(RowVec<K>(mul(b, u) - b))) return false;
    }
    return true;
  }

  // Solve u*b_j = b_j and b_j*u = b_j for u over the full space.
  std::optional<RowVec<K>> search_unit() const {
    if (n_ == 0) return std::nullopt;
    Mat<K> sys(n_, 2 * n_ * n_);
    sys.setZero();
    RowVec<K> rhs(2 * n_ * n_);
    rhs.setZero();
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < n_; ++i) {
        for (const auto& t : table_[i * n_ + j]) sys(i, j * n_ + t.idx) += t.c;
        for (const auto& t : table_[j * n_ + i]) sys(i, (n_ + j) * n_ + t.idx) += t.c;
      }
      rhs(j * n_ + j) = one_;
      rhs((n_ + j) * n_ + j) = one_;
    }
    auto c = SpanSolver<K>(sys).coords(rhs);
    if (!c) return std::nullopt;
    RowVec<K> u = *c;  // coords over basis rows = coordinates of u
    return u;
  }
};

// A subspace of an algebra together with its unit when it has one.  Whether
// the subspace is actually an ideal is checked by the verify_* helpers.
template <typename K>
struct Ideal {
  typename Algebra<K>::Ptr alg;
  Mat<K> rows;  // canonical echelon basis
  std::optional<RowVec<K>> unit;

  Index dim() const { return rows.rows(); }
  bool contains(const RowVec<K>& v) const { return SpanSolver<K>(rows).contains(v); }
};

// Unit of the subspace spanned by rows: the unique u in the span with
// u*v = v*u = v for every v in the span, if it exists.
template <typename K>
std::optional<RowVec<K>> find_unit(const typename Algebra<K>::Ptr& alg, const Mat<K>& rows) {
  const Index k = rows.rows();
  const Index n = alg->dim();
  if (k == 0) return RowVec<K>(alg->zero());  // unit of the zero ideal
  Mat<K> sys(k, 2 * k * n);
  RowVec<K> rhs(2 * k * n);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      sys.block(i, j * n, 1, n) = alg->mul(rows.row(i), rows.row(j));
      sys.block(i, (k + j) * n, 1, n) = alg->mul(rows.row(j), rows.row(i));
    }
  for (Index j = 0; j < k; ++j) {
    rhs.segment(j * n, n) = rows.row(j);
    rhs.segment((k + j) * n, n) = rows.row(j);
  }
  auto c = SpanSolver<K>(sys).coords(rhs);
  if (!c) return std::nullopt;
  RowVec<K> u(n);
  u.setZero();
  for (Index i = 0; i < k; ++i)
    if (!scalar_is_zero((*c)(i))) u += (*c)(i)*rows.row(i);
  return u;
}

template <typename K>
Ideal<K> make_ideal(const typename Algebra<K>::Ptr& alg, const Mat<K>& rows) {
  Ideal<K> I;
  I.alg = alg;
  I.rows = row_space(rows);
  I.unit = find_unit<K>(alg, I.rows);
  return I;
}

template <typename K>
bool is_central(const typename Algebra<K>::Ptr& alg, const RowVec<K>& u) {
  for (int i = 0; i < alg->dim(); ++i) {
    RowVec<K> b = alg->basis_row(i);
    if (!is_zero(RowVec<K>(alg->mul(u, b) - alg->mul(b, u)))) return false;
  }
  return true;
}

// Two-sided absorption of the whole algebra into the subspace.
template <typename K>
void verify_ideal_in_algebra(const Ideal<K>& I, VerificationReport& rep, const std::string& name) {
  SpanSolver<K> span{I.rows};
  for (int i = 0; i < I.alg->dim(); ++i) {
    RowVec<K> b = I.alg->basis_row(i);
    for (Index r = 0; r < I.rows.rows(); ++r) {
      if (!span.contains(I.alg->mul(b, I.rows.row(r))) ||
          !span.contains(I.alg->mul(I.rows.row(r), b))) {
        rep.fail(name, "absorption fails at basis element " + I.alg->label(i));
        return;
      }
    }
  }
  rep.pass(name);
}

// sub is an ideal of the subring spanned by sup (both sit inside the same
// ambient algebra).
template <typename K>
void verify_ideal_nested(const typename Algebra<K>::Ptr& alg, const Mat<K>& sub, const Mat<K>& sup,
                         VerificationReport& rep, const std::string& name) {
  if (!subspace_leq(sub, sup)) {
    rep.fail(name, "subspace is not contained in the larger ideal");
    return;
  }
  SpanSolver<K> span{sub};
  for (Index i = 0; i < sup.rows(); ++i)
    for (Index r = 0; r < sub.rows(); ++r) {
      if (!span.contains(alg->mul(RowVec<K>(sup.row(i)), RowVec<K>(sub.row(r)))) ||
          !span.contains(alg->mul(RowVec<K>(sub.row(r)), RowVec<K>(sup.row(i))))) {
        rep.fail(name, "relative absorption fails");
        return;
      }
    }
  rep.pass(name);
}

template <typename K>
Mat<K> product_span(const typename Algebra<K>::Ptr& alg, const Mat<K>& a, const Mat<K>& b) {
  Mat<K> prods(a.rows() * b.rows(), alg->dim());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j)
      prods.row(i * b.rows() + j) = alg->mul(RowVec<K>(a.row(i)), RowVec<K>(b.row(j)));
  return row_space(prods);
}

// Linear map between subspaces of (possibly different) algebras, stored as
// matched lists of domain vectors and their images.
template <typename K>
class LinMap {
 public:
  LinMap(typename Algebra<K>::Ptr dom_alg, typename Algebra<K>::Ptr cod_alg, Mat<K> dom, Mat<K> img)
      : dom_alg_(std::move(dom_alg)),
        cod_alg_(std::move(cod_alg)),
        dom_(std::move(dom)),
        img_(std::move(img)),
        solver_(dom_) {
    if (dom_.rows() != img_.rows()) throw StructuralError("linear map: row count mismatch");
    if (solver_.rank() != dom_.rows()) throw StructuralError("linear map: dependent domain rows");
  }

  static LinMap identity(const typename Algebra<K>::Ptr& alg, const Mat<K>& rows) {
    return LinMap(alg, alg, rows, rows);
  }

  const Mat<K>& dom() const { return dom_; }
  const Mat<K>& img() const { return img_; }
  const typename Algebra<K>::Ptr& dom_alg() const { return dom_alg_; }
  const typename Algebra<K>::Ptr& cod_alg() const { return cod_alg_; }

  std::optional<RowVec<K>> try_apply(const RowVec<K>& x) const {
    auto c = solver_.coords(x);
    if (!c) return std::nullopt;
    RowVec<K> y(img_.cols());
    y.setZero();
    for (Index i = 0; i < img_.rows(); ++i)
      if (!scalar_is_zero((*c)(i))) y += (*c)(i)*img_.row(i);
    return y;
  }
  RowVec<K> apply(const RowVec<K>& x) const {
    auto y = try_apply(x);
    if (!y) throw PreconditionError("linear map applied outside its domain");
    return *y;
  }
  Mat<K> apply_rows(const Mat<K>& xs) const {
    Mat<K> out(xs.rows(), img_.cols());
    for (Index i = 0; i < xs.rows(); ++i) out.row(i) = apply(RowVec<K>(xs.row(i)));
    return out;
  }

  Mat<K> domain_space() const { return row_space(dom_); }
  Mat<K> image_space() const { return row_space(img_); }
  bool injective() const { return row_space(img_).rows() == img_.rows(); }

  LinMap inverse() const {
    if (!injective()) throw PreconditionError("linear map is not injective");
    return LinMap(cod_alg_, dom_alg_, img_, dom_);
  }

 private:
  typename Algebra<K>::Ptr dom_alg_, cod_alg_;
  Mat<K> dom_, img_;
  SpanSolver<K> solver_;
};

// Bijectivity plus multiplicativity on all pairs of domain basis vectors.
template <typename K>
VerificationReport verify_ring_iso(const LinMap<K>& f, const Mat<K>& domain_span,
                                   const Mat<K>& codomain_span, const std::string& subject) {
  VerificationReport rep(subject);
  rep.check("domain rows span the stated domain", subspace_eq(f.domain_space(), row_space(domain_span)));
  rep.check("image spans the stated codomain", subspace_eq(f.image_space(), row_space(codomain_span)));
  rep.check("injective", f.injective());
  if (!rep.ok()) return rep;
  for (Index i = 0; i < f.dom().rows(); ++i)
    for (Index j = 0; j < f.dom().rows(); ++j) {
      RowVec<K> p = f.dom_alg()->mul(RowVec<K>(f.dom().row(i)), RowVec<K>(f.dom().row(j)));
      auto fp = f.try_apply(p);
      if (!fp) {
        rep.fail("domain closed under products",
                 "(" + std::to_string(i) + "," + std::to_string(j) + ")");
        return rep;
      }
      RowVec<K> q = f.cod_alg()->mul(RowVec<K>(f.img().row(i)), RowVec<K>(f.img().row(j)));
      if (!is_zero(RowVec<K>(*fp - q))) {
        rep.fail("multiplicative on basis pairs",
                 "(" + std::to_string(i) + "," + std::to_string(j) + ")");
        return rep;
      }
    }
  rep.pass("domain closed under products");
  rep.pass("multiplicative on basis pairs");
  return rep;
}

// Subalgebra generated by families of rows, with a construction log: each
// accepted basis vector records the generator or product it came from and
// the reduction against earlier basis vectors, so every closure element
// unfolds to an explicit expression in the generators.
struct ClosureSource {
  enum Kind { generator, product } kind;
  int family = -1, row = -1;  // generator: families[family].row(row)
  int left = -1, right = -1;  // product: basis[left] * basis[right]
};

template <typename K>
struct Closure {
  std::vector<RowVec<K>> basis;  // immutable construction order
  struct LogEntry {
    ClosureSource source;
    std::vector<std::pair<int, K>> reductions;  // basis[k] = source_vec - sum c_m * basis[m]
  };
  std::vector<LogEntry> log;
  Mat<K> rows;  // canonical row space of the basis

  Mat<K> basis_mat(Index cols) const {
    Mat<K> m(static_cast<Index>(basis.size()), cols);
    for (size_t i = 0; i < basis.size(); ++i) m.row(static_cast<Index>(i)) = basis[i];
    return m;
  }
};

template <typename K>
Closure<K> subalgebra_closure(const typename Algebra<K>::Ptr& alg,
                              const std::vector<Mat<K>>& families) {
  Closure<K> cl;
  const Index n = alg->dim();
  std::vector<Index> pivot_col;  // per accepted basis vector

  auto try_accept = [&](RowVec<K> v, ClosureSource src) -> bool {
    typename Closure<K>::LogEntry entry{src, {}};
    for (size_t m = 0; m < cl.basis.size(); ++m) {
      const Index p = pivot_col[m];
      if (!scalar_is_zero(v(p))) {
        const K c = v(p) / cl.basis[m](p);
        v -= c * cl.basis[m];
        entry.reductions.emplace_back(static_cast<int>(m), c);
      }
    }
    Index piv = -1;
    for (Index j = 0; j < n; ++j)
      if (!scalar_is_zero(v(j))) {
        piv = j;
        break;
      }
    if (piv < 0) return false;
    cl.basis.push_back(std::move(v));
    pivot_col.push_back(piv);
    cl.log.push_back(std::move(entry));
    return true;
  };

  for (size_t f = 0; f < families.size(); ++f)
    for (Index r = 0; r < families[f].rows(); ++r)
      try_accept(RowVec<K>(families[f].row(r)), {ClosureSource::generator, (int)f, (int)r, -1, -1});

  // Keep multiplying basis vectors until nothing new appears.  Rescan from
  // the start whenever the basis grew, so late vectors meet early ones.
  for (size_t scanned = 0; scanned < cl.basis.size();) {
    scanned = cl.basis.size();
    for (size_t i = 0; i < scanned; ++i)
      for (size_t j = 0; j < scanned; ++j) {
        RowVec<K> p = alg->mul(cl.basis[i], cl.basis[j]);
        if (!is_zero(p)) try_accept(std::move(p), {ClosureSource::product, -1, -1, (int)i, (int)j});
      }
  }

  cl.rows = row_space(cl.basis_mat(n));
  return cl;
}

}  // namespace pgact

#endif
