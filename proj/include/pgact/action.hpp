#ifndef PGACT_ACTION_HPP
#define PGACT_ACTION_HPP

// Partial actions of a finite groupoid on a finite-dimensional algebra: one
// ideal D_g per arrow and one ring isomorphism alpha_g : D_{g^-1} -> D_g,
// subject to the usual compatibility axioms.  Verification is separate from
// construction; make() only enforces shape.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgact/algebra.hpp"
#include "pgact/groupoid.hpp"
#include "pgact/linalg.hpp"
#include "pgact/report.hpp"

namespace pgact {

template <typename K>
struct PartialAction {
  Groupoid::Ptr G;
  typename Algebra<K>::Ptr R;
  std::vector<Ideal<K>> D;                       // indexed by arrow
  std::vector<std::optional<LinMap<K>>> alpha_;  // alpha_[g] : D_{g^-1} -> D_g

  // ideals keyed by arrow name; maps[g] lists the images of the canonical
  // basis rows of D_{g^-1}.  Identity arrows default to identity maps.
  static PartialAction make(Groupoid::Ptr G, typename Algebra<K>::Ptr R,
                            const std::map<std::string, Mat<K>>& ideals,
                            const std::map<std::string, Mat<K>>& maps) {
    PartialAction A;
    A.G = std::move(G);
    A.R = std::move(R);
    const int n = A.R->dim();
    for (const auto& [name, rows] : ideals) {
      A.G->index(name);  // throws on unknown arrow
      if (rows.cols() != n) throw StructuralError("ideal rows for " + name + " have wrong length");
    }
    for (const auto& [name, rows] : maps) {
      A.G->index(name);
      if (rows.cols() != n) throw StructuralError("map rows for " + name + " have wrong length");
    }
    for (int g = 0; g < A.G->size(); ++g) {
      auto it = ideals.find(A.G->name(g));
      if (it == ideals.end()) throw StructuralError("no ideal declared for arrow " + A.G->name(g));
      A.D.push_back(make_ideal<K>(A.R, it->second));
    }
    for (int g = 0; g < A.G->size(); ++g) {
      const int gi = A.G->inverse(g);
      auto it = maps.find(A.G->name(g));
      if (it == maps.end()) {
        if (!A.G->is_identity(g)) throw StructuralError("no map declared for arrow " + A.G->name(g));
        A.alpha_.emplace_back(LinMap<K>::identity(A.R, A.D[g].rows));
      } else {
        A.alpha_.emplace_back(LinMap<K>(A.R, A.R, A.D[gi].rows, it->second));
      }
    }
    return A;
  }

  const LinMap<K>& alpha(int g) const { return *alpha_[g]; }
  const Ideal<K>& ideal(int g) const { return D[g]; }

  const RowVec<K>& unit_of(int g) const {
    if (!D[g].unit)
      throw PreconditionError("D_" + G->name(g) + " has no unit");
    return *D[g].unit;
  }

  // alpha_g(x * 1_{g^-1}); needs D_{g^-1} unital.
  RowVec<K> truncated_apply(int g, const RowVec<K>& x) const {
    return alpha_[g]->apply(R->mul(x, unit_of(G->inverse(g))));
  }

  bool is_global() const {
    for (int g = 0; g < G->size(); ++g)
      if (!subspace_eq(D[g].rows, D[G->target(g)].rows)) return false;
    return true;
  }
};

template <typename K>
VerificationReport verify_partial_action(const PartialAction<K>& A) {
  VerificationReport rep("partial action");
  const Groupoid& G = *A.G;

  {
    bool ok = true;
    std::string w;
    for (int e : G.identities()) {
      VerificationReport sub("");
      verify_ideal_in_algebra(A.D[e], sub, "abs");
      if (!sub.ok()) {
        ok = false;
        w = G.name(e);
        break;
      }
    }
    rep.check("every D_e is a two-sided ideal of R", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int g = 0; g < G.size() && ok; ++g) {
      if (G.is_identity(g)) continue;
      VerificationReport sub("");
      verify_ideal_nested<K>(A.R, A.D[g].rows, A.D[G.target(g)].rows, sub, "abs");
      if (!sub.ok()) {
        ok = false;
        w = G.name(g);
      }
    }
    rep.check("every D_g is an ideal of D_{r(g)}", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int g = 0; g < G.size() && ok; ++g) {
      auto sub = verify_ring_iso(A.alpha(g), A.D[G.inverse(g)].rows, A.D[g].rows,
                                 "alpha_" + G.name(g));
      if (!sub.ok()) {
        ok = false;
        w = G.name(g) + " (" + sub.first_failure() + ")";
      }
    }
    rep.check("every alpha_g is a ring isomorphism from D_{g^-1} onto D_g", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int e : G.identities()) {
      const Mat<K>& rows = A.D[e].rows;
      for (Index i = 0; i < rows.rows() && ok; ++i) {
        auto y = A.alpha(e).try_apply(RowVec<K>(rows.row(i)));
        if (!y || !is_zero(RowVec<K>(*y - rows.row(i)))) {
          ok = false;
          w = G.name(e);
        }
      }
    }
    rep.check("alpha_e fixes D_e pointwise", ok, w);
  }

  // per composable pair: the domain condition, then composition on the
  // domain it provides
  bool ii_ok = true, iii_ok = true;
  std::string ii_w, iii_w;
  size_t iii_pairs = 0;
  for (const auto& [g, h] : G.composable_pairs()) {
    const int gi = G.inverse(g), hi = G.inverse(h), gh = G.compose(g, h);
    Mat<K> inter = intersect_rows<K>(A.D[gi].rows, A.D[h].rows);
    Mat<K> back(inter.rows(), A.R->dim());
    bool pair_ok = true;
    for (Index i = 0; i < inter.rows(); ++i) {
      auto y = A.alpha(hi).try_apply(RowVec<K>(inter.row(i)));
      if (!y) {
        pair_ok = false;
        break;
      }
      back.row(i) = *y;
    }
    if (!pair_ok || !subspace_leq(back, A.D[G.inverse(gh)].rows)) {
      if (ii_ok) {
        ii_ok = false;
        ii_w = "(" + G.name(g) + "," + G.name(h) + ")";
      }
      continue;
    }
    ++iii_pairs;
    for (Index i = 0; i < back.rows() && iii_ok; ++i) {
      RowVec<K> x(back.row(i));
      auto s1 = A.alpha(h).try_apply(x);
      std::optional<RowVec<K>> lhs;
      if (s1) lhs = A.alpha(g).try_apply(*s1);
      auto rhs = A.alpha(gh).try_apply(x);
      if (!lhs || !rhs || !is_zero(RowVec<K>(*lhs - *rhs))) {
        iii_ok = false;
        iii_w = "(" + G.name(g) + "," + G.name(h) + ")";
      }
    }
  }
  rep.check("alpha_{h^-1}(D_{g^-1} cap D_h) lies in D_{(gh)^-1}", ii_ok, ii_w);
  if (iii_pairs == 0 && !ii_ok)
    rep.vacuous("alpha_g . alpha_h agrees with alpha_{gh} on its domain",
                "no pair provided a domain");
  else
    rep.check("alpha_g . alpha_h agrees with alpha_{gh} on its domain", iii_ok, iii_w);

  {
    bool ok = true;
    std::string w;
    for (int g = 0; g < G.size() && ok; ++g) {
      const int gi = G.inverse(g);
      for (Index i = 0; i < A.D[gi].rows.rows() && ok; ++i) {
        RowVec<K> v(A.D[gi].rows.row(i));
        auto fwd = A.alpha(g).try_apply(v);
        std::optional<RowVec<K>> rt;
        if (fwd) rt = A.alpha(gi).try_apply(*fwd);
        if (!rt || !is_zero(RowVec<K>(*rt - v))) {
          ok = false;
          w = G.name(g);
        }
      }
    }
    rep.check("alpha_{g^-1} inverts alpha_g", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (const auto& [g, h] : G.composable_pairs()) {
      const int gi = G.inverse(g), gh = G.compose(g, h);
      Mat<K> inter = intersect_rows<K>(A.D[gi].rows, A.D[h].rows);
      Mat<K> img(inter.rows(), A.R->dim());
      bool applied = true;
      for (Index i = 0; i < inter.rows(); ++i) {
        auto y = A.alpha(g).try_apply(RowVec<K>(inter.row(i)));
        if (!y) {
          applied = false;
          break;
        }
        img.row(i) = *y;
      }
      if (!applied || !subspace_eq(row_space<K>(img), intersect_rows<K>(A.D[g].rows, A.D[gh].rows))) {
        ok = false;
        w = "(" + G.name(g) + "," + G.name(h) + ")";
        break;
      }
    }
    rep.check("alpha_g carries D_{g^-1} cap D_h onto D_g cap D_{gh}", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    size_t checked = 0;
    for (const auto& [g, h] : G.composable_pairs()) {
      const int gi = G.inverse(g), gh = G.compose(g, h);
      if (!A.D[gi].unit || !A.D[h].unit || !A.D[g].unit || !A.D[gh].unit) continue;
      ++checked;
      auto y = A.alpha(g).try_apply(A.R->mul(*A.D[gi].unit, *A.D[h].unit));
      RowVec<K> want = A.R->mul(*A.D[g].unit, *A.D[gh].unit);
      if (!y || !is_zero(RowVec<K>(*y - want))) {
        ok = false;
        w = "(" + G.name(g) + "," + G.name(h) + ")";
        break;
      }
    }
    if (checked == 0)
      rep.vacuous("alpha_g(1_{g^-1} 1_h) = 1_g 1_{gh}", "no pair has all four units");
    else
      rep.check("alpha_g(1_{g^-1} 1_h) = 1_g 1_{gh}", ok, w);
  }
  return rep;
}

// The two hypotheses the invariant/trace theory assumes: unital domain
// ideals, and R the direct sum of the identity ideals.
template <typename K>
VerificationReport standing_hypotheses(const PartialAction<K>& A) {
  VerificationReport rep("standing hypotheses");
  {
    bool ok = true;
    std::string w;
    for (int g = 0; g < A.G->size(); ++g)
      if (!A.D[g].unit) {
        ok = false;
        w = "D_" + A.G->name(g);
        break;
      }
    rep.check("every D_g has a unit", ok, w);
  }
  {
    Index total = 0;
    Mat<K> all(0, A.R->dim());
    for (int e : A.G->identities()) {
      total += A.D[e].dim();
      all = vstack<K>(all, A.D[e].rows);
    }
    const Index rank = row_space<K>(all).rows();
    if (rank < total)
      rep.fail("R is the direct sum of the identity ideals", "identity ideals overlap");
    else if (rank < A.R->dim())
      rep.fail("R is the direct sum of the identity ideals", "identity ideals do not span R");
    else
      rep.pass("R is the direct sum of the identity ideals");
  }
  return rep;
}

template <typename K>
struct Restriction {
  PartialAction<K> action;
  Mat<K> carrier;  // basis of the restricted algebra inside the parent one
};

// Restrict a global action to chosen subideals of the identity ideals:
// the new carrier is their direct sum, D'_g = D0_{r(g)} cap beta_g(D0_{d(g)}),
// and alpha' is beta restricted.  sub_ideals is indexed like G->identities().
template <typename K>
Restriction<K> restrict_action(const PartialAction<K>& B, const std::vector<Mat<K>>& sub_ideals) {
  if (!B.is_global()) throw PreconditionError("restriction requires a global action");
  const auto& ids = B.G->identities();
  if (sub_ideals.size() != ids.size())
    throw StructuralError("one subideal per identity is required");

  std::vector<Mat<K>> sub;  // canonical, per identity
  for (size_t i = 0; i < ids.size(); ++i) {
    Mat<K> rows = row_space<K>(sub_ideals[i]);
    if (!subspace_leq(rows, B.D[ids[i]].rows))
      throw PreconditionError("subideal for " + B.G->name(ids[i]) +
                              " is not contained in D_" + B.G->name(ids[i]));
    sub.push_back(std::move(rows));
  }

  Mat<K> carrier(0, B.R->dim());
  for (const auto& rows : sub) carrier = vstack<K>(carrier, rows);
  std::optional<RowVec<K>> unit;
  {
    bool all = true;
    RowVec<K> u = B.R->zero();
    for (const auto& rows : sub) {
      auto ue = find_unit<K>(B.R, rows);
      if (!ue) {
        all = false;
        break;
      }
      u += *ue;
    }
    if (all) unit = u;
  }
  auto subR = Algebra<K>::subalgebra_on_rows(B.R, carrier, {}, unit, "restricted algebra");
  SpanSolver<K> into{carrier};
  auto to_sub = [&](const RowVec<K>& x) {
    auto c = into.coords(x);
    if (!c) throw InternalError("restricted vector left the carrier");
    return *c;
  };

  std::map<int, int> id_slot;
  for (size_t i = 0; i < ids.size(); ++i) id_slot[ids[i]] = static_cast<int>(i);

  std::map<std::string, Mat<K>> ideals, maps;
  std::vector<Mat<K>> new_rows(B.G->size());
  for (int g = 0; g < B.G->size(); ++g) {
    Mat<K> img_of_sub(sub[id_slot[B.G->source(g)]].rows(), B.R->dim());
    for (Index i = 0; i < img_of_sub.rows(); ++i)
      img_of_sub.row(i) = B.alpha(g).apply(RowVec<K>(sub[id_slot[B.G->source(g)]].row(i)));
    Mat<K> dg = intersect_rows<K>(sub[id_slot[B.G->target(g)]], row_space<K>(img_of_sub));
    Mat<K> conv(dg.rows(), subR.alg->dim());
    for (Index i = 0; i < dg.rows(); ++i) conv.row(i) = to_sub(RowVec<K>(dg.row(i)));
    new_rows[g] = row_space<K>(conv);
    ideals[B.G->name(g)] = new_rows[g];
  }
  for (int g = 0; g < B.G->size(); ++g) {
    const int gi = B.G->inverse(g);
    Mat<K> img(new_rows[gi].rows(), subR.alg->dim());
    for (Index i = 0; i < img.rows(); ++i) {
      RowVec<K> up = new_rows[gi].row(i) * carrier;  // back to parent coordinates
      img.row(i) = to_sub(B.alpha(g).apply(up));
    }
    maps[B.G->name(g)] = img;
  }
  return {PartialAction<K>::make(B.G, subR.alg, ideals, maps), carrier};
}

// The isotropy group of e acting on D_e as an algebra in its own right.
template <typename K>
Restriction<K> isotropy_restriction(const PartialAction<K>& A, int e) {
  if (!A.G->is_identity(e)) throw PreconditionError("isotropy restriction needs an identity");
  const auto iso = A.G->isotropy(e);

  GroupoidTable t;
  for (int g : iso) t.elements.push_back(A.G->name(g));
  for (int g : iso) t.inverses.emplace_back(A.G->name(g), A.G->name(A.G->inverse(g)));
  for (int g : iso)
    for (int h : iso)
      t.compositions.push_back({A.G->name(g), A.G->name(h), A.G->name(A.G->compose(g, h))});
  auto Ge = Groupoid::make(t);

  Mat<K> carrier = A.D[e].rows;
  auto subR = Algebra<K>::subalgebra_on_rows(A.R, carrier, {}, A.D[e].unit, "isotropy algebra");
  SpanSolver<K> into{carrier};
  auto to_sub = [&](const RowVec<K>& x) {
    auto c = into.coords(x);
    if (!c) throw InternalError("isotropy ideal left D_e");
    return *c;
  };

  std::map<std::string, Mat<K>> ideals, maps;
  std::vector<Mat<K>> new_rows(iso.size());
  for (size_t k = 0; k < iso.size(); ++k) {
    const Mat<K>& rows = A.D[iso[k]].rows;
    Mat<K> conv(rows.rows(), subR.alg->dim());
    for (Index i = 0; i < rows.rows(); ++i) conv.row(i) = to_sub(RowVec<K>(rows.row(i)));
    new_rows[k] = row_space<K>(conv);
    ideals[A.G->name(iso[k])] = new_rows[k];
  }
  for (size_t k = 0; k < iso.size(); ++k) {
    const int g = iso[k];
    size_t ki = 0;
    while (iso[ki] != A.G->inverse(g)) ++ki;
    Mat<K> img(new_rows[ki].rows(), subR.alg->dim());
    for (Index i = 0; i < img.rows(); ++i) {
      RowVec<K> up = new_rows[ki].row(i) * carrier;
      img.row(i) = to_sub(A.alpha(g).apply(up));
    }
    maps[A.G->name(g)] = img;
  }
  return {PartialAction<K>::make(Ge, subR.alg, ideals, maps), carrier};
}

}  // namespace pgact

#endif
