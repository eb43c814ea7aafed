#ifndef PGACT_SKEWRING_HPP
#define PGACT_SKEWRING_HPP

// The skew groupoid ring of a partial action: one summand D_g delta_g per
// arrow, with (x delta_g)(y delta_h) = alpha_g(alpha_{g^-1}(x) y) delta_{gh}
// on composable pairs and zero otherwise.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pgact/globalize.hpp"

namespace pgact {

template <typename K>
struct SkewRing {
  PartialAction<K> action;
  typename Algebra<K>::Ptr A;
  std::vector<int> offset;  // arrow -> first flat basis slot; one row per D_g basis vector

  static SkewRing build(const PartialAction<K>& act) {
    SkewRing S;
    S.action = act;
    const Groupoid& G = *act.G;
    const auto& R = *act.R;

    std::vector<std::string> labels;
    S.offset.assign(G.size() + 1, 0);
    for (int g = 0; g < G.size(); ++g) {
      S.offset[g] = static_cast<int>(labels.size());
      for (Index i = 0; i < act.D[g].dim(); ++i)
        labels.push_back(G.name(g) + "#" + std::to_string(i + 1));
    }
    S.offset[G.size()] = static_cast<int>(labels.size());
    const int N = static_cast<int>(labels.size());

    std::vector<SpanSolver<K>> into;
    into.reserve(G.size());
    for (int g = 0; g < G.size(); ++g) into.emplace_back(SpanSolver<K>{act.D[g].rows});

    std::map<std::pair<int, int>, RowVec<K>> prods;
    for (const auto& [g, h] : G.composable_pairs()) {
      const int gi = G.inverse(g), gh = G.compose(g, h);
      for (Index i = 0; i < act.D[g].dim(); ++i)
        for (Index j = 0; j < act.D[h].dim(); ++j) {
          RowVec<K> back = act.alpha(gi).apply(RowVec<K>(act.D[g].rows.row(i)));
          auto z = act.alpha(g).try_apply(R.mul(back, RowVec<K>(act.D[h].rows.row(j))));
          if (!z)
            throw PreconditionError("skew product escapes its domain at (" + G.name(g) + "," +
                                    G.name(h) + ")");
          if (is_zero(*z)) continue;
          auto c = into[gh].coords(*z);
          if (!c)
            throw PreconditionError("skew product leaves D_{gh} at (" + G.name(g) + "," +
                                    G.name(h) + ")");
          RowVec<K> row(N);
          row.setZero();
          row.segment(S.offset[gh], act.D[gh].dim()) = *c;
          prods[{S.offset[g] + static_cast<int>(i), S.offset[h] + static_cast<int>(j)}] =
              std::move(row);
        }
    }

    std::optional<RowVec<K>> unit;
    {
      bool have = true;
      for (int e : G.identities())
        if (!act.D[e].unit) have = false;
      if (have) {
        RowVec<K> u(N);
        u.setZero();
        for (int e : G.identities()) u += delta_into(S, N, e, *act.D[e].unit, into[e]);
        unit = u;
      }
    }
    S.A = Algebra<K>::make(std::move(labels), prods, R.one(), unit, "skew groupoid ring", false);
    return S;
  }

  // x delta_g for x in D_g
  RowVec<K> delta(int g, const RowVec<K>& x) const {
    SpanSolver<K> into{action.D[g].rows};
    return delta_into(*this, A->dim(), g, x, into);
  }

  // coefficient of delta_g, back in R coordinates
  RowVec<K> component(const RowVec<K>& v, int g) const {
    RowVec<K> out = action.R->zero();
    for (Index i = 0; i < action.D[g].dim(); ++i)
      out += v(offset[g] + i) * action.D[g].rows.row(i);
    return out;
  }

  // sum over all arrows of 1_g delta_g; every D_g must be unital
  RowVec<K> t() const {
    RowVec<K> out(A->dim());
    out.setZero();
    for (int g = 0; g < action.G->size(); ++g) out += delta(g, action.unit_of(g));
    return out;
  }

  // x -> sum_e (x 1_e) delta_e; a ring embedding of R when R = sum of the D_e
  RowVec<K> embed(const RowVec<K>& x) const {
    RowVec<K> out(A->dim());
    out.setZero();
    for (int e : action.G->identities())
      out += delta(e, action.R->mul(x, action.unit_of(e)));
    return out;
  }

 private:
  static RowVec<K> delta_into(const SkewRing& S, int N, int g, const RowVec<K>& x,
                              SpanSolver<K>& into) {
    auto c = into.coords(x);
    if (!c) throw PreconditionError("element lies outside D_" + S.action.G->name(g));
    RowVec<K> out(N);
    out.setZero();
    out.segment(S.offset[g], S.action.D[g].dim()) = *c;
    return out;
  }
};

// Identities tying the distinguished element t = sum_g 1_g delta_g to the
// embedded copy of R.  They presuppose the standing hypotheses.
template <typename K>
VerificationReport verify_t_identities(const SkewRing<K>& S) {
  VerificationReport rep("t identities");
  if (!standing_hypotheses(S.action).ok()) {
    rep.vacuous("(a delta_h) t = a t", "standing hypotheses fail");
    rep.vacuous("t (a delta_h) = t alpha_{h^-1}(a 1_h)", "standing hypotheses fail");
    rep.vacuous("the embedding of R is multiplicative", "standing hypotheses fail");
    return rep;
  }
  const Groupoid& G = *S.action.G;
  RowVec<K> t = S.t();
  {
    bool ok = true;
    std::string w;
    for (int h = 0; h < G.size() && ok; ++h)
      for (Index i = 0; i < S.action.D[h].dim() && ok; ++i) {
        RowVec<K> a(S.action.D[h].rows.row(i));
        RowVec<K> lhs = S.A->mul(S.delta(h, a), t);
        RowVec<K> rhs = S.A->mul(S.embed(a), t);
        if (!is_zero(RowVec<K>(lhs - rhs))) {
          ok = false;
          w = G.name(h);
        }
      }
    rep.check("(a delta_h) t = a t", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int h = 0; h < G.size() && ok; ++h)
      for (Index i = 0; i < S.action.D[h].dim() && ok; ++i) {
        RowVec<K> a(S.action.D[h].rows.row(i));
        RowVec<K> lhs = S.A->mul(t, S.delta(h, a));
        RowVec<K> rhs = S.A->mul(t, S.embed(S.action.truncated_apply(G.inverse(h), a)));
        if (!is_zero(RowVec<K>(lhs - rhs))) {
          ok = false;
          w = G.name(h);
        }
      }
    rep.check("t (a delta_h) = t alpha_{h^-1}(a 1_h)", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int i = 0; i < S.action.R->dim() && ok; ++i)
      for (int j = 0; j < S.action.R->dim(); ++j) {
        RowVec<K> x = S.action.R->basis_row(i), y = S.action.R->basis_row(j);
        if (!is_zero(RowVec<K>(S.A->mul(S.embed(x), S.embed(y)) - S.embed(S.action.R->mul(x, y))))) {
          ok = false;
          w = "(" + S.action.R->label(i) + "," + S.action.R->label(j) + ")";
          break;
        }
      }
    rep.check("the embedding of R is multiplicative", ok, w);
  }
  return rep;
}

// The corner picture inside B = T *_beta G: with 1_A the image of the unit
// of A = R *_alpha G, the one-sided pieces B 1_A and 1_A B collapse to
// componentwise translated/embedded ideals, the two-sided corner is the
// embedded copy of A, and B 1_A B is everything.
template <typename K>
struct Corners {
  SkewRing<K> skew_source;   // A
  SkewRing<K> skew_global;   // B
  RowVec<K> e_A;             // image of 1_A in B
  Mat<K> left;               // B 1_A
  Mat<K> right;              // 1_A B
  Mat<K> corner;             // 1_A B 1_A
  Mat<K> embedded_source;    // image of A under v delta_g -> phi(v) delta_g
  VerificationReport report;
};

template <typename K>
Corners<K> corner_structure(const Globalization<K>& Gl) {
  Corners<K> C{SkewRing<K>::build(Gl.source), SkewRing<K>::build(Gl.beta), RowVec<K>(), Mat<K>(),
               Mat<K>(), Mat<K>(), Mat<K>(), VerificationReport("corner structure")};
  const Groupoid& G = *Gl.source.G;
  const auto& B = C.skew_global;

  {
    RowVec<K> u(B.A->dim());
    u.setZero();
    for (int e : G.identities()) u += B.delta(e, Gl.phi_at(e).apply(Gl.source.unit_of(e)));
    C.e_A = u;
  }

  Mat<K> full = B.A->full_rows();
  Mat<K> eA(1, B.A->dim());
  eA.row(0) = C.e_A;
  C.left = product_span<K>(B.A, full, eA);
  C.right = product_span<K>(B.A, eA, full);
  C.corner = product_span<K>(B.A, eA, C.left);

  // componentwise oracles for the three subspaces
  Mat<K> want_left(0, B.A->dim()), want_right(0, B.A->dim()), want_corner(0, B.A->dim());
  for (int g = 0; g < G.size(); ++g) {
    const int r = G.target(g), d = G.source(g);
    const Mat<K>& phis = Gl.phi_at(d).img();
    for (Index i = 0; i < phis.rows(); ++i)
      want_left = vstack<K>(want_left, B.delta(g, Gl.beta.alpha(g).apply(RowVec<K>(phis.row(i)))));
    const Mat<K>& target_img = Gl.phi_at(r).img();
    for (Index i = 0; i < target_img.rows(); ++i)
      want_right = vstack<K>(want_right, B.delta(g, RowVec<K>(target_img.row(i))));
    Mat<K> emb_g = Gl.phi_at(r).apply_rows(Gl.source.D[g].rows);
    for (Index i = 0; i < emb_g.rows(); ++i)
      want_corner = vstack<K>(want_corner, B.delta(g, RowVec<K>(emb_g.row(i))));
  }
  C.embedded_source = row_space<K>(want_corner);

  C.report.check("B 1_A is the span of the translated ideals componentwise",
                 subspace_eq(C.left, row_space<K>(want_left)));
  C.report.check("1_A B is the span of the embedded target ideals componentwise",
                 subspace_eq(C.right, row_space<K>(want_right)));
  C.report.check("1_A B 1_A is the embedded copy of A", subspace_eq(C.corner, C.embedded_source));
  C.report.check("B 1_A B is all of B",
                 subspace_eq(product_span<K>(B.A, C.left, full), row_space<K>(full)));

  {
    // the embedding v delta_g -> phi_{r(g)}(v) delta_g as a ring map
    Mat<K> dom(0, C.skew_source.A->dim()), img(0, B.A->dim());
    for (int g = 0; g < G.size(); ++g) {
      const int r = G.target(g);
      for (Index i = 0; i < Gl.source.D[g].dim(); ++i) {
        RowVec<K> v(Gl.source.D[g].rows.row(i));
        dom = vstack<K>(dom, C.skew_source.delta(g, v));
        img = vstack<K>(img, B.delta(g, Gl.phi_at(r).apply(v)));
      }
    }
    LinMap<K> iota(C.skew_source.A, B.A, dom, img);
    auto sub = verify_ring_iso(iota, row_space<K>(C.skew_source.A->full_rows()),
                               C.embedded_source, "iota");
    C.report.check("the skew rings embed compatibly", sub.ok(), sub.first_failure());
  }
  {
    // strictness of the (A, B, 1_A B, B 1_A) context
    C.report.check("the pairing into A is onto",
                   subspace_eq(product_span<K>(B.A, C.right, C.left), C.embedded_source));
    C.report.check("the pairing into B is onto",
                   subspace_eq(product_span<K>(B.A, C.left, C.right), row_space<K>(full)));
  }
  return C;
}

}  // namespace pgact

#endif
