#ifndef PGACT_GLOBALIZE_HPP
#define PGACT_GLOBALIZE_HPP

// Enveloping (global) actions.  A partial action with unital domain ideals
// embeds into a global action on a subalgebra T of the |G|-fold block power
// of R: block h of the embedding of a in D_e carries alpha_{h^-1}(a 1_h),
// and arrows act by shifting blocks along left translation.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgact/action.hpp"

namespace pgact {

template <typename K>
struct Globalization {
  PartialAction<K> source;
  PartialAction<K> beta;                       // global action on T = beta.R
  std::vector<std::optional<LinMap<K>>> phi;   // per arrow of G, set at identities: D_e -> T
  std::optional<LinMap<K>> emb;                // all of R -> T, when R is the sum of the D_e
  Mat<K> t_in_f;                               // basis of T inside the block power (built only)
  VerificationReport report;

  const typename Algebra<K>::Ptr& T() const { return beta.R; }
  const LinMap<K>& phi_at(int e) const {
    if (!phi[e]) throw PreconditionError("phi is only defined at identities");
    return *phi[e];
  }
};

struct CanGlobalize {
  bool ok;
  std::string witness;
};

// A globalization exists precisely when every domain ideal is unital.
template <typename K>
CanGlobalize can_globalize(const PartialAction<K>& A) {
  for (int g = 0; g < A.G->size(); ++g)
    if (!A.D[g].unit) return {false, "D_" + A.G->name(g) + " has no unit"};
  return {true, ""};
}

namespace detail {

// block h of the result is block g^-1 h of f, for h in the target fibre of g
template <typename K>
RowVec<K> shift_block(const Groupoid& G, int n, int g, const RowVec<K>& f) {
  RowVec<K> out(f.cols());
  out.setZero();
  for (int h : G.xset(G.target(g))) {
    const int src = G.compose(G.inverse(g), h);
    out.segment(h * n, n) = f.segment(src * n, n);
  }
  return out;
}

template <typename K>
RowVec<K> embed_block(const PartialAction<K>& A, int e, const RowVec<K>& a) {
  const int n = A.R->dim();
  RowVec<K> out(A.G->size() * n);
  out.setZero();
  for (int h : A.G->xset(e))
    out.segment(h * n, n) = A.alpha(A.G->inverse(h)).apply(A.R->mul(a, A.unit_of(h)));
  return out;
}

}  // namespace detail

// Axioms for (T, beta, phi) enveloping the source action.
template <typename K>
VerificationReport verify_globalization_axioms(const PartialAction<K>& src,
                                               const PartialAction<K>& beta,
                                               const std::vector<std::optional<LinMap<K>>>& phi) {
  VerificationReport rep("globalization");
  const Groupoid& G = *src.G;

  {
    auto sub = verify_partial_action(beta);
    rep.check("the extended action satisfies the partial action axioms", sub.ok(),
              sub.first_failure());
  }
  rep.check("the extended action is global", beta.is_global());
  rep.check("T has a unit", beta.R->unit().has_value());

  {
    bool ok = true;
    std::string w;
    for (int e : G.identities()) {
      if (!phi[e] || !mat_eq<K>(phi[e]->dom(), src.D[e].rows)) {
        ok = false;
        w = G.name(e) + " (missing or misaligned)";
        break;
      }
      auto sub = verify_ring_iso(*phi[e], src.D[e].rows, phi[e]->image_space(), "phi");
      if (!sub.ok()) {
        ok = false;
        w = G.name(e) + " (" + sub.first_failure() + ")";
        break;
      }
    }
    rep.check("phi_e is a ring monomorphism on D_e", ok, w);
    if (!ok) return rep;  // nothing below typechecks
  }
  {
    bool ok = true;
    std::string w;
    for (int e : G.identities())
      if (!subspace_leq(phi[e]->image_space(), beta.D[e].rows)) {
        ok = false;
        w = G.name(e);
        break;
      }
    rep.check("phi_e lands in the e component of T", ok, w);
    if (!ok) return rep;
  }

  {
    bool ok = true;
    std::string w;
    for (int g = 0; g < G.size() && ok; ++g) {
      const int r = G.target(g), d = G.source(g);
      Mat<K> lhs = row_space<K>(phi[r]->apply_rows(src.D[g].rows));
      Mat<K> beta_img(phi[d]->img().rows(), beta.R->dim());
      bool applied = true;
      for (Index i = 0; i < beta_img.rows(); ++i) {
        auto y = beta.alpha(g).try_apply(RowVec<K>(phi[d]->img().row(i)));
        if (!y) {
          applied = false;
          break;
        }
        beta_img.row(i) = *y;
      }
      if (!applied ||
          !subspace_eq(lhs, intersect_rows<K>(phi[r]->image_space(), row_space<K>(beta_img)))) {
        ok = false;
        w = G.name(g);
      }
    }
    rep.check("phi_{r(g)}(D_g) = phi(D_{r(g)}) cap beta_g(phi(D_{d(g)}))", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int g = 0; g < G.size() && ok; ++g) {
      const int r = G.target(g), d = G.source(g), gi = G.inverse(g);
      for (Index i = 0; i < src.D[gi].rows.rows() && ok; ++i) {
        RowVec<K> a(src.D[gi].rows.row(i));
        RowVec<K> lhs = phi[r]->apply(src.alpha(g).apply(a));
        auto rhs = beta.alpha(g).try_apply(phi[d]->apply(a));
        if (!rhs || !is_zero(RowVec<K>(lhs - *rhs))) {
          ok = false;
          w = G.name(g);
        }
      }
    }
    rep.check("phi_{r(g)} . alpha_g = beta_g . phi_{d(g)} on D_{g^-1}", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int e : G.identities()) {
      Mat<K> sum(0, beta.R->dim());
      for (int h : G.xset(e)) {
        Mat<K> img(phi[G.source(h)]->img().rows(), beta.R->dim());
        bool applied = true;
        for (Index i = 0; i < img.rows(); ++i) {
          auto y = beta.alpha(h).try_apply(RowVec<K>(phi[G.source(h)]->img().row(i)));
          if (!y) {
            applied = false;
            break;
          }
          img.row(i) = *y;
        }
        if (!applied) {
          ok = false;
          break;
        }
        sum = vstack<K>(sum, img);
      }
      if (!ok || !subspace_eq(row_space<K>(sum), beta.D[e].rows)) {
        ok = false;
        w = G.name(e);
        break;
      }
    }
    rep.check("each component of T is the plain sum of the translated images", ok, w);
  }
  {
    Index total = 0;
    Mat<K> all(0, beta.R->dim());
    for (int e : G.identities()) {
      total += beta.D[e].dim();
      all = vstack<K>(all, beta.D[e].rows);
    }
    rep.check("T is the direct sum of its components",
              row_space<K>(all).rows() == total && total == beta.R->dim());
  }
  return rep;
}

template <typename K>
Globalization<K> build_globalization(const PartialAction<K>& A) {
  auto can = can_globalize(A);
  if (!can.ok) throw PreconditionError("cannot globalize: " + can.witness);

  const Groupoid& G = *A.G;
  const int n = A.R->dim(), m = G.size();
  std::vector<std::string> tags;
  for (int g = 0; g < m; ++g) tags.push_back(G.name(g));
  auto F = Algebra<K>::block_power(A.R, m, tags);

  // components: each E_e is generated (and in fact spanned) by the shifted
  // embeddings of the ideals at the sources of the fibre X_e
  std::vector<Mat<K>> component(G.identities().size());
  std::vector<RowVec<K>> unit_e(G.identities().size());
  bool units_ok = true;
  std::string unit_witness;
  bool bool_ok = true;
  std::string bool_witness;
  for (size_t s = 0; s < G.identities().size(); ++s) {
    const int e = G.identities()[s];
    std::vector<Mat<K>> fams;
    for (int h : G.xset(e)) {
      const int d = G.source(h);
      Mat<K> fam(A.D[d].rows.rows(), m * n);
      for (Index i = 0; i < fam.rows(); ++i)
        fam.row(i) = detail::shift_block<K>(G, n, h,
                                            detail::embed_block<K>(A, d, RowVec<K>(A.D[d].rows.row(i))));
      fams.push_back(std::move(fam));
    }
    auto cl = subalgebra_closure<K>(F, fams);
    component[s] = cl.rows;

    auto u = find_unit<K>(F, component[s]);
    if (!u) {
      units_ok = false;
      unit_witness = G.name(e);
      unit_e[s] = F->zero();
      continue;
    }
    unit_e[s] = *u;

    // the same unit as a boolean combination of the translated units
    std::vector<RowVec<K>> w;
    for (int h : G.xset(e))
      w.push_back(detail::shift_block<K>(
          G, n, h, detail::embed_block<K>(A, G.source(h), A.unit_of(G.source(h)))));
    RowVec<K> acc = F->zero();
    const size_t cnt = w.size();
    for (size_t mask = 1; mask < (size_t{1} << cnt); ++mask) {
      RowVec<K> prod(m * n);
      bool first = true;
      int bits = 0;
      for (size_t j = 0; j < cnt; ++j)
        if (mask & (size_t{1} << j)) {
          ++bits;
          prod = first ? w[j] : F->mul(prod, w[j]);
          first = false;
        }
      if (bits % 2 == 1)
        acc += prod;
      else
        acc -= prod;
    }
    if (bool_ok && !is_zero(RowVec<K>(acc - unit_e[s]))) {
      bool_ok = false;
      bool_witness = G.name(e);
    }
  }

  Mat<K> t_rows(0, m * n);
  std::vector<std::string> t_labels;
  for (size_t s = 0; s < G.identities().size(); ++s) {
    t_rows = vstack<K>(t_rows, component[s]);
    for (Index i = 0; i < component[s].rows(); ++i)
      t_labels.push_back(G.name(G.identities()[s]) + ":" + std::to_string(i + 1));
  }
  std::optional<RowVec<K>> t_unit;
  if (units_ok) {
    RowVec<K> u = F->zero();
    for (const auto& ue : unit_e) u += ue;
    t_unit = u;
  }
  auto T = Algebra<K>::subalgebra_on_rows(F, t_rows, t_labels, t_unit, "globalization");
  SpanSolver<K> into{t_rows};
  auto to_T = [&](const RowVec<K>& f) {
    auto c = into.coords(f);
    if (!c) throw InternalError("globalization: vector escaped T");
    return *c;
  };

  // beta on T: components are slot ranges of the concatenated basis
  std::map<std::string, Mat<K>> ideals, maps;
  std::vector<Mat<K>> comp_in_t(G.identities().size());
  {
    Index off = 0;
    for (size_t s = 0; s < G.identities().size(); ++s) {
      const Index k = component[s].rows();
      Mat<K> rows(k, T.alg->dim());
      rows.setZero();
      for (Index i = 0; i < k; ++i) rows(i, off + i) = A.R->one();
      comp_in_t[s] = std::move(rows);
      off += k;
    }
  }
  std::map<int, int> slot;
  for (size_t s = 0; s < G.identities().size(); ++s) slot[G.identities()[s]] = static_cast<int>(s);
  for (int g = 0; g < m; ++g) ideals[G.name(g)] = comp_in_t[slot[G.target(g)]];
  for (int g = 0; g < m; ++g) {
    if (G.is_identity(g)) continue;
    const Mat<K>& dom = comp_in_t[slot[G.source(g)]];
    Mat<K> img(dom.rows(), T.alg->dim());
    for (Index i = 0; i < dom.rows(); ++i) {
      RowVec<K> up = dom.row(i) * t_rows;
      img.row(i) = to_T(detail::shift_block<K>(G, n, g, up));
    }
    maps[G.name(g)] = img;
  }

  Globalization<K> Gl;
  Gl.source = A;
  Gl.beta = PartialAction<K>::make(A.G, T.alg, ideals, maps);
  Gl.t_in_f = t_rows;
  Gl.phi.resize(m);
  for (int e : G.identities()) {
    Mat<K> img(A.D[e].rows.rows(), T.alg->dim());
    for (Index i = 0; i < img.rows(); ++i)
      img.row(i) = to_T(detail::embed_block<K>(A, e, RowVec<K>(A.D[e].rows.row(i))));
    Gl.phi[e] = LinMap<K>(A.R, T.alg, A.D[e].rows, img);
  }

  if (standing_hypotheses(A).ok()) {
    Mat<K> dom(0, n), img(0, T.alg->dim());
    for (int e : G.identities()) {
      dom = vstack<K>(dom, A.D[e].rows);
      img = vstack<K>(img, Gl.phi[e]->img());
    }
    Gl.emb = LinMap<K>(A.R, T.alg, dom, img);
  }

  Gl.report = verify_globalization_axioms(A, Gl.beta, Gl.phi);
  Gl.report.check("each component of T has a unit", units_ok, unit_witness);
  if (units_ok)
    Gl.report.check("the component units are boolean sums of the translated units", bool_ok,
                    bool_witness);
  return Gl;
}

// Wrap externally supplied data (T, beta, phi) and verify it envelops src.
template <typename K>
Globalization<K> external_globalization(PartialAction<K> src, PartialAction<K> beta,
                                        std::vector<std::optional<LinMap<K>>> phi) {
  if (src.G != beta.G)
    throw StructuralError("the extended action must use the same groupoid object");
  if (static_cast<int>(phi.size()) != src.G->size())
    throw StructuralError("one phi slot per arrow is required");
  Globalization<K> Gl;
  Gl.source = std::move(src);
  Gl.beta = std::move(beta);
  Gl.phi = std::move(phi);
  Gl.t_in_f = Mat<K>(0, 0);
  Gl.report = verify_globalization_axioms(Gl.source, Gl.beta, Gl.phi);
  if (Gl.report.ok() && standing_hypotheses(Gl.source).ok()) {
    Mat<K> dom(0, Gl.source.R->dim()), img(0, Gl.beta.R->dim());
    for (int e : Gl.source.G->identities()) {
      dom = vstack<K>(dom, Gl.source.D[e].rows);
      img = vstack<K>(img, Gl.phi[e]->img());
    }
    Gl.emb = LinMap<K>(Gl.source.R, Gl.beta.R, dom, img);
  }
  return Gl;
}

// Restrict beta back to the embedded ideals and compare with the source
// action through phi, arrow by arrow.
template <typename K>
VerificationReport restriction_roundtrip(const Globalization<K>& Gl) {
  VerificationReport rep("restriction of the extended action");
  const Groupoid& G = *Gl.source.G;
  std::vector<Mat<K>> sub;
  for (int e : G.identities()) sub.push_back(Gl.phi[e]->image_space());
  auto res = restrict_action<K>(Gl.beta, sub);
  SpanSolver<K> carrier{res.carrier};

  bool dims_ok = true, ideals_ok = true, maps_ok = true;
  std::string dw, iw, mw;
  for (int g = 0; g < G.size(); ++g) {
    const int r = G.target(g), d = G.source(g), gi = G.inverse(g);
    Mat<K> upstairs = Gl.phi[r]->apply_rows(Gl.source.D[g].rows);
    Mat<K> lifted = res.action.D[g].rows * res.carrier;
    if (dims_ok && res.action.D[g].dim() != Gl.source.D[g].dim()) {
      dims_ok = false;
      dw = G.name(g);
    }
    if (ideals_ok && !subspace_eq(row_space<K>(upstairs), row_space<K>(lifted))) {
      ideals_ok = false;
      iw = G.name(g);
    }
    if (maps_ok) {
      for (Index i = 0; i < Gl.source.D[gi].rows.rows(); ++i) {
        RowVec<K> a(Gl.source.D[gi].rows.row(i));
        RowVec<K> want = Gl.phi[r]->apply(Gl.source.alpha(g).apply(a));
        auto down = carrier.coords(Gl.phi[d]->apply(a));
        if (!down) {
          maps_ok = false;
          mw = G.name(g);
          break;
        }
        auto moved = res.action.alpha(g).try_apply(*down);
        if (!moved || !is_zero(RowVec<K>(RowVec<K>(*moved * res.carrier) - want))) {
          maps_ok = false;
          mw = G.name(g);
          break;
        }
      }
    }
  }
  rep.check("restricted ideal dimensions match", dims_ok, dw);
  rep.check("restricted ideals are the embedded ideals", ideals_ok, iw);
  rep.check("restricted maps agree with the source action through phi", maps_ok, mw);
  return rep;
}

template <typename K>
struct Equivalence {
  VerificationReport report;
  std::optional<LinMap<K>> eta;  // certified isomorphism T_a -> T_b
};

// The canonical comparison map between two globalizations of the same
// action: generator beta_h(phi(v)) on one side goes to its twin on the
// other.  It is well defined precisely when generator relations match.
template <typename K>
Equivalence<K> globalization_equivalence(const Globalization<K>& a, const Globalization<K>& b) {
  if (a.source.G != b.source.G) throw StructuralError("globalizations of different groupoids");
  if (a.source.R->dim() != b.source.R->dim())
    throw StructuralError("globalizations of different algebras");
  for (int g = 0; g < a.source.G->size(); ++g)
    if (!mat_eq<K>(a.source.D[g].rows, b.source.D[g].rows))
      throw StructuralError("globalizations of different actions");

  Equivalence<K> out{VerificationReport("equivalence of globalizations"), std::nullopt};
  const Groupoid& G = *a.source.G;

  Mat<K> dom(0, a.T()->dim()), img(0, b.T()->dim());
  bool rel_ab = true, rel_ba = true;
  std::string wab, wba;
  for (int e : G.identities()) {
    Mat<K> gen_a(0, a.T()->dim()), gen_b(0, b.T()->dim());
    for (int h : G.xset(e)) {
      const int d = G.source(h);
      for (Index i = 0; i < a.source.D[d].rows.rows(); ++i) {
        RowVec<K> v(a.source.D[d].rows.row(i));
        gen_a = vstack<K>(gen_a, a.beta.alpha(h).apply(a.phi_at(d).apply(v)));
        gen_b = vstack<K>(gen_b, b.beta.alpha(h).apply(b.phi_at(d).apply(v)));
      }
    }
    Mat<K> ker_a = left_kernel<K>(gen_a), ker_b = left_kernel<K>(gen_b);
    for (Index i = 0; i < ker_a.rows() && rel_ab; ++i)
      if (!is_zero(RowVec<K>(ker_a.row(i) * gen_b))) {
        rel_ab = false;
        wab = G.name(e);
      }
    for (Index i = 0; i < ker_b.rows() && rel_ba; ++i)
      if (!is_zero(RowVec<K>(ker_b.row(i) * gen_a))) {
        rel_ba = false;
        wba = G.name(e);
      }
    if (rel_ab && rel_ba) {
      // pick an independent generating subset; images follow the same rows
      Mat<K> picked(0, a.T()->dim());
      for (Index i = 0; i < gen_a.rows(); ++i) {
        Mat<K> cand = vstack<K>(picked, Mat<K>(gen_a.row(i)));
        if (row_space<K>(cand).rows() > row_space<K>(picked).rows()) {
          picked = cand;
          dom = vstack<K>(dom, gen_a.row(i));
          img = vstack<K>(img, gen_b.row(i));
        }
      }
    }
  }
  out.report.check("relations among generators carry forward", rel_ab, wab);
  out.report.check("relations among generators carry backward", rel_ba, wba);
  if (!out.report.ok()) return out;

  LinMap<K> eta(a.T(), b.T(), dom, img);
  out.report.check("the comparison map is defined on all of T",
                   subspace_eq(eta.domain_space(), row_space<K>(a.T()->full_rows())));
  out.report.check("the comparison map covers the other T",
                   subspace_eq(eta.image_space(), row_space<K>(b.T()->full_rows())));
  {
    auto sub = verify_ring_iso(eta, eta.domain_space(), eta.image_space(), "eta");
    out.report.check("the comparison map is a ring isomorphism", sub.ok(), sub.first_failure());
  }
  {
    bool ok = true;
    std::string w;
    for (int g = 0; g < G.size() && ok; ++g) {
      const Mat<K>& dome = a.beta.D[G.source(g)].rows;
      for (Index i = 0; i < dome.rows() && ok; ++i) {
        RowVec<K> x(dome.row(i));
        auto lhs = b.beta.alpha(g).try_apply(eta.apply(x));
        auto mid = a.beta.alpha(g).try_apply(x);
        std::optional<RowVec<K>> rhs;
        if (mid) rhs = eta.try_apply(*mid);
        if (!lhs || !rhs || !is_zero(RowVec<K>(*lhs - *rhs))) {
          ok = false;
          w = G.name(g);
        }
      }
    }
    out.report.check("the comparison map intertwines the extended actions", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int e : G.identities()) {
      for (Index i = 0; i < a.source.D[e].rows.rows(); ++i) {
        RowVec<K> v(a.source.D[e].rows.row(i));
        if (!is_zero(RowVec<K>(eta.apply(a.phi_at(e).apply(v)) - b.phi_at(e).apply(v)))) {
          ok = false;
          w = G.name(e);
          break;
        }
      }
    }
    out.report.check("the comparison map matches the embeddings", ok, w);
  }
  if (out.report.ok()) out.eta = eta;
  return out;
}

}  // namespace pgact

#endif
