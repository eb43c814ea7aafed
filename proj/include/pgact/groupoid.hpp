#ifndef PGACT_GROUPOID_HPP
#define PGACT_GROUPOID_HPP

// Finite groupoids given by an explicit partial composition table.  A table
// is verified eagerly; every downstream structure holds a verified Groupoid.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pgact/report.hpp"

namespace pgact {

struct GroupoidTable {
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> inverses;           // (g, g^{-1})
  std::vector<std::tuple<std::string, std::string, std::string>> compositions;  // (g, h, gh)
};

class Groupoid {
 public:
  using Ptr = std::shared_ptr<const Groupoid>;

  // Full axiom scan.  Structural findings (unknown names, duplicate rows,
  // a composition declared although source and target do not match) are
  // flagged as structural; everything else is a mathematical verdict.
  static VerificationReport verify(const GroupoidTable& t) {
    VerificationReport rep("groupoid table");
    Groupoid g;
    build_raw(t, g, rep);
    if (!rep.ok()) return rep;
    g.verify_axioms(rep);
    return rep;
  }

  static Ptr make(const GroupoidTable& t) {
    VerificationReport rep("groupoid table");
    auto g = std::make_shared<Groupoid>();
    build_raw(t, *g, rep);
    if (rep.ok()) g->verify_axioms(rep);
    if (!rep.ok()) {
      if (rep.structural_failure()) throw StructuralError("groupoid table: " + rep.first_failure());
      throw PreconditionError("groupoid axioms fail: " + rep.first_failure());
    }
    g->cache_derived();
    g->table_ = t;
    return g;
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int g) const { return names_[g]; }
  const std::vector<std::string>& names() const { return names_; }
  int index(const std::string& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw StructuralError("unknown groupoid element '" + s + "'");
    return it->second;
  }

  bool composable(int g, int h) const { return compose_[g * size() + h] >= 0; }
  int compose(int g, int h) const {
    const int k = compose_[g * size() + h];
    if (k < 0)
      throw StructuralError("composition " + names_[g] + "*" + names_[h] + " is undefined");
    return k;
  }
  int inverse(int g) const { return inverse_[g]; }
  int source(int g) const { return source_[g]; }  // d(g)
  int target(int g) const { return target_[g]; }  // r(g)

  const std::vector<int>& identities() const { return identities_; }
  bool is_identity(int g) const { return source_[g] == g && target_[g] == g; }
  // Position of the identity e inside identities().
  int identity_slot(int e) const {
    for (size_t i = 0; i < identities_.size(); ++i)
      if (identities_[i] == e) return static_cast<int>(i);
    throw StructuralError(names_[e] + " is not an identity");
  }

  const std::vector<std::pair<int, int>>& composable_pairs() const { return pairs_; }

  // Isotropy group of the identity e, in declaration order.
  std::vector<int> isotropy(int e) const {
    std::vector<int> iso;
    for (int g = 0; g < size(); ++g)
      if (source_[g] == e && target_[g] == e) iso.push_back(g);
    return iso;
  }

  // X_e = all arrows with target e, in declaration order except that e
  // itself always comes first.  This enumeration is the one fixed by every
  // construction that sums over X_e.
  const std::vector<int>& xset(int e) const { return xsets_.at(e); }
  // Same set with target r(g) for an arbitrary arrow.
  const std::vector<int>& xset_of_arrow(int g) const { return xsets_.at(target_[g]); }

  const GroupoidTable& table() const { return table_; }

  // Table of a finite group given by a multiplication callback on 0..n-1.
  static GroupoidTable group_table(int n, const std::function<int(int, int)>& mul,
                                   const std::string& prefix = "a") {
    GroupoidTable t;
    for (int i = 0; i < n; ++i) t.elements.push_back(prefix + std::to_string(i));
    std::vector<int> inv(n, -1);
    int e = -1;
    for (int i = 0; i < n; ++i) {
      bool id = true;
      for (int j = 0; j < n; ++j) id = id && mul(i, j) == j && mul(j, i) == j;
      if (id) e = i;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        t.compositions.emplace_back(t.elements[i], t.elements[j], t.elements[mul(i, j)]);
        if (mul(i, j) == e) inv[i] = j;
      }
    for (int i = 0; i < n; ++i) t.inverses.emplace_back(t.elements[i], t.elements[inv[i]]);
    return t;
  }

  static GroupoidTable disjoint_union(const std::vector<GroupoidTable>& parts) {
    GroupoidTable t;
    int k = 0;
    for (const auto& p : parts) {
      const std::string tag = "c" + std::to_string(k++) + "_";
      for (const auto& e : p.elements) t.elements.push_back(tag + e);
      for (const auto& [a, b] : p.inverses) t.inverses.emplace_back(tag + a, tag + b);
      for (const auto& [a, b, c] : p.compositions)
        t.compositions.emplace_back(tag + a, tag + b, tag + c);
    }
    return t;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::vector<int> compose_;  // n*n, -1 when undefined
  std::vector<int> inverse_, source_, target_;
  std::vector<int> identities_;
  std::vector<std::pair<int, int>> pairs_;
  std::map<int, std::vector<int>> xsets_;
  GroupoidTable table_;

  static void build_raw(const GroupoidTable& t, Groupoid& g, VerificationReport& rep) {
    g.names_ = t.elements;
    for (int i = 0; i < g.size(); ++i) {
      if (!g.index_.emplace(g.names_[i], i).second) {
        rep.fail("distinct element names", "'" + g.names_[i] + "' declared twice", true);
        return;
      }
    }
    if (g.size() == 0) {
      rep.fail("nonempty element list", "no elements", true);
      return;
    }
    auto lookup = [&](const std::string& s) -> int {
      auto it = g.index_.find(s);
      if (it == g.index_.end()) {
        rep.fail("known element names", "'" + s + "' is not declared", true);
        return -1;
      }
      return it->second;
    };

    const int n = g.size();
    g.compose_.assign(n * n, -1);
    for (const auto& [a, b, c] : t.compositions) {
      const int i = lookup(a), j = lookup(b), k = lookup(c);
      if (i < 0 || j < 0 || k < 0) return;
      if (g.compose_[i * n + j] >= 0) {
        rep.fail("single-valued composition", a + "*" + b + " declared twice", true);
        return;
      }
      g.compose_[i * n + j] = k;
    }

    g.inverse_.assign(n, -1);
    for (const auto& [a, b] : t.inverses) {
      const int i = lookup(a), j = lookup(b);
      if (i < 0 || j < 0) return;
      if (g.inverse_[i] >= 0) {
        rep.fail("single-valued inverse", a + " has two declared inverses", true);
        return;
      }
      g.inverse_[i] = j;
    }
    for (int i = 0; i < n; ++i)
      if (g.inverse_[i] < 0) {
        rep.fail("total inverse map", g.names_[i] + " has no declared inverse", true);
        return;
      }

    // Candidate source and target: d(g) is the unique e with g*e = g, and
    // r(g) the unique e with e*g = g.
    g.source_.assign(n, -1);
    g.target_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      std::vector<int> ds, rs;
      for (int e = 0; e < n; ++e) {
        if (g.compose_[i * n + e] == i) ds.push_back(e);
        if (g.compose_[e * n + i] == i) rs.push_back(e);
      }
      if (ds.size() != 1) {
        rep.fail("unique right identity d(g)",
                 g.names_[i] + " has " + std::to_string(ds.size()) + " candidates");
        return;
      }
      if (rs.size() != 1) {
        rep.fail("unique left identity r(g)",
                 g.names_[i] + " has " + std::to_string(rs.size()) + " candidates");
        return;
      }
      g.source_[i] = ds[0];
      g.target_[i] = rs[0];
    }
    rep.pass("unique right identity d(g)");
    rep.pass("unique left identity r(g)");

    // Compositions outside the source/target discipline are malformed input
    // rather than a failed axiom.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (g.compose_[i * n + j] >= 0 && g.source_[i] != g.target_[j]) {
          rep.fail("compositions respect d(g) = r(h)",
                   g.names_[i] + "*" + g.names_[j] + " declared although d(" + g.names_[i] +
                       ") != r(" + g.names_[j] + ")",
                   true);
          return;
        }
    rep.pass("compositions respect d(g) = r(h)");
  }

  void verify_axioms(VerificationReport& rep) const {
    const int n = size();
    auto nm = [&](int i) { return names_[i]; };

    // Matching source/target forces the composition to exist.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (source_[i] == target_[j] && compose_[i * n + j] < 0) {
          rep.fail("composition defined whenever d(g) = r(h)", nm(i) + "*" + nm(j) + " missing");
          return;
        }
    rep.pass("composition defined whenever d(g) = r(h)");

    // Both associativity conditions: existence patterns and equality.
    for (int i = 0; i < n && rep.ok(); ++i)
      for (int j = 0; j < n && rep.ok(); ++j)
        for (int k = 0; k < n; ++k) {
          const bool ij = compose_[i * n + j] >= 0;
          const bool jk = compose_[j * n + k] >= 0;
          const bool lhs = ij && compose_[compose_[i * n + j] * n + k] >= 0;
          const bool rhs = jk && compose_[i * n + compose_[j * n + k]] >= 0;
          const std::string triple = nm(i) + "," + nm(j) + "," + nm(k);
          if (lhs != rhs) {
            rep.fail("associativity: (gh)l exists iff g(hl) exists", triple);
            break;
          }
          if (rhs != (ij && jk)) {
            rep.fail("associativity: g(hl) exists iff gh and hl exist", triple);
            break;
          }
          if (lhs && compose_[compose_[i * n + j] * n + k] != compose_[i * n + compose_[j * n + k]]) {
            rep.fail("associativity: (gh)l = g(hl)", triple);
            break;
          }
        }
    if (!rep.ok()) return;
    rep.pass("associativity: (gh)l exists iff g(hl) exists");
    rep.pass("associativity: g(hl) exists iff gh and hl exist");
    rep.pass("associativity: (gh)l = g(hl)");

    for (int i = 0; i < n; ++i) {
      const int v = inverse_[i];
      if (compose_[v * n + i] != source_[i]) {
        rep.fail("inverse satisfies g^{-1}g = d(g)", "(" + nm(i) + "," + nm(i) + ")");
        return;
      }
      if (compose_[i * n + v] != target_[i]) {
        rep.fail("inverse satisfies gg^{-1} = r(g)", "(" + nm(i) + "," + nm(i) + ")");
        return;
      }
      if (inverse_[v] != i) {
        rep.fail("inverse is an involution", nm(i));
        return;
      }
    }
    rep.pass("inverse satisfies g^{-1}g = d(g)");
    rep.pass("inverse satisfies gg^{-1} = r(g)");
    rep.pass("inverse is an involution");

    // Consequences of the axioms, re-checked as invariants.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (compose_[i * n + j] < 0) continue;
        const int ij = compose_[i * n + j];
        if (source_[ij] != source_[j] || target_[ij] != target_[i]) {
          rep.fail("d(gh) = d(h) and r(gh) = r(g)", nm(i) + "*" + nm(j));
          return;
        }
        if (compose_[inverse_[j] * n + inverse_[i]] != inverse_[ij]) {
          rep.fail("(gh)^{-1} = h^{-1}g^{-1}", nm(i) + "*" + nm(j));
          return;
        }
      }
    rep.pass("d(gh) = d(h) and r(gh) = r(g)");
    rep.pass("(gh)^{-1} = h^{-1}g^{-1}");

    for (int e = 0; e < n; ++e) {
      if (!(source_[e] == e && target_[e] == e)) continue;
      if (compose_[e * n + e] != e || inverse_[e] != e) {
        rep.fail("identities are idempotent self-inverse", nm(e));
        return;
      }
    }
    rep.pass("identities are idempotent self-inverse");

    // Isotropy sets are groups.
    for (int e = 0; e < n; ++e) {
      if (!(source_[e] == e && target_[e] == e)) continue;
      std::set<int> iso;
      for (int i = 0; i < n; ++i)
        if (source_[i] == e && target_[i] == e) iso.insert(i);
      for (int a : iso) {
        if (!iso.count(inverse_[a])) {
          rep.fail("isotropy closed under inverse", nm(a));
          return;
        }
        for (int b : iso)
          if (!iso.count(compose_[a * n + b])) {
            rep.fail("isotropy closed under composition", nm(a) + "*" + nm(b));
            return;
          }
      }
    }
    rep.pass("isotropy closed under inverse");
    rep.pass("isotropy closed under composition");

    // h -> gh is a bijection from arrows into d(g) onto arrows into r(g).
    for (int i = 0; i < n; ++i) {
      std::set<int> image;
      int domain = 0;
      for (int h = 0; h < n; ++h)
        if (target_[h] == source_[i]) {
          ++domain;
          image.insert(compose_[i * n + h]);
        }
      int codomain = 0;
      for (int h = 0; h < n; ++h)
        if (target_[h] == target_[i]) ++codomain;
      if (static_cast<int>(image.size()) != domain || domain != codomain) {
        rep.fail("left translation is a bijection between target fibres", nm(i));
        return;
      }
      for (int h : image)
        if (target_[h] != target_[i]) {
          rep.fail("left translation is a bijection between target fibres", nm(i));
          return;
        }
    }
    rep.pass("left translation is a bijection between target fibres");
  }

  void cache_derived() {
    const int n = size();
    for (int e = 0; e < n; ++e)
      if (is_identity(e)) identities_.push_back(e);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (compose_[i * n + j] >= 0) pairs_.emplace_back(i, j);
    for (int e : identities_) {
      std::vector<int> xs{e};
      for (int h = 0; h < n; ++h)
        if (h != e && target_[h] == e) xs.push_back(h);
      xsets_[e] = std::move(xs);
    }
  }
};

}  // namespace pgact

#endif
