#ifndef PGACT_RANDOM_INSTANCES_HPP
#define PGACT_RANDOM_INSTANCES_HPP

// Seeded generator for verified partial actions.  A random groupoid is a
// disjoint union of components, each a pair groupoid over its objects times
// a cyclic isotropy group.  The groupoid translates on the coordinate ring
// of its own arrow set; cutting that carrier down to a random coordinate
// subset leaves a partial action that keeps every domain ideal unital and
// splits the ring over the identities, so the whole family stays inside
// the standing hypotheses by construction.

#include <random>
#include <string>
#include <vector>

#include "pgact/action.hpp"
#include "pgact/algebra.hpp"
#include "pgact/groupoid.hpp"

namespace pgact {

struct GeneratorCaps {
  int max_identities = 3;
  int max_arrows = 8;
  int max_cyclic = 4;
  double keep = 0.65;  // survival probability for each carrier coordinate
};

namespace detail_rand {

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace detail_rand

inline Groupoid::Ptr random_groupoid(std::mt19937_64& rng, const GeneratorCaps& caps) {
  using detail_rand::pick;
  GroupoidTable t;
  int arrows_left = caps.max_arrows;
  int objects_left = caps.max_identities;
  int next_object = 0;
  for (int comp = 0; objects_left > 0 && arrows_left > 0; ++comp) {
    const int m_max = std::min(objects_left, arrows_left >= 4 ? 2 : 1);
    const int m = pick(rng, 1, m_max);
    const int c = pick(rng, 1, std::min(caps.max_cyclic, arrows_left / (m * m)));
    const int base = next_object;
    next_object += m;
    objects_left -= m;
    arrows_left -= m * m * c;

    auto nm = [&](int z, int i, int j) {
      if (z == 0 && i == j) return "e" + std::to_string(base + i);
      return "a" + std::to_string(comp) + "_" + std::to_string(i) + std::to_string(j) + "_" +
             std::to_string(z);
    };
    for (int z = 0; z < c; ++z)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          t.elements.push_back(nm(z, i, j));
          t.inverses.emplace_back(nm(z, i, j), nm((c - z) % c, j, i));
        }
    for (int z = 0; z < c; ++z)
      for (int zz = 0; zz < c; ++zz)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l)
              t.compositions.emplace_back(nm(z, i, j), nm(zz, j, l), nm((z + zz) % c, i, l));

    if (pick(rng, 0, 2) == 0) break;
  }
  return Groupoid::make(t);
}

// Left translation on the coordinate ring of the kept arrow subset.
template <typename K>
PartialAction<K> random_action(std::mt19937_64& rng, const GeneratorCaps& caps, const K& one) {
  using detail_rand::pick;
  auto G = random_groupoid(rng, caps);
  const int N = G->size();

  std::vector<int> slot(N, -1);  // arrow -> kept coordinate, -1 when dropped
  std::vector<int> kept;
  std::bernoulli_distribution survive(caps.keep);
  for (int h = 0; h < N; ++h)
    if (survive(rng)) {
      slot[h] = static_cast<int>(kept.size());
      kept.push_back(h);
    }
  if (kept.empty()) {
    const int h = pick(rng, 0, N - 1);
    slot[h] = 0;
    kept.push_back(h);
  }
  const int n = static_cast<int>(kept.size());
  auto R = Algebra<K>::coordinate_ring(n, one, "c");

  std::map<std::string, Mat<K>> ideals, maps;
  for (int g = 0; g < N; ++g) {
    std::vector<int> dom;  // coordinates of D_{g^-1}, ascending
    for (int s = 0; s < n; ++s) {
      const int h = kept[s];
      if (G->target(h) != G->source(g)) continue;
      if (slot[G->compose(g, h)] < 0) continue;
      dom.push_back(s);
    }
    Mat<K> drows(static_cast<Index>(dom.size()), n), irows(static_cast<Index>(dom.size()), n);
    drows.setZero();
    irows.setZero();
    for (size_t k = 0; k < dom.size(); ++k) {
      drows(static_cast<Index>(k), dom[k]) = one;
      irows(static_cast<Index>(k), slot[G->compose(g, kept[dom[k]])]) = one;
    }
    ideals[G->name(G->inverse(g))] = drows;
    if (!G->is_identity(g)) maps[G->name(g)] = irows;
  }
  return PartialAction<K>::make(G, R, ideals, maps);
}

}  // namespace pgact

#endif
