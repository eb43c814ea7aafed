#ifndef PGACT_FIXTURES_HPP
#define PGACT_FIXTURES_HPP

// Named reference instances used across the test suite and exposed through
// the command line.  All of them act on coordinate rings, so ideals are
// coordinate subspaces and the maps permute or embed coordinates.

#include <map>
#include <string>
#include <vector>

#include "pgact/action.hpp"

namespace pgact {

// dg --g--> rg with inverse gi; two identity arrows.
inline Groupoid::Ptr fixture_groupoid_arrow() {
  GroupoidTable t;
  t.elements = {"dg", "rg", "g", "gi"};
  t.inverses = {{"dg", "dg"}, {"rg", "rg"}, {"g", "gi"}, {"gi", "g"}};
  t.compositions = {{"dg", "dg", "dg"}, {"rg", "rg", "rg"}, {"g", "dg", "g"}, {"rg", "g", "g"},
                    {"gi", "rg", "gi"}, {"dg", "gi", "gi"}, {"g", "gi", "rg"}, {"gi", "g", "dg"}};
  return Groupoid::make(t);
}

// two identities g1, g2 and one loop g3 at g2 with g3*g3 = g2.
inline Groupoid::Ptr fixture_groupoid_loop() {
  GroupoidTable t;
  t.elements = {"g1", "g2", "g3"};
  t.inverses = {{"g1", "g1"}, {"g2", "g2"}, {"g3", "g3"}};
  t.compositions = {
      {"g1", "g1", "g1"}, {"g2", "g2", "g2"}, {"g2", "g3", "g3"}, {"g3", "g2", "g3"},
      {"g3", "g3", "g2"}};
  return Groupoid::make(t);
}

inline std::vector<std::string> fixture_names() {
  return {"FX-A", "FX-B", "FX-C", "FX-D", "FX-E"};
}

namespace detail {

template <typename K>
Mat<K> coords(int n, std::initializer_list<int> idx, const K& one) {
  Mat<K> m(static_cast<Index>(idx.size()), n);
  m.setZero();
  Index r = 0;
  for (int i : idx) m(r++, i) = one;
  return m;
}

}  // namespace detail

template <typename K>
PartialAction<K> fixture_action(const std::string& name, const K& one) {
  using detail::coords;
  if (name == "FX-A") {
    auto G = fixture_groupoid_arrow();
    auto R = Algebra<K>::coordinate_ring(3, one);
    std::map<std::string, Mat<K>> ideals, maps;
    ideals["dg"] = coords<K>(3, {0, 1}, one);
    ideals["rg"] = coords<K>(3, {2}, one);
    ideals["g"] = coords<K>(3, {2}, one);
    ideals["gi"] = coords<K>(3, {0}, one);
    maps["g"] = coords<K>(3, {2}, one);   // e1 -> e3
    maps["gi"] = coords<K>(3, {0}, one);  // e3 -> e1
    return PartialAction<K>::make(G, R, ideals, maps);
  }
  if (name == "FX-B") {
    auto G = fixture_groupoid_arrow();
    auto R = Algebra<K>::coordinate_ring(5, one);
    std::map<std::string, Mat<K>> ideals, maps;
    ideals["dg"] = coords<K>(5, {0, 1}, one);
    ideals["rg"] = coords<K>(5, {2, 3, 4}, one);
    ideals["g"] = coords<K>(5, {2, 3}, one);
    ideals["gi"] = coords<K>(5, {0, 1}, one);
    maps["g"] = coords<K>(5, {2, 3}, one);   // e1 -> e3, e2 -> e4
    maps["gi"] = coords<K>(5, {0, 1}, one);  // e3 -> e1, e4 -> e2
    return PartialAction<K>::make(G, R, ideals, maps);
  }
  if (name == "FX-C") {
    auto G = fixture_groupoid_loop();
    auto R = Algebra<K>::coordinate_ring(4, one);
    std::map<std::string, Mat<K>> ideals, maps;
    ideals["g1"] = coords<K>(4, {0, 1, 2, 3}, one);
    ideals["g2"] = coords<K>(4, {1, 2, 3}, one);
    ideals["g3"] = coords<K>(4, {1, 2}, one);
    maps["g3"] = coords<K>(4, {2, 1}, one);  // swap e2, e3
    return PartialAction<K>::make(G, R, ideals, maps);
  }
  if (name == "FX-D") {
    auto G = fixture_groupoid_loop();
    auto R = Algebra<K>::coordinate_ring(5, one);
    std::map<std::string, Mat<K>> ideals, maps;
    ideals["g1"] = coords<K>(5, {0, 1}, one);
    ideals["g2"] = coords<K>(5, {2, 3, 4}, one);
    ideals["g3"] = coords<K>(5, {2, 3}, one);
    maps["g3"] = coords<K>(5, {3, 2}, one);  // swap e3, e4
    return PartialAction<K>::make(G, R, ideals, maps);
  }
  if (name == "FX-E") {
    GroupoidTable t;
    t.elements = {"e"};
    t.inverses = {{"e", "e"}};
    t.compositions = {{"e", "e", "e"}};
    auto G = Groupoid::make(t);
    auto R = Algebra<K>::coordinate_ring(2, one);
    std::map<std::string, Mat<K>> ideals, maps;
    ideals["e"] = coords<K>(2, {0, 1}, one);
    return PartialAction<K>::make(G, R, ideals, maps);
  }
  throw StructuralError("unknown fixture: " + name);
}

}  // namespace pgact

#endif
