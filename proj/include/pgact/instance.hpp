#ifndef PGACT_INSTANCE_HPP
#define PGACT_INSTANCE_HPP

// Line-based interchange format "pgact-instance v1".
//
//   pgact-instance v1
//   field rational            (or: field fp 7)
//   groupoid
//     elements dg rg g gi
//     inverse g gi
//     compose g gi rg
//   end
//   algebra
//     coordinate-ring 4       (or: labels/unit/product lines)
//   end
//   action
//     ideal g 0 0 1 0
//     map g 0 1 0 0
//   end
//
// Optional sections: galois-system (alternating x/y rows), module <name>
// <dim> with one act row per skew-ring basis element, and globalization
// (nested algebra + action over the extension ring, then phi rows).
// Lines whose first token starts with '#' are comments.  Ideal rows are
// normalized to a reduced echelon basis on load; map and phi rows pair
// with that stored basis, row by row.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pgact/action.hpp"
#include "pgact/algebra.hpp"
#include "pgact/galois.hpp"
#include "pgact/globalize.hpp"
#include "pgact/groupoid.hpp"
#include "pgact/report.hpp"
#include "pgact/scalar.hpp"
#include "pgact/skewring.hpp"

namespace pgact {

struct FieldSpec {
  bool rational = true;
  long long p = 0;

  std::string text() const { return rational ? "rational" : "fp " + std::to_string(p); }
};

inline FieldSpec field_of(const Rational&) { return {}; }
inline FieldSpec field_of(const Fp& x) {
  FieldSpec f;
  f.rational = false;
  f.p = x.modulus();
  return f;
}

template <typename K>
struct GlobalizationBlock {
  PartialAction<K> beta;           // global action on the extension ring
  std::map<std::string, Mat<K>> phi;  // identity name -> images of the D_e basis
};

template <typename K>
struct Instance {
  FieldSpec field;
  Groupoid::Ptr G;
  typename Algebra<K>::Ptr R;
  std::optional<PartialAction<K>> action;
  std::optional<GaloisSystem<K>> system;
  std::vector<ModuleSpec<K>> modules;
  std::optional<GlobalizationBlock<K>> globalization;
};

namespace detail_io {

struct Line {
  int no = 0;
  std::vector<std::string> tok;
};

[[noreturn]] inline void fail(int line, const std::string& msg) {
  throw StructuralError("line " + std::to_string(line) + ": " + msg);
}

inline std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    std::istringstream ls(raw);
    Line l;
    l.no = no;
    std::string t;
    while (ls >> t) l.tok.push_back(t);
    if (l.tok.empty() || l.tok[0][0] == '#') continue;
    out.push_back(std::move(l));
  }
  return out;
}

struct Cursor {
  std::vector<Line> lines;
  size_t at = 0;
  int last_line = 0;

  bool done() const { return at >= lines.size(); }
  const Line& peek() const { return lines[at]; }
  Line next() {
    if (done()) fail(last_line, "unexpected end of file");
    last_line = lines[at].no;
    return lines[at++];
  }
};

template <typename K>
RowVec<K> parse_row(const Line& l, size_t from, Index want, const K& one) {
  if (static_cast<Index>(l.tok.size()) - static_cast<Index>(from) != want)
    fail(l.no, "expected " + std::to_string(want) + " entries, found " +
                   std::to_string(l.tok.size() - from));
  RowVec<K> v(want);
  for (Index i = 0; i < want; ++i) {
    try {
      v(i) = parse_scalar(l.tok[from + static_cast<size_t>(i)], one);
    } catch (const std::exception& ex) {
      fail(l.no, ex.what());
    }
  }
  return v;
}

template <typename K>
Mat<K> stack_rows(const std::vector<RowVec<K>>& rows, Index width) {
  Mat<K> m(static_cast<Index>(rows.size()), width);
  for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Index>(i)) = rows[i];
  return m;
}

inline int parse_count(const Line& l, size_t slot, const std::string& what) {
  try {
    const int n = std::stoi(l.tok.at(slot));
    if (n < 0) fail(l.no, what + " cannot be negative");
    return n;
  } catch (const StructuralError&) {
    throw;
  } catch (const std::exception&) {
    fail(l.no, "cannot read " + what + " '" + (slot < l.tok.size() ? l.tok[slot] : "") + "'");
  }
}

inline GroupoidTable collect_groupoid_table(Cursor& cur) {
  GroupoidTable t;
  bool have_elements = false;
  while (true) {
    Line l = cur.next();
    const std::string& head = l.tok[0];
    if (head == "end") break;
    if (head == "elements") {
      if (have_elements) fail(l.no, "duplicate elements line");
      t.elements.assign(l.tok.begin() + 1, l.tok.end());
      have_elements = true;
    } else if (head == "inverse") {
      if (l.tok.size() != 3) fail(l.no, "inverse lines name two arrows");
      t.inverses.emplace_back(l.tok[1], l.tok[2]);
    } else if (head == "compose") {
      if (l.tok.size() != 4) fail(l.no, "compose lines name three arrows");
      t.compositions.emplace_back(l.tok[1], l.tok[2], l.tok[3]);
    } else {
      fail(l.no, "unknown groupoid entry '" + head + "'");
    }
  }
  if (!have_elements) fail(cur.last_line, "groupoid section has no elements line");
  return t;
}

inline Groupoid::Ptr parse_groupoid_section(Cursor& cur) {
  return Groupoid::make(collect_groupoid_table(cur));
}

template <typename K>
typename Algebra<K>::Ptr parse_algebra_section(Cursor& cur, const K& one) {
  std::vector<std::string> labels;
  std::map<std::string, int> by_label;
  std::map<std::pair<int, int>, RowVec<K>> prods;
  std::optional<RowVec<K>> unit;
  auto look = [&](const Line& l, const std::string& s) {
    auto it = by_label.find(s);
    if (it == by_label.end()) fail(l.no, "unknown basis label '" + s + "'");
    return it->second;
  };
  while (true) {
    Line l = cur.next();
    const std::string& head = l.tok[0];
    if (head == "end") break;
    if (head == "coordinate-ring") {
      const int n = parse_count(l, 1, "coordinate count");
      Line e = cur.next();
      if (e.tok[0] != "end") fail(e.no, "coordinate-ring stands alone in its section");
      return Algebra<K>::coordinate_ring(n, one);
    }
    if (head == "labels") {
      if (!labels.empty()) fail(l.no, "duplicate labels line");
      labels.assign(l.tok.begin() + 1, l.tok.end());
      for (size_t i = 0; i < labels.size(); ++i) {
        if (!by_label.emplace(labels[i], static_cast<int>(i)).second)
          fail(l.no, "repeated basis label '" + labels[i] + "'");
      }
    } else if (head == "unit") {
      if (labels.empty()) fail(l.no, "unit line before labels");
      unit = parse_row<K>(l, 1, static_cast<Index>(labels.size()), one);
    } else if (head == "product") {
      if (labels.empty()) fail(l.no, "product line before labels");
      if (l.tok.size() < 3) fail(l.no, "product lines name two factors");
      const int i = look(l, l.tok[1]), j = look(l, l.tok[2]);
      prods[{i, j}] = parse_row<K>(l, 3, static_cast<Index>(labels.size()), one);
    } else {
      fail(l.no, "unknown algebra entry '" + head + "'");
    }
  }
  if (labels.empty()) fail(cur.last_line, "algebra section has no labels");
  try {
    return Algebra<K>::make(labels, prods, one, unit);
  } catch (const StructuralError& ex) {
    fail(cur.last_line, ex.what());
  }
}

// Shared by the top-level action and the one inside a globalization block.
template <typename K>
PartialAction<K> parse_action_section(Cursor& cur, const Groupoid::Ptr& G,
                                      const typename Algebra<K>::Ptr& R, const K& one) {
  const Index n = R->dim();
  std::map<std::string, std::vector<RowVec<K>>> ideal_rows, map_rows;
  std::map<std::string, int> identity_map_line;
  auto arrow_of = [&](const Line& l, const std::string& s) {
    try {
      G->index(s);
    } catch (const std::exception&) {
      fail(l.no, "unknown arrow '" + s + "'");
    }
    return s;
  };
  while (true) {
    Line l = cur.next();
    const std::string& head = l.tok[0];
    if (head == "end") break;
    if (l.tok.size() < 2) fail(l.no, "action entries name an arrow");
    const std::string g = arrow_of(l, l.tok[1]);
    if (head == "ideal") {
      ideal_rows[g].push_back(parse_row<K>(l, 2, n, one));
    } else if (head == "map") {
      if (l.tok.size() == 3 && l.tok[2] == "identity") {
        if (!G->is_identity(G->index(g)))
          fail(l.no, "'map " + g + " identity' needs an identity arrow");
        identity_map_line[g] = l.no;
      } else {
        map_rows[g].push_back(parse_row<K>(l, 2, n, one));
      }
    } else {
      fail(l.no, "unknown action entry '" + head + "'");
    }
  }
  for (const auto& [g, line] : identity_map_line)
    if (map_rows.count(g)) fail(line, "arrow " + g + " mixes 'identity' with explicit map rows");

  std::map<std::string, Mat<K>> ideals, maps;
  for (int g = 0; g < G->size(); ++g) {
    const std::string& nm = G->name(g);
    auto it = ideal_rows.find(nm);
    ideals[nm] = it == ideal_rows.end() ? Mat<K>(0, n) : stack_rows(it->second, n);
  }
  for (const auto& [g, rows] : map_rows) maps[g] = stack_rows(rows, n);
  for (int g = 0; g < G->size(); ++g) {
    const std::string& nm = G->name(g);
    if (G->is_identity(g) || maps.count(nm)) continue;
    if (ideals[G->name(G->inverse(g))].rows() != 0)
      fail(cur.last_line, "no map rows for arrow " + nm);
    maps[nm] = Mat<K>(0, n);
  }
  try {
    return PartialAction<K>::make(G, R, ideals, maps);
  } catch (const StructuralError& ex) {
    fail(cur.last_line, ex.what());
  }
}

template <typename K>
GaloisSystem<K> parse_system_section(Cursor& cur, const typename Algebra<K>::Ptr& R,
                                     const K& one) {
  const Index n = R->dim();
  std::vector<RowVec<K>> xs, ys;
  while (true) {
    Line l = cur.next();
    const std::string& head = l.tok[0];
    if (head == "end") break;
    if (head == "x")
      xs.push_back(parse_row<K>(l, 1, n, one));
    else if (head == "y")
      ys.push_back(parse_row<K>(l, 1, n, one));
    else
      fail(l.no, "unknown galois-system entry '" + head + "'");
  }
  if (xs.size() != ys.size()) fail(cur.last_line, "unpaired coordinate rows");
  return GaloisSystem<K>{stack_rows(xs, n), stack_rows(ys, n)};
}

template <typename K>
ModuleSpec<K> parse_module_section(Cursor& cur, const Line& header, const K& one) {
  if (header.tok.size() != 3) fail(header.no, "module lines read: module <name> <dim>");
  ModuleSpec<K> M;
  M.name = header.tok[1];
  M.dim = parse_count(header, 2, "module dimension");
  while (true) {
    Line l = cur.next();
    if (l.tok[0] == "end") break;
    if (l.tok[0] != "act") fail(l.no, "unknown module entry '" + l.tok[0] + "'");
    RowVec<K> flat = parse_row<K>(l, 1, static_cast<Index>(M.dim) * M.dim, one);
    Mat<K> m(M.dim, M.dim);
    for (Index i = 0; i < M.dim; ++i) m.row(i) = flat.segment(i * M.dim, M.dim);
    M.act.push_back(std::move(m));
  }
  return M;
}

template <typename K>
GlobalizationBlock<K> parse_globalization_section(Cursor& cur, const Groupoid::Ptr& G,
                                                  const K& one) {
  typename Algebra<K>::Ptr T;
  std::optional<PartialAction<K>> beta;
  std::map<std::string, std::vector<RowVec<K>>> phi_rows;
  while (true) {
    Line l = cur.next();
    const std::string& head = l.tok[0];
    if (head == "end") break;
    if (head == "algebra") {
      T = parse_algebra_section<K>(cur, one);
    } else if (head == "action") {
      if (!T) fail(l.no, "globalization action before its algebra");
      beta = parse_action_section<K>(cur, G, T, one);
    } else if (head == "phi") {
      if (!T) fail(l.no, "phi rows before the globalization algebra");
      if (l.tok.size() < 2) fail(l.no, "phi rows name an identity");
      int e = -1;
      try {
        e = G->index(l.tok[1]);
      } catch (const std::exception&) {
        fail(l.no, "unknown arrow '" + l.tok[1] + "'");
      }
      if (!G->is_identity(e)) fail(l.no, "phi is indexed by identities");
      phi_rows[l.tok[1]].push_back(parse_row<K>(l, 2, T->dim(), one));
    } else {
      fail(l.no, "unknown globalization entry '" + head + "'");
    }
  }
  if (!beta) fail(cur.last_line, "globalization block has no action");
  GlobalizationBlock<K> b;
  b.beta = std::move(*beta);
  for (const auto& [e, rows] : phi_rows) b.phi[e] = stack_rows(rows, T->dim());
  return b;
}

}  // namespace detail_io

// The groupoid table alone, without the axiom scan that Groupoid::make
// runs.  Lets a caller report verdicts on a broken table instead of
// refusing to load the file.
inline GroupoidTable sniff_groupoid_table(const std::string& text) {
  detail_io::Cursor cur{detail_io::tokenize(text)};
  while (!cur.done()) {
    detail_io::Line l = cur.next();
    if (l.tok[0] == "groupoid") return detail_io::collect_groupoid_table(cur);
  }
  detail_io::fail(cur.last_line, "no groupoid section");
}

// The field line, without committing to a scalar type.  Used to pick the
// template instantiation before the real parse.
inline FieldSpec sniff_field(const std::string& text) {
  for (const auto& l : detail_io::tokenize(text)) {
    if (l.tok[0] != "field") continue;
    if (l.tok.size() == 2 && l.tok[1] == "rational") return {};
    if (l.tok.size() == 3 && l.tok[1] == "fp") {
      FieldSpec f;
      f.rational = false;
      f.p = detail_io::parse_count(l, 2, "modulus");
      if (!is_prime(f.p)) detail_io::fail(l.no, "modulus " + std::to_string(f.p) + " is not prime");
      return f;
    }
    detail_io::fail(l.no, "field lines read 'field rational' or 'field fp <p>'");
  }
  return {};
}

template <typename K>
Instance<K> parse_instance(const std::string& text, const K& one) {
  using namespace detail_io;
  Cursor cur{tokenize(text)};
  if (cur.done()) fail(0, "empty instance");
  {
    Line l = cur.next();
    if (l.tok.size() != 2 || l.tok[0] != "pgact-instance" || l.tok[1] != "v1")
      fail(l.no, "missing header 'pgact-instance v1'");
  }
  Instance<K> ins;
  ins.field = field_of(one);
  bool saw_field = false;
  while (!cur.done()) {
    Line l = cur.next();
    const std::string& head = l.tok[0];
    if (head == "field") {
      const bool ok = (l.tok.size() == 2 && l.tok[1] == "rational") ||
                      (l.tok.size() == 3 && l.tok[1] == "fp");
      if (!ok) fail(l.no, "field lines read 'field rational' or 'field fp <p>'");
      saw_field = true;  // the exemplar decides the arithmetic
    } else if (head == "groupoid") {
      if (ins.G) fail(l.no, "duplicate groupoid section");
      ins.G = parse_groupoid_section(cur);
    } else if (head == "algebra") {
      if (ins.R) fail(l.no, "duplicate algebra section");
      ins.R = parse_algebra_section<K>(cur, one);
    } else if (head == "action") {
      if (!ins.G || !ins.R) fail(l.no, "the action section needs groupoid and algebra first");
      if (ins.action) fail(l.no, "duplicate action section");
      ins.action = parse_action_section<K>(cur, ins.G, ins.R, one);
    } else if (head == "galois-system") {
      if (!ins.R) fail(l.no, "the galois-system section needs the algebra first");
      if (ins.system) fail(l.no, "duplicate galois-system section");
      ins.system = parse_system_section<K>(cur, ins.R, one);
    } else if (head == "module") {
      ins.modules.push_back(parse_module_section<K>(cur, l, one));
    } else if (head == "globalization") {
      if (!ins.G) fail(l.no, "the globalization section needs the groupoid first");
      if (ins.globalization) fail(l.no, "duplicate globalization section");
      ins.globalization = parse_globalization_section<K>(cur, ins.G, one);
    } else {
      fail(l.no, "unknown section '" + head + "'");
    }
  }
  if (!saw_field) fail(cur.last_line, "no field line");
  if (!ins.G) fail(cur.last_line, "no groupoid section");
  if (!ins.R) fail(cur.last_line, "no algebra section");
  return ins;
}

namespace detail_io {

template <typename K>
void emit_row(std::string& out, const RowVec<K>& v) {
  for (Index i = 0; i < v.cols(); ++i) out += " " + to_string(v(i));
  out += "\n";
}

template <typename K>
bool coordinate_pattern(const typename Algebra<K>::Ptr& a) {
  const int n = a->dim();
  if (n == 0) return false;
  for (int i = 0; i < n; ++i)
    if (a->label(i) != "e" + std::to_string(i + 1)) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& t = a->basis_product(i, j);
      if (i == j) {
        if (t.size() != 1 || t[0].idx != i || !(t[0].c == a->one())) return false;
      } else if (!t.empty()) {
        return false;
      }
    }
  return true;
}

template <typename K>
void emit_algebra(std::string& out, const typename Algebra<K>::Ptr& a, const std::string& indent) {
  out += indent + "algebra\n";
  if (coordinate_pattern<K>(a)) {
    out += indent + "  coordinate-ring " + std::to_string(a->dim()) + "\n";
    out += indent + "end\n";
    return;
  }
  out += indent + "  labels";
  for (const auto& l : a->labels()) out += " " + l;
  out += "\n";
  if (a->unit()) {
    out += indent + "  unit";
    emit_row(out, *a->unit());
  }
  for (int i = 0; i < a->dim(); ++i)
    for (int j = 0; j < a->dim(); ++j) {
      const auto& t = a->basis_product(i, j);
      if (t.empty()) continue;
      RowVec<K> row(a->dim());
      row.setZero();
      for (const auto& s : t) row(s.idx) = s.c;
      out += indent + "  product " + a->label(i) + " " + a->label(j);
      emit_row(out, row);
    }
  out += indent + "end\n";
}

template <typename K>
void emit_action(std::string& out, const PartialAction<K>& A, const std::string& indent) {
  const Groupoid& G = *A.G;
  out += indent + "action\n";
  for (int g = 0; g < G.size(); ++g)
    for (Index i = 0; i < A.D[g].rows.rows(); ++i) {
      out += indent + "  ideal " + G.name(g);
      emit_row(out, RowVec<K>(A.D[g].rows.row(i)));
    }
  for (int g = 0; g < G.size(); ++g) {
    const auto& f = A.alpha(g);
    if (G.is_identity(g) && mat_eq<K>(f.dom(), f.img())) {
      if (f.dom().rows() != 0) out += indent + "  map " + G.name(g) + " identity\n";
      continue;
    }
    for (Index i = 0; i < f.img().rows(); ++i) {
      out += indent + "  map " + G.name(g);
      emit_row(out, RowVec<K>(f.img().row(i)));
    }
  }
  out += indent + "end\n";
}

}  // namespace detail_io

template <typename K>
std::string serialize_instance(const Instance<K>& ins) {
  using namespace detail_io;
  std::string out = "pgact-instance v1\nfield " + ins.field.text() + "\n\n";
  const GroupoidTable& t = ins.G->table();
  out += "groupoid\n  elements";
  for (const auto& e : t.elements) out += " " + e;
  out += "\n";
  for (const auto& [g, gi] : t.inverses) out += "  inverse " + g + " " + gi + "\n";
  for (const auto& [g, h, gh] : t.compositions) out += "  compose " + g + " " + h + " " + gh + "\n";
  out += "end\n\n";
  emit_algebra<K>(out, ins.R, "");
  if (ins.action) {
    out += "\n";
    emit_action(out, *ins.action, "");
  }
  if (ins.system) {
    out += "\ngalois-system\n";
    for (Index i = 0; i < ins.system->xs.rows(); ++i) {
      out += "  x";
      emit_row(out, RowVec<K>(ins.system->xs.row(i)));
      out += "  y";
      emit_row(out, RowVec<K>(ins.system->ys.row(i)));
    }
    out += "end\n";
  }
  for (const auto& M : ins.modules) {
    out += "\nmodule " + M.name + " " + std::to_string(M.dim) + "\n";
    for (const auto& m : M.act) {
      out += "  act";
      RowVec<K> flat(static_cast<Index>(M.dim) * M.dim);
      for (Index i = 0; i < M.dim; ++i) flat.segment(i * M.dim, M.dim) = m.row(i);
      emit_row(out, flat);
    }
    out += "end\n";
  }
  if (ins.globalization) {
    out += "\nglobalization\n";
    emit_algebra<K>(out, ins.globalization->beta.R, "  ");
    emit_action(out, ins.globalization->beta, "  ");
    for (int e : ins.G->identities()) {
      auto it = ins.globalization->phi.find(ins.G->name(e));
      if (it == ins.globalization->phi.end()) continue;
      for (Index i = 0; i < it->second.rows(); ++i) {
        out += "  phi " + ins.G->name(e);
        emit_row(out, RowVec<K>(it->second.row(i)));
      }
    }
    out += "end\n";
  }
  return out;
}

template <typename K>
Instance<K> instance_for_action(const PartialAction<K>& A) {
  Instance<K> ins;
  ins.field = field_of(A.R->one());
  ins.G = A.G;
  ins.R = A.R;
  ins.action = A;
  return ins;
}

template <typename K>
Instance<K> instance_for_globalization(const Globalization<K>& Gl) {
  Instance<K> ins = instance_for_action(Gl.source);
  GlobalizationBlock<K> b;
  b.beta = Gl.beta;
  for (int e : Gl.source.G->identities()) b.phi[Gl.source.G->name(e)] = Gl.phi[e]->img();
  ins.globalization = std::move(b);
  return ins;
}

template <typename K>
Instance<K> instance_for_skew_ring(const SkewRing<K>& S) {
  Instance<K> ins;
  ins.field = field_of(S.A->one());
  ins.G = S.action.G;
  ins.R = S.A;
  return ins;
}

// Rebuild the enveloping-action data carried by an instance file and verify
// it against the source action.
template <typename K>
Globalization<K> assemble_globalization(const Instance<K>& ins) {
  if (!ins.action) throw StructuralError("the instance carries no action to envelop");
  if (!ins.globalization) throw StructuralError("the instance carries no globalization block");
  const PartialAction<K>& A = *ins.action;
  const auto& block = *ins.globalization;
  std::vector<std::optional<LinMap<K>>> phi(A.G->size());
  for (int e : A.G->identities()) {
    auto it = block.phi.find(A.G->name(e));
    const Index want = A.D[e].rows.rows();
    if (it == block.phi.end()) {
      if (want != 0) throw StructuralError("no phi rows for identity " + A.G->name(e));
      phi[e] = LinMap<K>(A.R, block.beta.R, Mat<K>(0, A.R->dim()), Mat<K>(0, block.beta.R->dim()));
      continue;
    }
    if (it->second.rows() != want)
      throw StructuralError("phi for " + A.G->name(e) + " needs " + std::to_string(want) +
                            " rows, found " + std::to_string(it->second.rows()));
    phi[e] = LinMap<K>(A.R, block.beta.R, A.D[e].rows, it->second);
  }
  return external_globalization<K>(A, block.beta, std::move(phi));
}

}  // namespace pgact

#endif
