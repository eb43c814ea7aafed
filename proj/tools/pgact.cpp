// Batch front end over the pgact headers.  Reads "pgact-instance v1" files
// (path argument, or stdin when the path is absent or "-"), runs one
// command, and reports as prose or as a versioned JSON record.
//
// Exit codes: 0 every check passed, 1 a mathematical check failed (the
// output carries the witness), 2 the input or a precondition was bad.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pgact/fixtures.hpp"
#include "pgact/galois.hpp"
#include "pgact/globalize.hpp"
#include "pgact/instance.hpp"
#include "pgact/random_instances.hpp"
#include "pgact/skewring.hpp"

using nlohmann::json;
using namespace pgact;

namespace {

struct Flags {
  std::string file;
  std::string field;
  std::string out;
  std::string format = "text";
  std::string xsets = "declared";
  unsigned long long seed = 2026;
  std::string element;  // trace
  std::string mode;     // galois
  std::string name;     // fixtures
  int count = 60;       // harness
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw StructuralError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& payload) {
  std::ofstream f(path);
  if (!f) throw StructuralError("cannot open '" + path + "' for writing");
  f << payload;
}

json report_json(const VerificationReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks()) {
    json e;
    e["name"] = c.name;
    e["status"] = c.status == CheckStatus::pass      ? "pass"
                  : c.status == CheckStatus::vacuous ? "vacuous"
                                                     : "fail";
    if (!c.witness.empty()) e["witness"] = c.witness;
    checks.push_back(e);
  }
  return json{{"subject", rep.subject()}, {"ok", rep.ok()}, {"checks", checks}};
}

struct Emitter {
  bool machine;
  std::string out_path;  // report redirection; constructions write out separately
  std::string text;
  json j;

  Emitter(const std::string& cmd, const Flags& f, bool redirect_report)
      : machine(f.format == "machine"), out_path(redirect_report ? f.out : "") {
    j["format"] = "pgact-report v1";
    j["command"] = cmd;
  }
  void line(const std::string& s) {
    text += s;
    text += '\n';
  }
  void report(const VerificationReport& rep) {
    text += rep.text();
    j["reports"].push_back(report_json(rep));
  }
  int finish(int code) {
    j["ok"] = code == 0;
    j["exit"] = code;
    const std::string payload = machine ? j.dump(2) + "\n" : text;
    if (!out_path.empty())
      write_file(out_path, payload);
    else
      std::cout << payload;
    return code;
  }
};

template <typename K>
json rows_json(const Mat<K>& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
    out.push_back(row);
  }
  return out;
}

void fibre_condition_lines(Emitter& em, const Groupoid& G, const std::string& xsets) {
  auto declared = check_51_condition(G);
  if (declared.declared)
    em.line("fibre condition (declared enumeration): satisfied");
  else
    em.line("fibre condition (declared enumeration): violated at " + declared.witness);
  em.j["fibre_condition"] = {{"declared", declared.declared}};
  if (!declared.declared) em.j["fibre_condition"]["witness"] = declared.witness;
  if (xsets == "all") {
    auto all = check_51_condition(G, true);
    em.line("fibre condition: " + std::to_string(all.satisfied) + " of " +
            std::to_string(all.tested) + " enumerations satisfy it");
    em.j["fibre_condition"]["tested"] = all.tested;
    em.j["fibre_condition"]["satisfied"] = all.satisfied;
  }
}

template <typename K>
const PartialAction<K>& need_action(const Instance<K>& ins) {
  if (!ins.action) throw StructuralError("no action section in the instance");
  return *ins.action;
}

template <typename K>
bool direct_sum_holds(const PartialAction<K>& A) {
  const auto rep = standing_hypotheses(A);
  for (const auto& c : rep.checks())
    if (c.name == "R is the direct sum of the identity ideals") return c.status == CheckStatus::pass;
  return false;
}

// The unit-less-ideal obstruction is a verdict with a witness, so the
// commands that need an enveloping action report it and exit 1 rather
// than refusing the input.
template <typename K>
std::optional<Globalization<K>> try_globalization(const Instance<K>& ins, Emitter& em) {
  const auto& A = need_action(ins);
  auto can = can_globalize(A);
  if (!can.ok) {
    em.line("cannot globalize: " + can.witness);
    em.j["can_globalize"] = false;
    em.j["witness"] = can.witness;
    return std::nullopt;
  }
  return build_globalization(A);
}

// ---- commands ----------------------------------------------------------

int cmd_check_groupoid(const std::string& text, const Flags& f) {
  Emitter em("check-groupoid", f, true);
  GroupoidTable t = sniff_groupoid_table(text);
  auto rep = Groupoid::verify(t);
  em.report(rep);
  if (rep.ok()) {
    auto G = Groupoid::make(t);
    em.line("arrows: " + std::to_string(G->size()) +
            ", identities: " + std::to_string(G->identities().size()));
    em.j["arrows"] = G->size();
    em.j["identities"] = G->identities().size();
    fibre_condition_lines(em, *G, f.xsets);
  }
  return em.finish(rep.ok() ? 0 : 1);
}

template <typename K>
int cmd_check_action(const Instance<K>& ins, const Flags& f) {
  Emitter em("check-action", f, true);
  const auto& A = need_action(ins);
  auto rep = verify_partial_action(A);
  em.report(rep);
  auto standing = standing_hypotheses(A);
  em.line(standing.ok() ? "standing hypotheses: hold"
                        : "standing hypotheses: fail (" + standing.first_failure() + ")");
  em.j["standing"] = report_json(standing);
  return em.finish(rep.ok() ? 0 : 1);
}

template <typename K>
int cmd_invariants(const Instance<K>& ins, const Flags& f) {
  Emitter em("invariants", f, true);
  const auto& A = need_action(ins);
  Mat<K> inv = invariants(A);
  Mat<K> comp = component_invariants_sum(A);
  em.line("dim R^alpha = " + std::to_string(inv.rows()));
  for (Index i = 0; i < inv.rows(); ++i) em.line("  " + A.R->format(inv.row(i)));
  em.line("dim of the summed isotropy invariants = " + std::to_string(comp.rows()));
  if (inv.rows() < comp.rows()) em.line("strict inclusion: R^alpha is smaller than the sum");
  if (!direct_sum_holds(A)) em.line("hypotheses violated: R != (+)D_e");
  em.j["invariants"] = rows_json(inv);
  em.j["component_sum_dim"] = comp.rows();
  em.j["strict_inclusion"] = inv.rows() < comp.rows();
  em.j["direct_sum_holds"] = direct_sum_holds(A);
  return em.finish(0);
}

template <typename K>
int cmd_trace(const Instance<K>& ins, const Flags& f) {
  Emitter em("trace", f, true);
  const auto& A = need_action(ins);
  int idx = -1;
  for (int i = 0; i < A.R->dim(); ++i)
    if (A.R->label(i) == f.element) idx = i;
  if (idx < 0)
    throw StructuralError("unknown basis element '" + f.element + "' (field: trace element)");
  RowVec<K> t = trace(A, A.R->basis_row(idx));
  const bool ds = direct_sum_holds(A);
  std::string line = "t(" + f.element + ") = " + A.R->format(t);
  if (!ds) line += "  (hypotheses violated: R ≠ ⊕D_e)";
  em.line(line);
  const bool invariant = SpanSolver<K>(invariants(A)).contains(t);
  em.line(std::string("lies in the invariant ring: ") + (invariant ? "yes" : "no"));
  em.j["element"] = f.element;
  em.j["trace"] = A.R->format(t);
  em.j["in_invariants"] = invariant;
  em.j["direct_sum_holds"] = ds;
  return em.finish(0);
}

template <typename K>
int cmd_globalize(const Instance<K>& ins, const Flags& f) {
  Emitter em("globalize", f, false);
  auto maybe = try_globalization(ins, em);
  if (!maybe) return em.finish(1);
  Globalization<K>& Gl = *maybe;
  em.report(Gl.report);
  em.line("dim T = " + std::to_string(Gl.T()->dim()));
  em.j["dim_T"] = Gl.T()->dim();
  json dims = json::object();
  for (int e : ins.G->identities()) {
    em.line("  E_" + ins.G->name(e) + ": dim " + std::to_string(Gl.beta.D[e].dim()) + "  (D_" +
            ins.G->name(e) + ": dim " + std::to_string(Gl.source.D[e].dim()) + ")");
    dims[ins.G->name(e)] = Gl.beta.D[e].dim();
  }
  em.j["extension_ideal_dims"] = dims;
  if (!f.out.empty()) {
    write_file(f.out, serialize_instance(instance_for_globalization(Gl)));
    em.line("wrote " + f.out);
  }
  return em.finish(Gl.report.ok() ? 0 : 1);
}

template <typename K>
int cmd_skew_ring(const Instance<K>& ins, const Flags& f) {
  Emitter em("skew-ring", f, false);
  const auto& A = need_action(ins);
  auto S = SkewRing<K>::build(A);
  em.line("dim R*G = " + std::to_string(S.A->dim()));
  em.j["dim"] = S.A->dim();
  em.j["unital"] = S.A->unit().has_value();
  em.line(S.A->unit() ? "unit: " + S.A->format(*S.A->unit()) : "unit: none");
  int code = 0;
  if (standing_hypotheses(A).ok()) {
    auto rep = verify_t_identities(S);
    em.report(rep);
    code = rep.ok() ? 0 : 1;
  } else {
    em.line("standing hypotheses fail; the t identities were not checked");
  }
  if (!f.out.empty()) {
    write_file(f.out, serialize_instance(instance_for_skew_ring(S)));
    em.line("wrote " + f.out);
  }
  return em.finish(code);
}

template <typename K>
int cmd_corners(const Instance<K>& ins, const Flags& f) {
  Emitter em("corners", f, true);
  std::optional<Globalization<K>> maybe;
  if (ins.globalization)
    maybe = assemble_globalization(ins);
  else
    maybe = try_globalization(ins, em);
  if (!maybe) return em.finish(1);
  const Globalization<K>& Gl = *maybe;
  auto C = corner_structure(Gl);
  em.report(C.report);
  em.line("dim B = " + std::to_string(C.skew_global.A->dim()));
  em.line("corner 1_A B 1_A: dim " + std::to_string(C.corner.rows()));
  em.j["dim_B"] = C.skew_global.A->dim();
  em.j["corner_dim"] = C.corner.rows();
  return em.finish(C.report.ok() ? 0 : 1);
}

template <typename K>
int cmd_galois(const Instance<K>& ins, const Flags& f) {
  Emitter em("galois " + f.mode, f, f.mode == "verify");
  const auto& A = need_action(ins);
  if (f.mode == "verify") {
    if (!ins.system) throw StructuralError("no galois-system section in the instance");
    auto rep = verify_galois(A, *ins.system);
    em.report(rep);
    return em.finish(rep.ok() ? 0 : 1);
  }
  auto S = find_galois(A);
  em.j["found"] = S.has_value();
  if (!S) {
    em.line("no coordinate system exists");
    return em.finish(1);
  }
  em.line("coordinate system with " + std::to_string(S->xs.rows()) + " pairs:");
  for (Index i = 0; i < S->xs.rows(); ++i)
    em.line("  x" + std::to_string(i + 1) + " = " + A.R->format(S->xs.row(i)) +
            "   y" + std::to_string(i + 1) + " = " + A.R->format(S->ys.row(i)));
  em.j["xs"] = rows_json(S->xs);
  em.j["ys"] = rows_json(S->ys);
  if (!f.out.empty()) {
    Instance<K> with = ins;
    with.system = *S;
    write_file(f.out, serialize_instance(with));
    em.line("wrote " + f.out);
  }
  return em.finish(0);
}

template <typename K>
int cmd_transfer(const Instance<K>& ins, const Flags& f) {
  Emitter em("transfer", f, false);
  if (!ins.system) throw StructuralError("no galois-system section in the instance");
  auto maybe = try_globalization(ins, em);
  if (!maybe) return em.finish(1);
  const Globalization<K>& Gl = *maybe;
  if (f.xsets == "all") fibre_condition_lines(em, *ins.G, f.xsets);
  auto TS = galois_transfer(Gl, *ins.system);
  em.line("transferred system with " + std::to_string(TS.xs.rows()) + " pairs over T:");
  for (Index i = 0; i < TS.xs.rows(); ++i)
    em.line("  x" + std::to_string(i + 1) + " = " + Gl.T()->format(TS.xs.row(i)) +
            "   y" + std::to_string(i + 1) + " = " + Gl.T()->format(TS.ys.row(i)));
  auto back = galois_transfer_back(Gl, TS);
  const bool back_ok = verify_galois(Gl.source, back).ok();
  em.line(std::string("restriction back to R verifies: ") + (back_ok ? "yes" : "no"));
  em.j["transferred"] = {{"xs", rows_json(TS.xs)}, {"ys", rows_json(TS.ys)}};
  em.j["restriction_verifies"] = back_ok;
  if (!f.out.empty()) {
    Instance<K> out_ins = instance_for_action(Gl.beta);
    out_ins.system = TS;
    write_file(f.out, serialize_instance(out_ins));
    em.line("wrote " + f.out);
  }
  return em.finish(0);
}

template <typename K>
int cmd_theorem53(const Instance<K>& ins, const Flags& f) {
  Emitter em("theorem53", f, true);
  const auto& A = need_action(ins);
  auto rep = theorem53(A, ins.modules);
  em.report(rep.details);
  em.line(std::string("consistent: ") + (rep.consistent ? "yes" : "no"));
  json cond;
  cond["i"] = rep.galois_system;
  cond["ii"] = rep.endomorphism_iso;
  json mods = json::array();
  for (const auto& [name, ok] : rep.module_splittings)
    mods.push_back(json{{"module", name}, {"splits", ok}});
  cond["iii"] = mods;
  cond["iv"] = rep.rho_bijective;
  cond["v"] = rep.rtr_full;
  cond["vi"] = rep.tau_prime_onto;
  cond["viii"] = rep.trace_onto;
  cond["x"] = rep.strict_context;
  em.j["conditions"] = cond;
  em.j["consistent"] = rep.consistent;
  em.j["viii_x_agree"] = rep.trace_strict_agree;
  em.j["hooks"] = {{"commutative", rep.hooks.commutative},
                   {"unit_trace_invertible", rep.hooks.unit_trace_invertible},
                   {"isotropy_trace_matches", rep.hooks.isotropy_trace_matches}};
  json times = json::object();
  for (const auto& [step, ms] : rep.timings_ms) {
    times[step] = ms;
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << ms;
    em.line("  " + step + ": " + os.str() + " ms");
  }
  em.j["timings_ms"] = times;
  return em.finish(rep.details.ok() ? 0 : 1);
}

template <typename K>
int cmd_equivalence(const Instance<K>& ins, const Flags& f) {
  Emitter em("equivalence", f, true);
  if (!ins.globalization) throw StructuralError("no globalization section in the instance");
  auto candidate = assemble_globalization(ins);
  em.report(candidate.report);
  if (!candidate.report.ok()) return em.finish(1);
  auto maybe = try_globalization(ins, em);
  if (!maybe) return em.finish(1);
  auto eq = globalization_equivalence(*maybe, candidate);
  em.report(eq.report);
  em.j["equivalent"] = eq.report.ok();
  if (eq.eta) {
    em.line("eta: certified isomorphism between the extensions, dim " +
            std::to_string(candidate.T()->dim()));
  }
  return em.finish(eq.report.ok() ? 0 : 1);
}

template <typename K>
int run_fixture(const Flags& f, const K& one) {
  auto names = fixture_names();
  if (std::find(names.begin(), names.end(), f.name) == names.end())
    throw StructuralError("unknown fixture '" + f.name + "' (field: fixtures name)");
  auto A = fixture_action<K>(f.name, one);
  const std::string text = serialize_instance(instance_for_action(A));
  if (!f.out.empty())
    write_file(f.out, text);
  else
    std::cout << text;
  return 0;
}

template <typename K>
int run_harness(const Flags& f, const K& one) {
  Emitter em("harness", f, true);
  std::mt19937_64 rng(f.seed);
  GeneratorCaps caps;
  const int n = std::max(1, f.count);
  int bad_actions = 0, bad_psi = 0, bad_53 = 0, bad_corners = 0;

  for (int i = 0; i < n; ++i) {
    auto A = random_action<K>(rng, caps, one);
    if (!verify_partial_action(A).ok() || !standing_hypotheses(A).ok() ||
        !trace_map_checks(A).ok())
      ++bad_actions;
    auto Gl = build_globalization(A);
    auto psi = psi_maps(Gl);
    if (!psi.report.ok() || !psi.iso) ++bad_psi;
  }
  em.line("actions: " + std::to_string(n - bad_actions) + "/" + std::to_string(n) +
          " verified with trace laws");
  em.line("psi: " + std::to_string(n - bad_psi) + "/" + std::to_string(n) +
          " invariant isomorphisms certified");

  const int m = std::max(1, n / 4);
  for (int i = 0; i < m; ++i) {
    auto A = random_action<K>(rng, caps, one);
    auto rep = theorem53(A);
    if (!rep.consistent || !rep.trace_strict_agree) ++bad_53;
    auto C = corner_structure(build_globalization(A));
    if (!C.report.ok()) ++bad_corners;
  }
  em.line("theorem53: " + std::to_string(m - bad_53) + "/" + std::to_string(m) + " consistent");
  em.line("corners: " + std::to_string(m - bad_corners) + "/" + std::to_string(m) + " strict");
  em.j["count"] = n;
  em.j["failures"] = {{"actions", bad_actions},
                      {"psi", bad_psi},
                      {"theorem53", bad_53},
                      {"corners", bad_corners}};
  const bool ok = bad_actions + bad_psi + bad_53 + bad_corners == 0;
  return em.finish(ok ? 0 : 1);
}

template <typename K>
int run_command(const std::string& cmd, const std::string& text, const Flags& f, const K& one) {
  if (cmd == "check-groupoid") return cmd_check_groupoid(text, f);
  Instance<K> ins = parse_instance<K>(text, one);
  if (cmd == "check-action") return cmd_check_action(ins, f);
  if (cmd == "invariants") return cmd_invariants(ins, f);
  if (cmd == "trace") return cmd_trace(ins, f);
  if (cmd == "globalize") return cmd_globalize(ins, f);
  if (cmd == "skew-ring") return cmd_skew_ring(ins, f);
  if (cmd == "corners") return cmd_corners(ins, f);
  if (cmd == "galois") return cmd_galois(ins, f);
  if (cmd == "transfer") return cmd_transfer(ins, f);
  if (cmd == "theorem53") return cmd_theorem53(ins, f);
  if (cmd == "equivalence") return cmd_equivalence(ins, f);
  throw StructuralError("unknown command '" + cmd + "'");
}

int run(const std::string& cmd, const Flags& flags) {
  FieldSpec spec;
  std::string text;
  const bool needs_input = cmd != "fixtures" && cmd != "harness";
  if (needs_input) text = read_input(flags.file);

  if (!flags.field.empty()) {
    if (flags.field == "rational") {
      spec = FieldSpec{};
    } else if (flags.field.rfind("fp:", 0) == 0) {
      spec.rational = false;
      try {
        spec.p = std::stoll(flags.field.substr(3));
      } catch (const std::exception&) {
        throw StructuralError("cannot read modulus in '--field " + flags.field + "'");
      }
      if (!is_prime(spec.p))
        throw StructuralError("modulus " + std::to_string(spec.p) + " is not prime");
    } else {
      throw StructuralError("--field takes 'rational' or 'fp:<p>'");
    }
  } else if (needs_input) {
    spec = sniff_field(text);
  }

  if (cmd == "fixtures")
    return spec.rational ? run_fixture(flags, Rational(1)) : run_fixture(flags, Fp(1, spec.p));
  if (cmd == "harness")
    return spec.rational ? run_harness(flags, Rational(1)) : run_harness(flags, Fp(1, spec.p));
  return spec.rational ? run_command(cmd, text, flags, Rational(1))
                       : run_command(cmd, text, flags, Fp(1, spec.p));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations with partial groupoid actions on algebras"};
  app.require_subcommand(1);
  Flags flags;

  std::vector<std::pair<std::string, std::string>> specs = {
      {"check-groupoid", "verify the axioms of the groupoid table"},
      {"check-action", "verify the partial action axioms"},
      {"invariants", "compute the invariant subring"},
      {"trace", "apply the trace map to a basis element"},
      {"globalize", "build the enveloping global action"},
      {"skew-ring", "build the partial skew groupoid ring"},
      {"corners", "corner structure of the extension skew ring"},
      {"galois", "verify or search for a coordinate system"},
      {"transfer", "carry a coordinate system to the extension ring"},
      {"theorem53", "evaluate the equivalent Galois conditions"},
      {"equivalence", "compare a declared globalization with the built one"},
      {"fixtures", "emit a named example instance"},
      {"harness", "run the randomized verification batteries"},
  };
  for (const auto& [name, desc] : specs) {
    auto* sub = app.add_subcommand(name, desc);
    if (name == "trace") sub->add_option("element", flags.element, "basis label")->required();
    if (name == "galois")
      sub->add_option("mode", flags.mode, "verify|find")
          ->required()
          ->check(CLI::IsMember({"verify", "find"}));
    if (name == "fixtures") sub->add_option("name", flags.name, "fixture name")->required();
    if (name == "harness") sub->add_option("count", flags.count, "instances to generate");
    if (name != "fixtures" && name != "harness")
      sub->add_option("file", flags.file, "instance file, '-' or absent for stdin");
    sub->add_option("--field", flags.field, "rational|fp:<p> (default: the file's field line)");
    sub->add_option("--out", flags.out, "write the result here");
    sub->add_option("--format", flags.format, "text|machine")
        ->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--seed", flags.seed, "randomized harness seed");
    sub->add_option("--enumerate-xsets", flags.xsets, "all|declared")
        ->check(CLI::IsMember({"all", "declared"}));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, flags);
  } catch (const PreconditionError& ex) {
    std::cerr << "precondition: " << ex.what() << "\n";
    return 2;
  } catch (const StructuralError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const InternalError& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
