// Command-line front end over the vtam shared library (C API only).
//
// Exit codes: 0/1 carry boolean answers, 2 invalid automaton, 3 operation
// unsupported by the theory, 4 budget exceeded, 5 parse/io/usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "vtam.h"

namespace {

int fail(vtam_status st) {
  std::cerr << "error: " << vtam_last_error() << "\n";
  return static_cast<int>(st);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

struct AutHandle {
  vtam_aut* a = nullptr;
  ~AutHandle() { vtam_aut_free(a); }
};

struct StrHandle {
  char* s = nullptr;
  ~StrHandle() { vtam_str_free(s); }
};

int load(const std::string& path, AutHandle& h) {
  std::string text;
  try {
    text = slurp(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  vtam_status st = vtam_aut_parse(text.c_str(), &h.a);
  if (st != VTAM_OK) return fail(st);
  return 0;
}

int write_automaton(vtam_aut* a, const std::string& path) {
  StrHandle s;
  vtam_status st = vtam_aut_print(a, &s.s);
  if (st != VTAM_OK) return fail(st);
  try {
    spit(path, s.s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"visibly tree automata with memory and constraints"};
  app.require_subcommand(1);
  long budget = 0;
  app.add_option("--budget", budget, "override the default search budgets");

  // check FILE
  std::string check_file;
  auto* c_check = app.add_subcommand("check", "validate an automaton file");
  c_check->add_option("file", check_file)->required();

  // member FILE TERM
  std::string mem_file, mem_term;
  auto* c_member = app.add_subcommand("member", "is the term accepted?");
  c_member->add_option("file", mem_file)->required();
  c_member->add_option("term", mem_term)->required();

  // empty FILE [--witness]
  std::string empty_file;
  bool want_witness = false;
  auto* c_empty = app.add_subcommand("empty", "is the language empty?");
  c_empty->add_option("file", empty_file)->required();
  c_empty->add_flag("--witness", want_witness, "print a minimal accepted term when nonempty");

  // det FILE -o OUT
  std::string det_file, det_out;
  auto* c_det = app.add_subcommand("det", "determinize");
  c_det->add_option("file", det_file)->required();
  c_det->add_option("-o,--output", det_out)->required();

  // bool --op union|inter|complement A [B] -o OUT
  std::string bool_op, bool_a, bool_b, bool_out;
  auto* c_bool = app.add_subcommand("bool", "boolean operations");
  c_bool->add_option("--op", bool_op)->required()->check(
      CLI::IsMember({"union", "inter", "complement"}));
  c_bool->add_option("a", bool_a)->required();
  c_bool->add_option("b", bool_b);
  c_bool->add_option("-o,--output", bool_out)->required();

  // memlang FILE STATE -o OUT [--trace FILE]
  std::string ml_file, ml_state, ml_out, ml_trace;
  auto* c_ml = app.add_subcommand("memlang", "memory language of a state as a plain ta");
  c_ml->add_option("file", ml_file)->required();
  c_ml->add_option("state", ml_state)->required();
  c_ml->add_option("-o,--output", ml_out)->required();
  c_ml->add_option("--trace", ml_trace, "also write the saturated clause trace");

  // enum FILE --max-size N
  std::string enum_file;
  int enum_max = 7;
  auto* c_enum = app.add_subcommand("enum", "print accepted terms up to a size");
  c_enum->add_option("file", enum_file)->required();
  c_enum->add_option("--max-size", enum_max)->required();

  // include A B
  std::string inc_a, inc_b;
  auto* c_inc = app.add_subcommand("include", "language inclusion");
  c_inc->add_option("a", inc_a)->required();
  c_inc->add_option("b", inc_b)->required();

  // universal FILE
  std::string uni_file;
  auto* c_uni = app.add_subcommand("universal", "does the automaton accept every term?");
  c_uni->add_option("file", uni_file)->required();

  // sat3 FILE.cnf -o DIR
  std::string sat_file, sat_dir;
  auto* c_sat = app.add_subcommand("sat3", "emit a 3-sat membership instance");
  c_sat->add_option("file", sat_file)->required();
  c_sat->add_option("-o,--output", sat_dir)->required();

  // example NAME -o DIR
  std::string ex_name, ex_dir;
  auto* c_ex = app.add_subcommand("example", "emit a library example automaton");
  c_ex->add_option("name", ex_name)->required()->check(
      CLI::IsMember({"balanced", "redblack", "powerlist"}));
  c_ex->add_option("-o,--output", ex_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::stringstream out;
    int code = app.exit(e, out, out);
    std::cerr << out.str();
    return code == 0 ? 0 : 5;
  }

  if (c_check->parsed()) {
    AutHandle h;
    if (int rc = load(check_file, h)) return rc;
    vtam_status st = vtam_check(h.a);
    if (st == VTAM_OK) {
      std::cout << "valid\n";
      return 0;
    }
    return fail(st);
  }

  if (c_member->parsed()) {
    AutHandle h;
    if (int rc = load(mem_file, h)) return rc;
    vtam_status st = vtam_member(h.a, mem_term.c_str(), budget);
    if (st == VTAM_OK) {
      std::cout << "member\n";
      return 0;
    }
    if (st == VTAM_NO) {
      std::cout << "non-member\n";
      return 1;
    }
    return fail(st);
  }

  if (c_empty->parsed()) {
    AutHandle h;
    if (int rc = load(empty_file, h)) return rc;
    StrHandle w;
    vtam_status st = vtam_empty(h.a, budget, want_witness ? &w.s : nullptr);
    if (st == VTAM_OK) {
      std::cout << "empty\n";
      return 0;
    }
    if (st == VTAM_NO) {
      if (want_witness && w.s)
        std::cout << w.s << "\n";
      else
        std::cout << "nonempty\n";
      return 1;
    }
    return fail(st);
  }

  if (c_det->parsed()) {
    AutHandle h;
    if (int rc = load(det_file, h)) return rc;
    vtam_aut* out = nullptr;
    vtam_status st = vtam_determinize(h.a, &out);
    if (st != VTAM_OK) return fail(st);
    AutHandle oh{out};
    return write_automaton(out, det_out);
  }

  if (c_bool->parsed()) {
    AutHandle ha;
    if (int rc = load(bool_a, ha)) return rc;
    vtam_aut* out = nullptr;
    vtam_status st;
    if (bool_op == "complement") {
      if (!bool_b.empty()) {
        std::cerr << "error: complement takes a single operand\n";
        return 5;
      }
      st = vtam_complement(ha.a, &out);
    } else {
      if (bool_b.empty()) {
        std::cerr << "error: " << bool_op << " needs two operands\n";
        return 5;
      }
      AutHandle hb;
      if (int rc = load(bool_b, hb)) return rc;
      st = bool_op == "union" ? vtam_union(ha.a, hb.a, &out)
                              : vtam_intersection(ha.a, hb.a, &out);
    }
    if (st != VTAM_OK) return fail(st);
    AutHandle oh{out};
    return write_automaton(out, bool_out);
  }

  if (c_ml->parsed()) {
    AutHandle h;
    if (int rc = load(ml_file, h)) return rc;
    vtam_ta* ta = nullptr;
    vtam_status st = vtam_memlang(h.a, ml_state.c_str(), &ta);
    if (st != VTAM_OK) return fail(st);
    StrHandle s;
    st = vtam_ta_print(ta, &s.s);
    vtam_ta_free(ta);
    if (st != VTAM_OK) return fail(st);
    try {
      spit(ml_out, s.s);
      if (!ml_trace.empty()) {
        StrHandle tr;
        st = vtam_memlang_trace(h.a, &tr.s);
        if (st != VTAM_OK) return fail(st);
        spit(ml_trace, tr.s);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 5;
    }
    return 0;
  }

  if (c_enum->parsed()) {
    AutHandle h;
    if (int rc = load(enum_file, h)) return rc;
    StrHandle lines;
    vtam_status st = vtam_enum_accepted(h.a, enum_max, budget, &lines.s);
    if (st != VTAM_OK) return fail(st);
    std::cout << lines.s;
    return 0;
  }

  if (c_inc->parsed()) {
    AutHandle ha, hb;
    if (int rc = load(inc_a, ha)) return rc;
    if (int rc = load(inc_b, hb)) return rc;
    StrHandle ce;
    vtam_status st = vtam_included(ha.a, hb.a, budget, &ce.s);
    if (st == VTAM_OK) {
      std::cout << "included\n";
      return 0;
    }
    if (st == VTAM_NO) {
      if (ce.s) std::cout << ce.s << "\n";
      return 1;
    }
    return fail(st);
  }

  if (c_uni->parsed()) {
    AutHandle h;
    if (int rc = load(uni_file, h)) return rc;
    vtam_status st = vtam_universal(h.a, budget);
    if (st == VTAM_OK) {
      std::cout << "universal\n";
      return 0;
    }
    if (st == VTAM_NO) {
      std::cout << "not-universal\n";
      return 1;
    }
    return fail(st);
  }

  if (c_sat->parsed()) {
    std::string cnf;
    try {
      cnf = slurp(sat_file);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 5;
    }
    StrHandle term;
    vtam_aut* aut = nullptr;
    vtam_status st = vtam_sat3(cnf.c_str(), &term.s, &aut);
    if (st != VTAM_OK) return fail(st);
    AutHandle ah{aut};
    try {
      spit(sat_dir + "/sat3.term", std::string(term.s) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 5;
    }
    return write_automaton(aut, sat_dir + "/sat3.vtam");
  }

  if (c_ex->parsed()) {
    vtam_aut* aut = nullptr;
    StrHandle notes;
    vtam_status st = vtam_example(ex_name.c_str(), &aut, &notes.s);
    if (st != VTAM_OK) return fail(st);
    AutHandle ah{aut};
    try {
      spit(ex_dir + "/" + ex_name + ".txt", notes.s ? notes.s : "");
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 5;
    }
    return write_automaton(aut, ex_dir + "/" + ex_name + ".vtam");
  }

  return 5;
}
