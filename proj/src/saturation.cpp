#include "vtamlib/saturation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace vtam {

std::string to_string(FormTag t) {
  switch (t) {
    case FormTag::Relation: return "relation";
    case FormTag::Pop: return "pop";
    case FormTag::Push: return "push";
    case FormTag::Intermediate: return "intermediate";
    case FormTag::Alternating: return "alternating";
    case FormTag::Split: return "split";
    case FormTag::Propositional: return "propositional";
  }
  return "?";
}

// ---- SatContext -----------------------------------------------------------

SatContext::SatContext(const RankedSignature& gamma_with_bot) : gamma_(gamma_with_bot) {
  for (const auto& s : gamma_.symbols()) {
    sym_ids_[s.name] = static_cast<int>(sym_names_.size());
    sym_names_.push_back(s.name);
  }
}

int SatContext::symbol_id(const std::string& name) const {
  auto it = sym_ids_.find(name);
  if (it == sym_ids_.end()) throw InternalError("unknown memory symbol '" + name + "'");
  return it->second;
}

int SatContext::intern(PredInfo info) {
  std::ostringstream key;
  key << static_cast<int>(info.kind) << '|' << info.name << '|' << info.rel << '|'
      << info.fwd;
  for (int m : info.members) key << ',' << m;
  auto it = by_key_.find(key.str());
  if (it != by_key_.end()) return it->second;
  int id = static_cast<int>(preds_.size());
  preds_.push_back(std::move(info));
  by_key_[key.str()] = id;
  return id;
}

int SatContext::state_pred(const std::string& q) {
  return intern({PredKind::State, q, {}, -1, true});
}
int SatContext::sstate_pred(const std::string& s) {
  return intern({PredKind::SState, s, {}, -1, true});
}
int SatContext::s_top() { return sstate_pred("s_top"); }
int SatContext::rel_pred(const std::string& name) {
  return intern({PredKind::Rel, name, {}, -1, true});
}
int SatContext::split_pred(std::vector<int> members, int rel, bool fwd) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return intern({PredKind::Split, "", std::move(members), rel, fwd});
}
int SatContext::prop_pred(std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return intern({PredKind::Prop, "", std::move(members), -1, true});
}

std::string SatContext::pred_text(int id) const {
  const PredInfo& p = preds_[id];
  switch (p.kind) {
    case PredKind::State: return "Q_" + p.name;
    case PredKind::SState: return "S_" + p.name;
    case PredKind::Rel: return p.name;
    case PredKind::Split: {
      std::string out = "[";
      for (std::size_t i = 0; i < p.members.size(); ++i)
        out += (i ? "&" : "") + pred_text(p.members[i]);
      out += "]^" + preds_[p.rel].name + (p.fwd ? "" : "~");
      return out;
    }
    case PredKind::Prop: {
      std::string out = "N{";
      for (std::size_t i = 0; i < p.members.size(); ++i)
        out += (i ? "," : "") + pred_text(p.members[i]);
      return out + "}";
    }
  }
  return "?";
}

std::string SatContext::atom_text(const Atom& at) const {
  std::string out = pred_text(at.pred);
  if (at.args.empty()) return out;
  auto arg_text = [&](const Arg& a) -> std::string {
    switch (a.k) {
      case Arg::Var: return "v" + std::to_string(a.v);
      case Arg::Cst: return sym_names_[static_cast<std::size_t>(a.sym)];
      case Arg::Fun:
        return sym_names_[static_cast<std::size_t>(a.sym)] + "(v" + std::to_string(a.a) +
               ",v" + std::to_string(a.b) + ")";
    }
    return "?";
  };
  out += "(";
  for (std::size_t i = 0; i < at.args.size(); ++i) out += (i ? "," : "") + arg_text(at.args[i]);
  return out + ")";
}

std::string SatContext::clause_text(const Clause& c) const {
  std::string out;
  for (std::size_t i = 0; i < c.body.size(); ++i)
    out += (i ? ", " : "") + atom_text(c.body[i]);
  out += " => ";
  out += atom_text(c.head);
  return out;
}

// ---- tam_to_clauses --------------------------------------------------------

std::vector<Clause> tam_to_clauses(SatContext& ctx, const Vtam& a) {
  for (const auto& r : a.rules) {
    if (r.guard == Guard::RelNeg)
      throw UnsupportedError("negative constraints must be eliminated before saturation");
    if (r.guard == Guard::BtEq || r.guard == Guard::BtNeq)
      throw UnsupportedError("bt constraints have no memory-clause reading");
  }
  int bot = ctx.symbol_id(kBot);
  std::vector<Clause> out;
  for (const auto& r : a.rules) {
    int tgt = ctx.state_pred(r.target);
    Clause c;
    switch (r.action) {
      case ActionKind::PushConst:
        c.head = {tgt, {Arg::cst(ctx.symbol_id(r.mem_symbol))}};
        break;
      case ActionKind::EmitBot:
        c.head = {tgt, {Arg::cst(bot)}};
        break;
      case ActionKind::PushBin:
        c.body = {{ctx.state_pred(r.q1), {Arg::var(0)}}, {ctx.state_pred(r.q2), {Arg::var(1)}}};
        c.head = {tgt, {Arg::fun(ctx.symbol_id(r.mem_symbol), 0, 1)}};
        break;
      case ActionKind::Keep1:
      case ActionKind::Keep2: {
        c.body = {{ctx.state_pred(r.q1), {Arg::var(0)}}, {ctx.state_pred(r.q2), {Arg::var(1)}}};
        if (r.guard == Guard::RelPos)
          c.body.push_back({ctx.rel_pred("R"), {Arg::var(0), Arg::var(1)}});
        c.head = {tgt, {Arg::var(r.action == ActionKind::Keep1 ? 0 : 1)}};
        break;
      }
      case ActionKind::PopSym: {
        int side = r.pop_side, child = r.pop_child;
        int h = ctx.symbol_id(r.mem_symbol);
        Atom read = {ctx.state_pred(side == 1 ? r.q1 : r.q2), {Arg::fun(h, 0, 1)}};
        Atom other = {ctx.state_pred(side == 1 ? r.q2 : r.q1), {Arg::var(2)}};
        c.body = side == 1 ? std::vector<Atom>{read, other} : std::vector<Atom>{other, read};
        c.head = {tgt, {Arg::var(child == 1 ? 0 : 1)}};
        break;
      }
      case ActionKind::PopBot: {
        int side = r.pop_side;
        Atom read = {ctx.state_pred(side == 1 ? r.q1 : r.q2), {Arg::cst(bot)}};
        Atom other = {ctx.state_pred(side == 1 ? r.q2 : r.q1), {Arg::var(0)}};
        c.body = side == 1 ? std::vector<Atom>{read, other} : std::vector<Atom>{other, read};
        c.head = {tgt, {Arg::cst(bot)}};
        break;
      }
    }
    c.tag = FormTag::Push;  // retagged by normalization
    out.push_back(std::move(c));
  }
  return out;
}

// ---- relation_system -------------------------------------------------------

std::vector<Clause> relation_system(SatContext& ctx, RelSysKind kind) {
  std::vector<Clause> out;
  int R = ctx.rel_pred("R");
  int top = ctx.s_top();
  ctx.chain_resolver[{R, R}] = {R, R};

  std::vector<int> consts, bins;
  for (const auto& s : ctx.gamma().symbols())
    (s.arity == 0 ? consts : bins).push_back(ctx.symbol_id(s.name));

  // S_top accepts every term:  (E),(F)
  for (int c : consts) out.push_back({{}, {top, {Arg::cst(c)}}, FormTag::Relation});
  for (int f : bins)
    out.push_back({{{top, {Arg::var(0)}}, {top, {Arg::var(1)}}},
                   {top, {Arg::fun(f, 0, 1)}},
                   FormTag::Relation});

  auto dclause = [&](int f, int g) {
    return Clause{{{R, {Arg::var(0), Arg::var(1)}}, {R, {Arg::var(2), Arg::var(3)}}},
                  {R, {Arg::fun(f, 0, 2), Arg::fun(g, 1, 3)}},
                  FormTag::Relation};
  };

  switch (kind) {
    case RelSysKind::StructEq:
      for (int c1 : consts)
        for (int c2 : consts)
          out.push_back({{}, {R, {Arg::cst(c1), Arg::cst(c2)}}, FormTag::Relation});
      for (int f : bins)
        for (int g : bins) out.push_back(dclause(f, g));
      break;
    case RelSysKind::SynEq:
      for (int c : consts)
        out.push_back({{}, {R, {Arg::cst(c), Arg::cst(c)}}, FormTag::Relation});
      for (int f : bins) out.push_back(dclause(f, f));
      break;
    case RelSysKind::Universal:
      for (int c1 : consts)
        for (int c2 : consts)
          out.push_back({{}, {R, {Arg::cst(c1), Arg::cst(c2)}}, FormTag::Relation});
      for (int f : bins)
        for (int g : bins) out.push_back(dclause(f, g));
      for (int f : bins)
        for (int c : consts) {
          out.push_back({{{top, {Arg::var(0)}}, {top, {Arg::var(1)}}},
                         {R, {Arg::fun(f, 0, 1), Arg::cst(c)}},
                         FormTag::Relation});  // (B)
          out.push_back({{{top, {Arg::var(0)}}, {top, {Arg::var(1)}}},
                         {R, {Arg::cst(c), Arg::fun(f, 0, 1)}},
                         FormTag::Relation});  // (C)
        }
      break;
  }
  return out;
}

// ---- clause utilities ------------------------------------------------------

namespace {

bool arg_has_fun(const Arg& a) { return a.k != Arg::Var; }

bool atom_has_fun(const Atom& at) {
  for (const auto& a : at.args)
    if (arg_has_fun(a)) return true;
  return false;
}

std::vector<int> atom_vars(const Atom& at) {
  std::vector<int> out;
  for (const auto& a : at.args) {
    if (a.k == Arg::Var) out.push_back(a.v);
    if (a.k == Arg::Fun) {
      out.push_back(a.a);
      out.push_back(a.b);
    }
  }
  return out;
}

void renumber(Clause& c) {
  std::map<int, int> ren;
  auto touch = [&](int v) {
    if (!ren.count(v)) {
      int n = static_cast<int>(ren.size());
      ren[v] = n;
    }
  };
  auto walk_atom = [&](const Atom& at) {
    for (int v : atom_vars(at)) touch(v);
  };
  walk_atom(c.head);
  for (const auto& b : c.body) walk_atom(b);
  auto apply = [&](Atom& at) {
    for (auto& a : at.args) {
      if (a.k == Arg::Var) a.v = ren[a.v];
      if (a.k == Arg::Fun) {
        a.a = ren[a.a];
        a.b = ren[a.b];
      }
    }
  };
  apply(c.head);
  for (auto& b : c.body) apply(b);
}

void canonicalize(Clause& c) {
  std::sort(c.body.begin(), c.body.end());
  c.body.erase(std::unique(c.body.begin(), c.body.end()), c.body.end());
  renumber(c);
  // one more settle pass: sorting with the new numbering can reorder
  for (int i = 0; i < 3; ++i) {
    auto before = c.body;
    std::sort(c.body.begin(), c.body.end());
    renumber(c);
    if (before == c.body) break;
  }
}

// ---- substitution ----------------------------------------------------------

struct Subst {
  std::map<int, Arg> map;

  // Resolve a variable to its current binding (vars chase through vars).
  Arg find(int v) const {
    auto it = map.find(v);
    if (it == map.end()) return Arg::var(v);
    if (it->second.k == Arg::Var && it->second.v != v) return find(it->second.v);
    return it->second;
  }

  bool bind(int v, const Arg& to) {
    Arg cur = find(v);
    Arg tgt = to;
    if (tgt.k == Arg::Var) {
      tgt = find(tgt.v);
      if (tgt.k == Arg::Var && tgt.v == v && cur.k == Arg::Var && cur.v == v) return true;
    }
    if (cur.k == Arg::Var) {
      if (tgt.k == Arg::Var && tgt.v == cur.v) return true;
      map[cur.v] = tgt;
      return true;
    }
    return unify_args(cur, tgt);
  }

  bool unify_args(const Arg& x, const Arg& y) {
    if (x.k == Arg::Var) return bind(x.v, y);
    if (y.k == Arg::Var) return bind(y.v, x);
    if (x.k != y.k || x.sym != y.sym) return false;
    if (x.k == Arg::Cst) return true;
    return bind(x.a, Arg::var(y.a)) && bind(x.b, Arg::var(y.b));
  }

  Arg apply(const Arg& a) const {
    if (a.k == Arg::Var) return find(a.v);
    if (a.k == Arg::Cst) return a;
    Arg la = find(a.a), lb = find(a.b);
    if (la.k != Arg::Var || lb.k != Arg::Var)
      throw InternalError("substitution would nest function symbols");
    return Arg::fun(a.sym, la.v, lb.v);
  }

  Atom apply(const Atom& at) const {
    Atom out = at;
    for (auto& a : out.args) a = apply(a);
    return out;
  }
};

bool unify_atoms(const Atom& x, const Atom& y, Subst& s) {
  if (x.pred != y.pred || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!s.unify_args(x.args[i], y.args[i])) return false;
  return true;
}

int max_var(const Clause& c) {
  int m = -1;
  auto walk = [&](const Atom& at) {
    for (int v : atom_vars(at)) m = std::max(m, v);
  };
  walk(c.head);
  for (const auto& b : c.body) walk(b);
  return m;
}

Clause shift_vars(Clause c, int by) {
  auto apply = [&](Atom& at) {
    for (auto& a : at.args) {
      if (a.k == Arg::Var) a.v += by;
      if (a.k == Arg::Fun) {
        a.a += by;
        a.b += by;
      }
    }
  };
  apply(c.head);
  for (auto& b : c.body) apply(b);
  return c;
}

}  // namespace

// ---- selection --------------------------------------------------------------

namespace {

// Returns body indices of the selected literals; empty means the head is
// selected (the clause acts as the positive premise).
std::vector<std::size_t> select_body(const SatContext& ctx, const Clause& c) {
  std::vector<std::size_t> out;

  // 1. negative R(u,v) / S(u) literals with a non-variable argument
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    const auto& p = ctx.pred(c.body[i].pred);
    if ((p.kind == PredKind::Rel || p.kind == PredKind::SState) && atom_has_fun(c.body[i]))
      out.push_back(i);
  }
  if (!out.empty()) return out;

  // 2. negated propositional variables
  for (std::size_t i = 0; i < c.body.size(); ++i)
    if (ctx.pred(c.body[i].pred).kind == PredKind::Prop) out.push_back(i);
  if (!out.empty()) return out;

  // 3. negative literals with a function symbol
  for (std::size_t i = 0; i < c.body.size(); ++i)
    if (atom_has_fun(c.body[i])) out.push_back(i);
  if (!out.empty()) return out;

  // 4. head carries the only function symbols: positive premise
  if (atom_has_fun(c.head)) return {};

  // 5. no function symbol anywhere
  if (!c.body.empty()) {
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      const auto& p = ctx.pred(c.body[i].pred);
      if (p.kind == PredKind::Rel || p.kind == PredKind::SState) out.push_back(i);
    }
    if (!out.empty()) return out;
    for (std::size_t i = 0; i < c.body.size(); ++i) out.push_back(i);
    return out;
  }

  // 6. unit clause: select its only literal (the head)
  return {};
}

}  // namespace

// ---- eager splitting ---------------------------------------------------------

std::vector<Clause> normalize_and_split(SatContext& ctx, Clause c) {
  std::vector<Clause> defs;

  std::set<int> head_vars;
  for (int v : atom_vars(c.head)) head_vars.insert(v);

  bool changed = true;
  while (changed) {
    changed = false;

    // variables of the body partitioned by containment in function atoms
    std::map<int, std::vector<std::size_t>> plain_at;  // var -> body indices (var atoms)
    std::map<int, std::vector<std::size_t>> rel_at;    // var -> rel var-var atoms
    std::set<int> in_fun;                              // vars under a function symbol
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      const Atom& at = c.body[i];
      const auto& p = ctx.pred(at.pred);
      for (const auto& a : at.args) {
        if (a.k == Arg::Fun) {
          in_fun.insert(a.a);
          in_fun.insert(a.b);
        }
      }
      if (p.kind == PredKind::Rel) {
        if (!atom_has_fun(at)) {
          rel_at[at.args[0].v].push_back(i);
          rel_at[at.args[1].v].push_back(i);
        }
      } else if (at.args.size() == 1 && at.args[0].k == Arg::Var) {
        plain_at[at.args[0].v].push_back(i);
      }
    }

    // candidate existential variables
    std::set<int> vars;
    for (const auto& b : c.body)
      for (int v : atom_vars(b)) vars.insert(v);

    for (int z : vars) {
      if (head_vars.count(z) || in_fun.count(z)) continue;
      auto rels = rel_at.count(z) ? rel_at[z] : std::vector<std::size_t>{};
      rels.erase(std::unique(rels.begin(), rels.end()), rels.end());  // R(z,z) once
      auto plains = plain_at.count(z) ? plain_at[z] : std::vector<std::size_t>{};

      // Chain collapsing: two var-var relation atoms sharing z merge into
      // one rooted at the non-z end (single-equivalence shortcut).
      if (rels.size() >= 2) {
        std::size_t i1 = rels[0], i2 = rels[1];
        const Atom& r1 = c.body[i1];
        const Atom& r2 = c.body[i2];
        int w1 = r1.args[0].v == z ? r1.args[1].v : r1.args[0].v;
        auto it = ctx.chain_resolver.find({r1.pred, r2.pred});
        if (it == ctx.chain_resolver.end())
          throw InternalError("no chain resolver entry for relation pair");
        int rk = it->second.first, rl = it->second.second;
        // x R z and z R' y  becomes  x R_k z and x R_l y (w1 as x)
        int y_end = r2.args[0].v == z ? r2.args[1].v : r2.args[0].v;
        Atom na1 = {rk, {Arg::var(w1), Arg::var(z)}};
        Atom na2 = {rl, {Arg::var(w1), Arg::var(y_end)}};
        c.body[i1] = na1;
        c.body[i2] = na2;
        changed = true;
        break;
      }

      if (rels.size() == 1) {
        const Atom& r = c.body[rels[0]];
        int w = r.args[0].v == z ? r.args[1].v : r.args[0].v;
        bool fwd = r.args[1].v == z;  // R(w,z): member side is the second arg
        if (w == z) {  // reflexive self-loop: drop (equivalences)
          c.body.erase(c.body.begin() + static_cast<std::ptrdiff_t>(rels[0]));
          changed = true;
          break;
        }
        // Pull inner split predicates out through the chain property.
        std::vector<int> base_members;
        std::vector<Atom> pulled;
        for (std::size_t i : plains) {
          const auto& p = ctx.pred(c.body[i].pred);
          if (p.kind == PredKind::Split) {
            // R(w,z) & Split_S'(z)  ->  Split_S'(w) (plus trivial S_top part)
            pulled.push_back({ctx.split_pred(p.members, p.rel, true), {Arg::var(w)}});
          } else {
            base_members.push_back(c.body[i].pred);
          }
        }
        if (base_members.empty()) base_members.push_back(ctx.s_top());
        int sp = ctx.split_pred(base_members, r.pred, true);
        (void)fwd;  // built-in relations are symmetric; orientation collapses

        // definition clause: R(x,y), members(y) => Split(x)
        Clause def;
        def.body.push_back({r.pred, {Arg::var(0), Arg::var(1)}});
        for (int m : base_members) def.body.push_back({m, {Arg::var(1)}});
        def.head = {sp, {Arg::var(0)}};
        def.tag = FormTag::Split;
        canonicalize(def);
        defs.push_back(def);

        // rewrite the clause
        std::vector<Atom> nb;
        for (std::size_t i = 0; i < c.body.size(); ++i) {
          bool drop = i == rels[0];
          for (std::size_t j : plains)
            if (i == j) drop = true;
          if (!drop) nb.push_back(c.body[i]);
        }
        nb.push_back({sp, {Arg::var(w)}});
        for (auto& at : pulled) nb.push_back(at);
        c.body = std::move(nb);
        changed = true;
        break;
      }

      if (!plains.empty()) {
        // flat component: replace by a propositional guard
        std::vector<int> members;
        for (std::size_t i : plains) members.push_back(c.body[i].pred);
        int np = ctx.prop_pred(members);

        Clause def;
        for (int m : ctx.pred(np).members) def.body.push_back({m, {Arg::var(0)}});
        def.head = {np, {}};
        def.tag = FormTag::Split;
        canonicalize(def);
        defs.push_back(def);

        std::vector<Atom> nb;
        for (std::size_t i = 0; i < c.body.size(); ++i) {
          bool drop = false;
          for (std::size_t j : plains)
            if (i == j) drop = true;
          if (!drop) nb.push_back(c.body[i]);
        }
        nb.push_back({np, {}});
        c.body = std::move(nb);
        changed = true;
        break;
      }
    }
  }

  canonicalize(c);

  std::vector<Clause> out;
  out.push_back(std::move(c));
  for (auto& d : defs) out.push_back(std::move(d));
  return out;
}

// ---- classification -----------------------------------------------------------

namespace {

std::optional<FormTag> classify(const SatContext& ctx, const Clause& c) {
  const auto& hp = ctx.pred(c.head.pred);

  std::size_t n_prop = 0, n_rel = 0, n_fun = 0, n_cst = 0, n_var = 0, n_sfun = 0;
  for (const auto& b : c.body) {
    const auto& p = ctx.pred(b.pred);
    if (p.kind == PredKind::Prop) {
      ++n_prop;
    } else if (p.kind == PredKind::Rel) {
      ++n_rel;
      if (atom_has_fun(b)) ++n_sfun;
    } else if (b.args.size() == 1) {
      if (b.args[0].k == Arg::Fun)
        ++n_fun;
      else if (b.args[0].k == Arg::Cst)
        ++n_cst;
      else
        ++n_var;
    }
  }

  if (hp.kind == PredKind::Rel || hp.kind == PredKind::SState) {
    return FormTag::Relation;
  }
  if (hp.kind == PredKind::Prop) {
    if (n_rel) return std::nullopt;
    if (c.body.size() == n_prop) return FormTag::Propositional;  // (E1),(E2)
    if (n_fun == 0 && n_var == 0 && n_cst > 0) return FormTag::Propositional;  // (E3)
    return FormTag::Split;  // (S4),(S5)
  }
  // Unary heads: split predicates count as ordinary automaton states, so a
  // clause with a split head and no relation atoms classifies structurally
  // like any state-headed clause. Clauses still carrying relation atoms are
  // the (S1)-(S3) family.
  if (n_rel) {
    if (hp.kind == PredKind::Split) return FormTag::Split;
    return std::nullopt;  // relation atoms may not linger on state heads
  }
  const Arg& h = c.head.args[0];
  if (h.k == Arg::Fun) {
    if (n_fun || n_cst) return FormTag::Intermediate;  // (I1),(I3)
    return FormTag::Push;                              // (P1),(P3)
  }
  if (h.k == Arg::Cst) {
    if (n_fun || n_cst || n_var) return FormTag::Intermediate;  // (I2),(I4)
    return FormTag::Push;                                       // (P2),(P4)
  }
  if (n_fun) return FormTag::Pop;  // (3),(4),(3b),(4b)
  return FormTag::Alternating;     // (A1),(A2),(6b)
}

bool is_tautology(const Clause& c) {
  for (const auto& b : c.body)
    if (b == c.head) return true;
  return false;
}

// Does `d` subsume `c`? Same head under a variable-to-argument matching and
// body a sub-multiset of c's body under the same matching.
bool subsumes(const Clause& d, const Clause& c) {
  if (d.body.size() > c.body.size()) return false;

  struct M {
    std::map<int, Arg> ren;

    bool match_arg(const Arg& from, const Arg& to) {
      if (from.k == Arg::Var) {
        auto it = ren.find(from.v);
        if (it != ren.end()) return it->second == to;
        ren[from.v] = to;
        return true;
      }
      if (from.k != to.k || from.sym != to.sym) return false;
      if (from.k == Arg::Cst) return true;
      return match_arg(Arg::var(from.a), Arg::var(to.a)) &&
             match_arg(Arg::var(from.b), Arg::var(to.b));
    }
    bool match_atom(const Atom& from, const Atom& to) {
      if (from.pred != to.pred || from.args.size() != to.args.size()) return false;
      for (std::size_t i = 0; i < from.args.size(); ++i)
        if (!match_arg(from.args[i], to.args[i])) return false;
      return true;
    }
  };

  // Variables inside Fun args may only map to variables: match_arg handles
  // this implicitly because Fun children are compared through Arg::var.
  std::vector<bool> used(c.body.size(), false);
  M m0;
  if (!m0.match_atom(d.head, c.head)) return false;

  struct Rec {
    const Clause& d;
    const Clause& c;
    std::vector<bool>& used;
    bool run(std::size_t i, M m) {
      if (i == d.body.size()) return true;
      for (std::size_t j = 0; j < c.body.size(); ++j) {
        if (used[j]) continue;
        M m2 = m;
        if (!m2.match_atom(d.body[i], c.body[j])) continue;
        used[j] = true;
        if (run(i + 1, m2)) return true;
        used[j] = false;
      }
      return false;
    }
  };
  Rec rec{d, c, used};
  return rec.run(0, m0);
}

}  // namespace

// ---- the saturation loop --------------------------------------------------------

SaturatedSet saturate(SatContext& ctx, std::vector<Clause> input, const SatBudget& budget) {
  SaturatedSet result;
  auto& kept = result.clauses_;

  // indexes over kept clause ids
  std::map<int, std::vector<std::size_t>> pos_by_head;      // positive premises
  std::map<int, std::vector<std::size_t>> neg_by_selected;  // waiting on pred
  std::map<int, std::vector<std::size_t>> by_head;          // subsumption candidates
  std::vector<std::vector<std::size_t>> selected_of;        // per kept clause

  std::deque<Clause> queue;
  for (auto& c : input)
    for (auto& piece : normalize_and_split(ctx, std::move(c))) queue.push_back(std::move(piece));

  auto resolve = [&](const Clause& pos, const Clause& neg, std::size_t lit_idx)
      -> std::optional<Clause> {
    int off = max_var(neg) + 1;
    Clause p = shift_vars(pos, off < 0 ? 0 : off);
    Subst s;
    if (!unify_atoms(p.head, neg.body[lit_idx], s)) return std::nullopt;
    Clause r;
    for (std::size_t i = 0; i < neg.body.size(); ++i)
      if (i != lit_idx) r.body.push_back(s.apply(neg.body[i]));
    for (const auto& b : p.body) r.body.push_back(s.apply(b));
    r.head = s.apply(neg.head);
    return r;
  };

  while (!queue.empty()) {
    Clause c = std::move(queue.front());
    queue.pop_front();
    if (is_tautology(c)) continue;

    auto tag = classify(ctx, c);
    if (!tag)
      throw InternalError("derived clause matches no schema: " + ctx.clause_text(c));
    c.tag = *tag;

    bool redundant = false;
    auto hit = by_head.find(c.head.pred);
    if (hit != by_head.end()) {
      for (std::size_t kid : hit->second) {
        if (subsumes(kept[kid], c)) {
          redundant = true;
          break;
        }
      }
    }
    if (redundant) continue;

    if (kept.size() >= budget.max_clauses)
      throw BudgetError("saturation clause budget exceeded");

    std::size_t id = kept.size();
    kept.push_back(c);
    by_head[c.head.pred].push_back(id);
    auto sel = select_body(ctx, c);
    selected_of.push_back(sel);

    auto enqueue_resolvent = [&](std::optional<Clause> r) {
      if (!r) return;
      for (auto& piece : normalize_and_split(ctx, std::move(*r)))
        queue.push_back(std::move(piece));
    };

    if (sel.empty()) {
      pos_by_head[c.head.pred].push_back(id);
      // resolve against clauses waiting on this head predicate
      auto it = neg_by_selected.find(c.head.pred);
      if (it != neg_by_selected.end()) {
        for (std::size_t nid : it->second) {
          const Clause& neg = kept[nid];
          for (std::size_t li : selected_of[nid])
            if (neg.body[li].pred == c.head.pred)
              enqueue_resolvent(resolve(c, neg, li));
        }
      }
    } else {
      for (std::size_t li : sel) {
        int p = c.body[li].pred;
        neg_by_selected[p].push_back(id);
        auto it = pos_by_head.find(p);
        if (it != pos_by_head.end())
          for (std::size_t pid : it->second) enqueue_resolvent(resolve(kept[pid], c, li));
      }
    }
  }

  return result;
}

bool SaturatedSet::has_prop_fact(int prop_pred_id) const {
  for (const auto& c : clauses_)
    if (c.body.empty() && c.head.args.empty() && c.head.pred == prop_pred_id) return true;
  return false;
}

std::size_t SaturatedSet::count_tag(FormTag t) const {
  std::size_t n = 0;
  for (const auto& c : clauses_)
    if (c.tag == t) ++n;
  return n;
}

// ---- extraction -------------------------------------------------------------

MemoryTaSet extract_memory_ta(const SatContext& ctx, const SaturatedSet& sat) {
  MemoryTaSet out;
  out.base.name = "memlang";
  out.base.gamma = ctx.gamma();

  // automaton clauses: push-tagged with no propositional guard left
  struct PushBin {
    int sym = -1;                  // pushed memory symbol
    std::vector<int> left, right;  // predicate conjunctions on the children
    int head = -1;
  };
  std::map<int, std::vector<int>> const_heads;  // sym -> heads of ground facts
  std::vector<PushBin> bins;

  for (const auto& c : sat.clauses()) {
    if (c.tag != FormTag::Push && c.tag != FormTag::Relation) continue;
    bool has_prop = false;
    for (const auto& b : c.body)
      if (ctx.pred(b.pred).kind == PredKind::Prop) has_prop = true;
    if (has_prop) continue;
    const auto& hp = ctx.pred(c.head.pred);
    if (hp.kind == PredKind::Rel) continue;  // relation clauses are not memory states
    if (c.head.args.size() != 1) continue;
    const Arg& h = c.head.args[0];
    if (h.k == Arg::Cst) {
      if (!c.body.empty()) continue;  // (P2) only
      const_heads[h.sym].push_back(c.head.pred);
    } else if (h.k == Arg::Fun) {
      PushBin pb;
      pb.sym = h.sym;
      pb.head = c.head.pred;
      bool ok = true;
      for (const auto& b : c.body) {
        if (b.args.size() != 1 || b.args[0].k != Arg::Var) {
          ok = false;
          break;
        }
        if (b.args[0].v == h.a)
          pb.left.push_back(b.pred);
        else if (b.args[0].v == h.b)
          pb.right.push_back(b.pred);
        else
          ok = false;
      }
      if (!ok)
        throw InternalError("push clause outside the automaton shape: " + ctx.clause_text(c));
      bins.push_back(std::move(pb));
    }
  }

  // subset construction over predicate conjunction states
  std::map<std::set<int>, std::string> names;
  std::vector<std::set<int>> worklist;
  auto intern = [&](const std::set<int>& s) {
    auto it = names.find(s);
    if (it != names.end()) return it->second;
    std::string n = "m" + std::to_string(names.size());
    names[s] = n;
    out.base.states.push_back(n);
    worklist.push_back(s);
    return n;
  };

  for (const auto& sdecl : ctx.gamma().symbols()) {
    if (sdecl.arity != 0) continue;
    int sym = ctx.symbol_id(sdecl.name);
    std::set<int> s;
    auto it = const_heads.find(sym);
    if (it != const_heads.end()) s.insert(it->second.begin(), it->second.end());
    out.base.rules.push_back({sdecl.name, {}, intern(s)});
  }

  std::vector<std::set<int>> known;
  std::size_t next = 0;
  while (next < worklist.size()) {
    auto cur = worklist[next++];
    known.push_back(cur);
    std::vector<std::set<int>> snapshot = known;
    for (const auto& other : snapshot) {
      for (int side = 0; side < 2; ++side) {
        const auto& s1 = side == 0 ? cur : other;
        const auto& s2 = side == 0 ? other : cur;
        if (side == 1 && s1 == s2) continue;
        for (const auto& fdecl : ctx.gamma().symbols()) {
          if (fdecl.arity != 2) continue;
          int sym = ctx.symbol_id(fdecl.name);
          std::set<int> tgt;
          for (const auto& pb : bins) {
            if (pb.sym != sym) continue;
            bool ok = true;
            for (int p : pb.left)
              if (!s1.count(p)) { ok = false; break; }
            if (ok)
              for (int p : pb.right)
                if (!s2.count(p)) { ok = false; break; }
            if (ok) tgt.insert(pb.head);
          }
          out.base.rules.push_back({fdecl.name, {names[s1], names[s2]}, intern(tgt)});
        }
      }
    }
  }

  std::sort(out.base.rules.begin(), out.base.rules.end());
  out.base.rules.erase(std::unique(out.base.rules.begin(), out.base.rules.end()),
                       out.base.rules.end());

  for (const auto& [s, n] : names)
    for (int p : s) out.finals_of_pred[p].insert(n);

  for (const auto& c : sat.clauses())
    if (c.tag == FormTag::Push) out.push_clause_text.push_back(ctx.clause_text(c));

  return out;
}

Ta MemoryTaSet::for_pred(int pred, const std::string& name) const {
  Ta out = base;
  out.name = name;
  auto it = finals_of_pred.find(pred);
  if (it != finals_of_pred.end()) out.final = it->second;
  return out;
}

std::string clause_trace(const SatContext& ctx, const SaturatedSet& sat) {
  std::vector<std::string> lines;
  for (const auto& c : sat.clauses())
    lines.push_back(to_string(c.tag) + " | " + ctx.clause_text(c));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

double clause_universe_bound(const SatContext& ctx) {
  // Coarse count over the generated families; saturating arithmetic.
  double base = 0, bins = 0, consts = 0;
  for (const auto& s : ctx.gamma().symbols()) (s.arity == 0 ? consts : bins) += 1;
  for (std::size_t i = 0; i < ctx.pred_count(); ++i) {
    auto k = ctx.pred(static_cast<int>(i)).kind;
    if (k == PredKind::State || k == PredKind::SState) base += 1;
  }
  double splits = std::min(1e12, std::pow(2.0, base));
  double unary = base + splits;
  double props = std::min(1e12, std::pow(2.0, std::min(40.0, unary)));
  double conj = std::min(1e12, std::pow(2.0, std::min(40.0, unary)));
  double push = conj * conj * (bins + consts) * unary;
  double pop = unary * unary * bins * 4;
  double alt = conj * unary * 2;
  double inter = push * unary;
  double prop_cl = props * props;
  double total = push + pop + alt + inter + prop_cl + splits * 4;
  return std::min(total, 1e18);
}

}  // namespace vtam
