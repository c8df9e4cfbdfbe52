#include "vtamlib/transform.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace vtam {

namespace {

using Track = std::set<std::pair<std::string, std::string>>;

struct DetState {
  int flag = 0;
  std::set<std::string> reach;
  Track track;

  friend auto operator<=>(const DetState&, const DetState&) = default;
};

std::string det_name(const DetState& d) {
  std::ostringstream os;
  os << "d" << d.flag;
  for (const auto& q : d.reach) os << "_" << q;
  os << "__";
  bool first = true;
  for (const auto& [a, b] : d.track) {
    os << (first ? "" : "_") << a << "x" << b;
    first = false;
  }
  return os.str();
}

// Rule index of the source automaton.
struct RuleIndex {
  std::map<std::string, std::vector<const Rule*>> by_symbol;

  explicit RuleIndex(const Vtam& a) {
    for (const auto& r : a.rules) by_symbol[r.symbol].push_back(&r);
  }
  const std::vector<const Rule*>& rules(const std::string& f) const {
    static const std::vector<const Rule*> none;
    auto it = by_symbol.find(f);
    return it == by_symbol.end() ? none : it->second;
  }
};

Track id_track(const Vtam& a) {
  Track t;
  for (const auto& q : a.states) t.insert({q, q});
  return t;
}

struct Determinizer {
  const Vtam& a;
  RuleIndex idx;
  Vtam out;

  // interned det states / memory symbols
  std::map<DetState, std::string> state_names;
  std::map<std::string, DetState> state_of;
  struct MemSym {
    bool is_const = false;
    std::string d1, d2, pushed_by;  // pushed_by: source push symbol
  };
  std::map<std::string, std::string> const_mem;               // push const -> name
  std::map<std::tuple<std::string, std::string, std::string>, std::string> bin_mem;
  std::map<std::string, MemSym> mem_of;
  // possible (child1, child2) top pairs under each binary det memory symbol
  std::map<std::string, std::set<std::pair<std::string, std::string>>> tops;
  // consumers: popping H at child k yielded state D; new tops entries of H
  // must propagate new reachable pairs (D, top of child k).
  std::map<std::string, std::vector<std::pair<std::string, int>>> consumers;

  // reachable (state, memory top) pairs; "" = bot
  std::vector<std::pair<std::string, std::string>> pairs;
  std::set<std::pair<std::string, std::string>> pair_set;

  std::set<std::string> emitted_rules;

  explicit Determinizer(const Vtam& src) : a(src), idx(src) {
    out.name = src.name + "_det";
    out.sigma = src.sigma;
    out.relation = src.relation;
  }

  std::string intern_state(const DetState& d) {
    auto it = state_names.find(d);
    if (it != state_names.end()) return it->second;
    std::string base = det_name(d);
    std::string name = base;
    int n = 0;
    while (state_of.count(name)) name = base + "_n" + std::to_string(++n);
    state_names[d] = name;
    state_of[name] = d;
    out.states.push_back(name);
    for (const auto& q : d.reach)
      if (a.final.count(q)) out.final.insert(name);
    return name;
  }

  std::string intern_const_mem(const std::string& push_sym) {
    auto it = const_mem.find(push_sym);
    if (it != const_mem.end()) return it->second;
    std::string name = "c_" + push_sym;
    int n = 0;
    while (mem_of.count(name)) name = "c_" + push_sym + std::to_string(++n);
    const_mem[push_sym] = name;
    mem_of[name] = {true, "", "", push_sym};
    out.gamma.add(name, 0);
    return name;
  }

  std::string intern_bin_mem(const std::string& d1, const std::string& d2,
                             const std::string& f) {
    auto key = std::make_tuple(d1, d2, f);
    auto it = bin_mem.find(key);
    if (it != bin_mem.end()) return it->second;
    std::string name = "p" + std::to_string(bin_mem.size());
    bin_mem[key] = name;
    mem_of[name] = {false, d1, d2, f};
    out.gamma.add(name, 2);
    return name;
  }

  void add_pair(const std::string& state, const std::string& top) {
    if (pair_set.insert({state, top}).second) pairs.push_back({state, top});
  }

  void add_top_entry(const std::string& mem, const std::string& t1, const std::string& t2) {
    if (!tops[mem].insert({t1, t2}).second) return;
    for (const auto& [dstate, child] : consumers[mem])
      add_pair(dstate, child == 1 ? t1 : t2);
  }

  bool emit(Rule r) {
    std::string key = print_rule(r);
    if (!emitted_rules.insert(key).second) return false;
    out.rules.push_back(std::move(r));
    return true;
  }

  // ---- state formulas ----

  DetState keep_state(const std::string& f, const DetState& d1, const DetState& d2,
                      int side, Guard sign) {
    DetState n;
    n.flag = side == 1 ? d1.flag : d2.flag;
    for (const Rule* r : idx.rules(f)) {
      if (r->guard != sign) continue;
      if (d1.reach.count(r->q1) && d2.reach.count(r->q2)) n.reach.insert(r->target);
    }
    const Track& tr = side == 1 ? d1.track : d2.track;
    const auto& partner = side == 1 ? d2.reach : d1.reach;
    for (const auto& [q, qmid] : tr) {
      for (const Rule* r : idx.rules(f)) {
        if (r->guard != sign) continue;
        const std::string& own = side == 1 ? r->q1 : r->q2;
        const std::string& other = side == 1 ? r->q2 : r->q1;
        if (own == qmid && partner.count(other)) n.track.insert({q, r->target});
      }
    }
    return n;
  }

  DetState push_state(const std::string& f, const DetState& d1, const DetState& d2) {
    DetState n;
    n.flag = 1;
    for (const Rule* r : idx.rules(f))
      if (d1.reach.count(r->q1) && d2.reach.count(r->q2)) n.reach.insert(r->target);
    n.track = id_track(a);
    return n;
  }

  // pop of a binary memory symbol H on son `side`, keeping child `child`
  DetState pop_state(const std::string& f, const DetState& d1, const DetState& d2, int side,
                     int child, const MemSym& h) {
    const DetState& q1s = state_of.at(h.d1);
    const DetState& q2s = state_of.at(h.d2);
    DetState n;
    n.flag = child == 1 ? q1s.flag : q2s.flag;
    const Track& walked = side == 1 ? d1.track : d2.track;   // from the push to here
    const auto& partner = side == 1 ? d2.reach : d1.reach;   // sibling states
    const Track& older = child == 1 ? q1s.track : q2s.track; // below the push

    // push rules of h.pushed_by producing some memory symbol hh, then the
    // pop rule of f reading the same hh.
    for (const Rule* push : idx.rules(h.pushed_by)) {
      if (push->action != ActionKind::PushBin) continue;
      if (!q1s.reach.count(push->q1) || !q2s.reach.count(push->q2)) continue;
      for (const Rule* pop : idx.rules(f)) {
        if (pop->action != ActionKind::PopSym || pop->mem_symbol != push->mem_symbol) continue;
        if (pop->pop_side != side || pop->pop_child != child) continue;
        const std::string& own = side == 1 ? pop->q1 : pop->q2;
        const std::string& other = side == 1 ? pop->q2 : pop->q1;
        if (!partner.count(other)) continue;
        if (!walked.count({push->target, own})) continue;
        n.reach.insert(pop->target);
      }
    }
    for (const auto& [q, qold] : older) {
      for (const Rule* push : idx.rules(h.pushed_by)) {
        if (push->action != ActionKind::PushBin) continue;
        const std::string& below = child == 1 ? push->q1 : push->q2;
        const std::string& below_other = child == 1 ? push->q2 : push->q1;
        const auto& other_reach = child == 1 ? q2s.reach : q1s.reach;
        if (below != qold || !other_reach.count(below_other)) continue;
        for (const Rule* pop : idx.rules(f)) {
          if (pop->action != ActionKind::PopSym || pop->mem_symbol != push->mem_symbol)
            continue;
          if (pop->pop_side != side || pop->pop_child != child) continue;
          const std::string& own = side == 1 ? pop->q1 : pop->q2;
          const std::string& other = side == 1 ? pop->q2 : pop->q1;
          if (!partner.count(other)) continue;
          if (!walked.count({push->target, own})) continue;
          n.track.insert({q, pop->target});
        }
      }
    }
    return n;
  }

  DetState popbot_state(const std::string& f, const DetState& d1, const DetState& d2,
                        int side) {
    DetState n;
    n.flag = 0;
    const Track& tr = side == 1 ? d1.track : d2.track;
    const auto& partner = side == 1 ? d2.reach : d1.reach;
    for (const Rule* r : idx.rules(f)) {
      if (r->action != ActionKind::PopBot || r->pop_side != side) continue;
      const std::string& own = side == 1 ? r->q1 : r->q2;
      const std::string& other = side == 1 ? r->q2 : r->q1;
      if (!partner.count(other)) continue;
      if ((side == 1 ? d1.reach : d2.reach).count(own)) n.reach.insert(r->target);
      for (const auto& [q, qmid] : tr)
        if (qmid == own) n.track.insert({q, r->target});
    }
    return n;
  }

  // ---- rule construction ----

  Rule make_rule(const std::string& f, Category cat, const std::string& d1,
                 const std::string& d2, Guard g, ActionKind act, const std::string& mem,
                 const std::string& tgt) {
    if (act == ActionKind::PopSym || act == ActionKind::PopBot) {
      Rule r = pop_rule(f, d1, d2, cat, act == ActionKind::PopBot ? "" : mem, tgt);
      r.guard = g;
      return r;
    }
    Rule r;
    r.symbol = f;
    r.q1 = d1;
    r.q2 = d2;
    r.guard = g;
    r.action = act;
    r.mem_symbol = mem;
    r.target = tgt;
    return r;
  }

  // by value: add_pair may grow `pairs` and relocate its storage
  void combine(std::pair<std::string, std::string> p1,
               std::pair<std::string, std::string> p2) {
    const DetState& d1 = state_of.at(p1.first);
    const DetState& d2 = state_of.at(p2.first);
    const std::string& t1 = p1.second;
    const std::string& t2 = p2.second;

    for (const auto& sdecl : a.sigma.base.symbols()) {
      if (sdecl.arity != 2) continue;
      const std::string& f = sdecl.name;
      Category cat = a.sigma.category(f);
      switch (cat) {
        case Category::Int1:
        case Category::Int2: {
          int side = cat == Category::Int1 ? 1 : 2;
          DetState n = keep_state(f, d1, d2, side, Guard::None);
          if (n.reach.empty()) break;
          std::string nn = intern_state(n);
          emit(make_rule(f, cat, p1.first, p2.first, Guard::None,
                         side == 1 ? ActionKind::Keep1 : ActionKind::Keep2, "", nn));
          add_pair(nn, side == 1 ? t1 : t2);
          break;
        }
        case Category::CInt1:
        case Category::CInt2:
        case Category::Bt1:
        case Category::Bt2: {
          int side = (cat == Category::CInt1 || cat == Category::Bt1) ? 1 : 2;
          bool bt = cat == Category::Bt1 || cat == Category::Bt2;
          Guard pos = bt ? Guard::BtEq : Guard::RelPos;
          Guard neg = bt ? Guard::BtNeq : Guard::RelNeg;
          for (Guard g : {pos, neg}) {
            DetState n = keep_state(f, d1, d2, side, g);
            if (n.reach.empty()) continue;
            std::string nn = intern_state(n);
            emit(make_rule(f, cat, p1.first, p2.first, g,
                           side == 1 ? ActionKind::Keep1 : ActionKind::Keep2, "", nn));
            add_pair(nn, side == 1 ? t1 : t2);
          }
          break;
        }
        case Category::Push: {
          DetState n = push_state(f, d1, d2);
          if (n.reach.empty()) break;
          std::string nn = intern_state(n);
          std::string p = intern_bin_mem(p1.first, p2.first, f);
          emit(make_rule(f, cat, p1.first, p2.first, Guard::None, ActionKind::PushBin, p, nn));
          add_pair(nn, p);
          add_top_entry(p, t1, t2);
          break;
        }
        default: {  // pops
          int side = pop_side(cat), child = pop_child(cat);
          const std::string& rt = side == 1 ? t1 : t2;
          if (rt.empty()) {
            // bot variant
            DetState n = popbot_state(f, d1, d2, side);
            if (n.reach.empty()) break;
            std::string nn = intern_state(n);
            emit(make_rule(f, cat, p1.first, p2.first, Guard::None, ActionKind::PopBot, "",
                           nn));
            add_pair(nn, "");
            break;
          }
          const MemSym& h = mem_of.at(rt);
          if (h.is_const) break;  // pop on a constant memory is stuck
          DetState n = pop_state(f, d1, d2, side, child, h);
          if (n.reach.empty()) break;
          std::string nn = intern_state(n);
          if (emit(make_rule(f, cat, p1.first, p2.first, Guard::None, ActionKind::PopSym, rt,
                             nn)))
            consumers[rt].push_back({nn, child});
          for (const auto& [u1, u2] : tops[rt]) add_pair(nn, child == 1 ? u1 : u2);
          break;
        }
      }
    }
  }

  Vtam run() {
    // leaves
    for (const auto& sdecl : a.sigma.base.symbols()) {
      if (sdecl.arity != 0) continue;
      Category cat = a.sigma.category(sdecl.name);
      DetState n;
      n.track = id_track(a);
      if (cat == Category::Int0) {
        n.flag = 0;
        for (const Rule* r : idx.rules(sdecl.name))
          if (r->action == ActionKind::EmitBot) n.reach.insert(r->target);
        if (n.reach.empty()) continue;
        std::string nn = intern_state(n);
        emit(make_rule(sdecl.name, cat, "", "", Guard::None, ActionKind::EmitBot, "", nn));
        add_pair(nn, "");
      } else {
        n.flag = 1;
        for (const Rule* r : idx.rules(sdecl.name))
          if (r->action == ActionKind::PushConst) n.reach.insert(r->target);
        if (n.reach.empty()) continue;
        std::string nn = intern_state(n);
        std::string cm = intern_const_mem(sdecl.name);
        emit(make_rule(sdecl.name, cat, "", "", Guard::None, ActionKind::PushConst, cm, nn));
        add_pair(nn, cm);
      }
    }

    std::size_t next = 0;
    while (next < pairs.size()) {
      auto cur = pairs[next++];
      // pair with everything seen so far (including itself), both orders
      for (std::size_t i = 0; i < next; ++i) {
        auto other = pairs[i];
        combine(cur, other);
        if (!(other == cur)) combine(other, cur);
      }
    }
    return out;
  }
};

}  // namespace

Vtam determinize(const Vtam& a) {
  validate(a);
  if (a.relation == RelationKind::SynEq)
    throw UnsupportedError(
        "determinization is unsupported for syntactic-equality constraints "
        "(the class is not closed under complement)");
  Determinizer det(a);
  Vtam out = det.run();
  validate(out);
  return out;
}

namespace {

void require_compatible(const Vtam& a1, const Vtam& a2) {
  if (!(a1.sigma == a2.sigma))
    throw ValidationError({"operands use different signature partitions"});
  if (a1.relation != a2.relation)
    throw ValidationError({"operands use different relation kinds"});
}

}  // namespace

Vtam vtam_union(const Vtam& a1, const Vtam& a2) {
  validate(a1);
  validate(a2);
  require_compatible(a1, a2);

  Vtam out;
  out.name = a1.name + "_or_" + a2.name;
  out.sigma = a1.sigma;
  out.relation = a1.relation;

  // disjoint state sets: rename clashes on the right operand
  std::set<std::string> left(a1.states.begin(), a1.states.end());
  std::map<std::string, std::string> ren;
  for (const auto& q : a2.states) {
    std::string n = q;
    int i = 1;
    while (left.count(n) || ren.count(n)) n = q + "_" + std::to_string(++i);
    ren[q] = n;
  }

  out.states = a1.states;
  for (const auto& q : a2.states) out.states.push_back(ren[q]);
  out.final = a1.final;
  for (const auto& q : a2.final) out.final.insert(ren[q]);

  out.gamma = a1.gamma;
  for (const auto& s : a2.gamma.symbols()) {
    if (out.gamma.contains(s.name)) {
      if (out.gamma.arity(s.name) != s.arity)
        throw ValidationError({"memory symbol '" + s.name + "' has conflicting arities"});
    } else {
      out.gamma.add(s.name, s.arity);
    }
  }

  out.rules = a1.rules;
  for (Rule r : a2.rules) {
    if (!r.q1.empty()) r.q1 = ren[r.q1];
    if (!r.q2.empty()) r.q2 = ren[r.q2];
    r.target = ren[r.target];
    out.rules.push_back(std::move(r));
  }
  validate(out);
  return out;
}

Vtam vtam_intersection(const Vtam& a1, const Vtam& a2) {
  validate(a1);
  validate(a2);
  require_compatible(a1, a2);

  Vtam out;
  out.name = a1.name + "_and_" + a2.name;
  out.sigma = a1.sigma;
  out.relation = a1.relation;

  std::map<std::pair<std::string, std::string>, std::string> st;
  auto state = [&](const std::string& x, const std::string& y) {
    auto key = std::make_pair(x, y);
    auto it = st.find(key);
    if (it != st.end()) return it->second;
    std::string base = x + "_" + y;
    std::string n = base;
    int i = 0;
    for (bool clash = true; clash;) {
      clash = false;
      for (const auto& [k, v] : st)
        if (v == n) clash = true;
      if (clash) n = base + "_" + std::to_string(++i);
    }
    st[key] = n;
    out.states.push_back(n);
    return n;
  };
  std::set<std::string> mem_added;
  auto mem = [&](const std::string& h1, const std::string& h2, int arity) {
    std::string n = "p_" + h1 + "_" + h2;
    if (mem_added.insert(n).second) out.gamma.add(n, arity);
    return n;
  };

  std::map<std::string, std::vector<const Rule*>> idx2;
  for (const auto& r : a2.rules) idx2[r.symbol].push_back(&r);

  for (const auto& r1 : a1.rules) {
    for (const Rule* r2p : idx2[r1.symbol]) {
      const Rule& r2 = *r2p;
      if (r1.action != r2.action) continue;
      if (r1.guard != r2.guard) continue;  // same sign only; others pair empty

      Rule pr;
      pr.symbol = r1.symbol;
      pr.guard = r1.guard;
      pr.action = r1.action;
      pr.pop_side = r1.pop_side;
      pr.pop_child = r1.pop_child;
      if (!r1.q1.empty()) pr.q1 = state(r1.q1, r2.q1);
      if (!r1.q2.empty()) pr.q2 = state(r1.q2, r2.q2);
      pr.target = state(r1.target, r2.target);
      switch (r1.action) {
        case ActionKind::PushConst: pr.mem_symbol = mem(r1.mem_symbol, r2.mem_symbol, 0); break;
        case ActionKind::PushBin:
        case ActionKind::PopSym: pr.mem_symbol = mem(r1.mem_symbol, r2.mem_symbol, 2); break;
        default: break;
      }
      out.rules.push_back(std::move(pr));
    }
  }

  for (const auto& [key, n] : st)
    if (a1.final.count(key.first) && a2.final.count(key.second)) out.final.insert(n);

  validate(out);
  return out;
}

Vtam vtam_complement(const Vtam& a) {
  if (a.relation == RelationKind::SynEq)
    throw UnsupportedError(
        "complement is unsupported for syntactic-equality constraints "
        "(the class is not effectively closed under complementation)");
  validate(a);
  Vtam det = is_deterministic(a) ? a : determinize(a);
  Vtam comp = complete(det);
  Vtam out = comp;
  out.name = a.name + "_not";
  out.final.clear();
  for (const auto& q : comp.states)
    if (!comp.final.count(q)) out.final.insert(q);
  return out;
}

}  // namespace vtam
