#include "vtamlib/regular_ta.hpp"

#include <algorithm>
#include <map>

namespace vtam {

bool Ta::has_state(const std::string& s) const {
  return std::find(states.begin(), states.end(), s) != states.end();
}

void ta_validate(const Ta& b) {
  std::vector<std::string> diags;
  std::set<std::string> seen;
  for (const auto& q : b.states) {
    if (!is_identifier(q)) diags.push_back("state '" + q + "' is not a valid identifier");
    if (!seen.insert(q).second) diags.push_back("duplicate state '" + q + "'");
  }
  for (const auto& q : b.final)
    if (!b.has_state(q)) diags.push_back("final state '" + q + "' not declared");
  for (const auto& r : b.rules) {
    if (!b.gamma.contains(r.symbol)) {
      diags.push_back("rule uses undeclared symbol '" + r.symbol + "'");
      continue;
    }
    if (b.gamma.arity(r.symbol) != static_cast<int>(r.children.size()))
      diags.push_back("rule for '" + r.symbol + "' has wrong child count");
    for (const auto& c : r.children)
      if (!b.has_state(c)) diags.push_back("rule child state '" + c + "' not declared");
    if (!b.has_state(r.target)) diags.push_back("rule target '" + r.target + "' not declared");
  }
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

namespace {

std::set<std::string> reach_states(const Ta& b, const Term& m) {
  std::vector<std::set<std::string>> kids;
  kids.reserve(m.children().size());
  for (const auto& c : m.children()) kids.push_back(reach_states(b, c));
  std::set<std::string> out;
  for (const auto& r : b.rules) {
    if (r.symbol != m.root()) continue;
    if (r.children.size() != kids.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < kids.size(); ++i)
      if (!kids[i].count(r.children[i])) { ok = false; break; }
    if (ok) out.insert(r.target);
  }
  return out;
}

struct Best {
  std::size_t size = 0;
  Term term;
};

// Minimal accepted term per state; (size, print) ordering.
std::map<std::string, Best> min_terms(const Ta& b) {
  std::map<std::string, Best> best;
  auto better = [](const Best& cand, const Best& cur) {
    if (cand.size != cur.size) return cand.size < cur.size;
    return print_term(cand.term) < print_term(cur.term);
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : b.rules) {
      Best cand;
      cand.size = 1;
      std::vector<Term> kids;
      bool ok = true;
      for (const auto& c : r.children) {
        auto it = best.find(c);
        if (it == best.end()) { ok = false; break; }
        cand.size += it->second.size;
        kids.push_back(it->second.term);
      }
      if (!ok) continue;
      cand.term = Term(r.symbol, std::move(kids));
      auto it = best.find(r.target);
      if (it == best.end() || better(cand, it->second)) {
        best[r.target] = cand;
        changed = true;
      }
    }
  }
  return best;
}

}  // namespace

bool ta_accepts(const Ta& b, const Term& m) {
  auto rs = reach_states(b, m);
  for (const auto& q : rs)
    if (b.final.count(q)) return true;
  return false;
}

bool ta_is_empty(const Ta& b) {
  auto best = min_terms(b);
  for (const auto& q : b.final)
    if (best.count(q)) return false;
  return true;
}

Term ta_witness(const Ta& b) {
  auto best = min_terms(b);
  const Best* chosen = nullptr;
  for (const auto& q : b.final) {
    auto it = best.find(q);
    if (it == best.end()) continue;
    if (!chosen || it->second.size < chosen->size ||
        (it->second.size == chosen->size &&
         print_term(it->second.term) < print_term(chosen->term)))
      chosen = &it->second;
  }
  if (!chosen) throw ValidationError({"witness requested on an empty tree automaton"});
  return chosen->term;
}

namespace {

std::string set_name(const std::set<std::string>& s) {
  std::string n = "u";
  for (const auto& q : s) n += "_" + q;
  return s.empty() ? "u_none" : n;
}

}  // namespace

Ta ta_determinize(const Ta& b) {
  // Subset construction; output is complete over reachable subsets plus the
  // empty sink.
  Ta out;
  out.name = b.name + "_det";
  out.gamma = b.gamma;

  std::map<std::set<std::string>, std::string> names;
  std::vector<std::set<std::string>> worklist;
  auto intern = [&](const std::set<std::string>& s) {
    auto it = names.find(s);
    if (it != names.end()) return it->second;
    std::string n = set_name(s) + "_" + std::to_string(names.size());
    names[s] = n;
    out.states.push_back(n);
    worklist.push_back(s);
    return n;
  };

  std::set<std::string> sink;  // empty subset
  intern(sink);
  for (const auto& c : b.gamma.constants()) {
    std::set<std::string> s;
    for (const auto& r : b.rules)
      if (r.symbol == c) s.insert(r.target);
    out.rules.push_back({c, {}, intern(s)});
  }

  std::vector<std::set<std::string>> known;
  std::size_t next = 0;
  while (next < worklist.size()) {
    auto cur = worklist[next++];
    known.push_back(cur);
    // pair cur with every known subset on both sides
    for (const auto& other : known) {
      for (int side = 0; side < 2; ++side) {
        const auto& s1 = side == 0 ? cur : other;
        const auto& s2 = side == 0 ? other : cur;
        if (side == 1 && s1 == s2) continue;
        for (const auto& f : b.gamma.binaries()) {
          std::set<std::string> tgt;
          for (const auto& r : b.rules) {
            if (r.symbol != f || r.children.size() != 2) continue;
            if (s1.count(r.children[0]) && s2.count(r.children[1])) tgt.insert(r.target);
          }
          out.rules.push_back({f, {names[s1], names[s2]}, intern(tgt)});
        }
      }
    }
  }

  std::sort(out.rules.begin(), out.rules.end());
  out.rules.erase(std::unique(out.rules.begin(), out.rules.end()), out.rules.end());
  for (const auto& [s, n] : names)
    for (const auto& q : b.final)
      if (s.count(q)) out.final.insert(n);
  return out;
}

Ta ta_complement(const Ta& b) {
  Ta det = ta_determinize(b);
  Ta out = det;
  out.name = b.name + "_cmp";
  out.final.clear();
  for (const auto& q : det.states)
    if (!det.final.count(q)) out.final.insert(q);
  return out;
}

Ta ta_product(const Ta& b1, const Ta& b2, TaProductMode mode) {
  if (!(b1.gamma == b2.gamma))
    throw ValidationError({"ta_product requires identical memory signatures"});
  // Complete deterministic forms make the product total, which both modes
  // need (union must not lose runs that die in one operand).
  Ta d1 = ta_determinize(b1);
  Ta d2 = ta_determinize(b2);
  Ta out;
  out.name = b1.name + "_x_" + b2.name;
  out.gamma = b1.gamma;

  std::map<std::pair<std::string, std::string>, std::string> names;
  auto intern = [&](const std::string& x, const std::string& y) {
    auto key = std::make_pair(x, y);
    auto it = names.find(key);
    if (it != names.end()) return it->second;
    std::string n = "p" + std::to_string(names.size());
    names[key] = n;
    out.states.push_back(n);
    return n;
  };

  std::map<std::string, std::vector<const TaRule*>> idx2;
  for (const auto& r : d2.rules) idx2[r.symbol].push_back(&r);
  for (const auto& r1 : d1.rules) {
    for (const TaRule* r2 : idx2[r1.symbol]) {
      if (r1.children.size() != r2->children.size()) continue;
      std::vector<std::string> kids;
      bool ok = true;
      for (std::size_t i = 0; i < r1.children.size(); ++i)
        kids.push_back(intern(r1.children[i], r2->children[i]));
      if (!ok) continue;
      out.rules.push_back({r1.symbol, std::move(kids), intern(r1.target, r2->target)});
    }
  }
  for (const auto& [key, n] : names) {
    bool f1 = d1.final.count(key.first) > 0;
    bool f2 = d2.final.count(key.second) > 0;
    if (mode == TaProductMode::Intersect ? (f1 && f2) : (f1 || f2)) out.final.insert(n);
  }
  return out;
}

Ta ta_of_finite_set(const std::vector<Term>& ms, const RankedSignature& gamma) {
  Ta out;
  out.name = "finite";
  out.gamma = gamma;

  std::map<Term, std::string> state_of;
  std::string sink = "s_other";
  out.states.push_back(sink);

  std::vector<Term> subterms;
  struct Collect {
    static void rec(const Term& t, std::map<Term, bool>& seen, std::vector<Term>& out) {
      if (seen.count(t)) return;
      seen[t] = true;
      for (const auto& c : t.children()) rec(c, seen, out);
      out.push_back(t);  // children first: post-order keeps sizes ascending
    }
  };
  std::map<Term, bool> seen;
  for (const auto& m : ms) Collect::rec(m, seen, subterms);
  for (std::size_t i = 0; i < subterms.size(); ++i) {
    std::string n = "s" + std::to_string(i);
    state_of[subterms[i]] = n;
    out.states.push_back(n);
  }

  auto state_for = [&](const Term& t) {
    auto it = state_of.find(t);
    return it == state_of.end() ? sink : it->second;
  };

  for (const auto& c : gamma.constants()) {
    Term t(c);
    out.rules.push_back({c, {}, state_for(t)});
  }
  for (const auto& f : gamma.binaries()) {
    // known-subterm pairs that assemble into a known subterm
    for (const auto& [t, st] : state_of) {
      if (t.root() != f || t.children().size() != 2) continue;
      out.rules.push_back({f, {state_for(t.children()[0]), state_for(t.children()[1])}, st});
    }
  }
  // everything else drains into the sink
  for (const auto& f : gamma.binaries()) {
    std::set<std::pair<std::string, std::string>> covered;
    for (const auto& r : out.rules)
      if (r.symbol == f && r.children.size() == 2)
        covered.insert({r.children[0], r.children[1]});
    for (const auto& s1 : out.states)
      for (const auto& s2 : out.states)
        if (!covered.count({s1, s2})) out.rules.push_back({f, {s1, s2}, sink});
  }

  std::set<Term> in_set(ms.begin(), ms.end());
  for (const auto& [t, st] : state_of)
    if (in_set.count(t)) out.final.insert(st);
  return out;
}

Ta ta_complement_of_finite_set(const std::vector<Term>& ms, const RankedSignature& gamma) {
  Ta out = ta_of_finite_set(ms, gamma);
  out.name = "cofinite";
  std::set<std::string> flipped;
  for (const auto& s : out.states)
    if (!out.final.count(s)) flipped.insert(s);
  out.final = std::move(flipped);
  return out;
}

}  // namespace vtam
