#include "cg/argumentation.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cg {

namespace {

// Assumptions and proofs of one theory, in normal form.
struct Facts {
  Signature sig;
  std::vector<Assumption> assumptions;
  std::vector<Assumption> proofs;
};

Facts facts_of(const ContextGraph& g, const std::string& theory, const KernelOptions& options) {
  Facts f;
  f.sig = signature_of(g, theory);
  TypingContext ctx(f.sig, options);
  for (const auto& d : flatten(g, theory)) {
    if (!d.type) continue;
    if (auto p = assumption_prop(ctx, *d.type)) f.assumptions.push_back({d.name, *p});
    if (auto p = proof_prop(ctx, *d.type)) f.proofs.push_back({d.name, *p});
  }
  return f;
}

class FactCache {
 public:
  FactCache(const ContextGraph& g, const KernelOptions& options) : g_(g), options_(options) {}

  const Facts& operator()(const std::string& theory) {
    auto it = cache_.find(theory);
    if (it == cache_.end()) it = cache_.emplace(theory, facts_of(g_, theory, options_)).first;
    return it->second;
  }

  const KernelOptions& options() const { return options_; }

 private:
  const ContextGraph& g_;
  KernelOptions options_;
  std::map<std::string, Facts> cache_;
};

bool same_edge(const AttackEdge& a, const std::string& attacker, const std::string& target, const Term& w) {
  return a.attacker == attacker && a.target == target && alpha_equal(a.witness, w);
}

bool contains_edge(const std::vector<AttackEdge>& edges, const std::string& attacker, const std::string& target,
                   const Term& w) {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const AttackEdge& e) { return same_edge(e, attacker, target, w); });
}

bool proves(const Facts& f, const Term& w) {
  return std::any_of(f.proofs.begin(), f.proofs.end(), [&](const Assumption& p) { return alpha_equal(p.prop, w); });
}

const QName* local_named(const std::vector<Declaration>& decls, const std::string& local) {
  for (const auto& d : decls) {
    if (d.name.name == local) return &d.name;
  }
  return nullptr;
}

bool negated(const Term& p) {
  Spine s = spine_of(p);
  return s.head.is(Term::Kind::Const) && s.head.qname().name == "¬" && s.args.size() == 1;
}

}  // namespace

std::vector<Assumption> assumptions_of(const ContextGraph& g, const std::string& theory,
                                       const KernelOptions& options) {
  return facts_of(g, theory, options).assumptions;
}

std::vector<Assumption> proofs_of(const ContextGraph& g, const std::string& theory, const KernelOptions& options) {
  return facts_of(g, theory, options).proofs;
}

Term contrary(const TypingContext& ctx, const Term& p) {
  Term n = normalize(ctx, p);
  if (negated(n)) return spine_of(n).args.front();
  const auto& nots = ctx.signature().lookup("¬");
  QName neg = nots.empty() ? QName{"FOLND", "¬"} : nots.front();
  return normalize(ctx, Term::app(Term::constant(neg), n));
}

AttackCheck verify_attack(const ContextGraph& g, const AttackEdge& edge, const KernelOptions& options) {
  AttackCheck out;
  if (!g.has_theory(edge.attacker) || !g.has_theory(edge.target)) {
    out.diagnosis = "unknown endpoint";
    return out;
  }
  Facts att = facts_of(g, edge.attacker, options);
  Facts tgt = facts_of(g, edge.target, options);
  Term w;
  try {
    w = normalize(TypingContext(att.sig, options), edge.witness);
  } catch (const Error& e) {
    out.diagnosis = e.message();
    return out;
  }

  const Assumption* proof = nullptr;
  for (const auto& p : att.proofs) {
    if (alpha_equal(p.prop, w)) {
      proof = &p;
      break;
    }
  }
  if (!proof) {
    out.diagnosis = edge.attacker + " proves no " + describe(w);
    return out;
  }
  TypingContext tctx(tgt.sig, options);
  const Assumption* assumption = nullptr;
  for (const auto& a : tgt.assumptions) {
    if (alpha_equal(contrary(tctx, a.prop), w)) {
      assumption = &a;
      break;
    }
  }
  if (!assumption) {
    out.diagnosis = edge.target + " has no assumption contrary to " + describe(w);
    return out;
  }
  out.proof = proof->name;
  out.assumption = assumption->name;

  // Pattern views into both endpoints, when the pattern theories are loaded.
  if (g.has_theory("Defeater") && g.has_theory("Assumption")) {
    auto dflat = flatten(g, "Defeater");
    auto aflat = flatten(g, "Assumption");
    const QName* prop = local_named(dflat, "Prop");
    const QName* pf = local_named(dflat, "Proof");
    const QName* ass = local_named(aflat, "Ass");
    if (prop && pf && ass) {
      out.defeater.name = edge.attacker + "/defeater";
      out.defeater.domain = "Defeater";
      out.defeater.codomain = edge.attacker;
      out.defeater.assignment = {{*prop, w}, {*pf, Term::constant(proof->name)}};
      out.assumed.name = edge.target + "/assumption";
      out.assumed.domain = "Assumption";
      out.assumed.codomain = edge.target;
      out.assumed.assignment = {{*prop, w}, {*ass, Term::constant(assumption->name)}};
      try {
        check_morphism(g, out.defeater, false, options);
        // `Ass : ⊦~ ¬ Prop` only fits assumptions that are negations.
        if (negated(assumption->prop)) check_morphism(g, out.assumed, false, options);
      } catch (const Error& e) {
        out.diagnosis = e.message();
        return out;
      }
    }
  }
  out.ok = true;
  return out;
}

std::vector<std::string> default_scope(const ContextGraph& g) {
  std::vector<std::string> out;
  for (const auto& t : g.theory_names()) {
    if (!g.is_prelude(t)) out.push_back(t);
  }
  return out;
}

namespace {

std::vector<AttackEdge> closure_with(FactCache& facts, const std::vector<std::string>& scope) {
  std::vector<AttackEdge> out;
  for (const auto& target : scope) {
    const Facts& tf = facts(target);
    TypingContext tctx(tf.sig, facts.options());
    for (const auto& a : tf.assumptions) {
      Term w = contrary(tctx, a.prop);
      for (const auto& attacker : scope) {
        if (!proves(facts(attacker), w) || contains_edge(out, attacker, target, w)) continue;
        AttackEdge e;
        e.attacker = attacker;
        e.target = target;
        e.witness = w;
        e.provenance = AttackEdge::Provenance::Detected;
        e.verified = true;
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<AttackEdge> attack_closure(const ContextGraph& g, const std::vector<std::string>& scope,
                                       const KernelOptions& options) {
  FactCache facts(g, options);
  return closure_with(facts, scope);
}

std::vector<AttackEdge> detect_attacks(const ContextGraph& g, const std::vector<std::string>& scope,
                                       const KernelOptions& options) {
  auto all = attack_closure(g, scope, options);
  std::vector<AttackEdge> out;
  for (const auto& e : all) {
    bool explained = std::any_of(all.begin(), all.end(), [&](const AttackEdge& o) {
      if (&o == &e || !alpha_equal(o.witness, e.witness)) return false;
      if (o.attacker == e.attacker && o.target == e.target) return false;
      return includes(g, e.attacker, o.attacker) && includes(g, e.target, o.target);
    });
    if (!explained) out.push_back(e);
  }
  return out;
}

std::vector<AttackEdge> inherit_attacks(const ContextGraph& g, const std::vector<AttackEdge>& base,
                                        const std::vector<std::string>& scope, const KernelOptions& options) {
  FactCache facts(g, options);
  std::vector<AttackEdge> out = base;
  for (const auto& e : base) {
    const std::string origin = e.attacker + "->" + e.target;
    for (const auto& t1 : scope) {
      if (t1 == e.attacker || !includes(g, t1, e.attacker)) continue;
      for (const auto& t2 : scope) {
        if (t2 == e.target || !includes(g, t2, e.target)) continue;
        AttackEdge lift = e;
        lift.provenance = AttackEdge::Provenance::Inherited;
        lift.base = origin;
        lift.verified = true;
        lift.span = {};
        if (proves(facts(t2), e.witness)) {
          lift.attacker = t2;
        } else {
          lift.attacker = t1;
        }
        lift.target = t2;
        if (contains_edge(out, lift.attacker, lift.target, lift.witness)) continue;
        out.push_back(std::move(lift));
      }
    }
  }
  return out;
}

std::string to_string(Label l) {
  switch (l) {
    case Label::In:
      return "IN";
    case Label::Out:
      return "OUT";
    case Label::Undec:
      return "UNDEC";
  }
  return "?";
}

std::string to_string(Semantics s) {
  switch (s) {
    case Semantics::Grounded:
      return "grounded";
    case Semantics::Preferred:
      return "preferred";
    case Semantics::Complete:
      return "complete";
  }
  return "?";
}

Semantics parse_semantics(const std::string& s) {
  if (s == "grounded") return Semantics::Grounded;
  if (s == "preferred") return Semantics::Preferred;
  if (s == "complete") return Semantics::Complete;
  throw Error(ErrorCode::InvalidRequest, "unknown semantics " + s);
}

AttackGraph AttackGraph::from_edges(const std::vector<std::string>& nodes, const std::vector<AttackEdge>& edges) {
  AttackGraph g;
  g.nodes = nodes;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    auto a = index.find(e.attacker), t = index.find(e.target);
    if (a == index.end() || t == index.end()) continue;
    if (seen.insert({a->second, t->second}).second) g.edges.emplace_back(a->second, t->second);
  }
  return g;
}

std::vector<std::vector<std::size_t>> AttackGraph::attackers() const {
  std::vector<std::vector<std::size_t>> out(nodes.size());
  for (const auto& [a, t] : edges) out[t].push_back(a);
  return out;
}

Labeling grounded(const AttackGraph& g) {
  Labeling l;
  l.semantics = Semantics::Grounded;
  l.labels.assign(g.nodes.size(), Label::Undec);
  auto att = g.attackers();
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (l.labels[i] != Label::Undec) continue;
      bool all_out = true, some_in = false;
      for (auto a : att[i]) {
        all_out = all_out && l.labels[a] == Label::Out;
        some_in = some_in || l.labels[a] == Label::In;
      }
      if (all_out) {
        l.labels[i] = Label::In;
        changed = true;
      } else if (some_in) {
        l.labels[i] = Label::Out;
        changed = true;
      }
    }
  }
  return l;
}

bool is_complete(const AttackGraph& g, const Labeling& l) {
  if (l.labels.size() != g.nodes.size()) return false;
  auto att = g.attackers();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    bool all_out = true, some_in = false;
    for (auto a : att[i]) {
      all_out = all_out && l.labels[a] == Label::Out;
      some_in = some_in || l.labels[a] == Label::In;
    }
    Label want = all_out ? Label::In : some_in ? Label::Out : Label::Undec;
    if (l.labels[i] != want) return false;
  }
  return true;
}

std::vector<Labeling> complete_labelings(const AttackGraph& g) {
  auto att = g.attackers();
  std::vector<std::size_t> attacked;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!att[i].empty()) attacked.push_back(i);
  }
  if (attacked.size() > kEnumerationBound) {
    throw Error(ErrorCode::SemanticsTooLarge, std::to_string(attacked.size()) +
                                                  " attacked theories exceed the enumeration bound of " +
                                                  std::to_string(kEnumerationBound));
  }
  std::vector<Labeling> out;
  const std::size_t n = attacked.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<bool> in(g.nodes.size(), false);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) in[i] = att[i].empty();
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::size_t{1} << k)) in[attacked[k]] = true;
    }
    Labeling l;
    l.semantics = Semantics::Complete;
    l.labels.assign(g.nodes.size(), Label::Undec);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (in[i]) {
        l.labels[i] = Label::In;
      } else if (std::any_of(att[i].begin(), att[i].end(), [&](std::size_t a) { return in[a]; })) {
        l.labels[i] = Label::Out;
      }
    }
    if (is_complete(g, l)) out.push_back(std::move(l));
  }
  return out;
}

std::vector<Labeling> preferred_labelings(const AttackGraph& g) {
  auto all = complete_labelings(g);
  auto subset = [](const Labeling& a, const Labeling& b) {
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (a.labels[i] == Label::In && b.labels[i] != Label::In) return false;
    }
    return true;
  };
  std::vector<Labeling> out;
  for (const auto& l : all) {
    bool maximal = std::none_of(all.begin(), all.end(), [&](const Labeling& o) { return !(o == l) && subset(l, o); });
    if (!maximal) continue;
    Labeling p = l;
    p.semantics = Semantics::Preferred;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Labeling> label(const AttackGraph& g, Semantics s) {
  switch (s) {
    case Semantics::Grounded:
      return {grounded(g)};
    case Semantics::Preferred:
      return preferred_labelings(g);
    case Semantics::Complete:
      return complete_labelings(g);
  }
  return {};
}

DefeatedReport defeated_report(const ContextGraph& g, const AttackGraph& ag, const Labeling& l) {
  DefeatedReport r;
  std::set<std::string> out;
  for (std::size_t i = 0; i < ag.nodes.size() && i < l.labels.size(); ++i) {
    if (l.labels[i] == Label::Out) {
      r.out.push_back(ag.nodes[i]);
      out.insert(ag.nodes[i]);
    }
  }
  for (const auto& p : g.pushouts()) {
    if (!g.has_morphism(p.view)) continue;
    if (out.count(g.morphism(p.view).codomain)) r.distinguished.push_back(p.name);
  }
  for (const auto& [a, t] : ag.edges) {
    if (a == t) r.inconsistent.push_back(ag.nodes[a]);
  }
  return r;
}

Argumentation argue(const ContextGraph& g, Semantics s, const KernelOptions& options) {
  Argumentation out;
  auto scope = default_scope(g);
  out.base = detect_attacks(g, scope, options);
  out.edges = inherit_attacks(g, out.base, scope, options);
  std::set<std::string> in_scope(scope.begin(), scope.end());
  for (const auto& asserted : g.attacks()) {
    if (!in_scope.count(asserted.attacker) || !in_scope.count(asserted.target)) continue;
    AttackCheck check = verify_attack(g, asserted, options);
    if (!check.ok) {
      out.diagnostics.emplace_back(ErrorCode::ObligationFailed,
                                   "attack " + asserted.attacker + " -> " + asserted.target +
                                       " does not hold: " + check.diagnosis,
                                   asserted.span);
      continue;
    }
    Term w = normalize(TypingContext(signature_of(g, asserted.attacker), options), asserted.witness);
    bool known = false;
    for (auto& e : out.edges) {
      if (same_edge(e, asserted.attacker, asserted.target, w)) {
        e.span = asserted.span;
        known = true;
      }
    }
    if (known) continue;
    AttackEdge e = asserted;
    e.witness = w;
    e.verified = true;
    out.base.push_back(e);
    out.edges.push_back(std::move(e));
  }
  out.graph = AttackGraph::from_edges(scope, out.edges);
  out.labelings = label(out.graph, s);
  return out;
}

}  // namespace cg
