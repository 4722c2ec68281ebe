#include "cg/export.hpp"

#include <set>
#include <sstream>

#include "json.hpp"

namespace cg {

using json = nlohmann::ordered_json;

syntax::ExprPtr to_expr(const Term& t) {
  using syntax::Expr;
  switch (t.kind()) {
    case Term::Kind::Type:
      return Expr::make_type();
    case Term::Kind::Const:
      return Expr::make_name(t.qname().name);
    case Term::Kind::Var:
      return Expr::make_name(t.name());
    case Term::Kind::Meta:
      return Expr::make_hole();
    case Term::Kind::App:
      return Expr::make_app(to_expr(t.fn()), to_expr(t.arg()));
    case Term::Kind::Lambda:
      return Expr::make_lambda(t.name(), t.has_annotation() ? to_expr(t.annotation()) : nullptr, to_expr(t.body()));
    case Term::Kind::Pi: {
      bool named = t.implicit() || occurs_free(t.name(), t.body());
      return Expr::make_pi(named ? t.name() : "", to_expr(t.domain()), to_expr(t.body()), t.implicit());
    }
  }
  return Expr::make_hole();
}

std::string render(const Term& t, const syntax::FixityTable& fixities) {
  return syntax::print_expr(to_expr(t), fixities);
}

syntax::FixityTable graph_fixities(const ContextGraph& g) {
  syntax::FixityTable out;
  for (const auto& name : g.theory_names()) {
    for (const auto& d : g.theory(name).decls) {
      if (d.fixity) out[d.name.name] = *d.fixity;
    }
  }
  return out;
}

namespace {

syntax::DeclSyntax decl_syntax(const Declaration& d) {
  syntax::DeclSyntax s;
  s.name = d.name.name;
  if (d.type && !(d.type_inferred && d.definiens)) s.type = to_expr(*d.type);
  if (d.definiens) s.definiens = to_expr(*d.definiens);
  s.fixity = d.fixity;
  return s;
}

syntax::ViewItem view_syntax(const ContextGraph& g, const Morphism& m) {
  syntax::ViewItem v;
  v.name = m.name;
  v.domain = m.domain;
  v.codomain = m.codomain;
  // Assignments in the domain's declaration order.
  for (const auto& d : flatten(g, m.domain)) {
    auto a = m.assignment.find(d.name);
    if (a != m.assignment.end()) v.assignments.push_back({d.name.name, to_expr(a->second), {}});
  }
  return v;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

syntax::SourceGraphAST materialize(const ContextGraph& g) {
  syntax::SourceGraphAST ast;
  std::set<std::string> emitted;
  std::set<std::string> views_done;
  auto flush_views = [&] {
    for (const auto& name : g.morphism_names()) {
      const Morphism& m = g.morphism(name);
      if (m.kind != MorphismKind::View || views_done.count(name)) continue;
      if (!emitted.count(m.domain) || !emitted.count(m.codomain)) continue;
      views_done.insert(name);
      ast.items.emplace_back(view_syntax(g, m));
    }
  };
  for (const auto& name : g.theory_names()) {
    if (g.is_prelude(name)) {
      emitted.insert(name);
      continue;
    }
    const Theory& t = g.theory(name);
    syntax::TheoryItem item;
    item.name = name;
    if (t.meta && t.meta != g.default_meta) item.meta = t.meta;
    for (const auto& inc : t.includes) item.body.emplace_back(syntax::IncludeSyntax{inc, {}});
    for (const auto& d : t.decls) item.body.emplace_back(decl_syntax(d));
    ast.items.emplace_back(std::move(item));
    emitted.insert(name);
    flush_views();
  }
  for (const auto& a : g.attacks()) {
    ast.items.emplace_back(syntax::AttackItem{a.attacker, a.target, to_expr(a.witness), {}});
  }
  return ast;
}

std::string print_elaborated(const ContextGraph& g) { return syntax::print_graph(materialize(g), graph_fixities(g)); }

std::string print_flattened(const ContextGraph& g, const std::string& theory) {
  const Theory& t = g.theory(theory);
  syntax::TheoryItem item;
  item.name = theory;
  item.meta = t.meta;
  for (const auto& d : flatten(g, theory)) {
    if (g.is_prelude(d.name.theory)) continue;
    item.body.emplace_back(decl_syntax(d));
  }
  syntax::SourceGraphAST ast;
  ast.items.emplace_back(std::move(item));
  return syntax::print_graph(ast, graph_fixities(g));
}

std::string export_dot(const ContextGraph& g, const std::vector<AttackEdge>& attacks) {
  std::ostringstream os;
  os << "digraph cg {\n";
  os << "  rankdir=BT;\n";
  os << "  node [shape=box];\n";
  std::set<std::string> shown;
  for (const auto& name : g.theory_names()) {
    if (g.is_prelude(name)) continue;
    shown.insert(name);
    const Theory& t = g.theory(name);
    os << "  " << quote(name);
    if (t.generated_by) os << " [class=\"pushout\", style=filled, fillcolor=lightblue, xlabel=\"pushout\"]";
    os << ";\n";
  }
  for (const auto& name : g.theory_names()) {
    if (!shown.count(name)) continue;
    for (const auto& inc : g.theory(name).includes) {
      if (shown.count(inc)) os << "  " << quote(inc) << " -> " << quote(name) << " [style=solid];\n";
    }
  }
  for (const auto& name : g.morphism_names()) {
    const Morphism& m = g.morphism(name);
    if (m.kind != MorphismKind::View || !shown.count(m.domain) || !shown.count(m.codomain)) continue;
    os << "  " << quote(m.domain) << " -> " << quote(m.codomain) << " [style=dashed, label=" << quote(m.name)
       << "];\n";
  }
  for (const auto& e : attacks) {
    if (!shown.count(e.attacker) || !shown.count(e.target)) continue;
    os << "  " << quote(e.attacker) << " -> " << quote(e.target) << " [style=bold, color=red, label="
       << quote(to_string(e.provenance)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string argue_json(const ContextGraph& g, const Argumentation& a, Semantics s) {
  const auto fx = graph_fixities(g);
  json out;
  out["semantics"] = to_string(s);
  json nodes = json::array();
  const Labeling* first = a.labelings.empty() ? nullptr : &a.labelings.front();
  for (std::size_t i = 0; i < a.graph.nodes.size(); ++i) {
    nodes.push_back({{"name", a.graph.nodes[i]}, {"label", first ? to_string(first->labels[i]) : "UNDEC"}});
  }
  out["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const auto& e : a.edges) {
    json j = {{"from", e.attacker},
              {"to", e.target},
              {"witness", render(e.witness, fx)},
              {"provenance", to_string(e.provenance)}};
    if (!e.base.empty()) j["base"] = e.base;
    edges.push_back(std::move(j));
  }
  out["edges"] = std::move(edges);
  DefeatedReport report;
  if (first) report = defeated_report(g, a.graph, *first);
  out["defeated"] = report.out;
  out["distinguished"] = report.distinguished;
  out["inconsistent"] = report.inconsistent;
  json all = json::array();
  for (const auto& l : a.labelings) {
    json in = json::array(), outs = json::array(), undec = json::array();
    for (std::size_t i = 0; i < l.labels.size(); ++i) {
      (l.labels[i] == Label::In ? in : l.labels[i] == Label::Out ? outs : undec).push_back(a.graph.nodes[i]);
    }
    all.push_back({{"in", in}, {"out", outs}, {"undec", undec}});
  }
  out["labelings"] = std::move(all);
  json diags = json::array();
  for (const auto& e : a.diagnostics) diags.push_back(e.what());
  out["diagnostics"] = std::move(diags);
  return out.dump(2) + "\n";
}

namespace {

json candidate_json(const ViewCandidate& c, const syntax::FixityTable& fx) {
  json assignment = json::object();
  for (const auto& [k, v] : c.assignment) assignment[k.name] = render(v, fx);
  json obligations = json::array();
  for (const auto& o : c.discharged) {
    obligations.push_back({{"constant", o.constant.name}, {"value", render(o.value, fx)}, {"type", render(o.expected, fx)}});
  }
  return {{"score", c.score},
          {"status", c.total() ? "total" : "partial"},
          {"assignment", std::move(assignment)},
          {"obligations", std::move(obligations)}};
}

json verdict_json(const Verdict& v) {
  json missing = json::array();
  for (const auto& q : v.missing) missing.push_back(q.name);
  return {{"holds", v.holds}, {"missing", std::move(missing)}, {"evidence", v.evidence}};
}

}  // namespace

std::string analogy_json(const ContextGraph& g, const AnalogyReport& r) {
  const auto fx = graph_fixities(g);
  json out;
  out["from"] = r.precedent;
  out["to"] = r.present;
  json cands = json::array();
  for (const auto& c : r.candidates) cands.push_back(candidate_json(c, fx));
  out["candidates"] = std::move(cands);
  out["A1"] = verdict_json(r.a1);
  out["A2"] = verdict_json(r.a2);
  out["A3"] = verdict_json(r.a3);
  out["A4"] = r.a4;
  return out.dump(2) + "\n";
}

std::string graph_json(const ContextGraph& g) {
  const auto fx = graph_fixities(g);
  json theories = json::array();
  for (const auto& name : g.theory_names()) {
    if (g.is_prelude(name)) continue;
    const Theory& t = g.theory(name);
    json decls = json::array();
    for (const auto& d : t.decls) {
      json j = {{"name", d.name.name}};
      if (d.type) j["type"] = render(*d.type, fx);
      if (d.definiens) j["definiens"] = render(*d.definiens, fx);
      j["kind"] = d.kind == DeclKind::Assumption ? "assumption" : "plain";
      decls.push_back(std::move(j));
    }
    json jt = {{"name", name}, {"includes", t.includes}, {"checked", t.checked}};
    if (t.meta) jt["meta"] = *t.meta;
    if (t.generated_by) jt["generated_by"] = *t.generated_by;
    jt["declarations"] = std::move(decls);
    theories.push_back(std::move(jt));
  }
  json morphisms = json::array();
  for (const auto& name : g.morphism_names()) {
    const Morphism& m = g.morphism(name);
    json assignment = json::object();
    for (const auto& [k, v] : m.assignment) assignment[k.name] = render(v, fx);
    morphisms.push_back({{"name", name},
                         {"domain", m.domain},
                         {"codomain", m.codomain},
                         {"status", to_string(m.status)},
                         {"assignment", std::move(assignment)}});
  }
  json attacks = json::array();
  for (const auto& a : g.attacks()) {
    attacks.push_back({{"from", a.attacker}, {"to", a.target}, {"witness", render(a.witness, fx)}});
  }
  json out;
  out["theories"] = std::move(theories);
  out["morphisms"] = std::move(morphisms);
  out["attacks"] = std::move(attacks);
  return out.dump(2) + "\n";
}

}  // namespace cg
