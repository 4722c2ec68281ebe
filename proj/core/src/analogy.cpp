#include "cg/analogy.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace cg {

Morphism ViewCandidate::to_morphism(const std::string& name) const {
  Morphism m;
  m.name = name;
  m.kind = MorphismKind::View;
  m.domain = domain;
  m.codomain = codomain;
  m.assignment = assignment;
  m.status = status;
  return m;
}

std::vector<QName> view_targets(const ContextGraph& g, const std::string& domain, const std::string& codomain) {
  auto closure = include_closure(g, codomain);
  std::set<std::string> shared(closure.begin(), closure.end());
  std::vector<QName> out;
  for (const auto& d : flatten(g, domain)) {
    if (!d.definiens && !shared.count(d.name.theory)) out.push_back(d.name);
  }
  return out;
}

std::vector<QName> view_sources(const ContextGraph& g, const std::string& codomain) {
  std::vector<QName> out;
  for (const auto& d : flatten(g, codomain)) {
    if (d.type && !g.is_prelude(d.name.theory)) out.push_back(d.name);
  }
  return out;
}

namespace {

using RankKey = std::vector<std::pair<std::string, std::string>>;

RankKey rank_key(const ViewCandidate& c) {
  RankKey k;
  for (const auto& [from, to] : c.assignment) k.emplace_back(from.str(), debug_string(to));
  return k;
}

class Search {
 public:
  Search(const ContextGraph& g, const std::string& domain, const std::string& codomain, const FindOptions& opts)
      : g_(g),
        opts_(opts),
        sig_(signature_of(g, codomain)),
        ctx_(sig_, opts.kernel),
        targets_(view_targets(g, domain, codomain)) {
    m_.name = domain + "->" + codomain;
    m_.domain = domain;
    m_.codomain = codomain;
    tr_.emplace(g, m_);
    for (const auto& d : flatten(g, domain)) {
      if (d.type) target_types_.emplace(d.name, *d.type);
    }
    for (const auto& s : view_sources(g, codomain)) {
      const ConstantInfo* info = sig_.find(s);
      if (info) sources_.emplace_back(s, normalize(ctx_, info->type));
    }
  }

  std::vector<ViewCandidate> run() {
    obligations_.assign(targets_.size(), std::nullopt);
    go(0);
    return std::move(out_);
  }

 private:
  void go(std::size_t i) {
    if (++nodes_ > opts_.budget) {
      throw Error(ErrorCode::SearchBudgetExceeded,
                  "view search from " + m_.domain + " to " + m_.codomain + " exceeded " +
                      std::to_string(opts_.budget) + " nodes");
    }
    if (i == targets_.size()) {
      record();
      return;
    }
    const QName& u = targets_[i];
    std::optional<Term> expected;
    try {
      tr_->clear_cache();
      expected = normalize(ctx_, (*tr_)(target_types_.at(u)));
    } catch (const Error&) {
      // The type mentions an unmapped constant.
    }
    if (expected) {
      for (const auto& [s, type] : sources_) {
        if (!alpha_equal(type, *expected)) continue;
        Term value = Term::constant(s);
        m_.assignment[u] = value;
        obligations_[i] = Obligation{u, value, *expected};
        go(i + 1);
        m_.assignment.erase(u);
        obligations_[i].reset();
      }
    }
    if (opts_.allow_partial) go(i + 1);
  }

  void record() {
    if (m_.assignment.empty() && !targets_.empty()) return;
    ViewCandidate c;
    c.domain = m_.domain;
    c.codomain = m_.codomain;
    c.assignment = m_.assignment;
    c.score = targets_.empty() ? 1.0 : static_cast<double>(m_.assignment.size()) / static_cast<double>(targets_.size());
    c.status = m_.assignment.size() == targets_.size() ? ViewStatus::Verified : ViewStatus::Partial;
    for (const auto& o : obligations_) {
      if (o) c.discharged.push_back(*o);
    }
    out_.push_back(std::move(c));
  }

  const ContextGraph& g_;
  FindOptions opts_;
  Signature sig_;
  TypingContext ctx_;
  std::vector<QName> targets_;
  std::map<QName, Term> target_types_;
  std::vector<std::pair<QName, Term>> sources_;
  Morphism m_;
  std::optional<Translator> tr_;
  std::vector<std::optional<Obligation>> obligations_;
  std::vector<ViewCandidate> out_;
  std::size_t nodes_ = 0;
};

}  // namespace

std::vector<ViewCandidate> find_views(const ContextGraph& g, const std::string& domain, const std::string& codomain,
                                      const FindOptions& options) {
  g.theory(domain);
  g.theory(codomain);
  auto found = Search(g, domain, codomain, options).run();
  std::vector<std::pair<RankKey, ViewCandidate>> keyed;
  keyed.reserve(found.size());
  for (auto& c : found) keyed.emplace_back(rank_key(c), std::move(c));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second.score != b.second.score) return a.second.score > b.second.score;
    return a.first < b.first;
  });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<ViewCandidate> out;
  for (auto& [k, c] : keyed) {
    if (options.max_results && out.size() == options.max_results) break;
    out.push_back(std::move(c));
  }
  return out;
}

Verdict check_A1(const ContextGraph& g, const std::string& precedent, const std::string& present,
                 const FindOptions& options) {
  FindOptions partial = options;
  partial.allow_partial = true;
  Verdict v;
  auto found = find_views(g, precedent, present, partial);
  if (!found.empty() && found.front().score > 0) {
    v.holds = true;
    v.view = found.front();
    v.evidence.push_back("best view maps " + std::to_string(found.front().assignment.size()) + " of " +
                         std::to_string(view_targets(g, precedent, present).size()) + " constants");
  } else {
    v.evidence.push_back("no constant of " + precedent + " can be mapped into " + present);
  }
  return v;
}

Verdict check_A2(const ContextGraph& g, const Morphism& view, const std::string& condition) {
  Verdict v;
  Totality t = is_total(g, view, condition);
  v.holds = t.total;
  v.missing = t.missing;
  if (t.total) {
    v.evidence.push_back(view.name + " maps every condition of " + condition);
  } else {
    std::string names;
    for (const auto& q : t.missing) names += (names.empty() ? "" : ", ") + q.name;
    v.evidence.push_back(view.name + " leaves " + names + " unmapped");
  }
  return v;
}

namespace {

std::vector<std::string> ancestry(const ContextGraph& g, const std::string& theory) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::vector<std::string> todo{theory};
  while (!todo.empty()) {
    std::string t = todo.back();
    todo.pop_back();
    for (const auto& x : include_closure(g, t)) {
      if (!seen.insert(x).second) continue;
      out.push_back(x);
      if (const PushoutRecord* p = g.find_pushout(x)) {
        todo.push_back(p->rule);
        if (g.has_morphism(p->view)) {
          todo.push_back(g.morphism(p->view).domain);
          todo.push_back(g.morphism(p->view).codomain);
        }
      }
    }
  }
  return out;
}

// Constants the definitions of `theory` rest on, following defined constants.
std::set<QName> used_constants(const ContextGraph& g, const std::string& theory) {
  std::map<QName, const Declaration*> decls;
  auto flat = flatten(g, theory);
  for (const auto& d : flat) decls.emplace(d.name, &d);
  std::set<QName> used;
  std::vector<Term> todo;
  for (const auto& d : g.theory(theory).decls) {
    if (d.definiens) todo.push_back(*d.definiens);
  }
  while (!todo.empty()) {
    Term t = todo.back();
    todo.pop_back();
    for_each_constant(t, [&](const QName& q) {
      if (!used.insert(q).second) return;
      auto it = decls.find(q);
      if (it != decls.end() && it->second->definiens) todo.push_back(*it->second->definiens);
    });
  }
  return used;
}

}  // namespace

Verdict check_A3(const ContextGraph& g, const std::string& application, const Argumentation& arg,
                 const KernelOptions& options) {
  Verdict v;
  v.holds = true;
  std::map<std::string, Label> labels;
  if (!arg.labelings.empty()) {
    for (std::size_t i = 0; i < arg.graph.nodes.size(); ++i) labels[arg.graph.nodes[i]] = arg.labelings.front().labels[i];
  }
  auto label_of = [&](const std::string& t) {
    auto it = labels.find(t);
    return it == labels.end() ? Label::In : it->second;
  };
  for (const auto& t : ancestry(g, application)) {
    if (label_of(t) == Label::Out) {
      v.holds = false;
      v.evidence.push_back(t + " is OUT");
    }
  }
  Signature sig = signature_of(g, application);
  TypingContext ctx(sig, options);
  for (const auto& q : used_constants(g, application)) {
    const ConstantInfo* info = sig.find(q);
    if (!info) continue;
    auto prop = assumption_prop(ctx, info->type);
    if (!prop) continue;
    Term w = contrary(ctx, *prop);
    for (const auto& e : arg.edges) {
      if (!e.verified || label_of(e.attacker) != Label::In || !alpha_equal(e.witness, w)) continue;
      v.holds = false;
      v.evidence.push_back("assumption " + q.name + " is attacked by " + e.attacker);
      break;
    }
  }
  if (v.holds) v.evidence.push_back("nothing " + application + " rests on is defeated");
  return v;
}

namespace {

// A verified view into the present case from the precedent or a theory it
// includes, excluding induced morphisms. The largest domain wins.
const Morphism* declared_view(const ContextGraph& g, const std::string& precedent, const std::string& present) {
  std::set<std::string> induced;
  for (const auto& p : g.pushouts()) induced.insert(p.induced);
  auto closure = include_closure(g, precedent);
  std::set<std::string> below(closure.begin(), closure.end());
  const Morphism* best = nullptr;
  std::size_t best_size = 0;
  for (const auto& n : g.morphism_names()) {
    const Morphism& m = g.morphism(n);
    if (m.kind != MorphismKind::View || m.status != ViewStatus::Verified || induced.count(n)) continue;
    if (m.codomain != present || !below.count(m.domain)) continue;
    std::size_t size = flatten(g, m.domain).size();
    if (!best || size > best_size) {
      best = &m;
      best_size = size;
    }
  }
  return best;
}

}  // namespace

AnalogyReport analogy_report(const ContextGraph& g, const std::string& precedent, const std::string& present,
                             const Argumentation& arg, const FindOptions& options) {
  AnalogyReport r;
  r.precedent = precedent;
  r.present = present;
  FindOptions partial = options;
  partial.allow_partial = true;
  r.candidates = find_views(g, precedent, present, partial);
  r.a1 = check_A1(g, precedent, present, options);
  if (const Morphism* declared = declared_view(g, precedent, present)) {
    r.a2 = check_A2(g, *declared, precedent);
    r.a2.holds = r.a2.holds && r.a1.holds;
  } else if (r.a1.view) {
    r.a2 = check_A2(g, r.a1.view->to_morphism(precedent + "->" + present), precedent);
    r.a2.view = r.a1.view;
  } else {
    r.a2.evidence.push_back("no view to extend");
  }

  auto closure = include_closure(g, precedent);
  std::set<std::string> below(closure.begin(), closure.end());
  r.a3.holds = true;
  bool any = false;
  for (const auto& p : g.pushouts()) {
    if (!g.has_morphism(p.view)) continue;
    const Morphism& m = g.morphism(p.view);
    if (m.codomain != present || (!below.count(m.domain) && !includes(g, m.domain, precedent))) continue;
    any = true;
    Verdict v = check_A3(g, p.name, arg, options.kernel);
    r.a3.holds = r.a3.holds && v.holds;
    for (auto& e : v.evidence) r.a3.evidence.push_back(p.name + ": " + e);
  }
  if (!any) r.a3.evidence.push_back("no application of " + precedent + " to " + present);
  return r;
}

}  // namespace cg
