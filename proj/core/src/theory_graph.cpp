#include "cg/theory_graph.hpp"

#include <algorithm>
#include <functional>

namespace cg {

const Declaration* Theory::find(const std::string& local) const {
  for (const auto& d : decls) {
    if (d.name.name == local) return &d;
  }
  return nullptr;
}

std::string to_string(ViewStatus s) {
  switch (s) {
    case ViewStatus::Unchecked: return "unchecked";
    case ViewStatus::Verified: return "verified";
    case ViewStatus::Partial: return "partial";
  }
  return "unchecked";
}

std::string to_string(AttackEdge::Provenance p) {
  switch (p) {
    case AttackEdge::Provenance::Asserted: return "asserted";
    case AttackEdge::Provenance::Detected: return "detected";
    case AttackEdge::Provenance::Inherited: return "inherited";
  }
  return "detected";
}

Theory& ContextGraph::add_theory(Theory theory) {
  if (theories_.count(theory.name)) {
    throw Error(ErrorCode::DuplicateName, "theory " + theory.name + " is already defined", theory.span);
  }
  std::string name = theory.name;
  theory_order_.push_back(name);
  return theories_.emplace(name, std::move(theory)).first->second;
}

const Theory& ContextGraph::theory(const std::string& name) const {
  auto it = theories_.find(name);
  if (it == theories_.end()) throw Error(ErrorCode::UnknownTheory, "unknown theory " + name);
  return it->second;
}

Theory& ContextGraph::theory(const std::string& name) {
  auto it = theories_.find(name);
  if (it == theories_.end()) throw Error(ErrorCode::UnknownTheory, "unknown theory " + name);
  return it->second;
}

const Theory* ContextGraph::find_theory(const std::string& name) const {
  auto it = theories_.find(name);
  return it == theories_.end() ? nullptr : &it->second;
}

void ContextGraph::remove_theory(const std::string& name) {
  theories_.erase(name);
  theory_order_.erase(std::remove(theory_order_.begin(), theory_order_.end(), name),
                      theory_order_.end());
}

Morphism& ContextGraph::add_morphism(Morphism m) {
  if (morphisms_.count(m.name)) {
    throw Error(ErrorCode::DuplicateName, "morphism " + m.name + " is already defined", m.span);
  }
  std::string name = m.name;
  morphism_order_.push_back(name);
  return morphisms_.emplace(name, std::move(m)).first->second;
}

const Morphism& ContextGraph::morphism(const std::string& name) const {
  auto it = morphisms_.find(name);
  if (it == morphisms_.end()) throw Error(ErrorCode::UnknownTheory, "unknown view " + name);
  return it->second;
}

Morphism& ContextGraph::morphism(const std::string& name) {
  auto it = morphisms_.find(name);
  if (it == morphisms_.end()) throw Error(ErrorCode::UnknownTheory, "unknown view " + name);
  return it->second;
}

const PushoutRecord* ContextGraph::find_pushout(const std::string& name) const {
  for (const auto& p : pushouts_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::vector<std::string> include_closure(const ContextGraph& g, const std::string& theory) {
  std::vector<std::string> out;
  std::set<std::string> done;
  std::vector<std::string> path;

  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    if (done.count(name)) return;
    auto on_path = std::find(path.begin(), path.end(), name);
    if (on_path != path.end()) {
      std::string cycle;
      for (auto it = on_path; it != path.end(); ++it) cycle += *it + " -> ";
      throw Error(ErrorCode::IncludeCycle, "include cycle " + cycle + name);
    }
    const Theory& t = g.theory(name);
    path.push_back(name);
    if (t.meta) visit(*t.meta);
    for (const auto& inc : t.includes) visit(inc);
    path.pop_back();
    done.insert(name);
    out.push_back(name);
  };
  visit(theory);
  return out;
}

bool includes(const ContextGraph& g, const std::string& super, const std::string& sub) {
  if (super == sub) return true;
  auto closure = include_closure(g, super);
  return std::find(closure.begin(), closure.end(), sub) != closure.end();
}

std::vector<Declaration> flatten(const ContextGraph& g, const std::string& theory) {
  std::vector<Declaration> out;
  std::set<QName> seen;
  for (const auto& name : include_closure(g, theory)) {
    for (const auto& d : g.theory(name).decls) {
      if (!seen.insert(d.name).second) continue;
      out.push_back(d);
      if (name != theory) out.back().origin = {Origin::Kind::Included, name};
    }
  }
  return out;
}

Signature signature_of(const ContextGraph& g, const std::string& theory) {
  Signature sig;
  for (const auto& d : flatten(g, theory)) {
    if (d.type) sig.add(d.name, *d.type, d.definiens);
  }
  return sig;
}

namespace {

std::optional<Term> judgment_prop(const TypingContext& ctx, const Term& type, const char* former) {
  Term nf = normalize(ctx, type);
  Spine s = spine_of(nf);
  if (s.head.is(Term::Kind::Const) && s.head.qname().name == former && s.args.size() == 1) {
    return s.args.front();
  }
  return std::nullopt;
}

}  // namespace

std::optional<Term> assumption_prop(const TypingContext& ctx, const Term& type) {
  return judgment_prop(ctx, type, "⊦~");
}

std::optional<Term> proof_prop(const TypingContext& ctx, const Term& type) {
  return judgment_prop(ctx, type, "⊢");
}

std::vector<Error> check_theory(ContextGraph& g, const std::string& name,
                                const KernelOptions& options) {
  std::vector<Error> errors;
  Theory& th = g.theory(name);
  Signature sig;
  try {
    auto closure = include_closure(g, name);
    closure.pop_back();
    std::set<QName> seen;
    for (const auto& inc : closure) {
      for (const auto& d : g.theory(inc).decls) {
        if (d.type && seen.insert(d.name).second) sig.add(d.name, *d.type, d.definiens);
      }
    }
  } catch (const Error& e) {
    errors.push_back(e);
    th.checked = false;
    return errors;
  }
  TypingContext ctx(sig, options);
  for (auto& d : th.decls) {
    try {
      if (d.type && !d.type_inferred) check_is_type(ctx, *d.type);
      if (d.definiens) {
        if (d.type && !d.type_inferred) {
          check_type(ctx, *d.definiens, *d.type);
        } else {
          d.type = infer_type(ctx, *d.definiens);
          d.type_inferred = true;
        }
      }
      if (!d.type) throw Error(ErrorCode::CannotInfer, "declaration has neither type nor definiens");
      d.kind = assumption_prop(ctx, *d.type) ? DeclKind::Assumption : DeclKind::Plain;
      sig.add(d.name, *d.type, d.definiens);
    } catch (const Error& e) {
      errors.emplace_back(e.code(), d.name.name + ": " + e.message(), e.span().empty() ? d.span : e.span());
    }
  }
  th.checked = errors.empty();
  return errors;
}

Translator::Translator(const ContextGraph& g, const Morphism& m) : m_(&m) {
  for (auto& d : flatten(g, m.domain)) {
    domain_order_.push_back(d.name);
    domain_.emplace(d.name, std::move(d));
  }
  for (auto& t : include_closure(g, m.codomain)) codomain_closure_.insert(std::move(t));
}

Term Translator::operator()(const Term& t) const {
  switch (t.kind()) {
    case Term::Kind::Const: {
      const QName& c = t.qname();
      auto a = m_->assignment.find(c);
      if (a != m_->assignment.end()) return a->second;
      if (shared(c)) return t;
      auto cached = unfolded_.find(c);
      if (cached != unfolded_.end()) return cached->second;
      auto d = domain_.find(c);
      if (d != domain_.end() && d->second.definiens) {
        Term out = (*this)(*d->second.definiens);
        unfolded_.emplace(c, out);
        return out;
      }
      throw Error(ErrorCode::UnmappedConstant,
                  "view " + m_->name + " does not map " + c.name + " (from " + c.theory + ")");
    }
    case Term::Kind::App: {
      Term f = (*this)(t.fn()), x = (*this)(t.arg());
      if (f.same_node(t.fn()) && x.same_node(t.arg())) return t;
      return Term::app(f, x);
    }
    case Term::Kind::Lambda: {
      std::optional<Term> ann;
      if (t.has_annotation()) ann = (*this)(t.annotation());
      return Term::lambda(t.name(), ann, (*this)(t.body()));
    }
    case Term::Kind::Pi:
      return Term::pi(t.name(), (*this)(t.domain()), (*this)(t.body()), t.implicit());
    default:
      return t;
  }
}

std::vector<QName> Translator::unmapped() const {
  std::vector<QName> out;
  for (const auto& c : domain_order_) {
    const Declaration& d = domain_.at(c);
    if (d.definiens || shared(c) || m_->assignment.count(c)) continue;
    out.push_back(c);
  }
  return out;
}

Term translate(const ContextGraph& g, const Morphism& m, const Term& t) {
  return Translator(g, m)(t);
}

ViewReport check_morphism(const ContextGraph& g, Morphism& m, bool allow_partial,
                          const KernelOptions& options) {
  ViewReport report;
  Translator tr(g, m);
  Signature sig = signature_of(g, m.codomain);
  TypingContext ctx(sig, options);
  std::set<QName> domain_names;
  for (const auto& d : flatten(g, m.domain)) {
    domain_names.insert(d.name);
    auto a = m.assignment.find(d.name);
    if (a == m.assignment.end()) continue;
    const std::string what = "view " + m.name + ", constant " + d.name.name;
    Term expected;
    try {
      expected = tr(*d.type);
    } catch (const Error& e) {
      throw Error(ErrorCode::ObligationFailed, what + ": its type cannot be translated: " + e.message(), m.span);
    }
    try {
      check_type(ctx, a->second, expected);
    } catch (const Error& e) {
      throw Error(ErrorCode::ObligationFailed,
                  what + ": assigned " + describe(a->second) + " does not have type " +
                      describe(expected) + " (" + e.message() + ")",
                  m.span);
    }
    if (d.definiens) {
      Term unfolded = tr(*d.definiens);
      if (!equal(ctx, unfolded, a->second)) {
        throw Error(ErrorCode::ObligationFailed,
                    what + ": assigned " + describe(a->second) +
                        " disagrees with the translated definition " + describe(unfolded),
                    m.span);
      }
    }
    report.discharged.push_back({d.name, a->second, expected});
  }
  for (const auto& [c, v] : m.assignment) {
    if (!domain_names.count(c)) {
      throw Error(ErrorCode::UnknownConstant,
                  "view " + m.name + " assigns " + c.name + ", which " + m.domain + " does not declare",
                  m.span);
    }
  }
  report.unmapped = tr.unmapped();
  if (!report.unmapped.empty() && !allow_partial) {
    std::string names;
    for (const auto& q : report.unmapped) names += (names.empty() ? "" : ", ") + q.name;
    throw Error(ErrorCode::UnmappedConstant, "view " + m.name + " leaves " + names + " unmapped", m.span);
  }
  report.status = report.unmapped.empty() ? ViewStatus::Verified : ViewStatus::Partial;
  m.status = report.status;
  return report;
}

ViewReport check_view(ContextGraph& g, const std::string& view, bool allow_partial,
                      const KernelOptions& options) {
  return check_morphism(g, g.morphism(view), allow_partial, options);
}

Morphism compose(const ContextGraph& g, const Morphism& m1, const Morphism& m2, std::string name) {
  if (m1.codomain != m2.domain) {
    throw Error(ErrorCode::EndpointMismatch, "cannot compose " + m1.name + " : " + m1.domain + " -> " +
                                                 m1.codomain + " with " + m2.name + " : " +
                                                 m2.domain + " -> " + m2.codomain);
  }
  Morphism out;
  out.name = name.empty() ? m1.name + ";" + m2.name : std::move(name);
  out.kind = m1.kind == MorphismKind::Include && m2.kind == MorphismKind::Include ? MorphismKind::Include
                                                                                 : MorphismKind::View;
  out.domain = m1.domain;
  out.codomain = m2.codomain;
  Translator t1(g, m1), t2(g, m2);
  auto domain = flatten(g, m1.domain);
  for (const auto& d : domain) {
    if (d.definiens) continue;
    Term c = Term::constant(d.name);
    try {
      Term v = t2(t1(c));
      if (!(v == c)) out.assignment.emplace(d.name, v);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnmappedConstant) throw;
    }
  }
  // A defined constant is assigned only where the composite alone would
  // translate it differently from the two steps.
  for (const auto& d : domain) {
    if (!d.definiens) continue;
    Term c = Term::constant(d.name);
    try {
      Term v = t2(t1(c));
      if (!(Translator(g, out)(c) == v)) out.assignment.emplace(d.name, v);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnmappedConstant) throw;
    }
  }
  if (m1.status == ViewStatus::Verified && m2.status == ViewStatus::Verified) {
    out.status = ViewStatus::Verified;
  } else if (m1.status == ViewStatus::Unchecked || m2.status == ViewStatus::Unchecked) {
    out.status = ViewStatus::Unchecked;
  } else {
    out.status = ViewStatus::Partial;
  }
  return out;
}

Morphism include_morphism(const ContextGraph& g, const std::string& sub, const std::string& super) {
  if (!includes(g, super, sub)) {
    throw Error(ErrorCode::EndpointMismatch, super + " does not include " + sub);
  }
  Morphism m;
  m.name = sub + "->" + super;
  m.kind = MorphismKind::Include;
  m.domain = sub;
  m.codomain = super;
  m.status = ViewStatus::Verified;
  return m;
}

Totality is_total(const ContextGraph& g, const Morphism& m, const std::string& sub) {
  Totality out;
  Translator tr(g, m);
  for (const auto& d : flatten(g, sub)) {
    if (d.definiens || tr.shared(d.name) || m.assignment.count(d.name)) continue;
    out.missing.push_back(d.name);
  }
  out.total = out.missing.empty();
  return out;
}

}  // namespace cg
