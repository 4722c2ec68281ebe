#include "cg/pushout.hpp"

#include <algorithm>

namespace cg {

namespace {

std::set<std::string> closure_set(const ContextGraph& g, const std::string& t) {
  auto v = include_closure(g, t);
  return {v.begin(), v.end()};
}

bool visible_local(const ContextGraph& g, const std::string& theory, const std::string& local) {
  for (const auto& d : flatten(g, theory)) {
    if (d.name.name == local) return true;
  }
  return false;
}

// Undefined constants of `from` compared under two morphisms into `into`.
bool agree(const ContextGraph& g, const std::string& from, const Morphism& lhs, const Morphism& rhs,
           const Morphism* then, const std::string& into, const KernelOptions& options,
           std::string& diagnosis) {
  Translator tl(g, lhs), tr(g, rhs);
  std::optional<Translator> tt;
  if (then) tt.emplace(g, *then);
  Signature sig = signature_of(g, into);
  TypingContext ctx(sig, options);
  for (const auto& d : flatten(g, from)) {
    if (d.definiens) continue;
    Term c = Term::constant(d.name);
    try {
      Term a = tl(c);
      Term b = tt ? (*tt)(tr(c)) : tr(c);
      if (!equal(ctx, a, b)) {
        diagnosis = d.name.name + " goes to " + describe(a) + " and to " + describe(b);
        return false;
      }
    } catch (const Error& e) {
      diagnosis = e.message();
      return false;
    }
  }
  return true;
}

}  // namespace

PushoutResult compute_pushout(ContextGraph& g, const PushoutRequest& req, const KernelOptions& options) {
  if (g.has_theory(req.name)) {
    throw Error(ErrorCode::NameClash, "theory " + req.name + " already exists", req.span);
  }
  Morphism& phi = g.morphism(req.view);
  const std::string a = phi.domain, c = phi.codomain, b = req.rule;
  const Theory& rule = g.theory(b);
  if (!includes(g, b, a)) {
    throw Error(ErrorCode::EndpointMismatch,
                b + " does not include " + a + ", the domain of " + phi.name, req.span);
  }
  if (phi.status != ViewStatus::Verified) check_morphism(g, phi, false, options);
  {
    Translator tr(g, phi);
    auto missing = tr.unmapped();
    if (!missing.empty()) {
      std::string names;
      for (const auto& q : missing) names += (names.empty() ? "" : ", ") + q.name;
      throw Error(ErrorCode::UnmappedConstant, "view " + phi.name + " leaves " + names + " unmapped", req.span);
    }
  }
  for (const auto& [from, to] : req.renaming) {
    if (!rule.find(from)) {
      throw Error(ErrorCode::UnknownConstant, b + " has no local declaration " + from, req.span);
    }
  }

  // P includes C and every theory behind B that φ fixes pointwise: B's own
  // side includes and parameter-free theories behind A, such as lexica.
  auto a_closure = closure_set(g, a);
  auto shared = closure_set(g, c);
  Theory p;
  p.name = req.name;
  p.meta = g.theory(c).meta;
  std::vector<std::string> extra;
  for (const auto& x : include_closure(g, b)) {
    if (x == b || shared.count(x)) continue;
    const Theory& tx = g.theory(x);
    bool eligible = !tx.meta || shared.count(*tx.meta);
    for (const auto& inc : tx.includes) eligible = eligible && shared.count(inc);
    if (eligible && a_closure.count(x)) {
      for (const auto& d : tx.decls) {
        if (!d.definiens || phi.assignment.count(d.name)) eligible = false;
      }
    }
    if (!eligible) continue;
    shared.insert(x);
    extra.push_back(x);
  }
  p.includes.push_back(c);
  for (const auto& x : extra) {
    bool covered = false;
    for (const auto& y : extra) {
      if (y != x && includes(g, y, x)) covered = true;
    }
    if (!covered) p.includes.push_back(x);
  }
  p.generated_by = req.name;
  p.span = req.span;
  g.add_theory(p);

  PushoutResult result;
  result.theory = req.name;
  result.rule = b;
  result.view = req.view;
  Morphism& star = result.induced;
  star.name = req.name + "/induced";
  star.kind = MorphismKind::View;
  star.domain = b;
  star.codomain = req.name;
  star.assignment = phi.assignment;
  star.span = req.span;

  std::vector<Declaration> generated;
  std::set<std::string> taken;
  try {
    Translator tr(g, star);
    // B = A: every local of B is already mapped by φ.
    const std::vector<Declaration> none;
    const auto& locals = a_closure.count(b) ? none : rule.decls;
    for (const auto& d : locals) {
      std::string local;
      auto rn = req.renaming.find(d.name.name);
      if (rn != req.renaming.end()) {
        local = rn->second;
        if (taken.count(local) || visible_local(g, req.name, local)) {
          throw Error(ErrorCode::NameClash, "renamed declaration " + local + " clashes in " + req.name, req.span);
        }
      } else {
        const std::string base = req.name + "/" + d.name.name;
        local = base;
        for (int k = 1; taken.count(local) || visible_local(g, req.name, local); ++k) {
          if (k > 1000) throw Error(ErrorCode::NameClash, "no free name for " + base, req.span);
          local = base + "$" + std::to_string(k);
        }
      }
      taken.insert(local);
      Declaration copy;
      copy.name = {req.name, local};
      if (d.type) copy.type = tr(*d.type);
      if (d.definiens) copy.definiens = tr(*d.definiens);
      copy.kind = d.kind;
      copy.origin = {Origin::Kind::Generated, req.name};
      copy.span = d.span;
      copy.fixity = d.fixity;
      copy.type_inferred = d.type_inferred;
      star.assignment[d.name] = Term::constant(copy.name);
      result.provenance.emplace(copy.name, d.name);
      generated.push_back(std::move(copy));
    }
  } catch (...) {
    g.remove_theory(req.name);
    throw;
  }

  g.theory(req.name).decls = std::move(generated);
  auto errors = check_theory(g, req.name, options);
  if (!errors.empty()) {
    g.remove_theory(req.name);
    throw Error(ErrorCode::ObligationFailed,
                "generated theory " + req.name + " does not check: " + errors.front().message(), req.span);
  }
  check_morphism(g, star, false, options);
  g.add_morphism(star);
  g.pushouts().push_back({req.name, b, req.view, star.name, result.provenance});
  return result;
}

PushoutResult pushout_result(const ContextGraph& g, const std::string& theory) {
  const PushoutRecord* rec = g.find_pushout(theory);
  if (!rec) throw Error(ErrorCode::UnknownTheory, theory + " was not generated by a pushout");
  return {rec->name, rec->rule, rec->view, g.morphism(rec->induced), rec->provenance};
}

PushoutResult apply_rule(ContextGraph& g, const std::string& condition, const std::string& consequence,
                         const std::string& view, const std::string& name,
                         const std::map<std::string, std::string>& renaming, const KernelOptions& options) {
  const Morphism& phi = g.morphism(view);
  if (phi.domain != condition) {
    throw Error(ErrorCode::EndpointMismatch, "view " + view + " starts at " + phi.domain + ", not " + condition);
  }
  Totality tot = is_total(g, phi, condition);
  if (!tot.total) {
    std::string names;
    for (const auto& q : tot.missing) names += (names.empty() ? "" : ", ") + q.name;
    throw Error(ErrorCode::UnmappedConstant, "view " + view + " leaves " + names + " unmapped");
  }
  return compute_pushout(g, {name, consequence, view, renaming, {}}, options);
}

Morphism verify_universal_property(const ContextGraph& g, const PushoutResult& r, const Morphism& psi,
                                   const Morphism& chi, const KernelOptions& options) {
  const Morphism& phi = g.morphism(r.view);
  if (psi.domain != r.rule || chi.domain != phi.codomain || psi.codomain != chi.codomain) {
    throw Error(ErrorCode::EndpointMismatch, "cocone legs do not match the pushout of " + r.theory);
  }
  const std::string& d_name = psi.codomain;
  std::string why;
  // ψ restricted to A must equal χ ∘ φ.
  if (!agree(g, phi.domain, psi, phi, &chi, d_name, options, why)) {
    throw Error(ErrorCode::NoMediator, "the cocone does not commute on " + phi.domain + ": " + why);
  }

  Morphism m;
  m.name = r.theory + "/mediator";
  m.domain = r.theory;
  m.codomain = d_name;
  Translator tpsi(g, psi), tchi(g, chi);
  auto c_closure = closure_set(g, phi.codomain);
  for (const auto& d : flatten(g, r.theory)) {
    if (d.definiens) continue;
    Term x = Term::constant(d.name);
    Term v;
    try {
      if (d.name.theory == r.theory) {
        auto prov = r.provenance.find(d.name);
        if (prov == r.provenance.end()) {
          throw Error(ErrorCode::NoMediator, d.name.name + " was not generated by the pushout");
        }
        v = tpsi(Term::constant(prov->second));
      } else if (c_closure.count(d.name.theory)) {
        v = tchi(x);
      } else {
        v = tpsi(x);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoMediator) throw;
      throw Error(ErrorCode::NoMediator, e.message());
    }
    if (!(v == x)) m.assignment.emplace(d.name, v);
  }
  try {
    check_morphism(g, m, false, options);
  } catch (const Error& e) {
    throw Error(ErrorCode::NoMediator, e.message());
  }
  Morphism c_inc = include_morphism(g, phi.codomain, r.theory);
  if (!agree(g, r.rule, psi, r.induced, &m, d_name, options, why) ||
      !agree(g, phi.codomain, chi, c_inc, &m, d_name, options, why)) {
    throw Error(ErrorCode::NoMediator, "mediator does not commute: " + why);
  }
  return m;
}

}  // namespace cg
