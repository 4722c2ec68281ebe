#include "cg/kernel.hpp"

#include <algorithm>

namespace cg {

void Signature::add(QName name, Term type, std::optional<Term> definiens) {
  auto it = constants_.find(name);
  if (it != constants_.end()) {
    it->second.type = std::move(type);
    it->second.definiens = std::move(definiens);
    return;
  }
  by_name_[name.name].push_back(name);
  order_.push_back(name);
  constants_.emplace(name, ConstantInfo{name, std::move(type), std::move(definiens)});
}

bool Signature::remove(const QName& name) {
  if (!constants_.erase(name)) return false;
  auto& v = by_name_[name.name];
  v.erase(std::remove(v.begin(), v.end(), name), v.end());
  order_.erase(std::remove(order_.begin(), order_.end(), name), order_.end());
  return true;
}

const ConstantInfo* Signature::find(const QName& name) const {
  auto it = constants_.find(name);
  return it == constants_.end() ? nullptr : &it->second;
}

const std::vector<QName>& Signature::lookup(std::string_view name) const {
  static const std::vector<QName> kNone;
  auto it = by_name_.find(name);
  return it == by_name_.end() ? kNone : it->second;
}

TypingContext TypingContext::extend(std::string name, Term type) const {
  TypingContext out = *this;
  out.binders_.emplace_back(std::move(name), std::move(type));
  return out;
}

const Term* TypingContext::lookup_var(std::string_view name) const {
  for (auto it = binders_.rbegin(); it != binders_.rend(); ++it) {
    if (it->first == name) return &it->second;
  }
  return nullptr;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string out = base;
  while (avoid.count(out)) out += '\'';
  return out;
}

namespace {

Term rebuild_binder(const Term& t, std::string name, const Term& dom, Term body) {
  if (t.is(Term::Kind::Pi)) return Term::pi(std::move(name), dom, std::move(body), t.implicit());
  std::optional<Term> ann;
  if (t.has_annotation()) ann = dom;
  return Term::lambda(std::move(name), std::move(ann), std::move(body));
}

Term subst(const Term& t, const std::string& x, const Term& v, const std::set<std::string>& fv_v) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == x ? v : t;
    case Term::Kind::App: {
      Term f = subst(t.fn(), x, v, fv_v);
      Term a = subst(t.arg(), x, v, fv_v);
      if (f.same_node(t.fn()) && a.same_node(t.arg())) return t;
      return Term::app(std::move(f), std::move(a));
    }
    case Term::Kind::Lambda:
    case Term::Kind::Pi: {
      bool has_dom = t.is(Term::Kind::Pi) || t.has_annotation();
      Term dom = has_dom ? t.domain() : Term();
      Term new_dom = has_dom ? subst(dom, x, v, fv_v) : dom;
      Term body = t.body();
      std::string name = t.name();
      if (name != x && occurs_free(x, body)) {
        if (fv_v.count(name)) {
          std::set<std::string> avoid = fv_v;
          auto fb = free_vars(body);
          avoid.insert(fb.begin(), fb.end());
          avoid.insert(x);
          std::string fresh = fresh_name(name, avoid);
          body = subst(body, name, Term::var(fresh), {fresh});
          name = fresh;
        }
        body = subst(body, x, v, fv_v);
      }
      if (name == t.name() && body.same_node(t.body()) && (!has_dom || new_dom.same_node(dom))) return t;
      return rebuild_binder(t, std::move(name), new_dom, std::move(body));
    }
    default:
      return t;
  }
}

class Reducer {
 public:
  explicit Reducer(const TypingContext& ctx) : ctx_(ctx) {}

  Term whnf(Term t) {
    for (;;) {
      Spine s = spine_of(t);
      if (s.head.is(Term::Kind::Const)) {
        const ConstantInfo* info = ctx_.signature().find(s.head.qname());
        if (!info || !info->definiens) return t;
        tick();
        t = apply_args(*info->definiens, s.args);
        continue;
      }
      if (s.head.is(Term::Kind::Lambda) && !s.args.empty()) {
        tick();
        Term reduced = substitute(s.head.body(), s.head.name(), s.args.front());
        t = apply_args(std::move(reduced), std::vector<Term>(s.args.begin() + 1, s.args.end()));
        continue;
      }
      return t;
    }
  }

  Term nf(const Term& t) {
    Term w = whnf(t);
    switch (w.kind()) {
      case Term::Kind::App: {
        Spine s = spine_of(w);
        for (Term& a : s.args) a = nf(a);
        return apply_args(s.head, s.args);
      }
      case Term::Kind::Lambda: {
        std::optional<Term> ann;
        if (w.has_annotation()) ann = nf(w.annotation());
        return Term::lambda(w.name(), std::move(ann), nf(w.body()));
      }
      case Term::Kind::Pi:
        return Term::pi(w.name(), nf(w.domain()), nf(w.body()), w.implicit());
      default:
        return w;
    }
  }

 private:
  void tick() {
    if (++steps_ > ctx_.options().unfold_bound) {
      throw Error(ErrorCode::DepthExceeded,
                  "normalization exceeded " + std::to_string(ctx_.options().unfold_bound) + " steps");
    }
  }

  const TypingContext& ctx_;
  std::size_t steps_ = 0;
};

bool alpha(const Term& a, const Term& b, std::vector<std::pair<std::string, std::string>>& env) {
  if (a.same_node(b) && env.empty()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Type:
      return true;
    case Term::Kind::Const:
      return a.qname() == b.qname();
    case Term::Kind::Meta:
      return a.meta_id() == b.meta_id();
    case Term::Kind::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == a.name() || it->second == b.name()) {
          return it->first == a.name() && it->second == b.name();
        }
      }
      return a.name() == b.name();
    case Term::Kind::App:
      return alpha(a.fn(), b.fn(), env) && alpha(a.arg(), b.arg(), env);
    case Term::Kind::Lambda:
    case Term::Kind::Pi: {
      if (a.is(Term::Kind::Pi) && !alpha(a.domain(), b.domain(), env)) return false;
      env.emplace_back(a.name(), b.name());
      bool ok = alpha(a.body(), b.body(), env);
      env.pop_back();
      return ok;
    }
  }
  return false;
}

// Renames the binder of `t` when it would shadow a variable of `ctx`.
std::pair<std::string, Term> open_binder(const TypingContext& ctx, const std::string& name,
                                         const Term& body) {
  if (!ctx.binds(name)) return {name, body};
  std::set<std::string> avoid = free_vars(body);
  for (const auto& b : ctx.binders()) avoid.insert(b.first);
  std::string fresh = fresh_name(name, avoid);
  return {fresh, substitute(body, name, Term::var(fresh))};
}

}  // namespace

Term substitute(const Term& body, const std::string& var, const Term& value) {
  return subst(body, var, value, free_vars(value));
}

Term normalize(const TypingContext& ctx, const Term& t) { return Reducer(ctx).nf(t); }

Term whnf(const TypingContext& ctx, const Term& t) { return Reducer(ctx).whnf(t); }

bool alpha_equal(const Term& a, const Term& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha(a, b, env);
}

bool equal(const TypingContext& ctx, const Term& a, const Term& b) {
  if (alpha_equal(a, b)) return true;
  return alpha_equal(normalize(ctx, a), normalize(ctx, b));
}

std::string describe(const Term& t) { return "`" + debug_string(t) + "`"; }

Term infer_type(const TypingContext& ctx, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Type:
      throw Error(ErrorCode::NotAType, "`type` has no type");
    case Term::Kind::Const: {
      const ConstantInfo* info = ctx.signature().find(t.qname());
      if (!info) throw Error(ErrorCode::UnknownConstant, "unknown constant " + t.qname().str());
      return info->type;
    }
    case Term::Kind::Var: {
      const Term* ty = ctx.lookup_var(t.name());
      if (!ty) throw Error(ErrorCode::UnknownConstant, "unbound variable " + t.name());
      return *ty;
    }
    case Term::Kind::Meta:
      throw Error(ErrorCode::CannotInfer, "unsolved metavariable ?" + std::to_string(t.meta_id()));
    case Term::Kind::App: {
      Term ft = whnf(ctx, infer_type(ctx, t.fn()));
      if (!ft.is(Term::Kind::Pi)) {
        throw Error(ErrorCode::NotAFunction,
                    describe(t.fn()) + " is applied but has type " + describe(ft));
      }
      check_type(ctx, t.arg(), ft.domain());
      return substitute(ft.body(), ft.name(), t.arg());
    }
    case Term::Kind::Lambda: {
      if (!t.has_annotation()) {
        throw Error(ErrorCode::Unannotated,
                    "cannot infer the type of the unannotated binder " + t.name());
      }
      Term dom = t.annotation();
      check_is_type(ctx, dom);
      auto [x, body] = open_binder(ctx, t.name(), t.body());
      Term cod = infer_type(ctx.extend(x, dom), body);
      return Term::pi(x, dom, cod);
    }
    case Term::Kind::Pi: {
      check_is_type(ctx, t.domain());
      if (!occurs_free(t.name(), t.body())) {
        check_is_type(ctx, t.body());
      } else {
        auto [x, body] = open_binder(ctx, t.name(), t.body());
        check_is_type(ctx.extend(x, t.domain()), body);
      }
      return Term::type();
    }
  }
  throw Error(ErrorCode::CannotInfer, "unreachable");
}

void check_type(const TypingContext& ctx, const Term& t, const Term& expected) {
  if (t.is(Term::Kind::Lambda)) {
    Term e = whnf(ctx, expected);
    if (!e.is(Term::Kind::Pi)) {
      throw Error(ErrorCode::TypeMismatch,
                  "a function " + describe(t) + " was given where " + describe(expected) + " is expected");
    }
    if (t.has_annotation()) {
      check_is_type(ctx, t.annotation());
      if (!equal(ctx, t.annotation(), e.domain())) {
        throw Error(ErrorCode::TypeMismatch, "binder " + t.name() + " is annotated with " +
                                                 describe(t.annotation()) + " but " +
                                                 describe(e.domain()) + " is expected");
      }
    }
    std::string z = t.name();
    if (ctx.binds(z)) {
      std::set<std::string> avoid = free_vars(t.body());
      auto fe = free_vars(e.body());
      avoid.insert(fe.begin(), fe.end());
      for (const auto& b : ctx.binders()) avoid.insert(b.first);
      z = fresh_name(z, avoid);
    }
    Term body = z == t.name() ? t.body() : substitute(t.body(), t.name(), Term::var(z));
    Term cod = z == e.name() ? e.body() : substitute(e.body(), e.name(), Term::var(z));
    check_type(ctx.extend(z, e.domain()), body, cod);
    return;
  }
  Term actual = infer_type(ctx, t);
  if (!equal(ctx, actual, expected)) {
    throw Error(ErrorCode::TypeMismatch, describe(t) + " has type " + describe(actual) +
                                             " but " + describe(expected) + " is expected");
  }
}

bool is_type(const TypingContext& ctx, const Term& t) {
  if (t.is(Term::Kind::Type)) return true;
  return whnf(ctx, infer_type(ctx, t)).is(Term::Kind::Type);
}

void check_is_type(const TypingContext& ctx, const Term& t) {
  if (!is_type(ctx, t)) throw Error(ErrorCode::NotAType, describe(t) + " is not a type");
}

std::size_t implicit_arity(const TypingContext& ctx, const Term& type) {
  std::size_t n = 0;
  Term t = whnf(ctx, type);
  while (t.is(Term::Kind::Pi) && t.implicit()) {
    ++n;
    t = whnf(ctx, t.body());
  }
  return n;
}

namespace {

class Matcher {
 public:
  explicit Matcher(const TypingContext& ctx) : ctx_(ctx) {}

  Term fresh(std::string name, Term type) {
    solutions_.emplace_back();
    names_.push_back(std::move(name));
    types_.push_back(std::move(type));
    return Term::meta(solutions_.size() - 1);
  }

  Term inst(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::Meta: {
        const auto& s = solutions_[t.meta_id()];
        return s ? inst(*s) : t;
      }
      case Term::Kind::App: {
        Term f = inst(t.fn()), a = inst(t.arg());
        if (f.same_node(t.fn()) && a.same_node(t.arg())) return t;
        return Term::app(f, a);
      }
      case Term::Kind::Lambda: {
        std::optional<Term> ann;
        if (t.has_annotation()) ann = inst(t.annotation());
        return Term::lambda(t.name(), ann, inst(t.body()));
      }
      case Term::Kind::Pi:
        return Term::pi(t.name(), inst(t.domain()), inst(t.body()), t.implicit());
      default:
        return t;
    }
  }

  bool match(const Term& pattern, const Term& target) {
    auto saved = solutions_;
    if (rec(pattern, target, {})) return true;
    solutions_ = saved;
    Term p = normalize(ctx_, inst(pattern));
    Term t = normalize(ctx_, target);
    if (rec(p, t, {})) return true;
    solutions_ = saved;
    return false;
  }

  // Checks each solution against the type of its metavariable, then throws
  // for the first unsolved one.
  void finish(const std::string& head) {
    for (std::size_t i = 0; i < solutions_.size(); ++i) {
      if (!solutions_[i]) {
        throw Error(ErrorCode::CannotInfer,
                    "cannot infer implicit argument " + names_[i] + " of " + head);
      }
    }
    for (std::size_t i = 0; i < solutions_.size(); ++i) {
      Term value = inst(*solutions_[i]);
      Term type = inst(types_[i]);
      if (!has_meta(type) && !has_meta(value)) check_type(ctx_, value, type);
    }
  }

 private:
  bool rec(const Term& pattern, const Term& target, std::set<std::string> locals) {
    Term p = inst(pattern);
    if (p.is(Term::Kind::Meta)) {
      for (const auto& v : free_vars(target)) {
        if (locals.count(v)) return false;
      }
      if (has_meta(target)) return alpha_equal(p, inst(target));
      solutions_[p.meta_id()] = target;
      return true;
    }
    if (!has_meta(p)) return equal(ctx_, p, target);
    if (p.kind() != target.kind()) return false;
    switch (p.kind()) {
      case Term::Kind::App:
        return rec(p.fn(), target.fn(), locals) && rec(p.arg(), target.arg(), locals);
      case Term::Kind::Pi:
      case Term::Kind::Lambda: {
        if (p.is(Term::Kind::Pi) && !rec(p.domain(), target.domain(), locals)) return false;
        std::set<std::string> avoid = locals;
        auto a = free_vars(p.body()), b = free_vars(target.body());
        avoid.insert(a.begin(), a.end());
        avoid.insert(b.begin(), b.end());
        for (const auto& bd : ctx_.binders()) avoid.insert(bd.first);
        std::string z = fresh_name(p.name(), avoid);
        Term pb = substitute(p.body(), p.name(), Term::var(z));
        Term tb = substitute(target.body(), target.name(), Term::var(z));
        locals.insert(z);
        return rec(pb, tb, locals);
      }
      default:
        return false;
    }
  }

  const TypingContext& ctx_;
  std::vector<std::optional<Term>> solutions_;
  std::vector<std::string> names_;
  std::vector<Term> types_;
};

std::size_t explicit_arity(const TypingContext& ctx, const Term& type) {
  std::size_t n = 0;
  Term t = whnf(ctx, type);
  while (t.is(Term::Kind::Pi)) {
    if (!t.implicit()) ++n;
    t = whnf(ctx, t.body());
  }
  return n;
}

}  // namespace

Elaborated elaborate_spine(const TypingContext& ctx, const Term& head, const Term& head_type,
                           const std::vector<SpineArg>& args, const std::optional<Term>& expected) {
  Matcher m(ctx);
  const std::string head_name = debug_string(head);
  const bool implicits_given = args.size() > explicit_arity(ctx, head_type);

  Term result = head;
  Term ty = head_type;
  std::size_t next = 0;
  for (;;) {
    Term w = whnf(ctx, m.inst(ty));
    if (!w.is(Term::Kind::Pi)) {
      if (next < args.size()) {
        throw Error(ErrorCode::NotAFunction, head_name + " is applied to " +
                                                 std::to_string(args.size()) +
                                                 " arguments but has type " + describe(head_type));
      }
      break;
    }
    Term value;
    if (w.implicit() && !implicits_given) {
      if (next >= args.size() && !expected) break;
      value = m.fresh(w.name(), w.domain());
    } else {
      if (next >= args.size()) break;
      const SpineArg& arg = args[next++];
      Term dom = m.inst(w.domain());
      if (arg.hole) {
        value = m.fresh(w.name(), dom);
      } else if (!has_meta(dom)) {
        value = arg.elaborate(ctx, dom);
      } else {
        value = arg.elaborate(ctx, std::nullopt);
        Term actual = infer_type(ctx, value);
        if (!m.match(dom, actual)) {
          throw Error(ErrorCode::TypeMismatch, "argument " + describe(value) + " of " + head_name +
                                                   " has type " + describe(actual) +
                                                   ", which does not fit " + describe(dom));
        }
      }
    }
    result = Term::app(result, value);
    ty = substitute(w.body(), w.name(), value);
  }

  ty = m.inst(ty);
  if (expected) {
    if (has_meta(ty)) {
      if (!m.match(ty, *expected)) {
        throw Error(ErrorCode::TypeMismatch, head_name + " yields " + describe(ty) + " but " +
                                                 describe(*expected) + " is expected");
      }
      ty = m.inst(ty);
    } else if (!equal(ctx, ty, *expected)) {
      throw Error(ErrorCode::TypeMismatch, describe(m.inst(result)) + " has type " + describe(ty) +
                                               " but " + describe(*expected) + " is expected");
    }
  }
  m.finish(head_name);
  return {m.inst(result), m.inst(ty)};
}

Term solve_implicits(const TypingContext& ctx, const Term& head, const std::vector<Term>& args,
                     const std::optional<Term>& expected) {
  std::vector<SpineArg> spine;
  spine.reserve(args.size());
  for (const Term& a : args) {
    spine.push_back({[a](const TypingContext& c, const std::optional<Term>& exp) {
                       if (exp) check_type(c, a, *exp);
                       return a;
                     },
                     false});
  }
  return elaborate_spine(ctx, head, infer_type(ctx, head), spine, expected).term;
}

}  // namespace cg
