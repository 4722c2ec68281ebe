#include "cg/term.hpp"

#include <algorithm>
#include <sstream>

namespace cg {

Term::Term() : node_(std::make_shared<const Node>()) {}

Term Term::constant(QName name) {
  Node n;
  n.kind = Kind::Const;
  n.qname = std::move(name);
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::var(std::string name) {
  Node n;
  n.kind = Kind::Var;
  n.qname.name = std::move(name);
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::app(Term fn, Term arg) {
  Node n;
  n.kind = Kind::App;
  n.size = 1 + fn.size() + arg.size();
  n.a = std::move(fn.node_);
  n.b = std::move(arg.node_);
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::lambda(std::string binder, std::optional<Term> annotation, Term body) {
  Node n;
  n.kind = Kind::Lambda;
  n.qname.name = std::move(binder);
  n.size = 1 + body.size() + (annotation ? annotation->size() : 0);
  if (annotation) n.a = std::move(annotation->node_);
  n.b = std::move(body.node_);
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::pi(std::string binder, Term domain, Term codomain, bool implicit) {
  Node n;
  n.kind = Kind::Pi;
  n.qname.name = std::move(binder);
  n.size = 1 + domain.size() + codomain.size();
  n.a = std::move(domain.node_);
  n.b = std::move(codomain.node_);
  n.implicit = implicit;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::meta(std::size_t id) {
  Node n;
  n.kind = Kind::Meta;
  n.meta = id;
  return Term(std::make_shared<const Node>(std::move(n)));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Term::Kind::Type:
      return true;
    case Term::Kind::Const:
      return a.qname() == b.qname();
    case Term::Kind::Var:
      return a.name() == b.name();
    case Term::Kind::Meta:
      return a.meta_id() == b.meta_id();
    case Term::Kind::App:
      return a.fn() == b.fn() && a.arg() == b.arg();
    case Term::Kind::Lambda:
      if (a.name() != b.name() || a.has_annotation() != b.has_annotation()) return false;
      if (a.has_annotation() && !(a.annotation() == b.annotation())) return false;
      return a.body() == b.body();
    case Term::Kind::Pi:
      return a.name() == b.name() && a.implicit() == b.implicit() && a.domain() == b.domain() &&
             a.body() == b.body();
  }
  return false;
}

namespace {

void collect_free(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case Term::Kind::App:
      collect_free(t.fn(), bound, out);
      collect_free(t.arg(), bound, out);
      return;
    case Term::Kind::Lambda:
    case Term::Kind::Pi: {
      if (t.is(Term::Kind::Pi)) collect_free(t.domain(), bound, out);
      if (t.is(Term::Kind::Lambda) && t.has_annotation()) collect_free(t.annotation(), bound, out);
      bool fresh = bound.insert(t.name()).second;
      collect_free(t.body(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    default:
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

bool occurs_free(const std::string& var, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == var;
    case Term::Kind::App:
      return occurs_free(var, t.fn()) || occurs_free(var, t.arg());
    case Term::Kind::Lambda:
      if (t.has_annotation() && occurs_free(var, t.annotation())) return true;
      return t.name() != var && occurs_free(var, t.body());
    case Term::Kind::Pi:
      if (occurs_free(var, t.domain())) return true;
      return t.name() != var && occurs_free(var, t.body());
    default:
      return false;
  }
}

bool has_meta(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Meta:
      return true;
    case Term::Kind::App:
      return has_meta(t.fn()) || has_meta(t.arg());
    case Term::Kind::Lambda:
      return (t.has_annotation() && has_meta(t.annotation())) || has_meta(t.body());
    case Term::Kind::Pi:
      return has_meta(t.domain()) || has_meta(t.body());
    default:
      return false;
  }
}

void for_each_constant(const Term& t, const std::function<void(const QName&)>& f) {
  switch (t.kind()) {
    case Term::Kind::Const:
      f(t.qname());
      return;
    case Term::Kind::App:
      for_each_constant(t.fn(), f);
      for_each_constant(t.arg(), f);
      return;
    case Term::Kind::Lambda:
      if (t.has_annotation()) for_each_constant(t.annotation(), f);
      for_each_constant(t.body(), f);
      return;
    case Term::Kind::Pi:
      for_each_constant(t.domain(), f);
      for_each_constant(t.body(), f);
      return;
    default:
      return;
  }
}

namespace {
void render(const Term& t, std::ostream& os, bool paren) {
  switch (t.kind()) {
    case Term::Kind::Type:
      os << "type";
      return;
    case Term::Kind::Const:
      os << t.qname().name;
      return;
    case Term::Kind::Var:
      os << t.name();
      return;
    case Term::Kind::Meta:
      os << "?" << t.meta_id();
      return;
    case Term::Kind::App: {
      if (paren) os << '(';
      render(t.fn(), os, t.fn().is(Term::Kind::Lambda) || t.fn().is(Term::Kind::Pi));
      os << ' ';
      render(t.arg(), os, true);
      if (paren) os << ')';
      return;
    }
    case Term::Kind::Lambda:
      if (paren) os << '(';
      os << '[' << t.name();
      if (t.has_annotation()) {
        os << " : ";
        render(t.annotation(), os, false);
      }
      os << "] ";
      render(t.body(), os, false);
      if (paren) os << ')';
      return;
    case Term::Kind::Pi:
      if (paren) os << '(';
      if (t.implicit()) {
        os << '{' << t.name() << " : ";
        render(t.domain(), os, false);
        os << "} ";
      } else if (occurs_free(t.name(), t.body())) {
        os << '(' << t.name() << " : ";
        render(t.domain(), os, false);
        os << ") → ";
      } else {
        render(t.domain(), os, true);
        os << " → ";
      }
      render(t.body(), os, false);
      if (paren) os << ')';
      return;
  }
}
}  // namespace

std::string debug_string(const Term& t) {
  std::ostringstream os;
  render(t, os, false);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << debug_string(t); }

Spine spine_of(const Term& t) {
  Spine s{t, {}};
  while (s.head.is(Term::Kind::App)) {
    s.args.push_back(s.head.arg());
    s.head = s.head.fn();
  }
  std::reverse(s.args.begin(), s.args.end());
  return s;
}

Term apply_args(Term head, const std::vector<Term>& args) {
  for (const Term& a : args) head = Term::app(std::move(head), a);
  return head;
}

}  // namespace cg
