// Terms of the logical framework.

#ifndef CG_TERM_HPP_
#define CG_TERM_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace cg {

// Constant name qualified by the theory that declares it.
struct QName {
  std::string theory;
  std::string name;

  auto operator<=>(const QName&) const = default;
  bool operator==(const QName&) const = default;
  std::string str() const { return theory + "?" + name; }
};

class Term {
 public:
  enum class Kind : std::uint8_t { Const, Var, App, Lambda, Pi, Type, Meta };

  Term();  // TypeSort

  static Term constant(QName name);
  static Term var(std::string name);
  static Term app(Term fn, Term arg);
  static Term lambda(std::string binder, std::optional<Term> annotation, Term body);
  static Term pi(std::string binder, Term domain, Term codomain, bool implicit = false);
  static Term arrow(Term domain, Term codomain) { return pi("_", std::move(domain), std::move(codomain)); }
  static Term type() { return Term(); }
  static Term meta(std::size_t id);  // elaboration metavariable, never stored in a theory

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  const QName& qname() const { return node_->qname; }  // Const
  const std::string& name() const { return node_->qname.name; }  // Var name / binder name
  std::size_t meta_id() const { return node_->meta; }
  Term fn() const { return Term(node_->a); }        // App
  Term arg() const { return Term(node_->b); }       // App
  Term domain() const { return Term(node_->a); }    // Pi
  Term annotation() const { return Term(node_->a); }  // Lambda, valid if has_annotation()
  bool has_annotation() const { return node_->a != nullptr; }
  Term body() const { return Term(node_->b); }      // Lambda / Pi
  bool implicit() const { return node_->implicit; }

  // Identity of the shared node; structurally equal terms may differ.
  bool same_node(const Term& other) const { return node_ == other.node_; }

  std::size_t size() const { return node_->size; }

  // Exact structural equality, binder names included.
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind = Kind::Type;
    QName qname;  // Const: qualified name; Var/Lambda/Pi: name in `qname.name`
    std::size_t meta = 0;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
    bool implicit = false;
    std::size_t size = 1;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Free variable names of a term.
std::set<std::string> free_vars(const Term& t);
bool occurs_free(const std::string& var, const Term& t);
bool has_meta(const Term& t);

// Applies `f` to every constant occurrence.
void for_each_constant(const Term& t, const std::function<void(const QName&)>& f);

// Debug rendering with unqualified constant names; use the syntax printer for
// round-trippable output.
std::string debug_string(const Term& t);
std::ostream& operator<<(std::ostream& os, const Term& t);

// Head and arguments of an application spine.
struct Spine {
  Term head;
  std::vector<Term> args;
};
Spine spine_of(const Term& t);
Term apply_args(Term head, const std::vector<Term>& args);

}  // namespace cg

#endif  // CG_TERM_HPP_
