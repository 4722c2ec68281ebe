// Theories, morphisms and the context graph that holds them.

#ifndef CG_THEORY_GRAPH_HPP_
#define CG_THEORY_GRAPH_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cg/error.hpp"
#include "cg/kernel.hpp"
#include "cg/syntax.hpp"
#include "cg/term.hpp"

namespace cg {

enum class DeclKind { Plain, Assumption };

struct Origin {
  enum class Kind { Local, Included, Generated };
  Kind kind = Kind::Local;
  std::string source;  // including theory or generating pushout
};

struct Declaration {
  QName name;
  std::optional<Term> type;
  std::optional<Term> definiens;
  DeclKind kind = DeclKind::Plain;
  Origin origin;
  Span span;
  std::optional<syntax::Fixity> fixity;
  bool type_inferred = false;  // type was computed from the definiens

  bool defined() const { return definiens.has_value(); }
};

struct Theory {
  std::string name;
  std::optional<std::string> meta;
  std::vector<std::string> includes;
  std::vector<Declaration> decls;
  bool checked = false;
  std::optional<std::string> generated_by;  // pushout that produced it
  Span span;

  const Declaration* find(const std::string& local) const;
};

enum class MorphismKind { Include, View };
enum class ViewStatus { Unchecked, Verified, Partial };

std::string to_string(ViewStatus s);

struct Morphism {
  std::string name;
  MorphismKind kind = MorphismKind::View;
  std::string domain;
  std::string codomain;
  std::map<QName, Term> assignment;
  ViewStatus status = ViewStatus::Unchecked;
  Span span;
};

struct AttackEdge {
  enum class Provenance { Asserted, Detected, Inherited };

  std::string attacker;
  std::string target;
  Term witness;
  Provenance provenance = Provenance::Detected;
  std::string base;  // Inherited: "attacker->target" of the base edge
  bool verified = false;
  Span span;
};

std::string to_string(AttackEdge::Provenance p);

struct PushoutRecord {
  std::string name;   // generated theory
  std::string rule;   // B
  std::string view;   // φ : A -> C
  std::string induced;  // φ* : B -> P
  std::map<QName, QName> provenance;  // generated declaration -> B original
};

class ContextGraph {
 public:
  Theory& add_theory(Theory theory);
  bool has_theory(const std::string& name) const { return theories_.count(name) != 0; }
  const Theory& theory(const std::string& name) const;
  Theory& theory(const std::string& name);
  const Theory* find_theory(const std::string& name) const;
  // Insertion order.
  const std::vector<std::string>& theory_names() const { return theory_order_; }
  void remove_theory(const std::string& name);

  Morphism& add_morphism(Morphism m);
  bool has_morphism(const std::string& name) const { return morphisms_.count(name) != 0; }
  const Morphism& morphism(const std::string& name) const;
  Morphism& morphism(const std::string& name);
  const std::vector<std::string>& morphism_names() const { return morphism_order_; }

  std::vector<AttackEdge>& attacks() { return attacks_; }
  const std::vector<AttackEdge>& attacks() const { return attacks_; }

  std::vector<PushoutRecord>& pushouts() { return pushouts_; }
  const std::vector<PushoutRecord>& pushouts() const { return pushouts_; }
  const PushoutRecord* find_pushout(const std::string& name) const;

  // Theories of the prelude are hidden from reports and exports.
  void mark_prelude(const std::string& name) { prelude_.insert(name); }
  bool is_prelude(const std::string& name) const { return prelude_.count(name) != 0; }
  std::string default_meta;  // empty when no prelude is loaded

 private:
  std::map<std::string, Theory> theories_;
  std::vector<std::string> theory_order_;
  std::map<std::string, Morphism> morphisms_;
  std::vector<std::string> morphism_order_;
  std::vector<AttackEdge> attacks_;
  std::vector<PushoutRecord> pushouts_;
  std::set<std::string> prelude_;
};

// Theories reachable through meta and include links, dependencies first,
// ending with `theory` itself. Throws Error(IncludeCycle) naming the path.
std::vector<std::string> include_closure(const ContextGraph& g, const std::string& theory);
// True if `super` equals or transitively includes `sub`.
bool includes(const ContextGraph& g, const std::string& super, const std::string& sub);

// Included declarations first, then locals; each qualified name once.
std::vector<Declaration> flatten(const ContextGraph& g, const std::string& theory);
Signature signature_of(const ContextGraph& g, const std::string& theory);

// Re-checks every local declaration against the preceding context and sets
// the checked flag. Returns the errors found.
std::vector<Error> check_theory(ContextGraph& g, const std::string& theory,
                                const KernelOptions& options = {});

// `p` when `type` normalizes to `⊦~ p` (resp. `⊢ p`).
std::optional<Term> assumption_prop(const TypingContext& ctx, const Term& type);
std::optional<Term> proof_prop(const TypingContext& ctx, const Term& type);

// Homomorphic translation along a morphism. Assigned constants are replaced,
// defined constants are unfolded and translated, and constants that the
// codomain also sees are kept. Throws Error(UnmappedConstant).
class Translator {
 public:
  Translator(const ContextGraph& g, const Morphism& m);
  Term operator()(const Term& t) const;
  const Morphism& morphism() const { return *m_; }
  // Undefined domain constants that are neither assigned nor shared.
  std::vector<QName> unmapped() const;
  bool shared(const QName& c) const { return codomain_closure_.count(c.theory) != 0; }
  // Unfolded definitions are cached; call after an assignment is changed or removed.
  void clear_cache() const { unfolded_.clear(); }

 private:
  const Morphism* m_;
  std::map<QName, Declaration> domain_;
  std::vector<QName> domain_order_;
  std::set<std::string> codomain_closure_;
  mutable std::map<QName, Term> unfolded_;
};

Term translate(const ContextGraph& g, const Morphism& m, const Term& t);

struct Obligation {
  QName constant;
  Term value;
  Term expected;  // translated type
};

struct ViewReport {
  ViewStatus status = ViewStatus::Unchecked;
  std::vector<Obligation> discharged;
  std::vector<QName> unmapped;
};

// Verifies every assignment against the translated type and records the
// result in the morphism's status. Unmapped constants make the view partial
// when `allow_partial`, otherwise Error(UnmappedConstant) is thrown. Throws
// Error(ObligationFailed) for an ill-typed assignment.
ViewReport check_view(ContextGraph& g, const std::string& view, bool allow_partial = true,
                      const KernelOptions& options = {});
ViewReport check_morphism(const ContextGraph& g, Morphism& m, bool allow_partial = true,
                          const KernelOptions& options = {});

// m2 after m1. Throws Error(EndpointMismatch).
Morphism compose(const ContextGraph& g, const Morphism& m1, const Morphism& m2,
                 std::string name = "");

// Identity-assignment morphism for `sub` included in `super`.
Morphism include_morphism(const ContextGraph& g, const std::string& sub, const std::string& super);

struct Totality {
  bool total = true;
  std::vector<QName> missing;
};

// Whether every undefined constant of `sub` is mapped by `m`.
Totality is_total(const ContextGraph& g, const Morphism& m, const std::string& sub);

}  // namespace cg

#endif  // CG_THEORY_GRAPH_HPP_
