// Assumptions, contraries, attacks between theories and labelings of the
// resulting attack graph.
//
// A theory attacks another when it proves the contrary of one of the other's
// assumptions (`⊦~ p`). Contrary is negation with a single `¬` stripped.

#ifndef CG_ARGUMENTATION_HPP_
#define CG_ARGUMENTATION_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cg/theory_graph.hpp"

namespace cg {

struct Assumption {
  QName name;
  Term prop;  // normal form
};

std::vector<Assumption> assumptions_of(const ContextGraph& g, const std::string& theory,
                                       const KernelOptions& options = {});
// Declarations of type `⊢ p`, with p in normal form.
std::vector<Assumption> proofs_of(const ContextGraph& g, const std::string& theory,
                                  const KernelOptions& options = {});

Term contrary(const TypingContext& ctx, const Term& p);

struct AttackCheck {
  bool ok = false;
  std::string diagnosis;
  QName proof;       // attacker declaration proving the witness
  QName assumption;  // target assumption it defeats
  Morphism defeater;    // Defeater -> attacker
  Morphism assumed;     // Assumption -> target
};

AttackCheck verify_attack(const ContextGraph& g, const AttackEdge& edge, const KernelOptions& options = {});

// Theories that are not part of the prelude, in graph order.
std::vector<std::string> default_scope(const ContextGraph& g);

// Every (attacker, target, witness) triple in scope, self-pairs included.
std::vector<AttackEdge> attack_closure(const ContextGraph& g, const std::vector<std::string>& scope,
                                       const KernelOptions& options = {});

// The triples of the closure that are not explained by an include: the
// attacker is the smallest theory proving the witness and the target the
// smallest theory holding the assumption.
std::vector<AttackEdge> detect_attacks(const ContextGraph& g, const std::vector<std::string>& scope,
                                       const KernelOptions& options = {});

// Base edges plus their lifts to pairs of theories that strictly include
// both endpoints. A lift is replaced by a self-edge when the including target
// proves the witness itself.
std::vector<AttackEdge> inherit_attacks(const ContextGraph& g, const std::vector<AttackEdge>& base,
                                        const std::vector<std::string>& scope,
                                        const KernelOptions& options = {});

enum class Label { In, Out, Undec };
enum class Semantics { Grounded, Preferred, Complete };

std::string to_string(Label l);
std::string to_string(Semantics s);
Semantics parse_semantics(const std::string& s);  // throws Error(InvalidRequest)

struct AttackGraph {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // attacker, target

  static AttackGraph from_edges(const std::vector<std::string>& nodes, const std::vector<AttackEdge>& edges);
  std::vector<std::vector<std::size_t>> attackers() const;
};

struct Labeling {
  Semantics semantics = Semantics::Grounded;
  std::vector<Label> labels;  // parallel to AttackGraph::nodes

  bool operator==(const Labeling&) const = default;
};

// Complete labelings are enumerated over the attacked nodes only; more than
// this many attacked nodes raises Error(SemanticsTooLarge).
inline constexpr std::size_t kEnumerationBound = 20;

Labeling grounded(const AttackGraph& g);
bool is_complete(const AttackGraph& g, const Labeling& l);
std::vector<Labeling> complete_labelings(const AttackGraph& g);
std::vector<Labeling> preferred_labelings(const AttackGraph& g);
// Grounded yields one labeling; the others every labeling of the semantics.
std::vector<Labeling> label(const AttackGraph& g, Semantics s);

struct DefeatedReport {
  std::vector<std::string> out;
  std::vector<std::string> distinguished;  // pushouts whose view targets an OUT theory
  std::vector<std::string> inconsistent;   // self-attacking theories

  bool empty() const { return out.empty() && distinguished.empty() && inconsistent.empty(); }
};

DefeatedReport defeated_report(const ContextGraph& g, const AttackGraph& ag, const Labeling& l);

struct Argumentation {
  AttackGraph graph;
  std::vector<AttackEdge> base;
  std::vector<AttackEdge> edges;  // base and inherited
  std::vector<Labeling> labelings;
  std::vector<Error> diagnostics;  // asserted attacks that do not verify
};

// Detection, inheritance, verification of asserted attacks and labeling over
// the default scope.
Argumentation argue(const ContextGraph& g, Semantics s = Semantics::Grounded, const KernelOptions& options = {});

}  // namespace cg

#endif  // CG_ARGUMENTATION_HPP_
