// Pushouts of an include B ⊇ A against a view φ : A -> C.
//
// The generated theory P includes C and receives a translated copy of every
// local declaration of B. A copy of `d` is named `P/d`, or `P/d$k` with the
// smallest free k when that name is taken, unless the request renames it.

#ifndef CG_PUSHOUT_HPP_
#define CG_PUSHOUT_HPP_

#include <map>
#include <string>

#include "cg/theory_graph.hpp"

namespace cg {

struct PushoutRequest {
  std::string name;  // theory to generate
  std::string rule;  // B
  std::string view;  // φ
  std::map<std::string, std::string> renaming;  // B-local name -> generated name
  Span span;
};

struct PushoutResult {
  std::string theory;
  std::string rule;
  std::string view;
  Morphism induced;  // φ* : B -> P, also stored in the graph
  std::map<QName, QName> provenance;  // generated declaration -> B original
};

// Inserts P and φ* into the graph. Throws Error(EndpointMismatch) when B does
// not include the domain of φ, Error(UnmappedConstant) when φ is not total,
// Error(NameClash) and Error(ObligationFailed) when P does not re-check.
PushoutResult compute_pushout(ContextGraph& g, const PushoutRequest& request,
                              const KernelOptions& options = {});

// The result of an earlier pushout, rebuilt from the graph. Throws
// Error(UnknownTheory) when `theory` was not generated by a pushout.
PushoutResult pushout_result(const ContextGraph& g, const std::string& theory);

// Applies a rule: `consequence` includes `condition`, `view` maps the
// condition into the case.
PushoutResult apply_rule(ContextGraph& g, const std::string& condition,
                         const std::string& consequence, const std::string& view,
                         const std::string& name,
                         const std::map<std::string, std::string>& renaming = {},
                         const KernelOptions& options = {});

// Given ψ : B -> D and χ : C -> D that agree on A, returns the unique
// m : P -> D with m ∘ φ* = ψ and m ∘ (C ↪ P) = χ. Throws Error(NoMediator).
Morphism verify_universal_property(const ContextGraph& g, const PushoutResult& result,
                                   const Morphism& psi, const Morphism& chi,
                                   const KernelOptions& options = {});

}  // namespace cg

#endif  // CG_PUSHOUT_HPP_
