// View finding between theories and the analogy questions built on it.

#ifndef CG_ANALOGY_HPP_
#define CG_ANALOGY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cg/argumentation.hpp"
#include "cg/theory_graph.hpp"

namespace cg {

struct FindOptions {
  std::size_t max_results = 0;  // 0 keeps every candidate
  bool allow_partial = false;
  std::size_t budget = 1'000'000;  // search nodes
  KernelOptions kernel;
};

struct ViewCandidate {
  std::string domain;
  std::string codomain;
  std::map<QName, Term> assignment;
  double score = 0;  // mapped / undefined domain constants
  ViewStatus status = ViewStatus::Verified;  // Verified when total, else Partial
  std::vector<Obligation> discharged;

  bool total() const { return status == ViewStatus::Verified; }
  Morphism to_morphism(const std::string& name) const;
};

// Undefined constants of `domain` that a view into `codomain` has to map.
std::vector<QName> view_targets(const ContextGraph& g, const std::string& domain, const std::string& codomain);
// Codomain constants a target may be mapped to: every non-prelude declaration
// visible in `codomain`.
std::vector<QName> view_sources(const ContextGraph& g, const std::string& codomain);

// Backtracking search. A target is mapped to a source when the source's type
// equals the target's translated type. Partial search may leave targets
// unmapped; the empty assignment is dropped unless there are no targets.
// Ranked by score, then by the assignment's name pairs. Throws
// Error(SearchBudgetExceeded).
std::vector<ViewCandidate> find_views(const ContextGraph& g, const std::string& domain, const std::string& codomain,
                                      const FindOptions& options = {});

struct Verdict {
  bool holds = false;
  std::optional<ViewCandidate> view;
  std::vector<QName> missing;
  std::vector<std::string> evidence;
};

// A1: some partial view from the precedent into the present case.
Verdict check_A1(const ContextGraph& g, const std::string& precedent, const std::string& present,
                 const FindOptions& options = {});
// A2: the view maps every condition.
Verdict check_A2(const ContextGraph& g, const Morphism& view, const std::string& condition);
// A3: nothing the application rests on is defeated.
Verdict check_A3(const ContextGraph& g, const std::string& application, const Argumentation& arg,
                 const KernelOptions& options = {});

struct AnalogyReport {
  std::string precedent;
  std::string present;
  std::vector<ViewCandidate> candidates;
  Verdict a1;
  Verdict a2;
  Verdict a3;
  std::string a4 = "unsupported (future work)";
};

// A2 is asked of the best candidate; A3 of every pushout applying a view
// from the precedent into the present case.
AnalogyReport analogy_report(const ContextGraph& g, const std::string& precedent, const std::string& present,
                             const Argumentation& arg, const FindOptions& options = {});

}  // namespace cg

#endif  // CG_ANALOGY_HPP_
