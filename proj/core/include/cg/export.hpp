// Printing the graph back to surface syntax, DOT and JSON.

#ifndef CG_EXPORT_HPP_
#define CG_EXPORT_HPP_

#include <string>
#include <vector>

#include "cg/analogy.hpp"
#include "cg/argumentation.hpp"
#include "cg/syntax.hpp"
#include "cg/theory_graph.hpp"

namespace cg {

// Constants print by their local name, metavariables as holes.
syntax::ExprPtr to_expr(const Term& t);
std::string render(const Term& t, const syntax::FixityTable& fixities = {});

// Fixities declared anywhere in the graph.
syntax::FixityTable graph_fixities(const ContextGraph& g);

// Every non-prelude theory, view and asserted attack as source items, with
// pushouts replaced by the theories they generated. Inferred types are left out.
syntax::SourceGraphAST materialize(const ContextGraph& g);
std::string print_elaborated(const ContextGraph& g);

// One theory with its includes inlined.
std::string print_flattened(const ContextGraph& g, const std::string& theory);

// Theories are nodes; includes solid, views dashed, attacks bold red.
// Theories generated by a pushout carry a "pushout" marker.
std::string export_dot(const ContextGraph& g, const std::vector<AttackEdge>& attacks = {});

std::string argue_json(const ContextGraph& g, const Argumentation& a, Semantics s);
std::string analogy_json(const ContextGraph& g, const AnalogyReport& r);
std::string graph_json(const ContextGraph& g);

}  // namespace cg

#endif  // CG_EXPORT_HPP_
