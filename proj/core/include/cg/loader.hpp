// Builds a checked context graph from `.cg` sources.

#ifndef CG_LOADER_HPP_
#define CG_LOADER_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cg/kernel.hpp"
#include "cg/syntax.hpp"
#include "cg/theory_graph.hpp"

namespace cg {

struct LoadOptions {
  bool prelude = true;      // load the FOLND prelude first
  std::string prelude_path;  // empty: $CG_PRELUDE, then the built-in location
  KernelOptions kernel;
};

// Where the prelude is read from under `options`.
std::string prelude_path(const LoadOptions& options = {});

class Loader {
 public:
  explicit Loader(ContextGraph& graph, LoadOptions options = {});

  // Each call continues with the graph built so far. Errors are collected,
  // not thrown, except for IO failures (Error(Io)).
  void load_file(const std::string& path);
  void load_source(std::string_view text, std::string_view file = "");
  void load_ast(const syntax::SourceGraphAST& ast, const std::string& file = "");

  const std::vector<Error>& diagnostics() const { return diagnostics_; }
  std::size_t declarations_checked() const { return checked_; }
  const syntax::FixityTable& fixities() const { return fixities_; }

 private:
  void ensure_prelude();
  void load_theory(const syntax::TheoryItem& item);
  void load_view(const syntax::ViewItem& item);
  void load_pushout(const syntax::PushoutItem& item);
  void load_attack(const syntax::AttackItem& item);
  void load_import(const syntax::ImportItem& item);
  void load_body(Theory& theory, const std::vector<syntax::BodyEntry>& body, bool generated_extension);
  void report(const Error& e, const Span& fallback);

  ContextGraph& graph_;
  LoadOptions options_;
  std::vector<Error> diagnostics_;
  std::size_t checked_ = 0;
  syntax::FixityTable fixities_;
  std::vector<std::string> directories_;
  bool prelude_loaded_ = false;
  bool loading_prelude_ = false;
};

struct LoadResult {
  ContextGraph graph;
  std::vector<Error> diagnostics;
  std::size_t declarations_checked = 0;
  syntax::FixityTable fixities;

  bool ok() const { return diagnostics.empty(); }
};

LoadResult load_files(const std::vector<std::string>& paths, const LoadOptions& options = {});
LoadResult load_text(std::string_view text, const LoadOptions& options = {});

// Elaborates a surface expression in the context of a theory, optionally
// against an expected type. Implicit arguments are inserted and solved.
Term elaborate_expr(const TypingContext& ctx, const syntax::ExprPtr& expr,
                    const std::optional<Term>& expected = std::nullopt);
Term elaborate_in(const ContextGraph& g, const std::string& theory, const syntax::ExprPtr& expr,
                  const std::optional<Term>& expected = std::nullopt, const KernelOptions& options = {});

// Resolves an unqualified constant name. Throws Error(UnknownConstant) or
// Error(AmbiguousName).
QName resolve_constant(const Signature& sig, const std::string& name, const Span& span = {});

}  // namespace cg

#endif  // CG_LOADER_HPP_
