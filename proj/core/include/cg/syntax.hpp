// Surface language of context graphs: tokenizer, parser and printer.
//
//   theory N [: Meta] { include T ; name [: type] [= definiens] [infixl|infixr prec] ... }
//   view v : S -> T { c := expr ... }
//   pushout P = apply B along v [renaming { d := n ... }] [with { declarations }]
//   attack A -> B on (expr)
//   import name
//
// Declarations and assignments are separated by `;` or a line break. A line
// break does not end a declaration inside parentheses, after an operator, or
// before `=`, `:`, an infix glyph or a fixity keyword.

#ifndef CG_SYNTAX_HPP_
#define CG_SYNTAX_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cg/error.hpp"

namespace cg::syntax {

enum class TokenKind {
  Identifier,
  Keyword,
  Symbol,
  BinderOpen,
  BinderClose,
  Assign,
  Colon,
  InfixOperator,
};

struct Token {
  TokenKind kind;
  std::string text;  // exact source text, aliases not normalized
  Span span;
};

// Splits source text into tokens. `//` comments and whitespace are skipped.
// Throws Error(IllegalCharacter).
std::vector<Token> tokenize(std::string_view source, std::string_view file = "");

// Canonical spelling of an operator token (`/\` -> `∧`, `|-` -> `⊢`, ...).
// Identifiers are returned unchanged except the alias `forall` -> `∀`.
std::string canonical(const Token& token);

// ---------------------------------------------------------------------------
// AST

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Name, App, Lambda, Pi, Type, Hole };

  Kind kind;
  std::string name;  // Name: identifier; Lambda/Pi: binder name ("" for a plain arrow)
  ExprPtr fn;        // App: function; Lambda: annotation (may be null); Pi: domain
  ExprPtr arg;       // App: argument; Lambda/Pi: body
  bool implicit = false;
  Span span;

  static ExprPtr make_name(std::string name, Span span = {});
  static ExprPtr make_app(ExprPtr fn, ExprPtr arg, Span span = {});
  static ExprPtr make_lambda(std::string binder, ExprPtr annotation, ExprPtr body, Span span = {});
  static ExprPtr make_pi(std::string binder, ExprPtr domain, ExprPtr codomain, bool implicit,
                         Span span = {});
  static ExprPtr make_type(Span span = {});
  static ExprPtr make_hole(Span span = {});
};

// Structural equality, spans ignored.
bool same(const ExprPtr& a, const ExprPtr& b);

enum class Assoc { Left, Right };

struct Fixity {
  Assoc assoc = Assoc::Left;
  int precedence = 50;
  bool operator==(const Fixity&) const = default;
};

// Identifier fixities in effect while parsing or printing.
using FixityTable = std::map<std::string, Fixity, std::less<>>;

struct DeclSyntax {
  std::string name;
  ExprPtr type;       // may be null
  ExprPtr definiens;  // may be null
  std::optional<Fixity> fixity;
  Span span;
};

struct IncludeSyntax {
  std::string theory;
  Span span;
};

using BodyEntry = std::variant<IncludeSyntax, DeclSyntax>;

struct TheoryItem {
  std::string name;
  std::optional<std::string> meta;
  std::vector<BodyEntry> body;
  Span span;
};

struct Assignment {
  std::string constant;
  ExprPtr value;
  Span span;
};

struct ViewItem {
  std::string name;
  std::string domain;
  std::string codomain;
  std::vector<Assignment> assignments;
  Span span;
};

struct Renaming {
  std::string from;
  std::string to;
  Span span;
};

struct PushoutItem {
  std::string name;
  std::string rule;  // the theory that includes the view's domain
  std::string view;
  std::vector<Renaming> renaming;
  std::vector<BodyEntry> extension;
  Span span;
};

struct AttackItem {
  std::string attacker;
  std::string target;
  ExprPtr witness;
  Span span;
};

struct ImportItem {
  std::string name;
  Span span;
};

using Item = std::variant<TheoryItem, ViewItem, PushoutItem, AttackItem, ImportItem>;

struct SourceGraphAST {
  std::vector<Item> items;
};

const Span& span_of(const Item& item);
const std::string& name_of(const Item& item);

bool same(const SourceGraphAST& a, const SourceGraphAST& b);

// Throws Error(ParseError) or Error(DuplicateName). `fixities` seeds the
// identifier fixity table, e.g. with the prelude's declarations.
SourceGraphAST parse_graph(const std::vector<Token>& tokens, const FixityTable& fixities = {});

// Parses one expression. Used for command-line queries and tests.
ExprPtr parse_expr(const std::vector<Token>& tokens, const FixityTable& fixities = {});

// Convenience: tokenize + parse.
SourceGraphAST parse_source(std::string_view source, std::string_view file = "",
                            const FixityTable& fixities = {});
ExprPtr parse_expr_source(std::string_view source, const FixityTable& fixities = {});

// Canonical layout. parse_graph(tokenize(print_graph(a))) is structurally a.
std::string print_graph(const SourceGraphAST& ast, const FixityTable& fixities = {});
std::string print_expr(const ExprPtr& expr, const FixityTable& fixities = {});
std::string print_decl(const DeclSyntax& decl, const FixityTable& fixities = {});

// Fixities declared by the theories of an AST, in order.
void collect_fixities(const SourceGraphAST& ast, FixityTable& out);

bool is_keyword(std::string_view word);
bool is_operator_name(std::string_view name);  // ∧ ⇒ ¬ ⊢ ⊦~

}  // namespace cg::syntax

#endif  // CG_SYNTAX_HPP_
