#include "cg/syntax.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

namespace cg::syntax {

namespace {

constexpr std::array<std::string_view, 14> kKeywords = {
    "theory", "view",   "pushout", "apply",  "along",  "renaming", "with",
    "attack", "on",     "include", "import", "infixl", "infixr",   "type"};

// UTF-8 code points the grammar treats as operators.
constexpr char32_t kAnd = 0x2227;      // ∧
constexpr char32_t kImplies = 0x21D2;  // ⇒
constexpr char32_t kArrow = 0x2192;    // →
constexpr char32_t kNot = 0x00AC;      // ¬
constexpr char32_t kTurnstile = 0x22A2;  // ⊢
constexpr char32_t kAssume = 0x22A6;     // ⊦ (followed by ~)

struct Decoded {
  char32_t cp = 0;
  std::size_t len = 0;
};

Decoded decode(std::string_view s, std::size_t i) {
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char c = byte(i);
  if (c < 0x80) return {c, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
  } else {
    return {0, 0};
  }
  if (i + len > s.size()) return {0, 0};
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char cc = byte(i + k);
    if ((cc & 0xC0) != 0x80) return {0, 0};
    cp = (cp << 6) | (cc & 0x3F);
  }
  return {cp, len};
}

bool is_operator_cp(char32_t cp) {
  return cp == kAnd || cp == kImplies || cp == kArrow || cp == kNot || cp == kTurnstile ||
         cp == kAssume;
}

bool ascii_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

class Lexer {
 public:
  Lexer(std::string_view src, std::string_view file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        advance(1);
        ++line_;
        line_start_ = pos_;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
        continue;
      }
      lex_token();
    }
    return std::move(tokens_);
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }
  void advance(std::size_t n) { pos_ += n; }

  Span span_for(std::size_t begin, std::size_t end) const {
    Span s;
    s.file = std::string(file_);
    s.line = line_;
    s.col_begin = begin - line_start_ + 1;
    s.col_end = end - line_start_ + 1;
    s.offset = begin;
    s.length = end - begin;
    return s;
  }

  void emit(TokenKind kind, std::size_t begin, std::size_t end) {
    tokens_.push_back(Token{kind, std::string(src_.substr(begin, end - begin)), span_for(begin, end)});
  }

  [[noreturn]] void illegal(std::size_t begin, std::size_t len) {
    throw Error(ErrorCode::IllegalCharacter,
                "illegal character '" + std::string(src_.substr(begin, std::max<std::size_t>(len, 1))) +
                    "'",
                span_for(begin, begin + std::max<std::size_t>(len, 1)));
  }

  // Is the code point at `i` an identifier-continuing character?
  bool ident_continue_at(std::size_t i) const {
    if (i >= src_.size()) return false;
    char c = src_[i];
    if (ascii_ident_char(c) || c == '\'' || c == '$') return true;
    if (c == '-') return i + 1 < src_.size() && src_[i + 1] != '>' && ident_start_at(i + 1);
    if (c == '/') {
      return i + 1 < src_.size() && src_[i + 1] != '\\' && src_[i + 1] != '/' && ident_start_at(i + 1);
    }
    if (static_cast<unsigned char>(c) >= 0x80) {
      Decoded d = decode(src_, i);
      return d.len != 0 && !is_operator_cp(d.cp);
    }
    return false;
  }

  bool ident_start_at(std::size_t i) const {
    if (i >= src_.size()) return false;
    char c = src_[i];
    if (ascii_ident_char(c)) return true;
    if (static_cast<unsigned char>(c) >= 0x80) {
      Decoded d = decode(src_, i);
      return d.len != 0 && !is_operator_cp(d.cp);
    }
    return false;
  }

  void lex_ident_tail(std::size_t begin) {
    while (ident_continue_at(pos_)) {
      if (static_cast<unsigned char>(src_[pos_]) >= 0x80) {
        advance(decode(src_, pos_).len);
      } else {
        advance(1);
      }
    }
    std::string_view word = src_.substr(begin, pos_ - begin);
    emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, pos_);
  }

  void lex_token() {
    std::size_t begin = pos_;
    char c = src_[pos_];
    switch (c) {
      case '(': case ')': case '{': case '}': case ',': case ';':
        advance(1);
        emit(TokenKind::Symbol, begin, pos_);
        return;
      case '[':
        advance(1);
        emit(TokenKind::BinderOpen, begin, pos_);
        return;
      case ']':
        advance(1);
        emit(TokenKind::BinderClose, begin, pos_);
        return;
      case ':':
        if (peek(1) == '=') {
          advance(2);
          emit(TokenKind::Assign, begin, pos_);
        } else {
          advance(1);
          emit(TokenKind::Colon, begin, pos_);
        }
        return;
      case '=':
        if (peek(1) == '>') {
          advance(2);
          emit(TokenKind::InfixOperator, begin, pos_);
        } else {
          advance(1);
          emit(TokenKind::Symbol, begin, pos_);
        }
        return;
      case '-':
        if (peek(1) == '>') {
          advance(2);
          emit(TokenKind::InfixOperator, begin, pos_);
          return;
        }
        illegal(begin, 1);
      case '|':
        if (peek(1) == '-' || peek(1) == '~') {
          advance(2);
          emit(TokenKind::InfixOperator, begin, pos_);
          return;
        }
        illegal(begin, 1);
      case '~':
        advance(1);
        emit(TokenKind::InfixOperator, begin, pos_);
        return;
      case '/':
        if (peek(1) == '\\') {
          advance(2);
          if (ident_start_at(pos_)) {
            lex_ident_tail(begin);
          } else {
            emit(TokenKind::InfixOperator, begin, pos_);
          }
          return;
        }
        illegal(begin, 1);
      default:
        break;
    }
    if (ascii_ident_char(c)) {
      advance(1);
      lex_ident_tail(begin);
      return;
    }
    if (static_cast<unsigned char>(c) < 0x80) illegal(begin, 1);

    Decoded d = decode(src_, pos_);
    if (d.len == 0) illegal(begin, 1);
    switch (d.cp) {
      case kAnd:
        advance(d.len);
        if (ident_start_at(pos_)) {
          lex_ident_tail(begin);
        } else {
          emit(TokenKind::InfixOperator, begin, pos_);
        }
        return;
      case kImplies:
      case kArrow:
        advance(d.len);
        emit(TokenKind::InfixOperator, begin, pos_);
        return;
      case kNot:
      case kTurnstile:
        advance(d.len);
        emit(TokenKind::InfixOperator, begin, pos_);
        return;
      case kAssume:
        if (pos_ + d.len < src_.size() && src_[pos_ + d.len] == '~') {
          advance(d.len + 1);
          emit(TokenKind::InfixOperator, begin, pos_);
          return;
        }
        illegal(begin, d.len);
      default:
        advance(d.len);
        lex_ident_tail(begin);
        return;
    }
  }

  std::string_view src_;
  std::string_view file_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
  std::vector<Token> tokens_;
};

// ---------------------------------------------------------------------------
// Operators

const std::string kAndName = "∧";
const std::string kImpliesName = "⇒";
const std::string kNotName = "¬";
const std::string kTurnstileName = "⊢";
const std::string kAssumeName = "⊦~";

constexpr int kArrowPrec = 0;
constexpr int kJudgmentPrec = 5;
constexpr int kJudgmentOperand = 10;
constexpr int kNotPrec = 40;
constexpr int kAppPrec = 100;
constexpr int kAtomPrec = 110;

std::optional<Fixity> glyph_fixity(std::string_view name) {
  if (name == kAndName) return Fixity{Assoc::Left, 30};
  if (name == kImpliesName) return Fixity{Assoc::Right, 20};
  return std::nullopt;
}

bool is_prefix_name(std::string_view name) {
  return name == kNotName || name == kTurnstileName || name == kAssumeName;
}

int prefix_operand_level(std::string_view name) {
  return name == kNotName ? kNotPrec : kJudgmentOperand;
}

int prefix_prec(std::string_view name) { return name == kNotName ? kNotPrec : kJudgmentPrec; }

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, const FixityTable& fixities)
      : toks_(tokens), fix_(fixities) {}

  SourceGraphAST parse_file() {
    SourceGraphAST ast;
    std::set<std::string> theories;
    std::set<std::string> views;
    while (!at_end()) {
      if (is_sym(";")) {
        ++pos_;
        continue;
      }
      Item item = parse_item();
      std::set<std::string>* names = nullptr;
      if (std::holds_alternative<TheoryItem>(item) || std::holds_alternative<PushoutItem>(item)) names = &theories;
      if (std::holds_alternative<ViewItem>(item)) names = &views;
      if (names && !names->insert(name_of(item)).second) {
        throw Error(ErrorCode::DuplicateName, "'" + name_of(item) + "' is already declared", span_of(item));
      }
      ast.items.push_back(std::move(item));
    }
    return ast;
  }

  ExprPtr parse_single_expr() {
    ExprPtr e = parse_expr(0);
    if (!at_end()) fail("end of input");
    return e;
  }

 private:
  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek(std::size_t k = 0) const {
    static const Token kEof{TokenKind::Symbol, "", {}};
    return pos_ + k < toks_.size() ? toks_[pos_ + k] : kEof;
  }
  bool is_sym(std::string_view s, std::size_t k = 0) const {
    return pos_ + k < toks_.size() && peek(k).kind == TokenKind::Symbol && peek(k).text == s;
  }
  bool is_kw(std::string_view s, std::size_t k = 0) const {
    return pos_ + k < toks_.size() && peek(k).kind == TokenKind::Keyword && peek(k).text == s;
  }
  bool is_kind(TokenKind kind, std::size_t k = 0) const {
    return pos_ + k < toks_.size() && peek(k).kind == kind;
  }

  Span here() const {
    if (!at_end()) return peek().span;
    if (!toks_.empty()) return toks_.back().span;
    return {};
  }

  [[noreturn]] void fail(std::string expected) const {
    std::string found = at_end() ? "end of input" : "'" + peek().text + "'";
    throw Error(ErrorCode::ParseError, "expected " + expected + ", found " + found, here());
  }

  const Token& expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("'" + std::string(s) + "'");
    return toks_[pos_++];
  }
  void expect_kw(std::string_view s) {
    if (!is_kw(s)) fail("'" + std::string(s) + "'");
    ++pos_;
  }

  std::string expect_ident(std::string_view what) {
    if (!is_kind(TokenKind::Identifier) || peek().text == "_") fail(std::string(what));
    return canonical(toks_[pos_++]);
  }

  // Binders may be `_`.
  std::string expect_binder() {
    if (!is_kind(TokenKind::Identifier)) fail("binder name");
    return canonical(toks_[pos_++]);
  }

  Span join(const Span& a, const Span& b) const {
    Span s = a;
    if (b.offset + b.length > a.offset) s.length = b.offset + b.length - a.offset;
    return s;
  }
  Span prev_span() const { return pos_ > 0 ? toks_[pos_ - 1].span : Span{}; }

  // --- items ---------------------------------------------------------------

  Item parse_item() {
    Span start = here();
    if (is_kw("theory")) return parse_theory(start);
    if (is_kw("view")) return parse_view(start);
    if (is_kw("pushout")) return parse_pushout(start);
    if (is_kw("attack")) return parse_attack(start);
    if (is_kw("import")) {
      ++pos_;
      ImportItem item;
      item.name = expect_ident("prelude name");
      item.span = join(start, prev_span());
      return item;
    }
    fail("'theory', 'view', 'pushout', 'attack' or 'import'");
  }

  Item parse_theory(const Span& start) {
    expect_kw("theory");
    TheoryItem item;
    item.name = expect_ident("theory name");
    if (is_kind(TokenKind::Colon)) {
      ++pos_;
      item.meta = expect_ident("meta-theory name");
    }
    expect_sym("{");
    item.body = parse_body();
    expect_sym("}");
    item.span = join(start, prev_span());
    return item;
  }

  std::vector<BodyEntry> parse_body() {
    std::vector<BodyEntry> body;
    std::set<std::string> seen;
    while (!at_end() && !is_sym("}")) {
      if (is_sym(";")) {
        ++pos_;
        continue;
      }
      if (is_kw("include")) {
        Span s = here();
        ++pos_;
        IncludeSyntax inc;
        inc.theory = expect_ident("theory name");
        inc.span = join(s, prev_span());
        body.emplace_back(std::move(inc));
        continue;
      }
      DeclSyntax decl = parse_decl();
      if (!seen.insert(decl.name).second) {
        throw Error(ErrorCode::DuplicateName, "name '" + decl.name + "' is already declared here",
                    decl.span);
      }
      body.emplace_back(std::move(decl));
    }
    return body;
  }

  bool at_decl_name() const {
    if (at_end()) return false;
    const Token& t = peek();
    if (t.kind == TokenKind::Identifier) return t.text != "_";
    std::string c = canonical(t);
    return c == kAndName || c == kImpliesName || is_prefix_name(c);
  }

  DeclSyntax parse_decl() {
    if (!at_decl_name()) fail("declaration name");
    DeclSyntax decl;
    decl.span = peek().span;
    decl.name = canonical(toks_[pos_++]);
    if (is_kind(TokenKind::Colon)) {
      ++pos_;
      decl.type = parse_expr(0);
    }
    if (is_sym("=")) {
      ++pos_;
      decl.definiens = parse_expr(0);
    }
    if (is_kw("infixl") || is_kw("infixr")) {
      Span s = here();
      Assoc assoc = peek().text == "infixl" ? Assoc::Left : Assoc::Right;
      ++pos_;
      if (!is_kind(TokenKind::Identifier)) fail("precedence");
      int prec = 0;
      const std::string& digits = peek().text;
      if (!std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) ||
          digits.size() > 2) {
        fail("precedence between 1 and 99");
      }
      prec = std::stoi(digits);
      if (prec < 1) fail("precedence between 1 and 99");
      ++pos_;
      if (is_operator_name(decl.name)) {
        throw Error(ErrorCode::ParseError, "fixity of built-in operator '" + decl.name + "' is fixed", s);
      }
      decl.fixity = Fixity{assoc, prec};
    }
    if (!decl.type && !decl.definiens) fail("':' or '=' after '" + decl.name + "'");
    decl.span = join(decl.span, prev_span());
    if (decl.fixity) fix_[decl.name] = *decl.fixity;
    end_statement();
    return decl;
  }

  // A statement must be followed by a separator, a line break or the closing brace.
  void end_statement() {
    if (at_end() || is_sym(";") || is_sym("}")) return;
    if (pos_ > 0 && peek().span.line > toks_[pos_ - 1].span.line) return;
    fail("';', line break or '}'");
  }

  Item parse_view(const Span& start) {
    expect_kw("view");
    ViewItem item;
    item.name = expect_ident("view name");
    if (!is_kind(TokenKind::Colon)) fail("':'");
    ++pos_;
    item.domain = expect_ident("domain theory");
    expect_arrow();
    item.codomain = expect_ident("codomain theory");
    expect_sym("{");
    std::set<std::string> seen;
    while (!at_end() && !is_sym("}")) {
      if (is_sym(";")) {
        ++pos_;
        continue;
      }
      Assignment a;
      a.span = here();
      if (!at_decl_name()) fail("constant name");
      a.constant = canonical(toks_[pos_++]);
      if (!is_kind(TokenKind::Assign)) fail("':='");
      ++pos_;
      a.value = parse_expr(0);
      a.span = join(a.span, prev_span());
      if (!seen.insert(a.constant).second) {
        throw Error(ErrorCode::DuplicateName, "constant '" + a.constant + "' is assigned twice", a.span);
      }
      end_statement();
      item.assignments.push_back(std::move(a));
    }
    expect_sym("}");
    item.span = join(start, prev_span());
    return item;
  }

  void expect_arrow() {
    if (is_kind(TokenKind::InfixOperator) && canonical(peek()) == "→") {
      ++pos_;
      return;
    }
    fail("'->'");
  }

  Item parse_pushout(const Span& start) {
    expect_kw("pushout");
    PushoutItem item;
    item.name = expect_ident("pushout theory name");
    expect_sym("=");
    expect_kw("apply");
    item.rule = expect_ident("rule theory");
    expect_kw("along");
    item.view = expect_ident("view name");
    if (is_kw("renaming")) {
      ++pos_;
      expect_sym("{");
      std::set<std::string> seen;
      while (!at_end() && !is_sym("}")) {
        if (is_sym(";")) {
          ++pos_;
          continue;
        }
        Renaming r;
        r.span = here();
        if (!at_decl_name()) fail("declaration name");
        r.from = canonical(toks_[pos_++]);
        if (!is_kind(TokenKind::Assign)) fail("':='");
        ++pos_;
        if (!at_decl_name()) fail("new name");
        r.to = canonical(toks_[pos_++]);
        r.span = join(r.span, prev_span());
        if (!seen.insert(r.from).second) {
          throw Error(ErrorCode::DuplicateName, "'" + r.from + "' is renamed twice", r.span);
        }
        end_statement();
        item.renaming.push_back(std::move(r));
      }
      expect_sym("}");
    }
    if (is_kw("with")) {
      ++pos_;
      expect_sym("{");
      item.extension = parse_body();
      expect_sym("}");
    }
    item.span = join(start, prev_span());
    return item;
  }

  Item parse_attack(const Span& start) {
    expect_kw("attack");
    AttackItem item;
    item.attacker = expect_ident("attacking theory");
    expect_arrow();
    item.target = expect_ident("attacked theory");
    expect_kw("on");
    expect_sym("(");
    ++depth_;
    item.witness = parse_expr(0);
    --depth_;
    expect_sym(")");
    item.span = join(start, prev_span());
    return item;
  }

  // --- expressions ---------------------------------------------------------

  // True when the expression must stop before the current token because a
  // line break ends the statement.
  bool at_break() const {
    if (at_end() || depth_ > 0 || pos_ == 0) return false;
    const Token& t = peek();
    if (t.span.line <= toks_[pos_ - 1].span.line) return false;
    switch (t.kind) {
      case TokenKind::InfixOperator:
        // `∧ : ...` on a new line declares the operator.
        return is_kind(TokenKind::Colon, 1);
      case TokenKind::Colon:
      case TokenKind::Assign:
        return false;
      case TokenKind::Symbol:
        return t.text != "=";
      case TokenKind::Keyword:
        return t.text != "infixl" && t.text != "infixr";
      default:
        return true;
    }
  }

  std::optional<std::pair<std::string, Fixity>> infix_here() const {
    if (at_end()) return std::nullopt;
    const Token& t = peek();
    if (t.kind == TokenKind::InfixOperator) {
      std::string c = canonical(t);
      if (c == "→") return std::make_pair(c, Fixity{Assoc::Right, kArrowPrec});
      if (auto f = glyph_fixity(c)) return std::make_pair(c, *f);
      return std::nullopt;
    }
    if (t.kind == TokenKind::Identifier) {
      auto it = fix_.find(canonical(t));
      if (it != fix_.end()) return std::make_pair(it->first, it->second);
    }
    return std::nullopt;
  }

  ExprPtr parse_expr(int min_prec) {
    ExprPtr lhs = parse_prefix();
    while (!at_break()) {
      auto op = infix_here();
      if (!op || op->second.precedence < min_prec) break;
      Span s = peek().span;
      ++pos_;
      int next = op->second.assoc == Assoc::Left ? op->second.precedence + 1 : op->second.precedence;
      ExprPtr rhs = parse_expr(next);
      if (op->first == "→") {
        lhs = Expr::make_pi("", lhs, rhs, false, lhs->span);
      } else {
        lhs = Expr::make_app(Expr::make_app(Expr::make_name(op->first, s), lhs, lhs->span), rhs, lhs->span);
      }
    }
    return lhs;
  }

  ExprPtr parse_prefix() {
    if (at_end()) fail("expression");
    Span s = peek().span;
    if (is_kind(TokenKind::BinderOpen)) return parse_lambda();
    if (is_sym("{")) {
      ++pos_;
      ++depth_;
      std::string binder = expect_binder();
      if (!is_kind(TokenKind::Colon)) fail("':'");
      ++pos_;
      ExprPtr dom = parse_expr(0);
      --depth_;
      expect_sym("}");
      ExprPtr body = parse_expr(0);
      return Expr::make_pi(binder, dom, body, true, s);
    }
    if (is_sym("(") && is_kind(TokenKind::Identifier, 1) && peek(1).text != "_" &&
        is_kind(TokenKind::Colon, 2)) {
      ++pos_;
      ++depth_;
      std::string binder = expect_ident("binder name");
      ++pos_;  // ':'
      ExprPtr dom = parse_expr(0);
      --depth_;
      expect_sym(")");
      expect_arrow();
      ExprPtr body = parse_expr(0);
      return Expr::make_pi(binder, dom, body, false, s);
    }
    if (is_kind(TokenKind::InfixOperator)) {
      std::string c = canonical(peek());
      if (is_prefix_name(c)) {
        ++pos_;
        ExprPtr operand = parse_expr(prefix_operand_level(c));
        return Expr::make_app(Expr::make_name(c, s), operand, s);
      }
    }
    ExprPtr head = parse_atom();
    while (!at_break() && at_atom_start()) {
      ExprPtr arg = parse_atom();
      head = Expr::make_app(head, arg, head->span);
    }
    return head;
  }

  ExprPtr parse_lambda() {
    Span s = peek().span;
    ++pos_;  // '['
    ++depth_;
    std::vector<std::pair<std::string, ExprPtr>> binders;
    while (true) {
      std::string name = expect_binder();
      ExprPtr annot;
      if (is_kind(TokenKind::Colon)) {
        ++pos_;
        annot = parse_expr(0);
      }
      binders.emplace_back(std::move(name), std::move(annot));
      if (is_sym(",")) {
        ++pos_;
        continue;
      }
      break;
    }
    --depth_;
    if (!is_kind(TokenKind::BinderClose)) fail("']'");
    ++pos_;
    ExprPtr body = parse_expr(0);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      body = Expr::make_lambda(it->first, it->second, body, s);
    }
    return body;
  }

  bool at_atom_start() const {
    if (at_end()) return false;
    const Token& t = peek();
    if (t.kind == TokenKind::Identifier) return !fix_.count(canonical(t));
    if (t.kind == TokenKind::Keyword) return t.text == "type";
    if (t.kind == TokenKind::InfixOperator) return is_prefix_name(canonical(t));
    return t.kind == TokenKind::Symbol && t.text == "(";
  }

  ExprPtr parse_atom() {
    if (at_end()) fail("expression");
    const Token& t = peek();
    Span s = t.span;
    if (t.kind == TokenKind::Identifier) {
      if (fix_.count(canonical(t))) fail("operand (write infix operators as '(op)' when not applied)");
      ++pos_;
      if (t.text == "_") return Expr::make_hole(s);
      return Expr::make_name(canonical(t), s);
    }
    if (t.kind == TokenKind::Keyword && t.text == "type") {
      ++pos_;
      return Expr::make_type(s);
    }
    // In argument position a prefix operator takes one atom: `aid ¬ p b`.
    if (t.kind == TokenKind::InfixOperator && is_prefix_name(canonical(t))) {
      std::string c = canonical(t);
      ++pos_;
      return Expr::make_app(Expr::make_name(c, s), parse_atom(), s);
    }
    if (is_sym("(")) {
      // Operator section: (∧), (has_claim), (⊢)
      if (pos_ + 2 < toks_.size() + 1 && is_sym(")", 2)) {
        const Token& op = peek(1);
        std::string c = canonical(op);
        bool op_like = (op.kind == TokenKind::InfixOperator && c != "→") ||
                       (op.kind == TokenKind::Identifier && fix_.count(c));
        if (op_like) {
          pos_ += 3;
          return Expr::make_name(c, s);
        }
      }
      ++pos_;
      ++depth_;
      ExprPtr inner = parse_expr(0);
      --depth_;
      expect_sym(")");
      return inner;
    }
    fail("expression");
  }

  const std::vector<Token>& toks_;
  FixityTable fix_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

class Printer {
 public:
  explicit Printer(const FixityTable& fixities) : fix_(fixities) {}

  FixityTable& fixities() { return fix_; }

  std::string expr(const ExprPtr& e) {
    std::string out;
    emit(e, 0, out);
    return out;
  }

  std::string decl(const DeclSyntax& d) {
    std::string out = d.name;
    if (d.type) out += " : " + expr(d.type);
    if (d.definiens) out += " = " + expr(d.definiens);
    if (d.fixity) {
      out += d.fixity->assoc == Assoc::Left ? " infixl " : " infixr ";
      out += std::to_string(d.fixity->precedence);
      fix_[d.name] = *d.fixity;
    }
    return out;
  }

  void body(const std::vector<BodyEntry>& entries, std::string& out) {
    for (const auto& entry : entries) {
      out += "  ";
      if (const auto* inc = std::get_if<IncludeSyntax>(&entry)) {
        out += "include " + inc->theory;
      } else {
        out += decl(std::get<DeclSyntax>(entry));
      }
      out += '\n';
    }
  }

 private:
  bool is_op_name(const std::string& name) const {
    return is_operator_name(name) || fix_.count(name) > 0;
  }

  std::optional<Fixity> binary_fixity(const std::string& name) const {
    if (auto f = glyph_fixity(name)) return f;
    auto it = fix_.find(name);
    if (it != fix_.end()) return it->second;
    return std::nullopt;
  }

  // Binary application `a op b` with a known infix operator.
  const Expr* binary_head(const Expr& e) const {
    if (e.kind != Expr::Kind::App || e.fn->kind != Expr::Kind::App) return nullptr;
    const Expr& head = *e.fn->fn;
    if (head.kind != Expr::Kind::Name || !binary_fixity(head.name)) return nullptr;
    return &head;
  }

  const Expr* prefix_head(const Expr& e) const {
    if (e.kind != Expr::Kind::App || e.fn->kind != Expr::Kind::Name) return nullptr;
    return is_prefix_name(e.fn->name) ? e.fn.get() : nullptr;
  }

  int prec(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Lambda:
      case Expr::Kind::Pi:
        return kArrowPrec;
      case Expr::Kind::App:
        if (const Expr* h = binary_head(e)) return binary_fixity(h->name)->precedence;
        if (const Expr* h = prefix_head(e)) return prefix_prec(h->name);
        return kAppPrec;
      default:
        return kAtomPrec;
    }
  }

  void emit(const ExprPtr& e, int level, std::string& out) {
    bool parens = prec(*e) < level;
    if (parens) out += '(';
    switch (e->kind) {
      case Expr::Kind::Name:
        if (is_op_name(e->name)) {
          out += "(" + e->name + ")";
        } else {
          out += e->name;
        }
        break;
      case Expr::Kind::Type:
        out += "type";
        break;
      case Expr::Kind::Hole:
        out += "_";
        break;
      case Expr::Kind::App:
        if (const Expr* h = binary_head(*e)) {
          Fixity f = *binary_fixity(h->name);
          int lhs = f.assoc == Assoc::Left ? f.precedence : f.precedence + 1;
          int rhs = f.assoc == Assoc::Left ? f.precedence + 1 : f.precedence;
          emit(e->fn->arg, lhs, out);
          out += " " + h->name + " ";
          emit(e->arg, rhs, out);
        } else if (const Expr* h = prefix_head(*e)) {
          out += h->name + " ";
          emit(e->arg, prefix_operand_level(h->name), out);
        } else {
          emit(e->fn, kAppPrec, out);
          out += ' ';
          emit(e->arg, kAppPrec + 1, out);
        }
        break;
      case Expr::Kind::Lambda: {
        out += '[';
        const Expr* cur = e.get();
        bool first = true;
        while (cur->kind == Expr::Kind::Lambda) {
          if (!first) out += ", ";
          first = false;
          out += cur->name;
          if (cur->fn) {
            out += " : ";
            emit(cur->fn, 0, out);
          }
          cur = cur->arg.get();
        }
        out += "] ";
        // `cur` is owned by the chain rooted at `e`.
        emit_raw(*cur, out);
        break;
      }
      case Expr::Kind::Pi:
        if (e->implicit) {
          out += "{" + e->name + " : ";
          emit(e->fn, 0, out);
          out += "} ";
          emit(e->arg, 0, out);
        } else if (e->name.empty()) {
          emit(e->fn, kArrowPrec + 1, out);
          out += " → ";
          emit(e->arg, kArrowPrec, out);
        } else {
          out += "(" + e->name + " : ";
          emit(e->fn, 0, out);
          out += ") → ";
          emit(e->arg, kArrowPrec, out);
        }
        break;
    }
    if (parens) out += ')';
  }

  // Emits a non-owning node at level 0 (lambda bodies).
  void emit_raw(const Expr& e, std::string& out) {
    ExprPtr alias(std::shared_ptr<const Expr>{}, &e);
    emit(alias, 0, out);
  }

  FixityTable fix_;
};

bool same_body(const std::vector<BodyEntry>& a, const std::vector<BodyEntry>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].index() != b[i].index()) return false;
    if (const auto* ia = std::get_if<IncludeSyntax>(&a[i])) {
      if (ia->theory != std::get<IncludeSyntax>(b[i]).theory) return false;
    } else {
      const auto& da = std::get<DeclSyntax>(a[i]);
      const auto& db = std::get<DeclSyntax>(b[i]);
      if (da.name != db.name || da.fixity != db.fixity || !same(da.type, db.type) ||
          !same(da.definiens, db.definiens)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Token> tokenize(std::string_view source, std::string_view file) {
  return Lexer(source, file).run();
}

std::string canonical(const Token& token) {
  const std::string& t = token.text;
  if (t == "->") return "→";
  if (t == "=>") return "⇒";
  if (t == "/\\") return kAndName;
  if (t == "~") return kNotName;
  if (t == "|-") return kTurnstileName;
  if (t == "|~") return kAssumeName;
  if (t == "forall") return "∀";
  if (t.size() > 2 && t[0] == '/' && t[1] == '\\') return kAndName + t.substr(2);
  return t;
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_operator_name(std::string_view name) {
  return name == kAndName || name == kImpliesName || is_prefix_name(name);
}

ExprPtr Expr::make_name(std::string name, Span span) {
  return std::make_shared<const Expr>(Expr{Kind::Name, std::move(name), nullptr, nullptr, false, std::move(span)});
}
ExprPtr Expr::make_app(ExprPtr fn, ExprPtr arg, Span span) {
  return std::make_shared<const Expr>(Expr{Kind::App, "", std::move(fn), std::move(arg), false, std::move(span)});
}
ExprPtr Expr::make_lambda(std::string binder, ExprPtr annotation, ExprPtr body, Span span) {
  return std::make_shared<const Expr>(
      Expr{Kind::Lambda, std::move(binder), std::move(annotation), std::move(body), false, std::move(span)});
}
ExprPtr Expr::make_pi(std::string binder, ExprPtr domain, ExprPtr codomain, bool implicit, Span span) {
  return std::make_shared<const Expr>(
      Expr{Kind::Pi, std::move(binder), std::move(domain), std::move(codomain), implicit, std::move(span)});
}
ExprPtr Expr::make_type(Span span) {
  return std::make_shared<const Expr>(Expr{Kind::Type, "", nullptr, nullptr, false, std::move(span)});
}
ExprPtr Expr::make_hole(Span span) {
  return std::make_shared<const Expr>(Expr{Kind::Hole, "", nullptr, nullptr, false, std::move(span)});
}

bool same(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a.get() == b.get()) return true;
  return a->kind == b->kind && a->name == b->name && a->implicit == b->implicit && same(a->fn, b->fn) &&
         same(a->arg, b->arg);
}

const Span& span_of(const Item& item) {
  return std::visit([](const auto& i) -> const Span& { return i.span; }, item);
}

const std::string& name_of(const Item& item) {
  return std::visit(
      [](const auto& i) -> const std::string& {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, AttackItem>) {
          return i.attacker;
        } else {
          return i.name;
        }
      },
      item);
}

bool same(const SourceGraphAST& a, const SourceGraphAST& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const Item& x = a.items[i];
    const Item& y = b.items[i];
    if (x.index() != y.index()) return false;
    bool ok = std::visit(
        [&](const auto& xi) {
          using T = std::decay_t<decltype(xi)>;
          const T& yi = std::get<T>(y);
          if constexpr (std::is_same_v<T, TheoryItem>) {
            return xi.name == yi.name && xi.meta == yi.meta && same_body(xi.body, yi.body);
          } else if constexpr (std::is_same_v<T, ViewItem>) {
            if (xi.name != yi.name || xi.domain != yi.domain || xi.codomain != yi.codomain ||
                xi.assignments.size() != yi.assignments.size()) {
              return false;
            }
            for (std::size_t k = 0; k < xi.assignments.size(); ++k) {
              if (xi.assignments[k].constant != yi.assignments[k].constant ||
                  !same(xi.assignments[k].value, yi.assignments[k].value)) {
                return false;
              }
            }
            return true;
          } else if constexpr (std::is_same_v<T, PushoutItem>) {
            if (xi.name != yi.name || xi.rule != yi.rule || xi.view != yi.view ||
                xi.renaming.size() != yi.renaming.size()) {
              return false;
            }
            for (std::size_t k = 0; k < xi.renaming.size(); ++k) {
              if (xi.renaming[k].from != yi.renaming[k].from || xi.renaming[k].to != yi.renaming[k].to) {
                return false;
              }
            }
            return same_body(xi.extension, yi.extension);
          } else if constexpr (std::is_same_v<T, AttackItem>) {
            return xi.attacker == yi.attacker && xi.target == yi.target && same(xi.witness, yi.witness);
          } else {
            return xi.name == yi.name;
          }
        },
        x);
    if (!ok) return false;
  }
  return true;
}

SourceGraphAST parse_graph(const std::vector<Token>& tokens, const FixityTable& fixities) {
  return Parser(tokens, fixities).parse_file();
}

ExprPtr parse_expr(const std::vector<Token>& tokens, const FixityTable& fixities) {
  return Parser(tokens, fixities).parse_single_expr();
}

SourceGraphAST parse_source(std::string_view source, std::string_view file, const FixityTable& fixities) {
  return parse_graph(tokenize(source, file), fixities);
}

ExprPtr parse_expr_source(std::string_view source, const FixityTable& fixities) {
  return parse_expr(tokenize(source), fixities);
}

std::string print_expr(const ExprPtr& expr, const FixityTable& fixities) {
  return Printer(fixities).expr(expr);
}

std::string print_decl(const DeclSyntax& decl, const FixityTable& fixities) {
  return Printer(fixities).decl(decl);
}

std::string print_graph(const SourceGraphAST& ast, const FixityTable& fixities) {
  Printer p(fixities);
  std::string out;
  bool first = true;
  for (const Item& item : ast.items) {
    if (!first) out += '\n';
    first = false;
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, TheoryItem>) {
            out += "theory " + i.name;
            if (i.meta) out += " : " + *i.meta;
            out += " {\n";
            p.body(i.body, out);
            out += "}\n";
          } else if constexpr (std::is_same_v<T, ViewItem>) {
            out += "view " + i.name + " : " + i.domain + " → " + i.codomain + " {\n";
            for (const auto& a : i.assignments) out += "  " + a.constant + " := " + p.expr(a.value) + "\n";
            out += "}\n";
          } else if constexpr (std::is_same_v<T, PushoutItem>) {
            out += "pushout " + i.name + " = apply " + i.rule + " along " + i.view;
            if (!i.renaming.empty()) {
              out += " renaming {\n";
              for (const auto& r : i.renaming) out += "  " + r.from + " := " + r.to + "\n";
              out += "}";
            }
            if (!i.extension.empty()) {
              out += " with {\n";
              p.body(i.extension, out);
              out += "}";
            }
            out += "\n";
          } else if constexpr (std::is_same_v<T, AttackItem>) {
            out += "attack " + i.attacker + " → " + i.target + " on (" + p.expr(i.witness) + ")\n";
          } else {
            out += "import " + i.name + "\n";
          }
        },
        item);
  }
  return out;
}

void collect_fixities(const SourceGraphAST& ast, FixityTable& out) {
  auto scan = [&](const std::vector<BodyEntry>& body) {
    for (const auto& entry : body) {
      if (const auto* d = std::get_if<DeclSyntax>(&entry)) {
        if (d->fixity) out[d->name] = *d->fixity;
      }
    }
  };
  for (const Item& item : ast.items) {
    if (const auto* t = std::get_if<TheoryItem>(&item)) scan(t->body);
    if (const auto* p = std::get_if<PushoutItem>(&item)) scan(p->extension);
  }
}

}  // namespace cg::syntax
