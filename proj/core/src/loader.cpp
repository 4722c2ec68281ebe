#include "cg/loader.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cg/pushout.hpp"

#ifndef CG_PRELUDE_SOURCE
#define CG_PRELUDE_SOURCE ""
#endif
#ifndef CG_PRELUDE_INSTALLED
#define CG_PRELUDE_INSTALLED ""
#endif

namespace cg {

using syntax::Expr;
using syntax::ExprPtr;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Surface-to-kernel elaboration. Surface binders may shadow each other; the
// kernel names are kept distinct so the typing context never shadows.
class Elaborator {
 public:
  explicit Elaborator(const TypingContext& ctx) : ctx_(ctx) {}

  Term elab(const ExprPtr& e, const std::optional<Term>& expected) {
    try {
      return elab_inner(e, expected);
    } catch (Error& err) {
      err.at(e->span);
      throw;
    }
  }

  Term elab_type(const ExprPtr& e) {
    Term t = elab(e, std::nullopt);
    try {
      check_is_type(ctx_, t);
    } catch (Error& err) {
      err.at(e->span);
      throw;
    }
    return t;
  }

 private:
  Term elab_inner(const ExprPtr& e, const std::optional<Term>& expected) {
    switch (e->kind) {
      case Expr::Kind::Type:
        if (expected) throw Error(ErrorCode::TypeMismatch, "`type` has no type", e->span);
        return Term::type();
      case Expr::Kind::Hole:
        throw Error(ErrorCode::CannotInfer, "`_` can only stand for an argument", e->span);
      case Expr::Kind::Name:
      case Expr::Kind::App:
        return elab_spine(e, expected);
      case Expr::Kind::Lambda:
        return elab_lambda(e, expected);
      case Expr::Kind::Pi: {
        Term dom = elab_type(e->fn);
        std::string surface = e->name.empty() ? "_" : e->name;
        std::string z = bind(surface);
        Scope scope(*this, surface, z, dom);
        Term cod = elab_type(e->arg);
        Term out = Term::pi(z, dom, cod, e->implicit);
        if (expected && !equal(ctx_, Term::type(), *expected)) {
          throw Error(ErrorCode::TypeMismatch,
                      "a type was given where " + describe(*expected) + " is expected", e->span);
        }
        return out;
      }
    }
    throw Error(ErrorCode::ParseError, "unexpected expression", e->span);
  }

  Term elab_lambda(const ExprPtr& e, const std::optional<Term>& expected) {
    std::optional<Term> ann;
    if (e->fn) ann = elab_type(e->fn);
    std::optional<Term> pi;
    if (expected) {
      Term w = whnf(ctx_, *expected);
      if (!w.is(Term::Kind::Pi)) {
        throw Error(ErrorCode::TypeMismatch,
                    "a function was given where " + describe(*expected) + " is expected", e->span);
      }
      pi = w;
    }
    if (!ann && !pi) {
      throw Error(ErrorCode::Unannotated,
                  "cannot infer the type of the unannotated binder " + e->name, e->span);
    }
    if (ann && pi && !equal(ctx_, *ann, pi->domain())) {
      throw Error(ErrorCode::TypeMismatch,
                  "binder " + e->name + " is annotated with " + describe(*ann) + " but " +
                      describe(pi->domain()) + " is expected",
                  e->span);
    }
    Term dom = ann ? *ann : pi->domain();
    std::string z = bind(e->name);
    Scope scope(*this, e->name, z, dom);
    std::optional<Term> cod;
    if (pi) cod = pi->name() == z ? pi->body() : substitute(pi->body(), pi->name(), Term::var(z));
    Term body = elab(e->arg, cod);
    return Term::lambda(z, dom, body);
  }

  Term elab_spine(const ExprPtr& e, const std::optional<Term>& expected) {
    std::vector<ExprPtr> args;
    ExprPtr head = e;
    while (head->kind == Expr::Kind::App) {
      args.push_back(head->arg);
      head = head->fn;
    }
    std::reverse(args.begin(), args.end());

    Term h;
    Term h_type;
    if (head->kind == Expr::Kind::Name) {
      if (const std::string* z = lookup(head->name)) {
        h = Term::var(*z);
        h_type = *ctx_.lookup_var(*z);
      } else {
        QName q = resolve_constant(ctx_.signature(), head->name, head->span);
        h = Term::constant(q);
        h_type = ctx_.signature().find(q)->type;
      }
    } else if (head->kind == Expr::Kind::Hole) {
      throw Error(ErrorCode::CannotInfer, "`_` cannot be applied", head->span);
    } else {
      h = elab(head, std::nullopt);
      h_type = infer_type(ctx_, h);
    }

    if (args.empty() && (!expected || equal(ctx_, h_type, *expected))) return h;

    std::vector<SpineArg> spine;
    for (const auto& a : args) {
      SpineArg s;
      s.hole = a->kind == Expr::Kind::Hole;
      s.elaborate = [this, a](const TypingContext&, const std::optional<Term>& exp) {
        return elab(a, exp);
      };
      spine.push_back(std::move(s));
    }
    return elaborate_spine(ctx_, h, h_type, spine, expected).term;
  }

  const std::string* lookup(const std::string& surface) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == surface) return &it->second;
    }
    return nullptr;
  }

  std::string bind(const std::string& surface) const {
    std::set<std::string> avoid;
    for (const auto& b : ctx_.binders()) avoid.insert(b.first);
    return fresh_name(surface.empty() ? "_" : surface, avoid);
  }

  struct Scope {
    Scope(Elaborator& el, const std::string& surface, const std::string& z, const Term& type)
        : el_(el), saved_(el.ctx_) {
      el_.ctx_ = el_.ctx_.extend(z, type);
      el_.scope_.emplace_back(surface, z);
    }
    ~Scope() {
      el_.ctx_ = saved_;
      el_.scope_.pop_back();
    }
    Elaborator& el_;
    TypingContext saved_;
  };

  TypingContext ctx_;
  std::vector<std::pair<std::string, std::string>> scope_;
};

}  // namespace

QName resolve_constant(const Signature& sig, const std::string& name, const Span& span) {
  const auto& found = sig.lookup(name);
  if (found.empty()) throw Error(ErrorCode::UnknownConstant, "unknown constant " + name, span);
  if (found.size() > 1) {
    std::string where;
    for (const auto& q : found) where += (where.empty() ? "" : ", ") + q.theory;
    throw Error(ErrorCode::AmbiguousName, name + " is declared in " + where, span);
  }
  return found.front();
}

Term elaborate_expr(const TypingContext& ctx, const ExprPtr& expr, const std::optional<Term>& expected) {
  Elaborator el(ctx);
  return el.elab(expr, expected);
}

Term elaborate_in(const ContextGraph& g, const std::string& theory, const ExprPtr& expr,
                  const std::optional<Term>& expected, const KernelOptions& options) {
  Signature sig = signature_of(g, theory);
  TypingContext ctx(sig, options);
  return elaborate_expr(ctx, expr, expected);
}

std::string prelude_path(const LoadOptions& options) {
  if (!options.prelude_path.empty()) return options.prelude_path;
  if (const char* env = std::getenv("CG_PRELUDE"); env && *env) return env;
  std::string source = CG_PRELUDE_SOURCE;
  if (!source.empty() && std::filesystem::exists(source)) return source;
  return CG_PRELUDE_INSTALLED;
}

Loader::Loader(ContextGraph& graph, LoadOptions options) : graph_(graph), options_(std::move(options)) {}

void Loader::report(const Error& e, const Span& fallback) {
  if (e.span().empty() && !fallback.empty()) {
    diagnostics_.emplace_back(e.code(), e.message(), fallback);
  } else {
    diagnostics_.push_back(e);
  }
}

void Loader::ensure_prelude() {
  if (prelude_loaded_ || loading_prelude_) return;
  prelude_loaded_ = true;
  loading_prelude_ = true;
  try {
    load_file(prelude_path(options_));
  } catch (...) {
    loading_prelude_ = false;
    throw;
  }
  loading_prelude_ = false;
}

void Loader::load_file(const std::string& path) {
  std::string text = read_file(path);
  directories_.push_back(std::filesystem::path(path).parent_path().string());
  try {
    load_source(text, path);
  } catch (...) {
    directories_.pop_back();
    throw;
  }
  directories_.pop_back();
}

void Loader::load_source(std::string_view text, std::string_view file) {
  if (options_.prelude) ensure_prelude();
  syntax::SourceGraphAST ast;
  try {
    ast = syntax::parse_source(text, file, fixities_);
  } catch (const Error& e) {
    diagnostics_.push_back(e);
    return;
  }
  load_ast(ast, std::string(file));
}

void Loader::load_ast(const syntax::SourceGraphAST& ast, const std::string&) {
  if (options_.prelude) ensure_prelude();
  syntax::collect_fixities(ast, fixities_);
  for (const auto& item : ast.items) {
    try {
      std::visit(
          [this](const auto& it) {
            using T = std::decay_t<decltype(it)>;
            if constexpr (std::is_same_v<T, syntax::TheoryItem>) load_theory(it);
            else if constexpr (std::is_same_v<T, syntax::ViewItem>) load_view(it);
            else if constexpr (std::is_same_v<T, syntax::PushoutItem>) load_pushout(it);
            else if constexpr (std::is_same_v<T, syntax::AttackItem>) load_attack(it);
            else load_import(it);
          },
          item);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) throw;
      report(e, syntax::span_of(item));
    }
  }
}

void Loader::load_theory(const syntax::TheoryItem& item) {
  Theory th;
  th.name = item.name;
  th.span = item.span;
  if (item.meta) {
    if (!graph_.has_theory(*item.meta)) {
      throw Error(ErrorCode::UnknownTheory, "unknown meta-theory " + *item.meta, item.span);
    }
    th.meta = item.meta;
  } else if (!graph_.default_meta.empty()) {
    th.meta = graph_.default_meta;
  }
  Theory& t = graph_.add_theory(std::move(th));
  if (loading_prelude_) {
    graph_.mark_prelude(t.name);
    if (graph_.default_meta.empty() && t.name == "FOLND") graph_.default_meta = t.name;
  }
  std::size_t before = diagnostics_.size();
  load_body(t, item.body, false);
  t.checked = diagnostics_.size() == before;
}

void Loader::load_body(Theory& theory, const std::vector<syntax::BodyEntry>& body, bool) {
  Signature sig = signature_of(graph_, theory.name);
  for (const auto& entry : body) {
    if (const auto* inc = std::get_if<syntax::IncludeSyntax>(&entry)) {
      try {
        if (!graph_.has_theory(inc->theory)) {
          throw Error(ErrorCode::UnknownTheory, "unknown theory " + inc->theory, inc->span);
        }
        if (std::find(theory.includes.begin(), theory.includes.end(), inc->theory) != theory.includes.end()) {
          continue;
        }
        theory.includes.push_back(inc->theory);
        try {
          sig = signature_of(graph_, theory.name);
        } catch (...) {
          theory.includes.pop_back();
          throw;
        }
      } catch (const Error& e) {
        report(e, inc->span);
      }
      continue;
    }
    const auto& decl = std::get<syntax::DeclSyntax>(entry);
    if (theory.find(decl.name)) {
      report(Error(ErrorCode::DuplicateName, decl.name + " is already declared in " + theory.name, decl.span),
             decl.span);
      continue;
    }
    Declaration d;
    d.name = {theory.name, decl.name};
    d.span = decl.span;
    d.fixity = decl.fixity;
    TypingContext ctx(sig, options_.kernel);
    try {
      if (decl.type) d.type = Elaborator(ctx).elab_type(decl.type);
      if (decl.definiens) {
        d.definiens = Elaborator(ctx).elab(decl.definiens, d.type);
        if (!d.type) {
          d.type = infer_type(ctx, *d.definiens);
          d.type_inferred = true;
        }
      }
      d.kind = assumption_prop(ctx, *d.type) ? DeclKind::Assumption : DeclKind::Plain;
      if (!loading_prelude_) ++checked_;
    } catch (const Error& e) {
      report(Error(e.code(), theory.name + "?" + decl.name + ": " + e.message(),
                   e.span().empty() ? decl.span : e.span()),
             decl.span);
      d.definiens.reset();
      if (!d.type || d.type_inferred) continue;
    }
    sig.add(d.name, *d.type, d.definiens);
    theory.decls.push_back(std::move(d));
  }
}

void Loader::load_view(const syntax::ViewItem& item) {
  graph_.theory(item.domain);
  graph_.theory(item.codomain);
  Morphism m;
  m.name = item.name;
  m.kind = MorphismKind::View;
  m.domain = item.domain;
  m.codomain = item.codomain;
  m.span = item.span;

  auto domain = flatten(graph_, item.domain);
  std::map<std::string, std::vector<std::size_t>> by_local;
  for (std::size_t i = 0; i < domain.size(); ++i) by_local[domain[i].name.name].push_back(i);

  std::vector<std::pair<std::size_t, const syntax::Assignment*>> ordered;
  bool failed = false;
  for (const auto& a : item.assignments) {
    auto it = by_local.find(a.constant);
    if (it == by_local.end()) {
      report(Error(ErrorCode::UnknownConstant, item.domain + " declares no constant " + a.constant, a.span), a.span);
      failed = true;
      continue;
    }
    if (it->second.size() > 1) {
      report(Error(ErrorCode::AmbiguousName, a.constant + " is ambiguous in " + item.domain, a.span), a.span);
      failed = true;
      continue;
    }
    ordered.emplace_back(it->second.front(), &a);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  Signature sig = signature_of(graph_, item.codomain);
  TypingContext ctx(sig, options_.kernel);
  Translator tr(graph_, m);
  for (const auto& [index, a] : ordered) {
    const Declaration& d = domain[index];
    std::optional<Term> expected;
    try {
      expected = tr(*d.type);
    } catch (const Error&) {
    }
    try {
      m.assignment[d.name] = Elaborator(ctx).elab(a->value, expected);
    } catch (const Error& e) {
      // A mismatch against the translated type is a failed obligation.
      ErrorCode code = expected && e.code() == ErrorCode::TypeMismatch ? ErrorCode::ObligationFailed : e.code();
      report(Error(code, "view " + item.name + ", " + a->constant + ": " + e.message(),
                   e.span().empty() ? a->span : e.span()),
             a->span);
      failed = true;
    }
  }
  Morphism& stored = graph_.add_morphism(std::move(m));
  if (failed) return;
  check_morphism(graph_, stored, true, options_.kernel);
}

void Loader::load_pushout(const syntax::PushoutItem& item) {
  PushoutRequest req;
  req.name = item.name;
  req.rule = item.rule;
  req.view = item.view;
  req.span = item.span;
  for (const auto& r : item.renaming) req.renaming[r.from] = r.to;
  compute_pushout(graph_, req, options_.kernel);
  Theory& p = graph_.theory(item.name);
  checked_ += p.decls.size();
  if (!item.extension.empty()) {
    std::size_t before = diagnostics_.size();
    load_body(p, item.extension, true);
    p.checked = diagnostics_.size() == before;
  }
}

void Loader::load_attack(const syntax::AttackItem& item) {
  graph_.theory(item.target);
  AttackEdge edge;
  edge.attacker = item.attacker;
  edge.target = item.target;
  edge.witness = elaborate_in(graph_, item.attacker, item.witness, std::nullopt, options_.kernel);
  edge.provenance = AttackEdge::Provenance::Asserted;
  edge.span = item.span;
  graph_.attacks().push_back(std::move(edge));
}

void Loader::load_import(const syntax::ImportItem& item) {
  std::string lower = item.name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "folnd" || lower == "prelude") {
    ensure_prelude();
    return;
  }
  namespace fs = std::filesystem;
  std::string dir = directories_.empty() ? "." : directories_.back();
  for (const fs::path& candidate : {fs::path(dir) / item.name, fs::path(dir) / (item.name + ".cg")}) {
    if (fs::is_regular_file(candidate)) {
      load_file(candidate.string());
      return;
    }
  }
  throw Error(ErrorCode::Io, "cannot find import " + item.name, item.span);
}

LoadResult load_files(const std::vector<std::string>& paths, const LoadOptions& options) {
  LoadResult r;
  Loader loader(r.graph, options);
  for (const auto& p : paths) loader.load_file(p);
  r.diagnostics = loader.diagnostics();
  r.declarations_checked = loader.declarations_checked();
  r.fixities = loader.fixities();
  return r;
}

LoadResult load_text(std::string_view text, const LoadOptions& options) {
  LoadResult r;
  Loader loader(r.graph, options);
  loader.load_source(text, "<input>");
  r.diagnostics = loader.diagnostics();
  r.declarations_checked = loader.declarations_checked();
  r.fixities = loader.fixities();
  return r;
}

}  // namespace cg
