#include <gtest/gtest.h>

#include "cg/kernel.hpp"
#include "cg/loader.hpp"
#include "corpus.hpp"
#include "generators.hpp"

using cg::QName;
using cg::Term;
using cgtest::corpus;
using cgtest::term_in;

namespace {

Term var(const char* n) { return Term::var(n); }
Term app(Term f, Term a) { return Term::app(std::move(f), std::move(a)); }

class KernelWorld : public ::testing::Test {
 protected:
  cgtest::TermWorld w;
  cg::TypingContext ctx{w.sig};
  Term c(const char* n) { return w.constant(n); }
};

cg::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const cg::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return cg::ErrorCode::Io;
}

}  // namespace

TEST(Substitute, ReplacesTheVariable) {
  Term ball = Term::constant({"PvH-Lexicon", "ball"});
  EXPECT_EQ(cg::substitute(var("x"), "x", ball), ball);
}

TEST(Substitute, RenamesACapturingBinder) {
  Term body = Term::lambda("y", std::nullopt, var("x"));
  Term out = cg::substitute(body, "x", var("y"));
  ASSERT_TRUE(out.is(Term::Kind::Lambda));
  EXPECT_EQ(out.name(), "y'");
  EXPECT_EQ(out.body(), var("y"));
}

TEST(Substitute, LeavesShadowedOccurrences) {
  Term body = Term::lambda("x", std::nullopt, var("x"));
  EXPECT_EQ(cg::substitute(body, "x", var("z")), body);
}

TEST(Normalize, UnfoldsStint) {
  const auto& g = corpus().graph;
  Term t = term_in(g, "PvH-Asp-McCart", "Popov stint ball");
  Term want = term_in(g, "PvH-Asp-McCart", "(Popov takes_steps ball) ∧ (is_interrupted Popov)");
  cg::Signature sig = cg::signature_of(g, "PvH-Asp-McCart");
  EXPECT_TRUE(cg::alpha_equal(cg::normalize(cg::TypingContext(sig), t), want));
}

TEST_F(KernelWorld, KCombinator) {
  Term k = Term::lambda("x", w.o, Term::lambda("y", w.o, var("x")));
  EXPECT_EQ(cg::normalize(ctx, app(app(k, c("a")), c("b"))), c("a"));
}

TEST(Normalize, UnfoldsDefinitions) {
  const auto& g = corpus().graph;
  cg::Signature sig = cg::signature_of(g, "PvH-Lexicon");
  Term nopos = term_in(g, "PvH-Lexicon", "nopos");
  Term want = term_in(g, "PvH-Lexicon", "¬ (Popov posess ball)");
  EXPECT_TRUE(cg::alpha_equal(cg::normalize(cg::TypingContext(sig), nopos), want));
}

TEST_F(KernelWorld, WhnfStopsAtTheHead) {
  Term t = app(c("d"), app(c("f"), c("a")));
  Term w1 = cg::whnf(ctx, t);
  EXPECT_EQ(w1, app(app(c("g"), app(c("f"), c("a"))), app(c("f"), c("a"))));
}

TEST_F(KernelWorld, UnfoldBoundTurnsLoopsIntoDiagnostics) {
  cg::Signature sig = w.sig;
  QName loop{"G", "loop"};
  sig.add(loop, w.o, app(c("f"), Term::constant(loop)));
  cg::TypingContext looping(sig);
  EXPECT_EQ(code_of([&] { cg::normalize(looping, Term::constant(loop)); }), cg::ErrorCode::DepthExceeded);
  cg::TypingContext tight(w.sig, cg::KernelOptions{2});
  EXPECT_EQ(code_of([&] { cg::normalize(tight, app(c("d"), c("e"))); }), cg::ErrorCode::DepthExceeded);
}

TEST_F(KernelWorld, EqualityIsAlphaBetaDelta) {
  Term fx = Term::lambda("x", w.o, app(c("f"), var("x")));
  Term fy = Term::lambda("y", w.o, app(c("f"), var("y")));
  EXPECT_TRUE(cg::equal(ctx, fx, fy));
  // No eta.
  EXPECT_FALSE(cg::equal(ctx, fx, c("f")));
  EXPECT_TRUE(cg::equal(ctx, c("e"), app(c("f"), c("a"))));
  EXPECT_FALSE(cg::equal(ctx, c("a"), c("b")));
}

TEST(Equal, DefinitionsAgreeWithTheirBodies) {
  const auto& g = corpus().graph;
  EXPECT_TRUE(cgtest::same_in(g, "PvH-Lexicon", term_in(g, "PvH-Lexicon", "notitle"),
                              term_in(g, "PvH-Lexicon", "¬ Popov has_title ball")));
}

TEST(Infer, CorpusJudgments) {
  const auto& g = corpus().graph;
  cg::Signature cond = cg::signature_of(g, "McCart-Cond");
  Term ty = cg::infer_type(cg::TypingContext(cond), term_in(g, "McCart-Cond", "cond_stint"));
  EXPECT_TRUE(cgtest::same_in(g, "McCart-Cond", ty, term_in(g, "McCart-Cond", "⊢ actor stint object")));

  cg::Signature rule = cg::signature_of(g, "McCart-Rule");
  Term mp = term_in(g, "McCart-Rule", "MP McCart_rule cond_stint");
  Term mp_ty = cg::infer_type(cg::TypingContext(rule), mp);
  EXPECT_TRUE(cgtest::same_in(g, "McCart-Rule", mp_ty, term_in(g, "McCart-Rule", "⊢ actor has_claim object")));
}

TEST_F(KernelWorld, InferErrors) {
  EXPECT_EQ(code_of([&] { cg::infer_type(ctx, Term::type()); }), cg::ErrorCode::NotAType);
  EXPECT_EQ(code_of([&] { cg::infer_type(ctx, app(c("a"), c("b"))); }), cg::ErrorCode::NotAFunction);
  EXPECT_EQ(code_of([&] { cg::infer_type(ctx, app(c("h"), c("a"))); }), cg::ErrorCode::TypeMismatch);
  EXPECT_EQ(code_of([&] { cg::infer_type(ctx, Term::lambda("x", std::nullopt, var("x"))); }),
            cg::ErrorCode::Unannotated);
  EXPECT_EQ(code_of([&] { cg::infer_type(ctx, var("x")); }), cg::ErrorCode::UnknownConstant);
  EXPECT_EQ(code_of([&] { cg::infer_type(ctx, Term::constant({"G", "nope"})); }), cg::ErrorCode::UnknownConstant);
  EXPECT_EQ(code_of([&] { cg::check_is_type(ctx, c("a")); }), cg::ErrorCode::NotAType);
}

TEST_F(KernelWorld, InferIsDeterministic) {
  Term t = app(app(c("pick"), c("a")), app(c("mk"), c("a")));
  EXPECT_EQ(cg::infer_type(ctx, t), cg::infer_type(ctx, t));
  EXPECT_EQ(cg::infer_type(ctx, t), w.o);
}

TEST_F(KernelWorld, DependentApplicationUsesConversion) {
  // mk (d a) : P (d a), accepted where P (g a a) is expected.
  Term arg = app(c("mk"), app(c("d"), c("a")));
  Term t = app(app(c("pick"), app(app(c("g"), c("a")), c("a"))), arg);
  EXPECT_NO_THROW(cg::check_type(ctx, t, w.o));
  Term wrong = app(app(c("pick"), c("b")), arg);
  EXPECT_EQ(code_of([&] { cg::check_type(ctx, wrong, w.o); }), cg::ErrorCode::TypeMismatch);
}

TEST_F(KernelWorld, CheckLambdaAgainstPi) {
  Term oo = Term::pi("_", w.o, w.o);
  EXPECT_NO_THROW(cg::check_type(ctx, Term::lambda("x", std::nullopt, app(c("f"), var("x"))), oo));
  EXPECT_EQ(code_of([&] { cg::check_type(ctx, Term::lambda("x", w.i, var("x")), oo); }),
            cg::ErrorCode::TypeMismatch);
  EXPECT_EQ(code_of([&] { cg::check_type(ctx, Term::lambda("x", std::nullopt, var("x")), w.o); }),
            cg::ErrorCode::TypeMismatch);
}

TEST_F(KernelWorld, CheckUnderABinderThatShadowsTheContext) {
  cg::TypingContext inner = ctx.extend("x", w.i);
  Term t = Term::lambda("x", w.o, app(c("f"), var("x")));
  EXPECT_NO_THROW(cg::check_type(inner, t, Term::pi("_", w.o, w.o)));
  Term uses_outer = Term::lambda("y", w.o, app(c("h"), var("x")));
  EXPECT_NO_THROW(cg::check_type(inner, uses_outer, Term::pi("_", w.o, w.o)));
}

TEST(Check, StintDefinition) {
  const auto& g = corpus().graph;
  cg::Signature sig = cg::signature_of(g, "background");
  cg::TypingContext ctx(sig);
  Term ty = term_in(g, "background", "lperson → thing → bool");
  Term def = term_in(g, "background", "[x, y] (x takes_steps y) ∧ (is_interrupted x)", ty);
  EXPECT_NO_THROW(cg::check_type(ctx, def, ty));
  Term has_right = term_in(g, "background", "(has_right)");
  EXPECT_NO_THROW(cg::check_type(ctx, has_right, cg::infer_type(ctx, has_right)));
}

TEST(Check, ConjoinedAspects) {
  const auto& g = corpus().graph;
  cg::Signature sig = cg::signature_of(g, "PvH-Asp-Default");
  cg::TypingContext ctx(sig);
  Term pi = term_in(g, "PvH-Asp-Default", "∧I (aid notitle_df) (aid noright_df) nopos_thm");
  EXPECT_NO_THROW(cg::check_type(ctx, pi, term_in(g, "PvH-Asp-Default", "⊢ notitle ∧ noright ∧ nopos")));
  EXPECT_THROW(cg::check_type(ctx, pi, term_in(g, "PvH-Asp-Default", "⊢ nopos ∧ noright ∧ notitle")), cg::Error);
}

TEST(SolveImplicits, ModusPonens) {
  const auto& g = corpus().graph;
  cg::Signature sig = cg::signature_of(g, "McCart-Rule");
  cg::TypingContext ctx(sig);
  auto q = [&](const char* n) { return Term::constant(cg::resolve_constant(sig, n)); };
  Term solved = cg::solve_implicits(ctx, q("MP"), {q("McCart_rule"), q("cond_stint")});
  Term want = term_in(g, "McCart-Rule", "MP (actor stint object) (actor has_claim object) McCart_rule cond_stint");
  EXPECT_TRUE(cg::alpha_equal(solved, want)) << cg::debug_string(solved);
}

TEST(SolveImplicits, AssumptionAid) {
  const auto& g = corpus().graph;
  cg::Signature sig = cg::signature_of(g, "PvH-Asp-Default");
  cg::TypingContext ctx(sig);
  auto q = [&](const char* n) { return Term::constant(cg::resolve_constant(sig, n)); };
  Term solved = cg::solve_implicits(ctx, q("aid"), {q("notitle_df")});
  EXPECT_TRUE(cg::alpha_equal(solved, app(app(q("aid"), q("notitle")), q("notitle_df"))));
}

TEST_F(KernelWorld, SolveImplicitsWithoutImplicitsIsIdentity) {
  EXPECT_EQ(cg::solve_implicits(ctx, c("f"), {c("a")}), app(c("f"), c("a")));
  EXPECT_EQ(cg::implicit_arity(ctx, cg::infer_type(ctx, c("f"))), 0u);
}

TEST_F(KernelWorld, UnsolvableImplicit) {
  cg::Signature sig = w.sig;
  sig.add({"G", "any"}, Term::pi("x", w.o, w.o, true));
  cg::TypingContext c2(sig);
  EXPECT_EQ(code_of([&] { cg::solve_implicits(c2, Term::constant({"G", "any"}), {}, w.o); }),
            cg::ErrorCode::CannotInfer);
}

TEST(Signature, UpsertAndLookup) {
  cg::Signature sig;
  sig.add({"A", "x"}, Term::type());
  sig.add({"B", "x"}, Term::type());
  EXPECT_EQ(sig.lookup("x").size(), 2u);
  sig.add({"A", "x"}, Term::type(), Term::type());
  EXPECT_EQ(sig.size(), 2u);
  EXPECT_TRUE(sig.find({"A", "x"})->definiens);
  EXPECT_TRUE(sig.remove({"A", "x"}));
  EXPECT_EQ(sig.lookup("x").size(), 1u);
  EXPECT_FALSE(sig.remove({"A", "x"}));
}

TEST(FreshName, PrimesUntilFree) {
  EXPECT_EQ(cg::fresh_name("x", {"x", "x'"}), "x''");
  EXPECT_EQ(cg::fresh_name("y", {"x"}), "y");
}
