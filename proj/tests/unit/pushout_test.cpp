#include <gtest/gtest.h>

#include "cg/loader.hpp"
#include "cg/pushout.hpp"
#include "corpus.hpp"
#include "generators.hpp"

using cg::QName;
using cg::Term;
using cgtest::corpus;
using cgtest::term_in;

namespace {

const char* kMinimal =
    "theory A {\n  a : type\n}\n"
    "theory B {\n  include A\n  f : a\n}\n"
    "theory C {\n  n : type\n  m : type\n}\n"
    "view phi : A → C {\n  a := n\n}\n";

cg::ContextGraph bare(const std::string& text) {
  cg::LoadOptions o;
  o.prelude = false;
  auto r = cg::load_text(text, o);
  for (const auto& e : r.diagnostics) ADD_FAILURE() << e.what();
  return std::move(r.graph);
}

cg::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const cg::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return cg::ErrorCode::Io;
}

}  // namespace

TEST(Pushout, AlternativeRulingFromTheRelevanceView) {
  const auto& g = corpus().graph;
  const auto& alt = g.theory("PvH-Alt");
  ASSERT_TRUE(alt.generated_by);
  EXPECT_EQ(alt.includes.front(), "PvH-Asp-Default");
  const auto* ruling = alt.find("PvH_ruling");
  ASSERT_NE(ruling, nullptr);
  EXPECT_TRUE(cg::alpha_equal(*ruling->type, term_in(g, "PvH-Alt", "⊢ ¬ Popov has_claim ball")) ||
              cgtest::same_in(g, "PvH-Alt", *ruling->type, term_in(g, "PvH-Alt", "⊢ ¬ Popov has_claim ball")));
  ASSERT_TRUE(ruling->definiens);
  EXPECT_TRUE(cgtest::same_in(g, "PvH-Alt", *ruling->definiens,
                              term_in(g, "PvH-Alt", "MP PvH_rule Π")));
  EXPECT_EQ(ruling->origin.kind, cg::Origin::Kind::Generated);

  auto r = cg::pushout_result(g, "PvH-Alt");
  EXPECT_EQ(r.rule, "MvS-Rule");
  EXPECT_EQ(r.view, "phi");
  EXPECT_EQ(r.induced.name, "PvH-Alt/induced");
  EXPECT_EQ(r.induced.status, cg::ViewStatus::Verified);
  EXPECT_EQ(r.provenance.at(QName{"PvH-Alt", "PvH_ruling"}), (QName{"MvS-Rule", "ruling"}));
  EXPECT_TRUE(cg::alpha_equal(r.induced.assignment.at({"MvS-Rule", "ruling"}),
                              Term::constant({"PvH-Alt", "PvH_ruling"})));
}

TEST(Pushout, EveryLocalDeclarationHasProvenance) {
  const auto& g = corpus().graph;
  ASSERT_EQ(g.pushouts().size(), 5u);
  for (const auto& rec : g.pushouts()) {
    auto r = cg::pushout_result(g, rec.name);
    for (const auto& d : g.theory(rec.name).decls) {
      if (d.origin.kind != cg::Origin::Kind::Generated) continue;
      ASSERT_TRUE(r.provenance.count(d.name)) << d.name.str();
      EXPECT_EQ(r.provenance.at(d.name).theory, rec.rule);
    }
    EXPECT_TRUE(cg::check_theory(const_cast<cg::ContextGraph&>(g), rec.name).empty());
  }
  EXPECT_THROW(cg::pushout_result(g, "PvH-Facts"), cg::Error);
}

TEST(ApplyRule, CorpusApplications) {
  const auto& g = corpus().graph;
  const auto* right = g.theory("PvH-Asp-McCart").find("Popov_right");
  ASSERT_NE(right, nullptr);
  EXPECT_TRUE(cgtest::same_in(g, "PvH-Asp-McCart", *right->type,
                              term_in(g, "PvH-Asp-McCart", "⊢ Popov has_right ball")));
  EXPECT_TRUE(right->definiens);

  const auto* df = g.theory("PvH-Asp-Default").find("noright_df");
  ASSERT_NE(df, nullptr);
  EXPECT_TRUE(cgtest::same_in(g, "PvH-Asp-Default", *df->type,
                              term_in(g, "PvH-Asp-Default", "⊦~ ¬ Popov has_right ball")));

  const auto* ruling = g.theory("PvH-Ruling").find("PvH_ruling");
  ASSERT_NE(ruling, nullptr);
  EXPECT_TRUE(cgtest::same_in(g, "PvH-Ruling", *ruling->type,
                              term_in(g, "PvH-Ruling", "⊢ Popov has_claim ball")));
}

TEST(ApplyRule, ReproducesTheLoadedTheory) {
  auto g = corpus().graph;
  auto r = cg::apply_rule(g, "MvS-Reduct", "MvS-Rule", "phi", "Again",
                          {{"proposition", "PvH_proposition"}, {"rule", "PvH_rule"}, {"ruling", "PvH_ruling"}});
  const auto& a = g.theory("Again").decls;
  const auto& b = g.theory("PvH-Alt").decls;
  ASSERT_EQ(a.size(), b.size());
  // Local names are qualified by their theory, so compare along the renaming.
  cg::Morphism rename;
  rename.name = "rename";
  rename.domain = "Again";
  rename.codomain = "PvH-Alt";
  for (std::size_t k = 0; k < a.size(); ++k) rename.assignment[a[k].name] = Term::constant(b[k].name);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].name.name, b[k].name.name);
    Term moved = cg::translate(g, rename, *a[k].type);
    EXPECT_TRUE(cg::alpha_equal(moved, *b[k].type)) << cg::debug_string(moved) << " vs " << cg::debug_string(*b[k].type);
  }
  EXPECT_EQ(code_of([&] { cg::apply_rule(g, "MvS-Aspects", "MvS-Rule", "phi", "X"); }),
            cg::ErrorCode::EndpointMismatch);
}

TEST(Pushout, DegenerateRuleIsTheCodomain) {
  auto g = bare(kMinimal);
  auto r = cg::compute_pushout(g, {"P", "A", "phi", {}, {}});
  const auto& p = g.theory("P");
  EXPECT_TRUE(p.decls.empty());
  EXPECT_EQ(p.includes, (std::vector<std::string>{"C"}));
  EXPECT_TRUE(r.provenance.empty());
  EXPECT_TRUE(cg::alpha_equal(r.induced.assignment.at({"A", "a"}), Term::constant({"C", "n"})));
}

TEST(Pushout, MinimalInstance) {
  auto g = bare(kMinimal);
  auto r = cg::compute_pushout(g, {"P", "B", "phi", {}, {}});
  const auto& p = g.theory("P");
  ASSERT_EQ(p.decls.size(), 1u);
  EXPECT_EQ(p.decls[0].name, (QName{"P", "P/f"}));
  EXPECT_EQ(*p.decls[0].type, Term::constant({"C", "n"}));
  EXPECT_EQ(r.induced.assignment.at({"B", "f"}), Term::constant({"P", "P/f"}));
  EXPECT_TRUE(g.has_morphism("P/induced"));
  EXPECT_EQ(code_of([&] { cg::compute_pushout(g, {"P", "B", "phi", {}, {}}); }), cg::ErrorCode::NameClash);
}

TEST(Pushout, FreshNamesAvoidClashes) {
  auto g = bare(kMinimal);
  cg::Declaration taken;
  taken.name = {"C", "P/f"};
  taken.type = Term::constant({"C", "m"});
  g.theory("C").decls.push_back(taken);
  cg::Declaration taken2 = taken;
  taken2.name = {"C", "P/f$1"};
  g.theory("C").decls.push_back(taken2);
  cg::compute_pushout(g, {"P", "B", "phi", {}, {}});
  EXPECT_EQ(g.theory("P").decls.at(0).name.name, "P/f$2");
}

TEST(Pushout, RenamingClashesAreReported) {
  auto g = bare(kMinimal);
  EXPECT_EQ(code_of([&] { cg::compute_pushout(g, {"P", "B", "phi", {{"f", "m"}}, {}}); }), cg::ErrorCode::NameClash);
  EXPECT_FALSE(g.has_theory("P"));
  EXPECT_EQ(code_of([&] { cg::compute_pushout(g, {"P", "B", "phi", {{"zz", "q"}}, {}}); }),
            cg::ErrorCode::UnknownConstant);
  auto r = cg::compute_pushout(g, {"P", "B", "phi", {{"f", "g"}}, {}});
  EXPECT_EQ(g.theory("P").decls.at(0).name.name, "g");
}

TEST(Pushout, RequiresATotalViewAndAnInclude) {
  auto g = bare(
      "theory A {\n  a : type\n  b : a\n}\n"
      "theory B {\n  include A\n  f : a\n}\n"
      "theory C {\n  n : type\n}\n"
      "view phi : A → C {\n  a := n\n}\n");
  EXPECT_EQ(code_of([&] { cg::compute_pushout(g, {"P", "B", "phi", {}, {}}); }), cg::ErrorCode::UnmappedConstant);
  EXPECT_EQ(code_of([&] { cg::compute_pushout(g, {"P", "C", "phi", {}, {}}); }), cg::ErrorCode::EndpointMismatch);
}

TEST(Pushout, IsDeterministic) {
  auto g1 = bare(kMinimal);
  auto g2 = bare(kMinimal);
  auto r1 = cg::compute_pushout(g1, {"P", "B", "phi", {}, {}});
  auto r2 = cg::compute_pushout(g2, {"P", "B", "phi", {}, {}});
  EXPECT_EQ(r1.provenance, r2.provenance);
  ASSERT_EQ(g1.theory("P").decls.size(), g2.theory("P").decls.size());
  for (std::size_t k = 0; k < g1.theory("P").decls.size(); ++k) {
    EXPECT_EQ(g1.theory("P").decls[k].name, g2.theory("P").decls[k].name);
    EXPECT_EQ(*g1.theory("P").decls[k].type, *g2.theory("P").decls[k].type);
  }
}

TEST(Pushout, IdentityAgainstIdentity) {
  auto g = bare("theory A {\n  a : type\n  b : a\n}\nview id : A → A {\n}\n");
  cg::compute_pushout(g, {"P", "A", "id", {}, {}});
  auto flat = cg::flatten(g, "P");
  auto orig = cg::flatten(g, "A");
  ASSERT_EQ(flat.size(), orig.size());
  for (std::size_t k = 0; k < flat.size(); ++k) EXPECT_EQ(flat[k].name, orig[k].name);
}

TEST(UniversalProperty, IdentityMediator) {
  auto g = bare(kMinimal);
  auto r = cg::compute_pushout(g, {"P", "B", "phi", {}, {}});
  auto chi = cg::include_morphism(g, "C", "P");
  auto m = cg::verify_universal_property(g, r, r.induced, chi);
  EXPECT_EQ(m.domain, "P");
  EXPECT_EQ(m.codomain, "P");
  EXPECT_TRUE(m.assignment.empty());
}

TEST(UniversalProperty, EmbeddingIntoASuperset) {
  auto g = bare(std::string(kMinimal) +
                "theory D {\n  n2 : type\n  m2 : type\n  f2 : n2\n  extra : n2\n}\n"
                "view psi : B → D {\n  a := n2\n  f := f2\n}\n"
                "view chi : C → D {\n  n := n2\n  m := m2\n}\n");
  auto r = cg::compute_pushout(g, {"P", "B", "phi", {}, {}});
  auto m = cg::verify_universal_property(g, r, g.morphism("psi"), g.morphism("chi"));
  EXPECT_EQ(m.status, cg::ViewStatus::Verified);
  EXPECT_EQ(m.assignment.size(), 3u);
  EXPECT_EQ(m.assignment.at({"P", "P/f"}), Term::constant({"D", "f2"}));
  EXPECT_EQ(m.assignment.at({"C", "m"}), Term::constant({"D", "m2"}));

  cg::Morphism bad = g.morphism("chi");
  bad.assignment[{"C", "n"}] = Term::constant({"D", "m2"});
  EXPECT_EQ(code_of([&] { cg::verify_universal_property(g, r, g.morphism("psi"), bad); }),
            cg::ErrorCode::NoMediator);
}

TEST(UniversalProperty, RandomInstancesRecheck) {
  cgtest::Rng rng(11);
  int compatible = 0;
  for (int k = 0; k < 40; ++k) {
    auto inst = cgtest::pushout_instance(rng);
    SCOPED_TRACE(inst.text);
    cg::LoadOptions o;
    o.prelude = false;
    auto res = cg::load_text(inst.text, o);
    ASSERT_TRUE(res.ok()) << res.diagnostics.front().what();
    auto r = cg::pushout_result(res.graph, "P");
    EXPECT_TRUE(cg::check_theory(res.graph, "P").empty());
    if (inst.compatible) {
      ++compatible;
      EXPECT_NO_THROW(cg::verify_universal_property(res.graph, r, res.graph.morphism("psi"),
                                                    cg::include_morphism(res.graph, "C", "D")));
    } else {
      EXPECT_THROW(cg::verify_universal_property(res.graph, r, res.graph.morphism("psi"),
                                                 cg::include_morphism(res.graph, "C", "D")),
                   cg::Error);
    }
  }
  EXPECT_GT(compatible, 0);
}
