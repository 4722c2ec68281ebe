// Runs the eight acceptance criteria and prints one PASS/FAIL line each.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cg/analogy.hpp"
#include "cg/argumentation.hpp"
#include "cg/export.hpp"
#include "cg/kernel.hpp"
#include "cg/loader.hpp"
#include "cg/pushout.hpp"
#include "corpus.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace {

using cg::Label;
using cg::Term;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string first_error(const std::vector<cg::Error>& es) { return es.empty() ? "" : es.front().what(); }

bool same_type(const cg::ContextGraph& g, const std::string& theory, const std::string& decl, const std::string& text) {
  const auto* d = g.theory(theory).find(decl);
  return d && d->type && cgtest::same_in(g, theory, *d->type, cgtest::term_in(g, theory, text));
}

Outcome corpus_reproduction() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  auto r = cg::load_files({cgtest::corpus_path("pvh.cg")});
  if (!r.ok()) {
    o.fail("check: " + first_error(r.diagnostics));
    return o;
  }
  auto again = cg::load_text(cg::print_elaborated(r.graph));
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!again.ok()) o.fail("elaborated output does not check: " + first_error(again.diagnostics));

  std::vector<std::string> generated;
  for (const auto& t : r.graph.theory_names()) {
    if (r.graph.theory(t).generated_by) generated.push_back(t);
  }
  const std::vector<std::string> expected{"PvH-Asp-Gray", "PvH-Asp-Default", "PvH-Alt", "PvH-Asp-McCart",
                                          "PvH-Ruling"};
  if (generated != expected) o.fail("generated theories differ from the five applications");
  if (!r.graph.theory("PvH-Ruling").checked || !same_type(r.graph, "PvH-Ruling", "PvH_ruling", "⊢ Popov has_claim ball")) {
    o.fail("PvH-Ruling lacks ⊢ Popov has_claim ball");
  }
  if (!r.graph.theory("PvH-Alt").checked || !same_type(r.graph, "PvH-Alt", "PvH_ruling", "⊢ ¬ Popov has_claim ball")) {
    o.fail("PvH-Alt lacks ⊢ ¬ Popov has_claim ball");
  }
  if (elapsed >= 2.0) o.fail("took " + std::to_string(elapsed) + " s");
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu declarations, 5 applications, %.0f ms", r.declarations_checked,
                  elapsed * 1000);
    o.detail = buf;
  }
  return o;
}

Outcome attack_reproduction() {
  Outcome o;
  const auto& g = cgtest::corpus().graph;
  auto arg = cg::argue(g);
  if (arg.edges.size() != 2) o.fail(std::to_string(arg.edges.size()) + " edges");
  auto has = [&](const std::string& a, const std::string& t, cg::AttackEdge::Provenance p) {
    return std::any_of(arg.edges.begin(), arg.edges.end(), [&](const cg::AttackEdge& e) {
      return e.attacker == a && e.target == t && e.provenance == p && e.verified;
    });
  };
  using P = cg::AttackEdge::Provenance;
  if (!has("PvH-Asp-McCart", "PvH-Asp-Default", P::Detected) && !has("PvH-Asp-McCart", "PvH-Asp-Default", P::Asserted)) {
    o.fail("missing McCart -> Default");
  }
  if (!has("PvH-Ruling", "PvH-Alt", P::Inherited)) o.fail("missing inherited Ruling -> Alt");
  const auto& l = arg.labelings.front();
  for (std::size_t i = 0; i < arg.graph.nodes.size(); ++i) {
    const auto& n = arg.graph.nodes[i];
    Label want = n == "PvH-Asp-Default" || n == "PvH-Alt" ? Label::Out : Label::In;
    if (l.labels[i] != want) o.fail(n + " is " + cg::to_string(l.labels[i]));
  }
  if (o.pass) o.detail = "2 edges; Default and Alt OUT, others IN";
  return o;
}

Outcome kernel_properties() {
  Outcome o;
  cgtest::TermWorld w;
  cg::TypingContext ctx(w.sig);
  cgtest::Rng rng(1);
  cgtest::TermGen gen(w, rng);
  const int n = 1000;
  for (int k = 0; k < n && o.pass; ++k) {
    auto t = gen.typed(3);
    const std::string where = " on " + cg::describe(t.term);
    try {
      Term nf = cg::normalize(ctx, t.term);
      if (!cg::alpha_equal(cg::normalize(ctx, nf), nf)) o.fail("normalize not idempotent" + where);
      cg::check_type(ctx, nf, t.type);
      if (!cg::equal(ctx, cg::infer_type(ctx, nf), t.type)) o.fail("type not preserved" + where);

      Term arg = gen.term(w.o, 2);
      Term body = gen.term(w.o, 2, {{"v", w.o}});
      Term redex = Term::app(Term::lambda("v", w.o, body), arg);
      Term inst = cg::substitute(body, "v", arg);
      if (!cg::equal(ctx, redex, inst)) o.fail("substitution lemma fails" + where);
      cg::check_type(ctx, inst, w.o);

      Term other = gen.term(t.type, 3);
      if (!cg::equal(ctx, t.term, t.term)) o.fail("equal not reflexive" + where);
      if (cg::equal(ctx, t.term, other) != cg::equal(ctx, other, t.term)) o.fail("equal not symmetric" + where);
      if (cg::equal(ctx, t.term, other) && cg::equal(ctx, other, nf) != cg::equal(ctx, t.term, nf)) {
        o.fail("equal not transitive" + where);
      }
    } catch (const cg::Error& e) {
      o.fail(std::string(e.what()) + where);
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " terms";
  return o;
}

Outcome pushout_universal_property() {
  Outcome o;
  cgtest::Rng rng(2);
  const int n = 100;
  int compatible = 0;
  for (int k = 0; k < n && o.pass; ++k) {
    auto inst = cgtest::pushout_instance(rng);
    cg::LoadOptions lo;
    lo.prelude = false;
    auto res = cg::load_text(inst.text, lo);
    if (!res.ok()) {
      o.fail("instance " + std::to_string(k) + ": " + first_error(res.diagnostics));
      break;
    }
    auto r = cg::pushout_result(res.graph, "P");
    auto chi = cg::include_morphism(res.graph, "C", "D");
    const auto& psi = res.graph.morphism("psi");
    auto brute = cgtest::brute_force_mediators(res.graph, r, psi, chi);
    if (inst.compatible) {
      ++compatible;
      if (brute.size() != 1) {
        o.fail("instance " + std::to_string(k) + ": " + std::to_string(brute.size()) + " mediators");
        break;
      }
      try {
        auto m = cg::verify_universal_property(res.graph, r, psi, chi);
        if (m.assignment != brute[0].assignment) o.fail("instance " + std::to_string(k) + ": mediator differs");
      } catch (const cg::Error& e) {
        o.fail("instance " + std::to_string(k) + ": " + e.what());
      }
    } else {
      if (!brute.empty()) o.fail("instance " + std::to_string(k) + ": incompatible cocone has a mediator");
      try {
        cg::verify_universal_property(res.graph, r, psi, chi);
        o.fail("instance " + std::to_string(k) + ": incompatible cocone accepted");
      } catch (const cg::Error& e) {
        if (e.code() != cg::ErrorCode::NoMediator) o.fail(e.what());
      }
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " instances, " + std::to_string(compatible) + " compatible";
  return o;
}

Outcome functoriality() {
  Outcome o;
  const auto& g = cgtest::corpus().graph;
  std::vector<cg::Morphism> ms;
  for (const auto& n : g.morphism_names()) ms.push_back(g.morphism(n));
  for (const auto& t : cg::default_scope(g)) {
    for (const auto& inc : g.theory(t).includes) ms.push_back(cg::include_morphism(g, inc, t));
  }
  std::size_t pairs = 0;
  for (const auto& m1 : ms) {
    for (const auto& m2 : ms) {
      if (m1.codomain != m2.domain) continue;
      ++pairs;
      auto c = cg::compose(g, m1, m2);
      auto sig = cg::signature_of(g, m2.codomain);
      cg::TypingContext ctx(sig);
      for (const auto& d : cg::flatten(g, m1.domain)) {
        std::vector<Term> probes{Term::constant(d.name)};
        if (d.type) probes.push_back(*d.type);
        for (const auto& t : probes) {
          if (!cg::equal(ctx, cg::translate(g, c, t), cg::translate(g, m2, cg::translate(g, m1, t)))) {
            o.fail(m1.name + " ; " + m2.name + " at " + d.name.str());
          }
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(pairs) + " composable pairs";
  return o;
}

Outcome labeling_oracle() {
  Outcome o;
  cgtest::Rng rng(3);
  const int n = 200;
  for (int k = 0; k < n && o.pass; ++k) {
    auto g = cgtest::attack_graph(rng, 10);
    auto complete = cgtest::brute_force_complete(g);
    const std::vector<Label>* least = nullptr;
    for (const auto& l : complete) {
      bool below_all = std::all_of(complete.begin(), complete.end(), [&](const auto& other) {
        for (std::size_t i = 0; i < l.size(); ++i) {
          if (l[i] == Label::In && other[i] != Label::In) return false;
        }
        return true;
      });
      if (below_all) least = &l;
    }
    if (!least) {
      o.fail("graph " + std::to_string(k) + ": no least complete labeling");
    } else if (cg::grounded(g).labels != *least) {
      o.fail("graph " + std::to_string(k) + ": grounded differs from the oracle");
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " graphs";
  return o;
}

Outcome view_finder_oracle() {
  Outcome o;
  cgtest::Rng rng(4);
  const int n = 50;
  for (int k = 0; k < n && o.pass; ++k) {
    auto r = cg::load_text(cgtest::view_instance(rng));
    if (!r.ok()) {
      o.fail("toy " + std::to_string(k) + ": " + first_error(r.diagnostics));
      break;
    }
    for (bool partial : {false, true}) {
      cg::FindOptions fo;
      fo.allow_partial = partial;
      std::vector<cgtest::Assignment> found;
      for (const auto& c : cg::find_views(r.graph, "X", "Y", fo)) found.push_back(c.assignment);
      if (cgtest::canonical(found) != cgtest::canonical(cgtest::brute_force_views(r.graph, "X", "Y", partial))) {
        o.fail("toy " + std::to_string(k) + (partial ? " (partial)" : " (total)") + " differs from brute force");
      }
    }
  }
  const auto& g = cgtest::corpus().graph;
  auto best = cg::find_views(g, "MvS-Reduct", "PvH-Asp-Default");
  const std::map<cg::QName, Term> fig{{{"MvS-Reduct", "InsCorp"}, Term::constant({"PvH-Lexicon", "Popov"})},
                                      {{"MvS-Reduct", "money"}, Term::constant({"PvH-Lexicon", "ball"})},
                                      {{"MvS-Reduct", "Aspect"}, Term::constant({"PvH-Asp-Default", "Π"})}};
  if (best.empty() || best.front().assignment != fig || best.front().score != 1.0) {
    o.fail("relevance view is not rank 1 with score 1");
  }
  auto a2 = cg::check_A2(g, g.morphism("phi"), "MvS-Aspects");
  std::vector<std::string> missing;
  for (const auto& q : a2.missing) missing.push_back(q.name);
  if (a2.holds || missing != std::vector<std::string>{"check", "bank"}) o.fail("MvS-Aspects not reported non-total");
  if (o.pass) o.detail = std::to_string(n) + " toys; relevance view rank 1; missing {check, bank}";
  return o;
}

Outcome round_trip() {
  Outcome o;
  namespace sx = cg::syntax;
  for (const char* file : {"pvh.cg", "folnd.cg"}) {
    auto ast = sx::parse_source(cgtest::read_file(cgtest::corpus_path(file)));
    std::string once = sx::print_graph(ast);
    auto again = sx::parse_source(once);
    if (!sx::same(ast, again) || sx::print_graph(again) != once) o.fail(std::string(file) + " is not a fixed point");
  }
  cgtest::Rng rng(5);
  const int n = 500;
  for (int k = 0; k < n && o.pass; ++k) {
    auto ast = cgtest::source_ast(rng);
    std::string text = sx::print_graph(ast);
    try {
      auto back = sx::parse_source(text);
      if (!sx::same(ast, back)) o.fail("generated AST " + std::to_string(k) + " changes");
      if (sx::print_graph(back) != text) o.fail("generated AST " + std::to_string(k) + " prints differently");
    } catch (const cg::Error& e) {
      o.fail("generated AST " + std::to_string(k) + ": " + e.what());
    }
  }
  if (o.pass) o.detail = "corpus and " + std::to_string(n) + " generated ASTs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 corpus reproduction", corpus_reproduction},
      {"AC2 attacks and labeling", attack_reproduction},
      {"AC3 kernel properties", kernel_properties},
      {"AC4 pushout universal property", pushout_universal_property},
      {"AC5 translation functoriality", functoriality},
      {"AC6 labeling oracle", labeling_oracle},
      {"AC7 view finder oracle", view_finder_oracle},
      {"AC8 round trip", round_trip},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("uncaught: ") + e.what());
    }
    std::printf("%s: %s (%s)\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
