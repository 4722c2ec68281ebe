#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cg/analogy.hpp"
#include "cg/argumentation.hpp"
#include "cg/export.hpp"
#include "cg/loader.hpp"

namespace {

enum Exit { kOk = 0, kDiagnostics = 1, kUsage = 2, kIo = 3 };

struct Config {
  std::vector<std::string> inputs;
  std::string output;
  bool no_prelude = false;
  std::string prelude;
  std::size_t unfold_bound = cg::KernelOptions{}.unfold_bound;
  std::string semantics = "grounded";
  std::string theory;
  std::string from, to;
  bool partial = false;
  bool as_json = false;
  std::size_t max_results = 10;
  std::size_t budget = cg::FindOptions{}.budget;
};

cg::LoadOptions load_options(const Config& c) {
  cg::LoadOptions o;
  o.prelude = !c.no_prelude;
  o.prelude_path = c.prelude;
  o.kernel.unfold_bound = c.unfold_bound;
  return o;
}

void emit(const Config& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw cg::Error(cg::ErrorCode::Io, "cannot write " + c.output);
  out << text;
}

// Loads the inputs and prints diagnostics; false if there were any.
bool load(const Config& c, cg::LoadResult& r) {
  for (const auto& p : c.inputs) {
    if (!std::filesystem::exists(p)) throw cg::Error(cg::ErrorCode::Io, "no such file " + p);
  }
  r = cg::load_files(c.inputs, load_options(c));
  for (const auto& e : r.diagnostics) std::cerr << e.what() << "\n";
  return r.ok();
}

int run(const std::string& command, const Config& c) {
  cg::LoadResult r;
  bool ok = load(c, r);
  if (command == "check") {
    std::cout << r.declarations_checked << " declarations checked";
    if (!ok) std::cout << ", " << r.diagnostics.size() << " errors";
    std::cout << "\n";
    return ok ? kOk : kDiagnostics;
  }
  if (!ok) return kDiagnostics;
  if (command == "flatten") {
    emit(c, cg::print_flattened(r.graph, c.theory));
  } else if (command == "elaborate") {
    emit(c, cg::print_elaborated(r.graph));
  } else if (command == "argue") {
    auto s = cg::parse_semantics(c.semantics);
    auto a = cg::argue(r.graph, s, load_options(c).kernel);
    for (const auto& e : a.diagnostics) std::cerr << e.what() << "\n";
    emit(c, cg::argue_json(r.graph, a, s));
    return a.diagnostics.empty() ? kOk : kDiagnostics;
  } else if (command == "analogies") {
    cg::FindOptions fo;
    fo.allow_partial = c.partial;
    fo.max_results = c.max_results;
    fo.budget = c.budget;
    fo.kernel = load_options(c).kernel;
    if (c.as_json) {
      auto a = cg::argue(r.graph, cg::Semantics::Grounded, fo.kernel);
      auto report = cg::analogy_report(r.graph, c.from, c.to, a, fo);
      if (!c.partial) {
        std::erase_if(report.candidates, [](const cg::ViewCandidate& v) { return !v.total(); });
      }
      if (c.max_results && report.candidates.size() > c.max_results) report.candidates.resize(c.max_results);
      emit(c, cg::analogy_json(r.graph, report));
    } else {
      auto fx = cg::graph_fixities(r.graph);
      std::string out;
      auto found = cg::find_views(r.graph, c.from, c.to, fo);
      for (std::size_t i = 0; i < found.size(); ++i) {
        const auto& v = found[i];
        char score[16];
        std::snprintf(score, sizeof score, "%.3f", v.score);
        out += "#" + std::to_string(i + 1) + " score " + score + (v.total() ? " total\n" : " partial\n");
        for (const auto& o : v.discharged) {
          out += "  " + o.constant.name + " := " + cg::render(o.value, fx) + "  : " + cg::render(o.expected, fx) + "\n";
        }
      }
      if (found.empty()) out = "no views from " + c.from + " to " + c.to + "\n";
      emit(c, out);
    }
  } else if (command == "dot") {
    auto a = cg::argue(r.graph, cg::Semantics::Grounded, load_options(c).kernel);
    emit(c, cg::export_dot(r.graph, a.edges));
  } else if (command == "json") {
    emit(c, cg::graph_json(r.graph));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context graphs: check, elaborate and argue over theory graphs"};
  app.require_subcommand(1);
  Config c;
  app.add_flag("--no-prelude", c.no_prelude, "Do not load the FOLND prelude");
  app.add_option("--prelude", c.prelude, "Prelude file");
  app.add_option("--unfold-bound", c.unfold_bound, "Normalization step bound")->check(CLI::PositiveNumber);

  auto inputs = [&](CLI::App* sub) {
    sub->add_option("inputs", c.inputs, "Source files")->required();
    sub->add_option("-o,--output", c.output, "Write the result to a file");
  };
  auto* check = app.add_subcommand("check", "Type-check and report diagnostics");
  inputs(check);
  auto* flatten = app.add_subcommand("flatten", "Print a theory with its includes inlined");
  inputs(flatten);
  flatten->add_option("-t,--theory", c.theory, "Theory to flatten")->required();
  auto* elaborate = app.add_subcommand("elaborate", "Compute every pushout and print the resulting graph");
  inputs(elaborate);
  auto* argue = app.add_subcommand("argue", "Detect attacks and label the theories (JSON)");
  inputs(argue);
  argue->add_option("-s,--semantics", c.semantics, "grounded, preferred or complete")
      ->check(CLI::IsMember({"grounded", "preferred", "complete"}));
  auto* analogies = app.add_subcommand("analogies", "Search views between two theories");
  inputs(analogies);
  analogies->add_option("--from", c.from, "Domain theory")->required();
  analogies->add_option("--to", c.to, "Codomain theory")->required();
  analogies->add_flag("--partial", c.partial, "Include partial views");
  analogies->add_flag("--json", c.as_json, "Report with the A1-A3 verdicts as JSON");
  analogies->add_option("--max", c.max_results, "Maximal number of candidates (0: all)");
  analogies->add_option("--search-budget", c.budget, "Search node budget")->check(CLI::PositiveNumber);
  auto* dot = app.add_subcommand("dot", "Export the graph in DOT");
  inputs(dot);
  auto* js = app.add_subcommand("json", "Export the graph as JSON");
  inputs(js);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), c);
  } catch (const cg::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == cg::ErrorCode::Io ? kIo : kDiagnostics;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDiagnostics;
  }
}
