// Random instances for property tests and the acceptance checks.

#ifndef CG_TESTS_GENERATORS_HPP_
#define CG_TESTS_GENERATORS_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cg/argumentation.hpp"
#include "cg/kernel.hpp"
#include "cg/syntax.hpp"

namespace cgtest {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(eng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(eng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))];
  }

 private:
  std::mt19937_64 eng_;
};

// A fixed signature over sorts o and i with a type family P : o → type, a
// dependent constructor mk, a dependent consumer pick and two definitions.
struct TermWorld {
  cg::Signature sig;
  cg::Term o, i;
  TermWorld();
  cg::Term constant(const std::string& name) const;
  cg::Term P(const cg::Term& t) const;
};

struct Typed {
  cg::Term term;
  cg::Term type;
};

class TermGen {
 public:
  TermGen(const TermWorld& world, Rng& rng) : w_(world), rng_(rng) {}

  cg::Term type(int depth);
  // A term of type `ty` whose free variables are bound in `scope`.
  cg::Term term(const cg::Term& ty, int depth, const std::vector<std::pair<std::string, cg::Term>>& scope = {});
  Typed typed(int depth);

 private:
  cg::Term object(int depth, const std::vector<std::pair<std::string, cg::Term>>& scope);
  cg::Term redex(const cg::Term& ty, int depth, const std::vector<std::pair<std::string, cg::Term>>& scope);
  std::string binder();

  const TermWorld& w_;
  Rng& rng_;
};

// Source text of a random pushout instance: theories S, A, B, C, D, views
// phi : A → C and psi : B → D, and `pushout P = apply B along phi`. psi
// agrees with phi on A unless `compatible` is false.
struct PushoutInstance {
  std::string text;
  bool compatible = true;
};
PushoutInstance pushout_instance(Rng& rng);

// Source text with theories S, X and Y; X and Y include S and have at most
// four undefined constants each, some of them axioms over S's families.
std::string view_instance(Rng& rng);

cg::AttackGraph attack_graph(Rng& rng, int max_nodes);

// Random item lists in the surface grammar.
cg::syntax::SourceGraphAST source_ast(Rng& rng);

}  // namespace cgtest

#endif  // CG_TESTS_GENERATORS_HPP_
