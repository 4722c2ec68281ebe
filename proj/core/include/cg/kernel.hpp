// Logical-framework kernel: substitution, beta-delta normalization,
// definitional equality and bidirectional type checking.
//
// Propositions are terms of type `bool`; a proof of `p` is a term of type
// `⊢ p`. There is a single sort `type` and no universe above it. Definitional
// equality is beta plus delta (unfolding of defined constants), no eta.

#ifndef CG_KERNEL_HPP_
#define CG_KERNEL_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cg/error.hpp"
#include "cg/term.hpp"

namespace cg {

struct ConstantInfo {
  QName name;
  Term type;
  std::optional<Term> definiens;
};

// The constants visible in some theory, usually its flattening.
class Signature {
 public:
  void add(QName name, Term type, std::optional<Term> definiens = std::nullopt);
  bool remove(const QName& name);

  const ConstantInfo* find(const QName& name) const;
  // All visible constants with the given unqualified name.
  const std::vector<QName>& lookup(std::string_view name) const;

  std::size_t size() const { return constants_.size(); }
  const std::vector<QName>& order() const { return order_; }

 private:
  std::map<QName, ConstantInfo> constants_;
  std::map<std::string, std::vector<QName>, std::less<>> by_name_;
  std::vector<QName> order_;
};

struct KernelOptions {
  std::size_t unfold_bound = 10'000;
};

class TypingContext {
 public:
  explicit TypingContext(const Signature& sig, KernelOptions options = {})
      : sig_(&sig), options_(options) {}

  const Signature& signature() const { return *sig_; }
  const KernelOptions& options() const { return options_; }

  // Binder stack, innermost last.
  const std::vector<std::pair<std::string, Term>>& binders() const { return binders_; }
  TypingContext extend(std::string name, Term type) const;
  const Term* lookup_var(std::string_view name) const;
  bool binds(std::string_view name) const { return lookup_var(name) != nullptr; }

 private:
  const Signature* sig_;
  KernelOptions options_;
  std::vector<std::pair<std::string, Term>> binders_;
};

// A name based on `base` that is not in `avoid`: base', base'', ...
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// Capture-avoiding substitution of `value` for free occurrences of `var`.
Term substitute(const Term& body, const std::string& var, const Term& value);

// Beta-delta normal form. Throws Error(DepthExceeded) past the unfold bound.
Term normalize(const TypingContext& ctx, const Term& t);
// Weak-head normal form (only the head is reduced).
Term whnf(const TypingContext& ctx, const Term& t);

// Equality up to renaming of bound variables. Lambda annotations and the
// implicit flag of Pi do not take part.
bool alpha_equal(const Term& a, const Term& b);

// Definitional equality: alpha-equality of normal forms.
bool equal(const TypingContext& ctx, const Term& a, const Term& b);

Term infer_type(const TypingContext& ctx, const Term& t);
void check_type(const TypingContext& ctx, const Term& t, const Term& expected);

// True for `type` itself and for terms whose type is `type`.
bool is_type(const TypingContext& ctx, const Term& t);
// Throws unless `t` is `type` or a type.
void check_is_type(const TypingContext& ctx, const Term& t);

// Number of leading implicit Pis of a type.
std::size_t implicit_arity(const TypingContext& ctx, const Term& type);
std::string describe(const Term& t);

// One argument of an application spine during elaboration. `elaborate`
// receives the expected type when it is already known.
struct SpineArg {
  std::function<Term(const TypingContext&, const std::optional<Term>& expected)> elaborate;
  bool hole = false;  // `_`: solve by matching
};

struct Elaborated {
  Term term;
  Term type;
};

// Applies `head : head_type` to `args`, inserting implicit arguments solved by
// first-order matching of argument types against the Pi telescope. When more
// arguments are supplied than the head has explicit parameters, the implicit
// arguments are taken to be supplied explicitly. Throws Error(CannotInfer).
Elaborated elaborate_spine(const TypingContext& ctx, const Term& head, const Term& head_type,
                           const std::vector<SpineArg>& args, const std::optional<Term>& expected);

// Restores the elided implicit arguments of `head args...`.
Term solve_implicits(const TypingContext& ctx, const Term& head, const std::vector<Term>& args,
                     const std::optional<Term>& expected = std::nullopt);

}  // namespace cg

#endif  // CG_KERNEL_HPP_
