// Error type shared by every stage of the engine.

#ifndef CG_ERROR_HPP_
#define CG_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cg {

// Source position. Lines and columns are 1-based, columns count bytes.
struct Span {
  std::string file;
  std::size_t line = 0;
  std::size_t col_begin = 0;
  std::size_t col_end = 0;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t length = 0;

  bool empty() const { return line == 0; }
  std::string str() const;
};

enum class ErrorCode {
  IllegalCharacter,
  ParseError,
  DuplicateName,
  UnknownTheory,
  UnknownConstant,
  AmbiguousName,
  NotAFunction,
  NotAType,
  Unannotated,
  TypeMismatch,
  CannotInfer,
  DepthExceeded,
  IncludeCycle,
  UnmappedConstant,
  ObligationFailed,
  EndpointMismatch,
  NameClash,
  NoMediator,
  SemanticsTooLarge,
  SearchBudgetExceeded,
  InvalidRequest,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, Span span = {});

  ErrorCode code() const { return code_; }
  const Span& span() const { return span_; }
  const std::string& message() const { return message_; }

  // Attaches a span if the error does not carry one yet.
  Error& at(const Span& span);

 private:
  ErrorCode code_;
  std::string message_;
  Span span_;
};

}  // namespace cg

#endif  // CG_ERROR_HPP_
