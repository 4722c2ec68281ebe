#include "cg/error.hpp"

namespace cg {

std::string Span::str() const {
  std::string out = file.empty() ? std::string("<input>") : file;
  if (line == 0) return out;
  out += ':' + std::to_string(line) + ':' + std::to_string(col_begin);
  return out;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IllegalCharacter: return "IllegalCharacter";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownTheory: return "UnknownTheory";
    case ErrorCode::UnknownConstant: return "UnknownConstant";
    case ErrorCode::AmbiguousName: return "AmbiguousName";
    case ErrorCode::NotAFunction: return "NotAFunction";
    case ErrorCode::NotAType: return "NotAType";
    case ErrorCode::Unannotated: return "Unannotated";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::CannotInfer: return "CannotInfer";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::IncludeCycle: return "IncludeCycle";
    case ErrorCode::UnmappedConstant: return "UnmappedConstant";
    case ErrorCode::ObligationFailed: return "ObligationFailed";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::NoMediator: return "NoMediator";
    case ErrorCode::SemanticsTooLarge: return "SemanticsTooLarge";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {
std::string render(ErrorCode code, const std::string& message, const Span& span) {
  std::string out;
  if (!span.empty()) out += span.str() + ": ";
  out += std::string(to_string(code)) + ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorCode code, std::string message, Span span)
    : std::runtime_error(render(code, message, span)),
      code_(code),
      message_(std::move(message)),
      span_(std::move(span)) {}

Error& Error::at(const Span& span) {
  if (span_.empty() && !span.empty()) {
    *this = Error(code_, message_, span);
  }
  return *this;
}

}  // namespace cg
