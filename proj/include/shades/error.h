#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace shades {

enum class ErrorKind {
  Syntax,
  Validation,
  UnboundVariable,
  NonContractiveLoop,
  MissingEquation,
  Nondeterministic,
  MalformedSymbol,
  Diverge,
  NotContractive,
  NotObviouslyPrefixClosed,
  ShapeViolation,
  PreconditionBreach,
  Formation,
  Unsupported,
};

const char* to_string(ErrorKind kind);

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<SourceSpan> span = std::nullopt);

  ErrorKind kind() const { return kind_; }
  const std::optional<SourceSpan>& span() const { return span_; }

 private:
  ErrorKind kind_;
  std::optional<SourceSpan> span_;
};

}  // namespace shades
