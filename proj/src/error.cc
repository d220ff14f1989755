#include "shades/error.h"

namespace shades {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Validation: return "invalid system";
    case ErrorKind::UnboundVariable: return "unbound variable";
    case ErrorKind::NonContractiveLoop: return "non-contractive loop";
    case ErrorKind::MissingEquation: return "missing equation";
    case ErrorKind::Nondeterministic: return "nondeterministic";
    case ErrorKind::MalformedSymbol: return "malformed symbol";
    case ErrorKind::Diverge: return "diverges";
    case ErrorKind::NotContractive: return "not contractive";
    case ErrorKind::NotObviouslyPrefixClosed: return "not obviously prefix-closed";
    case ErrorKind::ShapeViolation: return "shape violation";
    case ErrorKind::PreconditionBreach: return "precondition breach";
    case ErrorKind::Formation: return "ill-formed type";
    case ErrorKind::Unsupported: return "unsupported";
  }
  return "error";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     const std::optional<SourceSpan>& span) {
  std::string out = to_string(kind);
  if (span)
    out += " at " + std::to_string(span->line) + ":" + std::to_string(span->column);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<SourceSpan> span)
    : std::runtime_error(decorate(kind, message, span)), kind_(kind), span_(span) {}

}  // namespace shades
