#pragma once

#include <stdexcept>
#include <string>

namespace ambigua {

// Base of every error the library throws. `kind()` is a stable tag used by the
// CLI for exit codes and by tests to assert on the error class.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define AMBIGUA_ERROR(Name)                                                 \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(#Name, what) {}         \
  }

AMBIGUA_ERROR(SyntaxError);
AMBIGUA_ERROR(TypeMismatch);
AMBIGUA_ERROR(UnboundVariable);
AMBIGUA_ERROR(UninterpretedConstant);
AMBIGUA_ERROR(DomainTooLarge);
AMBIGUA_ERROR(AmbiguousInput);
AMBIGUA_ERROR(SchemaError);
AMBIGUA_ERROR(UnknownToken);
AMBIGUA_ERROR(WrongCategory);
AMBIGUA_ERROR(Undefined);
AMBIGUA_ERROR(EmptyResult);
AMBIGUA_ERROR(BadShape);
AMBIGUA_ERROR(Blocked);
AMBIGUA_ERROR(NonTermination);
AMBIGUA_ERROR(UnanchoredAnchor);
AMBIGUA_ERROR(AntiRandomViolation);

#undef AMBIGUA_ERROR

}  // namespace ambigua
