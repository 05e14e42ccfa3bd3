#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace omq {

/// Line/column (1-based) of a token in program text.
struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Base of every error raised by the library. Parser errors carry a location.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what,
                 std::optional<SourceLocation> where = std::nullopt)
      : std::runtime_error(where ? format(what, *where) : what),
        location_(where) {}

  const std::optional<SourceLocation>& location() const { return location_; }

 private:
  static std::string format(const std::string& what, SourceLocation where) {
    return std::to_string(where.line) + ":" + std::to_string(where.column) +
           ": " + what;
  }

  std::optional<SourceLocation> location_;
};

#define OMQ_DEFINE_ERROR(Name)      \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  };

OMQ_DEFINE_ERROR(SyntaxError)
OMQ_DEFINE_ERROR(ArityError)
OMQ_DEFINE_ERROR(SafetyError)
OMQ_DEFINE_ERROR(ReservedNameError)
OMQ_DEFINE_ERROR(NameError)
OMQ_DEFINE_ERROR(PreconditionViolated)
OMQ_DEFINE_ERROR(InactiveTrigger)
OMQ_DEFINE_ERROR(UnsupportedClass)
OMQ_DEFINE_ERROR(SchemaMismatch)
OMQ_DEFINE_ERROR(ZeroAryAtom)
OMQ_DEFINE_ERROR(EmptyBody)
OMQ_DEFINE_ERROR(EnumerationTooLarge)

#undef OMQ_DEFINE_ERROR

}  // namespace omq
