#pragma once

#include <stdexcept>
#include <string>

namespace locreg {

enum class ErrorKind {
  invalid_input,
  degenerate_simplex,
  degenerate_input,
  not_interior,
  not_applicable,
  resource_limit,
  singular_kkt,
};

const char* to_string(ErrorKind kind);

// Base of every error thrown by the library. Solver outcomes such as
// infeasibility or unboundedness are reported through status fields instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define LOCREG_DEFINE_ERROR(Name, kind_value)                      \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(kind_value, what) {} \
  };

LOCREG_DEFINE_ERROR(InvalidInput, ErrorKind::invalid_input)
LOCREG_DEFINE_ERROR(DegenerateSimplex, ErrorKind::degenerate_simplex)
LOCREG_DEFINE_ERROR(DegenerateInput, ErrorKind::degenerate_input)
LOCREG_DEFINE_ERROR(NotInterior, ErrorKind::not_interior)
LOCREG_DEFINE_ERROR(NotApplicable, ErrorKind::not_applicable)
LOCREG_DEFINE_ERROR(ResourceLimit, ErrorKind::resource_limit)
LOCREG_DEFINE_ERROR(SingularKkt, ErrorKind::singular_kkt)

#undef LOCREG_DEFINE_ERROR

}  // namespace locreg
