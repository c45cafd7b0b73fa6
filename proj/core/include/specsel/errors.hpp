#pragma once

#include <stdexcept>
#include <string>

namespace specsel {

// Base class for all library errors. `kind()` is a stable machine-readable
// tag used by the CLI error reporting.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define SPECSEL_ERROR_TYPE(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }   \
  }

// Numerical / model errors.
SPECSEL_ERROR_TYPE(NotPositiveDefinite);
SPECSEL_ERROR_TYPE(ClassCollapsed);
SPECSEL_ERROR_TYPE(Infeasible);
SPECSEL_ERROR_TYPE(RankDeficient);
SPECSEL_ERROR_TYPE(DimensionMismatch);

// Data ingestion errors.
SPECSEL_ERROR_TYPE(ParseError);
SPECSEL_ERROR_TYPE(NonFinite);
SPECSEL_ERROR_TYPE(UnknownLabel);

// Model document errors.
SPECSEL_ERROR_TYPE(VersionMismatch);
SPECSEL_ERROR_TYPE(SchemaError);

SPECSEL_ERROR_TYPE(IoError);

#undef SPECSEL_ERROR_TYPE

}  // namespace specsel
