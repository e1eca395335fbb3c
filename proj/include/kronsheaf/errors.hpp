#pragma once

#include <stdexcept>
#include <string>

namespace ks {

// Every failure raised by the library derives from Error.  The category
// decides the process exit code used by the command line front end.
enum class ErrorCategory { Parse, DegreeCap, Resolution, Precondition };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), cat_(cat), kind_(std::move(kind)) {}
  ErrorCategory category() const { return cat_; }
  const std::string& kind() const { return kind_; }

 private:
  ErrorCategory cat_;
  std::string kind_;
};

#define KS_DEFINE_ERROR(Name, Cat)                                              \
  class Name : public Error {                                                   \
   public:                                                                      \
    explicit Name(const std::string& what) : Error(ErrorCategory::Cat, #Name, what) {} \
  };

KS_DEFINE_ERROR(ParseError, Parse)
KS_DEFINE_ERROR(DegreeCapExceeded, DegreeCap)
KS_DEFINE_ERROR(ResolutionIncomplete, Resolution)
KS_DEFINE_ERROR(FieldMismatch, Precondition)
KS_DEFINE_ERROR(InvalidField, Precondition)
KS_DEFINE_ERROR(DimensionMismatch, Precondition)
KS_DEFINE_ERROR(InfiniteField, Precondition)
KS_DEFINE_ERROR(VarMismatch, Precondition)
KS_DEFINE_ERROR(ZeroPolynomial, Precondition)
KS_DEFINE_ERROR(InvalidLeadingSign, Precondition)
KS_DEFINE_ERROR(EmptySubmodule, Precondition)
KS_DEFINE_ERROR(NotSemistable, Precondition)
KS_DEFINE_ERROR(DimHMismatch, Precondition)
KS_DEFINE_ERROR(BudgetExhausted, Precondition)
KS_DEFINE_ERROR(WeightMismatch, Precondition)
KS_DEFINE_ERROR(NotRegular, Precondition)
KS_DEFINE_ERROR(WrongDimension, Precondition)
KS_DEFINE_ERROR(PreconditionFailed, Precondition)

#undef KS_DEFINE_ERROR

inline int exit_code_for(ErrorCategory cat) {
  switch (cat) {
    case ErrorCategory::Parse: return 2;
    case ErrorCategory::DegreeCap: return 3;
    case ErrorCategory::Resolution: return 4;
    case ErrorCategory::Precondition: return 5;
  }
  return 5;
}

}  // namespace ks
