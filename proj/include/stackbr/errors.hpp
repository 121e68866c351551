#pragma once

#include <stdexcept>
#include <string>

namespace stackbr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define STACKBR_ERROR(Name)                                        \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }   \
  };

STACKBR_ERROR(MalformedComplex)
STACKBR_ERROR(ResourceLimit)
STACKBR_ERROR(NotFinite)
STACKBR_ERROR(Unsupported)
STACKBR_ERROR(BadCharacteristic)
STACKBR_ERROR(UnsupportedBase)
STACKBR_ERROR(UnsupportedGenus)
STACKBR_ERROR(HypothesisUnmet)
STACKBR_ERROR(NotLocallyBrauerless)
STACKBR_ERROR(InvalidClass)
STACKBR_ERROR(ValidationError)
STACKBR_ERROR(ParseError)

#undef STACKBR_ERROR

}  // namespace stackbr
