// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tfdiff {

// Machine-readable failure category. The C API maps these 1:1 onto tfd_status.
enum class ErrorClass {
  Usage,
  Domain,
  Io,
  Format,
  Config,
  UndefinedField,
  Fit,
  WrongModel,
  MissingOrder,
};

const char* error_class_name(ErrorClass cls) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

#define TFDIFF_DEFINE_ERROR(Name, Cls)                                   \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(ErrorClass::Cls, what) {} \
  };

TFDIFF_DEFINE_ERROR(UsageError, Usage)
TFDIFF_DEFINE_ERROR(DomainError, Domain)
TFDIFF_DEFINE_ERROR(IoError, Io)
TFDIFF_DEFINE_ERROR(FormatError, Format)
TFDIFF_DEFINE_ERROR(ConfigError, Config)
TFDIFF_DEFINE_ERROR(UndefinedFieldError, UndefinedField)
TFDIFF_DEFINE_ERROR(FitError, Fit)
TFDIFF_DEFINE_ERROR(WrongModelError, WrongModel)
TFDIFF_DEFINE_ERROR(MissingOrderError, MissingOrder)

#undef TFDIFF_DEFINE_ERROR

}  // namespace tfdiff
