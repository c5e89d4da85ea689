// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/error.hpp"

namespace tfdiff {

const char* error_class_name(ErrorClass cls) noexcept {
  switch (cls) {
    case ErrorClass::Usage: return "usage";
    case ErrorClass::Domain: return "domain";
    case ErrorClass::Io: return "io";
    case ErrorClass::Format: return "format";
    case ErrorClass::Config: return "config";
    case ErrorClass::UndefinedField: return "undefined";
    case ErrorClass::Fit: return "fit";
    case ErrorClass::WrongModel: return "wrong-model";
    case ErrorClass::MissingOrder: return "missing-order";
  }
  return "unknown";
}

}  // namespace tfdiff
