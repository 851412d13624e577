#pragma once

#include <stdexcept>
#include <string>

namespace fpnn {

// Base of every error raised by the library. The CLI maps these to exit
// status 1; usage errors are handled separately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FPNN_DECLARE_ERROR(Name)            \
  class Name : public Error {               \
   public:                                  \
    explicit Name(const std::string& what)  \
        : Error(#Name ": " + what) {}       \
  }

FPNN_DECLARE_ERROR(ZeroVector);
FPNN_DECLARE_ERROR(ParseError);
FPNN_DECLARE_ERROR(EmptyDataset);
FPNN_DECLARE_ERROR(DimensionError);
FPNN_DECLARE_ERROR(DimensionMismatch);
FPNN_DECLARE_ERROR(InvalidParameter);
FPNN_DECLARE_ERROR(EmptySample);
FPNN_DECLARE_ERROR(EmptySelection);
FPNN_DECLARE_ERROR(EmptyInput);
FPNN_DECLARE_ERROR(FormatError);
FPNN_DECLARE_ERROR(VersionError);
FPNN_DECLARE_ERROR(UnknownClass);
FPNN_DECLARE_ERROR(ClassTooSmall);
FPNN_DECLARE_ERROR(LengthMismatch);
FPNN_DECLARE_ERROR(MissingClass);
FPNN_DECLARE_ERROR(MissingTuningSet);

#undef FPNN_DECLARE_ERROR

}  // namespace fpnn
