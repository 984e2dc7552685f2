// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_ERRORS_HPP
#define DTLN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dtln {

// Base for all recoverable errors raised by the library. Anything deriving
// from DataError maps to exit code 2 in the CLI; everything else is treated
// as a runtime failure (exit code 3).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : Error {
  using Error::Error;
};

// audio-io
struct UnsupportedFormat : DataError {
  using DataError::DataError;
};
struct CorruptFile : DataError {
  using DataError::DataError;
};
struct IoFailure : DataError {
  using DataError::DataError;
};

// dsp-core
struct InvalidCutoffs : DataError {
  using DataError::DataError;
};

// weights-format
struct BadMagic : DataError {
  using DataError::DataError;
};
struct VersionMismatch : DataError {
  using DataError::DataError;
};
struct MissingTensor : DataError {
  using DataError::DataError;
};
struct UnknownTensor : DataError {
  using DataError::DataError;
};
struct DuplicateTensor : DataError {
  using DataError::DataError;
};
struct ShapeMismatch : DataError {
  using DataError::DataError;
};
struct TrailingBytes : DataError {
  using DataError::DataError;
};
struct InvalidUnits : DataError {
  using DataError::DataError;
};

// scenario-synth
struct EmptyAssetPool : DataError {
  using DataError::DataError;
};
struct ZeroDirectPath : DataError {
  using DataError::DataError;
};
struct AllZeroIr : DataError {
  using DataError::DataError;
};

// metrics
struct ZeroTarget : DataError {
  using DataError::DataError;
};
struct EmptyMask : DataError {
  using DataError::DataError;
};

}  // namespace dtln

#endif  // DTLN_ERRORS_HPP
