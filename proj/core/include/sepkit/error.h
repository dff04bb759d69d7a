// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_ERROR_H_
#define SEPKIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace sepkit {

enum class Errc {
  kFileNotFound,
  kUnsupportedCodec,
  kTruncated,
  kUnwritable,
  kMalformedLine,
  kDuplicateId,
  kInvalidConfig,
  kShapeMismatch,
  kInvalidArgument,
  kTooShort,
  kNumerical,
  kOutOfRange,
  kMissingData,
};

const char* ErrcName(Errc code);

// All library failures are reported through this exception. The code lets
// callers branch on the failure class without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace sepkit

#endif  // SEPKIT_ERROR_H_
