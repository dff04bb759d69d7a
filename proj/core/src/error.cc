// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/error.h"

namespace sepkit {

const char* ErrcName(Errc code) {
  switch (code) {
    case Errc::kFileNotFound: return "file-not-found";
    case Errc::kUnsupportedCodec: return "unsupported-codec";
    case Errc::kTruncated: return "truncated";
    case Errc::kUnwritable: return "unwritable";
    case Errc::kMalformedLine: return "malformed-line";
    case Errc::kDuplicateId: return "duplicate-id";
    case Errc::kInvalidConfig: return "invalid-config";
    case Errc::kShapeMismatch: return "shape-mismatch";
    case Errc::kInvalidArgument: return "invalid-argument";
    case Errc::kTooShort: return "too-short";
    case Errc::kNumerical: return "numerical";
    case Errc::kOutOfRange: return "out-of-range";
    case Errc::kMissingData: return "missing-data";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(ErrcName(code)) + ": " + what), code_(code) {}

}  // namespace sepkit
