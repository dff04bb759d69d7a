// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_STOI_H_
#define SEPKIT_STOI_H_

#include <span>

#include "sepkit/audio.h"

namespace sepkit {

// Short-time objective intelligibility of `est` against clean `ref`.
// Both are resampled to 10 kHz, silent reference frames (40 dB below the
// loudest) are removed, and band envelopes of 15 third-octave bands are
// correlated over 30-frame segments after clipping at -15 dB SDR.
// Throws kTooShort when fewer than 30 frames survive silence removal.
double Stoi(std::span<const double> est, std::span<const double> ref, int sample_rate);
double Stoi(const Waveform& est, const Waveform& ref);

}  // namespace sepkit

#endif  // SEPKIT_STOI_H_
