// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sepkit/error.h"
#include "sepkit/simulate.h"

namespace sepkit {
namespace {

constexpr double kSabine = 0.1611;
constexpr long kHalfTaps = long(kRirSincTaps / 2);  // 40
constexpr double kWindowHalfWidth = double(kHalfTaps) + 1.0;

double Distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void CheckInside(const Point3& p, const Point3& room, const char* what) {
  for (int i = 0; i < 3; ++i)
    if (!(p[i] > 0.0 && p[i] < room[i]))
      throw Error(Errc::kInvalidConfig, std::string(what) + " is not strictly inside the room");
}

// Adds amp * hann(n - delay) * sinc(n - delay) for the 81 taps nearest delay.
void AddPulse(std::vector<double>* h, double delay, double amp) {
  const long centre = long(std::lround(delay));
  const long lo = std::max(0L, centre - kHalfTaps);
  const long hi = std::min(long(h->size()) - 1, centre + kHalfTaps);
  if (lo > hi) return;
  const double frac = double(centre) - delay;  // in [-0.5, 0.5]
  // sin(pi (n - delay)) alternates sign with n.
  const double s0 = std::sin(std::numbers::pi * frac);
  for (long n = lo; n <= hi; ++n) {
    const long k = n - centre;
    const double x = double(k) + frac;
    double sinc;
    if (x == 0.0) {
      sinc = 1.0;
    } else if (frac == 0.0) {
      sinc = 0.0;
    } else {
      sinc = ((k & 1) ? -s0 : s0) / (std::numbers::pi * x);
    }
    const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * x / kWindowHalfWidth));
    (*h)[std::size_t(n)] += amp * window * sinc;
  }
}

// Allen & Berkley's DC-removal high-pass (100 Hz corner). Every image adds a
// positive pulse, so without it the low end builds up and stretches the tail.
void HighPass(std::vector<double>* h, int fs) {
  const double w = 2.0 * std::numbers::pi * 100.0 / double(fs);
  const double r1 = std::exp(-w), b1 = 2.0 * r1 * std::cos(w), b2 = -r1 * r1, a1 = -(1.0 + r1);
  double y0 = 0.0, y1 = 0.0, y2 = 0.0;
  for (double& v : *h) {
    y2 = y1;
    y1 = y0;
    y0 = b1 * y1 + b2 * y2 + v;
    v = y0 + a1 * y1 + r1 * y2;
  }
}

}  // namespace

double SabineAbsorption(const RirSpec& spec) {
  if (spec.t60 <= 0.0) return 1.0;
  const auto& r = spec.room;
  const double volume = r[0] * r[1] * r[2];
  const double surface = 2.0 * (r[0] * r[1] + r[0] * r[2] + r[1] * r[2]);
  return kSabine * volume / (surface * spec.t60);
}

void CheckRirSpec(const RirSpec& spec) {
  for (double side : spec.room)
    if (!(side > 0.0)) throw Error(Errc::kInvalidConfig, "room dimensions must be positive");
  if (!(spec.t60 >= 0.0)) throw Error(Errc::kInvalidConfig, "t60 must be >= 0");
  if (spec.fs <= 0 || !(spec.sound_speed > 0.0))
    throw Error(Errc::kInvalidConfig, "sample rate and sound speed must be positive");
  if (spec.mics.empty()) throw Error(Errc::kInvalidConfig, "no microphones");
  CheckInside(spec.source, spec.room, "source");
  for (const auto& m : spec.mics) CheckInside(m, spec.room, "microphone");
  if (spec.t60 > 0.0 && SabineAbsorption(spec) > 1.0)
    throw Error(Errc::kInvalidConfig, "room too small for t60 = " + std::to_string(spec.t60) +
                                          " s (absorption exceeds 1)");
}

std::size_t RirLength(const RirSpec& spec) {
  double direct = 0.0;
  for (const auto& m : spec.mics) direct = std::max(direct, Distance(spec.source, m));
  const double direct_samples = direct / spec.sound_speed * spec.fs;
  const auto decay = std::size_t(std::ceil(spec.t60 * spec.fs));
  return std::max(decay, std::size_t(std::ceil(direct_samples)) + 1) + kRirSincTaps;
}

std::vector<Waveform> GenerateRir(const RirSpec& spec) {
  CheckRirSpec(spec);
  const std::size_t length = RirLength(spec);
  const std::size_t max_order = spec.t60 > 0.0 ? spec.max_order : 0;
  const double beta = spec.t60 > 0.0 ? std::sqrt(1.0 - SabineAbsorption(spec)) : 0.0;
  const double samples_per_meter = spec.fs / spec.sound_speed;
  const double max_dist = double(length + kHalfTaps) / samples_per_meter;
  const auto& room = spec.room;
  const auto& src = spec.source;

  std::array<long, 3> reach;
  for (int i = 0; i < 3; ++i)
    reach[i] = std::min(long(std::ceil(max_dist / (2.0 * room[i]))) + 1, long(max_order) + 1);

  std::vector<Waveform> out;
  for (const auto& mic : spec.mics) {
    std::vector<double> h(length, 0.0);
    for (long mx = -reach[0]; mx <= reach[0]; ++mx) {
      for (int qx = 0; qx < 2; ++qx) {
        const long ox = std::labs(2 * mx - qx);
        if (std::size_t(ox) > max_order) continue;
        const double dx = (1 - 2 * qx) * src[0] + 2.0 * double(mx) * room[0] - mic[0];
        for (long my = -reach[1]; my <= reach[1]; ++my) {
          for (int qy = 0; qy < 2; ++qy) {
            const long oy = std::labs(2 * my - qy);
            if (std::size_t(ox + oy) > max_order) continue;
            const double dy = (1 - 2 * qy) * src[1] + 2.0 * double(my) * room[1] - mic[1];
            for (long mz = -reach[2]; mz <= reach[2]; ++mz) {
              for (int qz = 0; qz < 2; ++qz) {
                const long oz = std::labs(2 * mz - qz);
                const long order = ox + oy + oz;
                if (std::size_t(order) > max_order) continue;
                const double dz = (1 - 2 * qz) * src[2] + 2.0 * double(mz) * room[2] - mic[2];
                const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
                if (dist > max_dist) continue;
                const double amp = (order == 0 ? 1.0 : std::pow(beta, double(order))) /
                                   (4.0 * std::numbers::pi * dist);
                AddPulse(&h, dist * samples_per_meter, amp);
              }
            }
          }
        }
      }
    }
    if (max_order > 0) HighPass(&h, spec.fs);
    out.push_back(Waveform::Mono(spec.fs, std::move(h)));
  }
  return out;
}

}  // namespace sepkit
