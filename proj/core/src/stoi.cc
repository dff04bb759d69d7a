// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/stoi.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "fft.h"
#include "sepkit/error.h"
#include "sepkit/resample.h"

namespace sepkit {
namespace {

constexpr int kRate = 10000;
constexpr std::size_t kFrame = 256;
constexpr std::size_t kHop = kFrame / 2;
constexpr std::size_t kFft = 512;
constexpr std::size_t kBands = 15;
constexpr double kMinFreq = 150.0;
constexpr std::size_t kSegment = 30;
constexpr double kBeta = -15.0;
constexpr double kDynamicRange = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Hann of length kFrame + 2 with the zero end points dropped.
std::vector<double> FrameWindow() {
  std::vector<double> w(kFrame);
  for (std::size_t n = 0; n < kFrame; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(n + 1) / double(kFrame + 1));
  return w;
}

// Rows are bands, columns FFT bins; ones on [low, high) around each
// third-octave centre, edges snapped to the nearest bin.
Eigen::MatrixXd ThirdOctaveMatrix() {
  const std::size_t bins = kFft / 2 + 1;
  Eigen::MatrixXd obm = Eigen::MatrixXd::Zero(kBands, Eigen::Index(bins));
  auto nearest = [&](double freq) {
    std::size_t best = 0;
    double best_err = INFINITY;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = double(k) * kRate / double(kFft);
      const double err = (f - freq) * (f - freq);
      if (err < best_err) {
        best_err = err;
        best = k;
      }
    }
    return best;
  };
  for (std::size_t b = 0; b < kBands; ++b) {
    const double k = double(b);
    const std::size_t lo = nearest(kMinFreq * std::pow(2.0, (2.0 * k - 1.0) / 6.0));
    const std::size_t hi = nearest(kMinFreq * std::pow(2.0, (2.0 * k + 1.0) / 6.0));
    for (std::size_t i = lo; i < hi; ++i) obm(Eigen::Index(b), Eigen::Index(i)) = 1.0;
  }
  return obm;
}

// Drops frames of `x` more than 40 dB below its loudest frame, and the same
// frames of `y`, then overlap-adds the survivors.
void RemoveSilentFrames(std::vector<double>* x, std::vector<double>* y) {
  const auto w = FrameWindow();
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i + kFrame <= x->size(); i += kHop) starts.push_back(i);

  std::vector<double> energy(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) {
    double e = 0.0;
    for (std::size_t n = 0; n < kFrame; ++n) {
      const double v = w[n] * (*x)[starts[k] + n];
      e += v * v;
    }
    energy[k] = 20.0 * std::log10(std::sqrt(e) + kEps);
  }
  const double top = energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end());

  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < starts.size(); ++k)
    if (top - kDynamicRange - energy[k] < 0.0) kept.push_back(starts[k]);

  const std::size_t len = kept.empty() ? 0 : (kept.size() - 1) * kHop + kFrame;
  std::vector<double> xs(len, 0.0), ys(len, 0.0);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (std::size_t n = 0; n < kFrame; ++n) {
      xs[k * kHop + n] += w[n] * (*x)[kept[k] + n];
      ys[k * kHop + n] += w[n] * (*y)[kept[k] + n];
    }
  }
  *x = std::move(xs);
  *y = std::move(ys);
}

// Band envelopes, bands x frames.
Eigen::MatrixXd BandEnvelopes(const std::vector<double>& x, const Eigen::MatrixXd& obm) {
  const auto w = FrameWindow();
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i + kFrame < x.size(); i += kHop) starts.push_back(i);
  Eigen::MatrixXd power(obm.cols(), Eigen::Index(starts.size()));
  std::vector<double> frame(kFrame);
  for (std::size_t k = 0; k < starts.size(); ++k) {
    for (std::size_t n = 0; n < kFrame; ++n) frame[n] = w[n] * x[starts[k] + n];
    auto spec = internal::Rfft(frame, kFft);
    for (std::size_t f = 0; f < spec.size(); ++f) power(Eigen::Index(f), Eigen::Index(k)) = std::norm(spec[f]);
  }
  return (obm * power).cwiseSqrt();
}

}  // namespace

double Stoi(std::span<const double> est, std::span<const double> ref, int sample_rate) {
  if (est.size() != ref.size()) throw Error(Errc::kShapeMismatch, "STOI inputs differ in length");
  if (sample_rate < kRate) throw Error(Errc::kInvalidArgument, "STOI needs fs >= 10 kHz");

  std::vector<double> x, y;
  if (sample_rate == kRate) {
    x.assign(ref.begin(), ref.end());
    y.assign(est.begin(), est.end());
  } else {
    PolyphaseResampler resampler(kRate, std::size_t(sample_rate));
    x = resampler.Process(ref);
    y = resampler.Process(est);
  }
  RemoveSilentFrames(&x, &y);

  static const Eigen::MatrixXd obm = ThirdOctaveMatrix();
  const Eigen::MatrixXd x_env = BandEnvelopes(x, obm);
  const Eigen::MatrixXd y_env = BandEnvelopes(y, obm);
  const Eigen::Index frames = x_env.cols();
  if (frames < Eigen::Index(kSegment))
    throw Error(Errc::kTooShort, "STOI needs at least 30 frames after silence removal");

  const double clip = std::pow(10.0, -kBeta / 20.0);
  const Eigen::Index seg = Eigen::Index(kSegment);
  double total = 0.0;
  std::size_t count = 0;
  for (Eigen::Index end = seg; end <= frames; ++end) {
    for (Eigen::Index b = 0; b < Eigen::Index(kBands); ++b) {
      Eigen::VectorXd xs = x_env.row(b).segment(end - seg, seg).transpose();
      Eigen::VectorXd ys = y_env.row(b).segment(end - seg, seg).transpose();
      ys *= xs.norm() / (ys.norm() + kEps);
      ys = ys.cwiseMin(xs * (1.0 + clip));
      ys.array() -= ys.mean();
      xs.array() -= xs.mean();
      ys /= ys.norm() + kEps;
      xs /= xs.norm() + kEps;
      total += xs.dot(ys);
      ++count;
    }
  }
  return total / double(count);
}

double Stoi(const Waveform& est, const Waveform& ref) {
  if (est.NumChannels() != 1 || ref.NumChannels() != 1)
    throw Error(Errc::kShapeMismatch, "STOI inputs must be mono");
  if (est.sample_rate != ref.sample_rate)
    throw Error(Errc::kShapeMismatch, "STOI inputs differ in sample rate");
  return Stoi(est.data[0], ref.data[0], ref.sample_rate);
}

}  // namespace sepkit
