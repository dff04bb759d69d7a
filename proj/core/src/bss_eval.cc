// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/bss_eval.h"

#include <algorithm>
#include <numeric>

#include <Eigen/Dense>

#include "fft.h"
#include "sepkit/error.h"
#include "sepkit/metrics.h"
#include "sepkit/permutation.h"

namespace sepkit {
namespace {

// Gram regularizer relative to the mean diagonal.
constexpr double kGramRidge = 1e-10;

double Energy(const std::vector<double>& x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

// Shared state for projecting estimates onto delayed copies of the refs.
class Projector {
 public:
  Projector(const std::vector<std::vector<double>>& refs, std::size_t filter_len)
      : refs_(refs), taps_(filter_len), length_(refs[0].size()) {
    const std::size_t count = refs.size();
    const Eigen::Index dim = Eigen::Index(count * taps_);
    // Block (j, l), entry (a, b) is sum_m r_j(m) r_l(m + a - b).
    Eigen::MatrixXd gram(dim, dim);
    for (std::size_t j = 0; j < count; ++j) {
      for (std::size_t l = 0; l < count; ++l) {
        // pos[k] = sum_m r_j(m) r_l(m + k); neg[k] = sum_m r_l(m) r_j(m + k).
        auto pos = internal::CrossCorrelate(refs[l], refs[j], taps_);
        auto neg = internal::CrossCorrelate(refs[j], refs[l], taps_);
        for (std::size_t a = 0; a < taps_; ++a)
          for (std::size_t b = 0; b < taps_; ++b)
            gram(Eigen::Index(j * taps_ + a), Eigen::Index(l * taps_ + b)) =
                a >= b ? pos[a - b] : neg[b - a];
      }
    }
    gram = 0.5 * (gram + gram.transpose()).eval();
    all_ = Factor(gram);
    for (std::size_t j = 0; j < count; ++j)
      target_.push_back(Factor(gram.block(Eigen::Index(j * taps_), Eigen::Index(j * taps_),
                                          Eigen::Index(taps_), Eigen::Index(taps_))));
  }

  // c_j(a) = sum_n r_j(n - a) est(n).
  Eigen::VectorXd Correlation(std::span<const double> est, std::size_t j) const {
    auto c = internal::CrossCorrelate(est, refs_[j], taps_);
    return Eigen::Map<Eigen::VectorXd>(c.data(), Eigen::Index(taps_));
  }

  // sum_j conv(r_j, coeff_j) on the padded axis.
  std::vector<double> Synthesize(const Eigen::VectorXd& coeff, std::size_t first) const {
    std::vector<double> out(length_ + taps_ - 1, 0.0);
    const std::size_t blocks = std::size_t(coeff.size()) / taps_;
    for (std::size_t b = 0; b < blocks; ++b) {
      std::vector<double> h(coeff.data() + b * taps_, coeff.data() + (b + 1) * taps_);
      auto part = internal::FftConvolve(refs_[first + b], h);
      for (std::size_t n = 0; n < out.size(); ++n) out[n] += part[n];
    }
    return out;
  }

  std::vector<double> ProjectTarget(std::span<const double> est, std::size_t j) const {
    return Synthesize(target_[j].solve(Correlation(est, j)), j);
  }

  std::vector<double> ProjectAll(std::span<const double> est) const {
    Eigen::VectorXd c(Eigen::Index(refs_.size() * taps_));
    for (std::size_t j = 0; j < refs_.size(); ++j)
      c.segment(Eigen::Index(j * taps_), Eigen::Index(taps_)) = Correlation(est, j);
    return Synthesize(all_.solve(c), 0);
  }

 private:
  static Eigen::LDLT<Eigen::MatrixXd> Factor(Eigen::MatrixXd gram) {
    const double ridge = kGramRidge * std::max(gram.diagonal().mean(), 1e-300);
    gram.diagonal().array() += ridge;
    return Eigen::LDLT<Eigen::MatrixXd>(gram);
  }

  const std::vector<std::vector<double>>& refs_;
  std::size_t taps_;
  std::size_t length_;
  Eigen::LDLT<Eigen::MatrixXd> all_;
  std::vector<Eigen::LDLT<Eigen::MatrixXd>> target_;
};

BssDecomposition Decompose(const Projector& proj, std::span<const double> est,
                           std::size_t target) {
  BssDecomposition out;
  out.target = proj.ProjectTarget(est, target);
  auto all = proj.ProjectAll(est);
  out.interference.resize(all.size());
  out.artifact.resize(all.size());
  for (std::size_t n = 0; n < all.size(); ++n) {
    const double e = n < est.size() ? est[n] : 0.0;
    out.interference[n] = all[n] - out.target[n];
    out.artifact[n] = e - all[n];
  }
  return out;
}

struct Ratios {
  double sdr, sir, sar;
};

Ratios RatiosOf(const BssDecomposition& d) {
  std::vector<double> distortion(d.target.size()), kept(d.target.size());
  for (std::size_t n = 0; n < d.target.size(); ++n) {
    distortion[n] = d.interference[n] + d.artifact[n];
    kept[n] = d.target[n] + d.interference[n];
  }
  const double target = Energy(d.target);
  return {CappedDb(target, Energy(distortion)), CappedDb(target, Energy(d.interference)),
          CappedDb(Energy(kept), Energy(d.artifact))};
}

void CheckInputs(const std::vector<std::vector<double>>& refs, std::size_t filter_len) {
  if (refs.empty()) throw Error(Errc::kInvalidArgument, "no references");
  if (filter_len == 0) throw Error(Errc::kInvalidArgument, "filter length must be >= 1");
  for (const auto& r : refs)
    if (r.size() != refs[0].size()) throw Error(Errc::kShapeMismatch, "reference lengths differ");
}

}  // namespace

BssDecomposition BssDecompose(std::span<const double> est,
                              const std::vector<std::vector<double>>& refs, std::size_t target,
                              std::size_t filter_len) {
  CheckInputs(refs, filter_len);
  if (est.size() != refs[0].size()) throw Error(Errc::kShapeMismatch, "estimate length differs");
  if (target >= refs.size()) throw Error(Errc::kOutOfRange, "target index");
  Projector proj(refs, filter_len);
  return Decompose(proj, est, target);
}

BssEvalResult BssEval(const std::vector<Waveform>& ests, const std::vector<Waveform>& refs,
                      std::size_t filter_len) {
  const std::size_t count = refs.size();
  if (ests.size() != count) throw Error(Errc::kShapeMismatch, "estimate and reference counts differ");
  if (count > kMaxBssSources) throw Error(Errc::kOutOfRange, "BSS-eval supports at most 6 sources");
  std::vector<std::vector<double>> ref_data;
  for (const auto& r : refs) {
    if (r.NumChannels() != 1) throw Error(Errc::kShapeMismatch, "references must be mono");
    ref_data.push_back(r.data[0]);
  }
  CheckInputs(ref_data, filter_len);
  for (const auto& e : ests)
    if (e.NumChannels() != 1 || e.NumSamples() != ref_data[0].size())
      throw Error(Errc::kShapeMismatch, "estimates must be mono and match reference length");

  Projector proj(ref_data, filter_len);
  std::vector<std::vector<Ratios>> table(count);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j)
      table[i].push_back(RatiosOf(Decompose(proj, ests[i].data[0], j)));

  BssEvalResult out;
  out.permutation = MinimizingPermutation(
      count, [&](std::size_t i, std::size_t j) { return -table[i][j].sdr; });
  for (std::size_t i = 0; i < count; ++i) {
    const Ratios& r = table[i][out.permutation[i]];
    out.sdr.push_back(r.sdr);
    out.sir.push_back(r.sir);
    out.sar.push_back(r.sar);
  }
  return out;
}

}  // namespace sepkit
