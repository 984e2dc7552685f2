// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_METRICS_HPP
#define DTLN_METRICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "dtln/audio.hpp"

namespace dtln {

// Scale-invariant signal-to-distortion ratio in dB. The estimate is projected
// onto the target before the ratio is taken, so any nonzero rescaling of the
// estimate leaves the result unchanged. Capped to [-100, +100] so that exact
// matches stay finite. Throws ZeroTarget on an all-zero target.
double si_sdr(const AudioBuffer& target, const AudioBuffer& estimate);

// Time-domain SNR loss: -10*log10(||t||^2 / ||t - e||^2), floored at -100
// when the error energy vanishes. Deliberately scale-dependent; an estimate
// of zero scores exactly 0. Throws ZeroTarget on an all-zero target.
double snr_loss(const AudioBuffer& target, const AudioBuffer& estimate);

// Echo return loss enhancement in dB over the whole file, or over the samples
// selected by the mask. Capped to [-100, +100]. Throws EmptyMask when the
// mask selects nothing.
double erle(const AudioBuffer& mic, const AudioBuffer& output);
double erle(const AudioBuffer& mic, const AudioBuffer& output,
            const Eigen::Array<bool, Eigen::Dynamic, 1>& active_mask);

// Consumes synchronized 128-sample hops and returns the processed hop.
using HopProcessor =
    std::function<Eigen::VectorXf(const Eigen::VectorXf&, const Eigen::VectorXf&)>;

struct RtfReport {
  double mean_ms = 0.0;
  double p99_ms = 0.0;
  double rtf_mean = 0.0;  // mean per-hop time / 8 ms budget
  double rtf_p99 = 0.0;
  std::size_t frames = 0;
};

// Wall-clock per-hop timing of a processor over the given pair, single
// stream, single thread. Real-time operation requires rtf_mean < 1.
RtfReport measure_rtf(const HopProcessor& processor, const AudioBuffer& near,
                      const AudioBuffer& far);

// Mean/p99 over raw per-hop timings against the 8 ms hop budget.
RtfReport summarize_times_ms(const std::vector<double>& times_ms);

struct MetricReport {
  double si_sdr_db = 0.0;
  double snr_loss = 0.0;
  std::optional<double> erle_db;
  std::optional<double> rtf_mean;
  std::optional<double> rtf_p99;
};

// Line-oriented `key=value` rendering; absent optionals are omitted.
std::string to_text(const MetricReport& r);

// JSON rendering with the same keys; absent optionals are omitted.
std::string to_json(const MetricReport& r);

}  // namespace dtln

#endif  // DTLN_METRICS_HPP
