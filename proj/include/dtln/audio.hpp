// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_AUDIO_HPP
#define DTLN_AUDIO_HPP

#include <Eigen/Dense>
#include <cmath>

namespace dtln {

inline constexpr int kSampleRate = 16000;

// Mono sample sequence, the signal currency of the whole pipeline.
// Samples live in [-1, 1]; every pipeline entry point requires 16 kHz.
struct AudioBuffer {
  Eigen::ArrayXd samples;
  int sample_rate = kSampleRate;

  AudioBuffer() = default;
  explicit AudioBuffer(Eigen::ArrayXd s, int rate = kSampleRate)
      : samples(std::move(s)), sample_rate(rate) {}

  Eigen::Index size() const { return samples.size(); }

  static AudioBuffer zeros(Eigen::Index n) {
    return AudioBuffer(Eigen::ArrayXd::Zero(n));
  }
};

inline double peak(const AudioBuffer& buf) {
  return buf.size() == 0 ? 0.0 : buf.samples.abs().maxCoeff();
}

inline double rms(const AudioBuffer& buf) {
  return buf.size() == 0 ? 0.0 : std::sqrt(buf.samples.square().mean());
}

inline double rms_db(const AudioBuffer& buf) {
  const double r = rms(buf);
  return r > 0.0 ? 20.0 * std::log10(r) : -300.0;
}

// RMS over samples whose magnitude exceeds threshold_dbfs (level measurements
// on speech-like material ignore silent stretches). Returns 0 if nothing is
// above the threshold.
inline double rms_active(const AudioBuffer& buf, double threshold_dbfs = -50.0) {
  const double thr = std::pow(10.0, threshold_dbfs / 20.0);
  double acc = 0.0;
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < buf.size(); ++i) {
    const double v = buf.samples[i];
    if (std::abs(v) > thr) {
      acc += v * v;
      ++n;
    }
  }
  return n == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n));
}

// Pads with trailing zeros or truncates so the buffer has exactly n samples.
inline AudioBuffer fit_length(const AudioBuffer& buf, Eigen::Index n) {
  AudioBuffer out = AudioBuffer::zeros(n);
  out.sample_rate = buf.sample_rate;
  const Eigen::Index m = std::min(n, buf.size());
  out.samples.head(m) = buf.samples.head(m);
  return out;
}

}  // namespace dtln

#endif  // DTLN_AUDIO_HPP
