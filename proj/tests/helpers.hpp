// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_TESTS_HELPERS_HPP_
#define DTLN_TESTS_HELPERS_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dtln/audio.hpp"
#include "dtln/dsp.hpp"
#include "dtln/rng.hpp"

namespace dtln::testing {

// Burst-modulated tone-plus-noise signal with speech-like on/off structure:
// 125-500 ms voiced bursts under a half-sine envelope separated by 50-200 ms
// pauses, normalized so the active-region RMS sits at level_db dBFS.
inline AudioBuffer speechy(std::uint64_t seed, int samples, double level_db) {
  Rng rng(seed);
  AudioBuffer out = AudioBuffer::zeros(samples);
  int k = 0;
  while (k < samples) {
    const int burst = 2000 + static_cast<int>(rng.uniform() * 6000.0);
    const double f = rng.uniform(120.0, 300.0);
    for (int j = 0; j < burst && k < samples; ++j, ++k) {
      const double env = std::sin(M_PI * j / burst);
      const double t = static_cast<double>(k) / kSampleRate;
      out.samples[k] =
          env * (0.6 * std::sin(2.0 * M_PI * f * t) + 0.4 * rng.uniform(-1.0, 1.0));
    }
    k += 800 + static_cast<int>(rng.uniform() * 2400.0);
  }
  const double r = rms_active(out);
  if (r > 0.0) out.samples *= std::pow(10.0, level_db / 20.0) / r;
  return out;
}

inline AudioBuffer white_noise(std::uint64_t seed, int samples, double amp = 0.5) {
  Rng rng(seed);
  AudioBuffer out = AudioBuffer::zeros(samples);
  for (int k = 0; k < samples; ++k) out.samples[k] = rng.uniform(-amp, amp);
  return out;
}

// Sparse decaying impulse response with a unit direct path at tap 0.
inline Eigen::ArrayXd decaying_ir(std::uint64_t seed, int taps) {
  Rng rng(seed);
  Eigen::ArrayXd ir = Eigen::ArrayXd::Zero(taps);
  ir[0] = 1.0;
  for (int k = 1; k < taps; ++k)
    ir[k] = rng.normal(0.0, 0.3) * std::exp(-k / 80.0);
  return ir;
}

// Mean energy per octave band (dB) over 125 Hz..8 kHz, measured frame-wise.
// Used to bound how far a spectral shaping stage can tilt a signal.
inline std::vector<double> octave_band_energies_db(const AudioBuffer& buf) {
  const FrameConfig cfg;
  const auto frames = segment<double>(buf.samples, cfg);
  const double bin_hz = static_cast<double>(kSampleRate) / cfg.fft_size;
  std::vector<double> edges = {125, 250, 500, 1000, 2000, 4000, 8000};
  std::vector<double> acc(edges.size() - 1, 0.0);
  for (const auto& fr : frames) {
    const auto spec = rdft<double>(fr);
    for (int b = 0; b < spec.magnitude.size(); ++b) {
      const double hz = b * bin_hz;
      for (std::size_t e = 0; e + 1 < edges.size(); ++e)
        if (hz >= edges[e] && hz < edges[e + 1])
          acc[e] += spec.magnitude[b] * spec.magnitude[b];
    }
  }
  std::vector<double> out(acc.size());
  for (std::size_t e = 0; e < acc.size(); ++e)
    out[e] = 10.0 * std::log10(acc[e] / frames.size() + 1e-30);
  return out;
}

// Fresh per-test scratch directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("dtln_test_" + tag + "_" + std::to_string(counter_++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string str(const std::string& leaf = "") const {
    return leaf.empty() ? path_.string() : (path_ / leaf).string();
  }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace dtln::testing

#endif  // DTLN_TESTS_HELPERS_HPP_
