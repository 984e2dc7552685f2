// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_DSP_HPP
#define DTLN_DSP_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <complex>
#include <vector>

#include "dtln/audio.hpp"
#include "dtln/errors.hpp"

namespace dtln {

// Analysis/synthesis geometry: 32 ms frames, 8 ms shift at 16 kHz, with the
// DFT size equal to the frame length. Rectangular window; overlap-add scales
// by shift/frame_len, which gives exact reconstruction where four frames
// overlap.
struct FrameConfig {
  int frame_len = 512;
  int shift = 128;
  int fft_size = 512;

  int spec_bins() const { return fft_size / 2 + 1; }
  bool valid() const {
    return frame_len > 0 && shift > 0 && frame_len == fft_size &&
           frame_len % shift == 0 && frame_len / shift == 4;
  }
};

template <typename S>
using Frame = Eigen::VectorX<S>;

// Magnitude/phase view of the non-negative half spectrum (fft_size/2 + 1 bins).
template <typename S>
struct Spectrum {
  Eigen::ArrayX<S> magnitude;
  Eigen::ArrayX<S> phase;
};

// Per-frame normalization parameters: y = gain*(x - mean)/sqrt(var + eps) + bias,
// statistics taken over the feature dimension of the single frame only.
template <typename S>
struct IlnParams {
  Eigen::ArrayX<S> gain;
  Eigen::ArrayX<S> bias;
  S epsilon = static_cast<S>(1e-5);

  static IlnParams identity(Eigen::Index dim) {
    return {Eigen::ArrayX<S>::Ones(dim), Eigen::ArrayX<S>::Zero(dim),
            static_cast<S>(1e-5)};
  }
};

namespace detail {
template <typename S>
Eigen::FFT<S>& fft_plan() {
  thread_local Eigen::FFT<S> fft = [] {
    Eigen::FFT<S> f;
    f.SetFlag(Eigen::FFT<S>::HalfSpectrum);
    return f;
  }();
  return fft;
}
}  // namespace detail

// Slices x into frames of cfg.frame_len every cfg.shift samples, zero-padding
// the tail so every input sample is covered. Frame k starts at k*shift.
template <typename S>
std::vector<Frame<S>> segment(const Eigen::ArrayX<S>& x,
                              const FrameConfig& cfg = {}) {
  std::vector<Frame<S>> frames;
  const Eigen::Index len = x.size();
  if (len == 0) return frames;
  const Eigen::Index count =
      len <= cfg.frame_len
          ? 1
          : (len - cfg.frame_len + cfg.shift - 1) / cfg.shift + 1;
  frames.reserve(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    Frame<S> f = Frame<S>::Zero(cfg.frame_len);
    const Eigen::Index start = k * cfg.shift;
    const Eigen::Index take = std::min<Eigen::Index>(cfg.frame_len, len - start);
    f.head(take) = x.segment(start, take).matrix();
    frames.push_back(std::move(f));
  }
  return frames;
}

inline std::vector<Frame<double>> segment(const AudioBuffer& buf,
                                          const FrameConfig& cfg = {}) {
  return segment<double>(buf.samples, cfg);
}

// Unnormalized real DFT of one frame; bins 0..N/2.
template <typename S>
Spectrum<S> rdft(const Frame<S>& frame) {
  std::vector<S> time(frame.data(), frame.data() + frame.size());
  std::vector<std::complex<S>> freq;
  detail::fft_plan<S>().fwd(freq, time);
  Spectrum<S> spec;
  const Eigen::Index bins = static_cast<Eigen::Index>(freq.size());
  spec.magnitude.resize(bins);
  spec.phase.resize(bins);
  for (Eigen::Index k = 0; k < bins; ++k) {
    spec.magnitude[k] = std::abs(freq[k]);
    spec.phase[k] = std::arg(freq[k]);
  }
  return spec;
}

// Inverse real DFT from magnitude and phase (1/N scaling), so that
// irdft_with_phase(rdft(f)) == f up to roundoff.
template <typename S>
Frame<S> irdft_with_phase(const Eigen::ArrayX<S>& magnitude,
                          const Eigen::ArrayX<S>& phase) {
  const Eigen::Index bins = magnitude.size();
  std::vector<std::complex<S>> freq(bins);
  for (Eigen::Index k = 0; k < bins; ++k)
    freq[k] = std::polar(magnitude[k], phase[k]);
  std::vector<S> time;
  detail::fft_plan<S>().inv(time, freq,
                            static_cast<int>(2 * (bins - 1)));
  return Eigen::Map<const Frame<S>>(time.data(),
                                    static_cast<Eigen::Index>(time.size()));
}

// Elementwise log(mag^2 + floor_eps); the floor keeps digital silence finite.
template <typename S>
Eigen::ArrayX<S> log_power(const Eigen::ArrayX<S>& magnitude,
                           S floor_eps = static_cast<S>(1e-12)) {
  return (magnitude.square() + floor_eps).log();
}

// Instant layer normalization: statistics over this frame only, no state.
template <typename S>
Eigen::ArrayX<S> instant_layer_norm(const Eigen::ArrayX<S>& x,
                                    const IlnParams<S>& p) {
  const S mean = x.mean();
  const S var = (x - mean).square().mean();
  return p.gain * (x - mean) / Eigen::numext::sqrt(var + p.epsilon) + p.bias;
}

// Adds frame k at offset k*shift, then scales by shift/frame_len.
// Reconstruction is exact wherever four frames overlap.
template <typename S>
Eigen::ArrayX<S> overlap_add(const std::vector<Frame<S>>& frames,
                             const FrameConfig& cfg = {}) {
  if (frames.empty()) return Eigen::ArrayX<S>();
  const Eigen::Index n = static_cast<Eigen::Index>(frames.size());
  Eigen::ArrayX<S> out =
      Eigen::ArrayX<S>::Zero((n - 1) * cfg.shift + cfg.frame_len);
  for (Eigen::Index k = 0; k < n; ++k)
    out.segment(k * cfg.shift, cfg.frame_len) += frames[k].array();
  out *= static_cast<S>(cfg.shift) / static_cast<S>(cfg.frame_len);
  return out;
}

// --- biquad filtering -------------------------------------------------------

// Direct form I second-order section; first-order designs leave b2/a2 at zero.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

Biquad butterworth_lowpass(double cutoff_hz, double sample_rate);
Biquad butterworth_highpass(double cutoff_hz, double sample_rate);
// First-order shelves; gain_db applies below (low) / above (high) the corner.
Biquad low_shelf(double corner_hz, double gain_db, double sample_rate);
Biquad high_shelf(double corner_hz, double gain_db, double sample_rate);

AudioBuffer apply_biquad(const AudioBuffer& signal, const Biquad& bq);

// --- AudioBuffer-level operations used by the echo-path synthesis -----------

// Causal linear convolution truncated to the signal length.
AudioBuffer fir_convolve(const AudioBuffer& signal, const Eigen::ArrayXd& ir);

// Second-order Butterworth high-pass at f_low cascaded with low-pass at
// f_high. Requires 0 < f_low < f_high < 8000.
AudioBuffer bandpass(const AudioBuffer& signal, double f_low_hz,
                     double f_high_hz);

// Prepends round(delay_ms * 16) zeros and truncates to the original length.
AudioBuffer delay(const AudioBuffer& signal, double delay_ms);

// Scales by 10^(gain_db/20).
AudioBuffer apply_gain_db(const AudioBuffer& signal, double gain_db);

}  // namespace dtln

#endif  // DTLN_DSP_HPP
