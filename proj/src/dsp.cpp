// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/dsp.hpp"

#include <cmath>

namespace dtln {

Biquad butterworth_lowpass(double cutoff_hz, double sample_rate) {
  const double w0 = 2.0 * M_PI * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * M_SQRT1_2);  // Q = 1/sqrt(2)
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  Biquad bq;
  bq.b0 = (1.0 - cw) / 2.0 / a0;
  bq.b1 = (1.0 - cw) / a0;
  bq.b2 = bq.b0;
  bq.a1 = -2.0 * cw / a0;
  bq.a2 = (1.0 - alpha) / a0;
  return bq;
}

Biquad butterworth_highpass(double cutoff_hz, double sample_rate) {
  const double w0 = 2.0 * M_PI * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * M_SQRT1_2);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  Biquad bq;
  bq.b0 = (1.0 + cw) / 2.0 / a0;
  bq.b1 = -(1.0 + cw) / a0;
  bq.b2 = bq.b0;
  bq.a1 = -2.0 * cw / a0;
  bq.a2 = (1.0 - alpha) / a0;
  return bq;
}

Biquad low_shelf(double corner_hz, double gain_db, double sample_rate) {
  // H(s) = (s + G*w0) / (s + w0), bilinear-transformed: G below the corner,
  // unity above.
  const double g = std::pow(10.0, gain_db / 20.0);
  const double k = std::tan(M_PI * corner_hz / sample_rate);
  const double norm = 1.0 + k;
  Biquad bq;
  bq.b0 = (1.0 + g * k) / norm;
  bq.b1 = (g * k - 1.0) / norm;
  bq.a1 = (k - 1.0) / norm;
  return bq;
}

Biquad high_shelf(double corner_hz, double gain_db, double sample_rate) {
  // H(s) = (G*s + w0) / (s + w0): unity below the corner, G above.
  const double g = std::pow(10.0, gain_db / 20.0);
  const double k = std::tan(M_PI * corner_hz / sample_rate);
  const double norm = 1.0 + k;
  Biquad bq;
  bq.b0 = (g + k) / norm;
  bq.b1 = (k - g) / norm;
  bq.a1 = (k - 1.0) / norm;
  return bq;
}

AudioBuffer apply_biquad(const AudioBuffer& signal, const Biquad& bq) {
  AudioBuffer out = AudioBuffer::zeros(signal.size());
  out.sample_rate = signal.sample_rate;
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (Eigen::Index n = 0; n < signal.size(); ++n) {
    const double x0 = signal.samples[n];
    const double y0 =
        bq.b0 * x0 + bq.b1 * x1 + bq.b2 * x2 - bq.a1 * y1 - bq.a2 * y2;
    out.samples[n] = y0;
    x2 = x1;
    x1 = x0;
    y2 = y1;
    y1 = y0;
  }
  return out;
}

AudioBuffer fir_convolve(const AudioBuffer& signal, const Eigen::ArrayXd& ir) {
  if (ir.size() == 0) throw DataError("fir_convolve: empty impulse response");
  AudioBuffer out = AudioBuffer::zeros(signal.size());
  out.sample_rate = signal.sample_rate;
  const Eigen::Index n = signal.size();
  const Eigen::Index m = ir.size();
  // y[i] = sum_j ir[j] * x[i-j]; reversed-ir dot against a signal window.
  const Eigen::ArrayXd rev = ir.reverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j_hi = std::min<Eigen::Index>(i, m - 1);
    const Eigen::Index len = j_hi + 1;
    out.samples[i] = (rev.tail(len) * signal.samples.segment(i - j_hi, len))
                         .sum();
  }
  return out;
}

AudioBuffer bandpass(const AudioBuffer& signal, double f_low_hz,
                     double f_high_hz) {
  if (!(0.0 < f_low_hz && f_low_hz < f_high_hz && f_high_hz < 8000.0))
    throw InvalidCutoffs("bandpass cutoffs must satisfy 0 < low < high < 8000");
  const double fs = signal.sample_rate;
  return apply_biquad(apply_biquad(signal, butterworth_highpass(f_low_hz, fs)),
                      butterworth_lowpass(f_high_hz, fs));
}

AudioBuffer delay(const AudioBuffer& signal, double delay_ms) {
  const Eigen::Index shift = static_cast<Eigen::Index>(
      std::llround(delay_ms * signal.sample_rate / 1000.0));
  AudioBuffer out = AudioBuffer::zeros(signal.size());
  out.sample_rate = signal.sample_rate;
  if (shift < signal.size())
    out.samples.tail(signal.size() - shift) =
        signal.samples.head(signal.size() - shift);
  return out;
}

AudioBuffer apply_gain_db(const AudioBuffer& signal, double gain_db) {
  AudioBuffer out = signal;
  out.samples *= std::pow(10.0, gain_db / 20.0);
  return out;
}

}  // namespace dtln
