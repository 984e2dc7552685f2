// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/nlms.hpp"

#include <cmath>

#include "doctest.h"
#include "dtln/dsp.hpp"
#include "dtln/metrics.hpp"
#include "dtln/rng.hpp"
#include "helpers.hpp"

using namespace dtln;

namespace {

// Echo-only microphone signal: far-end white noise through a known FIR path.
struct EchoScene {
  AudioBuffer far;
  AudioBuffer mic;
  Eigen::ArrayXd path;
};

EchoScene make_scene(std::uint64_t seed, int n, int taps) {
  EchoScene sc;
  sc.far = testing::white_noise(seed, n, 0.5);
  Rng rng(seed + 1);
  sc.path = Eigen::ArrayXd::Zero(taps);
  for (int k = 0; k < taps; ++k)
    sc.path[k] = rng.normal(0.0, 1.0) * std::exp(-k / 20.0);
  sc.path /= std::sqrt(sc.path.square().sum());
  sc.mic = fir_convolve(sc.far, sc.path);
  return sc;
}

double misalignment_pct(const Eigen::VectorXd& coeffs,
                        const Eigen::ArrayXd& path) {
  Eigen::ArrayXd est = Eigen::ArrayXd::Zero(path.size());
  const Eigen::Index m = std::min<Eigen::Index>(coeffs.size(), path.size());
  est.head(m) = coeffs.head(m).array();
  return 100.0 * std::sqrt((est - path).square().sum() / path.square().sum());
}

double final_second_erle(const AudioBuffer& mic, const AudioBuffer& out) {
  const Eigen::Index sec = kSampleRate;
  AudioBuffer mic_tail(mic.samples.tail(sec));
  AudioBuffer out_tail(out.samples.tail(sec));
  return erle(mic_tail, out_tail);
}

}  // namespace

TEST_SUITE("nlms") {

TEST_CASE("config validation") {
  CHECK(NlmsConfig{}.valid());
  CHECK(!NlmsConfig{0, 0.5, 1e-6}.valid());
  CHECK(!NlmsConfig{64, 0.0, 1e-6}.valid());
  CHECK(!NlmsConfig{64, 2.0, 1e-6}.valid());
  CHECK(!NlmsConfig{64, 0.5, 0.0}.valid());
}

TEST_CASE("identifies a short echo path to under 1 percent misalignment") {
  const EchoScene sc = make_scene(31, 4 * kSampleRate, 4);
  NlmsConfig cfg;
  cfg.taps = 16;
  NlmsState st = NlmsState::zeros(cfg.taps);
  for (int i = 0; i < 5000; ++i)
    nlms_step(sc.mic.samples[i], sc.far.samples[i], cfg, st);
  CHECK(misalignment_pct(st.coeffs, sc.path) < 1.0);
}

TEST_CASE("converged filter cancels the echo") {
  const EchoScene sc = make_scene(32, 3 * kSampleRate, 64);
  NlmsConfig cfg;
  cfg.taps = 128;
  const AudioBuffer out = nlms_process(sc.mic, sc.far, cfg);
  CHECK(final_second_erle(sc.mic, out) >= 30.0);
}

TEST_CASE("zero far-end leaves the near-end untouched") {
  const AudioBuffer near = testing::speechy(33, 8000, -20.0);
  const AudioBuffer far = AudioBuffer::zeros(8000);
  const AudioBuffer out = nlms_process(near, far);
  CHECK((out.samples - near.samples).abs().maxCoeff() == 0.0);
}

TEST_CASE("coefficients stay frozen when the error is zero") {
  // Echo exactly matches the current estimate of zero taps: mic == 0, so
  // every update term vanishes and the filter must not drift.
  NlmsConfig cfg;
  cfg.taps = 8;
  NlmsState st = NlmsState::zeros(cfg.taps);
  Rng rng(34);
  for (int i = 0; i < 1000; ++i) {
    const double far = rng.uniform(-1.0, 1.0);
    const double out = nlms_step(0.0, far, cfg, st);
    CHECK(out == 0.0);
  }
  CHECK(st.coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("misalignment decreases monotonically while converging") {
  const EchoScene sc = make_scene(35, 2 * kSampleRate, 8);
  NlmsConfig cfg;
  cfg.taps = 16;
  NlmsState st = NlmsState::zeros(cfg.taps);
  std::vector<double> track;
  for (int i = 0; i < 600; ++i) {
    nlms_step(sc.mic.samples[i], sc.far.samples[i], cfg, st);
    if ((i + 1) % 50 == 0) track.push_back(misalignment_pct(st.coeffs, sc.path));
  }
  // Once under 0.001% the filter sits at the numeric floor and only tracking
  // noise remains, so the monotone phase ends there.
  for (std::size_t k = 1; k < track.size(); ++k) {
    if (track[k - 1] < 1e-3) break;
    CHECK(track[k] <= track[k - 1] * 1.05);  // 5% slack for gradient noise
  }
  CHECK(track.front() > 1.0);    // far from converged after 50 samples
  CHECK(track.back() < 0.01);    // fully identified after 600
}

TEST_CASE("long runs stay numerically stable") {
  const int n = 10 * kSampleRate;
  const EchoScene sc = make_scene(36, n, 64);
  NlmsConfig cfg;
  cfg.taps = 256;
  NlmsState st = NlmsState::zeros(cfg.taps);
  for (int i = 0; i < n; ++i) {
    const double out = nlms_step(sc.mic.samples[i], sc.far.samples[i], cfg, st);
    REQUIRE(std::isfinite(out));
  }
  CHECK(st.coeffs.allFinite());
  CHECK(st.coeffs.cwiseAbs().maxCoeff() < 10.0);
}

TEST_CASE("double talk degrades the echo estimate") {
  // Near-end speech at 0 dB SER acts as loud gradient noise: the update no
  // longer points at the true path and cancellation worsens by over 10 dB.
  const int n = 4 * kSampleRate;
  const EchoScene sc = make_scene(37, n, 64);
  NlmsConfig cfg;
  cfg.taps = 128;

  const AudioBuffer clean_out = nlms_process(sc.mic, sc.far, cfg);
  const double clean_erle = final_second_erle(sc.mic, clean_out);

  AudioBuffer doubled = sc.mic;
  AudioBuffer near = testing::speechy(38, n, -20.0);
  near.samples *= rms_active(sc.mic) / rms_active(near);  // SER 0 dB
  doubled.samples += near.samples;
  const AudioBuffer talk_out = nlms_process(doubled, sc.far, cfg);
  const double talk_erle = final_second_erle(sc.mic, talk_out);

  CHECK(clean_erle - talk_erle >= 10.0);
}

TEST_CASE("whole-file wrapper pads the shorter input") {
  const AudioBuffer near = testing::white_noise(39, 5000, 0.4);
  const AudioBuffer far = testing::white_noise(40, 3000, 0.4);
  const AudioBuffer out = nlms_process(near, far);
  CHECK(out.size() == 5000);
  const AudioBuffer ref = nlms_process(near, fit_length(far, 5000));
  CHECK((out.samples - ref.samples).abs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
