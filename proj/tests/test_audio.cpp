// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/audio.hpp"

#include <cmath>

#include "doctest.h"
#include "dtln/rng.hpp"

using namespace dtln;

TEST_SUITE("audio") {

TEST_CASE("zeros buffer reports silent levels") {
  const AudioBuffer b = AudioBuffer::zeros(100);
  CHECK(b.size() == 100);
  CHECK(peak(b) == 0.0);
  CHECK(rms(b) == 0.0);
  CHECK(rms_db(b) == -300.0);
  CHECK(rms_active(b) == 0.0);
}

TEST_CASE("peak and rms on a known constant signal") {
  AudioBuffer b = AudioBuffer::zeros(8);
  b.samples.setConstant(-0.5);
  CHECK(peak(b) == doctest::Approx(0.5));
  CHECK(rms(b) == doctest::Approx(0.5));
  CHECK(rms_db(b) == doctest::Approx(20.0 * std::log10(0.5)));
}

TEST_CASE("rms of a full-scale sine is 1/sqrt(2)") {
  AudioBuffer b = AudioBuffer::zeros(16000);
  for (int i = 0; i < 16000; ++i)
    b.samples[i] = std::sin(2.0 * M_PI * 100.0 * i / 16000.0);
  CHECK(rms(b) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("rms_active ignores silent stretches") {
  // Half the buffer at amplitude 0.5, the other half digital silence: plain
  // RMS dilutes, active RMS does not.
  AudioBuffer b = AudioBuffer::zeros(1000);
  b.samples.head(500).setConstant(0.5);
  CHECK(rms(b) == doctest::Approx(0.5 / std::sqrt(2.0)));
  CHECK(rms_active(b) == doctest::Approx(0.5));
}

TEST_CASE("rms_active threshold is a hard gate") {
  const double thr = std::pow(10.0, -50.0 / 20.0);
  AudioBuffer b = AudioBuffer::zeros(10);
  b.samples.setConstant(thr * 0.999);
  CHECK(rms_active(b) == 0.0);
  b.samples.setConstant(thr * 1.001);
  CHECK(rms_active(b) == doctest::Approx(thr * 1.001));
}

TEST_CASE("rms_active is never below the gate level when nonzero") {
  // Every counted sample exceeds the threshold, so the active RMS of any
  // signal is either 0 or at least the threshold. Levels below -50 dBFS are
  // therefore unrepresentable under this measure.
  const double thr = std::pow(10.0, -50.0 / 20.0);
  Rng rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    AudioBuffer b = AudioBuffer::zeros(512);
    for (Eigen::Index i = 0; i < b.size(); ++i)
      b.samples[i] = rng.normal(0.0, std::pow(10.0, rng.uniform(-4.0, 0.0)));
    const double r = rms_active(b);
    CHECK((r == 0.0 || r >= thr));
  }
}

TEST_CASE("fit_length pads with zeros and truncates") {
  AudioBuffer b = AudioBuffer::zeros(4);
  b.samples << 1.0, 2.0, 3.0, 4.0;

  const AudioBuffer longer = fit_length(b, 6);
  CHECK(longer.size() == 6);
  CHECK(longer.samples[3] == 4.0);
  CHECK(longer.samples[4] == 0.0);
  CHECK(longer.samples[5] == 0.0);

  const AudioBuffer shorter = fit_length(b, 2);
  CHECK(shorter.size() == 2);
  CHECK(shorter.samples[0] == 1.0);
  CHECK(shorter.samples[1] == 2.0);

  const AudioBuffer same = fit_length(b, 4);
  CHECK((same.samples == b.samples).all());
}

}  // TEST_SUITE
