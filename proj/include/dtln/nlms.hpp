// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_NLMS_HPP
#define DTLN_NLMS_HPP

#include <Eigen/Dense>

#include "dtln/audio.hpp"

namespace dtln {

// Sample-wise normalized least-mean-squares echo canceller. Defaults cover a
// 100 ms echo path at 16 kHz.
struct NlmsConfig {
  int taps = 1600;
  double mu = 0.5;
  double eps_reg = 1e-6;

  bool valid() const { return taps >= 1 && mu > 0.0 && mu < 2.0 && eps_reg > 0.0; }
};

// coeffs[k] weights the far-end sample k steps in the past; far_history is
// kept newest-first so the dot product is a direct inner product.
struct NlmsState {
  Eigen::VectorXd coeffs;
  Eigen::VectorXd far_history;

  static NlmsState zeros(int taps) {
    return {Eigen::VectorXd::Zero(taps), Eigen::VectorXd::Zero(taps)};
  }
};

// One adaptation step: predict the echo from far-end history, subtract, and
// update the coefficients along the normalized gradient. Returns the error
// signal, which is the echo-reduced output sample.
double nlms_step(double near_sample, double far_sample, const NlmsConfig& cfg,
                 NlmsState& state);

// Whole-file wrapper: fresh state, sample-by-sample. Shorter input is
// zero-padded; output length equals the longer input.
AudioBuffer nlms_process(const AudioBuffer& near, const AudioBuffer& far,
                         const NlmsConfig& cfg = {});

}  // namespace dtln

#endif  // DTLN_NLMS_HPP
