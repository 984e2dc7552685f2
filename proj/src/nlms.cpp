// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/nlms.hpp"

#include <algorithm>
#include <cstring>

namespace dtln {

double nlms_step(double near_sample, double far_sample, const NlmsConfig& cfg,
                 NlmsState& state) {
  std::memmove(state.far_history.data() + 1, state.far_history.data(),
               static_cast<std::size_t>(cfg.taps - 1) * sizeof(double));
  state.far_history[0] = far_sample;

  const double estimate = state.coeffs.dot(state.far_history);
  const double err = near_sample - estimate;
  const double energy = state.far_history.squaredNorm() + cfg.eps_reg;
  state.coeffs += (cfg.mu * err / energy) * state.far_history;
  return err;
}

AudioBuffer nlms_process(const AudioBuffer& near, const AudioBuffer& far,
                         const NlmsConfig& cfg) {
  const Eigen::Index len = std::max(near.samples.size(), far.samples.size());
  const AudioBuffer near_p = fit_length(near, len);
  const AudioBuffer far_p = fit_length(far, len);

  NlmsState state = NlmsState::zeros(cfg.taps);
  AudioBuffer out = AudioBuffer::zeros(len);
  for (Eigen::Index i = 0; i < len; ++i)
    out.samples[i] = nlms_step(near_p.samples[i], far_p.samples[i], cfg, state);
  return out;
}

}  // namespace dtln
