// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_MODEL_HPP
#define DTLN_MODEL_HPP

#include <Eigen/Dense>

#include "dtln/audio.hpp"
#include "dtln/dsp.hpp"
#include "dtln/weights.hpp"

namespace dtln {

struct LstmState {
  Eigen::VectorXf hidden;
  Eigen::VectorXf cell;

  static LstmState zeros(Eigen::Index units) {
    return {Eigen::VectorXf::Zero(units), Eigen::VectorXf::Zero(units)};
  }
};

// Inference-ready layer parameters. Kernels are stored transposed relative to
// the container layout, so gates = kernel*x + recurrent*h + bias with the four
// gate blocks [input, forget, cell-candidate, output] along the rows.
struct LstmParams {
  Eigen::MatrixXf kernel;     // (4*units, in_dim)
  Eigen::MatrixXf recurrent;  // (4*units, units)
  Eigen::VectorXf bias;       // (4*units)
};

struct DenseParams {
  Eigen::MatrixXf kernel;  // (out_dim, in_dim)
  Eigen::VectorXf bias;    // (out_dim)
};

// One cell update; writes the new hidden/cell into state and returns the
// hidden output. No dropout, no clipping.
Eigen::VectorXf lstm_step(const Eigen::VectorXf& x, const LstmParams& p,
                          LstmState& state);

// Test hook: replaces a predicted mask with all-ones or all-zeros after the
// sigmoid, leaving every other computation (including LSTM state updates)
// untouched.
enum class MaskOverride { kNone, kOnes, kZeros };

// Everything that persists between hops of one stream. One logical owner
// advances it; concurrent streams each own their own instance.
struct StreamingState {
  Eigen::VectorXf near_buf;  // 512 samples, oldest first
  Eigen::VectorXf far_buf;   // 512 samples, oldest first
  LstmState core1_lstm1;
  LstmState core1_lstm2;
  LstmState core2_lstm1;
  LstmState core2_lstm2;
  Eigen::ArrayXf ola;  // 512-sample overlap-add accumulator

  // Diagnostics, refreshed on every hop.
  Eigen::ArrayXf last_mask_tf;    // 257
  Eigen::ArrayXf last_mask_feat;  // 512

  void reset();
};

struct Core1Output {
  Eigen::ArrayXf magnitude;  // masked near-end magnitude, 257 bins
  Eigen::ArrayXf phase;      // near-end phase, reused for resynthesis
  Eigen::ArrayXf mask;       // 257, in [0, 1]
};

// Immutable forward pass over a fixed set of weights. All methods are const
// and safe to call from multiple threads as long as each thread owns its
// StreamingState.
class AecEngine {
 public:
  explicit AecEngine(const ModelWeights& w);

  int units() const { return units_; }
  StreamingState make_state() const;

  // Spectral masking core. Consumes full 512-sample frames, returns the
  // masked unnormalized near-end magnitude together with the near-end phase.
  Core1Output core1_step(const Frame<float>& near_frame,
                         const Frame<float>& far_frame, StreamingState& s,
                         MaskOverride mask_override = MaskOverride::kNone) const;

  // Learned-domain masking core. est_frame is the time-domain frame
  // resynthesized from core-1 output, before any overlap-add.
  Frame<float> core2_step(const Frame<float>& est_frame,
                          const Frame<float>& far_frame, StreamingState& s,
                          MaskOverride mask_override = MaskOverride::kNone) const;

  // Advances the stream by one 128-sample hop and returns the next 128
  // output samples. Output trails the input by 384 samples.
  Eigen::VectorXf process_frame_pair(
      const Eigen::VectorXf& near_hop, const Eigen::VectorXf& far_hop,
      StreamingState& s, MaskOverride tf_override = MaskOverride::kNone,
      MaskOverride feat_override = MaskOverride::kNone) const;

 private:
  int units_;
  LstmParams core1_lstm1_;
  LstmParams core1_lstm2_;
  DenseParams core1_dense_;
  IlnParams<float> iln1_near_;
  IlnParams<float> iln1_far_;
  Eigen::MatrixXf encoder_;  // (512, 512), shared between est and far frames
  Eigen::MatrixXf decoder_;  // (512, 512)
  IlnParams<float> iln2_main_;
  IlnParams<float> iln2_far_;
  LstmParams core2_lstm1_;
  LstmParams core2_lstm2_;
  DenseParams core2_dense_;
};

// Whole-file convenience wrapper: fresh state, hop-by-hop processing, output
// length equals input length. Shorter of the two inputs is zero-padded.
AudioBuffer process_file(const AudioBuffer& near, const AudioBuffer& far,
                         const ModelWeights& w);

}  // namespace dtln

#endif  // DTLN_MODEL_HPP
