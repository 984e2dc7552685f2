// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/model.hpp"

#include <cstring>

namespace dtln {
namespace {

constexpr FrameConfig kCfg{};
constexpr float kOlaScale =
    static_cast<float>(kCfg.shift) / static_cast<float>(kCfg.frame_len);

Eigen::ArrayXf sigmoid(const Eigen::ArrayXf& x) {
  return 1.0f / (1.0f + (-x).exp());
}

// Container kernels are row-major [in_dim, out_dim]; inference wants
// (out_dim, in_dim) for matrix-vector products.
Eigen::MatrixXf transposed_kernel(const TensorRecord& t) {
  using RowMajor =
      Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> m(t.data.data(),
                               static_cast<Eigen::Index>(t.shape[0]),
                               static_cast<Eigen::Index>(t.shape[1]));
  return m.transpose();
}

Eigen::VectorXf as_vector(const TensorRecord& t) {
  return Eigen::Map<const Eigen::VectorXf>(
      t.data.data(), static_cast<Eigen::Index>(t.data.size()));
}

Eigen::ArrayXf as_array(const TensorRecord& t) {
  return Eigen::Map<const Eigen::ArrayXf>(
      t.data.data(), static_cast<Eigen::Index>(t.data.size()));
}

LstmParams load_lstm(const ModelWeights& w, const std::string& prefix) {
  return {transposed_kernel(w.tensor(prefix + ".kernel")),
          transposed_kernel(w.tensor(prefix + ".recurrent")),
          as_vector(w.tensor(prefix + ".bias"))};
}

DenseParams load_dense(const ModelWeights& w, const std::string& prefix) {
  return {transposed_kernel(w.tensor(prefix + ".kernel")),
          as_vector(w.tensor(prefix + ".bias"))};
}

IlnParams<float> load_iln(const ModelWeights& w, const std::string& prefix) {
  IlnParams<float> p;
  p.gain = as_array(w.tensor(prefix + ".gain"));
  p.bias = as_array(w.tensor(prefix + ".bias"));
  return p;
}

void apply_override(Eigen::ArrayXf& mask, MaskOverride mode) {
  if (mode == MaskOverride::kOnes)
    mask.setOnes();
  else if (mode == MaskOverride::kZeros)
    mask.setZero();
}

// Drops the oldest `hop.size()` samples and appends the hop.
void push_hop(Eigen::VectorXf& buf, const Eigen::VectorXf& hop) {
  const Eigen::Index keep = buf.size() - hop.size();
  std::memmove(buf.data(), buf.data() + hop.size(),
               static_cast<std::size_t>(keep) * sizeof(float));
  buf.tail(hop.size()) = hop;
}

}  // namespace

Eigen::VectorXf lstm_step(const Eigen::VectorXf& x, const LstmParams& p,
                          LstmState& state) {
  const Eigen::Index u = state.hidden.size();
  Eigen::VectorXf gates = p.kernel * x + p.recurrent * state.hidden + p.bias;
  const Eigen::ArrayXf i = sigmoid(gates.segment(0, u).array());
  const Eigen::ArrayXf f = sigmoid(gates.segment(u, u).array());
  const Eigen::ArrayXf g = gates.segment(2 * u, u).array().tanh();
  const Eigen::ArrayXf o = sigmoid(gates.segment(3 * u, u).array());
  state.cell = (f * state.cell.array() + i * g).matrix();
  state.hidden = (o * state.cell.array().tanh()).matrix();
  return state.hidden;
}

void StreamingState::reset() {
  near_buf.setZero();
  far_buf.setZero();
  for (LstmState* s : {&core1_lstm1, &core1_lstm2, &core2_lstm1, &core2_lstm2}) {
    s->hidden.setZero();
    s->cell.setZero();
  }
  ola.setZero();
  last_mask_tf.setZero();
  last_mask_feat.setZero();
}

AecEngine::AecEngine(const ModelWeights& w)
    : units_(w.units()),
      core1_lstm1_(load_lstm(w, "core1.lstm1")),
      core1_lstm2_(load_lstm(w, "core1.lstm2")),
      core1_dense_(load_dense(w, "core1.dense")),
      iln1_near_(load_iln(w, "core1.iln_near")),
      iln1_far_(load_iln(w, "core1.iln_far")),
      encoder_(transposed_kernel(w.tensor("core2.encoder.kernel"))),
      decoder_(transposed_kernel(w.tensor("core2.decoder.kernel"))),
      iln2_main_(load_iln(w, "core2.iln_main")),
      iln2_far_(load_iln(w, "core2.iln_far")),
      core2_lstm1_(load_lstm(w, "core2.lstm1")),
      core2_lstm2_(load_lstm(w, "core2.lstm2")),
      core2_dense_(load_dense(w, "core2.dense")) {}

StreamingState AecEngine::make_state() const {
  StreamingState s;
  s.near_buf = Eigen::VectorXf::Zero(kCfg.frame_len);
  s.far_buf = Eigen::VectorXf::Zero(kCfg.frame_len);
  s.core1_lstm1 = LstmState::zeros(units_);
  s.core1_lstm2 = LstmState::zeros(units_);
  s.core2_lstm1 = LstmState::zeros(units_);
  s.core2_lstm2 = LstmState::zeros(units_);
  s.ola = Eigen::ArrayXf::Zero(kCfg.frame_len);
  s.last_mask_tf = Eigen::ArrayXf::Zero(kCfg.frame_len / 2 + 1);
  s.last_mask_feat = Eigen::ArrayXf::Zero(kCfg.frame_len);
  return s;
}

Core1Output AecEngine::core1_step(const Frame<float>& near_frame,
                                  const Frame<float>& far_frame,
                                  StreamingState& s,
                                  MaskOverride mask_override) const {
  const Spectrum<float> near_spec = rdft<float>(near_frame);
  const Spectrum<float> far_spec = rdft<float>(far_frame);
  const Eigen::ArrayXf near_ln =
      instant_layer_norm<float>(log_power<float>(near_spec.magnitude),
                                iln1_near_);
  const Eigen::ArrayXf far_ln = instant_layer_norm<float>(
      log_power<float>(far_spec.magnitude), iln1_far_);

  Eigen::VectorXf x(near_ln.size() + far_ln.size());
  x << near_ln.matrix(), far_ln.matrix();
  const Eigen::VectorXf h1 = lstm_step(x, core1_lstm1_, s.core1_lstm1);
  const Eigen::VectorXf h2 = lstm_step(h1, core1_lstm2_, s.core1_lstm2);

  Eigen::ArrayXf mask =
      sigmoid((core1_dense_.kernel * h2 + core1_dense_.bias).array());
  apply_override(mask, mask_override);
  s.last_mask_tf = mask;
  return {near_spec.magnitude * mask, near_spec.phase, mask};
}

Frame<float> AecEngine::core2_step(const Frame<float>& est_frame,
                                   const Frame<float>& far_frame,
                                   StreamingState& s,
                                   MaskOverride mask_override) const {
  const Eigen::ArrayXf enc_est = (encoder_ * est_frame).array();
  const Eigen::ArrayXf enc_far = (encoder_ * far_frame).array();
  const Eigen::ArrayXf est_ln = instant_layer_norm<float>(enc_est, iln2_main_);
  const Eigen::ArrayXf far_ln = instant_layer_norm<float>(enc_far, iln2_far_);

  Eigen::VectorXf x(est_ln.size() + far_ln.size());
  x << est_ln.matrix(), far_ln.matrix();
  const Eigen::VectorXf h1 = lstm_step(x, core2_lstm1_, s.core2_lstm1);
  const Eigen::VectorXf h2 = lstm_step(h1, core2_lstm2_, s.core2_lstm2);

  Eigen::ArrayXf mask =
      sigmoid((core2_dense_.kernel * h2 + core2_dense_.bias).array());
  apply_override(mask, mask_override);
  s.last_mask_feat = mask;
  return decoder_ * (enc_est * mask).matrix();
}

Eigen::VectorXf AecEngine::process_frame_pair(const Eigen::VectorXf& near_hop,
                                              const Eigen::VectorXf& far_hop,
                                              StreamingState& s,
                                              MaskOverride tf_override,
                                              MaskOverride feat_override) const {
  push_hop(s.near_buf, near_hop);
  push_hop(s.far_buf, far_hop);

  const Core1Output c1 =
      core1_step(s.near_buf, s.far_buf, s, tf_override);
  const Frame<float> est = irdft_with_phase<float>(c1.magnitude, c1.phase);
  const Frame<float> out = core2_step(est, s.far_buf, s, feat_override);

  const Eigen::Index keep = s.ola.size() - kCfg.shift;
  std::memmove(s.ola.data(), s.ola.data() + kCfg.shift,
               static_cast<std::size_t>(keep) * sizeof(float));
  s.ola.tail(kCfg.shift).setZero();
  s.ola += out.array();
  return (s.ola.head(kCfg.shift) * kOlaScale).matrix();
}

AudioBuffer process_file(const AudioBuffer& near, const AudioBuffer& far,
                         const ModelWeights& w) {
  const Eigen::Index len = std::max(near.samples.size(), far.samples.size());
  const AudioBuffer near_p = fit_length(near, len);
  const AudioBuffer far_p = fit_length(far, len);

  const AecEngine engine(w);
  StreamingState state = engine.make_state();

  AudioBuffer out = AudioBuffer::zeros(len);
  const Eigen::Index hops = (len + kCfg.shift - 1) / kCfg.shift;
  Eigen::VectorXf near_hop(kCfg.shift);
  Eigen::VectorXf far_hop(kCfg.shift);
  for (Eigen::Index k = 0; k < hops; ++k) {
    const Eigen::Index start = k * kCfg.shift;
    const Eigen::Index take = std::min<Eigen::Index>(kCfg.shift, len - start);
    near_hop.setZero();
    far_hop.setZero();
    near_hop.head(take) =
        near_p.samples.segment(start, take).cast<float>().matrix();
    far_hop.head(take) =
        far_p.samples.segment(start, take).cast<float>().matrix();
    const Eigen::VectorXf emitted =
        engine.process_frame_pair(near_hop, far_hop, state);
    out.samples.segment(start, take) =
        emitted.head(take).array().cast<double>();
  }
  return out;
}

}  // namespace dtln
