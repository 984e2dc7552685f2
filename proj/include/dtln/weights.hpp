// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_WEIGHTS_HPP
#define DTLN_WEIGHTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dtln {

// One named float32 tensor, row-major. 2-D kernels are stored
// [input_dim, output_dim]; LSTM kernels fuse the four gates along the output
// axis in the order [input, forget, cell-candidate, output].
struct TensorRecord {
  std::string name;
  std::vector<std::uint32_t> shape;
  std::vector<float> data;

  std::size_t element_count() const {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
  }
};

// Immutable container of every learnable parameter of the network, keyed by
// name. Shareable read-only across any number of streams.
class ModelWeights {
 public:
  ModelWeights(int units, std::vector<TensorRecord> tensors);

  int units() const { return units_; }
  const std::vector<TensorRecord>& tensors() const { return tensors_; }
  bool has(const std::string& name) const { return index_.count(name) != 0; }
  const TensorRecord& tensor(const std::string& name) const;

 private:
  int units_;
  std::vector<TensorRecord> tensors_;  // canonical order
  std::map<std::string, std::size_t> index_;
};

// Canonical (name, shape) table for a given LSTM width. InvalidUnits unless
// units is one of 128, 256, 512.
std::vector<std::pair<std::string, std::vector<std::uint32_t>>>
expected_tensor_shapes(int units);

// Binary container: magic "DTLNAEC1", u32 tensor count, then per tensor
// u16 name length, name bytes, u8 rank, u32 dims, float32 payload.
// All little-endian. load(save(w)) is bit-exact.
ModelWeights load_weights(const std::string& path);
void save_weights(const std::string& path, const ModelWeights& w);

// Deterministic per seed: matrices uniform in +-1/sqrt(fan_in), biases zero
// except LSTM forget gates (1.0), normalization gains 1 / biases 0.
ModelWeights random_init(int units, std::uint64_t seed);

// Diagnostic configuration: both masks saturate to exactly 1 in float32 and
// the feature encoder/decoder are identity maps, so the whole pipeline
// reduces to analysis + synthesis and reconstructs its input (delayed by
// frame_len - shift samples).
ModelWeights identity_test_weights(int units);

std::size_t count_params(const ModelWeights& w);

// Analytic parameter count of the reference single-path topology: four
// stacked LSTM layers on the 514-dim spectral input, a 257-way sigmoid mask
// head, and the two front-end normalization parameter sets. units must be 512.
std::size_t count_params_baseline(int units);

}  // namespace dtln

#endif  // DTLN_WEIGHTS_HPP
