// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/weights.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "dtln/errors.hpp"
#include "dtln/rng.hpp"

namespace dtln {
namespace {

constexpr char kMagic[8] = {'D', 'T', 'L', 'N', 'A', 'E', 'C', '1'};
constexpr std::uint32_t kFrameLen = 512;
constexpr std::uint32_t kSpecBins = 257;   // frame_len/2 + 1
constexpr std::uint32_t kFeatureDim = 512;

bool valid_units(int units) {
  return units == 128 || units == 256 || units == 512;
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char raw[sizeof(T)];
  in.read(reinterpret_cast<char*>(raw), sizeof(T));
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(raw[i]) << (8 * i);
  T out;
  std::memcpy(&out, &v, sizeof(T));
  return out;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  std::uint64_t v = 0;
  std::memcpy(&v, &value, sizeof(T));
  unsigned char raw[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    raw[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(raw), sizeof(T));
}

int units_from_tensors(const std::vector<TensorRecord>& tensors) {
  for (const auto& t : tensors)
    if (t.name == "core1.lstm1.recurrent" && t.shape.size() == 2)
      return static_cast<int>(t.shape[0]);
  throw MissingTensor("core1.lstm1.recurrent");
}

}  // namespace

std::vector<std::pair<std::string, std::vector<std::uint32_t>>>
expected_tensor_shapes(int units) {
  if (!valid_units(units))
    throw InvalidUnits("units must be 128, 256 or 512, got " +
                       std::to_string(units));
  const std::uint32_t u = static_cast<std::uint32_t>(units);
  const std::uint32_t g = 4 * u;
  std::vector<std::pair<std::string, std::vector<std::uint32_t>>> out;
  out.push_back({"core1.lstm1.kernel", {2 * kSpecBins, g}});
  out.push_back({"core1.lstm1.recurrent", {u, g}});
  out.push_back({"core1.lstm1.bias", {g}});
  out.push_back({"core1.lstm2.kernel", {u, g}});
  out.push_back({"core1.lstm2.recurrent", {u, g}});
  out.push_back({"core1.lstm2.bias", {g}});
  out.push_back({"core1.dense.kernel", {u, kSpecBins}});
  out.push_back({"core1.dense.bias", {kSpecBins}});
  out.push_back({"core1.iln_near.gain", {kSpecBins}});
  out.push_back({"core1.iln_near.bias", {kSpecBins}});
  out.push_back({"core1.iln_far.gain", {kSpecBins}});
  out.push_back({"core1.iln_far.bias", {kSpecBins}});
  out.push_back({"core2.encoder.kernel", {kFrameLen, kFeatureDim}});
  out.push_back({"core2.iln_main.gain", {kFeatureDim}});
  out.push_back({"core2.iln_main.bias", {kFeatureDim}});
  out.push_back({"core2.iln_far.gain", {kFeatureDim}});
  out.push_back({"core2.iln_far.bias", {kFeatureDim}});
  out.push_back({"core2.lstm1.kernel", {2 * kFeatureDim, g}});
  out.push_back({"core2.lstm1.recurrent", {u, g}});
  out.push_back({"core2.lstm1.bias", {g}});
  out.push_back({"core2.lstm2.kernel", {u, g}});
  out.push_back({"core2.lstm2.recurrent", {u, g}});
  out.push_back({"core2.lstm2.bias", {g}});
  out.push_back({"core2.dense.kernel", {u, kFeatureDim}});
  out.push_back({"core2.dense.bias", {kFeatureDim}});
  out.push_back({"core2.decoder.kernel", {kFeatureDim, kFrameLen}});
  return out;
}

ModelWeights::ModelWeights(int units, std::vector<TensorRecord> tensors)
    : units_(units), tensors_(std::move(tensors)) {
  if (!valid_units(units_))
    throw InvalidUnits("units must be 128, 256 or 512, got " +
                       std::to_string(units_));
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    const auto& t = tensors_[i];
    if (t.element_count() != t.data.size())
      throw ShapeMismatch(t.name + ": shape does not match payload size");
    if (!index_.emplace(t.name, i).second)
      throw DuplicateTensor(t.name);
  }
  const auto expected = expected_tensor_shapes(units_);
  for (const auto& [name, shape] : expected) {
    auto it = index_.find(name);
    if (it == index_.end()) throw MissingTensor(name);
    if (tensors_[it->second].shape != shape)
      throw ShapeMismatch(name + ": unexpected shape");
  }
  if (tensors_.size() != expected.size()) {
    std::set<std::string> known;
    for (const auto& [name, shape] : expected) known.insert(name);
    for (const auto& t : tensors_)
      if (!known.count(t.name)) throw UnknownTensor(t.name);
  }
}

const TensorRecord& ModelWeights::tensor(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw MissingTensor(name);
  return tensors_[it->second];
}

ModelWeights load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open for reading: " + path);

  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8) throw BadMagic("file too short: " + path);
  if (std::memcmp(magic, kMagic, 7) != 0)
    throw BadMagic("not a weights container: " + path);
  if (magic[7] != kMagic[7])
    throw VersionMismatch(std::string("unsupported container version '") +
                          magic[7] + "'");

  const std::uint32_t count = read_le<std::uint32_t>(in);
  if (!in) throw CorruptFile("truncated header: " + path);

  std::vector<TensorRecord> tensors;
  tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    TensorRecord t;
    const std::uint16_t name_len = read_le<std::uint16_t>(in);
    if (!in) throw CorruptFile("truncated tensor header: " + path);
    t.name.resize(name_len);
    in.read(t.name.data(), name_len);
    const std::uint8_t rank = read_le<std::uint8_t>(in);
    if (!in) throw CorruptFile("truncated tensor header: " + path);
    t.shape.resize(rank);
    for (std::uint8_t r = 0; r < rank; ++r)
      t.shape[r] = read_le<std::uint32_t>(in);
    if (!in) throw CorruptFile("truncated dims: " + path);
    t.data.resize(t.element_count());
    for (auto& v : t.data) v = read_le<float>(in);
    if (!in) throw CorruptFile("truncated payload for " + t.name);
    tensors.push_back(std::move(t));
  }
  if (in.peek() != std::ifstream::traits_type::eof())
    throw TrailingBytes("extra bytes after last tensor: " + path);

  const int units = units_from_tensors(tensors);
  return ModelWeights(units, std::move(tensors));
}

void save_weights(const std::string& path, const ModelWeights& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  out.write(kMagic, 8);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(w.tensors().size()));
  for (const auto& t : w.tensors()) {
    write_le<std::uint16_t>(out, static_cast<std::uint16_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_le<std::uint8_t>(out, static_cast<std::uint8_t>(t.shape.size()));
    for (auto d : t.shape) write_le<std::uint32_t>(out, d);
    for (auto v : t.data) write_le<float>(out, v);
  }
  if (!out) throw IoFailure("write failed: " + path);
}

ModelWeights random_init(int units, std::uint64_t seed) {
  const auto expected = expected_tensor_shapes(units);
  Rng rng(seed);
  std::vector<TensorRecord> tensors;
  tensors.reserve(expected.size());
  const std::uint32_t u = static_cast<std::uint32_t>(units);
  for (const auto& [name, shape] : expected) {
    TensorRecord t;
    t.name = name;
    t.shape = shape;
    t.data.assign(t.element_count(), 0.0f);
    const bool is_matrix = shape.size() == 2;
    const bool is_gain = name.ends_with(".gain");
    const bool is_lstm_bias =
        name.find(".lstm") != std::string::npos && name.ends_with(".bias");
    if (is_matrix) {
      const float bound = 1.0f / std::sqrt(static_cast<float>(shape[0]));
      for (auto& v : t.data)
        v = static_cast<float>(rng.uniform(-bound, bound));
    } else if (is_gain) {
      std::fill(t.data.begin(), t.data.end(), 1.0f);
    } else if (is_lstm_bias) {
      // forget-gate block, gate order [i, f, g, o]
      std::fill(t.data.begin() + u, t.data.begin() + 2 * u, 1.0f);
    }
    tensors.push_back(std::move(t));
  }
  return ModelWeights(units, std::move(tensors));
}

ModelWeights identity_test_weights(int units) {
  const auto expected = expected_tensor_shapes(units);
  std::vector<TensorRecord> tensors;
  tensors.reserve(expected.size());
  for (const auto& [name, shape] : expected) {
    TensorRecord t;
    t.name = name;
    t.shape = shape;
    t.data.assign(t.element_count(), 0.0f);
    if (name.ends_with(".gain")) {
      std::fill(t.data.begin(), t.data.end(), 1.0f);
    } else if (name == "core1.dense.bias" || name == "core2.dense.bias") {
      // sigmoid(30) rounds to 1.0f, pinning both masks to exactly one
      std::fill(t.data.begin(), t.data.end(), 30.0f);
    } else if (name == "core2.encoder.kernel" ||
               name == "core2.decoder.kernel") {
      for (std::uint32_t i = 0; i < shape[0]; ++i)
        t.data[i * shape[1] + i] = 1.0f;
    }
    tensors.push_back(std::move(t));
  }
  return ModelWeights(units, std::move(tensors));
}

std::size_t count_params(const ModelWeights& w) {
  std::size_t n = 0;
  for (const auto& t : w.tensors()) n += t.element_count();
  return n;
}

std::size_t count_params_baseline(int units) {
  if (units != 512)
    throw InvalidUnits("baseline topology is defined for 512 units");
  const std::size_t u = static_cast<std::size_t>(units);
  const std::size_t input_dim = 2 * kSpecBins;  // 514
  std::size_t n = 0;
  n += 4 * u * (input_dim + u + 1);      // first LSTM layer
  n += 3 * (4 * u * (u + u + 1));        // three stacked LSTM layers
  n += u * kSpecBins + kSpecBins;        // sigmoid mask head
  n += 2 * (2 * kSpecBins);              // front-end normalization gains/biases
  return n;
}

}  // namespace dtln
