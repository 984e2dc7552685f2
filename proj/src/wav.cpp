// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "dtln/errors.hpp"

namespace dtln {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

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

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open for reading: " + path);

  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "RIFF", 4) != 0)
    throw CorruptFile("missing RIFF header: " + path);
  read_le<std::uint32_t>(in);  // riff size, unreliable in the wild
  in.read(tag, 4);
  if (!in || std::memcmp(tag, "WAVE", 4) != 0)
    throw CorruptFile("missing WAVE tag: " + path);

  FmtChunk fmt;
  bool have_fmt = false;
  std::vector<char> data;
  bool have_data = false;

  while (in.read(tag, 4)) {
    const std::uint32_t chunk_size = read_le<std::uint32_t>(in);
    if (!in) throw CorruptFile("truncated chunk header: " + path);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw CorruptFile("fmt chunk too small: " + path);
      fmt.format = read_le<std::uint16_t>(in);
      fmt.channels = read_le<std::uint16_t>(in);
      fmt.sample_rate = read_le<std::uint32_t>(in);
      read_le<std::uint32_t>(in);  // byte rate
      read_le<std::uint16_t>(in);  // block align
      fmt.bits = read_le<std::uint16_t>(in);
      in.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data.resize(chunk_size);
      in.read(data.data(), chunk_size);
      if (in.gcount() != static_cast<std::streamsize>(chunk_size))
        throw CorruptFile("truncated data chunk: " + path);
      have_data = true;
    } else {
      in.ignore(chunk_size + (chunk_size & 1));  // chunks are word-aligned
    }
    if (!in && !in.eof()) throw CorruptFile("truncated chunk: " + path);
  }

  if (!have_fmt || !have_data)
    throw CorruptFile("missing fmt or data chunk: " + path);
  if (fmt.channels != 1)
    throw UnsupportedFormat("mono required, got " +
                            std::to_string(fmt.channels) + " channels");
  if (fmt.sample_rate != kSampleRate)
    throw UnsupportedFormat("16 kHz required, got " +
                            std::to_string(fmt.sample_rate) + " Hz");

  AudioBuffer buf;
  if (fmt.format == kFormatPcm && fmt.bits == 16) {
    if (data.size() % 2 != 0) throw CorruptFile("odd PCM16 data size: " + path);
    const Eigen::Index n = static_cast<Eigen::Index>(data.size() / 2);
    buf.samples.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::int16_t s;
      std::memcpy(&s, data.data() + 2 * i, 2);
      buf.samples[i] = static_cast<double>(s) / 32768.0;
    }
  } else if (fmt.format == kFormatIeeeFloat && fmt.bits == 32) {
    if (data.size() % 4 != 0)
      throw CorruptFile("odd float32 data size: " + path);
    const Eigen::Index n = static_cast<Eigen::Index>(data.size() / 4);
    buf.samples.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      float s;
      std::memcpy(&s, data.data() + 4 * i, 4);
      if (!std::isfinite(s))
        throw CorruptFile("non-finite sample in: " + path);
      buf.samples[i] = static_cast<double>(s);
    }
  } else {
    throw UnsupportedFormat("PCM16 or float32 required (format " +
                            std::to_string(fmt.format) + ", " +
                            std::to_string(fmt.bits) + " bit)");
  }
  return buf;
}

void write_wav(const std::string& path, const AudioBuffer& buf) {
  if (buf.sample_rate != kSampleRate)
    throw UnsupportedFormat("16 kHz required, got " +
                            std::to_string(buf.sample_rate) + " Hz");
  if (!buf.samples.allFinite())
    throw UnsupportedFormat("non-finite samples");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);

  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(buf.size()) * 2u;
  out.write("RIFF", 4);
  write_le<std::uint32_t>(out, 36u + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<std::uint32_t>(out, 16u);
  write_le<std::uint16_t>(out, kFormatPcm);
  write_le<std::uint16_t>(out, 1u);  // mono
  write_le<std::uint32_t>(out, kSampleRate);
  write_le<std::uint32_t>(out, kSampleRate * 2u);  // byte rate
  write_le<std::uint16_t>(out, 2u);                // block align
  write_le<std::uint16_t>(out, 16u);
  out.write("data", 4);
  write_le<std::uint32_t>(out, data_bytes);
  for (Eigen::Index i = 0; i < buf.size(); ++i) {
    const double scaled = std::round(buf.samples[i] * 32768.0);
    const double clamped =
        std::min(32767.0, std::max(-32768.0, scaled));
    write_le<std::int16_t>(out, static_cast<std::int16_t>(clamped));
  }
  if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace dtln
