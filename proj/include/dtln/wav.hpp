// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_WAV_HPP
#define DTLN_WAV_HPP

#include <string>

#include "dtln/audio.hpp"

namespace dtln {

// Reads a mono 16 kHz RIFF/WAVE file. PCM 16-bit and IEEE float 32-bit are
// accepted; 16-bit samples are normalized by 1/32768. Anything else raises
// UnsupportedFormat; truncated or malformed chunk data raises CorruptFile.
AudioBuffer read_wav(const std::string& path);

// Writes a mono 16 kHz PCM 16-bit RIFF/WAVE file. read_wav(write_wav(x))
// reproduces samples within 1/32768 (quantization). Raises IoFailure on
// filesystem errors, UnsupportedFormat for buffers that violate the
// AudioBuffer invariants.
void write_wav(const std::string& path, const AudioBuffer& buf);

}  // namespace dtln

#endif  // DTLN_WAV_HPP
