// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DTLN_SCENARIO_HPP
#define DTLN_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dtln/audio.hpp"

namespace dtln {

struct NoiseSpec {
  double snr_db = 0.0;
};

struct GapSpec {
  double start_s = 0.0;
  double len_s = 0.0;
};

// Fully determines one synthetic echo scenario. All level draws are in dB;
// absent optionals mean the corresponding element is not mixed in. ser_db
// absent means no echo at all.
struct ScenarioSpec {
  std::uint64_t seed = 0;
  double duration_s = 4.0;
  double delay_ms = 10.0;
  double bp_low_hz = 100.0;
  double bp_high_hz = 6000.0;
  double ir_gain_db = 0.0;
  std::optional<NoiseSpec> far_noise;
  std::optional<NoiseSpec> near_noise;
  std::optional<double> ser_db;
  std::optional<GapSpec> near_gap;
  std::array<double, 3> input_gains_db = {0.0, 0.0, 0.0};
  double far_silence_floor_db = -70.0;
};

// WAV file paths by role, read from a manifest.
struct AssetPools {
  std::vector<std::string> speech;
  std::vector<std::string> noise;
  std::vector<std::string> ir;
};

// Concrete signals one scenario is built from. near_speech absent models the
// far-end-only condition, in which the target is silence.
struct ScenarioAssets {
  std::optional<AudioBuffer> near_speech;
  AudioBuffer far_speech;
  AudioBuffer near_noise;
  AudioBuffer far_noise;
  Eigen::ArrayXd ir;
};

// What the model consumes and what it should produce.
struct ScenarioBundle {
  AudioBuffer near_mic;
  AudioBuffer far_ref;
  AudioBuffer target;
};

// Bundle plus the additive parts of the near-end mixture:
// near_mic == target + noise + echo, sample for sample.
struct ScenarioStems {
  AudioBuffer near_mic;
  AudioBuffer far_ref;
  AudioBuffer target;
  AudioBuffer echo;
  AudioBuffer noise;
};

// Parses a manifest of "role path" lines (roles: speech, noise, ir). Blank
// lines and lines starting with '#' are skipped. Throws IoFailure on an
// unreadable file, CorruptFile on a malformed line.
AssetPools load_manifest(const std::string& path);

// Draws every scenario parameter from the seed. The draw sequence is fixed
// and unconditional (presence flags do not shift later draws), which makes
// each marginal distribution exactly as documented. Throws EmptyAssetPool if
// any pool is empty.
ScenarioSpec draw_spec(std::uint64_t seed, const AssetPools& pools);

// Truncates the impulse response so the first sample at or above
// threshold_rel * max|ir| becomes index 0. Throws AllZeroIr.
Eigen::ArrayXd shift_ir_onset(const Eigen::ArrayXd& ir, double threshold_rel);

// Normalizes the direct path to unit magnitude and scales the tail:
// out[0] = ir[0]/|ir[0]|, out[k>0] = ir[k]/|ir[0]| * 10^(tail_gain_db/20).
// Throws ZeroDirectPath when |ir[0]| == 0.
Eigen::ArrayXd augment_ir(const Eigen::ArrayXd& ir, double tail_gain_db);

// Mild random coloration: two first-order shelving filters with corner
// frequencies in [200, 4000] Hz and gains in [-6, +6] dB, then RMS
// renormalization to the input level. Deterministic per seed.
AudioBuffer spectral_shape(const AudioBuffer& signal, std::uint64_t seed);

// Loads and crops the concrete signals the spec's seed selects from the
// pools. Deterministic per (spec.seed, pools).
ScenarioAssets select_assets(const ScenarioSpec& spec, const AssetPools& pools);

// Builds the scenario. Level matching is exact on the emitted stems: the
// target is peak-scaled first, then echo and noise are matched to it at
// their drawn ratios, measured as active-region RMS. The near-end mixture is
// the exact sample-wise sum of the three stems.
ScenarioStems synthesize_stems(const ScenarioSpec& spec,
                               const ScenarioAssets& assets);
ScenarioBundle synthesize(const ScenarioSpec& spec,
                          const ScenarioAssets& assets);
ScenarioBundle synthesize(const ScenarioSpec& spec, const AssetPools& pools);

// JSON round-trip of a spec, one object per scenario.
std::string spec_to_json(const ScenarioSpec& spec);
ScenarioSpec spec_from_json(const std::string& text);

}  // namespace dtln

#endif  // DTLN_SCENARIO_HPP
