// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dtln/dsp.hpp"
#include "dtln/errors.hpp"
#include "dtln/rng.hpp"
#include "dtln/wav.hpp"

namespace dtln {
namespace {

// First |sample| at or above this fraction of the peak counts as the direct
// path when preparing impulse responses.
constexpr double kOnsetThreshold = 0.5;

// Sub-stream ids hung off ScenarioSpec.seed. Part of the reproducibility
// contract: changing any id changes every emitted scenario.
enum Stream : std::uint64_t {
  kStreamAssets = 1,
  kStreamShapeNear = 2,
  kStreamShapeNearNoise = 3,
  kStreamShapeEcho = 4,
  kStreamShapeFar = 5,
  kStreamFloor = 6,
  kStreamShapeFloor = 7,
};

double db_to_lin(double db) { return std::pow(10.0, db / 20.0); }

// Iteratively rescales so the active-region RMS of the result equals
// desired_rms. A handful of passes suffices because the active sample set is
// stable once the level stops crossing the activity threshold; if the signal
// drops below the threshold entirely the last estimate is kept.
AudioBuffer match_active_rms(AudioBuffer sig, double desired_rms) {
  for (int i = 0; i < 4; ++i) {
    const double cur = rms_active(sig);
    if (cur <= 0.0) break;
    sig.samples *= desired_rms / cur;
  }
  return sig;
}

void scale_to_peak(AudioBuffer& sig, double peak_db) {
  const double pk = peak(sig);
  if (pk > 0.0) sig.samples *= db_to_lin(peak_db) / pk;
}

}  // namespace

AssetPools load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open manifest: " + path);
  AssetPools pools;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string role, file;
    ls >> role;
    std::getline(ls, file);
    const auto start = file.find_first_not_of(" \t");
    file = start == std::string::npos ? std::string() : file.substr(start);
    if (role.empty() && file.empty()) continue;
    if (file.empty())
      throw CorruptFile(path + ":" + std::to_string(lineno) +
                        ": expected 'role path'");
    if (role == "speech")
      pools.speech.push_back(file);
    else if (role == "noise")
      pools.noise.push_back(file);
    else if (role == "ir")
      pools.ir.push_back(file);
    else
      throw CorruptFile(path + ":" + std::to_string(lineno) +
                        ": unknown role '" + role + "'");
  }
  return pools;
}

ScenarioSpec draw_spec(std::uint64_t seed, const AssetPools& pools) {
  if (pools.speech.empty()) throw EmptyAssetPool("speech pool is empty");
  if (pools.noise.empty()) throw EmptyAssetPool("noise pool is empty");
  if (pools.ir.empty()) throw EmptyAssetPool("ir pool is empty");

  ScenarioSpec spec;
  spec.seed = seed;
  Rng rng(seed);

  // Draw order is fixed and unconditional so presence flags never shift the
  // draws that follow them.
  const bool echo = rng.bernoulli(0.9);
  const double ser = rng.normal(0.0, 10.0);
  const bool far_noise = rng.bernoulli(0.5);
  const double far_snr = rng.normal(5.0, 10.0);
  const bool near_noise = rng.bernoulli(0.7);
  const double near_snr = rng.normal(5.0, 10.0);
  const bool gap = rng.bernoulli(0.05);
  const double gap_len = rng.uniform(0.5, spec.duration_s / 2.0);
  const double gap_start = rng.uniform(0.0, spec.duration_s - gap_len);

  spec.delay_ms = rng.uniform(10.0, 100.0);
  spec.bp_low_hz = rng.uniform(100.0, 400.0);
  spec.bp_high_hz = rng.uniform(6000.0, 7500.0);
  spec.ir_gain_db = rng.uniform(-25.0, 0.0);
  for (double& g : spec.input_gains_db) g = rng.uniform(-25.0, 0.0);
  spec.far_silence_floor_db = rng.uniform(-120.0, -70.0);

  if (echo) spec.ser_db = ser;
  if (far_noise) spec.far_noise = NoiseSpec{far_snr};
  if (near_noise) spec.near_noise = NoiseSpec{near_snr};
  if (gap) spec.near_gap = GapSpec{gap_start, gap_len};
  return spec;
}

Eigen::ArrayXd shift_ir_onset(const Eigen::ArrayXd& ir, double threshold_rel) {
  if (ir.size() == 0) throw AllZeroIr("impulse response is empty");
  const double top = ir.abs().maxCoeff();
  if (top == 0.0) throw AllZeroIr("impulse response is all zeros");
  const double thr = threshold_rel * top;
  Eigen::Index onset = 0;
  while (std::abs(ir[onset]) < thr) ++onset;
  return ir.tail(ir.size() - onset);
}

Eigen::ArrayXd augment_ir(const Eigen::ArrayXd& ir, double tail_gain_db) {
  if (ir.size() == 0) throw ZeroDirectPath("impulse response is empty");
  const double direct = std::abs(ir[0]);
  if (direct == 0.0)
    throw ZeroDirectPath("impulse response has no direct path at index 0");
  Eigen::ArrayXd out = ir / direct * db_to_lin(tail_gain_db);
  out[0] = ir[0] / direct;
  return out;
}

AudioBuffer spectral_shape(const AudioBuffer& signal, std::uint64_t seed) {
  // Gains stay inside +-6 dB: two same-side shelves compound, and the
  // per-octave coloration must stay within +-12 dB after renormalization.
  Rng rng(seed);
  const double c1 = rng.uniform(200.0, 4000.0);
  const double g1 = rng.uniform(-6.0, 6.0);
  const double c2 = rng.uniform(200.0, 4000.0);
  const double g2 = rng.uniform(-6.0, 6.0);

  const double fs = static_cast<double>(signal.sample_rate);
  AudioBuffer out = apply_biquad(signal, low_shelf(c1, g1, fs));
  out = apply_biquad(out, high_shelf(c2, g2, fs));

  const double r_in = rms(signal);
  const double r_out = rms(out);
  if (r_out > 0.0) out.samples *= r_in / r_out;
  return out;
}

ScenarioAssets select_assets(const ScenarioSpec& spec,
                             const AssetPools& pools) {
  if (pools.speech.empty()) throw EmptyAssetPool("speech pool is empty");
  if (pools.noise.empty()) throw EmptyAssetPool("noise pool is empty");
  if (pools.ir.empty()) throw EmptyAssetPool("ir pool is empty");

  Rng rng(Rng::split(spec.seed, kStreamAssets));
  const auto pick = [&rng](const std::vector<std::string>& pool) {
    return pool[rng.next_u64() % pool.size()];
  };
  ScenarioAssets assets;
  assets.near_speech = read_wav(pick(pools.speech));
  assets.far_speech = read_wav(pick(pools.speech));
  assets.near_noise = read_wav(pick(pools.noise));
  assets.far_noise = read_wav(pick(pools.noise));
  assets.ir = read_wav(pick(pools.ir)).samples;
  return assets;
}

ScenarioStems synthesize_stems(const ScenarioSpec& spec,
                               const ScenarioAssets& assets) {
  const Eigen::Index n =
      static_cast<Eigen::Index>(std::llround(spec.duration_s * kSampleRate));
  const Eigen::ArrayXd ir =
      augment_ir(shift_ir_onset(assets.ir, kOnsetThreshold), spec.ir_gain_db);

  ScenarioStems stems;
  stems.target = AudioBuffer::zeros(n);
  if (assets.near_speech) {
    const AudioBuffer reverberant =
        fir_convolve(fit_length(*assets.near_speech, n), ir);
    stems.target = spectral_shape(
        reverberant, Rng::split(spec.seed, kStreamShapeNear));
    if (spec.near_gap) {
      const Eigen::Index gs = std::min<Eigen::Index>(
          n, std::llround(spec.near_gap->start_s * kSampleRate));
      const Eigen::Index ge = std::min<Eigen::Index>(
          n, gs + std::llround(spec.near_gap->len_s * kSampleRate));
      stems.target.samples.segment(gs, ge - gs).setZero();
    }
    scale_to_peak(stems.target, spec.input_gains_db[0]);
  }
  const double target_rms = rms_active(stems.target);

  stems.noise = AudioBuffer::zeros(n);
  if (spec.near_noise) {
    AudioBuffer nz =
        spectral_shape(fit_length(assets.near_noise, n),
                       Rng::split(spec.seed, kStreamShapeNearNoise));
    if (target_rms > 0.0)
      nz = match_active_rms(std::move(nz),
                            target_rms * db_to_lin(-spec.near_noise->snr_db));
    stems.noise = std::move(nz);
  }

  AudioBuffer far_base = fit_length(assets.far_speech, n);
  if (spec.far_noise) {
    AudioBuffer fn = fit_length(assets.far_noise, n);
    const double far_rms = rms_active(far_base);
    if (far_rms > 0.0)
      fn = match_active_rms(std::move(fn),
                            far_rms * db_to_lin(-spec.far_noise->snr_db));
    far_base.samples += fn.samples;
  }

  stems.echo = AudioBuffer::zeros(n);
  stems.far_ref = AudioBuffer::zeros(n);
  if (spec.ser_db) {
    AudioBuffer echo_in = far_base;
    scale_to_peak(echo_in, spec.input_gains_db[2]);
    const AudioBuffer path = fir_convolve(
        bandpass(delay(echo_in, spec.delay_ms), spec.bp_low_hz,
                 spec.bp_high_hz),
        ir);
    stems.echo =
        spectral_shape(path, Rng::split(spec.seed, kStreamShapeEcho));
    if (target_rms > 0.0)
      stems.echo = match_active_rms(std::move(stems.echo),
                                    target_rms * db_to_lin(-*spec.ser_db));

    stems.far_ref =
        spectral_shape(far_base, Rng::split(spec.seed, kStreamShapeFar));
    scale_to_peak(stems.far_ref, spec.input_gains_db[1]);
  } else {
    Rng floor_rng(Rng::split(spec.seed, kStreamFloor));
    if (floor_rng.bernoulli(0.5)) {
      AudioBuffer wn = AudioBuffer::zeros(n);
      for (Eigen::Index i = 0; i < n; ++i)
        wn.samples[i] = floor_rng.uniform(-1.0, 1.0);
      wn = spectral_shape(wn, Rng::split(spec.seed, kStreamShapeFloor));
      const double r = rms(wn);
      if (r > 0.0)
        wn.samples *= db_to_lin(spec.far_silence_floor_db) / r;
      stems.far_ref = std::move(wn);
    }
  }

  // Clip guard: rescale the near-end group jointly, then restore the drawn
  // ratios at the new absolute level (rescaling moves samples across the
  // activity threshold, which would otherwise skew the measured SER/SNR).
  // The target only ever shrinks, so the loop settles.
  for (int pass = 0; pass < 6; ++pass) {
    const double pk = peak(AudioBuffer(stems.target.samples +
                                       stems.noise.samples +
                                       stems.echo.samples));
    if (pk <= 1.0) break;
    const double g = 1.0 / pk;
    stems.target.samples *= g;
    stems.noise.samples *= g;
    stems.echo.samples *= g;
    const double level = rms_active(stems.target);
    if (level > 0.0) {
      if (spec.near_noise)
        stems.noise = match_active_rms(
            std::move(stems.noise), level * db_to_lin(-spec.near_noise->snr_db));
      if (spec.ser_db)
        stems.echo = match_active_rms(std::move(stems.echo),
                                      level * db_to_lin(-*spec.ser_db));
    }
  }
  stems.near_mic = AudioBuffer(stems.target.samples + stems.noise.samples +
                               stems.echo.samples);
  const double pk = peak(stems.near_mic);
  if (pk > 1.0) {
    const double g = 1.0 / pk;
    stems.target.samples *= g;
    stems.noise.samples *= g;
    stems.echo.samples *= g;
    stems.near_mic = AudioBuffer(stems.target.samples + stems.noise.samples +
                                 stems.echo.samples);
  }
  return stems;
}

ScenarioBundle synthesize(const ScenarioSpec& spec,
                          const ScenarioAssets& assets) {
  ScenarioStems stems = synthesize_stems(spec, assets);
  return {std::move(stems.near_mic), std::move(stems.far_ref),
          std::move(stems.target)};
}

ScenarioBundle synthesize(const ScenarioSpec& spec, const AssetPools& pools) {
  return synthesize(spec, select_assets(spec, pools));
}

std::string spec_to_json(const ScenarioSpec& spec) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["duration_s"] = spec.duration_s;
  j["delay_ms"] = spec.delay_ms;
  j["bp_low_hz"] = spec.bp_low_hz;
  j["bp_high_hz"] = spec.bp_high_hz;
  j["ir_gain_db"] = spec.ir_gain_db;
  j["far_noise"] = spec.far_noise
                       ? nlohmann::json{{"snr_db", spec.far_noise->snr_db}}
                       : nlohmann::json(nullptr);
  j["near_noise"] = spec.near_noise
                        ? nlohmann::json{{"snr_db", spec.near_noise->snr_db}}
                        : nlohmann::json(nullptr);
  j["ser_db"] =
      spec.ser_db ? nlohmann::json(*spec.ser_db) : nlohmann::json(nullptr);
  j["near_gap"] = spec.near_gap
                      ? nlohmann::json{{"start_s", spec.near_gap->start_s},
                                       {"len_s", spec.near_gap->len_s}}
                      : nlohmann::json(nullptr);
  j["input_gains_db"] = spec.input_gains_db;
  j["far_silence_floor_db"] = spec.far_silence_floor_db;
  return j.dump();
}

ScenarioSpec spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("scenario json: ") + e.what());
  }
  try {
    ScenarioSpec spec;
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.duration_s = j.at("duration_s").get<double>();
    spec.delay_ms = j.at("delay_ms").get<double>();
    spec.bp_low_hz = j.at("bp_low_hz").get<double>();
    spec.bp_high_hz = j.at("bp_high_hz").get<double>();
    spec.ir_gain_db = j.at("ir_gain_db").get<double>();
    if (!j.at("far_noise").is_null())
      spec.far_noise = NoiseSpec{j["far_noise"].at("snr_db").get<double>()};
    if (!j.at("near_noise").is_null())
      spec.near_noise = NoiseSpec{j["near_noise"].at("snr_db").get<double>()};
    if (!j.at("ser_db").is_null()) spec.ser_db = j["ser_db"].get<double>();
    if (!j.at("near_gap").is_null())
      spec.near_gap = GapSpec{j["near_gap"].at("start_s").get<double>(),
                              j["near_gap"].at("len_s").get<double>()};
    const auto gains = j.at("input_gains_db");
    for (std::size_t i = 0; i < 3; ++i)
      spec.input_gains_db[i] = gains.at(i).get<double>();
    spec.far_silence_floor_db = j.at("far_silence_floor_db").get<double>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("scenario json: ") + e.what());
  }
}

}  // namespace dtln
