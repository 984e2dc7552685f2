// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtln/audio.hpp"
#include "dtln/errors.hpp"
#include "dtln/metrics.hpp"
#include "dtln/model.hpp"
#include "dtln/nlms.hpp"
#include "dtln/rng.hpp"
#include "dtln/scenario.hpp"
#include "dtln/wav.hpp"
#include "dtln/weights.hpp"

namespace {

using namespace dtln;

constexpr FrameConfig kCfg{};

struct TimedRun {
  AudioBuffer out;
  RtfReport rtf;
};

// Hop loop that keeps the processed signal, unlike measure_rtf. The tail hop
// is zero-padded so the output length matches the input length.
TimedRun run_timed(const AudioBuffer& near, const AudioBuffer& far,
                   const HopProcessor& proc) {
  const Eigen::Index len = std::max(near.samples.size(), far.samples.size());
  const AudioBuffer near_p = fit_length(near, len);
  const AudioBuffer far_p = fit_length(far, len);

  TimedRun run;
  run.out = AudioBuffer::zeros(len);
  const Eigen::Index hops = (len + kCfg.shift - 1) / kCfg.shift;
  std::vector<double> times_ms;
  times_ms.reserve(static_cast<std::size_t>(hops));

  Eigen::VectorXf near_hop(kCfg.shift), far_hop(kCfg.shift);
  for (Eigen::Index k = 0; k < hops; ++k) {
    const Eigen::Index start = k * kCfg.shift;
    const Eigen::Index take = std::min<Eigen::Index>(kCfg.shift, len - start);
    near_hop.setZero();
    far_hop.setZero();
    near_hop.head(take) =
        near_p.samples.segment(start, take).cast<float>().matrix();
    far_hop.head(take) =
        far_p.samples.segment(start, take).cast<float>().matrix();
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::VectorXf emitted = proc(near_hop, far_hop);
    const auto t1 = std::chrono::steady_clock::now();
    times_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
    run.out.samples.segment(start, take) =
        emitted.head(take).array().cast<double>();
  }
  run.rtf = summarize_times_ms(times_ms);
  return run;
}

void print_rtf(const RtfReport& r) {
  std::printf("frames=%zu\nmean_ms=%.3f\np99_ms=%.3f\nrtf_mean=%.4f\nrtf_p99=%.4f\n",
              r.frames, r.mean_ms, r.p99_ms, r.rtf_mean, r.rtf_p99);
}

int run_process(const std::string& near_path, const std::string& far_path,
                const std::string& weights_path, const std::string& out_path,
                const std::string& engine) {
  const AudioBuffer near = read_wav(near_path);
  const AudioBuffer far = read_wav(far_path);

  TimedRun run;
  if (engine == "dtln") {
    const ModelWeights w = load_weights(weights_path);
    const AecEngine eng(w);
    StreamingState state = eng.make_state();
    run = run_timed(near, far,
                    [&](const Eigen::VectorXf& nh, const Eigen::VectorXf& fh) {
                      return eng.process_frame_pair(nh, fh, state);
                    });
  } else {
    const NlmsConfig cfg;
    NlmsState state = NlmsState::zeros(cfg.taps);
    run = run_timed(near, far,
                    [&](const Eigen::VectorXf& nh, const Eigen::VectorXf& fh) {
                      Eigen::VectorXf out(nh.size());
                      for (Eigen::Index i = 0; i < nh.size(); ++i)
                        out[i] = static_cast<float>(
                            nlms_step(nh[i], fh[i], cfg, state));
                      return out;
                    });
  }
  write_wav(out_path, run.out);
  std::printf("wrote %s\n", out_path.c_str());
  print_rtf(run.rtf);
  return 0;
}

int run_synth(const std::string& manifest_path, int count, std::uint64_t seed,
              const std::string& out_dir) {
  const AssetPools pools = load_manifest(manifest_path);
  if (pools.speech.empty() || pools.noise.empty() || pools.ir.empty())
    throw EmptyAssetPool("manifest lists no usable assets: " + manifest_path);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::ofstream jsonl(dir / "scenarios.jsonl");
  if (!jsonl) throw IoFailure("cannot write scenarios.jsonl in " + out_dir);

  for (int i = 0; i < count; ++i) {
    const ScenarioSpec spec = draw_spec(seed + static_cast<std::uint64_t>(i),
                                        pools);
    const ScenarioBundle bundle = synthesize(spec, pools);
    char base[32];
    std::snprintf(base, sizeof(base), "scenario_%05d", i);
    write_wav((dir / (std::string(base) + ".mic.wav")).string(),
              bundle.near_mic);
    write_wav((dir / (std::string(base) + ".lpb.wav")).string(),
              bundle.far_ref);
    write_wav((dir / (std::string(base) + ".target.wav")).string(),
              bundle.target);
    jsonl << spec_to_json(spec) << "\n";
  }
  jsonl.close();
  if (!jsonl) throw IoFailure("write failed for scenarios.jsonl");
  std::printf("wrote %d scenarios to %s\n", count, out_dir.c_str());
  return 0;
}

int run_eval(const std::string& processed_path, const std::string& target_path,
             const std::string& mic_path, const std::string& mask_path,
             bool as_json) {
  const AudioBuffer processed = read_wav(processed_path);
  const AudioBuffer target = read_wav(target_path);
  if (processed.samples.size() != target.samples.size())
    throw DataError("length mismatch: processed has " +
                    std::to_string(processed.samples.size()) +
                    " samples, target has " +
                    std::to_string(target.samples.size()));

  MetricReport report;
  report.si_sdr_db = si_sdr(target, processed);
  report.snr_loss = snr_loss(target, processed);

  if (!mic_path.empty()) {
    const AudioBuffer mic = read_wav(mic_path);
    if (mic.samples.size() != processed.samples.size())
      throw DataError("length mismatch: mic file");
    if (!mask_path.empty()) {
      const AudioBuffer mask_wav = read_wav(mask_path);
      if (mask_wav.samples.size() != processed.samples.size())
        throw DataError("length mismatch: mask file");
      Eigen::Array<bool, Eigen::Dynamic, 1> mask =
          mask_wav.samples != 0.0;
      report.erle_db = erle(mic, processed, mask);
    } else {
      report.erle_db = erle(mic, processed);
    }
  }
  if (as_json)
    std::printf("%s\n", to_json(report).c_str());
  else
    std::fputs(to_text(report).c_str(), stdout);
  return 0;
}

int run_bench(const std::string& weights_path, int units,
              std::uint64_t random_seed, bool have_random, double seconds,
              double budget_ms, bool as_json) {
  ModelWeights w = have_random ? random_init(units, random_seed)
                               : load_weights(weights_path);
  const AecEngine eng(w);
  StreamingState state = eng.make_state();

  const Eigen::Index n =
      static_cast<Eigen::Index>(seconds * kSampleRate);
  Rng rng(0x5eed);
  AudioBuffer near = AudioBuffer::zeros(n);
  AudioBuffer far = AudioBuffer::zeros(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    near.samples[i] = rng.uniform(-0.5, 0.5);
    far.samples[i] = rng.uniform(-0.5, 0.5);
  }

  const RtfReport r = measure_rtf(
      [&](const Eigen::VectorXf& nh, const Eigen::VectorXf& fh) {
        return eng.process_frame_pair(nh, fh, state);
      },
      near, far);

  if (as_json) {
    nlohmann::json j;
    j["units"] = w.units();
    j["frames"] = r.frames;
    j["mean_ms"] = r.mean_ms;
    j["p99_ms"] = r.p99_ms;
    j["rtf_mean"] = r.rtf_mean;
    j["rtf_p99"] = r.rtf_p99;
    j["budget_ms"] = budget_ms;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("units=%d\n", w.units());
    print_rtf(r);
  }
  return r.mean_ms >= budget_ms ? 3 : 0;
}

int run_inspect(const std::string& weights_path) {
  const ModelWeights w = load_weights(weights_path);
  std::size_t total = 0;
  std::printf("%-24s %-16s %12s\n", "tensor", "shape", "params");
  for (const auto& t : w.tensors()) {
    std::string shape;
    for (std::size_t i = 0; i < t.shape.size(); ++i) {
      if (i) shape += "x";
      shape += std::to_string(t.shape[i]);
    }
    std::printf("%-24s %-16s %12zu\n", t.name.c_str(), shape.c_str(),
                t.element_count());
    total += t.element_count();
  }
  std::printf("units=%d\ntotal_params=%zu\n", w.units(), total);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DTLN-aec: real-time acoustic echo cancellation toolkit"};
  app.require_subcommand(1);

  auto* process = app.add_subcommand(
      "process", "Run echo cancellation over a WAV pair");
  std::string near_path, far_path, weights_path, out_path;
  std::string engine = "dtln";
  process->add_option("--near", near_path, "Near-end microphone WAV")
      ->required();
  process->add_option("--far", far_path, "Far-end reference WAV")->required();
  process->add_option("--weights", weights_path, "Weights container");
  process->add_option("--out", out_path, "Output WAV path")->required();
  process->add_option("--engine", engine, "Processing engine")
      ->check(CLI::IsMember({"dtln", "nlms"}));

  auto* synth = app.add_subcommand(
      "synth", "Synthesize echo scenarios from an asset manifest");
  std::string manifest_path, synth_out;
  int synth_count = 1;
  std::uint64_t synth_seed = 0;
  synth->add_option("--manifest", manifest_path, "Asset manifest file")
      ->required();
  synth->add_option("--count", synth_count, "Number of scenarios")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_seed, "Base seed");
  synth->add_option("--out", synth_out, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a processed file");
  std::string eval_processed, eval_target, eval_mic, eval_mask;
  bool eval_json = false;
  eval->add_option("--processed", eval_processed, "Processed WAV")->required();
  eval->add_option("--target", eval_target, "Clean target WAV")->required();
  eval->add_option("--mic", eval_mic, "Unprocessed microphone WAV (enables ERLE)");
  eval->add_option("--mask", eval_mask,
                   "Activity mask WAV (nonzero samples are evaluated)");
  eval->add_flag("--json", eval_json, "Emit JSON instead of key=value text");

  auto* bench = app.add_subcommand("bench", "Measure per-frame execution time");
  std::string bench_weights;
  int bench_units = 512;
  std::uint64_t bench_seed = 0;
  double bench_seconds = 10.0;
  double budget_ms = 8.0;
  bool bench_json = false;
  bench->add_option("--weights", bench_weights, "Weights container");
  bench->add_option("--units", bench_units, "Model width for random weights")
      ->check(CLI::IsMember({128, 256, 512}));
  auto* rnd = bench->add_option("--random-weights", bench_seed,
                                "Use random weights with this seed");
  bench->add_option("--seconds", bench_seconds, "Benchmark signal length")
      ->check(CLI::Range(1.0, 600.0));
  bench->add_option("--budget-ms", budget_ms)->group("");  // test hook
  bench->add_flag("--json", bench_json, "Emit JSON");

  auto* inspect = app.add_subcommand("inspect-weights",
                                     "Print the tensor table of a container");
  std::string inspect_path;
  inspect->add_option("--weights", inspect_path, "Weights container")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (process->parsed()) {
      if (engine == "dtln" && weights_path.empty()) {
        std::fprintf(stderr, "process: --weights is required with --engine dtln\n");
        return 1;
      }
      return run_process(near_path, far_path, weights_path, out_path, engine);
    }
    if (synth->parsed())
      return run_synth(manifest_path, synth_count, synth_seed, synth_out);
    if (eval->parsed())
      return run_eval(eval_processed, eval_target, eval_mic, eval_mask,
                      eval_json);
    if (bench->parsed()) {
      const bool have_random = rnd->count() > 0;
      if (have_random == !bench_weights.empty()) {
        std::fprintf(stderr,
                     "bench: give exactly one of --weights or --random-weights\n");
        return 1;
      }
      return run_bench(bench_weights, bench_units, bench_seed, have_random,
                       bench_seconds, budget_ms, bench_json);
    }
    if (inspect->parsed()) return run_inspect(inspect_path);
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 1;
}
