// Copyright 2026 dtln-aec project authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dtln/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "dtln/dsp.hpp"
#include "dtln/errors.hpp"

namespace dtln {
namespace {

constexpr double kCapDb = 100.0;

double clamp_db(double v) { return std::clamp(v, -kCapDb, kCapDb); }

void require_same_length(const AudioBuffer& a, const AudioBuffer& b) {
  if (a.samples.size() != b.samples.size() || a.samples.size() == 0)
    throw Error("metric inputs must be nonempty and equal length");
}

}  // namespace

double si_sdr(const AudioBuffer& target, const AudioBuffer& estimate) {
  require_same_length(target, estimate);
  const Eigen::ArrayXd& t = target.samples;
  const Eigen::ArrayXd& e = estimate.samples;
  const double t_energy = (t * t).sum();
  if (t_energy == 0.0) throw ZeroTarget("si_sdr: target is all zeros");

  const double alpha = (e * t).sum() / t_energy;
  const Eigen::ArrayXd scaled = alpha * t;
  const double signal = (scaled * scaled).sum();
  const double noise = ((scaled - e) * (scaled - e)).sum();
  // A zero projection means the estimate carries no target component at all
  // (an all-zero estimate lands here too), which is the worst case, so the
  // signal check must precede the noise check.
  if (signal == 0.0) return -kCapDb;
  if (noise == 0.0) return kCapDb;
  return clamp_db(10.0 * std::log10(signal / noise));
}

double snr_loss(const AudioBuffer& target, const AudioBuffer& estimate) {
  require_same_length(target, estimate);
  const Eigen::ArrayXd& t = target.samples;
  const Eigen::ArrayXd& e = estimate.samples;
  const double t_energy = (t * t).sum();
  if (t_energy == 0.0) throw ZeroTarget("snr_loss: target is all zeros");

  const double err_energy = ((t - e) * (t - e)).sum();
  if (err_energy == 0.0) return -kCapDb;
  // Written as log of the inverted ratio so a zero estimate yields +0.0,
  // not -0.0.
  return std::max(-kCapDb, 10.0 * std::log10(err_energy / t_energy));
}

double erle(const AudioBuffer& mic, const AudioBuffer& output) {
  require_same_length(mic, output);
  const double mic_energy = (mic.samples * mic.samples).sum();
  const double out_energy = (output.samples * output.samples).sum();
  if (out_energy == 0.0) return kCapDb;
  if (mic_energy == 0.0) return -kCapDb;
  return clamp_db(10.0 * std::log10(mic_energy / out_energy));
}

double erle(const AudioBuffer& mic, const AudioBuffer& output,
            const Eigen::Array<bool, Eigen::Dynamic, 1>& active_mask) {
  require_same_length(mic, output);
  if (active_mask.size() != mic.samples.size())
    throw Error("erle: mask length mismatch");
  if (!active_mask.any()) throw EmptyMask("erle: mask selects no samples");

  double mic_energy = 0.0, out_energy = 0.0;
  for (Eigen::Index i = 0; i < active_mask.size(); ++i) {
    if (!active_mask[i]) continue;
    mic_energy += mic.samples[i] * mic.samples[i];
    out_energy += output.samples[i] * output.samples[i];
  }
  if (out_energy == 0.0) return kCapDb;
  if (mic_energy == 0.0) return -kCapDb;
  return clamp_db(10.0 * std::log10(mic_energy / out_energy));
}

RtfReport measure_rtf(const HopProcessor& processor, const AudioBuffer& near,
                      const AudioBuffer& far) {
  constexpr FrameConfig cfg{};
  const Eigen::Index len =
      std::min(near.samples.size(), far.samples.size());
  const Eigen::Index hops = len / cfg.shift;
  std::vector<double> times_ms;
  times_ms.reserve(static_cast<std::size_t>(hops));

  Eigen::VectorXf near_hop(cfg.shift), far_hop(cfg.shift);
  for (Eigen::Index k = 0; k < hops; ++k) {
    near_hop = near.samples.segment(k * cfg.shift, cfg.shift)
                   .cast<float>().matrix();
    far_hop = far.samples.segment(k * cfg.shift, cfg.shift)
                  .cast<float>().matrix();
    const auto t0 = std::chrono::steady_clock::now();
    volatile float sink = processor(near_hop, far_hop).sum();
    (void)sink;
    const auto t1 = std::chrono::steady_clock::now();
    times_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return summarize_times_ms(times_ms);
}

RtfReport summarize_times_ms(const std::vector<double>& times_ms) {
  constexpr FrameConfig cfg{};
  constexpr double kBudgetMs = 1000.0 * cfg.shift / kSampleRate;  // 8 ms

  RtfReport r;
  r.frames = times_ms.size();
  if (times_ms.empty()) return r;
  double total = 0.0;
  for (double t : times_ms) total += t;
  r.mean_ms = total / static_cast<double>(times_ms.size());
  std::vector<double> sorted = times_ms;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t idx = static_cast<std::size_t>(
      std::ceil(0.99 * static_cast<double>(sorted.size()))) - 1;
  r.p99_ms = sorted[std::min(idx, sorted.size() - 1)];
  r.rtf_mean = r.mean_ms / kBudgetMs;
  r.rtf_p99 = r.p99_ms / kBudgetMs;
  return r;
}

std::string to_text(const MetricReport& r) {
  std::string out;
  const auto line = [&out](const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s=%.6f\n", key, v);
    out += buf;
  };
  line("si_sdr_db", r.si_sdr_db);
  line("snr_loss", r.snr_loss);
  if (r.erle_db) line("erle_db", *r.erle_db);
  if (r.rtf_mean) line("rtf_mean", *r.rtf_mean);
  if (r.rtf_p99) line("rtf_p99", *r.rtf_p99);
  return out;
}

std::string to_json(const MetricReport& r) {
  nlohmann::json j;
  j["si_sdr_db"] = r.si_sdr_db;
  j["snr_loss"] = r.snr_loss;
  if (r.erle_db) j["erle_db"] = *r.erle_db;
  if (r.rtf_mean) j["rtf_mean"] = *r.rtf_mean;
  if (r.rtf_p99) j["rtf_p99"] = *r.rtf_p99;
  return j.dump(2);
}

}  // namespace dtln
