#include "fpwm/experiments.hpp"

#include <json.hpp>

#include <chrono>
#include <ostream>
#include <random>

namespace fpwm {

BitVector random_bits(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BitVector bits(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (63 - i % 64)) & 1u);
  }
  return bits;
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ChannelError& e) {
    throw SimulationError(std::string(name) + ": " + e.what() + " (UI " + std::to_string(e.ui_index()) + ")");
  } catch (const FrameError& e) {
    throw SimulationError(std::string(name) + ": " + e.what() + " (frame " + std::to_string(e.frame_index()) +
                          ", digit " + std::to_string(e.digit_index()) + ")");
  } catch (const std::exception& e) {
    throw SimulationError(std::string(name) + ": " + e.what());
  }
}

std::size_t count_errors(const BitVector& a, const BitVector& b) {
  std::size_t errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i) errors += a[i] != b[i];
  return errors;
}

// Independent stream for the NRZ reference payload.
// Idle UI before the first frame; a leading S_K edge sits at t = 0.
constexpr int kLeadInUi = 1;

constexpr std::uint64_t kNrzSeedSalt = 0x9E3779B97F4A7C15ull;

}  // namespace

int default_samples_per_ui(int k) { return ((kPreferredSamplesPerUi + k - 1) / k) * k; }

SimRun run_simulation(const SimConfig& requested) {
  const auto started = std::chrono::steady_clock::now();
  SimConfig config = requested;
  if (config.wave.samples_per_ui == 0 && config.k >= 1) config.wave.samples_per_ui = default_samples_per_ui(config.k);
  SimRun run;
  auto& rep = run.report;

  const FpwmParams params = stage("configure", [&] {
    const FpwmParams p(config.k, config.m);
    validate_config(config.wave, p.k());
    if (config.frames == 0) throw std::invalid_argument("frame count must be positive");
    return p;
  });
  const Codec codec(params);

  const auto n = static_cast<std::size_t>(codec.bits_per_frame());
  const auto total_ui = config.frames * static_cast<std::size_t>(params.m());
  run.bits = config.zero_bits ? BitVector(config.frames * n, 0) : random_bits(config.frames * n, config.seed);

  run.encoded = stage("encode", [&] { return encode_stream(codec, run.bits); });
  run.ideal = stage("synthesize", [&] { return synthesize(run.encoded.symbols, Level::Low, params.k(), config.wave, kLeadInUi); });
  run.taps = stage("design_lowpass", [&] { return design_lowpass(config.wave); });
  run.received = stage("filter", [&] { return apply_filter(run.ideal, run.taps); });
  run.received = stage("noise", [&] { return add_noise(run.received, config.sigma, config.seed); });

  run.ideal_edges = stage("detect_edges(ideal)", [&] { return detect_edges(run.ideal, config.wave.threshold()); });
  const auto edges = stage("detect_edges", [&] { return detect_edges(run.received, config.wave.threshold()); });
  const auto recovered = stage("edges_to_symbols", [&] { return edges_to_symbols(edges, config.frames, params); });
  const auto decoded = stage("decode", [&] { return decode_stream(codec, recovered.symbols, run.bits.size()); });

  // NRZ reference: one bit per UI over the same UI budget, same channel.
  const auto nrz_bits = random_bits(total_ui, config.seed ^ kNrzSeedSalt);
  const auto nrz_ideal = stage("nrz_synthesize", [&] { return synthesize_nrz(nrz_bits, config.wave); });
  run.nrz_received = stage("nrz_filter", [&] { return apply_filter(nrz_ideal, run.taps); });
  run.nrz_received = stage("nrz_noise", [&] { return add_noise(run.nrz_received, config.sigma, config.seed + 1); });
  const auto nrz_decoded = stage("nrz_slice", [&] { return slice_nrz(run.nrz_received, total_ui, config.wave.threshold()); });

  if (run.received.samples.size() >= config.psd_segment) {
    run.fpwm_psd = stage("psd", [&] { return estimate_psd(run.received, config.psd_segment); });
    run.nrz_psd = stage("nrz_psd", [&] { return estimate_psd(run.nrz_received, config.psd_segment); });
    rep.psd_dc_delta_db = run.fpwm_psd.band_mean_db(0.0, kDcBandHi) - run.nrz_psd.band_mean_db(0.0, kDcBandHi);
    rep.psd_mid_delta_db =
        run.fpwm_psd.band_mean_db(kMidBandLo, kMidBandHi) - run.nrz_psd.band_mean_db(kMidBandLo, kMidBandHi);
  }

  rep.k = params.k();
  rep.m = params.m();
  rep.samples_per_ui = config.wave.samples_per_ui;
  rep.cutoff = config.wave.cutoff;
  rep.taps = static_cast<int>(run.taps.size());
  rep.sigma = config.sigma;
  rep.seed = config.seed;
  rep.frames = config.frames;
  rep.bits_per_frame = static_cast<int>(n);
  rep.bits_sent = run.bits.size();
  rep.bit_errors = count_errors(run.bits, decoded);
  rep.ber = static_cast<double>(rep.bit_errors) / static_cast<double>(rep.bits_sent);
  rep.min_pulse_width_ui = min_pulse_width(run.ideal_edges);
  rep.edge_displacement_max = recovered.max_displacement;
  rep.displacement_warnings = recovered.displacement_warnings;
  rep.glitches_removed = edges.glitches_removed;
  rep.nrz_bits_sent = nrz_bits.size();
  rep.nrz_bit_errors = count_errors(nrz_bits, nrz_decoded);
  rep.bit_ratio = static_cast<double>(rep.bits_sent) / static_cast<double>(rep.nrz_bits_sent);
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return run;
}

void write_report(std::ostream& out, const SimReport& r) {
  nlohmann::ordered_json j;
  j["K"] = r.k;
  j["m"] = r.m;
  j["samples_per_ui"] = r.samples_per_ui;
  j["cutoff_F"] = r.cutoff;
  j["taps"] = r.taps;
  j["sigma"] = r.sigma;
  j["seed"] = r.seed;
  j["frames"] = r.frames;
  j["bits_per_frame"] = r.bits_per_frame;
  j["bits_sent"] = r.bits_sent;
  j["bit_errors"] = r.bit_errors;
  j["ber"] = r.ber;
  j["min_pulse_width_ui"] = r.min_pulse_width_ui ? nlohmann::ordered_json(*r.min_pulse_width_ui) : nullptr;
  j["edge_displacement_max"] = r.edge_displacement_max;
  j["displacement_warnings"] = r.displacement_warnings;
  j["glitches_removed"] = r.glitches_removed;
  j["nrz_bits_sent"] = r.nrz_bits_sent;
  j["nrz_bit_errors"] = r.nrz_bit_errors;
  j["bit_ratio"] = r.bit_ratio;
  j["psd_dc_band_delta_dB"] = r.psd_dc_delta_db;
  j["psd_mid_band_delta_dB"] = r.psd_mid_delta_db;
  out << j.dump(2) << '\n';
}

}  // namespace fpwm
