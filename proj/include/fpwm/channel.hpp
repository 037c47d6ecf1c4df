// Baseband transmit/receive chain: waveform synthesis, the band-limiting FIR
// channel, threshold-crossing edge detection, symbol recovery, pulse-width and
// eye measurements.
#pragma once

#include "fpwm/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fpwm {

/// Frequencies are in F, the baud rate (one period per UI).
struct WaveformConfig {
  int samples_per_ui = 16;
  double low_level = -1.0;
  double high_level = 1.0;
  /// Passband edge of the channel low-pass.
  double cutoff = 0.7;
  /// Stopband starts at cutoff + transition_width.
  double transition_width = 0.3;
  double passband_ripple_db = 0.5;
  double stopband_attenuation_db = 40.0;
  /// Odd FIR length; 0 picks the shortest length meeting the envelope.
  int filter_taps = 0;

  double threshold() const noexcept { return 0.5 * (low_level + high_level); }
  double swing() const noexcept { return high_level - low_level; }
  double level(Level l) const noexcept { return l == Level::High ? high_level : low_level; }
};

/// Throws std::invalid_argument unless S is a positive multiple of K with
/// S >= 2K and the filter band edges fit below S/2.
void validate_config(const WaveformConfig& config, int k);

struct Waveform {
  std::vector<double> samples;
  int samples_per_ui = 16;
  std::int64_t start_ui = 0;

  double duration_ui() const noexcept {
    return static_cast<double>(samples.size()) / samples_per_ui;
  }
};

class ChannelError : public std::runtime_error {
 public:
  ChannelError(const std::string& what, std::int64_t ui) : std::runtime_error(what), ui_(ui) {}
  std::int64_t ui_index() const noexcept { return ui_; }

 private:
  std::int64_t ui_;
};

/// Piecewise-constant FPWM waveform. S_q (q >= 1) flips the level at sample
/// (K - q) * S / K of its UI; S_0 holds the level. lead_in_ui idle UIs at the
/// initial level are prepended (start_ui = -lead_in_ui) so that an edge at the
/// very start of the first UI is observable.
Waveform synthesize(std::span<const Symbol> symbols, Level initial, int k,
                    const WaveformConfig& config, int lead_in_ui = 0);

/// One level per bit, high for 1.
Waveform synthesize_nrz(std::span<const std::uint8_t> bits, const WaveformConfig& config);

/// Decides each NRZ bit from the sample at the centre of its UI.
BitVector slice_nrz(const Waveform& wave, std::size_t bit_count, double threshold);

/// Linear-phase low-pass: Kaiser-windowed sinc centred in the transition band,
/// unity DC gain, exactly symmetric taps. Throws std::invalid_argument naming
/// the minimum length when config.filter_taps cannot meet the envelope.
std::vector<double> design_lowpass(const WaveformConfig& config);

/// Shortest odd length for which design_lowpass meets the envelope.
int minimum_lowpass_taps(const WaveformConfig& config);

/// |H(f)| with f in cycles per sample.
double magnitude_response(std::span<const double> taps, double cycles_per_sample);

struct FilterResponse {
  double passband_deviation_db = 0;  // worst |20 log10 |H|| over [0, cutoff]
  double stopband_peak_db = 0;       // worst 20 log10 |H| over [stop edge, S/2]
};

FilterResponse measure_response(std::span<const double> taps, const WaveformConfig& config,
                                int grid_points = 4096);

/// Convolution with the (odd-length) taps, delayed by (taps - 1) / 2 so UI k
/// of the output lines up with UI k of the input. The input is held at its
/// first and last sample beyond its ends; output length equals input length.
Waveform apply_filter(const Waveform& wave, std::span<const double> taps);

enum class EdgeDirection : std::uint8_t { Falling, Rising };

struct Edge {
  double time_ui = 0;
  EdgeDirection direction = EdgeDirection::Rising;
};

struct EdgeList {
  std::vector<Edge> edges;
  std::size_t glitches_removed = 0;
};

/// Crossing pairs closer than this are treated as ringing and dropped.
inline constexpr double kDeglitchWindowUi = 0.25;

/// Threshold crossings with linear interpolation between the bracketing
/// samples. Sample i is taken to represent time (i + 0.5) / S, so an ideal
/// step whose first new sample is j lands at exactly j / S.
EdgeList detect_edges(const Waveform& wave, double threshold);

inline constexpr double kDisplacementWarning = 0.3;

struct SymbolRecovery {
  std::vector<Symbol> symbols;
  /// Largest |T*K - round(T*K)| in phase steps.
  double max_displacement = 0;
  std::size_t displacement_warnings = 0;
};

/// Maps edge times onto the K-per-UI phase grid of a frame-aligned stream.
/// Throws ChannelError when two edges land in one UI or an edge falls outside
/// the frames.
SymbolRecovery edges_to_symbols(const EdgeList& edges, std::size_t frame_count,
                                const FpwmParams& params);

/// Smallest spacing between consecutive edges; empty with fewer than two.
std::optional<double> min_pulse_width(const EdgeList& edges);

/// Sample counts over (phase modulo span_ui, amplitude); row-major by phase.
struct EyeHistogram {
  int span_ui = 1;
  int phase_bins = 0;
  int amplitude_bins = 0;
  std::vector<double> phase_edges;      // UI
  std::vector<double> amplitude_edges;  // signal units
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t at(int phase, int amplitude) const {
    return counts[static_cast<std::size_t>(phase) * static_cast<std::size_t>(amplitude_bins) +
                  static_cast<std::size_t>(amplitude)];
  }
};

/// Samples outside [amplitude_min, amplitude_max] are clamped to the end rows.
EyeHistogram eye_histogram(const Waveform& wave, int span_ui, int phase_bins, int amplitude_bins,
                           double amplitude_min, double amplitude_max);

struct EyeWindowStats {
  std::size_t samples = 0;
  std::size_t mid_level_samples = 0;
  double min_distance = 0;  // smallest |v - threshold| in the window
};

/// Looks at samples whose folded phase lies in [from_ui, to_ui] and counts
/// those within mid_band of the threshold.
EyeWindowStats eye_window(const Waveform& wave, int span_ui, double from_ui, double to_ui,
                          double threshold, double mid_band);

/// Adds seeded N(0, sigma^2) noise; sigma == 0 returns the input unchanged.
Waveform add_noise(const Waveform& wave, double sigma, std::uint64_t seed);

/// Waveform file: "FPWV", version 0x01, S (u32 LE), sample count (u64 LE),
/// samples as IEEE-754 binary64 LE.
void write_waveform(std::ostream& out, const Waveform& wave);
Waveform read_waveform(std::istream& in);

void write_eye_csv(std::ostream& out, const EyeHistogram& eye);

}  // namespace fpwm
