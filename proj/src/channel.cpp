#include "fpwm/channel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace fpwm {

void validate_config(const WaveformConfig& config, int k) {
  const int s = config.samples_per_ui;
  if (s <= 0 || k < 1 || s % k != 0 || s < 2 * k)
    throw std::invalid_argument("samples per UI (" + std::to_string(s) +
                                ") must be a positive multiple of K=" + std::to_string(k) +
                                " and at least 2K");
  if (!(config.high_level > config.low_level))
    throw std::invalid_argument("high level must exceed low level");
  if (!(config.cutoff > 0) || !(config.transition_width > 0) ||
      !(config.cutoff + config.transition_width < 0.5 * s))
    throw std::invalid_argument("filter band edges must satisfy 0 < cutoff < cutoff + transition < S/2");
  if (config.filter_taps < 0 || (config.filter_taps > 0 && config.filter_taps % 2 == 0))
    throw std::invalid_argument("filter tap count must be odd (or 0 for automatic)");
}

Waveform synthesize(std::span<const Symbol> symbols, Level initial, int k,
                    const WaveformConfig& config, int lead_in_ui) {
  validate_config(config, k);
  if (lead_in_ui < 0) throw std::invalid_argument("lead-in must be nonnegative");
  const auto s = static_cast<std::size_t>(config.samples_per_ui);
  const auto lead = static_cast<std::size_t>(lead_in_ui) * s;
  Waveform wave;
  wave.samples_per_ui = config.samples_per_ui;
  wave.start_ui = -lead_in_ui;
  wave.samples.resize(lead + symbols.size() * s);
  std::fill_n(wave.samples.begin(), lead, config.level(initial));
  Level level = initial;
  for (std::size_t u = 0; u < symbols.size(); ++u) {
    const int q = symbols[u];
    if (q > k) throw std::invalid_argument("symbol " + std::to_string(q) + " exceeds K at UI " + std::to_string(u));
    auto* ui = wave.samples.data() + lead + u * s;
    if (q == 0) {
      std::fill(ui, ui + s, config.level(level));
      continue;
    }
    const auto edge = static_cast<std::size_t>(k - q) * s / static_cast<std::size_t>(k);
    std::fill(ui, ui + edge, config.level(level));
    level = toggled(level);
    std::fill(ui + edge, ui + s, config.level(level));
  }
  return wave;
}

Waveform synthesize_nrz(std::span<const std::uint8_t> bits, const WaveformConfig& config) {
  const auto s = static_cast<std::size_t>(config.samples_per_ui);
  if (s == 0) throw std::invalid_argument("samples per UI must be positive");
  Waveform wave;
  wave.samples_per_ui = config.samples_per_ui;
  wave.samples.resize(bits.size() * s);
  for (std::size_t u = 0; u < bits.size(); ++u)
    std::fill_n(wave.samples.data() + u * s, s, bits[u] ? config.high_level : config.low_level);
  return wave;
}

BitVector slice_nrz(const Waveform& wave, std::size_t bit_count, double threshold) {
  const auto s = static_cast<std::size_t>(wave.samples_per_ui);
  if (bit_count * s > wave.samples.size())
    throw std::invalid_argument("waveform shorter than " + std::to_string(bit_count) + " UI");
  BitVector bits(bit_count);
  for (std::size_t u = 0; u < bit_count; ++u) bits[u] = wave.samples[u * s + s / 2] >= threshold ? 1 : 0;
  return bits;
}

namespace {

double kaiser_beta(double attenuation_db) {
  if (attenuation_db > 50) return 0.1102 * (attenuation_db - 8.7);
  if (attenuation_db > 21)
    return 0.5842 * std::pow(attenuation_db - 21, 0.4) + 0.07886 * (attenuation_db - 21);
  return 0.0;
}

// Kaiser beta is chosen for this much more attenuation than required.
constexpr double kDesignMarginDb = 6.0;

std::vector<double> kaiser_sinc(const WaveformConfig& config, int taps) {
  const double fs = config.samples_per_ui;
  const double fc = (config.cutoff + 0.5 * config.transition_width) / fs;  // cycles/sample
  const double beta = kaiser_beta(config.stopband_attenuation_db + kDesignMarginDb);
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  const int half = (taps - 1) / 2;

  std::vector<double> h(static_cast<std::size_t>(taps));
  for (int i = 0; i <= half; ++i) {
    const double n = i - half;
    const double x = 2.0 * std::numbers::pi * fc * n;
    const double ideal = n == 0 ? 2.0 * fc : std::sin(x) / (std::numbers::pi * n);
    const double ratio = half == 0 ? 0.0 : n / half;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - ratio * ratio))) / i0_beta;
    h[static_cast<std::size_t>(i)] = ideal * w;
    h[static_cast<std::size_t>(taps - 1 - i)] = ideal * w;
  }
  double sum = 0;
  for (double c : h) sum += c;
  for (double& c : h) c /= sum;
  // Renormalising can break bitwise symmetry; restore it.
  for (int i = 0; i < half; ++i) h[static_cast<std::size_t>(taps - 1 - i)] = h[static_cast<std::size_t>(i)];
  return h;
}

bool meets_envelope(const std::vector<double>& taps, const WaveformConfig& config) {
  const auto r = measure_response(taps, config);
  return r.passband_deviation_db <= config.passband_ripple_db &&
         r.stopband_peak_db <= -config.stopband_attenuation_db;
}

}  // namespace

double magnitude_response(std::span<const double> taps, double cycles_per_sample) {
  double re = 0, im = 0;
  for (std::size_t n = 0; n < taps.size(); ++n) {
    const double ph = -2.0 * std::numbers::pi * cycles_per_sample * static_cast<double>(n);
    re += taps[n] * std::cos(ph);
    im += taps[n] * std::sin(ph);
  }
  return std::hypot(re, im);
}

FilterResponse measure_response(std::span<const double> taps, const WaveformConfig& config,
                                int grid_points) {
  const double fs = config.samples_per_ui;
  const double pass = config.cutoff / fs;
  const double stop = (config.cutoff + config.transition_width) / fs;
  FilterResponse r{0.0, -400.0};
  for (int g = 0; g < grid_points; ++g) {
    const double f = 0.5 * g / (grid_points - 1);
    const double db = 20.0 * std::log10(std::max(magnitude_response(taps, f), 1e-20));
    if (f <= pass) r.passband_deviation_db = std::max(r.passband_deviation_db, std::abs(db));
    if (f >= stop) r.stopband_peak_db = std::max(r.stopband_peak_db, db);
  }
  return r;
}

int minimum_lowpass_taps(const WaveformConfig& config) {
  // Generous ceiling: 20x the Kaiser length estimate.
  const double dw = 2.0 * std::numbers::pi * config.transition_width / config.samples_per_ui;
  const int estimate = static_cast<int>((config.stopband_attenuation_db + kDesignMarginDb - 7.95) / (2.285 * dw)) + 1;
  const int ceiling = 20 * estimate + 101;
  // Walk from the estimate to the pass/fail boundary.
  int taps = std::max(3, estimate | 1);
  if (meets_envelope(kaiser_sinc(config, taps), config)) {
    while (taps > 3 && meets_envelope(kaiser_sinc(config, taps - 2), config)) taps -= 2;
    return taps;
  }
  for (taps += 2; taps <= ceiling; taps += 2)
    if (meets_envelope(kaiser_sinc(config, taps), config)) return taps;
  throw std::invalid_argument("no filter length up to " + std::to_string(ceiling) +
                              " taps meets the low-pass envelope");
}

std::vector<double> design_lowpass(const WaveformConfig& config) {
  if (!(config.cutoff > 0) || !(config.transition_width > 0) ||
      !(config.cutoff + config.transition_width < 0.5 * config.samples_per_ui))
    throw std::invalid_argument("filter band edges must satisfy 0 < cutoff < cutoff + transition < S/2");
  if (config.filter_taps == 0) return kaiser_sinc(config, minimum_lowpass_taps(config));
  if (config.filter_taps < 1 || config.filter_taps % 2 == 0)
    throw std::invalid_argument("filter tap count must be odd");
  auto taps = kaiser_sinc(config, config.filter_taps);
  if (!meets_envelope(taps, config))
    throw std::invalid_argument(std::to_string(config.filter_taps) +
                                " taps cannot meet the low-pass envelope; use at least " +
                                std::to_string(minimum_lowpass_taps(config)) + " taps");
  return taps;
}

Waveform apply_filter(const Waveform& wave, std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0)
    throw std::invalid_argument("filter must have an odd number of taps");
  Waveform out;
  out.samples_per_ui = wave.samples_per_ui;
  out.start_ui = wave.start_ui;
  const auto len = static_cast<std::ptrdiff_t>(wave.samples.size());
  out.samples.resize(wave.samples.size());
  if (len == 0) return out;

  const auto ntaps = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t delay = (ntaps - 1) / 2;
  const double* x = wave.samples.data();
  const double* h = taps.data();
  double* y = out.samples.data();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < len; ++k) {
    const std::ptrdiff_t base = k + delay;
    double acc = 0;
    if (base - (ntaps - 1) >= 0 && base < len) {
      const double* xp = x + base;
      for (std::ptrdiff_t j = 0; j < ntaps; ++j) acc += h[j] * xp[-j];
    } else {
      for (std::ptrdiff_t j = 0; j < ntaps; ++j) acc += h[j] * x[std::clamp<std::ptrdiff_t>(base - j, 0, len - 1)];
    }
    y[k] = acc;
  }
  return out;
}

EdgeList detect_edges(const Waveform& wave, double threshold) {
  EdgeList out;
  const auto& v = wave.samples;
  if (v.empty()) return out;
  const double s = wave.samples_per_ui;

  std::vector<Edge> raw;
  bool high = v[0] >= threshold;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const bool now = v[i] >= threshold;
    if (now == high) continue;
    const double frac = (threshold - v[i - 1]) / (v[i] - v[i - 1]);
    const double crossing = static_cast<double>(i - 1) + frac;
    raw.push_back({static_cast<double>(wave.start_ui) + (crossing + 0.5) / s,
                   now ? EdgeDirection::Rising : EdgeDirection::Falling});
    high = now;
  }

  for (const Edge& e : raw) {
    if (!out.edges.empty() && e.time_ui - out.edges.back().time_ui < kDeglitchWindowUi) {
      out.edges.pop_back();
      out.glitches_removed += 2;
      continue;
    }
    out.edges.push_back(e);
  }
  for (std::size_t i = 1; i < out.edges.size(); ++i) {
    if (out.edges[i].direction == out.edges[i - 1].direction || !(out.edges[i].time_ui > out.edges[i - 1].time_ui))
      throw ChannelError("non-alternating edges near " + std::to_string(out.edges[i].time_ui) + " UI",
                         static_cast<std::int64_t>(std::floor(out.edges[i].time_ui)));
  }
  return out;
}

SymbolRecovery edges_to_symbols(const EdgeList& edges, std::size_t frame_count, const FpwmParams& params) {
  const std::int64_t k = params.k();
  const auto total_ui = static_cast<std::int64_t>(frame_count) * params.m();
  SymbolRecovery out;
  out.symbols.assign(static_cast<std::size_t>(total_ui), 0);
  for (const Edge& e : edges.edges) {
    const double x = e.time_ui * static_cast<double>(k);
    const auto g = static_cast<std::int64_t>(std::llround(x));
    const double displacement = std::abs(x - static_cast<double>(g));
    out.max_displacement = std::max(out.max_displacement, displacement);
    if (displacement > kDisplacementWarning) ++out.displacement_warnings;
    if (g < 0 || g >= total_ui * k)
      throw ChannelError("edge at " + std::to_string(e.time_ui) + " UI lies outside the " +
                             std::to_string(frame_count) + " received frames",
                         g < 0 ? -1 : g / k);
    const std::int64_t ui = g / k;
    const std::int64_t sub = g - ui * k;
    auto& slot = out.symbols[static_cast<std::size_t>(ui)];
    if (slot != 0) throw ChannelError("pulse-width violation: two edges in UI " + std::to_string(ui), ui);
    slot = static_cast<Symbol>(k - sub);
  }
  return out;
}

std::optional<double> min_pulse_width(const EdgeList& edges) {
  if (edges.edges.size() < 2) return std::nullopt;
  double best = edges.edges[1].time_ui - edges.edges[0].time_ui;
  for (std::size_t i = 2; i < edges.edges.size(); ++i)
    best = std::min(best, edges.edges[i].time_ui - edges.edges[i - 1].time_ui);
  return best;
}

namespace {

// Phase of sample i within the span, measured from UI 0 of the stream.
double folded_phase(const Waveform& wave, std::size_t index, int span_ui) {
  const std::int64_t period = static_cast<std::int64_t>(wave.samples_per_ui) * span_ui;
  const std::int64_t absolute = static_cast<std::int64_t>(index) + wave.start_ui * wave.samples_per_ui;
  const std::int64_t folded = ((absolute % period) + period) % period;
  return (static_cast<double>(folded) + 0.5) / wave.samples_per_ui;
}

}  // namespace

EyeHistogram eye_histogram(const Waveform& wave, int span_ui, int phase_bins, int amplitude_bins,
                           double amplitude_min, double amplitude_max) {
  if (span_ui < 1 || phase_bins < 1 || amplitude_bins < 1 || !(amplitude_max > amplitude_min))
    throw std::invalid_argument("eye histogram needs span >= 1, positive bin counts and a nonempty amplitude range");
  EyeHistogram eye;
  eye.span_ui = span_ui;
  eye.phase_bins = phase_bins;
  eye.amplitude_bins = amplitude_bins;
  for (int i = 0; i <= phase_bins; ++i) eye.phase_edges.push_back(static_cast<double>(span_ui) * i / phase_bins);
  for (int i = 0; i <= amplitude_bins; ++i)
    eye.amplitude_edges.push_back(amplitude_min + (amplitude_max - amplitude_min) * i / amplitude_bins);
  eye.counts.assign(static_cast<std::size_t>(phase_bins) * static_cast<std::size_t>(amplitude_bins), 0);

  for (std::size_t i = 0; i < wave.samples.size(); ++i) {
    const double phase = folded_phase(wave, i, span_ui);
    const int p = std::min(phase_bins - 1, static_cast<int>(phase / span_ui * phase_bins));
    const double a = (wave.samples[i] - amplitude_min) / (amplitude_max - amplitude_min);
    const int row = std::clamp(static_cast<int>(std::floor(a * amplitude_bins)), 0, amplitude_bins - 1);
    ++eye.counts[static_cast<std::size_t>(p) * static_cast<std::size_t>(amplitude_bins) + static_cast<std::size_t>(row)];
    ++eye.total;
  }
  return eye;
}

EyeWindowStats eye_window(const Waveform& wave, int span_ui, double from_ui, double to_ui,
                          double threshold, double mid_band) {
  EyeWindowStats stats;
  stats.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < wave.samples.size(); ++i) {
    const double phase = folded_phase(wave, i, span_ui);
    if (phase < from_ui || phase > to_ui) continue;
    const double d = std::abs(wave.samples[i] - threshold);
    ++stats.samples;
    if (d < mid_band) ++stats.mid_level_samples;
    stats.min_distance = std::min(stats.min_distance, d);
  }
  return stats;
}

Waveform add_noise(const Waveform& wave, double sigma, std::uint64_t seed) {
  if (sigma < 0) throw std::invalid_argument("noise sigma must be nonnegative");
  Waveform out = wave;
  if (sigma == 0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : out.samples) v += noise(rng);
  return out;
}

namespace {

constexpr std::array<char, 4> kWaveMagic{'F', 'P', 'W', 'V'};
constexpr std::uint8_t kWaveVersion = 0x01;

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("waveform file truncated");
    v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void write_waveform(std::ostream& out, const Waveform& wave) {
  out.write(kWaveMagic.data(), kWaveMagic.size());
  out.put(static_cast<char>(kWaveVersion));
  put_le(out, static_cast<std::uint32_t>(wave.samples_per_ui), 4);
  put_le(out, wave.samples.size(), 8);
  for (double v : wave.samples) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
}

Waveform read_waveform(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kWaveMagic) throw std::runtime_error("bad waveform magic (expected FPWV)");
  const auto version = get_le(in, 1);
  if (version != kWaveVersion) throw std::runtime_error("unsupported waveform version " + std::to_string(version));
  Waveform wave;
  wave.samples_per_ui = static_cast<int>(get_le(in, 4));
  const auto count = get_le(in, 8);
  wave.samples.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) wave.samples.push_back(std::bit_cast<double>(get_le(in, 8)));
  return wave;
}

void write_eye_csv(std::ostream& out, const EyeHistogram& eye) {
  out << "phase_UI,amplitude,count\n";
  for (int p = 0; p < eye.phase_bins; ++p) {
    const double phase = 0.5 * (eye.phase_edges[static_cast<std::size_t>(p)] + eye.phase_edges[static_cast<std::size_t>(p) + 1]);
    for (int a = 0; a < eye.amplitude_bins; ++a) {
      const double amp = 0.5 * (eye.amplitude_edges[static_cast<std::size_t>(a)] + eye.amplitude_edges[static_cast<std::size_t>(a) + 1]);
      out << phase << ',' << amp << ',' << eye.at(p, a) << '\n';
    }
  }
}

}  // namespace fpwm
