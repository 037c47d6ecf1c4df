#include "fpwm/serial.hpp"

#include "spectrum_detail.hpp"

#include <algorithm>

namespace fpwm::serial {

EncodedStream encode_stream(const Codec& codec, std::span<const std::uint8_t> bits, PolarityState initial) {
  const int n = codec.bits_per_frame();
  EncodedStream out;
  out.frames = frames_for_bits(codec, bits.size());
  Level level = initial.level;
  for (std::size_t f = 0; f < out.frames; ++f) {
    const auto frame = codec.encode_frame(chunk_value(bits, f * static_cast<std::size_t>(n), n));
    for (Symbol s : frame) {
      out.symbols.push_back(s);
      out.levels.push_back(level);
      if (s != 0) level = toggled(level);
    }
  }
  out.final_state.level = level;
  return out;
}

BitVector decode_stream(const Codec& codec, std::span<const Symbol> symbols, std::size_t bit_count) {
  const auto m = static_cast<std::size_t>(codec.params().m());
  const int n = codec.bits_per_frame();
  if (symbols.size() % m != 0)
    throw std::invalid_argument("symbol count " + std::to_string(symbols.size()) +
                                " is not a multiple of the frame length " + std::to_string(m));
  const auto frames = symbols.size() / m;
  if (bit_count > frames * static_cast<std::size_t>(n))
    throw std::invalid_argument("requested " + std::to_string(bit_count) + " bits but " +
                                std::to_string(frames) + " frames carry only " +
                                std::to_string(frames * static_cast<std::size_t>(n)));
  BitVector bits;
  bits.reserve(frames * static_cast<std::size_t>(n));
  std::vector<std::uint8_t> chunk(static_cast<std::size_t>(n));
  for (std::size_t f = 0; f < frames; ++f) {
    const auto frame = symbols.subspan(f * m, m);
    BigInt x;
    try {
      x = codec.decode_frame(frame);
    } catch (const FrameError& e) {
      throw FrameError("frame " + std::to_string(f) + ": " + validate_frame(codec.params(), frame).describe(), f,
                       e.digit_index());
    }
    if (x >= codec.payload_limit())
      throw FrameError("frame " + std::to_string(f) + ": non-payload codeword (rank " + x.str() + " >= 2^" +
                           std::to_string(n) + ")",
                       f, -1);
    write_chunk(x, n, chunk);
    bits.insert(bits.end(), chunk.begin(), chunk.end());
  }
  bits.resize(bit_count);
  return bits;
}

Waveform apply_filter(const Waveform& wave, std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) throw std::invalid_argument("filter must have an odd number of taps");
  Waveform out;
  out.samples_per_ui = wave.samples_per_ui;
  out.start_ui = wave.start_ui;
  const auto len = static_cast<std::ptrdiff_t>(wave.samples.size());
  const auto ntaps = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t delay = (ntaps - 1) / 2;
  for (std::ptrdiff_t k = 0; k < len; ++k) {
    double acc = 0;
    for (std::ptrdiff_t j = 0; j < ntaps; ++j)
      acc += taps[static_cast<std::size_t>(j)] *
             wave.samples[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k + delay - j, 0, len - 1))];
    out.samples.push_back(acc);
  }
  return out;
}

PsdEstimate estimate_psd(const Waveform& wave, std::size_t segment_length, WindowKind window) {
  const detail::WelchPlan plan(wave, segment_length, window);
  std::vector<double> summed(plan.bins, 0.0);
  std::vector<double> power(plan.bins);
  double* in = fftw_alloc_real(plan.length);
  fftw_complex* out = fftw_alloc_complex(plan.bins);
  for (std::size_t s = 0; s < plan.segments; ++s) {
    plan.periodogram(wave.samples.data() + s * plan.step, in, out, power.data());
    for (std::size_t k = 0; k < plan.bins; ++k) summed[k] += power[k];
  }
  fftw_free(in);
  fftw_free(out);
  return plan.finish(summed, wave.samples_per_ui, window);
}

}  // namespace fpwm::serial
