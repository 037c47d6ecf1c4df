#include "fpwm/codec.hpp"

#include <algorithm>
#include <cassert>
#include <optional>

namespace fpwm {

std::string FrameVerdict::describe() const {
  switch (kind) {
    case Kind::Valid: return "valid";
    case Kind::WrongLength: return "frame length does not match m";
    case Kind::SymbolOutOfRange: return "symbol out of range at digit " + std::to_string(position);
    case Kind::ForbiddenTransition:
      return "forbidden transition into digit " + std::to_string(position);
    case Kind::BadTerminal:
      return "last symbol must be S_0 or S_K (digit " + std::to_string(position) + ")";
  }
  return "unknown";
}

FrameVerdict validate_frame(const FpwmParams& params, std::span<const Symbol> frame) {
  using Kind = FrameVerdict::Kind;
  const int k = params.k();
  if (frame.size() != static_cast<std::size_t>(params.m())) return {Kind::WrongLength, -1};
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const auto pos = static_cast<std::ptrdiff_t>(i);
    if (frame[i] > k) return {Kind::SymbolOutOfRange, pos};
    if (i > 0 && !transition_allowed(k, frame[i - 1], frame[i])) return {Kind::ForbiddenTransition, pos};
  }
  if (!terminal_allowed(k, frame.back()))
    return {Kind::BadTerminal, static_cast<std::ptrdiff_t>(frame.size()) - 1};
  return {};
}

Codec::Codec(const FpwmParams& params) : params_(params) {
  const auto vectors = count_vectors(params);
  stages_.reserve(vectors.size());
  for (auto it = vectors.rbegin(); it != vectors.rend(); ++it) {
    StageTable stage;
    stage.length = it->r;
    stage.cum.reserve(it->counts.size() + 1);
    stage.cum.emplace_back(0);
    for (const auto& v : it->counts) stage.cum.push_back(stage.cum.back() + v);
    stages_.push_back(std::move(stage));
  }
  bits_ = static_cast<int>(boost::multiprecision::msb(total_arrays()));
  payload_limit_ = BigInt(1) << bits_;
}

void Codec::unrank(BigInt residual, std::span<Symbol> out) const {
  const int k = params_.k();
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    const auto& cum = stages_[i].cum;
    // Largest q with cum[q] <= residual; empty slots (cum[q] == cum[q+1]) are
    // skipped because the scan keeps the last threshold not above residual.
    int q = 0;
    while (q < k && cum[static_cast<std::size_t>(q) + 1] <= residual) ++q;
    residual -= cum[static_cast<std::size_t>(q)];
    assert(residual < cum[static_cast<std::size_t>(q) + 1] - cum[static_cast<std::size_t>(q)]);
    out[i] = static_cast<Symbol>(q);
  }
  assert(residual == 0);
}

void Codec::encode_frame_into(const BigInt& x, std::span<Symbol> out) const {
  if (x < 0 || x >= total_arrays())
    throw std::out_of_range("frame rank " + x.str() + " outside [0, N) with N = " +
                            total_arrays().str() + " (payload ranks stop at 2^" +
                            std::to_string(bits_) + " = " + payload_limit_.str() + ")");
  if (out.size() != stages_.size())
    throw std::invalid_argument("output span must hold exactly m symbols");
  unrank(x, out);
}

SymbolFrame Codec::encode_frame(const BigInt& x) const {
  SymbolFrame frame(stages_.size());
  encode_frame_into(x, frame);
  return frame;
}

BigInt Codec::decode_frame(std::span<const Symbol> frame) const {
  const auto verdict = validate_frame(params_, frame);
  if (!verdict.ok()) throw FrameError("invalid frame: " + verdict.describe(), 0, verdict.position);
  BigInt x = 0;
  for (std::size_t i = 0; i < frame.size(); ++i) x += stages_[i].cum[frame[i]];
  return x;
}

std::size_t frames_for_bits(const Codec& codec, std::size_t bit_count) noexcept {
  const auto n = static_cast<std::size_t>(codec.bits_per_frame());
  return (bit_count + n - 1) / n;
}

BigInt chunk_value(std::span<const std::uint8_t> bits, std::size_t offset, int n) {
  const auto end = offset + static_cast<std::size_t>(n);
  if (n <= 64) {
    std::uint64_t v = 0;
    for (std::size_t i = offset; i < end; ++i) v = (v << 1) | (i < bits.size() ? (bits[i] & 1u) : 0u);
    return BigInt(v);
  }
  BigInt v = 0;
  for (std::size_t i = offset; i < end; ++i) {
    v <<= 1;
    if (i < bits.size() && bits[i]) v |= 1;
  }
  return v;
}

void write_chunk(const BigInt& value, int n, std::span<std::uint8_t> out) {
  if (n <= 64) {
    const auto v = static_cast<std::uint64_t>(value);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((v >> (n - 1 - i)) & 1u);
    return;
  }
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = boost::multiprecision::bit_test(value, static_cast<unsigned>(n - 1 - i)) ? 1 : 0;
}

std::size_t count_edges(std::span<const Symbol> symbols) noexcept {
  return static_cast<std::size_t>(
      std::count_if(symbols.begin(), symbols.end(), [](Symbol s) { return s != 0; }));
}

EncodedStream encode_stream(const Codec& codec, std::span<const std::uint8_t> bits,
                            PolarityState initial) {
  const auto m = static_cast<std::size_t>(codec.params().m());
  const int n = codec.bits_per_frame();
  const auto frames = frames_for_bits(codec, bits.size());

  EncodedStream out;
  out.frames = frames;
  out.symbols.resize(frames * m);
  out.levels.resize(frames * m);
  std::vector<std::uint8_t> parity(frames);

  const auto count = static_cast<std::ptrdiff_t>(frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < count; ++f) {
    const auto fi = static_cast<std::size_t>(f);
    std::span<Symbol> frame(out.symbols.data() + fi * m, m);
    codec.encode_frame_into(chunk_value(bits, fi * static_cast<std::size_t>(n), n), frame);
    parity[fi] = static_cast<std::uint8_t>(count_edges(frame) & 1u);
  }

  // Prefix parity fixes the level entering each frame.
  std::vector<Level> entry(frames);
  Level level = initial.level;
  for (std::size_t f = 0; f < frames; ++f) {
    entry[f] = level;
    if (parity[f]) level = toggled(level);
  }
  out.final_state.level = level;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < count; ++f) {
    const auto fi = static_cast<std::size_t>(f);
    Level l = entry[fi];
    for (std::size_t i = fi * m; i < (fi + 1) * m; ++i) {
      out.levels[i] = l;
      if (out.symbols[i] != 0) l = toggled(l);
    }
  }
  return out;
}

BitVector decode_stream(const Codec& codec, std::span<const Symbol> symbols, std::size_t bit_count) {
  const auto m = static_cast<std::size_t>(codec.params().m());
  const auto n = static_cast<std::size_t>(codec.bits_per_frame());
  if (symbols.size() % m != 0)
    throw std::invalid_argument("symbol count " + std::to_string(symbols.size()) +
                                " is not a multiple of the frame length " + std::to_string(m));
  const auto frames = symbols.size() / m;
  if (bit_count > frames * n)
    throw std::invalid_argument("requested " + std::to_string(bit_count) + " bits but " +
                                std::to_string(frames) + " frames carry only " +
                                std::to_string(frames * n));

  BitVector bits(frames * n);
  std::vector<std::optional<FrameError>> errors(frames);
  const auto count = static_cast<std::ptrdiff_t>(frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < count; ++f) {
    const auto fi = static_cast<std::size_t>(f);
    std::span<const Symbol> frame(symbols.data() + fi * m, m);
    const auto verdict = validate_frame(codec.params(), frame);
    if (!verdict.ok()) {
      errors[fi].emplace("frame " + std::to_string(fi) + ": " + verdict.describe(), fi, verdict.position);
      continue;
    }
    BigInt x = 0;
    for (std::size_t i = 0; i < m; ++i) x += codec.stages()[i].cum[frame[i]];
    if (x >= codec.payload_limit()) {
      errors[fi].emplace("frame " + std::to_string(fi) + ": non-payload codeword (rank " + x.str() +
                             " >= 2^" + std::to_string(n) + ")",
                         fi, -1);
      continue;
    }
    write_chunk(x, static_cast<int>(n), std::span<std::uint8_t>(bits.data() + fi * n, n));
  }
  for (auto& e : errors)
    if (e) throw *e;
  bits.resize(bit_count);
  return bits;
}

}  // namespace fpwm
