#include "fpwm/combinatorics.hpp"

#include <numeric>
#include <string>

namespace fpwm {

BigInt CountVector::total() const {
  BigInt sum = 0;
  for (const auto& c : counts) sum += c;
  return sum;
}

namespace {

CountVector base_vector(int k) {
  CountVector v;
  v.r = 1;
  v.counts.assign(static_cast<std::size_t>(k) + 1, BigInt(0));
  v.counts.front() = 1;
  v.counts.back() = 1;
  return v;
}

// v_{r+1,q} = sum_{h<=q} v_{r,h} for 0 < q, and the full sum for q = 0.
CountVector next_vector(const CountVector& prev) {
  CountVector next;
  next.r = prev.r + 1;
  next.counts.resize(prev.counts.size());
  BigInt running = 0;
  for (std::size_t q = 0; q < prev.counts.size(); ++q) {
    running += prev.counts[q];
    next.counts[q] = running;
  }
  next.counts.front() = running;
  return next;
}

}  // namespace

CountVector count_vector(const FpwmParams& params, int r) {
  if (r < 1 || r > params.m())
    throw std::invalid_argument("remaining length r must be in 1.." + std::to_string(params.m()) +
                                ", got " + std::to_string(r));
  CountVector v = base_vector(params.k());
  while (v.r < r) v = next_vector(v);
  return v;
}

std::vector<CountVector> count_vectors(const FpwmParams& params) {
  std::vector<CountVector> out;
  out.reserve(static_cast<std::size_t>(params.m()));
  out.push_back(base_vector(params.k()));
  while (out.back().r < params.m()) out.push_back(next_vector(out.back()));
  return out;
}

BigInt total_arrays(const FpwmParams& params) { return count_vector(params, params.m()).total(); }

int bits_per_frame(const FpwmParams& params) {
  // N >= 2 always (the all-S_0 and all-S_K frames), so msb is well defined.
  return static_cast<int>(boost::multiprecision::msb(total_arrays(params)));
}

Bitrate normalized_bitrate(const FpwmParams& params) {
  const std::int64_t n = bits_per_frame(params);
  const std::int64_t m = params.m();
  const std::int64_t g = std::gcd(n, m);
  return Bitrate{n / g, m / g};
}

std::int64_t lut_size_model(const FpwmParams& params) {
  const std::int64_t k = params.k();
  return (k + 1) * (bits_per_frame(params) + k) * params.m();
}

void for_each_valid_frame(const FpwmParams& params,
                          const std::function<void(std::span<const Symbol>)>& visit,
                          std::uint64_t cap) {
  const int k = params.k();
  const int m = params.m();
  SymbolFrame frame(static_cast<std::size_t>(m), 0);
  std::uint64_t produced = 0;

  // Iterative DFS: frame[0..depth) is fixed, frame[depth] is the candidate.
  int depth = 0;
  frame[0] = 0;
  while (depth >= 0) {
    const int q = frame[static_cast<std::size_t>(depth)];
    if (q > k) {
      if (--depth >= 0) ++frame[static_cast<std::size_t>(depth)];
      continue;
    }
    if (depth > 0 && !transition_allowed(k, frame[static_cast<std::size_t>(depth) - 1], q)) {
      ++frame[static_cast<std::size_t>(depth)];
      continue;
    }
    if (depth == m - 1) {
      if (terminal_allowed(k, q)) {
        if (++produced > cap)
          throw CapExceeded("frame enumeration exceeds the cap of " + std::to_string(cap) +
                            " frames");
        visit(frame);
      }
      ++frame[static_cast<std::size_t>(depth)];
      continue;
    }
    ++depth;
    frame[static_cast<std::size_t>(depth)] = 0;
  }
}

std::vector<SymbolFrame> enumerate_valid_frames(const FpwmParams& params, std::uint64_t cap) {
  std::vector<SymbolFrame> frames;
  for_each_valid_frame(
      params, [&](std::span<const Symbol> f) { frames.emplace_back(f.begin(), f.end()); }, cap);
  return frames;
}

BigInt SchemeStats::total_slots() const {
  BigInt sum = 0;
  for (const auto& c : symbol_occurrences) sum += c;
  return sum;
}

SchemeStats symbol_occurrence_stats(const FpwmParams& params) {
  const int k = params.k();
  const int m = params.m();
  const auto suffix = count_vectors(params);
  const auto width = static_cast<std::size_t>(k) + 1;

  SchemeStats stats;
  stats.total_arrays = suffix.back().total();
  stats.bits_per_frame = static_cast<int>(boost::multiprecision::msb(stats.total_arrays));
  stats.bitrate = normalized_bitrate(params);
  stats.lut_size_bits = lut_size_model(params);
  stats.symbol_occurrences.assign(width, BigInt(0));

  // prefix[q]: adjacency-valid sequences of length i+1 ending in S_q.
  std::vector<BigInt> prefix(width, BigInt(1));
  std::vector<BigInt> next(width);
  for (int i = 0; i < m; ++i) {
    if (i > 0) {
      // Sources p = 0 and p = K feed every q; a source 0 < p < K feeds q <= p.
      const BigInt open = prefix[0] + prefix[static_cast<std::size_t>(k)];
      BigInt restricted_tail = 0;  // sum of prefix[p] for q <= p < K
      for (int p = 1; p < k; ++p) restricted_tail += prefix[static_cast<std::size_t>(p)];
      for (int q = 0; q <= k; ++q) {
        next[static_cast<std::size_t>(q)] = open + restricted_tail;
        if (q >= 1 && q < k) restricted_tail -= prefix[static_cast<std::size_t>(q)];
      }
      // q = 0 sees every middle symbol; q = K sees none of them.
      next[static_cast<std::size_t>(k)] = open;
      prefix.swap(next);
    }
    const auto& tail = suffix[static_cast<std::size_t>(m - i - 1)].counts;
    for (std::size_t q = 0; q < width; ++q) stats.symbol_occurrences[q] += prefix[q] * tail[q];
  }
  return stats;
}

std::vector<BigInt> brute_force_occurrences(const FpwmParams& params, std::uint64_t cap) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(params.k()) + 1, 0);
  for_each_valid_frame(
      params,
      [&](std::span<const Symbol> f) {
        for (Symbol s : f) ++counts[s];
      },
      cap);
  return {counts.begin(), counts.end()};
}

}  // namespace fpwm
