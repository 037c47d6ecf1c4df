#include "fpwm/experiments.hpp"

#include <charconv>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fpwm {

namespace {

int parse_int(std::string_view text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return v;
}

std::string percent(const BigInt& part, const BigInt& whole) {
  // One decimal, rounded half up, computed exactly.
  const BigInt tenths = (part * 2000 + whole) / (whole * 2);
  std::ostringstream os;
  os << BigInt(tenths / 10).str() << '.' << BigInt(tenths % 10).str() << '%';
  return os.str();
}

}  // namespace

IntRange parse_range(std::string_view text) {
  const auto dots = text.find("..");
  IntRange r;
  if (dots == std::string_view::npos) {
    r.lo = r.hi = parse_int(text);
  } else {
    r.lo = parse_int(text.substr(0, dots));
    r.hi = parse_int(text.substr(dots + 2));
  }
  if (r.lo > r.hi) throw std::invalid_argument("empty range '" + std::string(text) + "'");
  return r;
}

std::vector<TableRow> sweep_tables(IntRange k, IntRange m, int max_k, int max_m) {
  if (k.lo < 1 || k.hi > max_k)
    throw CapExceeded("K range " + std::to_string(k.lo) + ".." + std::to_string(k.hi) + " exceeds the cap 1.." +
                      std::to_string(max_k));
  if (m.lo < 1 || m.hi > max_m)
    throw CapExceeded("m range " + std::to_string(m.lo) + ".." + std::to_string(m.hi) + " exceeds the cap 1.." +
                      std::to_string(max_m));
  std::vector<TableRow> rows;
  for (int kk = k.lo; kk <= k.hi; ++kk) {
    for (int mm = m.lo; mm <= m.hi; ++mm) {
      const FpwmParams p(kk, mm);
      rows.push_back({kk, mm, total_arrays(p), bits_per_frame(p), normalized_bitrate(p), lut_size_model(p)});
    }
  }
  return rows;
}

void write_tables_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "K,m,N,n,bitrate_bit_per_UI,lut_size_bits\n";
  for (const auto& r : rows) {
    out << r.k << ',' << r.m << ',' << r.total_arrays.str() << ',' << r.bits_per_frame << ',' << std::fixed
        << std::setprecision(6) << r.bitrate.value() << std::defaultfloat << ',' << r.lut_size_bits << '\n';
  }
}

StatsReport symbol_stats(const FpwmParams& params, std::uint64_t brute_force_cap) {
  StatsReport report;
  report.params = params;
  report.stats = symbol_occurrence_stats(params);
  if (report.stats.total_arrays <= brute_force_cap) report.brute_force = brute_force_occurrences(params, brute_force_cap);
  return report;
}

void write_stats(std::ostream& out, const StatsReport& r) {
  const auto slots = r.stats.total_slots();
  out << "K: " << r.params.k() << '\n'
      << "m: " << r.params.m() << '\n'
      << "N: " << r.stats.total_arrays.str() << '\n'
      << "bits_per_frame: " << r.stats.bits_per_frame << '\n'
      << "symbol_slots (m x N): " << slots.str() << '\n'
      << "S_0: " << r.s0().str() << " (" << percent(r.s0(), slots) << ")\n"
      << "S_1..S_K: " << r.edges().str() << " (" << percent(r.edges(), slots) << ")\n";
  for (std::size_t q = 0; q < r.stats.symbol_occurrences.size(); ++q)
    out << "count[S_" << q << "]: " << r.stats.symbol_occurrences[q].str() << '\n';
  if (r.brute_force) {
    out << "brute_force_S_0: " << r.brute_force->front().str() << '\n'
        << "brute_force_match: " << (r.brute_force_matches() ? "yes" : "NO") << '\n';
  } else {
    out << "brute_force_match: skipped (N above enumeration cap)\n";
  }
}

EncodedContainer encode_bytes(std::span<const std::uint8_t> bytes, const FpwmParams& params) {
  const Codec codec(params);
  const auto bits = bits_from_bytes(bytes);
  auto encoded = encode_stream(codec, bits);
  return {params, bits.size(), std::move(encoded.symbols)};
}

std::vector<std::uint8_t> decode_container(const EncodedContainer& container) {
  const Codec codec(container.params);
  const auto bits = decode_stream(codec, container.symbols, container.payload_bits);
  return bytes_from_bits(bits);
}

}  // namespace fpwm
