#include "cswv/coding.hpp"

#include "cswv/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace cswv {

std::int32_t max_code(int bits) {
    if (bits < kMinQuantBits || bits > kMaxQuantBits)
        throw RangeError("quantizer bits must lie in [4, 16], got " + std::to_string(bits));
    return (std::int32_t{1} << (bits - 1)) - 1;
}

double quantizer_step(float max_abs, int bits) {
    if (max_abs == 0.0f) return 1.0;
    return double(max_abs) / double(max_code(bits));
}

Quantized quantize(std::span<const double> values, int bits) {
    const std::int32_t top = max_code(bits);
    double peak = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw NumericError("cannot quantize a non-finite value");
        peak = std::max(peak, std::fabs(v));
    }
    float stored = static_cast<float>(peak);
    if (static_cast<double>(stored) < peak)
        stored = std::nextafter(stored, std::numeric_limits<float>::infinity());

    Quantized q;
    q.bits = bits;
    q.max_abs = stored;
    q.codes.resize(values.size(), 0);
    if (stored == 0.0f) return q;
    const double scale = double(top) / double(stored);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const long c = std::lround(values[i] * scale);
        q.codes[i] = static_cast<std::int32_t>(std::clamp<long>(c, -top, top));
    }
    return q;
}

std::vector<double> dequantize(std::span<const std::int32_t> codes, float max_abs, int bits) {
    const double step = quantizer_step(max_abs, bits);
    std::vector<double> out(codes.size());
    if (max_abs == 0.0f) return out;
    for (std::size_t i = 0; i < codes.size(); ++i) out[i] = double(codes[i]) * step;
    return out;
}

std::uint32_t zigzag(std::int32_t c) {
    return c >= 0 ? static_cast<std::uint32_t>(c) * 2u
                  : static_cast<std::uint32_t>(-(static_cast<std::int64_t>(c))) * 2u - 1u;
}

std::int32_t unzigzag(std::uint32_t u) {
    return (u & 1u) ? -static_cast<std::int32_t>((u >> 1) + 1) : static_cast<std::int32_t>(u >> 1);
}

void put_rice(BitWriter& out, std::uint32_t u, int r) {
    out.put_unary(u >> r);
    out.put_bits(u, r);
}

std::uint32_t get_rice(BitReader& in, int r) {
    const std::uint64_t q = in.get_unary(std::numeric_limits<std::uint32_t>::max() >> r);
    const std::uint64_t rem = in.get_bits(r);
    return static_cast<std::uint32_t>((q << r) | rem);
}

std::size_t rice_length(std::uint32_t u, int r) {
    return static_cast<std::size_t>(u >> r) + 1 + static_cast<std::size_t>(r);
}

namespace {

int bound_width(std::uint32_t bound) {
    if (bound == 0) throw RangeError("truncated binary bound must be positive");
    return std::bit_width(bound - 1);
}

} // namespace

void put_truncated_binary(BitWriter& out, std::uint32_t u, std::uint32_t bound) {
    if (u >= bound)
        throw RangeError("symbol " + std::to_string(u) + " outside bound " + std::to_string(bound));
    const int b = bound_width(bound);
    const std::uint64_t t = (std::uint64_t{1} << b) - bound;
    if (u < t)
        out.put_bits(u, b - 1);
    else
        out.put_bits(u + t, b);
}

std::uint32_t get_truncated_binary(BitReader& in, std::uint32_t bound) {
    const int b = bound_width(bound);
    if (b == 0) return 0;
    const std::uint64_t t = (std::uint64_t{1} << b) - bound;
    std::uint64_t v = in.get_bits(b - 1);
    if (v < t) return static_cast<std::uint32_t>(v);
    v = (v << 1) | (in.get_bit() ? 1u : 0u);
    return static_cast<std::uint32_t>(v - t);
}

std::size_t truncated_binary_length(std::uint32_t u, std::uint32_t bound) {
    const int b = bound_width(bound);
    const std::uint64_t t = (std::uint64_t{1} << b) - bound;
    return u < t ? static_cast<std::size_t>(b - 1) : static_cast<std::size_t>(b);
}

BitString grc_encode(std::span<const std::int32_t> codes, int r) {
    if (r < 0 || r > 31) throw RangeError("rice parameter out of range");
    BitWriter w;
    for (auto c : codes) put_rice(w, zigzag(c), r);
    return w.take();
}

std::vector<std::int32_t> grc_decode(const BitString& bits, int r, std::size_t count) {
    if (r < 0 || r > 31) throw RangeError("rice parameter out of range");
    BitReader in(bits);
    std::vector<std::int32_t> out(count);
    for (auto& c : out) c = unzigzag(get_rice(in, r));
    return out;
}

BitString abc_encode(std::span<const std::int32_t> codes, std::uint32_t bound) {
    BitWriter w;
    for (auto c : codes) put_truncated_binary(w, zigzag(c), bound);
    return w.take();
}

std::vector<std::int32_t> abc_decode(const BitString& bits, std::uint32_t bound,
                                     std::size_t count) {
    BitReader in(bits);
    std::vector<std::int32_t> out(count);
    for (auto& c : out) c = unzigzag(get_truncated_binary(in, bound));
    return out;
}

std::vector<RleToken> rle_zero(std::span<const std::int32_t> codes) {
    std::vector<RleToken> tokens;
    std::size_t i = 0;
    while (i < codes.size()) {
        if (codes[i] != 0) {
            tokens.push_back({RleToken::Kind::literal, codes[i], 0});
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < codes.size() && codes[end] == 0) ++end;
        const auto run = static_cast<std::uint32_t>(end - i);
        if (run >= kMinZeroRun)
            tokens.push_back({RleToken::Kind::zero_run, 0, run});
        else
            for (std::uint32_t k = 0; k < run; ++k) tokens.push_back({RleToken::Kind::literal, 0, 0});
        i = end;
    }
    return tokens;
}

std::vector<std::int32_t> unrle_zero(std::span<const RleToken> tokens) {
    std::vector<std::int32_t> codes;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        const auto& tok = tokens[t];
        if (tok.kind == RleToken::Kind::literal) {
            codes.push_back(tok.value);
        } else {
            if (tok.run < kMinZeroRun)
                throw BitstreamError("zero run of length " + std::to_string(tok.run) +
                                         " below the minimum of 4",
                                     t);
            codes.insert(codes.end(), tok.run, 0);
        }
    }
    return codes;
}

std::vector<std::uint32_t> token_symbols(std::span<const RleToken> tokens) {
    std::vector<std::uint32_t> symbols;
    symbols.reserve(tokens.size());
    for (const auto& tok : tokens) {
        if (tok.kind == RleToken::Kind::literal) {
            symbols.push_back(zigzag(tok.value) + 1);
        } else {
            symbols.push_back(0);
            symbols.push_back(tok.run - kMinZeroRun);
        }
    }
    return symbols;
}

void ContextModeler::observe(std::uint32_t u) {
    sum_ += u;
    max_ = std::max(max_, u);
    ++count_;
}

void ContextModeler::observe(std::span<const std::uint32_t> symbols) {
    for (auto u : symbols) observe(u);
}

int ContextModeler::rice_parameter() const {
    const double r = std::floor(std::log2(mean_magnitude() + 1.0));
    return std::clamp(static_cast<int>(r), 0, kMaxRiceParameter);
}

std::size_t grc_size(std::span<const std::uint32_t> symbols, int r) {
    std::size_t bits = 0;
    for (auto u : symbols) bits += rice_length(u, r);
    return bits;
}

std::size_t abc_size(std::span<const std::uint32_t> symbols, std::uint32_t bound) {
    std::size_t bits = 0;
    for (auto u : symbols) bits += truncated_binary_length(u, bound);
    return bits;
}

ModeChoice select_mode(std::span<const std::uint32_t> symbols) {
    ContextModeler stats;
    stats.observe(symbols);

    // Start from the modeler's estimate so ties keep its parameter.
    ModeChoice best;
    best.mode = EntropyMode::grc;
    best.parameter = static_cast<std::uint32_t>(stats.rice_parameter());
    best.coded_bits = grc_size(symbols, stats.rice_parameter());
    for (int r = 0; r <= kMaxRiceParameter; ++r) {
        const std::size_t size = grc_size(symbols, r);
        if (size < best.coded_bits) {
            best.parameter = static_cast<std::uint32_t>(r);
            best.coded_bits = size;
        }
    }

    if (stats.max_symbol() < std::numeric_limits<std::uint32_t>::max()) {
        const std::uint32_t bound = stats.max_symbol() + 1;
        const std::size_t size =
            abc_size(symbols, bound) + static_cast<std::size_t>(bound_width(bound));
        if (size < best.coded_bits) best = {EntropyMode::abc, bound, size};
    }
    return best;
}

namespace {

std::size_t varint_bits(std::uint32_t v) {
    std::size_t groups = 1;
    while (v >>= 7) ++groups;
    return groups * 8;
}

void put_symbols(BitWriter& w, std::span<const std::uint32_t> symbols, EntropyMode mode,
                 std::uint32_t parameter) {
    for (auto u : symbols) {
        if (mode == EntropyMode::grc)
            put_rice(w, u, static_cast<int>(parameter));
        else
            put_truncated_binary(w, u, parameter);
    }
}

std::uint32_t get_symbol(BitReader& in, EntropyMode mode, std::uint32_t parameter) {
    return mode == EntropyMode::grc ? get_rice(in, static_cast<int>(parameter))
                                    : get_truncated_binary(in, parameter);
}

// Reads symbols until `count` codes are produced.
std::vector<std::int32_t> read_codes(BitReader& in, EntropyMode mode, std::uint32_t parameter,
                                     bool rle, std::uint32_t count) {
    std::vector<std::int32_t> codes;
    codes.reserve(count);
    while (codes.size() < count) {
        const std::size_t at = in.position();
        const std::uint32_t s = get_symbol(in, mode, parameter);
        if (!rle) {
            codes.push_back(unzigzag(s));
            continue;
        }
        if (s > 0) {
            codes.push_back(unzigzag(s - 1));
            continue;
        }
        const std::uint64_t run = std::uint64_t{get_symbol(in, mode, parameter)} + kMinZeroRun;
        if (codes.size() + run > count)
            throw BitstreamError("zero run overruns the chunk sample count", at);
        codes.insert(codes.end(), static_cast<std::size_t>(run), 0);
    }
    return codes;
}

} // namespace

std::size_t CodedChunk::header_bits() const {
    std::size_t bits = 1 + 1 + 5 + 4 + 32 + varint_bits(sample_count);
    if (mode == EntropyMode::abc) bits += static_cast<std::size_t>(bound_width(parameter));
    return bits;
}

CodedChunk encode_chunk(std::span<const double> values, int bits) {
    const Quantized q = quantize(values, bits);

    std::vector<std::uint32_t> plain(q.codes.size());
    std::transform(q.codes.begin(), q.codes.end(), plain.begin(), zigzag);
    const std::vector<std::uint32_t> with_rle = token_symbols(rle_zero(q.codes));

    const ModeChoice plain_choice = select_mode(plain);
    const ModeChoice rle_choice = select_mode(with_rle);
    const bool use_rle = rle_choice.coded_bits < plain_choice.coded_bits;
    const ModeChoice& choice = use_rle ? rle_choice : plain_choice;

    CodedChunk chunk;
    chunk.mode = choice.mode;
    chunk.run_length_layer = use_rle;
    chunk.parameter = choice.parameter;
    chunk.bits = bits;
    chunk.max_abs = q.max_abs;
    if (values.size() > std::numeric_limits<std::uint32_t>::max())
        throw RangeError("chunk too large");
    chunk.sample_count = static_cast<std::uint32_t>(values.size());

    BitWriter w;
    put_symbols(w, use_rle ? with_rle : plain, choice.mode, choice.parameter);
    chunk.payload = w.take();
    return chunk;
}

std::vector<std::int32_t> decode_chunk_codes(const CodedChunk& chunk) {
    BitReader in(chunk.payload);
    auto codes = read_codes(in, chunk.mode, chunk.parameter, chunk.run_length_layer,
                            chunk.sample_count);
    if (in.remaining() != 0)
        throw BitstreamError("trailing bits after chunk payload", in.position());
    return codes;
}

std::vector<double> decode_chunk(const CodedChunk& chunk) {
    const auto codes = decode_chunk_codes(chunk);
    return dequantize(codes, chunk.max_abs, chunk.bits);
}

void write_chunk(BitWriter& out, const CodedChunk& chunk) {
    out.put_bit(chunk.mode == EntropyMode::abc);
    out.put_bit(chunk.run_length_layer);
    if (chunk.mode == EntropyMode::grc) {
        if (chunk.parameter > 31) throw RangeError("rice parameter does not fit 5 bits");
        out.put_bits(chunk.parameter, 5);
    } else {
        const int b = bound_width(chunk.parameter);
        out.put_bits(static_cast<std::uint64_t>(b), 5);
        out.put_bits(chunk.parameter - 1, b);
    }
    max_code(chunk.bits); // validates the range
    out.put_bits(static_cast<std::uint64_t>(chunk.bits - 1), 4);
    out.put_f32(chunk.max_abs);
    out.put_varint(chunk.sample_count);
    out.append(chunk.payload);
}

CodedChunk read_chunk(BitReader& in) {
    const std::size_t start = in.position();
    CodedChunk chunk;
    chunk.mode = in.get_bit() ? EntropyMode::abc : EntropyMode::grc;
    chunk.run_length_layer = in.get_bit();
    const auto field = static_cast<std::uint32_t>(in.get_bits(5));
    if (chunk.mode == EntropyMode::grc) {
        chunk.parameter = field;
    } else {
        if (field > 32) throw BitstreamError("bound width out of range", start);
        chunk.parameter = static_cast<std::uint32_t>(in.get_bits(static_cast<int>(field)) + 1);
    }
    chunk.bits = static_cast<int>(in.get_bits(4)) + 1;
    if (chunk.bits < kMinQuantBits)
        throw BitstreamError("quantizer width " + std::to_string(chunk.bits) + " below 4", start);
    chunk.max_abs = in.get_f32();
    if (!std::isfinite(chunk.max_abs) || chunk.max_abs < 0.0f)
        throw BitstreamError("invalid chunk scale", start);
    chunk.sample_count = in.get_varint();

    BitReader replay = in;
    const std::size_t payload_start = in.position();
    read_codes(in, chunk.mode, chunk.parameter, chunk.run_length_layer, chunk.sample_count);
    std::size_t left = in.position() - payload_start;

    BitWriter w;
    while (left > 0) {
        const int take = static_cast<int>(std::min<std::size_t>(left, 32));
        w.put_bits(replay.get_bits(take), take);
        left -= static_cast<std::size_t>(take);
    }
    chunk.payload = w.take();
    return chunk;
}

} // namespace cswv
