#pragma once

#include "cswv/bitio.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cswv {

// ---------------------------------------------------------------------------
// Quantization: symmetric mid-tread, one scale per chunk.

inline constexpr int kMinQuantBits = 4;
inline constexpr int kMaxQuantBits = 16;
inline constexpr int kDefaultQuantBits = 12;

struct Quantized {
    std::vector<std::int32_t> codes;
    /// Largest magnitude, rounded up to the nearest float so it can be stored
    /// in 32 bits without clipping.
    float max_abs = 0.0f;
    int bits = kDefaultQuantBits;
};

/// 2^(bits-1) - 1
std::int32_t max_code(int bits);
/// Reconstruction step max_abs / max_code(bits); 1 when max_abs is zero.
double quantizer_step(float max_abs, int bits);

Quantized quantize(std::span<const double> values, int bits);
std::vector<double> dequantize(std::span<const std::int32_t> codes, float max_abs, int bits);

// ---------------------------------------------------------------------------
// Symbol coders. Signed codes are zigzag-mapped: 0, -1, 1, -2, ... -> 0, 1, 2, 3, ...

std::uint32_t zigzag(std::int32_t c);
std::int32_t unzigzag(std::uint32_t u);

void put_rice(BitWriter& out, std::uint32_t u, int r);
std::uint32_t get_rice(BitReader& in, int r);
std::size_t rice_length(std::uint32_t u, int r);

void put_truncated_binary(BitWriter& out, std::uint32_t u, std::uint32_t bound);
std::uint32_t get_truncated_binary(BitReader& in, std::uint32_t bound);
std::size_t truncated_binary_length(std::uint32_t u, std::uint32_t bound);

/// Golomb-Rice: quotient u >> r in unary (ones closed by a zero), then the r
/// low bits most significant first.
BitString grc_encode(std::span<const std::int32_t> codes, int r);
std::vector<std::int32_t> grc_decode(const BitString& bits, int r, std::size_t count);

/// Adjusted (truncated) binary for symbols u < bound: with b = ceil(log2 bound)
/// and t = 2^b - bound, u < t takes b-1 bits and the rest take b bits as u + t.
BitString abc_encode(std::span<const std::int32_t> codes, std::uint32_t bound);
std::vector<std::int32_t> abc_decode(const BitString& bits, std::uint32_t bound,
                                     std::size_t count);

// ---------------------------------------------------------------------------
// Zero-run layer.

inline constexpr std::uint32_t kMinZeroRun = 4;

struct RleToken {
    enum class Kind : std::uint8_t { literal, zero_run };
    Kind kind = Kind::literal;
    std::int32_t value = 0;  // literal
    std::uint32_t run = 0;   // zero_run, >= kMinZeroRun

    bool operator==(const RleToken&) const = default;
};

std::vector<RleToken> rle_zero(std::span<const std::int32_t> codes);
std::vector<std::int32_t> unrle_zero(std::span<const RleToken> tokens);

/// Entropy-coder alphabet for a token stream: a literal c becomes
/// zigzag(c) + 1, a run becomes 0 followed by run - kMinZeroRun.
std::vector<std::uint32_t> token_symbols(std::span<const RleToken> tokens);

// ---------------------------------------------------------------------------
// Mode selection.

enum class EntropyMode : std::uint8_t { grc = 0, abc = 1 };

/// Per-chunk magnitude statistics.
class ContextModeler {
public:
    void observe(std::uint32_t u);
    void observe(std::span<const std::uint32_t> symbols);

    double mean_magnitude() const { return count_ ? double(sum_) / double(count_) : 0.0; }
    std::uint32_t max_symbol() const { return max_; }
    std::size_t count() const { return count_; }
    /// max(0, floor(log2(mean + 1))), capped at 15.
    int rice_parameter() const;

private:
    std::uint64_t sum_ = 0;
    std::uint32_t max_ = 0;
    std::size_t count_ = 0;
};

struct ModeChoice {
    EntropyMode mode = EntropyMode::grc;
    /// Rice parameter for GRC, bound for ABC.
    std::uint32_t parameter = 0;
    /// Payload bits plus the mode-specific parameter field.
    std::size_t coded_bits = 0;
};

inline constexpr int kMaxRiceParameter = 15;

/// Exact coded size under GRC (best r in [0, 15]) and ABC (bound = max + 1);
/// the smaller wins and ties go to GRC.
ModeChoice select_mode(std::span<const std::uint32_t> symbols);
std::size_t grc_size(std::span<const std::uint32_t> symbols, int r);
std::size_t abc_size(std::span<const std::uint32_t> symbols, std::uint32_t bound);

// ---------------------------------------------------------------------------
// Chunks.

struct CodedChunk {
    EntropyMode mode = EntropyMode::grc;
    bool run_length_layer = false;
    std::uint32_t parameter = 0;
    int bits = kDefaultQuantBits;
    float max_abs = 0.0f;
    std::uint32_t sample_count = 0;
    BitString payload;

    std::size_t header_bits() const;
    std::size_t total_bits() const { return header_bits() + payload.bit_count; }
    bool operator==(const CodedChunk&) const = default;
};

/// Quantize, optionally run-length code the zero runs, then entropy code with
/// the cheaper of the four (rle on/off x GRC/ABC) combinations.
CodedChunk encode_chunk(std::span<const double> values, int bits);
std::vector<std::int32_t> decode_chunk_codes(const CodedChunk& chunk);
std::vector<double> decode_chunk(const CodedChunk& chunk);

void write_chunk(BitWriter& out, const CodedChunk& chunk);
CodedChunk read_chunk(BitReader& in);

} // namespace cswv
