#pragma once

#include "cswv/coding.hpp"
#include "cswv/sensing.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cswv {

inline constexpr std::array<char, 4> kStreamMagic = {'C', 'S', 'W', 'V'};
inline constexpr std::uint16_t kStreamVersion = 1;
inline constexpr std::size_t kStreamHeaderSize = 42;
inline constexpr std::size_t kChunkHeaderSize = 10;

struct StreamHeader {
    std::uint16_t version = kStreamVersion;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t fps = 30;
    std::uint8_t gof_size = kGofSize;
    std::uint8_t spatial_levels = kSpatialLevels;
    std::uint8_t temporal_levels = kTemporalLevels;
    float threshold = 0.0f;
    std::uint8_t quant_bits = kDefaultQuantBits;
    std::uint64_t master_seed = 0;
    std::uint32_t target_min_n = kDefaultTargetMinN;
    /// Source frames before GOF padding.
    std::uint32_t frame_count = 0;

    std::size_t gof_count() const { return (frame_count + gof_size - 1) / gof_size; }
    /// Throws FormatError on unsupported geometry or parameters.
    void validate() const;
    bool operator==(const StreamHeader&) const = default;
};

enum class LayerId : std::uint8_t { BL = 0, EL1 = 1, EL2 = 2, EL3 = 3 };

std::string_view to_string(LayerId id);
LayerId parse_layer(std::string_view name);

/// Decomposition level carried by an enhancement layer (EL1 -> 3, EL2 -> 2, EL3 -> 1).
int layer_decomposition_level(LayerId id);
/// Layer that carries a region of the given decomposition level.
LayerId layer_for_level(int decomposition_level, bool base_layer);
/// Reconstruction depth once layers BL..id are present: 3 for BL, 0 for EL3.
int layer_depth(LayerId id);

struct LayerChunk {
    std::uint32_t gof_index = 0;
    LayerId layer = LayerId::BL;
    /// Reconstruction depth this chunk completes (3 - layer).
    std::uint8_t temporal_level = 3;
    std::vector<std::uint8_t> payload;

    std::size_t byte_length() const { return payload.size(); }
    bool operator==(const LayerChunk&) const = default;
};

struct LayeredBitstream {
    StreamHeader header;
    /// Grouped per GOF, layers ascending within a GOF.
    std::vector<LayerChunk> chunks;

    bool operator==(const LayeredBitstream&) const = default;
};

/// A measurement record as transmitted: y is absent exactly when j == 0.
struct CodedRecord {
    int j = 0;
    std::uint32_t k = 0;
    std::optional<CodedChunk> y;

    bool operator==(const CodedRecord&) const = default;
};

/// Coded content of one GOF. enhancement[i] holds EL(i+1) records in
/// canonical order, or nothing when the layer is absent.
struct GofLayers {
    std::uint32_t gof_index = 0;
    std::optional<CodedChunk> base;
    std::array<std::optional<std::vector<CodedRecord>>, 3> enhancement;

    /// Number of consecutive layers present from BL upward (0 when BL is missing).
    int layer_prefix() const;
};

std::vector<std::uint8_t> encode_base_payload(const CodedChunk& base);
CodedChunk decode_base_payload(std::span<const std::uint8_t> payload);

/// j in 4 bits, k in 16 bits, then the coded y when j != 0; padded to a byte.
std::vector<std::uint8_t> encode_records_payload(std::span<const CodedRecord> records);
std::vector<CodedRecord> decode_records_payload(std::span<const std::uint8_t> payload,
                                                std::size_t record_count);

LayeredBitstream mux(const StreamHeader& header, std::span<const GofLayers> gofs);
/// Inverse of mux. Needs the header geometry to know how many records each
/// layer holds.
std::vector<GofLayers> demux(const LayeredBitstream& stream);

std::vector<std::uint8_t> serialize(const LayeredBitstream& stream);
/// Bad magic or version raises FormatError; truncation raises BitstreamError.
LayeredBitstream parse_stream(std::span<const std::uint8_t> bytes);

/// Keeps BL..max_layer of every GOF.
LayeredBitstream extract_layers(const LayeredBitstream& stream, LayerId max_layer);

/// Number of records each enhancement layer holds for a W x H stream.
std::array<std::size_t, 3> records_per_layer(int width, int height, std::size_t target_min_n);

} // namespace cswv
