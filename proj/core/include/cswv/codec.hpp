#pragma once

#include "cswv/bitstream.hpp"
#include "cswv/recovery.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cswv {

struct EncoderParams {
    /// Coefficients with |c| < threshold are zeroed before sensing.
    double threshold = 1.0;
    int quant_bits = kDefaultQuantBits;
    std::uint64_t master_seed = 0x6373777600000001ull;
    std::size_t target_min_n = kDefaultTargetMinN;
    std::uint32_t fps = 30;
};

StreamHeader make_header(const EncoderParams& params, int width, int height,
                         std::uint32_t frame_count);

/// Senses, quantizes and entropy codes one pyramid into its four layers.
GofLayers encode_pyramid(const SubbandPyramid& pyramid, std::uint32_t gof_index,
                         const EncoderParams& params, const SensingCodebook& codebook);

LayeredBitstream encode_video(std::span<const FramePlane> frames, const EncoderParams& params);

/// Codes ready-made pyramids (one per GOF); frame_count defaults to 8 per pyramid.
LayeredBitstream encode_pyramids(std::span<const SubbandPyramid> pyramids,
                                 const EncoderParams& params, std::uint32_t frame_count = 0);

struct DecodeOptions {
    /// Synthesize absent bands as zeros and return full-size frames at the
    /// full frame rate instead of the reduced resolution the layers support.
    bool full_resolution = false;
    /// Recovery worker threads per GOF; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

struct DecodedVideo {
    std::vector<FramePlane> frames;
    int width = 0;
    int height = 0;
    double fps = 0.0;
    /// Highest layer used; every GOF contributes the same layers.
    LayerId top_layer = LayerId::BL;
    /// Spatial and temporal levels left uninverted (0 for a full decode).
    int depth = 0;
};

/// Number of layers (BL counts as one) every GOF of the stream provides.
/// Throws UnusableStreamError when some GOF lacks its base layer or has a gap.
int usable_layers(std::span<const GofLayers> gofs);

/// Rebuilds a GOF pyramid from its first `layers` layers.
SubbandPyramid decode_gof_pyramid(const StreamHeader& header, const GofLayers& gof, int layers,
                                  const SensingCodebook& codebook, const RecoveryConfig& config,
                                  unsigned threads = 0);

DecodedVideo decode_stream(const LayeredBitstream& stream, const SensingCodebook& codebook,
                           const RecoveryConfig& config = {}, const DecodeOptions& options = {});
/// Builds the codebook from the seed in the stream header.
DecodedVideo decode_stream(const LayeredBitstream& stream, const RecoveryConfig& config = {},
                           const DecodeOptions& options = {});

/// ceil(frame_count / 2^depth)
std::size_t frames_at_depth(std::size_t frame_count, int depth);

/// The source as a decode at `depth` would present it: forward 3-D DWT, then
/// the low-pass synthesis path down to `depth`. Depth 0 returns the input.
std::vector<FramePlane> reduced_reference(std::span<const FramePlane> frames, int depth);

} // namespace cswv
