#include "cswv/codec.hpp"

#include "cswv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cswv {

StreamHeader make_header(const EncoderParams& params, int width, int height,
                         std::uint32_t frame_count) {
    check_codec_dimensions(width, height);
    StreamHeader h;
    h.width = static_cast<std::uint32_t>(width);
    h.height = static_cast<std::uint32_t>(height);
    h.fps = params.fps;
    h.threshold = static_cast<float>(params.threshold);
    if (params.quant_bits < kMinQuantBits || params.quant_bits > kMaxQuantBits)
        throw RangeError("quantizer bits must lie in [4, 16]");
    h.quant_bits = static_cast<std::uint8_t>(params.quant_bits);
    h.master_seed = params.master_seed;
    if (params.target_min_n == 0 || params.target_min_n > 0xffffffffu)
        throw RangeError("target vector length out of range");
    h.target_min_n = static_cast<std::uint32_t>(params.target_min_n);
    h.frame_count = frame_count;
    h.validate();
    return h;
}

GofLayers encode_pyramid(const SubbandPyramid& pyramid, std::uint32_t gof_index,
                         const EncoderParams& params, const SensingCodebook& codebook) {
    const auto sensed = sense_pyramid(pyramid, params.threshold, codebook, params.target_min_n);
    const auto layout = record_layout(pyramid.width, pyramid.height, params.target_min_n);
    if (layout.size() != sensed.records.size())
        throw StructureError("sensed record count disagrees with the layout");

    GofLayers g;
    g.gof_index = gof_index;
    g.base = encode_chunk(sensed.base_band, params.quant_bits);
    for (auto& el : g.enhancement) el.emplace();
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto& rec = sensed.records[i];
        CodedRecord coded{rec.j, rec.k, std::nullopt};
        if (rec.j != 0) coded.y = encode_chunk(rec.y, params.quant_bits);
        const auto layer = layer_for_level(layout[i].region.decomposition_level, false);
        g.enhancement[static_cast<std::size_t>(layer) - 1]->push_back(std::move(coded));
    }
    return g;
}

LayeredBitstream encode_video(std::span<const FramePlane> frames, const EncoderParams& params) {
    if (frames.empty()) throw ShapeError("cannot encode an empty video without dimensions");
    const int w = frames.front().width;
    const int h = frames.front().height;
    for (const auto& f : frames)
        if (f.width != w || f.height != h) throw ShapeError("frames differ in size");
    const auto header = make_header(params, w, h, static_cast<std::uint32_t>(frames.size()));
    EncoderParams used = params;
    used.threshold = header.threshold;

    const SensingCodebook codebook(params.master_seed);
    const auto partition = partition_gofs(frames);
    std::vector<GofLayers> gofs;
    gofs.reserve(partition.gofs.size());
    for (const auto& gof : partition.gofs)
        gofs.push_back(encode_pyramid(dwt3d_forward(gof), static_cast<std::uint32_t>(gof.gof_index),
                                      used, codebook));
    return mux(header, gofs);
}

LayeredBitstream encode_pyramids(std::span<const SubbandPyramid> pyramids,
                                 const EncoderParams& params, std::uint32_t frame_count) {
    if (pyramids.empty()) throw ShapeError("no pyramids to encode");
    const int w = pyramids.front().width;
    const int h = pyramids.front().height;
    if (frame_count == 0) frame_count = static_cast<std::uint32_t>(pyramids.size() * kGofSize);
    if ((frame_count + kGofSize - 1) / kGofSize != pyramids.size())
        throw ShapeError("frame count does not match the number of pyramids");
    const auto header = make_header(params, w, h, frame_count);
    EncoderParams used = params;
    used.threshold = header.threshold;

    const SensingCodebook codebook(params.master_seed);
    std::vector<GofLayers> gofs;
    for (std::size_t i = 0; i < pyramids.size(); ++i) {
        if (pyramids[i].width != w || pyramids[i].height != h)
            throw ShapeError("pyramids differ in size");
        gofs.push_back(encode_pyramid(pyramids[i], static_cast<std::uint32_t>(i), used, codebook));
    }
    return mux(header, gofs);
}

int usable_layers(std::span<const GofLayers> gofs) {
    int layers = 4;
    for (const auto& g : gofs) {
        const int prefix = g.layer_prefix();
        if (prefix == 0)
            throw UnusableStreamError("GOF " + std::to_string(g.gof_index) + " has no base layer");
        for (int i = prefix; i < 4; ++i)
            if (g.enhancement[static_cast<std::size_t>(i) - 1])
                throw UnusableStreamError("GOF " + std::to_string(g.gof_index) + " has EL" +
                                          std::to_string(i) + " but not EL" +
                                          std::to_string(prefix));
        layers = std::min(layers, prefix);
    }
    return layers;
}

SubbandPyramid decode_gof_pyramid(const StreamHeader& header, const GofLayers& gof, int layers,
                                  const SensingCodebook& codebook, const RecoveryConfig& config,
                                  unsigned threads) {
    if (layers < 1 || layers > gof.layer_prefix())
        throw UnusableStreamError("GOF " + std::to_string(gof.gof_index) + " lacks the requested layers");
    const int w = static_cast<int>(header.width);
    const int h = static_cast<int>(header.height);

    const auto base = decode_chunk(*gof.base);
    const int lowest_level = 5 - layers;
    std::vector<MeasurementRecord> records;
    std::size_t next = 0;
    std::vector<const CodedRecord*> coded;
    for (int i = 0; i + 1 < layers; ++i)
        for (const auto& r : *gof.enhancement[static_cast<std::size_t>(i)]) coded.push_back(&r);

    for (const auto& slot : record_layout(w, h, header.target_min_n)) {
        if (slot.region.decomposition_level < lowest_level) continue;
        if (next >= coded.size()) throw BitstreamError("too few measurement records", 0);
        const CodedRecord& c = *coded[next++];
        MeasurementRecord rec;
        rec.j = c.j;
        rec.k = c.k;
        rec.n = slot.n;
        rec.origin = slot.origin;
        if (c.j != 0) {
            rec.direct = uses_direct_mode(c.j, slot.n - slot.pad);
            rec.y = decode_chunk(*c.y);
            const std::size_t expected = rec.direct ? slot.n - slot.pad : codebook.entry(c.j).m;
            if (rec.y.size() != expected)
                throw BitstreamError("record carries " + std::to_string(rec.y.size()) +
                                         " values, expected " + std::to_string(expected),
                                     0);
        }
        records.push_back(std::move(rec));
    }
    if (next != coded.size()) throw BitstreamError("too many measurement records", 0);
    return recover_pyramid(base, records, codebook, w, h, header.target_min_n, config, layers - 1,
                           threads);
}

std::size_t frames_at_depth(std::size_t frame_count, int depth) {
    const std::size_t step = std::size_t{1} << depth;
    return (frame_count + step - 1) / step;
}

DecodedVideo decode_stream(const LayeredBitstream& stream, const SensingCodebook& codebook,
                           const RecoveryConfig& config, const DecodeOptions& options) {
    const auto& header = stream.header;
    if (codebook.master_seed() != header.master_seed)
        throw CodebookError("codebook seed differs from the stream's master seed");
    const auto gofs = demux(stream);

    DecodedVideo out;
    if (gofs.empty()) {
        out.width = static_cast<int>(header.width);
        out.height = static_cast<int>(header.height);
        out.fps = header.fps;
        return out;
    }
    const int layers = usable_layers(gofs);
    out.top_layer = static_cast<LayerId>(layers - 1);
    out.depth = options.full_resolution ? 0 : layer_depth(out.top_layer);
    const int scale = 1 << out.depth;
    out.width = static_cast<int>(header.width) / scale;
    out.height = static_cast<int>(header.height) / scale;
    out.fps = double(header.fps) / scale;

    for (const auto& g : gofs) {
        const auto pyramid = decode_gof_pyramid(header, g, layers, codebook, config, options.threads);
        if (out.depth == 0) {
            auto gof = dwt3d_inverse(pyramid, g.gof_index);
            for (auto& f : gof.frames) out.frames.push_back(std::move(f));
        } else {
            for (auto& f : dwt3d_inverse_partial(pyramid, out.depth)) out.frames.push_back(std::move(f));
        }
    }
    out.frames.resize(frames_at_depth(header.frame_count, out.depth));
    return out;
}

DecodedVideo decode_stream(const LayeredBitstream& stream, const RecoveryConfig& config,
                           const DecodeOptions& options) {
    const SensingCodebook codebook(stream.header.master_seed);
    return decode_stream(stream, codebook, config, options);
}

std::vector<FramePlane> reduced_reference(std::span<const FramePlane> frames, int depth) {
    if (depth == 0) return {frames.begin(), frames.end()};
    std::vector<FramePlane> out;
    for (const auto& gof : partition_gofs(frames).gofs)
        for (auto& f : dwt3d_inverse_partial(dwt3d_forward(gof), depth)) out.push_back(std::move(f));
    out.resize(frames_at_depth(frames.size(), depth));
    return out;
}

} // namespace cswv
