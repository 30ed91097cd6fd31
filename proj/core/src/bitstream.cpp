#include "cswv/bitstream.hpp"

#include "cswv/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

namespace cswv {

void StreamHeader::validate() const {
    if (version != kStreamVersion)
        throw FormatError("unsupported stream version " + std::to_string(version));
    if (gof_size != kGofSize || spatial_levels != kSpatialLevels ||
        temporal_levels != kTemporalLevels)
        throw FormatError("stream must use GOFs of 8 with 3 spatial and 3 temporal levels");
    if (width == 0 || height == 0 || width % 8 || height % 8 || width > 1u << 16 ||
        height > 1u << 16)
        throw FormatError("invalid frame size " + std::to_string(width) + "x" +
                          std::to_string(height));
    if (quant_bits < kMinQuantBits || quant_bits > kMaxQuantBits)
        throw FormatError("quantizer bits must lie in [4, 16]");
    if (!std::isfinite(threshold) || threshold < 0.0f)
        throw FormatError("threshold must be finite and non-negative");
    if (target_min_n == 0) throw FormatError("target vector length must be positive");
}

std::string_view to_string(LayerId id) {
    switch (id) {
    case LayerId::BL: return "BL";
    case LayerId::EL1: return "EL1";
    case LayerId::EL2: return "EL2";
    case LayerId::EL3: return "EL3";
    }
    return "?";
}

LayerId parse_layer(std::string_view name) {
    for (auto id : {LayerId::BL, LayerId::EL1, LayerId::EL2, LayerId::EL3})
        if (name == to_string(id)) return id;
    throw Error("unknown layer '" + std::string(name) + "' (expected BL, EL1, EL2 or EL3)");
}

int layer_decomposition_level(LayerId id) {
    if (id == LayerId::BL) throw StructureError("the base layer has no decomposition level");
    return 4 - static_cast<int>(id);
}

LayerId layer_for_level(int decomposition_level, bool base_layer) {
    if (base_layer) return LayerId::BL;
    if (decomposition_level < 1 || decomposition_level > 3)
        throw StructureError("decomposition level out of range");
    return static_cast<LayerId>(4 - decomposition_level);
}

int layer_depth(LayerId id) { return 3 - static_cast<int>(id); }

int GofLayers::layer_prefix() const {
    if (!base) return 0;
    int n = 1;
    for (const auto& el : enhancement) {
        if (!el) break;
        ++n;
    }
    return n;
}

std::array<std::size_t, 3> records_per_layer(int width, int height, std::size_t target_min_n) {
    std::array<std::size_t, 3> counts{};
    for (const auto& slot : record_layout(width, height, target_min_n))
        ++counts[static_cast<std::size_t>(4 - slot.region.decomposition_level) - 1];
    return counts;
}

// ---------------------------------------------------------------------------
// Payloads

namespace {

std::vector<std::uint8_t> finish(BitWriter& w) {
    w.align_to_byte();
    return w.take().bytes;
}

void expect_end(BitReader& in) {
    const std::size_t at = in.position();
    in.align_to_byte();
    if (in.remaining() != 0) throw BitstreamError("trailing data after chunk payload", at);
}

} // namespace

std::vector<std::uint8_t> encode_base_payload(const CodedChunk& base) {
    BitWriter w;
    write_chunk(w, base);
    return finish(w);
}

CodedChunk decode_base_payload(std::span<const std::uint8_t> payload) {
    BitReader in(payload, payload.size() * 8);
    CodedChunk chunk = read_chunk(in);
    expect_end(in);
    return chunk;
}

std::vector<std::uint8_t> encode_records_payload(std::span<const CodedRecord> records) {
    BitWriter w;
    for (const auto& r : records) {
        if (r.j < 0 || r.j >= kCodebookSize) throw RangeError("codebook index out of range");
        if (r.k > 0xffff) throw RangeError("sparsity " + std::to_string(r.k) + " exceeds 16 bits");
        if ((r.j == 0) != !r.y.has_value())
            throw StructureError("a record carries measurements exactly when j != 0");
        w.put_bits(static_cast<std::uint64_t>(r.j), 4);
        w.put_bits(r.k, 16);
        if (r.y) write_chunk(w, *r.y);
    }
    return finish(w);
}

std::vector<CodedRecord> decode_records_payload(std::span<const std::uint8_t> payload,
                                                std::size_t record_count) {
    BitReader in(payload, payload.size() * 8);
    std::vector<CodedRecord> records(record_count);
    for (auto& r : records) {
        const std::size_t at = in.position();
        r.j = static_cast<int>(in.get_bits(4));
        r.k = static_cast<std::uint32_t>(in.get_bits(16));
        if (select_entry(r.k) != r.j)
            throw BitstreamError("codebook index " + std::to_string(r.j) +
                                     " does not match sparsity " + std::to_string(r.k),
                                 at);
        if (r.j != 0) r.y = read_chunk(in);
    }
    expect_end(in);
    return records;
}

// ---------------------------------------------------------------------------
// Container

LayeredBitstream mux(const StreamHeader& header, std::span<const GofLayers> gofs) {
    header.validate();
    const auto counts = records_per_layer(static_cast<int>(header.width),
                                          static_cast<int>(header.height), header.target_min_n);
    LayeredBitstream out;
    out.header = header;
    for (const auto& g : gofs) {
        if (!g.base) throw StructureError("GOF " + std::to_string(g.gof_index) + " has no base layer");
        out.chunks.push_back({g.gof_index, LayerId::BL, 3, encode_base_payload(*g.base)});
        for (std::size_t i = 0; i < 3; ++i) {
            if (!g.enhancement[i]) break;
            if (g.enhancement[i]->size() != counts[i])
                throw StructureError("EL" + std::to_string(i + 1) + " of GOF " +
                                     std::to_string(g.gof_index) + " holds " +
                                     std::to_string(g.enhancement[i]->size()) +
                                     " records, geometry needs " + std::to_string(counts[i]));
            const auto layer = static_cast<LayerId>(i + 1);
            out.chunks.push_back({g.gof_index, layer,
                                  static_cast<std::uint8_t>(layer_depth(layer)),
                                  encode_records_payload(*g.enhancement[i])});
        }
    }
    return out;
}

std::vector<GofLayers> demux(const LayeredBitstream& stream) {
    const auto& h = stream.header;
    h.validate();
    const auto counts =
        records_per_layer(static_cast<int>(h.width), static_cast<int>(h.height), h.target_min_n);

    std::vector<GofLayers> gofs(h.gof_count());
    for (std::size_t i = 0; i < gofs.size(); ++i) gofs[i].gof_index = static_cast<std::uint32_t>(i);

    for (const auto& c : stream.chunks) {
        if (c.gof_index >= gofs.size())
            throw FormatError("chunk for GOF " + std::to_string(c.gof_index) + " beyond the " +
                              std::to_string(gofs.size()) + " GOFs of the stream");
        auto& g = gofs[c.gof_index];
        if (c.layer == LayerId::BL) {
            if (g.base) throw FormatError("duplicate base layer chunk");
            g.base = decode_base_payload(c.payload);
        } else {
            const auto i = static_cast<std::size_t>(c.layer) - 1;
            if (g.enhancement[i]) throw FormatError("duplicate enhancement layer chunk");
            g.enhancement[i] = decode_records_payload(c.payload, counts[i]);
        }
    }
    return gofs;
}

namespace {

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::uint32_t v) { le(v, 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void raw(std::span<const std::uint8_t> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    void le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> b) : bytes_(b) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
    std::uint64_t u64() { return le(8); }
    float f32() { return std::bit_cast<float>(u32()); }
    std::span<const std::uint8_t> raw(std::size_t n) {
        need(n);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t position() const { return pos_; }
    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n)
            throw BitstreamError("stream truncated: need " + std::to_string(n) + " more bytes",
                                 pos_ * 8);
    }
    std::uint64_t le(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> serialize(const LayeredBitstream& stream) {
    const auto& h = stream.header;
    ByteWriter w;
    for (char c : kStreamMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u16(h.version);
    w.u32(h.width);
    w.u32(h.height);
    w.u32(h.fps);
    w.u8(h.gof_size);
    w.u8(h.spatial_levels);
    w.u8(h.temporal_levels);
    w.f32(h.threshold);
    w.u8(h.quant_bits);
    w.u64(h.master_seed);
    w.u32(h.target_min_n);
    w.u32(h.frame_count);
    for (const auto& c : stream.chunks) {
        w.u32(c.gof_index);
        w.u8(static_cast<std::uint8_t>(c.layer));
        w.u8(c.temporal_level);
        if (c.payload.size() > 0xffffffffu) throw RangeError("chunk payload too large");
        w.u32(static_cast<std::uint32_t>(c.payload.size()));
        w.raw(c.payload);
    }
    return w.take();
}

LayeredBitstream parse_stream(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    if (bytes.size() < kStreamMagic.size() ||
        !std::equal(kStreamMagic.begin(), kStreamMagic.end(), bytes.begin(),
                    [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; }))
        throw FormatError("not a CSWV stream (bad magic)");
    r.raw(kStreamMagic.size());

    LayeredBitstream s;
    auto& h = s.header;
    h.version = r.u16();
    if (h.version != kStreamVersion)
        throw FormatError("unsupported stream version " + std::to_string(h.version));
    h.width = r.u32();
    h.height = r.u32();
    h.fps = r.u32();
    h.gof_size = r.u8();
    h.spatial_levels = r.u8();
    h.temporal_levels = r.u8();
    h.threshold = r.f32();
    h.quant_bits = r.u8();
    h.master_seed = r.u64();
    h.target_min_n = r.u32();
    h.frame_count = r.u32();
    h.validate();

    long long last_gof = -1;
    int last_layer = -1;
    while (!r.done()) {
        const std::size_t at = r.position();
        LayerChunk c;
        c.gof_index = r.u32();
        const std::uint8_t layer = r.u8();
        c.temporal_level = r.u8();
        const std::uint32_t length = r.u32();
        if (layer > 3) throw FormatError("unknown layer id " + std::to_string(layer));
        c.layer = static_cast<LayerId>(layer);
        if (c.temporal_level != layer_depth(c.layer))
            throw FormatError("chunk temporal level does not match its layer");
        if (c.gof_index >= h.gof_count())
            throw FormatError("chunk for GOF " + std::to_string(c.gof_index) +
                              " beyond the stream's GOF count");
        const bool ordered = static_cast<long long>(c.gof_index) > last_gof ||
                             (c.gof_index == last_gof && layer > last_layer);
        if (!ordered)
            throw FormatError("chunks out of order at byte " + std::to_string(at));
        last_gof = c.gof_index;
        last_layer = layer;
        const auto payload = r.raw(length);
        c.payload.assign(payload.begin(), payload.end());
        s.chunks.push_back(std::move(c));
    }
    return s;
}

LayeredBitstream extract_layers(const LayeredBitstream& stream, LayerId max_layer) {
    LayeredBitstream out;
    out.header = stream.header;
    std::copy_if(stream.chunks.begin(), stream.chunks.end(), std::back_inserter(out.chunks),
                 [max_layer](const LayerChunk& c) { return c.layer <= max_layer; });
    return out;
}

} // namespace cswv
