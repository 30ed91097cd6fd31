#include "cswv/video_io.hpp"

#include "cswv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

namespace cswv {

FramePlane::FramePlane(int w, int h, double fill)
    : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {}

FramePlane::FramePlane(int w, int h, std::vector<double> values)
    : width(w), height(h), samples(std::move(values)) {
    if (samples.size() != static_cast<std::size_t>(w) * h)
        throw ShapeError("frame plane sample count does not match " + std::to_string(w) + "x" +
                         std::to_string(h));
}

void check_codec_dimensions(int width, int height) {
    if (width <= 0 || height <= 0 || width % 8 != 0 || height % 8 != 0)
        throw DimensionError("frame dimensions " + std::to_string(width) + "x" +
                             std::to_string(height) + " must be positive multiples of 8");
}

namespace {

std::size_t chroma_bytes(int width, int height, ChromaFormat chroma) {
    if (chroma == ChromaFormat::yuv420)
        return 2 * static_cast<std::size_t>(width / 2) * (height / 2);
    return 0;
}

FramePlane plane_from_bytes(const std::uint8_t* data, int width, int height) {
    FramePlane plane(width, height);
    std::transform(data, data + plane.size(), plane.samples.begin(),
                   [](std::uint8_t v) { return static_cast<double>(v); });
    return plane;
}

void put_u32(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff),
                           static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

} // namespace

std::vector<FramePlane> read_raw_video(std::span<const std::uint8_t> bytes, int width,
                                       int height, std::size_t frame_count,
                                       ChromaFormat chroma) {
    check_codec_dimensions(width, height);
    const std::size_t luma = static_cast<std::size_t>(width) * height;
    const std::size_t stride = luma + chroma_bytes(width, height, chroma);

    std::vector<FramePlane> frames;
    frames.reserve(frame_count);
    for (std::size_t f = 0; f < frame_count; ++f) {
        const std::size_t offset = f * stride;
        if (bytes.size() < offset + stride)
            throw InputError("truncated raw video: frame " + std::to_string(f) + " incomplete",
                             bytes.size());
        frames.push_back(plane_from_bytes(bytes.data() + offset, width, height));
    }
    return frames;
}

std::vector<FramePlane> read_raw_video(std::istream& in, int width, int height,
                                       std::size_t frame_count, ChromaFormat chroma) {
    check_codec_dimensions(width, height);
    const std::size_t luma = static_cast<std::size_t>(width) * height;
    const std::size_t stride = luma + chroma_bytes(width, height, chroma);

    std::vector<FramePlane> frames;
    frames.reserve(frame_count);
    std::vector<std::uint8_t> buffer(stride);
    std::size_t consumed = 0;
    for (std::size_t f = 0; f < frame_count; ++f) {
        in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(stride));
        const auto got = static_cast<std::size_t>(in.gcount());
        consumed += got;
        if (got != stride)
            throw InputError("truncated raw video: frame " + std::to_string(f) + " incomplete",
                             consumed);
        frames.push_back(plane_from_bytes(buffer.data(), width, height));
    }
    return frames;
}

std::uint8_t to_pixel(double sample) {
    if (!(sample > 0.0)) return 0; // also maps NaN to 0
    if (sample >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::floor(sample + 0.5));
}

std::vector<std::uint8_t> write_raw_video(std::span<const FramePlane> frames) {
    std::vector<std::uint8_t> out;
    std::size_t total = 0;
    for (const auto& f : frames) total += f.size();
    out.reserve(total);
    for (const auto& f : frames)
        std::transform(f.samples.begin(), f.samples.end(), std::back_inserter(out), to_pixel);
    return out;
}

void write_raw_video(std::ostream& out, std::span<const FramePlane> frames) {
    const auto bytes = write_raw_video(frames);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

RawVideo read_raw_video_with_header(std::istream& in) {
    unsigned char header[kRawHeaderSize];
    in.read(reinterpret_cast<char*>(header), kRawHeaderSize);
    if (static_cast<std::size_t>(in.gcount()) != kRawHeaderSize)
        throw InputError("truncated raw video header", static_cast<std::size_t>(in.gcount()));
    if (std::memcmp(header, kRawMagic.data(), kRawMagic.size()) != 0)
        throw InputError("missing CSWV-RAW magic", 0);

    RawVideo video;
    video.width = static_cast<int>(get_u32(header + 8));
    video.height = static_cast<int>(get_u32(header + 12));
    const std::uint32_t count = get_u32(header + 16);
    try {
        video.frames = read_raw_video(in, video.width, video.height, count);
    } catch (const InputError& e) {
        throw InputError("truncated raw video payload", e.byte_offset() + kRawHeaderSize);
    }
    return video;
}

void write_raw_video_with_header(std::ostream& out, std::span<const FramePlane> frames) {
    out.write(kRawMagic.data(), kRawMagic.size());
    const int w = frames.empty() ? 0 : frames.front().width;
    const int h = frames.empty() ? 0 : frames.front().height;
    put_u32(out, static_cast<std::uint32_t>(w));
    put_u32(out, static_cast<std::uint32_t>(h));
    put_u32(out, static_cast<std::uint32_t>(frames.size()));
    write_raw_video(out, frames);
}

GofPartition partition_gofs(std::span<const FramePlane> frames) {
    GofPartition result;
    if (frames.empty()) return result;

    const int w = frames.front().width;
    const int h = frames.front().height;
    for (const auto& f : frames)
        if (f.width != w || f.height != h)
            throw ShapeError("all frames of a video must share dimensions");

    const std::size_t gof_count = (frames.size() + kGofSize - 1) / kGofSize;
    result.padding = gof_count * kGofSize - frames.size();
    result.gofs.resize(gof_count);
    for (std::size_t g = 0; g < gof_count; ++g) {
        result.gofs[g].gof_index = g;
        for (std::size_t i = 0; i < kGofSize; ++i) {
            const std::size_t src = std::min(g * kGofSize + i, frames.size() - 1);
            result.gofs[g].frames[i] = frames[src];
        }
    }
    return result;
}

} // namespace cswv
