#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace cswv {

inline constexpr int kGofSize = 8;

/// One luma plane, row-major. Samples are real-valued; the 8-bit range only
/// applies at the I/O boundary.
struct FramePlane {
    int width = 0;
    int height = 0;
    std::vector<double> samples;

    FramePlane() = default;
    FramePlane(int w, int h, double fill = 0.0);
    FramePlane(int w, int h, std::vector<double> values);

    double& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return samples.size(); }
};

struct GroupOfFrames {
    std::array<FramePlane, kGofSize> frames;
    std::size_t gof_index = 0;

    int width() const { return frames[0].width; }
    int height() const { return frames[0].height; }
};

struct GofPartition {
    std::vector<GroupOfFrames> gofs;
    /// Number of repeated trailing frames appended to fill the last GOF.
    std::size_t padding = 0;
};

enum class ChromaFormat { gray, yuv420 };

/// Throws DimensionError unless both dimensions are positive multiples of 8.
void check_codec_dimensions(int width, int height);

std::vector<FramePlane> read_raw_video(std::istream& in, int width, int height,
                                       std::size_t frame_count,
                                       ChromaFormat chroma = ChromaFormat::gray);
std::vector<FramePlane> read_raw_video(std::span<const std::uint8_t> bytes, int width,
                                       int height, std::size_t frame_count,
                                       ChromaFormat chroma = ChromaFormat::gray);

/// Samples are clamped to [0, 255] and rounded half-up.
std::vector<std::uint8_t> write_raw_video(std::span<const FramePlane> frames);
void write_raw_video(std::ostream& out, std::span<const FramePlane> frames);

std::uint8_t to_pixel(double sample);

// Self-describing variant: "CSWV-RAW", then width, height and frame count as
// little-endian uint32, then planar 8-bit luma.
inline constexpr std::array<char, 8> kRawMagic = {'C', 'S', 'W', 'V', '-', 'R', 'A', 'W'};
inline constexpr std::size_t kRawHeaderSize = 20;

struct RawVideo {
    int width = 0;
    int height = 0;
    std::vector<FramePlane> frames;
};

RawVideo read_raw_video_with_header(std::istream& in);
void write_raw_video_with_header(std::ostream& out, std::span<const FramePlane> frames);

/// Splits frames into GOFs of 8 in display order; a trailing partial GOF is
/// filled by repeating the last frame.
GofPartition partition_gofs(std::span<const FramePlane> frames);

} // namespace cswv
