#pragma once

#include "cswv/video_io.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cswv {

inline constexpr int kSpatialLevels = 3;
inline constexpr int kTemporalLevels = 3;

/// First letter is the horizontal filter, second the vertical one:
/// HL is horizontally high-pass (top-right quadrant), LH bottom-left.
enum class Orientation : std::uint8_t { LL = 0, LH = 1, HL = 2, HH = 3 };

std::string_view to_string(Orientation o);

struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    std::size_t area() const { return static_cast<std::size_t>(width) * height; }
    bool operator==(const Rect&) const = default;
};

struct SpatialBand {
    int level = 0;
    Orientation orientation = Orientation::LL;
    Rect rect;

    bool operator==(const SpatialBand&) const = default;
};

/// Mallat layout of a dyadic 2-D decomposition. Bands are listed LL of the
/// deepest level first, then LH, HL, HH from the deepest level up to level 1.
struct BandMap {
    int width = 0;
    int height = 0;
    int levels = 0;
    std::vector<SpatialBand> bands;

    static BandMap dyadic(int width, int height, int levels = kSpatialLevels);
    const SpatialBand& find(int level, Orientation orientation) const;

    bool operator==(const BandMap&) const = default;
};

struct SpatialCoefficients {
    int width = 0;
    int height = 0;
    std::vector<double> data;
    BandMap band_map;
};

// CDF 9/7 lifting, normalized so the low-pass analysis filter has unit DC gain.
namespace cdf97 {
inline constexpr double kAlpha = -1.586134342059924;
inline constexpr double kBeta = -0.052980118572961;
inline constexpr double kGamma = 0.882911075530934;
inline constexpr double kDelta = 0.443506852043971;
inline constexpr double kScale = 1.230174104914001;
} // namespace cdf97

/// One level of the 1-D transform in place: the first half receives the
/// low-pass output, the second half the high-pass output. Length must be even.
void cdf97_forward_1d(std::span<double> signal);
void cdf97_inverse_1d(std::span<double> signal);

SpatialCoefficients dwt2d_forward(const FramePlane& plane, int levels = kSpatialLevels);
FramePlane dwt2d_inverse(const SpatialCoefficients& coefficients);

/// Inverts levels down to `level` only and returns the LL sub-image of that
/// level (W/2^level x H/2^level). level == 0 is the full inverse.
FramePlane dwt2d_inverse_to_level(const SpatialCoefficients& coefficients, int level);

/// Temporal bands after three Haar levels over a GOF, in plane order.
enum class TemporalBand : std::uint8_t { LLL, LLH, LH0, LH1, H0, H1, H2, H3 };

std::string_view to_string(TemporalBand band);

/// 3 for LLL/LLH, 2 for LH0/LH1, 1 for H0..H3.
int temporal_level(int plane);

struct LayerTag {
    int temporal_level = 0;
    int spatial_level = 0;
    Orientation orientation = Orientation::LL;

    bool operator==(const LayerTag&) const = default;
};

/// One (temporal plane, spatial band) rectangle of a pyramid.
struct Region {
    int plane = 0;
    SpatialBand band;
    LayerTag tag;
    bool base_layer = false;
    /// min(temporal level, spatial level): 3 belongs to BL/EL1, 2 to EL2, 1 to EL3.
    int decomposition_level = 0;
};

struct SubbandPyramid {
    int width = 0;
    int height = 0;
    std::array<std::vector<double>, kGofSize> planes;
    BandMap band_map;

    std::size_t coefficient_count() const;
    std::vector<double> extract(int plane, const Rect& rect) const;
    void insert(int plane, const Rect& rect, std::span<const double> values);

    static SubbandPyramid zeros(int width, int height);
};

/// Every region of a W x H pyramid: the base region first, then the
/// enhancement regions of decomposition level 3, 2 and 1. Within a level the
/// order is by temporal plane, then spatial level (deepest first), then
/// orientation LL, LH, HL, HH.
std::vector<Region> pyramid_regions(int width, int height);

SubbandPyramid haar_temporal_forward(const std::array<SpatialCoefficients, kGofSize>& frames);
std::array<SpatialCoefficients, kGofSize> haar_temporal_inverse(const SubbandPyramid& pyramid);

SubbandPyramid dwt3d_forward(const GroupOfFrames& gof);
GroupOfFrames dwt3d_inverse(const SubbandPyramid& pyramid, std::size_t gof_index = 0);

/// Reconstruction from the coarse end of the pyramid: inverts temporal and
/// spatial levels down to `depth` and returns 8 / 2^depth frames of
/// W/2^depth x H/2^depth, rescaled to the sample range of the input.
std::vector<FramePlane> dwt3d_inverse_partial(const SubbandPyramid& pyramid, int depth);

} // namespace cswv
