#pragma once

#include "cswv/dwt.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace cswv {

/// n entries with exactly k nonzeros at uniformly drawn positions; the
/// nonzero values are standard normal.
std::vector<double> sparse_vector(std::size_t n, std::size_t k, std::uint64_t seed);

enum class SyntheticScene {
    /// Smooth gradient background with soft blobs moving along straight lines.
    blobs,
    /// A sinusoidal texture panning diagonally.
    panning,
    /// Flat-shaded rectangles sliding over a still background.
    shapes,
    /// Every frame the same constant value.
    constant,
    /// Independent uniform noise on every sample.
    noise,
};

std::string_view to_string(SyntheticScene scene);
SyntheticScene parse_scene(std::string_view name);

/// Deterministic 8-bit-range luma video.
std::vector<FramePlane> synthetic_video(SyntheticScene scene, int width, int height,
                                        std::size_t frame_count, std::uint64_t seed);

/// A pyramid whose base band holds mid-grey DC values and whose every
/// enhancement vector (as vectorized by the sensing stage) has exactly
/// min(k, real length) nonzeros of magnitude in [amplitude / 2, amplitude].
SubbandPyramid sparse_pyramid(int width, int height, std::size_t k, double amplitude,
                              std::uint64_t seed, std::size_t target_min_n = 1024);

} // namespace cswv
