#pragma once

#include "cswv/bitstream.hpp"
#include "cswv/video_io.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace cswv {

/// PSNR of identical inputs.
inline constexpr double kLosslessPsnr = std::numeric_limits<double>::infinity();
inline constexpr double kPeakValue = 255.0;

double mse(const FramePlane& reference, const FramePlane& test);
/// 10 log10(255^2 / mse); kLosslessPsnr when mse == 0.
double psnr_from_mse(double mse);
double psnr(const FramePlane& reference, const FramePlane& test);

struct PsnrReport {
    std::vector<double> per_frame;
    /// PSNR of the mean squared error over all frames.
    double average = kLosslessPsnr;
    double mean_squared_error = 0.0;

    bool lossless() const { return mean_squared_error == 0.0; }
};

/// Throws ShapeError on differing frame counts or sizes.
PsnrReport psnr(std::span<const FramePlane> reference, std::span<const FramePlane> test);

struct NmseResult {
    double value = 0.0;
    /// The truth was all zero, so value is the plain squared norm of the estimate.
    bool zero_truth = false;
};

NmseResult nmse(std::span<const double> truth, std::span<const double> estimate);

// ---------------------------------------------------------------------------
// Arithmetic complexity of the conventional and proposed codecs.

struct OperationCount {
    double multipliers = 0.0;
    double adders = 0.0;
};

struct ComplexityReport {
    double n = 0.0;
    double m_fraction = 0.25;
    int itr = 200;
    double m = 0.0;

    OperationCount conventional_encoder;
    OperationCount conventional_decoder;
    OperationCount proposed_encoder;
    OperationCount proposed_decoder;
    OperationCount conventional;
    OperationCount proposed;

    /// Leading-order coefficients of n^2 in the totals.
    OperationCount conventional_n2;
    OperationCount proposed_n2;

    /// proposed / conventional multipliers from the n^2 coefficients.
    double multiplier_ratio = 0.0;
    /// Set when the conventional decoder needs no multipliers (m_fraction == 0).
    bool ratio_unbounded = false;
};

ComplexityReport complexity_report(double n, double m_fraction = 0.25, int itr = 200);

// ---------------------------------------------------------------------------
// Rate accounting.

struct RateReport {
    std::uint64_t raw_bits = 0;
    std::uint64_t coded_bits = 0;
    std::uint64_t header_bits = 0;
    std::uint64_t chunk_header_bits = 0;
    std::uint64_t payload_bits = 0;
    double compression_ratio = 0.0;

    std::uint64_t measurements = 0;
    std::uint64_t coefficients = 0;
    double measurement_percentage = 0.0;
};

/// Raw size is 8 bits per source pixel; coded size counts every byte of the
/// serialized stream. Measurements count m(j) for sensed records and the
/// entries carried by direct records, over the layers present.
RateReport rate_report(const LayeredBitstream& stream);

} // namespace cswv
