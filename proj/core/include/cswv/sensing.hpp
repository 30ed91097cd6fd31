#pragma once

#include "cswv/dwt.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace cswv {

/// One row of the measurement table: vectors whose l0-norm lies in
/// [k_min, k_max] are sensed with `m` Bernoulli measurements.
struct CodebookEntry {
    int index = 0;
    std::uint32_t k_min = 0;
    std::uint32_t k_max = 0;
    std::size_t m = 0;

    bool contains(std::uint32_t k) const { return k >= k_min && k <= k_max; }
};

inline constexpr std::uint32_t kUnboundedK = std::numeric_limits<std::uint32_t>::max();
inline constexpr int kCodebookSize = 16;

inline constexpr std::array<CodebookEntry, kCodebookSize> kMeasurementTable = {{
    {0, 0, 0, 0},
    {1, 1, 10, 50},
    {2, 11, 20, 130},
    {3, 21, 50, 240},
    {4, 51, 100, 370},
    {5, 101, 150, 470},
    {6, 151, 200, 650},
    {7, 201, 250, 780},
    {8, 251, 300, 920},
    {9, 301, 350, 1080},
    {10, 351, 400, 1220},
    {11, 401, 450, 1400},
    {12, 451, 500, 1550},
    {13, 501, 550, 1700},
    {14, 551, 600, 1850},
    {15, 601, kUnboundedK, 2000},
}};

inline constexpr std::size_t kDefaultTargetMinN = 1024;

/// Codebook index whose sparsity range contains k.
int select_entry(std::uint32_t k);

/// Dense m x n matrix of +1/-1 entries, row-major.
class BernoulliMatrix {
public:
    BernoulliMatrix(std::size_t rows, std::size_t cols, std::vector<std::int8_t> signs);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::int8_t operator()(std::size_t r, std::size_t c) const { return signs_[r * cols_ + c]; }
    std::span<const std::int8_t> row(std::size_t r) const {
        return {signs_.data() + r * cols_, cols_};
    }

    /// out = Phi * x
    void multiply(std::span<const double> x, std::span<double> out) const;
    /// out = Phi^T * z
    void multiply_transposed(std::span<const double> z, std::span<double> out) const;

    bool operator==(const BernoulliMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && signs_ == other.signs_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::int8_t> signs_;
};

/// Deterministic sign of entry (row, col) of matrix (j, n): one bit of a
/// counter-based generator keyed by (master_seed, j, n).
std::int8_t bernoulli_sign(std::uint64_t master_seed, int j, std::size_t n, std::size_t row,
                           std::size_t col);

/// The shared family of sensing matrices. Matrices are generated on first use
/// for each (j, n) and memoized; the object is safe to share across threads.
class SensingCodebook {
public:
    explicit SensingCodebook(std::uint64_t master_seed);

    std::uint64_t master_seed() const { return seed_; }
    const CodebookEntry& entry(int j) const;
    std::shared_ptr<const BernoulliMatrix> matrix(int j, std::size_t n) const;

private:
    std::uint64_t seed_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, std::size_t>, std::shared_ptr<const BernoulliMatrix>> cache_;
};

/// Where a vector came from inside a pyramid.
struct VectorOrigin {
    int plane = 0;
    SpatialBand band;
    int first_column = 0;
    /// Columns of the band actually covered (the last vector may cover fewer).
    int column_count = 0;

    LayerTag tag() const { return {temporal_level(plane), band.level, band.orientation}; }
};

struct InputVector {
    std::vector<double> values;
    /// Trailing zeros appended after the band's last column.
    std::size_t pad = 0;
    VectorOrigin origin;

    std::size_t n() const { return values.size(); }
    std::size_t actual_length() const { return values.size() - pad; }
};

struct MeasurementRecord {
    int j = 0;
    std::uint32_t k = 0;
    std::vector<double> y;
    /// Vector length n the record was sensed at (including zero padding).
    std::size_t n = 0;
    /// True when m(j) would not be smaller than the vector's real length and
    /// y carries the vector entries themselves.
    bool direct = false;
    VectorOrigin origin;
};

/// out[i] = 0 where |in[i]| < t, otherwise in[i].
std::vector<double> hard_threshold(std::span<const double> band, double t);

/// Vector length for a band of `band_height` rows and `band_width` columns:
/// n = 2^p * band_height with the smallest p such that
/// n >= min(target_min_n, band_width * band_height).
std::size_t vector_length(int band_width, int band_height, std::size_t target_min_n);
std::size_t vector_count(int band_width, int band_height, std::size_t target_min_n);

/// Splits a row-major band into column-major vectors of vector_length()
/// entries; the final vector is zero-padded.
std::vector<InputVector> vectorize_band(std::span<const double> band, int band_width,
                                        int band_height, std::size_t target_min_n);
/// Inverse of vectorize_band; padding is dropped.
std::vector<double> devectorize_band(std::span<const std::vector<double>> vectors, int band_width,
                                     int band_height);

std::uint32_t l0_norm(std::span<const double> v);

/// y = Phi_j v with j chosen from the l0-norm of v. Throws CodebookError when
/// m(j) exceeds the vector length.
MeasurementRecord measure(const InputVector& v, const SensingCodebook& codebook);

/// True when sensing a vector with `actual_length` real entries and sparsity
/// index j would not reduce the amount of data; such vectors are sent as is.
bool uses_direct_mode(int j, std::size_t actual_length);

struct SensedPyramid {
    std::vector<double> base_band;
    Rect base_rect;
    std::vector<MeasurementRecord> records;
};

SensedPyramid sense_pyramid(const SubbandPyramid& pyramid, double threshold,
                            const SensingCodebook& codebook,
                            std::size_t target_min_n = kDefaultTargetMinN);

/// Geometry of every record sense_pyramid produces for a W x H pyramid, in
/// canonical order. The decoder uses it to place recovered vectors.
struct RecordSlot {
    Region region;
    VectorOrigin origin;
    std::size_t n = 0;
    std::size_t pad = 0;
};

std::vector<RecordSlot> record_layout(int width, int height, std::size_t target_min_n);

} // namespace cswv
