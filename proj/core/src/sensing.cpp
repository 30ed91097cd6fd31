#include "cswv/sensing.hpp"

#include "cswv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cswv {

int select_entry(std::uint32_t k) {
    for (const auto& e : kMeasurementTable)
        if (e.contains(k)) return e.index;
    return kCodebookSize - 1; // unreachable: the table covers every k
}

BernoulliMatrix::BernoulliMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<std::int8_t> signs)
    : rows_(rows), cols_(cols), signs_(std::move(signs)) {
    if (signs_.size() != rows_ * cols_) throw ShapeError("Bernoulli matrix storage size mismatch");
}

void BernoulliMatrix::multiply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != cols_ || out.size() != rows_) throw ShapeError("Phi * x shape mismatch");
    constexpr std::size_t kLanes = 8;
    const std::size_t body = cols_ - cols_ % kLanes;
    for (std::size_t r = 0; r < rows_; ++r) {
        const std::int8_t* row = signs_.data() + r * cols_;
        double lane[kLanes] = {};
        for (std::size_t c = 0; c < body; c += kLanes)
            for (std::size_t l = 0; l < kLanes; ++l) lane[l] += row[c + l] * x[c + l];
        double acc = 0.0;
        for (std::size_t c = body; c < cols_; ++c) acc += row[c] * x[c];
        for (double v : lane) acc += v;
        out[r] = acc;
    }
}

void BernoulliMatrix::multiply_transposed(std::span<const double> z, std::span<double> out) const {
    if (z.size() != rows_ || out.size() != cols_) throw ShapeError("Phi^T * z shape mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    double* o = out.data();
    for (std::size_t r = 0; r < rows_; ++r) {
        const std::int8_t* row = signs_.data() + r * cols_;
        const double zr = z[r];
        for (std::size_t c = 0; c < cols_; ++c) o[c] += row[c] * zr;
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t matrix_key(std::uint64_t seed, int j, std::size_t n) {
    return splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(j)) ^
                      static_cast<std::uint64_t>(n));
}

std::uint64_t sign_word(std::uint64_t key, std::uint64_t word_index) {
    return splitmix64(key ^ (word_index * 0xd1b54a32d192ed03ULL));
}

} // namespace

std::int8_t bernoulli_sign(std::uint64_t master_seed, int j, std::size_t n, std::size_t row,
                           std::size_t col) {
    const std::uint64_t idx = static_cast<std::uint64_t>(row) * n + col;
    const std::uint64_t word = sign_word(matrix_key(master_seed, j, n), idx >> 6);
    return ((word >> (idx & 63)) & 1) ? std::int8_t{-1} : std::int8_t{1};
}

SensingCodebook::SensingCodebook(std::uint64_t master_seed) : seed_(master_seed) {}

const CodebookEntry& SensingCodebook::entry(int j) const {
    if (j < 0 || j >= kCodebookSize)
        throw CodebookError("codebook index " + std::to_string(j) + " out of range");
    return kMeasurementTable[static_cast<std::size_t>(j)];
}

std::shared_ptr<const BernoulliMatrix> SensingCodebook::matrix(int j, std::size_t n) const {
    const std::size_t m = entry(j).m;
    if (n == 0) throw CodebookError("sensing matrix needs at least one column");

    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(j, n);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    const std::uint64_t mkey = matrix_key(seed_, j, n);
    const std::size_t total = m * n;
    std::vector<std::int8_t> signs(total);
    for (std::size_t w = 0; w * 64 < total; ++w) {
        const std::uint64_t word = sign_word(mkey, w);
        const std::size_t end = std::min(total, (w + 1) * 64);
        for (std::size_t i = w * 64; i < end; ++i)
            signs[i] = ((word >> (i & 63)) & 1) ? std::int8_t{-1} : std::int8_t{1};
    }
    auto mat = std::make_shared<const BernoulliMatrix>(m, n, std::move(signs));
    cache_.emplace(key, mat);
    return mat;
}

std::vector<double> hard_threshold(std::span<const double> band, double t) {
    if (!(t >= 0.0)) throw NumericError("threshold must be non-negative");
    std::vector<double> out(band.begin(), band.end());
    for (auto& v : out)
        if (std::fabs(v) < t) v = 0.0;
    return out;
}

std::size_t vector_length(int band_width, int band_height, std::size_t target_min_n) {
    if (band_width <= 0 || band_height <= 0)
        throw DimensionError("band must contain at least one coefficient");
    const std::size_t total = static_cast<std::size_t>(band_width) * band_height;
    const std::size_t goal = std::min(target_min_n, total);
    std::size_t n = static_cast<std::size_t>(band_height);
    while (n < goal) n *= 2;
    return n;
}

std::size_t vector_count(int band_width, int band_height, std::size_t target_min_n) {
    const std::size_t columns_per_vector =
        vector_length(band_width, band_height, target_min_n) / static_cast<std::size_t>(band_height);
    return (static_cast<std::size_t>(band_width) + columns_per_vector - 1) / columns_per_vector;
}

std::vector<InputVector> vectorize_band(std::span<const double> band, int band_width,
                                        int band_height, std::size_t target_min_n) {
    if (band.size() != static_cast<std::size_t>(band_width) * band_height)
        throw ShapeError("band size does not match its dimensions");
    const std::size_t n = vector_length(band_width, band_height, target_min_n);
    const int cols_per_vector = static_cast<int>(n / static_cast<std::size_t>(band_height));

    std::vector<InputVector> vectors;
    for (int first = 0; first < band_width; first += cols_per_vector) {
        InputVector v;
        v.values.assign(n, 0.0);
        v.origin.first_column = first;
        v.origin.column_count = std::min(cols_per_vector, band_width - first);
        std::size_t i = 0;
        for (int c = first; c < first + v.origin.column_count; ++c)
            for (int r = 0; r < band_height; ++r)
                v.values[i++] = band[static_cast<std::size_t>(r) * band_width + c];
        v.pad = n - i;
        vectors.push_back(std::move(v));
    }
    return vectors;
}

std::vector<double> devectorize_band(std::span<const std::vector<double>> vectors, int band_width,
                                     int band_height) {
    std::vector<double> band(static_cast<std::size_t>(band_width) * band_height, 0.0);
    int column = 0;
    for (const auto& v : vectors) {
        const std::size_t columns_in_vector = v.size() / static_cast<std::size_t>(band_height);
        for (std::size_t vc = 0; vc < columns_in_vector && column < band_width; ++vc, ++column)
            for (int r = 0; r < band_height; ++r)
                band[static_cast<std::size_t>(r) * band_width + column] =
                    v[vc * static_cast<std::size_t>(band_height) + r];
    }
    if (column != band_width) throw ShapeError("vectors do not cover the band");
    return band;
}

std::uint32_t l0_norm(std::span<const double> v) {
    return static_cast<std::uint32_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

MeasurementRecord measure(const InputVector& v, const SensingCodebook& codebook) {
    MeasurementRecord rec;
    rec.k = l0_norm(v.values);
    rec.j = select_entry(rec.k);
    rec.n = v.n();
    rec.origin = v.origin;
    const std::size_t m = codebook.entry(rec.j).m;
    if (m > v.n())
        throw CodebookError("codebook entry " + std::to_string(rec.j) + " needs " +
                            std::to_string(m) + " measurements but the vector has only " +
                            std::to_string(v.n()) + " entries");
    if (m == 0) return rec;
    rec.y.resize(m);
    codebook.matrix(rec.j, v.n())->multiply(v.values, rec.y);
    return rec;
}

bool uses_direct_mode(int j, std::size_t actual_length) {
    return j != 0 && kMeasurementTable[static_cast<std::size_t>(j)].m >= actual_length;
}

std::vector<RecordSlot> record_layout(int width, int height, std::size_t target_min_n) {
    std::vector<RecordSlot> slots;
    for (const auto& region : pyramid_regions(width, height)) {
        if (region.base_layer) continue;
        const Rect& r = region.band.rect;
        const std::size_t n = vector_length(r.width, r.height, target_min_n);
        const int cols = static_cast<int>(n / static_cast<std::size_t>(r.height));
        for (int first = 0; first < r.width; first += cols) {
            RecordSlot s;
            s.region = region;
            s.n = n;
            s.origin.plane = region.plane;
            s.origin.band = region.band;
            s.origin.first_column = first;
            s.origin.column_count = std::min(cols, r.width - first);
            s.pad = n - static_cast<std::size_t>(s.origin.column_count) * r.height;
            slots.push_back(s);
        }
    }
    return slots;
}

SensedPyramid sense_pyramid(const SubbandPyramid& pyramid, double threshold,
                            const SensingCodebook& codebook, std::size_t target_min_n) {
    SensedPyramid out;
    for (const auto& region : pyramid_regions(pyramid.width, pyramid.height)) {
        const Rect& rect = region.band.rect;
        auto band = pyramid.extract(region.plane, rect);
        if (region.base_layer) {
            out.base_band = std::move(band);
            out.base_rect = rect;
            continue;
        }
        const auto kept = hard_threshold(band, threshold);
        for (auto& v : vectorize_band(kept, rect.width, rect.height, target_min_n)) {
            v.origin.plane = region.plane;
            v.origin.band = region.band;

            const std::uint32_t k = l0_norm(v.values);
            const int j = select_entry(k);
            if (uses_direct_mode(j, v.actual_length())) {
                MeasurementRecord rec;
                rec.k = k;
                rec.j = j;
                rec.n = v.n();
                rec.direct = true;
                rec.origin = v.origin;
                rec.y.assign(v.values.begin(),
                             v.values.begin() + static_cast<std::ptrdiff_t>(v.actual_length()));
                out.records.push_back(std::move(rec));
            } else {
                out.records.push_back(measure(v, codebook));
            }
        }
    }
    return out;
}

} // namespace cswv
