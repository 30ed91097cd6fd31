#include "cswv/dwt.hpp"

#include "cswv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cswv {

std::string_view to_string(Orientation o) {
    switch (o) {
    case Orientation::LL: return "LL";
    case Orientation::LH: return "LH";
    case Orientation::HL: return "HL";
    case Orientation::HH: return "HH";
    }
    return "?";
}

std::string_view to_string(TemporalBand band) {
    static constexpr std::string_view names[] = {"LLL", "LLH", "LH0", "LH1",
                                                 "H0",  "H1",  "H2",  "H3"};
    return names[static_cast<int>(band)];
}

BandMap BandMap::dyadic(int width, int height, int levels) {
    if (levels < 1) throw StructureError("band map needs at least one level");
    const int unit = 1 << levels;
    if (width <= 0 || height <= 0 || width % unit != 0 || height % unit != 0)
        throw DimensionError("dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                             " not divisible by 2^" + std::to_string(levels));

    BandMap map;
    map.width = width;
    map.height = height;
    map.levels = levels;
    map.bands.push_back({levels, Orientation::LL, {0, 0, width >> levels, height >> levels}});
    for (int l = levels; l >= 1; --l) {
        const int w = width >> l;
        const int h = height >> l;
        map.bands.push_back({l, Orientation::LH, {0, h, w, h}});
        map.bands.push_back({l, Orientation::HL, {w, 0, w, h}});
        map.bands.push_back({l, Orientation::HH, {w, h, w, h}});
    }
    return map;
}

const SpatialBand& BandMap::find(int level, Orientation orientation) const {
    for (const auto& b : bands)
        if (b.level == level && b.orientation == orientation) return b;
    throw StructureError("band " + std::string(to_string(orientation)) + std::to_string(level) +
                         " not present in band map");
}

namespace {

// Whole-sample symmetric extension collapses to "use the other neighbour"
// at both ends of an even-length signal.
void lift_odd(std::span<double> x, double c) {
    const std::size_t n = x.size();
    for (std::size_t i = 1; i < n; i += 2) {
        const double right = (i + 1 < n) ? x[i + 1] : x[i - 1];
        x[i] += c * (x[i - 1] + right);
    }
}

void lift_even(std::span<double> x, double c) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; i += 2) {
        const double left = (i > 0) ? x[i - 1] : x[i + 1];
        x[i] += c * (left + x[i + 1]);
    }
}

thread_local std::vector<double> g_scratch;

void check_even(std::size_t n) {
    if (n < 2 || n % 2 != 0)
        throw DimensionError("9/7 transform needs an even length >= 2, got " + std::to_string(n));
}

} // namespace

void cdf97_forward_1d(std::span<double> signal) {
    const std::size_t n = signal.size();
    check_even(n);
    lift_odd(signal, cdf97::kAlpha);
    lift_even(signal, cdf97::kBeta);
    lift_odd(signal, cdf97::kGamma);
    lift_even(signal, cdf97::kDelta);

    auto& tmp = g_scratch;
    tmp.assign(signal.begin(), signal.end());
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) {
        signal[k] = tmp[2 * k] / cdf97::kScale;
        signal[half + k] = tmp[2 * k + 1] * cdf97::kScale;
    }
}

void cdf97_inverse_1d(std::span<double> signal) {
    const std::size_t n = signal.size();
    check_even(n);
    auto& tmp = g_scratch;
    tmp.assign(signal.begin(), signal.end());
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) {
        signal[2 * k] = tmp[k] * cdf97::kScale;
        signal[2 * k + 1] = tmp[half + k] / cdf97::kScale;
    }
    lift_even(signal, -cdf97::kDelta);
    lift_odd(signal, -cdf97::kGamma);
    lift_even(signal, -cdf97::kBeta);
    lift_odd(signal, -cdf97::kAlpha);
}

namespace {

// Applies one 2-D level to the top-left w x h block of a row-major array.
template <typename Transform1d>
void transform_block(std::vector<double>& data, int stride, int w, int h, Transform1d&& f,
                     bool rows_first) {
    std::vector<double> column(static_cast<std::size_t>(h));
    auto do_rows = [&] {
        for (int y = 0; y < h; ++y)
            f(std::span<double>(data.data() + static_cast<std::size_t>(y) * stride, w));
    };
    auto do_columns = [&] {
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y) column[y] = data[static_cast<std::size_t>(y) * stride + x];
            f(std::span<double>(column));
            for (int y = 0; y < h; ++y) data[static_cast<std::size_t>(y) * stride + x] = column[y];
        }
    };
    if (rows_first) {
        do_rows();
        do_columns();
    } else {
        do_columns();
        do_rows();
    }
}

void inverse_levels(std::vector<double>& data, int width, int height, int from_level,
                    int to_level) {
    for (int l = from_level; l > to_level; --l) {
        const int w = width >> (l - 1);
        const int h = height >> (l - 1);
        transform_block(data, width, w, h,
                        [](std::span<double> s) { cdf97_inverse_1d(s); }, false);
    }
}

void check_band_map(const SpatialCoefficients& c) {
    if (c.data.size() != static_cast<std::size_t>(c.width) * c.height)
        throw StructureError("coefficient array size does not match its dimensions");
    if (c.band_map.width != c.width || c.band_map.height != c.height)
        throw StructureError("band map dimensions disagree with coefficient array");
    if (!(c.band_map == BandMap::dyadic(c.width, c.height, c.band_map.levels)))
        throw StructureError("band map is not a dyadic Mallat layout");
}

} // namespace

SpatialCoefficients dwt2d_forward(const FramePlane& plane, int levels) {
    SpatialCoefficients out;
    out.band_map = BandMap::dyadic(plane.width, plane.height, levels);
    if (plane.samples.size() != static_cast<std::size_t>(plane.width) * plane.height)
        throw ShapeError("frame plane sample count does not match its dimensions");
    out.width = plane.width;
    out.height = plane.height;
    out.data = plane.samples;
    for (int l = 1; l <= levels; ++l) {
        const int w = plane.width >> (l - 1);
        const int h = plane.height >> (l - 1);
        transform_block(out.data, plane.width, w, h,
                        [](std::span<double> s) { cdf97_forward_1d(s); }, true);
    }
    return out;
}

FramePlane dwt2d_inverse(const SpatialCoefficients& coefficients) {
    return dwt2d_inverse_to_level(coefficients, 0);
}

FramePlane dwt2d_inverse_to_level(const SpatialCoefficients& coefficients, int level) {
    check_band_map(coefficients);
    const int levels = coefficients.band_map.levels;
    if (level < 0 || level > levels)
        throw StructureError("inverse target level " + std::to_string(level) + " out of range");

    std::vector<double> data = coefficients.data;
    inverse_levels(data, coefficients.width, coefficients.height, levels, level);

    const int w = coefficients.width >> level;
    const int h = coefficients.height >> level;
    if (level == 0) return FramePlane(w, h, std::move(data));
    FramePlane out(w, h);
    for (int y = 0; y < h; ++y)
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(y) * coefficients.width, w,
                    out.samples.begin() + static_cast<std::ptrdiff_t>(y) * w);
    return out;
}

int temporal_level(int plane) {
    if (plane < 0 || plane >= kGofSize)
        throw StructureError("temporal plane index " + std::to_string(plane) + " out of range");
    if (plane < 2) return 3;
    if (plane < 4) return 2;
    return 1;
}

std::size_t SubbandPyramid::coefficient_count() const {
    std::size_t n = 0;
    for (const auto& p : planes) n += p.size();
    return n;
}

std::vector<double> SubbandPyramid::extract(int plane, const Rect& rect) const {
    const auto& src = planes.at(static_cast<std::size_t>(plane));
    std::vector<double> out;
    out.reserve(rect.area());
    for (int y = rect.y; y < rect.y + rect.height; ++y) {
        const auto row = src.begin() + static_cast<std::ptrdiff_t>(y) * width + rect.x;
        out.insert(out.end(), row, row + rect.width);
    }
    return out;
}

void SubbandPyramid::insert(int plane, const Rect& rect, std::span<const double> values) {
    if (values.size() != rect.area())
        throw ShapeError("region insert size mismatch");
    auto& dst = planes.at(static_cast<std::size_t>(plane));
    for (int y = 0; y < rect.height; ++y)
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(y) * rect.width, rect.width,
                    dst.begin() + static_cast<std::ptrdiff_t>(rect.y + y) * width + rect.x);
}

SubbandPyramid SubbandPyramid::zeros(int width, int height) {
    SubbandPyramid p;
    p.width = width;
    p.height = height;
    p.band_map = BandMap::dyadic(width, height, kSpatialLevels);
    for (auto& plane : p.planes) plane.assign(static_cast<std::size_t>(width) * height, 0.0);
    return p;
}

std::vector<Region> pyramid_regions(int width, int height) {
    const BandMap map = BandMap::dyadic(width, height, kSpatialLevels);

    // Bands sorted by spatial level (deepest first), then orientation.
    std::vector<SpatialBand> bands = map.bands;
    std::stable_sort(bands.begin(), bands.end(), [](const SpatialBand& a, const SpatialBand& b) {
        if (a.level != b.level) return a.level > b.level;
        return a.orientation < b.orientation;
    });

    std::vector<Region> regions;
    regions.reserve(kGofSize * bands.size());
    for (int level = kSpatialLevels; level >= 1; --level) {
        for (int plane = 0; plane < kGofSize; ++plane) {
            const int t = temporal_level(plane);
            for (const auto& band : bands) {
                Region r;
                r.plane = plane;
                r.band = band;
                r.tag = {t, band.level, band.orientation};
                r.decomposition_level = std::min(t, band.level);
                r.base_layer = plane == 0 && band.orientation == Orientation::LL;
                if (r.decomposition_level != level) continue;
                if (r.base_layer)
                    regions.insert(regions.begin(), r);
                else
                    regions.push_back(r);
            }
        }
    }
    return regions;
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// (a, b) -> ((a + b)/sqrt2, (a - b)/sqrt2) element-wise.
void haar_pair(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& lo,
               std::vector<double>& hi) {
    const std::size_t n = a.size();
    lo.resize(n);
    hi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = a[i];
        const double d = b[i];
        lo[i] = (s + d) * kInvSqrt2;
        hi[i] = (s - d) * kInvSqrt2;
    }
}

using PlaneSet = std::array<std::vector<double>, kGofSize>;

// Temporal plane order: LLL, LLH, LH0, LH1, H0, H1, H2, H3.
PlaneSet haar_forward_planes(const PlaneSet& f) {
    PlaneSet out;
    std::vector<double> l[4];
    for (int i = 0; i < 4; ++i) haar_pair(f[2 * i], f[2 * i + 1], l[i], out[4 + i]);
    std::vector<double> ll[2];
    haar_pair(l[0], l[1], ll[0], out[2]);
    haar_pair(l[2], l[3], ll[1], out[3]);
    haar_pair(ll[0], ll[1], out[0], out[1]);
    return out;
}

// Inverts temporal levels 3 .. depth+1 and returns the 8 >> depth approximation planes.
std::vector<std::vector<double>> haar_inverse_planes(const PlaneSet& p, int depth) {
    std::vector<std::vector<double>> approx = {p[0]};
    const int first_detail[] = {0, 4, 2, 1}; // plane index of the first detail at each level
    for (int level = kTemporalLevels; level > depth; --level) {
        std::vector<std::vector<double>> next(approx.size() * 2);
        for (std::size_t i = 0; i < approx.size(); ++i)
            haar_pair(approx[i], p[static_cast<std::size_t>(first_detail[level]) + i], next[2 * i],
                      next[2 * i + 1]);
        approx = std::move(next);
    }
    return approx;
}

} // namespace

SubbandPyramid haar_temporal_forward(const std::array<SpatialCoefficients, kGofSize>& frames) {
    const auto& first = frames[0];
    PlaneSet in;
    for (int i = 0; i < kGofSize; ++i) {
        const auto& f = frames[static_cast<std::size_t>(i)];
        if (f.width != first.width || f.height != first.height ||
            f.data.size() != first.data.size() || !(f.band_map == first.band_map))
            throw ShapeError("temporal transform needs 8 coefficient arrays of identical shape");
        in[static_cast<std::size_t>(i)] = f.data;
    }
    SubbandPyramid p;
    p.width = first.width;
    p.height = first.height;
    p.band_map = first.band_map;
    p.planes = haar_forward_planes(in);
    return p;
}

std::array<SpatialCoefficients, kGofSize> haar_temporal_inverse(const SubbandPyramid& pyramid) {
    auto planes = haar_inverse_planes(pyramid.planes, 0);
    std::array<SpatialCoefficients, kGofSize> out;
    for (int i = 0; i < kGofSize; ++i) {
        auto& c = out[static_cast<std::size_t>(i)];
        c.width = pyramid.width;
        c.height = pyramid.height;
        c.band_map = pyramid.band_map;
        c.data = std::move(planes[static_cast<std::size_t>(i)]);
    }
    return out;
}

SubbandPyramid dwt3d_forward(const GroupOfFrames& gof) {
    check_codec_dimensions(gof.width(), gof.height());
    std::array<SpatialCoefficients, kGofSize> spatial;
    for (int i = 0; i < kGofSize; ++i) {
        const auto& f = gof.frames[static_cast<std::size_t>(i)];
        if (f.width != gof.width() || f.height != gof.height())
            throw ShapeError("GOF frames must share dimensions");
        spatial[static_cast<std::size_t>(i)] = dwt2d_forward(f, kSpatialLevels);
    }
    return haar_temporal_forward(spatial);
}

GroupOfFrames dwt3d_inverse(const SubbandPyramid& pyramid, std::size_t gof_index) {
    const auto spatial = haar_temporal_inverse(pyramid);
    GroupOfFrames gof;
    gof.gof_index = gof_index;
    for (int i = 0; i < kGofSize; ++i)
        gof.frames[static_cast<std::size_t>(i)] = dwt2d_inverse(spatial[static_cast<std::size_t>(i)]);
    return gof;
}

std::vector<FramePlane> dwt3d_inverse_partial(const SubbandPyramid& pyramid, int depth) {
    if (depth < 0 || depth > kTemporalLevels)
        throw StructureError("reconstruction depth " + std::to_string(depth) + " out of range");
    auto approx = haar_inverse_planes(pyramid.planes, depth);
    // Each remaining temporal low-pass level carries a gain of sqrt(2); the
    // spatial low-pass has unit DC gain.
    const double gain = std::pow(std::sqrt(2.0), depth);

    std::vector<FramePlane> frames;
    frames.reserve(approx.size());
    for (auto& plane : approx) {
        SpatialCoefficients c{pyramid.width, pyramid.height, std::move(plane), pyramid.band_map};
        FramePlane f = dwt2d_inverse_to_level(c, depth);
        for (auto& s : f.samples) s /= gain;
        frames.push_back(std::move(f));
    }
    return frames;
}

} // namespace cswv
