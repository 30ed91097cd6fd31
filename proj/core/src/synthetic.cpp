#include "cswv/synthetic.hpp"

#include "cswv/errors.hpp"
#include "cswv/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace cswv {

namespace {

std::vector<std::size_t> draw_support(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    picked.reserve(k);
    std::sample(all.begin(), all.end(), std::back_inserter(picked), k, rng);
    return picked;
}

double nonzero_normal(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double g = 0.0;
    while (g == 0.0) g = gauss(rng);
    return g;
}

} // namespace

std::vector<double> sparse_vector(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k > n) throw ShapeError("sparsity exceeds vector length");
    std::mt19937_64 rng(seed);
    std::vector<double> v(n, 0.0);
    for (auto i : draw_support(n, k, rng)) v[i] = nonzero_normal(rng);
    return v;
}

std::string_view to_string(SyntheticScene scene) {
    switch (scene) {
    case SyntheticScene::blobs: return "blobs";
    case SyntheticScene::panning: return "panning";
    case SyntheticScene::shapes: return "shapes";
    case SyntheticScene::constant: return "constant";
    case SyntheticScene::noise: return "noise";
    }
    return "?";
}

SyntheticScene parse_scene(std::string_view name) {
    for (auto s : {SyntheticScene::blobs, SyntheticScene::panning, SyntheticScene::shapes,
                   SyntheticScene::constant, SyntheticScene::noise})
        if (name == to_string(s)) return s;
    throw Error("unknown synthetic scene '" + std::string(name) + "'");
}

std::vector<FramePlane> synthetic_video(SyntheticScene scene, int width, int height,
                                        std::size_t frame_count, std::uint64_t seed) {
    check_codec_dimensions(width, height);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double w = width, h = height;
    std::vector<FramePlane> frames;
    frames.reserve(frame_count);

    switch (scene) {
    case SyntheticScene::blobs: {
        struct Blob { double x, y, vx, vy, radius, gain; };
        std::vector<Blob> blobs(4);
        for (auto& b : blobs)
            b = {unit(rng) * w, unit(rng) * h, (unit(rng) - 0.5) * 3.0, (unit(rng) - 0.5) * 3.0,
                 (0.08 + 0.1 * unit(rng)) * std::min(w, h), 40.0 + 60.0 * unit(rng)};
        for (std::size_t t = 0; t < frame_count; ++t) {
            FramePlane f(width, height);
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x) {
                    double v = 60.0 + 50.0 * x / w + 30.0 * y / h;
                    for (const auto& b : blobs) {
                        const double dx = x - (b.x + b.vx * double(t));
                        const double dy = y - (b.y + b.vy * double(t));
                        v += b.gain * std::exp(-(dx * dx + dy * dy) / (2.0 * b.radius * b.radius));
                    }
                    f.at(x, y) = std::clamp(v, 0.0, 255.0);
                }
            frames.push_back(std::move(f));
        }
        break;
    }
    case SyntheticScene::panning: {
        const double fx = 2.0 + 3.0 * unit(rng), fy = 1.0 + 3.0 * unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        for (std::size_t t = 0; t < frame_count; ++t) {
            FramePlane f(width, height);
            const double shift = 1.5 * double(t);
            for (int y = 0; y < height; ++y)
                for (int x = 0; x < width; ++x) {
                    const double u = (x + shift) / w, v = (y + 0.5 * shift) / h;
                    f.at(x, y) = 128.0 + 50.0 * std::sin(2.0 * std::numbers::pi * fx * u + phase) *
                                             std::cos(2.0 * std::numbers::pi * fy * v);
                }
            frames.push_back(std::move(f));
        }
        break;
    }
    case SyntheticScene::shapes: {
        struct Box { double x, y, bw, bh, vx, vy, level; };
        std::vector<Box> boxes(3);
        for (auto& b : boxes)
            b = {unit(rng) * w * 0.6, unit(rng) * h * 0.6, (0.15 + 0.2 * unit(rng)) * w,
                 (0.15 + 0.2 * unit(rng)) * h, (unit(rng) - 0.5) * 4.0, (unit(rng) - 0.5) * 4.0,
                 30.0 + 200.0 * unit(rng)};
        for (std::size_t t = 0; t < frame_count; ++t) {
            FramePlane f(width, height, 90.0);
            for (const auto& b : boxes) {
                const double x0 = b.x + b.vx * double(t), y0 = b.y + b.vy * double(t);
                for (int y = 0; y < height; ++y)
                    for (int x = 0; x < width; ++x)
                        if (x >= x0 && x < x0 + b.bw && y >= y0 && y < y0 + b.bh) f.at(x, y) = b.level;
            }
            frames.push_back(std::move(f));
        }
        break;
    }
    case SyntheticScene::constant: {
        const double level = std::floor(32.0 + 192.0 * unit(rng));
        for (std::size_t t = 0; t < frame_count; ++t) frames.emplace_back(width, height, level);
        break;
    }
    case SyntheticScene::noise: {
        for (std::size_t t = 0; t < frame_count; ++t) {
            FramePlane f(width, height);
            for (auto& s : f.samples) s = std::floor(256.0 * unit(rng));
            frames.push_back(std::move(f));
        }
        break;
    }
    }
    return frames;
}

SubbandPyramid sparse_pyramid(int width, int height, std::size_t k, double amplitude,
                              std::uint64_t seed, std::size_t target_min_n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SubbandPyramid p = SubbandPyramid::zeros(width, height);

    // Mid-grey with a gentle ramp; the LLL plane carries a gain of 2^1.5.
    const Region base = pyramid_regions(width, height).front();
    const Rect& br = base.band.rect;
    std::vector<double> dc(br.area());
    for (int y = 0; y < br.height; ++y)
        for (int x = 0; x < br.width; ++x)
            dc[static_cast<std::size_t>(y) * br.width + x] =
                std::pow(2.0, 1.5) * (100.0 + 40.0 * (x + y) / double(br.width + br.height));
    p.insert(base.plane, br, dc);

    for (const auto& slot : record_layout(width, height, target_min_n)) {
        const Rect& r = slot.region.band.rect;
        const std::size_t real = slot.n - slot.pad;
        std::vector<double> band = p.extract(slot.region.plane, r);
        for (auto i : draw_support(real, std::min(k, real), rng)) {
            const int col = slot.origin.first_column + static_cast<int>(i / static_cast<std::size_t>(r.height));
            const int row = static_cast<int>(i % static_cast<std::size_t>(r.height));
            const double mag = amplitude * (0.5 + 0.5 * unit(rng));
            band[static_cast<std::size_t>(row) * r.width + col] = unit(rng) < 0.5 ? -mag : mag;
        }
        p.insert(slot.region.plane, r, band);
    }
    return p;
}

} // namespace cswv
