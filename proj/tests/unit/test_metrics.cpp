#include "cswv/codec.hpp"
#include "cswv/errors.hpp"
#include "cswv/metrics.hpp"
#include "cswv/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cswv;

TEST_SUITE("metrics") {

TEST_CASE("PSNR") {
    const FramePlane a(16, 8, 0.0), b(16, 8, 16.0);
    CHECK(mse(a, b) == 256.0);
    CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(65025.0 / 256.0)));
    CHECK(psnr(a, b) == doctest::Approx(24.05).epsilon(1e-3));
    CHECK(psnr(b, b) == kLosslessPsnr);
    CHECK(std::isinf(psnr_from_mse(0.0)));

    const std::vector<FramePlane> ref = {a, a};
    const auto same = psnr(ref, ref);
    CHECK(same.lossless());
    CHECK(same.average == kLosslessPsnr);

    const std::vector<FramePlane> test = {a, b};
    const auto mixed = psnr(ref, test);
    CHECK(mixed.per_frame[0] == kLosslessPsnr);
    CHECK(mixed.mean_squared_error == 128.0);
    CHECK(mixed.average == doctest::Approx(psnr_from_mse(128.0)));

    CHECK_THROWS_AS(psnr(ref, std::vector<FramePlane>{a}), ShapeError);
    CHECK_THROWS_AS(psnr(a, FramePlane(8, 8)), ShapeError);
}

TEST_CASE("PSNR falls as noise grows") {
    std::mt19937_64 rng(1);
    const FramePlane ref(32, 32, 128.0);
    double previous = kLosslessPsnr;
    for (double amp : {1.0, 4.0, 16.0, 64.0}) {
        std::uniform_real_distribution<double> u(-amp, amp);
        FramePlane noisy = ref;
        for (auto& s : noisy.samples) s += u(rng);
        const double p = psnr(ref, noisy);
        CHECK(p < previous);
        previous = p;
    }
}

TEST_CASE("NMSE") {
    const std::vector<double> truth = {1.0, -2.0, 0.0, 2.0};
    CHECK(nmse(truth, truth).value == 0.0);
    CHECK(nmse(truth, std::vector<double>(4, 0.0)).value == 1.0);
    CHECK(nmse(truth, std::vector<double>{1.0, -2.0, 0.0, 3.0}).value == doctest::Approx(1.0 / 9.0));
    const auto z = nmse(std::vector<double>(3, 0.0), std::vector<double>{0.0, 2.0, 0.0});
    CHECK(z.zero_truth);
    CHECK(z.value == 4.0);
    CHECK_THROWS_AS(nmse(truth, std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("complexity formulas") {
    const double n = 1000.0;
    const auto r = complexity_report(n, 0.25, 200);
    const double m = 250.0;
    CHECK(r.m == m);
    CHECK(r.conventional_encoder.multipliers == 0.0);
    CHECK(r.conventional_encoder.adders == m * (n - 1));
    CHECK(r.conventional_decoder.multipliers == 2 * m * n * 200);
    CHECK(r.conventional_decoder.adders == ((m * n - 1) + (n * m - 1)) * 200);
    CHECK(r.proposed_encoder.multipliers == 6 * n * n);
    CHECK(r.proposed_encoder.adders == 6 * (n * (n - 1)) + (m * n - 1));
    CHECK(r.proposed_decoder.multipliers == 0.0);
    CHECK(r.proposed_decoder.adders == r.conventional_decoder.adders);
    CHECK(r.conventional_n2.multipliers == doctest::Approx(100.0));
    CHECK(r.conventional_n2.adders == doctest::Approx(100.0));
    CHECK(r.proposed_n2.multipliers == doctest::Approx(6.0));
    CHECK(r.proposed_n2.adders == doctest::Approx(106.25));
    CHECK(r.multiplier_ratio == doctest::Approx(0.06));
    CHECK(r.multiplier_ratio <= 0.07);
}

TEST_CASE("complexity at other operating points") {
    const auto r = complexity_report(512.0, 0.25, 400);
    CHECK(r.conventional_n2.multipliers == doctest::Approx(200.0));
    CHECK(r.multiplier_ratio == doctest::Approx(0.03));
    CHECK_FALSE(r.ratio_unbounded);

    const auto zero = complexity_report(512.0, 0.0, 200);
    CHECK(zero.conventional_decoder.multipliers == 0.0);
    CHECK(zero.ratio_unbounded);
    CHECK(std::isinf(zero.multiplier_ratio));

    CHECK_THROWS(complexity_report(0.0));
    CHECK_THROWS(complexity_report(100.0, 1.5));
}

TEST_CASE("rate accounting adds up") {
    const auto frames = synthetic_video(SyntheticScene::blobs, 32, 32, 8, 2);
    const auto s = encode_video(frames, EncoderParams{});
    const auto r = rate_report(s);
    CHECK(r.raw_bits == 8ull * 32 * 32 * 8);
    CHECK(r.coded_bits == 8 * serialize(s).size());
    CHECK(r.header_bits == 8 * kStreamHeaderSize);
    CHECK(r.chunk_header_bits == 8 * kChunkHeaderSize * s.chunks.size());
    CHECK(r.coded_bits == r.header_bits + r.chunk_header_bits + r.payload_bits);
    CHECK(r.compression_ratio == doctest::Approx(double(r.raw_bits) / double(r.coded_bits)));
    CHECK(r.coefficients == 8ull * 32 * 32);

    std::uint64_t measured = 0;
    for (const auto& g : demux(s))
        for (const auto& el : g.enhancement)
            for (const auto& rec : *el)
                if (rec.y) measured += rec.y->sample_count;
    CHECK(r.measurements == measured);
    CHECK(r.measurement_percentage == doctest::Approx(100.0 * double(measured) / double(r.coefficients)));
}

TEST_CASE("rate of flat and noisy videos") {
    const auto flat = rate_report(encode_video(std::vector<FramePlane>(8, FramePlane(64, 64, 0.0)), EncoderParams{}));
    CHECK(flat.measurements == 0);
    CHECK(flat.measurement_percentage == 0.0);
    CHECK(flat.compression_ratio > 50.0);

    const auto noisy = rate_report(encode_video(synthetic_video(SyntheticScene::noise, 64, 64, 8, 4), EncoderParams{}));
    CHECK(noisy.compression_ratio > 0.5);
    CHECK(noisy.measurement_percentage > 50.0);
}

TEST_CASE("raising the threshold never adds measurements") {
    const auto frames = synthetic_video(SyntheticScene::panning, 64, 64, 8, 5);
    double previous = 1e300;
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        EncoderParams p;
        p.threshold = t;
        const auto r = rate_report(encode_video(frames, p));
        CHECK(r.measurement_percentage <= previous);
        previous = r.measurement_percentage;
    }
}

} // TEST_SUITE
