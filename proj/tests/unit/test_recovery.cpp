#include "cswv/errors.hpp"
#include "cswv/metrics.hpp"
#include "cswv/recovery.hpp"
#include "cswv/synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace cswv;

namespace {

constexpr std::uint64_t kSeed = 0x6373777600000001ull;

struct Problem {
    std::vector<double> truth;
    MeasurementRecord record;
};

Problem make_problem(const SensingCodebook& cb, std::size_t n, std::size_t k, std::uint64_t seed) {
    Problem p;
    p.truth = sparse_vector(n, k, seed);
    InputVector v;
    v.values = p.truth;
    p.record = measure(v, cb);
    return p;
}

RecoveryConfig with(Algorithm a) {
    RecoveryConfig c;
    c.algorithm = a;
    return c;
}

double final_nmse(const Problem& p, const SensingCodebook& cb, Algorithm a) {
    return nmse(p.truth, recover_record(p.record, cb, with(a)).s_hat).value;
}

} // namespace

TEST_SUITE("recovery") {

TEST_CASE("helpers") {
    const std::vector<double> x = {3.0, -1.0, 0.5, -4.0, 1.0};
    CHECK(soft_threshold(x, 0.0) == x);
    CHECK(soft_threshold(x, 1.0) == std::vector<double>{2.0, 0.0, 0.0, -3.0, 0.0});
    CHECK(mth_largest_magnitude(x, 1) == 4.0);
    CHECK(mth_largest_magnitude(x, 3) == 1.0);
    CHECK(mth_largest_magnitude(x, 5) == 0.5);
    CHECK(keep_largest(x, 2) == std::vector<double>{3.0, 0.0, 0.0, -4.0, 0.0});
    CHECK(keep_largest(x, 3) == std::vector<double>{3.0, -1.0, 0.0, -4.0, 0.0});
    CHECK(keep_largest(x, 0) == std::vector<double>(5, 0.0));
    const std::vector<double> sparse = {0.0, 2.0, 0.0, -7.0};
    CHECK(keep_largest(sparse, 2) == sparse);
}

TEST_CASE("config validation and phase boundary") {
    RecoveryConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.in_first_phase(99));
    CHECK_FALSE(c.in_first_phase(100));
    c.iterations = 3;
    CHECK_THROWS(c.validate());
    c.iterations = 400;
    c.phase1_fraction = {0, 4};
    CHECK_THROWS(c.validate());
    CHECK(parse_algorithm("eamp") == Algorithm::eamp);
    CHECK(to_string(Algorithm::ist) == "ist");
}

TEST_CASE("empty records recover to zeros") {
    const SensingCodebook cb(kSeed);
    MeasurementRecord r;
    r.n = 512;
    for (auto a : {Algorithm::eamp, Algorithm::amp, Algorithm::iht, Algorithm::ist}) {
        const auto res = recover_record(r, cb, with(a));
        CHECK(res.s_hat == std::vector<double>(512, 0.0));
        CHECK(res.residual_norm == 0.0);
    }
}

TEST_CASE("direct records are copied and padded") {
    const SensingCodebook cb(kSeed);
    MeasurementRecord r;
    r.j = 1;
    r.k = 2;
    r.n = 64;
    r.direct = true;
    r.y.assign(40, 0.0);
    r.y[3] = 5.0;
    r.y[39] = -1.0;
    const auto res = eamp_recover(r, cb);
    REQUIRE(res.s_hat.size() == 64);
    CHECK(res.s_hat[3] == 5.0);
    CHECK(res.s_hat[39] == -1.0);
    CHECK(res.s_hat[40] == 0.0);
}

TEST_CASE("EAMP meets the NMSE target on the 2048 / 82 / 370 point") {
    const SensingCodebook cb(kSeed);
    int hits = 0;
    for (int t = 0; t < 20; ++t) {
        const auto p = make_problem(cb, 2048, 82, 1000 + t);
        REQUIRE(p.record.j == 4);
        REQUIRE(p.record.y.size() == 370);
        const auto res = eamp_recover(p.record, cb);
        CHECK(l0_norm(res.s_hat) <= 82);
        hits += nmse(p.truth, res.s_hat).value < 1e-3;
    }
    CHECK(hits >= 18);
}

TEST_CASE("EAMP is no worse than AMP on the 2160 / 176 / 650 point") {
    const SensingCodebook cb(kSeed);
    const auto p = make_problem(cb, 2160, 176, 1001);
    REQUIRE(p.record.y.size() == 650);
    CHECK(final_nmse(p, cb, Algorithm::eamp) <= final_nmse(p, cb, Algorithm::amp));
}

TEST_CASE("AMP beats IST") {
    const SensingCodebook cb(kSeed);
    const auto p = make_problem(cb, 2048, 82, 1002);
    CHECK(final_nmse(p, cb, Algorithm::amp) < final_nmse(p, cb, Algorithm::ist));
}

TEST_CASE("AMP finds a single spike with 50 measurements") {
    const SensingCodebook cb(kSeed);
    const auto p = make_problem(cb, 512, 1, 44);
    REQUIRE(p.record.j == 1);
    RecoveryConfig c = with(Algorithm::amp);
    c.iterations = 50;
    const auto res = recover_record(p.record, cb, c);
    const auto truth_at = std::find_if(p.truth.begin(), p.truth.end(), [](double v) { return v != 0.0; }) - p.truth.begin();
    const auto best = std::max_element(res.s_hat.begin(), res.s_hat.end(),
                                       [](double a, double b) { return std::fabs(a) < std::fabs(b); }) - res.s_hat.begin();
    CHECK(best == truth_at);
    CHECK(l0_norm(res.s_hat) >= 1);
    for (std::size_t i = 0; i < res.s_hat.size(); ++i)
        if (static_cast<long>(i) != truth_at) CHECK(std::fabs(res.s_hat[i]) < std::fabs(res.s_hat[truth_at]));
}

TEST_CASE("IHT keeps K entries and its error falls after burn-in") {
    const SensingCodebook cb(kSeed);
    const auto p = make_problem(cb, 2048, 82, 1003);
    RecoveryConfig c = with(Algorithm::iht);
    c.record_trace = true;
    const auto res = recover(*cb.matrix(p.record.j, 2048), p.record.y, 82, c, p.truth);
    REQUIRE(res.nmse_trace.size() == 400);
    CHECK(l0_norm(res.s_hat) <= 82);
    CHECK(res.nmse_trace.back() <= res.nmse_trace[100]);
}

TEST_CASE("IST ends no better than AMP") {
    const SensingCodebook cb(kSeed);
    const auto p = make_problem(cb, 2048, 82, 1004);
    CHECK(final_nmse(p, cb, Algorithm::ist) >= final_nmse(p, cb, Algorithm::amp));
}

TEST_CASE("a first phase covering every iteration is AMP") {
    const SensingCodebook cb(kSeed);
    const auto p = make_problem(cb, 1024, 40, 7);
    RecoveryConfig e = with(Algorithm::eamp);
    e.phase1_fraction = {1, 1};
    CHECK(recover_record(p.record, cb, e).s_hat == recover_record(p.record, cb, with(Algorithm::amp)).s_hat);
}

TEST_CASE("recovery is deterministic and residual-consistent") {
    const SensingCodebook cb(kSeed);
    const auto p = make_problem(cb, 1024, 30, 8);
    const auto a = eamp_recover(p.record, cb);
    const auto b = eamp_recover(p.record, cb);
    CHECK(a.s_hat == b.s_hat);
    CHECK(a.residual_norm == b.residual_norm);
    double ynorm = 0.0;
    for (double v : p.record.y) ynorm += v * v;
    CHECK(a.residual_norm / std::sqrt(ynorm) < 1e-6);
}

TEST_CASE("early stop records convergence") {
    const SensingCodebook cb(kSeed);
    const auto p = make_problem(cb, 1024, 30, 9);
    RecoveryConfig c;
    c.early_stop = true;
    const auto res = eamp_recover(p.record, cb, c);
    CHECK(res.converged);
    CHECK(res.iterations_run < 400);
    CHECK(res.residual_norm < 1e-12);
}

TEST_CASE("pyramid from empty records holds only the base band") {
    const int w = 64, h = 64;
    const SensingCodebook cb(kSeed);
    std::vector<MeasurementRecord> records;
    for (const auto& slot : record_layout(w, h, kDefaultTargetMinN)) {
        MeasurementRecord r;
        r.n = slot.n;
        r.origin = slot.origin;
        records.push_back(r);
    }
    const std::vector<double> base(64, 3.0);
    const auto p = recover_pyramid(base, records, cb, w, h, kDefaultTargetMinN, RecoveryConfig{});
    CHECK(p.extract(0, Rect{0, 0, 8, 8}) == base);
    double rest = 0.0;
    for (const auto& plane : p.planes)
        for (double v : plane) rest += std::fabs(v);
    CHECK(rest == doctest::Approx(64 * 3.0));

    records.pop_back();
    CHECK_THROWS_AS(recover_pyramid(base, records, cb, w, h, kDefaultTargetMinN, RecoveryConfig{}),
                    BitstreamError);
}

TEST_CASE("sparse pyramid survives sensing and recovery without quantization") {
    const int w = 64, h = 64;
    const SensingCodebook cb(kSeed);
    const auto truth = sparse_pyramid(w, h, 40, 20.0, 5);
    const auto sensed = sense_pyramid(truth, 0.0, cb);
    const auto back = recover_pyramid(sensed.base_band, sensed.records, cb, w, h,
                                      kDefaultTargetMinN, RecoveryConfig{});
    for (const auto& region : pyramid_regions(w, h)) {
        const auto t = truth.extract(region.plane, region.band.rect);
        const auto e = back.extract(region.plane, region.band.rect);
        CHECK(nmse(t, e).value < 1e-3);
    }
}

} // TEST_SUITE
