#include "cswv/errors.hpp"
#include "cswv/sensing.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

using namespace cswv;

namespace {

constexpr std::uint64_t kSeed = 0x6373777600000001ull;

std::string sign_row(const BernoulliMatrix& phi, std::size_t r, std::size_t count) {
    std::string s;
    for (std::size_t c = 0; c < count; ++c) s += phi(r, c) < 0 ? '-' : '+';
    return s;
}

} // namespace

TEST_SUITE("sensing") {

TEST_CASE("measurement table ranges") {
    struct Row { std::uint32_t lo, hi; std::size_t m; };
    const Row rows[16] = {{0, 0, 0},       {1, 10, 50},      {11, 20, 130},    {21, 50, 240},
                          {51, 100, 370},  {101, 150, 470},  {151, 200, 650},  {201, 250, 780},
                          {251, 300, 920}, {301, 350, 1080}, {351, 400, 1220}, {401, 450, 1400},
                          {451, 500, 1550}, {501, 550, 1700}, {551, 600, 1850}, {601, 1000, 2000}};
    for (std::uint32_t k = 0; k <= 1000; ++k) {
        int expect = -1;
        for (int j = 0; j < 16; ++j)
            if (k >= rows[j].lo && k <= rows[j].hi) expect = j;
        REQUIRE(select_entry(k) == expect);
        CHECK(kMeasurementTable[static_cast<std::size_t>(expect)].m == rows[expect].m);
    }
    CHECK(select_entry(0) == 0);
    CHECK(select_entry(82) == 4);
    CHECK(kMeasurementTable[4].m == 370);
    CHECK(select_entry(176) == 6);
    CHECK(kMeasurementTable[6].m == 650);
    CHECK(select_entry(999) == 15);
    CHECK(select_entry(kUnboundedK) == 15);
}

TEST_CASE("hard threshold") {
    const std::vector<double> band = {-1.5, 0.4, 2.0, 0.0, -3.0};
    CHECK(hard_threshold(band, 0.0) == band);
    CHECK(hard_threshold(std::vector<double>{-1.5, 0.4, 2.0}, 1.6) == std::vector<double>{0.0, 0.0, 2.0});
    CHECK(hard_threshold(std::vector<double>{1.6, -1.6}, 1.6) == std::vector<double>{1.6, -1.6});
    CHECK_THROWS_AS(hard_threshold(band, -1.0), NumericError);

    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 2.0);
    std::vector<double> big(4096);
    for (auto& v : big) v = g(rng);
    CHECK(l0_norm(hard_threshold(big, 1.6)) <= l0_norm(hard_threshold(big, 1.0)));
}

TEST_CASE("vector lengths") {
    CHECK(vector_length(4, 512, 1024) == 1024);
    CHECK(vector_count(4, 512, 1024) == 2);
    CHECK(vector_length(240, 1080, 2048) == 2160);
    CHECK(vector_length(2, 256, 1024) == 512);
    CHECK(vector_count(2, 256, 1024) == 1);
    CHECK(vector_length(1, 8, 1024) == 8);
    CHECK(vector_length(5, 8, 1024) == 64);
    CHECK(vector_count(5, 8, 1024) == 1);
    CHECK(vector_length(44, 36, 1024) == 1152);
    CHECK(vector_count(44, 36, 1024) == 2);
    CHECK_THROWS_AS(vector_length(0, 8, 1024), DimensionError);
}

TEST_CASE("vectorize is column-major with zero padding") {
    const int w = 5, h = 4;
    std::vector<double> band(w * h);
    for (int i = 0; i < w * h; ++i) band[i] = i + 1;
    const auto vs = vectorize_band(band, w, h, 8);
    REQUIRE(vs.size() == 3);
    CHECK(vs[0].values == std::vector<double>{1, 6, 11, 16, 2, 7, 12, 17});
    CHECK(vs[2].pad == 4);
    CHECK(vs[2].origin.first_column == 4);
    CHECK(vs[2].origin.column_count == 1);
    CHECK(vs[2].values == std::vector<double>{5, 10, 15, 20, 0, 0, 0, 0});

    std::vector<std::vector<double>> raw;
    for (const auto& v : vs) raw.push_back(v.values);
    CHECK(devectorize_band(raw, w, h) == band);
}

TEST_CASE("devectorize inverts vectorize on random bands") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> dim(1, 40);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = dim(rng), h = dim(rng);
        std::vector<double> band(static_cast<std::size_t>(w) * h);
        for (auto& v : band) v = double(rng() % 1000);
        std::vector<std::vector<double>> raw;
        for (auto& v : vectorize_band(band, w, h, 64)) raw.push_back(std::move(v.values));
        CHECK(devectorize_band(raw, w, h) == band);
    }
}

TEST_CASE("l0 norm") {
    CHECK(l0_norm(std::vector<double>(16, 0.0)) == 0);
    CHECK(l0_norm(std::vector<double>{0, 3, -2, 0}) == 2);
    CHECK(l0_norm(std::vector<double>{1e-300, -0.0}) == 1);
}

TEST_CASE("hand-built toy matrix") {
    const BernoulliMatrix phi(2, 4, {1, 1, 1, 1, 1, -1, 1, -1});
    std::vector<double> y(2);
    phi.multiply(std::vector<double>{1, 0, 2, 0}, y);
    CHECK(y == std::vector<double>{3, 3});
    std::vector<double> back(4);
    phi.multiply_transposed(std::vector<double>{1, 2}, back);
    CHECK(back == std::vector<double>{3, -1, 3, -1});
    CHECK_THROWS_AS(phi.multiply(std::vector<double>{1, 2}, y), ShapeError);
}

TEST_CASE("golden sign rows") {
    const SensingCodebook cb(kSeed);
    CHECK(sign_row(*cb.matrix(1, 64), 0, 32) == "-++++-+--+-----+--+++--+--++---+");
    CHECK(sign_row(*cb.matrix(1, 64), 1, 32) == "+--++-+--+-+-+--+-++----------++");
    CHECK(sign_row(*cb.matrix(4, 2048), 369, 32) == "--++----+----+-+--++---++--+----");
    CHECK(sign_row(*cb.matrix(15, 2048), 1999, 32) == "-++--+-+-----++-+-+----+++++--++");
    CHECK(bernoulli_sign(kSeed, 4, 2048, 369, 2) == 1);
}

TEST_CASE("codebook is deterministic, memoized and seed dependent") {
    const SensingCodebook a(kSeed), b(kSeed), c(kSeed + 1);
    const auto m1 = a.matrix(3, 512);
    CHECK(m1->rows() == 240);
    CHECK(m1->cols() == 512);
    CHECK(m1 == a.matrix(3, 512));
    CHECK(*m1 == *b.matrix(3, 512));
    CHECK_FALSE(*m1 == *c.matrix(3, 512));
    CHECK(sign_row(*a.matrix(3, 1024), 0, 64) != sign_row(*m1, 0, 64));
    CHECK_THROWS_AS(a.entry(16), CodebookError);
    CHECK_THROWS_AS(a.matrix(-1, 64), CodebookError);

    long plus = 0;
    const auto big = a.matrix(15, 2048);
    for (std::size_t r = 0; r < big->rows(); ++r)
        for (auto s : big->row(r)) plus += s > 0;
    const double share = double(plus) / double(big->rows() * big->cols());
    CHECK(share == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("measure") {
    const SensingCodebook cb(kSeed);
    InputVector zero;
    zero.values.assign(64, 0.0);
    const auto r0 = measure(zero, cb);
    CHECK(r0.j == 0);
    CHECK(r0.k == 0);
    CHECK(r0.y.empty());

    InputVector one;
    one.values.assign(256, 0.0);
    one.values[77] = -2.5;
    const auto r1 = measure(one, cb);
    CHECK(r1.k == 1);
    CHECK(r1.j == 1);
    REQUIRE(r1.y.size() == 50);
    const auto phi = cb.matrix(1, 256);
    for (std::size_t i = 0; i < 50; ++i) CHECK(r1.y[i] == -2.5 * (*phi)(i, 77));

    InputVector tight;
    tight.values.assign(32, 0.0);
    tight.values[0] = 1.0;
    CHECK_THROWS_AS(measure(tight, cb), CodebookError);
}

TEST_CASE("measure agrees with a direct sum") {
    const SensingCodebook cb(kSeed);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    InputVector v;
    v.values.assign(1024, 0.0);
    for (int i = 0; i < 60; ++i) v.values[rng() % 1024] = g(rng);
    const auto rec = measure(v, cb);
    REQUIRE(rec.j == select_entry(l0_norm(v.values)));
    for (std::size_t r = 0; r < rec.y.size(); r += 37) {
        double sum = 0.0;
        for (std::size_t c = 0; c < 1024; ++c)
            sum += bernoulli_sign(kSeed, rec.j, 1024, r, c) * v.values[c];
        CHECK(rec.y[r] == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("sense a constant pyramid") {
    GroupOfFrames g;
    g.frames.fill(FramePlane(64, 64, 120.0));
    const SensingCodebook cb(kSeed);
    const auto sensed = sense_pyramid(dwt3d_forward(g), 0.5, cb);
    CHECK(sensed.base_rect == Rect{0, 0, 8, 8});
    for (const auto& r : sensed.records) CHECK(r.j == 0);
}

TEST_CASE("sense a single coefficient") {
    auto p = SubbandPyramid::zeros(64, 64);
    const auto& hh1 = p.band_map.find(1, Orientation::HH).rect;
    const std::vector<double> one = {9.0};
    p.insert(5, Rect{hh1.x + 3, hh1.y + 4, 1, 1}, one);
    const SensingCodebook cb(kSeed);
    const auto sensed = sense_pyramid(p, 1.0, cb);
    int nonzero = 0;
    for (const auto& r : sensed.records) {
        if (r.j == 0) continue;
        ++nonzero;
        CHECK(r.k == 1);
        CHECK(r.j == 1);
        CHECK(r.y.size() == 50);
        CHECK_FALSE(r.direct);
        CHECK(r.origin.plane == 5);
    }
    CHECK(nonzero == 1);
}

TEST_CASE("record count and layout agree with band sizes") {
    for (auto [w, h] : {std::pair{64, 64}, std::pair{352, 288}, std::pair{128, 64}}) {
        std::size_t expect = 0;
        for (const auto& region : pyramid_regions(w, h)) {
            if (region.base_layer) continue;
            const auto& r = region.band.rect;
            const std::size_t n = vector_length(r.width, r.height, kDefaultTargetMinN);
            expect += (r.area() + n - 1) / n;
        }
        const auto layout = record_layout(w, h, kDefaultTargetMinN);
        CHECK(layout.size() == expect);

        GroupOfFrames g;
        std::mt19937_64 rng(6);
        for (auto& f : g.frames) {
            f = FramePlane(w, h);
            for (auto& s : f.samples) s = double(rng() % 256);
        }
        const SensingCodebook cb(kSeed);
        const auto sensed = sense_pyramid(dwt3d_forward(g), 1.0, cb);
        REQUIRE(sensed.records.size() == expect);
        for (std::size_t i = 0; i < layout.size(); ++i) {
            const auto& rec = sensed.records[i];
            CHECK(rec.n == layout[i].n);
            CHECK(rec.origin.first_column == layout[i].origin.first_column);
            CHECK(kMeasurementTable[static_cast<std::size_t>(rec.j)].contains(rec.k));
            if (rec.direct) CHECK(rec.y.size() == layout[i].n - layout[i].pad);
            else CHECK(rec.y.size() == kMeasurementTable[static_cast<std::size_t>(rec.j)].m);
        }
    }
}

TEST_CASE("direct mode only when sensing would not shrink the vector") {
    CHECK_FALSE(uses_direct_mode(0, 10));
    CHECK(uses_direct_mode(1, 50));
    CHECK_FALSE(uses_direct_mode(1, 51));
    CHECK(uses_direct_mode(15, 1024));
}

} // TEST_SUITE
