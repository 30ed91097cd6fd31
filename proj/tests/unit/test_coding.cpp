#include "cswv/coding.hpp"
#include "cswv/errors.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

using namespace cswv;

namespace {

std::string binary(std::uint32_t value, int width) {
    std::string s;
    for (int i = width - 1; i >= 0; --i) s += ((value >> i) & 1) ? '1' : '0';
    return s;
}

// Text-level reference coders, written straight from the code definitions.
std::string rice_text(std::uint32_t u, int r) {
    return std::string(u >> r, '1') + "0" + binary(u & ((1u << r) - 1), r);
}

std::string truncated_text(std::uint32_t u, std::uint32_t bound) {
    if (bound <= 1) return "";
    int b = 0;
    while ((1u << b) < bound) ++b;
    const std::uint32_t t = (1u << b) - bound;
    return u < t ? binary(u, b - 1) : binary(u + t, b);
}

std::vector<std::int32_t> random_codes(std::mt19937_64& rng, std::size_t n, std::int32_t span) {
    std::uniform_int_distribution<std::int32_t> d(-span, span);
    std::vector<std::int32_t> v(n);
    for (auto& c : v) c = d(rng);
    return v;
}

} // namespace

TEST_SUITE("coding") {

TEST_CASE("quantizer") {
    const auto z = quantize(std::vector<double>(10, 0.0), 12);
    CHECK(z.max_abs == 0.0f);
    CHECK(z.codes == std::vector<std::int32_t>(10, 0));
    CHECK(dequantize(z.codes, z.max_abs, 12) == std::vector<double>(10, 0.0));

    CHECK(max_code(12) == 2047);
    const auto q = quantize(std::vector<double>{-3.0, 1.0, 3.0}, 12);
    CHECK(q.codes[2] == 2047);
    CHECK(q.codes[0] == -2047);

    CHECK_THROWS_AS(quantize(std::vector<double>{1.0, std::nan("")}, 12), NumericError);
    CHECK_THROWS_AS(quantize(std::vector<double>{std::numeric_limits<double>::infinity()}, 12), NumericError);
    CHECK_THROWS(quantize(std::vector<double>{1.0}, 3));
    CHECK_THROWS(quantize(std::vector<double>{1.0}, 17));
}

TEST_CASE("quantizer error bound") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-500.0, 500.0);
    for (int bits : {4, 8, 12, 16}) {
        std::vector<double> x(2000);
        for (auto& v : x) v = u(rng);
        const auto q = quantize(x, bits);
        const auto back = dequantize(q.codes, q.max_abs, bits);
        const double bound = double(q.max_abs) / max_code(bits) / 2.0;
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(back[i] - x[i]) <= bound * (1 + 1e-12));
        for (auto c : q.codes) CHECK(std::abs(c) <= max_code(bits));
    }
}

TEST_CASE("zigzag") {
    CHECK(zigzag(0) == 0);
    CHECK(zigzag(-1) == 1);
    CHECK(zigzag(1) == 2);
    CHECK(zigzag(3) == 6);
    for (std::int32_t c = -40000; c <= 40000; c += 7) CHECK(unzigzag(zigzag(c)) == c);
}

TEST_CASE("Golomb-Rice bit patterns") {
    CHECK(grc_encode(std::vector<std::int32_t>{0}, 1).to_string() == "00");
    CHECK(grc_encode(std::vector<std::int32_t>{3}, 1).to_string() == "11100");
    CHECK(grc_encode(std::vector<std::int32_t>{0, -1, 5}, 0).to_string() == "0" "10" "11111111110");

    std::mt19937_64 rng(2);
    for (int r = 0; r <= 7; ++r) {
        const auto codes = random_codes(rng, 300, 200);
        std::string expect;
        for (auto c : codes) expect += rice_text(zigzag(c), r);
        CHECK(grc_encode(codes, r).to_string() == expect);
    }
}

TEST_CASE("Golomb-Rice round trip") {
    std::mt19937_64 rng(3);
    for (int r = 0; r <= 7; ++r) {
        const auto codes = random_codes(rng, 10000, 1 << (r + 2));
        const auto bits = grc_encode(codes, r);
        CHECK(grc_decode(bits, r, codes.size()) == codes);
        std::size_t len = 0;
        for (auto c : codes) len += rice_length(zigzag(c), r);
        CHECK(bits.bit_count == len);
    }
}

TEST_CASE("adjusted binary") {
    CHECK(abc_encode(std::vector<std::int32_t>{0, 0, 0}, 1).bit_count == 0);
    CHECK(abc_decode(BitString{}, 1, 3) == std::vector<std::int32_t>{0, 0, 0});
    BitWriter w;
    put_truncated_binary(w, 0, 5);
    CHECK(w.bits().to_string() == "00");

    for (std::uint32_t bound = 1; bound <= 64; ++bound) {
        BitWriter all;
        std::string expect;
        for (std::uint32_t u = 0; u < bound; ++u) {
            put_truncated_binary(all, u, bound);
            expect += truncated_text(u, bound);
            CHECK(truncated_binary_length(u, bound) == truncated_text(u, bound).size());
        }
        REQUIRE(all.bits().to_string() == expect);
        BitReader in(all.bits());
        for (std::uint32_t u = 0; u < bound; ++u) CHECK(get_truncated_binary(in, bound) == u);
        CHECK(in.remaining() == 0);
    }
}

TEST_CASE("adjusted binary chunk round trip") {
    std::mt19937_64 rng(4);
    const auto codes = random_codes(rng, 10000, 300);
    std::uint32_t bound = 0;
    for (auto c : codes) bound = std::max(bound, zigzag(c) + 1);
    CHECK(abc_decode(abc_encode(codes, bound), bound, codes.size()) == codes);
    CHECK_THROWS(abc_encode(codes, bound - 1));
}

TEST_CASE("mode selection") {
    std::mt19937_64 rng(5);
    std::geometric_distribution<std::uint32_t> geo(0.3);
    std::vector<std::uint32_t> skewed(2000);
    for (auto& s : skewed) s = geo(rng);
    CHECK(select_mode(skewed).mode == EntropyMode::grc);

    std::vector<std::uint32_t> flat(2000);
    for (auto& s : flat) s = static_cast<std::uint32_t>(rng() % 200);
    const auto choice = select_mode(flat);
    CHECK(abc_size(flat, 200) <= grc_size(flat, ContextModeler{}.rice_parameter()));
    std::size_t best_grc = std::numeric_limits<std::size_t>::max();
    for (int r = 0; r <= kMaxRiceParameter; ++r) best_grc = std::min(best_grc, grc_size(flat, r));
    CHECK(choice.coded_bits <= best_grc);

    const std::vector<std::uint32_t> single = {6};
    const auto a = select_mode(single), b = select_mode(single);
    CHECK(a.mode == b.mode);
    CHECK(a.parameter == b.parameter);
    CHECK(a.mode == EntropyMode::grc);
}

TEST_CASE("context modeler") {
    ContextModeler m;
    CHECK(m.rice_parameter() == 0);
    m.observe(std::vector<std::uint32_t>{0, 2, 4, 10});
    CHECK(m.mean_magnitude() == 4.0);
    CHECK(m.rice_parameter() == 2);
    CHECK(m.max_symbol() == 10);
    ContextModeler huge;
    huge.observe(0xffffffffu);
    CHECK(huge.rice_parameter() == kMaxRiceParameter);
}

TEST_CASE("zero-run layer") {
    const std::vector<std::int32_t> zeros(100, 0);
    const auto tokens = rle_zero(zeros);
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0].kind == RleToken::Kind::zero_run);
    CHECK(tokens[0].run == 100);
    CHECK(token_symbols(tokens) == std::vector<std::uint32_t>{0, 96});

    const std::vector<std::int32_t> dense = {1, -2, 3, 0, 0, 0, 5};
    const auto lit = rle_zero(dense);
    CHECK(lit.size() == dense.size());
    for (const auto& t : lit) CHECK(t.kind == RleToken::Kind::literal);
    CHECK(unrle_zero(lit) == dense);

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::int32_t> v(1 + rng() % 500);
        for (auto& c : v) c = (rng() % 5 == 0) ? static_cast<std::int32_t>(rng() % 21) - 10 : 0;
        CHECK(unrle_zero(rle_zero(v)) == v);
    }
}

TEST_CASE("chunks round trip through the bit writer") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 30.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(1 + rng() % 800);
        const bool sparse = trial % 2;
        for (auto& x : v) x = (!sparse || rng() % 8 == 0) ? g(rng) : 0.0;
        const int bits = 4 + trial % 13;
        const auto chunk = encode_chunk(v, bits);
        const auto q = quantize(v, bits);
        CHECK(decode_chunk_codes(chunk) == q.codes);

        BitWriter w;
        write_chunk(w, chunk);
        CHECK(w.bit_count() == chunk.total_bits());
        BitReader r(w.bits());
        CHECK(read_chunk(r) == chunk);
        CHECK(r.remaining() == 0);
    }
}

TEST_CASE("all-zero chunk is tiny") {
    const auto chunk = encode_chunk(std::vector<double>(1000, 0.0), 12);
    CHECK(chunk.total_bits() * 100 < 1000 * 12);
    CHECK(decode_chunk(chunk) == std::vector<double>(1000, 0.0));
}

TEST_CASE("truncated chunk raises a bitstream error") {
    std::vector<double> v(100, 1.5);
    v[3] = -20.0;
    BitWriter w;
    write_chunk(w, encode_chunk(v, 10));
    const auto full = w.take();
    BitReader r(full.bytes, full.bit_count - 3);
    CHECK_THROWS_AS(read_chunk(r), BitstreamError);
}

TEST_CASE("golden chunk bit strings") {
    const std::vector<double> sparse = {0, 0, 0, 0, 0, 3.5, -1.25, 0, 0, 0, 0, 0, 0, 7, 0, 0.5};
    BitWriter a;
    write_chunk(a, encode_chunk(sparse, 8));
    CHECK(a.bits().to_string() ==
          "0100101011101000000111000000000000000000000000100000000000000011111000001100111000000000"
          "00101111111011111000001010011");

    const std::vector<double> ramp = {1, 2, 3, 4, 5, 6, 7, 8, -8, -7, -6, -5, -4, -3, -2, -1};
    BitWriter b;
    write_chunk(b, encode_chunk(ramp, 4));
    CHECK(b.bits().to_string() ==
          "1000100111000110100000100000000000000000000000000010000001101010111100110011011110111111"
          "1101100101010001000011001000010");
}

} // TEST_SUITE
