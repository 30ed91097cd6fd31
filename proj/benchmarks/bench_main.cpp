#include "cswv/codec.hpp"
#include "cswv/synthetic.hpp"

#include <benchmark/benchmark.h>

using namespace cswv;

namespace {

constexpr std::uint64_t kSeed = 0x6373777600000001ull;

void BM_Dwt2dForward(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto frame = synthetic_video(SyntheticScene::blobs, size, size, 1, 1).front();
    for (auto _ : state) benchmark::DoNotOptimize(dwt2d_forward(frame));
    state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Dwt2dForward)->Arg(64)->Arg(256)->Arg(512);

void BM_Dwt3dRoundTrip(benchmark::State& state) {
    const auto frames = synthetic_video(SyntheticScene::panning, 128, 128, 8, 1);
    const auto gof = partition_gofs(frames).gofs.front();
    for (auto _ : state) benchmark::DoNotOptimize(dwt3d_inverse(dwt3d_forward(gof)));
}
BENCHMARK(BM_Dwt3dRoundTrip)->Unit(benchmark::kMillisecond);

void BM_Measure(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t k = static_cast<std::size_t>(state.range(1));
    const SensingCodebook cb(kSeed);
    InputVector v;
    v.values = sparse_vector(n, k, 3);
    for (auto _ : state) benchmark::DoNotOptimize(measure(v, cb));
}
BENCHMARK(BM_Measure)->Args({2048, 82})->Args({2160, 176});

void BM_Recover(benchmark::State& state) {
    const auto algorithm = static_cast<Algorithm>(state.range(0));
    const SensingCodebook cb(kSeed);
    InputVector v;
    v.values = sparse_vector(2048, 82, 3);
    const auto record = measure(v, cb);
    RecoveryConfig config;
    config.algorithm = algorithm;
    for (auto _ : state) benchmark::DoNotOptimize(recover_record(record, cb, config));
    state.SetLabel(std::string(to_string(algorithm)));
}
BENCHMARK(BM_Recover)
    ->Arg(static_cast<int>(Algorithm::eamp))
    ->Arg(static_cast<int>(Algorithm::amp))
    ->Arg(static_cast<int>(Algorithm::iht))
    ->Arg(static_cast<int>(Algorithm::ist))
    ->Unit(benchmark::kMillisecond);

void BM_GolombRice(benchmark::State& state) {
    std::vector<std::int32_t> codes(1 << 16);
    std::uint64_t x = 1;
    for (auto& c : codes) {
        x = x * 6364136223846793005ull + 1442695040888963407ull;
        c = static_cast<std::int32_t>((x >> 33) % 64) - 32;
    }
    const int r = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const auto bits = grc_encode(codes, r);
        benchmark::DoNotOptimize(grc_decode(bits, r, codes.size()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(codes.size()));
}
BENCHMARK(BM_GolombRice)->Arg(2)->Arg(4)->Arg(6);

void BM_EncodeChunk(benchmark::State& state) {
    const auto values = sparse_vector(4096, 400, 9);
    for (auto _ : state) benchmark::DoNotOptimize(encode_chunk(values, 12));
}
BENCHMARK(BM_EncodeChunk);

void BM_EncodeVideo(benchmark::State& state) {
    const auto frames = synthetic_video(SyntheticScene::blobs, 64, 64, 8, 7);
    for (auto _ : state) benchmark::DoNotOptimize(encode_video(frames, EncoderParams{}));
}
BENCHMARK(BM_EncodeVideo)->Unit(benchmark::kMillisecond);

void BM_DecodeVideo(benchmark::State& state) {
    const auto stream = encode_video(synthetic_video(SyntheticScene::blobs, 64, 64, 8, 7), EncoderParams{});
    DecodeOptions options;
    options.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(decode_stream(stream, RecoveryConfig{}, options));
}
BENCHMARK(BM_DecodeVideo)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
