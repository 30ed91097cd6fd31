#pragma once

#include "cswv/bitstream.hpp"
#include "cswv/recovery.hpp"
#include "cswv/synthetic.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cswv {

/// NMSE after every iteration for each algorithm on the same synthetic
/// K-sparse vectors. Rows: x = iteration, value = NMSE averaged over trials.
struct LearningCurveSpec {
    std::string name = "learning";
    std::size_t n = 2048;
    std::size_t k = 82;
    /// 0 takes m from the measurement table.
    std::size_t m = 0;
    int iterations = 400;
    int trials = 1;
    std::uint64_t seed = 1;
    std::vector<Algorithm> algorithms = {Algorithm::eamp, Algorithm::amp, Algorithm::iht,
                                         Algorithm::ist};
};

struct VideoSource {
    SyntheticScene scene = SyntheticScene::blobs;
    int width = 64;
    int height = 64;
    std::size_t frames = 8;
    std::uint64_t seed = 7;
};

/// PSNR of the full decode against the source for each quantizer width.
/// Rows: series = scene, x = bits, value = PSNR.
struct BitsSweepSpec {
    std::string name = "bits";
    VideoSource source;
    std::vector<int> bits = {4, 6, 8, 10, 12, 14, 16};
    double threshold = 1.0;
    int iterations = 400;
};

/// PSNR against coded rate: every threshold, every layer prefix. Rows:
/// series = "t=<threshold>", x = coded bits per source pixel, value = PSNR of
/// the full-resolution synthesis against the source.
struct RateSweepSpec {
    std::string name = "rate";
    VideoSource source;
    std::vector<double> thresholds = {0.5, 1.0, 1.6, 3.0};
    int bits = kDefaultQuantBits;
    int iterations = 400;
};

struct ExperimentSpec {
    std::vector<LearningCurveSpec> learning;
    std::vector<BitsSweepSpec> bits;
    std::vector<RateSweepSpec> rate;
    std::uint64_t master_seed = 0x6373777600000001ull;
};

struct CurveRow {
    std::string experiment;
    std::string series;
    double x = 0.0;
    double value = 0.0;
};

std::vector<CurveRow> learning_curves(const LearningCurveSpec& spec, std::uint64_t master_seed);
std::vector<CurveRow> bits_sweep(const BitsSweepSpec& spec, std::uint64_t master_seed);
std::vector<CurveRow> rate_sweep(const RateSweepSpec& spec, std::uint64_t master_seed);

std::vector<CurveRow> run_experiments(const ExperimentSpec& spec);

inline constexpr const char* kCurveCsvHeader = "experiment,series,x,value";

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows);
std::vector<CurveRow> read_curves_csv(std::istream& in);

/// Runs every experiment and returns the CSV text.
std::string emit_curves(const ExperimentSpec& spec);

} // namespace cswv
