#include "cswv/experiments.hpp"

#include "cswv/codec.hpp"
#include "cswv/errors.hpp"
#include "cswv/metrics.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cswv {

namespace {

BernoulliMatrix make_matrix(std::uint64_t seed, int j, std::size_t m, std::size_t n) {
    std::vector<std::int8_t> signs(m * n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) signs[r * n + c] = bernoulli_sign(seed, j, n, r, c);
    return BernoulliMatrix(m, n, std::move(signs));
}

std::string format_threshold(double t) {
    std::ostringstream s;
    s << "t=" << t;
    return s.str();
}

} // namespace

std::vector<CurveRow> learning_curves(const LearningCurveSpec& spec, std::uint64_t master_seed) {
    if (spec.k == 0 || spec.k > spec.n) throw RangeError("learning curve needs 0 < k <= n");
    if (spec.trials < 1) throw RangeError("learning curve needs at least one trial");
    const int j = select_entry(static_cast<std::uint32_t>(spec.k));
    const std::size_t m = spec.m ? spec.m : kMeasurementTable[static_cast<std::size_t>(j)].m;
    if (m > spec.n) throw CodebookError("more measurements than vector entries");
    const BernoulliMatrix phi = make_matrix(master_seed, j, m, spec.n);

    std::vector<std::vector<double>> sums(spec.algorithms.size(),
                                          std::vector<double>(static_cast<std::size_t>(spec.iterations)));
    for (int t = 0; t < spec.trials; ++t) {
        const auto truth = sparse_vector(spec.n, spec.k, spec.seed + static_cast<std::uint64_t>(t));
        std::vector<double> y(m);
        phi.multiply(truth, y);
        for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
            RecoveryConfig cfg;
            cfg.algorithm = spec.algorithms[a];
            cfg.iterations = spec.iterations;
            cfg.record_trace = true;
            const auto res = recover(phi, y, static_cast<std::uint32_t>(spec.k), cfg, truth);
            for (std::size_t i = 0; i < res.nmse_trace.size(); ++i) sums[a][i] += res.nmse_trace[i];
        }
    }

    std::vector<CurveRow> rows;
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a)
        for (int i = 0; i < spec.iterations; ++i)
            rows.push_back({spec.name, std::string(to_string(spec.algorithms[a])), double(i + 1),
                            sums[a][static_cast<std::size_t>(i)] / spec.trials});
    return rows;
}

std::vector<CurveRow> bits_sweep(const BitsSweepSpec& spec, std::uint64_t master_seed) {
    const auto& s = spec.source;
    const auto video = synthetic_video(s.scene, s.width, s.height, s.frames, s.seed);
    RecoveryConfig cfg;
    cfg.iterations = spec.iterations;

    std::vector<CurveRow> rows;
    for (int bits : spec.bits) {
        EncoderParams params;
        params.threshold = spec.threshold;
        params.quant_bits = bits;
        params.master_seed = master_seed;
        const auto decoded = decode_stream(encode_video(video, params), cfg);
        rows.push_back({spec.name, std::string(to_string(s.scene)), double(bits),
                        psnr(video, decoded.frames).average});
    }
    return rows;
}

std::vector<CurveRow> rate_sweep(const RateSweepSpec& spec, std::uint64_t master_seed) {
    const auto& s = spec.source;
    const auto video = synthetic_video(s.scene, s.width, s.height, s.frames, s.seed);
    RecoveryConfig cfg;
    cfg.iterations = spec.iterations;
    DecodeOptions full;
    full.full_resolution = true;
    const double pixels = double(s.width) * s.height * double(s.frames);

    std::vector<CurveRow> rows;
    for (double t : spec.thresholds) {
        EncoderParams params;
        params.threshold = t;
        params.quant_bits = spec.bits;
        params.master_seed = master_seed;
        const auto stream = encode_video(video, params);
        for (auto layer : {LayerId::BL, LayerId::EL1, LayerId::EL2, LayerId::EL3}) {
            const auto part = extract_layers(stream, layer);
            const auto decoded = decode_stream(part, cfg, full);
            rows.push_back({spec.name, format_threshold(t),
                            double(rate_report(part).coded_bits) / pixels,
                            psnr(video, decoded.frames).average});
        }
    }
    return rows;
}

std::vector<CurveRow> run_experiments(const ExperimentSpec& spec) {
    std::vector<CurveRow> rows;
    auto append = [&rows](std::vector<CurveRow> more) {
        rows.insert(rows.end(), std::make_move_iterator(more.begin()),
                    std::make_move_iterator(more.end()));
    };
    for (const auto& e : spec.learning) append(learning_curves(e, spec.master_seed));
    for (const auto& e : spec.bits) append(bits_sweep(e, spec.master_seed));
    for (const auto& e : spec.rate) append(rate_sweep(e, spec.master_seed));
    return rows;
}

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
    out << kCurveCsvHeader << '\n';
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : rows)
        out << r.experiment << ',' << r.series << ',' << r.x << ',' << r.value << '\n';
    out.precision(old);
}

namespace {

double parse_number(const std::string& field) {
    if (field == "inf") return std::numeric_limits<double>::infinity();
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || end != field.data() + field.size())
        throw FormatError("bad number '" + field + "' in curve CSV");
    return v;
}

} // namespace

std::vector<CurveRow> read_curves_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCurveCsvHeader)
        throw FormatError("curve CSV must start with '" + std::string(kCurveCsvHeader) + "'");
    std::vector<CurveRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 4) throw FormatError("curve CSV row needs 4 fields: " + line);
        rows.push_back({fields[0], fields[1], parse_number(fields[2]), parse_number(fields[3])});
    }
    return rows;
}

std::string emit_curves(const ExperimentSpec& spec) {
    std::ostringstream out;
    write_curves_csv(out, run_experiments(spec));
    return out.str();
}

} // namespace cswv
