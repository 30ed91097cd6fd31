// cswv: command line front end for the scalable compressed-sensing video codec.

#include "curve_config.hpp"

#include "cswv/codec.hpp"
#include "cswv/errors.hpp"
#include "cswv/metrics.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

using namespace cswv;

std::vector<std::uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

struct RawInput {
    std::string path;
    int width = 0;
    int height = 0;
    std::size_t frames = 0;
    bool header = false;
    std::string chroma = "gray";
};

void add_raw_options(CLI::App* cmd, RawInput& in, const std::string& flag, const std::string& what) {
    cmd->add_option(flag, in.path, what)->required()->check(CLI::ExistingFile);
    cmd->add_option("--width", in.width, "Frame width in pixels");
    cmd->add_option("--height", in.height, "Frame height in pixels");
    cmd->add_option("--frames", in.frames, "Frames to read (default: the whole file)");
    cmd->add_flag("--raw-header", in.header, "Input starts with a CSWV-RAW header");
    cmd->add_option("--chroma", in.chroma, "Input sample layout")
        ->check(CLI::IsMember({"gray", "yuv420"}));
}

std::vector<FramePlane> load_video(RawInput& in) {
    if (in.header) {
        std::ifstream f(in.path, std::ios::binary);
        auto raw = read_raw_video_with_header(f);
        in.width = raw.width;
        in.height = raw.height;
        return std::move(raw.frames);
    }
    if (in.width <= 0 || in.height <= 0)
        throw Error("--width and --height are required for headerless input");
    const auto bytes = slurp(in.path);
    const ChromaFormat chroma = in.chroma == "yuv420" ? ChromaFormat::yuv420 : ChromaFormat::gray;
    std::size_t frame_bytes = static_cast<std::size_t>(in.width) * in.height;
    if (chroma == ChromaFormat::yuv420) frame_bytes += frame_bytes / 2;
    const std::size_t frames = in.frames ? in.frames : bytes.size() / frame_bytes;
    return read_raw_video(bytes, in.width, in.height, frames, chroma);
}

void dump_bands(const std::string& path, std::span<const FramePlane> frames, double threshold) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "gof,temporal_band,temporal_level,spatial_level,orientation,layer,energy,nonzero\n";
    for (const auto& gof : partition_gofs(frames).gofs) {
        const auto pyramid = dwt3d_forward(gof);
        for (const auto& region : pyramid_regions(pyramid.width, pyramid.height)) {
            const auto band = pyramid.extract(region.plane, region.band.rect);
            double energy = 0.0;
            std::size_t nonzero = 0;
            for (double v : band) {
                energy += v * v;
                if (region.base_layer || std::fabs(v) >= threshold) ++nonzero;
            }
            out << gof.gof_index << ',' << to_string(static_cast<TemporalBand>(region.plane)) << ','
                << region.tag.temporal_level << ',' << region.band.level << ','
                << to_string(region.band.orientation) << ','
                << to_string(layer_for_level(region.decomposition_level, region.base_layer)) << ','
                << energy << ',' << nonzero << '\n';
        }
    }
}

void print_rate(const RateReport& r) {
    std::cout << "raw_bits,coded_bits,header_bits,chunk_header_bits,payload_bits,"
                 "compression_ratio,measurements,coefficients,measurement_percentage\n"
              << r.raw_bits << ',' << r.coded_bits << ',' << r.header_bits << ','
              << r.chunk_header_bits << ',' << r.payload_bits << ',' << r.compression_ratio << ','
              << r.measurements << ',' << r.coefficients << ',' << r.measurement_percentage << '\n';
}

std::string number_text(double v) {
    if (v == kLosslessPsnr) return "inf";
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
    return std::string(buf, end);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scalable compressed-sensing video codec"};
    app.require_subcommand(1);

    // encode
    RawInput enc_in;
    EncoderParams params;
    std::string enc_out, bands_out;
    auto* encode = app.add_subcommand("encode", "Compress raw 8-bit luma video");
    add_raw_options(encode, enc_in, "--input", "Raw video file");
    encode->add_option("--threshold", params.threshold, "Hard threshold on sub-band coefficients")
        ->check(CLI::NonNegativeNumber);
    encode->add_option("--bits", params.quant_bits, "Quantizer bits")->check(CLI::Range(4, 16));
    encode->add_option("--seed", params.master_seed, "Master seed of the sensing codebook");
    encode->add_option("--target-min-n", params.target_min_n, "Minimum sensing vector length")
        ->check(CLI::PositiveNumber);
    encode->add_option("--fps", params.fps, "Frame rate tag");
    encode->add_option("--out", enc_out, "Output stream")->required();
    encode->add_option("--dump-bands", bands_out, "Write per-band energies as CSV");

    // decode
    std::string dec_in, dec_out, dec_layers = "EL3", dec_algo = "eamp";
    RecoveryConfig recovery;
    DecodeOptions dec_opts;
    auto* decode = app.add_subcommand("decode", "Reconstruct video from a stream");
    decode->add_option("--in", dec_in, "Input stream")->required()->check(CLI::ExistingFile);
    decode->add_option("--layers", dec_layers, "Highest layer to use")
        ->check(CLI::IsMember({"BL", "EL1", "EL2", "EL3"}));
    decode->add_option("--algo", dec_algo, "Recovery algorithm")
        ->check(CLI::IsMember({"eamp", "amp", "iht", "ist"}));
    decode->add_option("--iterations", recovery.iterations, "Recovery iterations")
        ->check(CLI::Range(4, 100000));
    decode->add_option("--threads", dec_opts.threads, "Recovery threads (0: all cores)");
    decode->add_flag("--full-resolution", dec_opts.full_resolution,
                     "Synthesize absent bands as zeros at full size and rate");
    decode->add_option("--out", dec_out, "Output raw video")->required();

    // extract
    std::string ext_in, ext_out, ext_layers;
    auto* extract = app.add_subcommand("extract", "Drop enhancement layers from a stream");
    extract->add_option("--in", ext_in, "Input stream")->required()->check(CLI::ExistingFile);
    extract->add_option("--layers", ext_layers, "Highest layer to keep")
        ->required()
        ->check(CLI::IsMember({"BL", "EL1", "EL2", "EL3"}));
    extract->add_option("--out", ext_out, "Output stream")->required();

    // metrics
    RawInput ref_in, test_in;
    std::string stream_path;
    auto* metrics = app.add_subcommand("metrics", "PSNR between two raw videos, rate of a stream");
    metrics->add_option("--ref", ref_in.path, "Reference raw video")->check(CLI::ExistingFile);
    metrics->add_option("--test", test_in.path, "Test raw video")->check(CLI::ExistingFile);
    metrics->add_option("--width", ref_in.width, "Frame width");
    metrics->add_option("--height", ref_in.height, "Frame height");
    metrics->add_flag("--raw-header", ref_in.header, "Both videos carry CSWV-RAW headers");
    metrics->add_option("--stream", stream_path, "Report the rate of this stream")
        ->check(CLI::ExistingFile);

    // curves
    std::string curves_config, curves_out;
    auto* curves = app.add_subcommand("curves", "Run experiments and write CSV curves");
    curves->add_option("--config", curves_config, "JSON experiment description")
        ->required()
        ->check(CLI::ExistingFile);
    curves->add_option("--out", curves_out, "CSV output (default: stdout)");

    // complexity
    double cx_n = 1.0, cx_m = 0.25;
    int cx_itr = 200;
    auto* complexity = app.add_subcommand("complexity", "Arithmetic operation counts");
    complexity->add_option("--n", cx_n, "Elements per GOF")->check(CLI::PositiveNumber);
    complexity->add_option("--m-frac", cx_m, "Measurements as a fraction of n")
        ->check(CLI::Range(0.0, 1.0));
    complexity->add_option("--itr", cx_itr, "Recovery iterations")->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*encode) {
            const auto frames = load_video(enc_in);
            if (!bands_out.empty()) dump_bands(bands_out, frames, params.threshold);
            const auto stream = encode_video(frames, params);
            spill(enc_out, serialize(stream));
            print_rate(rate_report(stream));
        } else if (*decode) {
            const auto stream = extract_layers(parse_stream(slurp(dec_in)), parse_layer(dec_layers));
            recovery.algorithm = parse_algorithm(dec_algo);
            const auto video = decode_stream(stream, recovery, dec_opts);
            if (video.frames.empty()) throw Error("stream holds no frames");
            std::ofstream out(dec_out, std::ios::binary);
            write_raw_video(out, video.frames);
            std::cout << "width,height,frames,fps,layer\n"
                      << video.width << ',' << video.height << ',' << video.frames.size() << ','
                      << video.fps << ',' << to_string(video.top_layer) << '\n';
        } else if (*extract) {
            const auto stream = parse_stream(slurp(ext_in));
            const auto part = extract_layers(stream, parse_layer(ext_layers));
            const auto bytes = serialize(part);
            spill(ext_out, bytes);
            std::cout << "layer,bytes\n" << ext_layers << ',' << bytes.size() << '\n';
        } else if (*metrics) {
            if (!ref_in.path.empty() || !test_in.path.empty()) {
                if (ref_in.path.empty() || test_in.path.empty())
                    throw Error("--ref and --test must be given together");
                test_in.width = ref_in.width;
                test_in.height = ref_in.height;
                test_in.header = ref_in.header;
                const auto ref = load_video(ref_in);
                const auto test = load_video(test_in);
                const auto report = psnr(ref, test);
                std::cout << "frame,psnr_db\n";
                for (std::size_t i = 0; i < report.per_frame.size(); ++i)
                    std::cout << i << ',' << number_text(report.per_frame[i]) << '\n';
                std::cout << "average," << number_text(report.average) << '\n';
            }
            if (!stream_path.empty()) print_rate(rate_report(parse_stream(slurp(stream_path))));
        } else if (*curves) {
            const auto bytes = slurp(curves_config);
            const auto spec = cli::parse_experiment_spec(std::string(bytes.begin(), bytes.end()));
            const auto csv = emit_curves(spec);
            if (curves_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(curves_out);
                out << csv;
            }
        } else if (*complexity) {
            const auto r = complexity_report(cx_n, cx_m, cx_itr);
            const auto row = [](const char* system, const char* part, const OperationCount& c) {
                std::cout << system << ',' << part << ',' << number_text(c.multipliers) << ','
                          << number_text(c.adders) << '\n';
            };
            std::cout << "system,part,multipliers,adders\n";
            row("conventional", "encoder", r.conventional_encoder);
            row("conventional", "decoder", r.conventional_decoder);
            row("conventional", "total", r.conventional);
            row("proposed", "encoder", r.proposed_encoder);
            row("proposed", "decoder", r.proposed_decoder);
            row("proposed", "total", r.proposed);
            row("conventional", "n2_coefficient", r.conventional_n2);
            row("proposed", "n2_coefficient", r.proposed_n2);
            std::cout << "ratio,multipliers,"
                      << (r.ratio_unbounded ? std::string("inf") : number_text(r.multiplier_ratio))
                      << ",\n";
        }
    } catch (const cswv::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
