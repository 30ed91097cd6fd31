#include "curve_config.hpp"

#include "cswv/errors.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

namespace cswv::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) throw FormatError(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) throw FormatError("unknown key '" + key + "' in " + std::string(where));
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

VideoSource parse_source(const json& j) {
    only_keys(j, "source", {"scene", "width", "height", "frames", "seed"});
    VideoSource s;
    if (j.contains("scene")) s.scene = parse_scene(j.at("scene").get<std::string>());
    read(j, "width", s.width);
    read(j, "height", s.height);
    read(j, "frames", s.frames);
    read(j, "seed", s.seed);
    check_codec_dimensions(s.width, s.height);
    if (s.frames == 0) throw RangeError("source needs at least one frame");
    return s;
}

void check_bits(int bits) {
    if (bits < kMinQuantBits || bits > kMaxQuantBits)
        throw RangeError("quantizer bits " + std::to_string(bits) + " outside [4, 16]");
}

void check_iterations(int iterations) {
    if (iterations < 4) throw RangeError("at least 4 iterations are needed");
}

LearningCurveSpec parse_learning(const json& j) {
    only_keys(j, "learning", {"name", "n", "k", "m", "iterations", "trials", "seed", "algorithms"});
    LearningCurveSpec s;
    read(j, "name", s.name);
    read(j, "n", s.n);
    read(j, "k", s.k);
    read(j, "m", s.m);
    read(j, "iterations", s.iterations);
    read(j, "trials", s.trials);
    read(j, "seed", s.seed);
    if (j.contains("algorithms")) {
        s.algorithms.clear();
        for (const auto& a : j.at("algorithms")) s.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (s.k == 0 || s.k > s.n) throw RangeError("learning curve needs 0 < k <= n");
    if (s.trials < 1) throw RangeError("learning curve needs at least one trial");
    check_iterations(s.iterations);
    return s;
}

BitsSweepSpec parse_bits(const json& j) {
    only_keys(j, "bits", {"name", "source", "bits", "threshold", "iterations"});
    BitsSweepSpec s;
    read(j, "name", s.name);
    if (j.contains("source")) s.source = parse_source(j.at("source"));
    read(j, "bits", s.bits);
    read(j, "threshold", s.threshold);
    read(j, "iterations", s.iterations);
    for (int b : s.bits) check_bits(b);
    if (!(s.threshold >= 0.0)) throw RangeError("threshold must be non-negative");
    check_iterations(s.iterations);
    return s;
}

RateSweepSpec parse_rate(const json& j) {
    only_keys(j, "rate", {"name", "source", "thresholds", "bits", "iterations"});
    RateSweepSpec s;
    read(j, "name", s.name);
    if (j.contains("source")) s.source = parse_source(j.at("source"));
    read(j, "thresholds", s.thresholds);
    read(j, "bits", s.bits);
    read(j, "iterations", s.iterations);
    check_bits(s.bits);
    for (double t : s.thresholds)
        if (!(t >= 0.0)) throw RangeError("threshold must be non-negative");
    check_iterations(s.iterations);
    return s;
}

} // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("experiment config is not valid JSON: ") + e.what());
    }
    only_keys(root, "experiment config", {"master_seed", "learning", "bits", "rate"});
    ExperimentSpec spec;
    try {
        read(root, "master_seed", spec.master_seed);
        if (root.contains("learning"))
            for (const auto& e : root.at("learning")) spec.learning.push_back(parse_learning(e));
        if (root.contains("bits"))
            for (const auto& e : root.at("bits")) spec.bits.push_back(parse_bits(e));
        if (root.contains("rate"))
            for (const auto& e : root.at("rate")) spec.rate.push_back(parse_rate(e));
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad experiment config: ") + e.what());
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(std::string("bad experiment config: ") + e.what());
    }
    return spec;
}

} // namespace cswv::cli
