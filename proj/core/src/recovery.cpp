#include "cswv/recovery.hpp"

#include "cswv/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

namespace cswv {

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::eamp: return "eamp";
    case Algorithm::amp: return "amp";
    case Algorithm::iht: return "iht";
    case Algorithm::ist: return "ist";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    for (auto a : {Algorithm::eamp, Algorithm::amp, Algorithm::iht, Algorithm::ist})
        if (name == to_string(a)) return a;
    throw Error("unknown recovery algorithm '" + std::string(name) + "'");
}

void RecoveryConfig::validate() const {
    if (iterations < 4) throw Error("recovery needs at least 4 iterations");
    if (phase1_fraction.den <= 0 || phase1_fraction.num <= 0 ||
        phase1_fraction.num > phase1_fraction.den)
        throw Error("phase-1 fraction must lie in (0, 1]");
    if (step_scale < 0.0 || !std::isfinite(step_scale)) throw Error("step scale must be positive");
}

bool RecoveryConfig::in_first_phase(int iteration) const {
    if (phase1_fraction.num >= phase1_fraction.den) return true;
    return static_cast<long long>(iteration) * phase1_fraction.den <
           static_cast<long long>(iterations) * phase1_fraction.num;
}

std::vector<double> soft_threshold(std::span<const double> x, double delta) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double mag = std::fabs(x[i]) - delta;
        out[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
    }
    return out;
}

namespace {

// Indices ordered by decreasing magnitude, lower index first among equals.
std::vector<std::size_t> top_indices(std::span<const double> x, std::size_t k) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    k = std::min(k, x.size());
    auto before = [&](std::size_t a, std::size_t b) {
        const double ma = std::fabs(x[a]);
        const double mb = std::fabs(x[b]);
        return ma > mb || (ma == mb && a < b);
    };
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), before);
    idx.resize(k);
    return idx;
}

void keep_largest_in_place(std::vector<double>& x, std::size_t k,
                           std::vector<double>& scratch) {
    if (k >= x.size()) return;
    const auto keep = top_indices(x, k);
    scratch.assign(x.size(), 0.0);
    for (auto i : keep) scratch[i] = x[i];
    x.swap(scratch);
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double nmse_of(std::span<const double> estimate, std::span<const double> truth) {
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = estimate[i] - truth[i];
        err += d * d;
        ref += truth[i] * truth[i];
    }
    return ref > 0.0 ? err / ref : err;
}

} // namespace

std::vector<double> keep_largest(std::span<const double> x, std::size_t k) {
    std::vector<double> out(x.begin(), x.end());
    std::vector<double> scratch;
    keep_largest_in_place(out, k, scratch);
    return out;
}

double mth_largest_magnitude(std::span<const double> x, std::size_t m) {
    if (m == 0 || m > x.size()) throw Error("m-th largest selection out of range");
    std::vector<double> mags(x.size());
    std::transform(x.begin(), x.end(), mags.begin(), [](double v) { return std::fabs(v); });
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(m - 1), mags.end(),
                     std::greater<>());
    return mags[m - 1];
}

RecoveryResult recover(const BernoulliMatrix& phi, std::span<const double> y, std::uint32_t k,
                       const RecoveryConfig& config, std::span<const double> truth) {
    config.validate();
    const std::size_t m = phi.rows();
    const std::size_t n = phi.cols();
    if (y.size() != m) throw ShapeError("measurement vector length does not match Phi");
    if (m > n) throw CodebookError("sensing matrix has more rows than columns");
    if (!truth.empty() && truth.size() != n) throw ShapeError("ground truth length mismatch");

    RecoveryResult result;
    result.s_hat.assign(n, 0.0);
    if (k == 0 || m == 0) {
        result.residual_norm = norm2(y);
        return result;
    }

    const double step = config.step_for(n);
    double hard_step = step;
    double soft_step = step;
    if (config.stable_step) {
        const double rk = std::sqrt(double(m)) + std::sqrt(2.0 * k);
        hard_step = std::min(step, 1.0 / (rk * rk));
        if (config.algorithm == Algorithm::ist) {
            const double rn = std::sqrt(double(m)) + std::sqrt(double(n));
            soft_step = std::min(step, 1.9 / (rn * rn));
        }
    }
    const double divisor =
        config.onsager_divisor == OnsagerDivisor::measurement_count ? double(m) : double(n);
    const bool trace = config.record_trace && !truth.empty();

    std::vector<double>& s = result.s_hat;
    std::vector<double> z(y.begin(), y.end());
    std::vector<double> grad(n), gamma(n), phis(m), scratch;

    for (int it = 1; it <= config.iterations; ++it) {
        const bool soft_rule =
            config.algorithm == Algorithm::amp || config.algorithm == Algorithm::ist ||
            (config.algorithm == Algorithm::eamp && config.in_first_phase(it));

        phi.multiply_transposed(z, grad);
        double onsager_scale = 0.0;
        if (soft_rule) {
            for (std::size_t i = 0; i < n; ++i) gamma[i] = s[i] + soft_step * grad[i];
            const double delta = mth_largest_magnitude(gamma, m);
            s = soft_threshold(gamma, delta);
            if (config.algorithm != Algorithm::ist) {
                const auto active = std::count_if(gamma.begin(), gamma.end(),
                                                  [delta](double g) { return std::fabs(g) > delta; });
                onsager_scale = double(active) / divisor;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) s[i] += hard_step * grad[i];
            keep_largest_in_place(s, k, scratch);
        }

        phi.multiply(s, phis);
        double rr = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double res = y[r] - phis[r];
            rr += res * res;
            z[r] = res + onsager_scale * z[r];
        }
        result.residual_norm = std::sqrt(rr);
        result.iterations_run = it;
        if (trace) result.nmse_trace.push_back(nmse_of(s, truth));
        if (config.early_stop && result.residual_norm < config.residual_tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

RecoveryResult recover_record(const MeasurementRecord& record, const SensingCodebook& codebook,
                              const RecoveryConfig& config, std::span<const double> truth) {
    const std::size_t n = record.n;
    if (n == 0) throw ShapeError("measurement record has no vector length");
    if (record.j == 0 || record.k == 0) {
        RecoveryResult r;
        r.s_hat.assign(n, 0.0);
        r.converged = true;
        return r;
    }
    if (record.direct) {
        if (record.y.size() > n) throw ShapeError("direct record longer than its vector");
        RecoveryResult r;
        r.s_hat.assign(n, 0.0);
        std::copy(record.y.begin(), record.y.end(), r.s_hat.begin());
        r.converged = true;
        return r;
    }
    const auto phi = codebook.matrix(record.j, n);
    return recover(*phi, record.y, record.k, config, truth);
}

namespace {

RecoveryResult with_algorithm(const MeasurementRecord& record, const SensingCodebook& codebook,
                              RecoveryConfig config, Algorithm a) {
    config.algorithm = a;
    return recover_record(record, codebook, config);
}

} // namespace

RecoveryResult eamp_recover(const MeasurementRecord& record, const SensingCodebook& codebook,
                            RecoveryConfig config) {
    return with_algorithm(record, codebook, config, Algorithm::eamp);
}

RecoveryResult amp_recover(const MeasurementRecord& record, const SensingCodebook& codebook,
                           RecoveryConfig config) {
    return with_algorithm(record, codebook, config, Algorithm::amp);
}

RecoveryResult iht_recover(const MeasurementRecord& record, const SensingCodebook& codebook,
                           RecoveryConfig config) {
    return with_algorithm(record, codebook, config, Algorithm::iht);
}

RecoveryResult ist_recover(const MeasurementRecord& record, const SensingCodebook& codebook,
                           RecoveryConfig config) {
    return with_algorithm(record, codebook, config, Algorithm::ist);
}

SubbandPyramid recover_pyramid(std::span<const double> base_band,
                               std::span<const MeasurementRecord> records,
                               const SensingCodebook& codebook, int width, int height,
                               std::size_t target_min_n, const RecoveryConfig& config,
                               int enhancement_layers, unsigned threads) {
    config.validate();
    if (enhancement_layers < 0 || enhancement_layers > 3)
        throw StructureError("enhancement layer count must be 0..3");

    SubbandPyramid pyramid = SubbandPyramid::zeros(width, height);
    const auto regions = pyramid_regions(width, height);
    const Region& base = regions.front();
    if (base_band.size() != base.band.rect.area())
        throw BitstreamError("base band size does not match the frame geometry", 0);
    pyramid.insert(base.plane, base.band.rect, base_band);

    // Layer i carries decomposition level 4 - i.
    const int lowest_level = 4 - enhancement_layers;
    std::vector<RecordSlot> slots;
    for (const auto& s : record_layout(width, height, target_min_n))
        if (s.region.decomposition_level >= lowest_level) slots.push_back(s);
    if (slots.size() != records.size())
        throw BitstreamError("expected " + std::to_string(slots.size()) +
                                 " measurement records, got " + std::to_string(records.size()),
                             0);

    std::vector<std::vector<double>> recovered(records.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < records.size() && !failed; i = next++) {
            try {
                MeasurementRecord rec = records[i];
                rec.n = slots[i].n;
                recovered[i] = recover_record(rec, codebook, config).s_hat;
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    unsigned count = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    count = static_cast<unsigned>(std::min<std::size_t>(count, records.size()));
    if (count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // Records of one band are contiguous; de-vectorize band by band.
    std::size_t i = 0;
    while (i < slots.size()) {
        std::size_t end = i;
        while (end < slots.size() && slots[end].region.plane == slots[i].region.plane &&
               slots[end].region.band == slots[i].region.band)
            ++end;
        const Rect& rect = slots[i].region.band.rect;
        const auto band = devectorize_band(
            std::span<const std::vector<double>>(recovered.data() + i, end - i), rect.width,
            rect.height);
        pyramid.insert(slots[i].region.plane, rect, band);
        i = end;
    }
    return pyramid;
}

} // namespace cswv
