#include "cswv/metrics.hpp"

#include "cswv/errors.hpp"

#include <cmath>
#include <string>

namespace cswv {

double mse(const FramePlane& reference, const FramePlane& test) {
    if (reference.width != test.width || reference.height != test.height ||
        reference.samples.size() != test.samples.size())
        throw ShapeError("frames differ in size: " + std::to_string(reference.width) + "x" +
                         std::to_string(reference.height) + " vs " + std::to_string(test.width) +
                         "x" + std::to_string(test.height));
    if (reference.samples.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < reference.samples.size(); ++i) {
        const double d = reference.samples[i] - test.samples[i];
        sum += d * d;
    }
    return sum / double(reference.samples.size());
}

double psnr_from_mse(double mse) {
    if (mse == 0.0) return kLosslessPsnr;
    return 10.0 * std::log10(kPeakValue * kPeakValue / mse);
}

double psnr(const FramePlane& reference, const FramePlane& test) {
    return psnr_from_mse(mse(reference, test));
}

PsnrReport psnr(std::span<const FramePlane> reference, std::span<const FramePlane> test) {
    if (reference.size() != test.size())
        throw ShapeError("sequences differ in length: " + std::to_string(reference.size()) +
                         " vs " + std::to_string(test.size()));
    PsnrReport r;
    if (reference.empty()) return r;
    double total = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double e = mse(reference[i], test[i]);
        r.per_frame.push_back(psnr_from_mse(e));
        total += e;
    }
    r.mean_squared_error = total / double(reference.size());
    r.average = psnr_from_mse(r.mean_squared_error);
    return r;
}

NmseResult nmse(std::span<const double> truth, std::span<const double> estimate) {
    if (truth.size() != estimate.size()) throw ShapeError("nmse operands differ in length");
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = estimate[i] - truth[i];
        err += d * d;
        ref += truth[i] * truth[i];
    }
    if (ref == 0.0) return {err, true};
    return {err / ref, false};
}

ComplexityReport complexity_report(double n, double m_fraction, int itr) {
    if (!(n > 0.0)) throw RangeError("complexity report needs n > 0");
    if (!(m_fraction >= 0.0) || m_fraction > 1.0) throw RangeError("m_fraction must lie in [0, 1]");
    if (itr < 0) throw RangeError("iteration count must be non-negative");

    ComplexityReport r;
    r.n = n;
    r.m_fraction = m_fraction;
    r.itr = itr;
    const double m = m_fraction * n;
    const double it = itr;
    r.m = m;

    // y = Phi x with a dense +/-1 matrix: additions only.
    r.conventional_encoder = {0.0, m * (n - 1.0)};
    // Two products with the dense Phi Psi per iteration.
    r.conventional_decoder = {2.0 * m * n * it, ((m * n - 1.0) + (n * m - 1.0)) * it};
    // Lifting DWT, then the +/-1 projection.
    r.proposed_encoder = {6.0 * n * n, 6.0 * (n * (n - 1.0)) + (m * n - 1.0)};
    r.proposed_decoder = {0.0, ((m * n - 1.0) + (n * m - 1.0)) * it};

    r.conventional = {r.conventional_encoder.multipliers + r.conventional_decoder.multipliers,
                      r.conventional_encoder.adders + r.conventional_decoder.adders};
    r.proposed = {r.proposed_encoder.multipliers + r.proposed_decoder.multipliers,
                  r.proposed_encoder.adders + r.proposed_decoder.adders};

    const double sweep = 2.0 * m_fraction * it;
    r.conventional_n2 = {sweep, sweep};
    r.proposed_n2 = {6.0, sweep + 6.0 + m_fraction};

    if (sweep == 0.0) {
        r.ratio_unbounded = true;
        r.multiplier_ratio = std::numeric_limits<double>::infinity();
    } else {
        r.multiplier_ratio = 6.0 / sweep;
    }
    return r;
}

RateReport rate_report(const LayeredBitstream& stream) {
    const auto& h = stream.header;
    RateReport r;
    r.raw_bits = std::uint64_t{h.width} * h.height * h.frame_count * 8;
    r.header_bits = kStreamHeaderSize * 8;
    for (const auto& c : stream.chunks) {
        r.chunk_header_bits += kChunkHeaderSize * 8;
        r.payload_bits += c.payload.size() * 8;
    }
    r.coded_bits = r.header_bits + r.chunk_header_bits + r.payload_bits;
    r.compression_ratio = r.coded_bits ? double(r.raw_bits) / double(r.coded_bits) : 0.0;

    const auto gofs = demux(stream);
    const auto layout = record_layout(static_cast<int>(h.width), static_cast<int>(h.height),
                                      h.target_min_n);
    const SensingCodebook table(h.master_seed);
    const std::size_t per_gof = std::size_t{h.width} * h.height * kGofSize;
    for (const auto& g : gofs) {
        r.coefficients += per_gof;
        std::size_t slot = 0;
        for (const auto& el : g.enhancement) {
            if (!el) break;
            for (const auto& rec : *el) {
                // Slots of absent layers come last, so indices line up.
                const auto& s = layout[slot++];
                if (rec.j == 0) continue;
                r.measurements += uses_direct_mode(rec.j, s.n - s.pad) ? s.n - s.pad
                                                                       : table.entry(rec.j).m;
            }
        }
    }
    r.measurement_percentage =
        r.coefficients ? 100.0 * double(r.measurements) / double(r.coefficients) : 0.0;
    return r;
}

} // namespace cswv
