#pragma once

#include "cswv/sensing.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cswv {

enum class Algorithm { eamp, amp, iht, ist };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

/// What the Onsager correction divides by. The published pseudocode reads as
/// the vector length; the message-passing derivation uses the measurement count.
enum class OnsagerDivisor { measurement_count, vector_length };

/// Threshold rule for IST. Only the M-th-largest rule shared with AMP exists.
enum class IstSchedule { mth_largest };

struct Fraction {
    int num = 1;
    int den = 4;
};

struct RecoveryConfig {
    int iterations = 400;
    /// Share of iterations run with the AMP rule before EAMP switches to top-K
    /// trimming. Iteration i (1-based) is in the first phase iff
    /// i < iterations * fraction; a fraction of 1 keeps every iteration there.
    Fraction phase1_fraction{1, 4};
    Algorithm algorithm = Algorithm::eamp;
    /// Gradient step multiplier for Phi^T z; 0 selects 1/n.
    double step_scale = 0.0;
    /// Caps the step where 1/n is unstable: top-K updates take at most
    /// 1/(sqrt(m) + sqrt(2K))^2 and IST at most 1.9/(sqrt(m) + sqrt(n))^2.
    /// Neither cap binds on a top-K update while m + 2K is small next to n.
    bool stable_step = true;
    OnsagerDivisor onsager_divisor = OnsagerDivisor::measurement_count;
    IstSchedule ist_schedule = IstSchedule::mth_largest;
    /// Stop once ||y - Phi s|| < residual_tolerance.
    bool early_stop = false;
    double residual_tolerance = 1e-12;
    bool record_trace = false;

    void validate() const;
    double step_for(std::size_t n) const { return step_scale > 0.0 ? step_scale : 1.0 / double(n); }
    bool in_first_phase(int iteration) const;
};

struct RecoveryResult {
    std::vector<double> s_hat;
    double residual_norm = 0.0;
    int iterations_run = 0;
    bool converged = false;
    /// NMSE against the supplied ground truth after every iteration.
    std::vector<double> nmse_trace;
};

/// Runs config.algorithm on y = Phi s with known sparsity k. `truth` is only
/// used for the NMSE trace.
RecoveryResult recover(const BernoulliMatrix& phi, std::span<const double> y, std::uint32_t k,
                       const RecoveryConfig& config, std::span<const double> truth = {});

/// Recovers one record. j == 0 yields zeros and direct-mode records are copied.
RecoveryResult recover_record(const MeasurementRecord& record, const SensingCodebook& codebook,
                              const RecoveryConfig& config, std::span<const double> truth = {});

RecoveryResult eamp_recover(const MeasurementRecord& record, const SensingCodebook& codebook,
                            RecoveryConfig config = {});
RecoveryResult amp_recover(const MeasurementRecord& record, const SensingCodebook& codebook,
                           RecoveryConfig config = {});
RecoveryResult iht_recover(const MeasurementRecord& record, const SensingCodebook& codebook,
                           RecoveryConfig config = {});
RecoveryResult ist_recover(const MeasurementRecord& record, const SensingCodebook& codebook,
                           RecoveryConfig config = {});

/// sign(x) * max(|x| - delta, 0)
std::vector<double> soft_threshold(std::span<const double> x, double delta);
/// Zeroes all but the k largest magnitudes; ties go to the lower index.
std::vector<double> keep_largest(std::span<const double> x, std::size_t k);
/// The m-th largest magnitude (1-based).
double mth_largest_magnitude(std::span<const double> x, std::size_t m);

/// Rebuilds the pyramid from its base band and the records of the first
/// `enhancement_layers` layers (0..3). Bands of absent layers stay zero.
/// Records must be in record_layout() order.
SubbandPyramid recover_pyramid(std::span<const double> base_band,
                               std::span<const MeasurementRecord> records,
                               const SensingCodebook& codebook, int width, int height,
                               std::size_t target_min_n, const RecoveryConfig& config,
                               int enhancement_layers = 3, unsigned threads = 0);

} // namespace cswv
