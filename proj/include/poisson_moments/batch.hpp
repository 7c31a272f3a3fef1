#ifndef POISSON_MOMENTS_BATCH_HPP
#define POISSON_MOMENTS_BATCH_HPP

// Native-double recurrence tables for many (m, a[, b]) points at once.
//
// The per-point setup (cdf, pmf jump) is scalar; the O(r^2) recurrence runs
// lane-parallel. Every kernel performs the same operations in the same order
// as central_recurrence<double> / signed_recurrence<double>, so results are
// bitwise identical across kernels and to the single-point path.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace poisson_moments::batch {

enum class Isa { scalar, avx2 };

std::string to_string(Isa isa);

/// Best kernel the CPU supports. POISSON_MOMENTS_ISA=scalar forces the
/// reference kernel.
Isa active_isa();
bool isa_supported(Isa isa);

/// Structure-of-arrays recurrence input, one entry per point.
struct RecurrenceInput {
    std::vector<double> mean;
    std::vector<double> center;
    std::vector<double> base;            ///< entry r = 0
    std::vector<double> base_magnitude;
    std::vector<double> jump;            ///< signed correction factor (0 for central)
    std::vector<double> step;            ///< floor(b) + 1 - a (unused when jump = 0)

    std::size_t size() const { return mean.size(); }
};

RecurrenceInput prepare_central(std::span<const double> mean, std::span<const double> center);
/// Points with b < 0 reduce to central entries.
RecurrenceInput prepare_signed(std::span<const double> mean, std::span<const double> center,
                               std::span<const double> threshold);

/// values and magnitudes are (r_max + 1) x n, row-major by order:
/// entry (r, i) lives at r * n + i.
struct RecurrenceOutput {
    std::size_t points = 0;
    unsigned r_max = 0;
    std::vector<double> values;
    std::vector<double> magnitudes;

    double value(unsigned r, std::size_t i) const { return values[r * points + i]; }
    double condition(unsigned r, std::size_t i) const;
};

void run_scalar(const RecurrenceInput& in, unsigned r_max, std::span<double> values,
                std::span<double> magnitudes);
void run_avx2(const RecurrenceInput& in, unsigned r_max, std::span<double> values,
              std::span<double> magnitudes);

RecurrenceOutput run(const RecurrenceInput& in, unsigned r_max, Isa isa = active_isa());

}  // namespace poisson_moments::batch

#endif  // POISSON_MOMENTS_BATCH_HPP
