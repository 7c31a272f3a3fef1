#include "poisson_moments/batch.hpp"

#include "poisson_moments/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace poisson_moments::batch {

std::string to_string(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa) {
    if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    if (const char* forced = std::getenv("POISSON_MOMENTS_ISA")) {
        if (std::string(forced) == "scalar") return Isa::scalar;
    }
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

RecurrenceInput prepare_central(std::span<const double> mean, std::span<const double> center) {
    if (mean.size() != center.size()) throw std::invalid_argument("batch inputs differ in length");
    RecurrenceInput in;
    in.mean.assign(mean.begin(), mean.end());
    in.center.assign(center.begin(), center.end());
    in.base.assign(mean.size(), 1.0);
    in.base_magnitude.assign(mean.size(), 1.0);
    in.jump.assign(mean.size(), 0.0);
    in.step.assign(mean.size(), 0.0);
    for (double m : mean) (void)PoissonMean(m);
    return in;
}

RecurrenceInput prepare_signed(std::span<const double> mean, std::span<const double> center,
                               std::span<const double> threshold) {
    RecurrenceInput in = prepare_central(mean, center);
    if (threshold.size() != mean.size()) throw std::invalid_argument("batch inputs differ in length");
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double b = threshold[i];
        if (b < 0.0) continue;
        const PoissonMean m(mean[i]);
        const double f = cdf(b, m);
        const auto floor_b = static_cast<std::uint64_t>(std::floor(b));
        in.base[i] = 1 - 2 * f;
        in.base_magnitude[i] = 1 + 2 * f;
        in.jump[i] = 2 * mean_times_pmf<double>(floor_b, m);
        in.step[i] = (static_cast<double>(floor_b) + 1.0) - center[i];
    }
    return in;
}

double RecurrenceOutput::condition(unsigned r, std::size_t i) const {
    const double mag = magnitudes[r * points + i];
    const double val = std::fabs(values[r * points + i]);
    if (val == 0.0) return mag == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return std::max(1.0, mag / val);
}

namespace {

void check_spans(const RecurrenceInput& in, unsigned r_max, std::span<double> values,
                 std::span<double> magnitudes) {
    const std::size_t need = (static_cast<std::size_t>(r_max) + 1) * in.size();
    if (values.size() < need || magnitudes.size() < need) {
        throw std::invalid_argument("batch output spans are too small");
    }
}

}  // namespace

void run_scalar(const RecurrenceInput& in, unsigned r_max, std::span<double> values,
                std::span<double> magnitudes) {
    check_spans(in, r_max, values, magnitudes);
    const std::size_t n = in.size();
    std::vector<double> binom;
    for (std::size_t i = 0; i < n; ++i) {
        const double mean = in.mean[i];
        const double drift = mean - in.center[i];
        const double drift_mag = std::fabs(drift);
        values[i] = in.base[i];
        magnitudes[i] = in.base_magnitude[i];
        double power = 1.0;
        binom.assign(1, 1.0);
        for (unsigned r = 1; r <= r_max; ++r) {
            double sum = 0.0;
            double sum_mag = 0.0;
            for (unsigned k = 0; k + 2 <= r; ++k) {
                sum += binom[k] * values[k * n + i];
                sum_mag += binom[k] * magnitudes[k * n + i];
            }
            double value = drift * values[(r - 1) * n + i] + mean * sum;
            double magnitude = drift_mag * magnitudes[(r - 1) * n + i] + mean * sum_mag;
            if (r > 1) power *= in.step[i];
            const double extra = in.jump[i] * power;
            values[r * n + i] = value + extra;
            magnitudes[r * n + i] = magnitude + std::fabs(extra);

            binom.push_back(1.0);
            for (std::size_t k = binom.size() - 2; k > 0; --k) binom[k] += binom[k - 1];
        }
    }
}

RecurrenceOutput run(const RecurrenceInput& in, unsigned r_max, Isa isa) {
    RecurrenceOutput out;
    out.points = in.size();
    out.r_max = r_max;
    out.values.resize((static_cast<std::size_t>(r_max) + 1) * in.size());
    out.magnitudes.resize(out.values.size());
    if (isa == Isa::avx2 && isa_supported(Isa::avx2)) {
        run_avx2(in, r_max, out.values, out.magnitudes);
    } else {
        run_scalar(in, r_max, out.values, out.magnitudes);
    }
    return out;
}

}  // namespace poisson_moments::batch
