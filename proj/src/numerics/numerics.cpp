#include "poisson_moments/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace poisson_moments {

PoissonMean::PoissonMean(double m) : m_(m) {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw PreconditionError("Poisson mean must be positive and finite, got " + std::to_string(m));
    }
}

double log_pmf(std::uint64_t k, PoissonMean m) {
    const double kd = static_cast<double>(k);
    const double k_log_m = k == 0 ? 0.0 : kd * std::log(m.value());
    return -m.value() + k_log_m - std::lgamma(kd + 1.0);
}

Extended log_pmf_extended(std::uint64_t k, PoissonMean m) {
    const Extended mm = m.value();
    const Extended kk = static_cast<double>(k);
    Extended k_log_m = 0;
    if (k != 0) k_log_m = kk * boost::multiprecision::log(mm);
    return -mm + k_log_m - boost::multiprecision::lgamma(Extended(kk + 1));
}

template <>
Extended pmf<Extended>(std::uint64_t k, PoissonMean m) {
    return boost::multiprecision::exp(log_pmf_extended(k, m));
}

template <>
double pmf<double>(std::uint64_t k, PoissonMean m) {
    const ScopedPrecision guard(128);
    return to_double(pmf<Extended>(k, m));
}

template <>
Extended mean_times_pmf<Extended>(std::uint64_t k, PoissonMean m) {
    return boost::multiprecision::exp(log_pmf_extended(k, m) + boost::multiprecision::log(Extended(m.value())));
}

template <>
double mean_times_pmf<double>(std::uint64_t k, PoissonMean m) {
    const ScopedPrecision guard(128);
    return to_double(mean_times_pmf<Extended>(k, m));
}

Extended cdf_extended(double b, PoissonMean m) {
    Extended sum = 0;
    if (b < 0.0) return sum;
    const Extended mm = m.value();
    const auto last = static_cast<std::uint64_t>(std::floor(b));
    Extended term = boost::multiprecision::exp(-mm);
    for (std::uint64_t j = 0;; ++j) {
        sum += term;
        if (j == last) break;
        term *= mm;
        term /= static_cast<double>(j + 1);
    }
    if (sum > 1) sum = 1;
    return sum;
}

double cdf(double b, PoissonMean m, const PrecisionSpec& prec) {
    if (b < 0.0) return 0.0;
    const ScopedPrecision guard(std::max(prec.bits, 128u));
    return to_double(cdf_extended(b, m));
}

template <>
double cdf_as<double>(double b, PoissonMean m) {
    return cdf(b, m);
}

template <>
Extended cdf_as<Extended>(double b, PoissonMean m) {
    return cdf_extended(b, m);
}

namespace {

// Slack for rounding in the double-precision log evaluation.
constexpr double kTailSafety = 1.0 + 1e-9;

}  // namespace

double tail_bound_at(PoissonMean m, unsigned degree, double center, std::uint64_t cutoff) {
    const double nd = static_cast<double>(cutoff);
    const double dist = nd - center;
    if (!(dist >= 1.0)) return std::numeric_limits<double>::infinity();
    const double deg = static_cast<double>(degree);
    const double rho = std::pow(1.0 + 1.0 / dist, deg) * m.value() / (nd + 1.0);
    if (rho >= 1.0) return std::numeric_limits<double>::infinity();
    const double log_term = deg * std::log(dist) + log_pmf(cutoff, m);
    return std::exp(log_term) * rho / (1.0 - rho) * kTailSafety;
}

TailBound truncation_index(PoissonMean m, unsigned degree, double center, double eps) {
    if (!(eps >= 1e-300)) {
        throw PreconditionError("truncation target must be at least 1e-300");
    }
    const double first = std::max(0.0, std::ceil(center + 1.0));
    if (first > 9.0e15) throw PreconditionError("truncation center too large");

    for (auto n = static_cast<std::uint64_t>(first);; ++n) {
        const double bound = tail_bound_at(m, degree, center, n);
        if (bound <= eps) return TailBound{n, bound};
        if (n == std::numeric_limits<std::uint64_t>::max() - 1) {
            throw InternalFault("truncation_index did not converge");
        }
    }
}

template <>
double log_pmf_as<double>(std::uint64_t k, PoissonMean m) {
    return log_pmf(k, m);
}

template <>
Extended log_pmf_as<Extended>(std::uint64_t k, PoissonMean m) {
    return log_pmf_extended(k, m);
}

template <>
std::vector<double> pmf_sequence<double>(PoissonMean m, std::uint64_t last) {
    std::vector<double> p(last + 1);
    for (std::uint64_t j = 0; j <= last; ++j) p[j] = std::exp(log_pmf(j, m));
    return p;
}

template <>
std::vector<Extended> pmf_sequence<Extended>(PoissonMean m, std::uint64_t last) {
    std::vector<Extended> p;
    p.reserve(last + 1);
    const Extended mm = m.value();
    Extended term = boost::multiprecision::exp(-mm);
    for (std::uint64_t j = 0; j <= last; ++j) {
        p.push_back(term);
        term *= mm;
        term /= static_cast<double>(j + 1);
    }
    return p;
}

template <class T>
std::vector<T> binomial_row(unsigned n) {
    std::vector<T> row(n + 1, T(0));
    row[0] = 1;
    for (unsigned i = 1; i <= n; ++i) {
        for (unsigned k = i; k > 0; --k) row[k] += row[k - 1];
    }
    return row;
}

template std::vector<double> binomial_row<double>(unsigned);
template std::vector<Extended> binomial_row<Extended>(unsigned);

}  // namespace poisson_moments
