#ifndef POISSON_MOMENTS_NUMERICS_HPP
#define POISSON_MOMENTS_NUMERICS_HPP

#include "poisson_moments/precision.hpp"

#include <cstdint>
#include <vector>

namespace poisson_moments {

/// Mean of the Poisson distribution. Always positive and finite.
class PoissonMean {
public:
    explicit PoissonMean(double m);

    double value() const { return m_; }
    operator double() const { return m_; }

private:
    double m_;
};

/// Cutoff N and a certified over-estimate of the weighted tail past N.
struct TailBound {
    std::uint64_t cutoff = 0;
    double bound = 0.0;
};

/// ln P(X = k) = -m + k ln m - ln k!, via std::lgamma.
double log_pmf(std::uint64_t k, PoissonMean m);

/// ln P(X = k) at the active MPFR precision (correctly rounded lgamma).
Extended log_pmf_extended(std::uint64_t k, PoissonMean m);

/// P(X = k) in the requested arithmetic. The double result is rounded from a
/// 128-bit evaluation; std::lgamma alone loses digits to cancellation in
/// log space once k ln m and ln k! grow large.
template <class T>
T pmf(std::uint64_t k, PoissonMean m);

/// m P(X = k) = e^{-m} m^{k+1} / k!, rounded like pmf.
template <class T>
T mean_times_pmf(std::uint64_t k, PoissonMean m);

/// ln P(X = k) in the arithmetic T.
template <class T>
T log_pmf_as(std::uint64_t k, PoissonMean m);

/// P(X = 0..last). Native terms are formed individually in log space; the
/// extended sequence uses the term ratio m / (j + 1) from e^{-m}.
template <class T>
std::vector<T> pmf_sequence(PoissonMean m, std::uint64_t last);

/// binom(n, 0..n) in the arithmetic T.
template <class T>
std::vector<T> binomial_row(unsigned n);

/// P(X <= b) by direct pmf summation up to floor(b). Accumulates in MPFR with
/// max(prec.bits, 128) bits and rounds to double.
double cdf(double b, PoissonMean m, const PrecisionSpec& prec = {});

/// P(X <= b) at the active MPFR precision.
Extended cdf_extended(double b, PoissonMean m);

/// cdf in the arithmetic T (double rounds the extended sum).
template <class T>
T cdf_as(double b, PoissonMean m);

/// Certified bound on sum_{j > cutoff} |j - center|^degree P(X = j) from the
/// term-ratio argument below; +inf when the certificate does not apply at
/// this cutoff (cutoff - center < 1 or ratio >= 1).
double tail_bound_at(PoissonMean m, unsigned degree, double center, std::uint64_t cutoff);

/// Smallest N (from the ratio certificate) such that
///   sum_{j > N} |j - center|^degree P(X = j) <= bound <= eps.
///
/// For j >= N with N - center >= 1 the ratio of successive terms is at most
///   rho(N) = (1 + 1/(N - center))^degree * m / (N + 1),
/// which decreases in j, so the tail is at most term(N) * rho / (1 - rho).
/// eps must lie in [1e-300, inf).
TailBound truncation_index(PoissonMean m, unsigned degree, double center, double eps);

}  // namespace poisson_moments

#endif  // POISSON_MOMENTS_NUMERICS_HPP
