#ifndef POISSON_MOMENTS_PRECISION_HPP
#define POISSON_MOMENTS_PRECISION_HPP

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>

namespace poisson_moments {

/// Variable-precision MPFR float. Values keep the mantissa width that was
/// active when they were created, see ScopedPrecision.
using Extended = boost::multiprecision::mpfr_float;

/// Raised when a caller violates an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an internal guard trips (iteration caps and the like).
class InternalFault : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Arithmetic { native, extended };

std::string to_string(Arithmetic a);

/// Arithmetic mode plus the relative tolerance used by iterative pieces
/// (series termination, truncation targets).
struct PrecisionSpec {
    Arithmetic mode = Arithmetic::native;
    unsigned bits = 53;
    double rel_tol = 1e-12;
    /// Recompute ill-conditioned native results in extended precision.
    bool escalate = true;

    static PrecisionSpec native(double rel_tol = 1e-12);
    static PrecisionSpec extended(unsigned bits = 256, double rel_tol = 1e-40);

    /// Throws PreconditionError unless 0 < rel_tol < 1 and bits >= 64 in
    /// extended mode.
    void validate() const;
};

/// Sets the MPFR working precision for the current scope.
///
/// The default precision of the Boost MPFR backend is process-global, so the
/// guard also holds a process-wide recursive lock: extended-precision
/// evaluations are serialized. Nested guards restore the outer width.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned bits);
    ~ScopedPrecision();

    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    std::unique_lock<std::recursive_mutex> lock_;
    unsigned saved_digits10_;
};

/// Decimal digits that give at least `bits` bits of mantissa.
unsigned digits10_for_bits(unsigned bits);

/// Mantissa bits currently carried by `x`.
unsigned mantissa_bits(const Extended& x);

inline double to_double(double x) { return x; }
inline double to_double(const Extended& x) { return x.convert_to<double>(); }

/// Integer power with 0^0 = 1.
template <class T>
T int_pow(const T& base, unsigned exponent) {
    T result = 1;
    T b = base;
    while (exponent != 0) {
        if (exponent & 1u) result *= b;
        exponent >>= 1;
        if (exponent != 0) b *= b;
    }
    return result;
}

namespace detail {

inline double abs_of(double x) { return std::fabs(x); }
inline Extended abs_of(const Extended& x) { return boost::multiprecision::abs(x); }
inline double exp_of(double x) { return std::exp(x); }
inline Extended exp_of(const Extended& x) { return boost::multiprecision::exp(x); }
inline double log_of(double x) { return std::log(x); }
inline Extended log_of(const Extended& x) { return boost::multiprecision::log(x); }

}  // namespace detail

}  // namespace poisson_moments

#endif  // POISSON_MOMENTS_PRECISION_HPP
