#include "poisson_moments/precision.hpp"

#include <cmath>

namespace poisson_moments {

namespace {

std::recursive_mutex& precision_mutex() {
    static std::recursive_mutex m;
    return m;
}

}  // namespace

std::string to_string(Arithmetic a) {
    return a == Arithmetic::native ? "native" : "extended";
}

PrecisionSpec PrecisionSpec::native(double rel_tol) {
    return PrecisionSpec{Arithmetic::native, 53, rel_tol, true};
}

PrecisionSpec PrecisionSpec::extended(unsigned bits, double rel_tol) {
    return PrecisionSpec{Arithmetic::extended, bits, rel_tol, true};
}

void PrecisionSpec::validate() const {
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
        throw PreconditionError("relative tolerance must lie in (0, 1)");
    }
    if (mode == Arithmetic::extended && bits < 64) {
        throw PreconditionError("extended precision needs at least 64 mantissa bits");
    }
}

unsigned digits10_for_bits(unsigned bits) {
    // Boost converts digits10 back to bits rounding upward, so the ceiling
    // here never undershoots the request.
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120));
}

unsigned mantissa_bits(const Extended& x) {
    return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

ScopedPrecision::ScopedPrecision(unsigned bits)
    : lock_(precision_mutex()), saved_digits10_(Extended::default_precision()) {
    Extended::default_precision(digits10_for_bits(bits));
}

ScopedPrecision::~ScopedPrecision() {
    Extended::default_precision(saved_digits10_);
}

}  // namespace poisson_moments
