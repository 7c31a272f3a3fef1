#ifndef POISSON_MOMENTS_RECURRENCES_HPP
#define POISSON_MOMENTS_RECURRENCES_HPP

#include "poisson_moments/discrete_function.hpp"
#include "poisson_moments/numerics.hpp"
#include "poisson_moments/precision.hpp"

#include <optional>
#include <vector>

namespace poisson_moments {

/// Native results whose condition estimate exceeds this are recomputed in
/// extended precision (when PrecisionSpec::escalate is set).
inline constexpr double kConditionLimit = 1e6;

/// Bits used when a native evaluation is escalated.
inline constexpr unsigned kEscalationBits = 256;

enum class MomentKind { central, signed_moment };

/// Values of a recurrence run plus the same recurrence driven with absolute
/// values of every term. magnitudes[r] / |values[r]| is the condition
/// estimate of entry r: it bounds how much rounding error the signed sums
/// can amplify.
template <class T>
struct RecurrenceRun {
    std::vector<T> values;
    std::vector<T> magnitudes;

    double condition(unsigned r) const;
    double max_condition() const;
};

/// C(r, a) = E(X - a)^r for r = 0..r_max:
///   C(r,a) = (m - a) C(r-1,a) + m sum_{k=0}^{r-2} binom(r-1,k) C(k,a),  C(0,a) = 1.
/// T = Extended evaluates at the active MPFR precision.
template <class T>
RecurrenceRun<T> central_recurrence(PoissonMean m, double a, unsigned r_max);

/// D(r, a, b) = E(X - a)^r sign(X - b) for r = 0..r_max:
///   D(0,a,b) = 1 - 2F(b),
///   D(r,a,b) = (m - a) D(r-1,a,b) + m sum_{k=0}^{r-2} binom(r-1,k) D(k,a,b)
///              + 2 (floor(b) + 1 - a)^{r-1} e^{-m} m^{floor(b)+1} / floor(b)!.
/// For b < 0 the sign is +1 on the whole support and the central values are
/// returned.
template <class T>
RecurrenceRun<T> signed_recurrence(PoissonMean m, double a, double b, unsigned r_max);

/// Table of C(0..r_max, a) or D(0..r_max, a, b).
struct MomentTable {
    MomentKind kind = MomentKind::central;
    double m = 0.0;
    double a = 0.0;
    std::optional<double> b;  ///< present iff kind == signed_moment
    std::vector<Extended> values;
    std::vector<double> condition;
    Arithmetic arithmetic = Arithmetic::native;
    bool escalated = false;  ///< native request recomputed in extended precision

    unsigned r_max() const { return static_cast<unsigned>(values.size()) - 1; }
    double value(unsigned r) const { return to_double(values.at(r)); }
};

/// Single moment value together with its condition estimate.
struct MomentValue {
    Extended value;
    double condition = 1.0;
    Arithmetic arithmetic = Arithmetic::native;
    bool escalated = false;

    double to_double() const { return poisson_moments::to_double(value); }
};

MomentTable central_moment_table(PoissonMean m, double a, unsigned r_max, const PrecisionSpec& prec);

MomentTable signed_moment_table(PoissonMean m, double a, double b, unsigned r_max,
                                const PrecisionSpec& prec);

/// C(r, a) = m C(r-1, a-1) - a C(r-1, a). Requires r >= 1.
MomentValue central_moment_shifted(PoissonMean m, double a, unsigned r, const PrecisionSpec& prec);

/// D(r, a, b) = m D(r-1, a-1, b-1) - a D(r-1, a, b). Requires r >= 1, b >= 0.
MomentValue signed_moment_shifted(PoissonMean m, double a, double b, unsigned r,
                                  const PrecisionSpec& prec);

/// E|X - a|^r: C(r, a) for even r, D(r, a, a) for odd r.
MomentValue abs_central_moment(PoissonMean m, double a, unsigned r, const PrecisionSpec& prec);

/// E|X - m| = 2 e^{-m} m^{floor(m)+1} / floor(m)!.
template <class T = double>
T mean_deviation(PoissonMean m);

/// E|X - m|^3 and E|X - m|^5 in closed form (cdf at m plus one pmf factor).
template <class T = double>
T abs_moment_3_closed(PoissonMean m);
template <class T = double>
T abs_moment_5_closed(PoissonMean m);

/// B(r, a, f) = E(X - a)^r f(X) by the forward-difference recurrence
///   B(r,a,f) = (m - a) B(r-1,a,f) + m sum_{k=0}^{r-2} binom(r-1,k) B(k,a,f)
///              + m sum_{k=0}^{r-1} binom(r-1,k) B(k,a,Δf),
/// down to the base cases B(0, a, Δ^j f) = E Δ^j f(X), each a certified
/// truncated sum. Throws PreconditionError when f carries no growth declaration.
MomentValue b_expectation(PoissonMean m, double a, unsigned r, const DiscreteFunction& f,
                          const PrecisionSpec& prec);

extern template struct RecurrenceRun<double>;
extern template struct RecurrenceRun<Extended>;

}  // namespace poisson_moments

#endif  // POISSON_MOMENTS_RECURRENCES_HPP
