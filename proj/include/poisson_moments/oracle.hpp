#ifndef POISSON_MOMENTS_ORACLE_HPP
#define POISSON_MOMENTS_ORACLE_HPP

// Brute-force reference. Depends only on the numerics core so that it stays
// independent of every method it referees.

#include "poisson_moments/discrete_function.hpp"
#include "poisson_moments/numerics.hpp"
#include "poisson_moments/precision.hpp"

#include <variant>

namespace poisson_moments::oracle {

/// (j - a)^r
struct Power {
    unsigned r = 0;
    double a = 0.0;
};

/// (j - a)^r sign(j - b)
struct SignedPower {
    unsigned r = 0;
    double a = 0.0;
    double b = 0.0;
};

/// |j - a|^r
struct AbsPower {
    unsigned r = 0;
    double a = 0.0;
};

/// (j - a)^r f(j); f must declare its growth.
struct Custom {
    DiscreteFunction f;
    unsigned r = 0;
    double a = 0.0;
};

using WeightSpec = std::variant<Power, SignedPower, AbsPower, Custom>;

inline constexpr unsigned kDefaultBits = 256;
inline constexpr unsigned kMinimumBits = 128;

struct Expectation {
    Extended value;
    double certified_error = 0.0;  ///< tail bound plus rounding bound
    std::uint64_t cutoff = 0;
};

/// E w(X) by summing j = 0..N in MPFR (at least 128 bits, whatever the caller
/// uses). N comes from truncation_index for the weight's growth so that the
/// neglected tail is at most eps / 2; the reported error adds a bound on the
/// accumulated rounding.
Expectation expectation(PoissonMean m, const WeightSpec& w, double eps, unsigned bits = kDefaultBits);

/// Same sum with an explicit cutoff; certified_error carries only the tail
/// bound for that cutoff plus rounding.
Expectation expectation_with_cutoff(PoissonMean m, const WeightSpec& w, std::uint64_t cutoff,
                                    unsigned bits = kDefaultBits);

struct VerifyReport {
    bool pass = false;
    Extended oracle_value;
    double rel_err = 0.0;  ///< |candidate - oracle| / (|oracle| + 1)
};

/// pass iff |candidate - oracle| <= tol (|oracle| + 1).
VerifyReport verify_against(PoissonMean m, const WeightSpec& w, const Extended& candidate, double tol);

/// Relative error in the (|reference| + 1) metric used by every comparison here.
double relative_error(const Extended& candidate, const Extended& reference);

}  // namespace poisson_moments::oracle

#endif  // POISSON_MOMENTS_ORACLE_HPP
