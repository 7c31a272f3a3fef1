#ifndef POISSON_MOMENTS_KENDALL_HPP
#define POISSON_MOMENTS_KENDALL_HPP

#include "poisson_moments/numerics.hpp"
#include "poisson_moments/precision.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace poisson_moments {

using BigInt = boost::multiprecision::cpp_int;

/// mu_r(m) = E(X - m)^r as an integer polynomial in m; coeffs[k] multiplies m^k.
/// Trailing zero coefficients are trimmed, the zero polynomial keeps one entry.
struct MomentPolynomial {
    unsigned order = 0;
    std::vector<BigInt> coeffs;

    unsigned degree() const { return static_cast<unsigned>(coeffs.size()) - 1; }
    bool operator==(const MomentPolynomial&) const = default;
};

/// mu_0 .. mu_{r_max} from mu_r = m sum_{k=0}^{r-2} binom(r-1,k) mu_k.
std::vector<MomentPolynomial> moment_polynomials(unsigned r_max);

/// Exact check of mu_{r+1} = r m mu_{r-1} + m d(mu_r)/dm. Requires r >= 1.
bool check_derivative_identity(unsigned r);

/// Horner evaluation at m in the arithmetic of `prec`.
Extended evaluate_polynomial(const MomentPolynomial& p, PoissonMean m, const PrecisionSpec& prec);

/// "[c0, c1, ...]"
std::string format_coefficients(const MomentPolynomial& p);

}  // namespace poisson_moments

#endif  // POISSON_MOMENTS_KENDALL_HPP
