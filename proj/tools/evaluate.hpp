#ifndef POISSON_MOMENTS_TOOLS_EVALUATE_HPP
#define POISSON_MOMENTS_TOOLS_EVALUATE_HPP

#include "poisson_moments/precision.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace poisson_moments::cli {

enum class Method { recurrence, shifted, katti, closed, oracle, poly };
enum class Kind { abs, central, signed_moment };

std::string to_string(Method method);
std::string to_string(Kind kind);
const std::vector<Method>& all_methods();

/// One requested moment: E|X-a|^r, E(X-a)^r or E(X-a)^r sign(X-b).
struct Query {
    double m = 1.0;
    double a = 1.0;
    std::optional<double> b;  ///< present iff kind == signed_moment
    unsigned r = 0;
    Kind kind = Kind::abs;
    Method method = Method::recurrence;
};

struct OutputRecord {
    double m = 0.0;
    double a = 0.0;
    std::optional<double> b;
    unsigned r = 0;
    Kind kind = Kind::abs;
    Method method = Method::recurrence;
    Extended exact;  ///< full-width value; double value below is its rounding
    double value = 0.0;
    double condition = 1.0;
    std::optional<double> certified_error;  ///< oracle only
    std::int64_t elapsed_ns = 0;
    Arithmetic arithmetic = Arithmetic::native;
    bool escalated = false;
};

/// Empty when the method applies to the query, otherwise the reason it does not.
std::optional<std::string> inapplicable(const Query& q);

/// Throws PreconditionError when the method does not apply. The oracle path
/// uses prec.rel_tol as its absolute error budget.
OutputRecord evaluate(const Query& q, const PrecisionSpec& prec);

}  // namespace poisson_moments::cli

#endif  // POISSON_MOMENTS_TOOLS_EVALUATE_HPP
