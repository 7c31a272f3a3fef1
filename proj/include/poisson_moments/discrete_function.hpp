#ifndef POISSON_MOMENTS_DISCRETE_FUNCTION_HPP
#define POISSON_MOMENTS_DISCRETE_FUNCTION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>

namespace poisson_moments {

/// |f(j)| <= constant * (1 + j)^degree for every j >= 0.
struct PolynomialGrowth {
    unsigned degree = 0;
    double constant = 1.0;
};

/// f(j) = 0 for every j > last.
struct FiniteSupport {
    std::uint64_t last = 0;
};

using GrowthDeclaration = std::variant<PolynomialGrowth, FiniteSupport>;

/// Thrown when an evaluated point contradicts the declared growth.
class GrowthViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller-supplied real function on the nonnegative integers.
///
/// The growth declaration is the caller's promise that E X^r |f(X)| is finite;
/// it also drives the truncation of every series that involves f. Each
/// evaluation is checked against the declaration.
class DiscreteFunction {
public:
    using Eval = std::function<double(std::uint64_t)>;

    /// No growth declaration: usable only where none is required.
    explicit DiscreteFunction(Eval eval);
    DiscreteFunction(Eval eval, GrowthDeclaration growth);

    static DiscreteFunction constant(double value);
    /// sign(j - b) with sign(0) = -1.
    static DiscreteFunction sign_step(double threshold);

    double operator()(std::uint64_t j) const;

    bool has_growth() const { return growth_.has_value(); }
    const std::optional<GrowthDeclaration>& growth() const { return growth_; }

private:
    Eval eval_;
    std::optional<GrowthDeclaration> growth_;
};

/// sign(y) = -1 for y <= 0 and +1 for y > 0.
constexpr double sign_of(double y) { return y > 0.0 ? 1.0 : -1.0; }

}  // namespace poisson_moments

#endif  // POISSON_MOMENTS_DISCRETE_FUNCTION_HPP
