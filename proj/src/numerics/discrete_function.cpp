#include "poisson_moments/discrete_function.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace poisson_moments {

DiscreteFunction::DiscreteFunction(Eval eval) : eval_(std::move(eval)) {}

DiscreteFunction::DiscreteFunction(Eval eval, GrowthDeclaration growth)
    : eval_(std::move(eval)), growth_(growth) {
    if (const auto* poly = std::get_if<PolynomialGrowth>(&*growth_)) {
        if (!(poly->constant > 0.0) || !std::isfinite(poly->constant)) {
            throw std::invalid_argument("growth constant must be positive and finite");
        }
    }
}

DiscreteFunction DiscreteFunction::constant(double value) {
    const double c = value == 0.0 ? 1.0 : std::fabs(value);
    return DiscreteFunction([value](std::uint64_t) { return value; }, PolynomialGrowth{0, c});
}

DiscreteFunction DiscreteFunction::sign_step(double threshold) {
    return DiscreteFunction(
        [threshold](std::uint64_t j) { return sign_of(static_cast<double>(j) - threshold); },
        PolynomialGrowth{0, 1.0});
}

double DiscreteFunction::operator()(std::uint64_t j) const {
    const double v = eval_(j);
    if (!std::isfinite(v)) {
        throw GrowthViolation("f(" + std::to_string(j) + ") is not finite");
    }
    if (!growth_) return v;
    if (const auto* poly = std::get_if<PolynomialGrowth>(&*growth_)) {
        const double limit =
            poly->constant * std::pow(1.0 + static_cast<double>(j), static_cast<double>(poly->degree));
        if (std::fabs(v) > limit * (1.0 + 1e-12)) {
            throw GrowthViolation("f(" + std::to_string(j) + ") exceeds the declared growth bound");
        }
    } else if (const auto* support = std::get_if<FiniteSupport>(&*growth_)) {
        if (j > support->last && v != 0.0) {
            throw GrowthViolation("f(" + std::to_string(j) + ") is nonzero outside the declared support");
        }
    }
    return v;
}

}  // namespace poisson_moments
