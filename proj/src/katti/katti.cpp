#include "poisson_moments/katti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace poisson_moments {

namespace {

void require_valid_beta(double beta) {
    if (beta <= 0.0 && std::floor(beta) == beta) {
        throw PreconditionError("1F1 is undefined for nonpositive integer beta");
    }
}

double series_tolerance(const PrecisionSpec& prec) {
    if (prec.mode == Arithmetic::native) return prec.rel_tol;
    return std::min(prec.rel_tol, std::max(std::ldexp(1.0, -static_cast<int>(prec.bits)), 1e-300));
}

}  // namespace

template <class T>
T hyp1f1(const Hyp1F1Params& p, double rel_tol) {
    require_valid_beta(p.beta);
    const double cap = 10.0 * (std::fabs(p.z) + std::fabs(p.alpha) + std::fabs(p.beta)) + 1000.0;
    const T z = p.z;
    T term = 1;
    T sum = 1;
    unsigned small_run = 0;
    for (double n = 0.0; n < cap; n += 1.0) {
        term *= z * (p.alpha + n);
        term /= (p.beta + n) * (n + 1.0);
        sum += term;
        if (detail::abs_of(term) <= rel_tol * detail::abs_of(sum)) {
            if (++small_run == 3) return sum;
        } else {
            small_run = 0;
        }
    }
    throw InternalFault("1F1 series exceeded its iteration cap");
}

template double hyp1f1<double>(const Hyp1F1Params&, double);
template Extended hyp1f1<Extended>(const Hyp1F1Params&, double);

Extended hyp1f1(const Hyp1F1Params& p, const PrecisionSpec& prec) {
    prec.validate();
    if (prec.mode == Arithmetic::native) return Extended(hyp1f1<double>(p, prec.rel_tol));
    const ScopedPrecision guard(prec.bits);
    return hyp1f1<Extended>(p, series_tolerance(prec));
}

template <class T>
GTable<T> g_table(double a, PoissonMean m, unsigned r, double rel_tol) {
    if (r % 2 == 0) throw PreconditionError("G table is defined for odd r");
    GTable<T> table;
    table.a = a;
    table.m = m.value();
    table.r = r;
    const double floor_a = std::floor(a);
    const T center = a;

    auto& g = table.entries;
    g.assign(r + 1, {});
    for (unsigned beta = 0; beta <= r; ++beta) {
        const double b = beta;
        g[0].push_back(hyp1f1<T>({b + 1.0, b + floor_a + 2.0, m.value()}, rel_tol));
    }
    // The recursion also holds at s = 0; G^{(1)} comes from G^{(0)}.
    for (unsigned s = 0; s < r; ++s) {
        for (unsigned beta = 0; beta + s + 1 <= r; ++beta) {
            const double b = beta;
            const T shift = T(floor_a + b + 1.0) - center;
            const T weight = T(m.value()) * (b + 1.0) / (b + floor_a + 2.0);
            g[s + 1].push_back(shift * g[s][beta] + weight * g[s][beta + 1]);
        }
    }
    return table;
}

template struct GTable<double>;
template struct GTable<Extended>;
template GTable<double> g_table<double>(double, PoissonMean, unsigned, double);
template GTable<Extended> g_table<Extended>(double, PoissonMean, unsigned, double);

namespace {

template <class T>
std::pair<T, T> katti_terms(PoissonMean m, double a, unsigned r, double rel_tol) {
    const auto moment = central_recurrence<T>(m, a, r).values[r];
    const auto g = g_table<T>(a, m, r, rel_tol);
    const auto floor_a = static_cast<std::uint64_t>(std::floor(a));
    // e^{-m} m^{floor(a)+1} / (floor(a)+1)! = P(X = floor(a) + 1)
    const T factor = pmf<T>(floor_a + 1, m);
    return {moment, T(2 * factor * g.top())};
}

}  // namespace

MomentValue katti_abs_moment(PoissonMean m, double a, unsigned r, const PrecisionSpec& prec) {
    if (r % 2 == 0) throw PreconditionError("hypergeometric route needs odd r");
    if (a < 0.0) throw PreconditionError("hypergeometric route needs center a >= 0");
    prec.validate();

    MomentValue out;
    const auto assemble = [&out](const auto& moment, const auto& correction) {
        out.value = correction - moment;
        const double total = std::fabs(to_double(moment)) + std::fabs(to_double(correction));
        const double result = std::fabs(to_double(out.value));
        out.condition = result == 0.0 ? std::numeric_limits<double>::infinity()
                                      : std::max(1.0, total / result);
    };

    if (prec.mode == Arithmetic::native) {
        const auto [moment, correction] = katti_terms<double>(m, a, r, prec.rel_tol);
        assemble(moment, correction);
        out.arithmetic = Arithmetic::native;
        if (!(prec.escalate && out.condition > kConditionLimit)) return out;
        out.escalated = true;
    }
    const unsigned bits = prec.mode == Arithmetic::native ? kEscalationBits : prec.bits;
    const ScopedPrecision guard(bits);
    PrecisionSpec working = PrecisionSpec::extended(bits, prec.rel_tol);
    const auto [moment, correction] = katti_terms<Extended>(m, a, r, series_tolerance(working));
    assemble(moment, correction);
    out.arithmetic = Arithmetic::extended;
    return out;
}

}  // namespace poisson_moments
