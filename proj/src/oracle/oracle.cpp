#include "poisson_moments/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace poisson_moments::oracle {

namespace {

// |w(j)| <= scale * |j - center|^degree, or w vanishes past `support`.
struct Envelope {
    unsigned degree = 0;
    double center = 0.0;
    double scale = 1.0;
    std::optional<std::uint64_t> support;
};

Envelope envelope_of(const WeightSpec& w) {
    return std::visit(
        [](const auto& spec) -> Envelope {
            using S = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<S, Custom>) {
                if (!spec.f.has_growth()) {
                    throw PreconditionError("custom oracle weight needs a growth declaration");
                }
                const auto& growth = *spec.f.growth();
                if (const auto* support = std::get_if<FiniteSupport>(&growth)) {
                    return Envelope{spec.r, spec.a, 1.0, support->last};
                }
                const auto& poly = std::get<PolynomialGrowth>(growth);
                // |j - a| <= j + 1 + |a| and 1 + j <= j + 1 + |a|
                return Envelope{spec.r + poly.degree, -(1.0 + std::fabs(spec.a)), poly.constant, {}};
            } else {
                return Envelope{spec.r, spec.a, 1.0, {}};
            }
        },
        w);
}

Extended weight_at(const WeightSpec& w, std::uint64_t j) {
    const double jd = static_cast<double>(j);
    return std::visit(
        [&](const auto& spec) -> Extended {
            using S = std::decay_t<decltype(spec)>;
            const Extended offset = Extended(jd) - Extended(spec.a);
            if constexpr (std::is_same_v<S, Power>) {
                return int_pow(offset, spec.r);
            } else if constexpr (std::is_same_v<S, SignedPower>) {
                return int_pow(offset, spec.r) * sign_of(jd - spec.b);
            } else if constexpr (std::is_same_v<S, AbsPower>) {
                return int_pow(Extended(boost::multiprecision::abs(offset)), spec.r);
            } else {
                return int_pow(offset, spec.r) * spec.f(j);
            }
        },
        w);
}

unsigned weight_order(const WeightSpec& w) {
    return std::visit([](const auto& spec) { return spec.r; }, w);
}

Expectation sum_to(PoissonMean m, const WeightSpec& w, std::uint64_t cutoff, double tail, unsigned bits) {
    const unsigned working = std::max(bits, kMinimumBits);
    const ScopedPrecision guard(working);

    Expectation out;
    out.cutoff = cutoff;
    const auto p = pmf_sequence<Extended>(m, cutoff);
    Extended sum = 0;
    Extended magnitude = 0;
    for (std::uint64_t j = 0; j <= cutoff; ++j) {
        const Extended term = weight_at(w, j) * p[j];
        sum += term;
        magnitude += boost::multiprecision::abs(term);
    }
    out.value = sum;

    // Each term carries at most 2(j+1) roundings from the pmf ratio chain and
    // r + 3 from the weight; the running sum adds one per step.
    const double unit = std::ldexp(1.0, 1 - static_cast<int>(working));
    const double ops = 3.0 * static_cast<double>(cutoff + 1) + weight_order(w) + 8.0;
    const double rounding = 1.01 * ops * unit * to_double(magnitude);
    out.certified_error = tail + rounding;
    return out;
}

}  // namespace

Expectation expectation(PoissonMean m, const WeightSpec& w, double eps, unsigned bits) {
    if (!(eps > 0.0)) throw PreconditionError("oracle tolerance must be positive");
    const Envelope env = envelope_of(w);
    if (env.support) return sum_to(m, w, *env.support, 0.0, bits);
    const TailBound tb = truncation_index(m, env.degree, env.center, std::max(eps / (2.0 * env.scale), 1e-300));
    return sum_to(m, w, tb.cutoff, tb.bound * env.scale, bits);
}

Expectation expectation_with_cutoff(PoissonMean m, const WeightSpec& w, std::uint64_t cutoff,
                                    unsigned bits) {
    const Envelope env = envelope_of(w);
    double tail = 0.0;
    if (!env.support || cutoff < *env.support) {
        tail = tail_bound_at(m, env.degree, env.center, cutoff) * env.scale;
    }
    return sum_to(m, w, cutoff, tail, bits);
}

double relative_error(const Extended& candidate, const Extended& reference) {
    const Extended diff = boost::multiprecision::abs(Extended(candidate - reference));
    return to_double(Extended(diff / (boost::multiprecision::abs(reference) + 1)));
}

VerifyReport verify_against(PoissonMean m, const WeightSpec& w, const Extended& candidate, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("verification tolerance must be positive");
    const Expectation ref = expectation(m, w, std::max(tol * 1e-3, 1e-300));
    VerifyReport report;
    report.oracle_value = ref.value;
    report.rel_err = relative_error(candidate, ref.value);
    report.pass = report.rel_err <= tol;
    return report;
}

}  // namespace poisson_moments::oracle
