#include "poisson_moments/recurrences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace poisson_moments {

namespace {

using detail::abs_of;

template <class T>
double ratio_condition(const T& magnitude, const T& value) {
    const double mag = to_double(magnitude);
    const double val = std::fabs(to_double(value));
    if (val == 0.0) return mag == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return std::max(1.0, mag / val);
}

// Drives the shared three-term recurrence from a given base entry. `correction`
// supplies the additive term for order r >= 1 (zero for central moments).
template <class T, class Correction>
RecurrenceRun<T> run_recurrence(PoissonMean m, const T& a, unsigned r_max, const T& base,
                                const T& base_magnitude, Correction&& correction) {
    RecurrenceRun<T> run;
    run.values.reserve(r_max + 1);
    run.magnitudes.reserve(r_max + 1);
    run.values.push_back(base);
    run.magnitudes.push_back(base_magnitude);

    const T mean = m.value();
    const T drift = mean - a;
    const T drift_mag = abs_of(drift);
    std::vector<T> binom{T(1)};  // row r - 1
    for (unsigned r = 1; r <= r_max; ++r) {
        T sum = 0;
        T sum_mag = 0;
        for (unsigned k = 0; k + 2 <= r; ++k) {
            sum += binom[k] * run.values[k];
            sum_mag += binom[k] * run.magnitudes[k];
        }
        T value = drift * run.values[r - 1] + mean * sum;
        T magnitude = drift_mag * run.magnitudes[r - 1] + mean * sum_mag;
        const T extra = correction(r);
        value += extra;
        magnitude += abs_of(extra);
        run.values.push_back(std::move(value));
        run.magnitudes.push_back(std::move(magnitude));

        binom.push_back(T(1));
        for (std::size_t k = binom.size() - 2; k > 0; --k) binom[k] += binom[k - 1];
    }
    return run;
}

template <class T>
RecurrenceRun<T> central_run(PoissonMean m, const T& a, unsigned r_max) {
    return run_recurrence<T>(m, a, r_max, T(1), T(1), [](unsigned) { return T(0); });
}

template <class T>
RecurrenceRun<T> signed_run(PoissonMean m, const T& a, double b, unsigned r_max) {
    if (b < 0.0) return central_run<T>(m, a, r_max);

    const T cdf_b = cdf_as<T>(b, m);
    const T base = 1 - 2 * cdf_b;
    const T base_mag = 1 + 2 * cdf_b;

    const auto floor_b = static_cast<std::uint64_t>(std::floor(b));
    // 2 e^{-m} m^{floor(b)+1} / floor(b)!, formed in log space.
    const T jump = 2 * mean_times_pmf<T>(floor_b, m);
    const T step = T(static_cast<double>(floor_b) + 1.0) - a;
    T power = 1;  // step^{r-1}, with 0^0 = 1
    return run_recurrence<T>(m, a, r_max, base, base_mag, [&](unsigned r) {
        if (r > 1) power *= step;
        return T(jump * power);
    });
}

// Evaluates `compute` in the arithmetic requested by `prec`, escalating an
// ill-conditioned native result when allowed. `compute` receives a
// std::type_identity tag and returns (value, magnitude) pairs or runs.
template <class Compute>
MomentValue evaluate_value(const PrecisionSpec& prec, Compute&& compute) {
    prec.validate();
    MomentValue out;
    if (prec.mode == Arithmetic::native) {
        const auto [value, magnitude] = compute(std::type_identity<double>{});
        out.value = value;
        out.condition = ratio_condition(magnitude, value);
        out.arithmetic = Arithmetic::native;
        if (!(prec.escalate && out.condition > kConditionLimit)) return out;
        out.escalated = true;
    }
    const ScopedPrecision guard(prec.mode == Arithmetic::native ? kEscalationBits : prec.bits);
    const auto [value, magnitude] = compute(std::type_identity<Extended>{});
    out.value = value;
    out.condition = ratio_condition(magnitude, value);
    out.arithmetic = Arithmetic::extended;
    return out;
}

template <class T>
void fill_table(MomentTable& table, const RecurrenceRun<T>& run) {
    table.values.clear();
    table.condition.clear();
    for (unsigned r = 0; r < run.values.size(); ++r) {
        table.values.emplace_back(run.values[r]);
        table.condition.push_back(run.condition(r));
    }
}

template <class Compute>
MomentTable evaluate_table(MomentTable table, const PrecisionSpec& prec, Compute&& compute) {
    prec.validate();
    if (prec.mode == Arithmetic::native) {
        const auto run = compute(std::type_identity<double>{});
        fill_table(table, run);
        table.arithmetic = Arithmetic::native;
        if (!(prec.escalate && run.max_condition() > kConditionLimit)) return table;
        table.escalated = true;
    }
    const ScopedPrecision guard(prec.mode == Arithmetic::native ? kEscalationBits : prec.bits);
    fill_table(table, compute(std::type_identity<Extended>{}));
    table.arithmetic = Arithmetic::extended;
    return table;
}

void require_order(unsigned r) {
    if (r == 0) throw PreconditionError("shift identity needs order r >= 1");
}

}  // namespace

template <class T>
double RecurrenceRun<T>::condition(unsigned r) const {
    return ratio_condition(magnitudes.at(r), values.at(r));
}

template <class T>
double RecurrenceRun<T>::max_condition() const {
    double worst = 1.0;
    for (unsigned r = 0; r < values.size(); ++r) worst = std::max(worst, condition(r));
    return worst;
}

template struct RecurrenceRun<double>;
template struct RecurrenceRun<Extended>;

template <class T>
RecurrenceRun<T> central_recurrence(PoissonMean m, double a, unsigned r_max) {
    return central_run<T>(m, T(a), r_max);
}

template <class T>
RecurrenceRun<T> signed_recurrence(PoissonMean m, double a, double b, unsigned r_max) {
    return signed_run<T>(m, T(a), b, r_max);
}

template RecurrenceRun<double> central_recurrence<double>(PoissonMean, double, unsigned);
template RecurrenceRun<Extended> central_recurrence<Extended>(PoissonMean, double, unsigned);
template RecurrenceRun<double> signed_recurrence<double>(PoissonMean, double, double, unsigned);
template RecurrenceRun<Extended> signed_recurrence<Extended>(PoissonMean, double, double, unsigned);

MomentTable central_moment_table(PoissonMean m, double a, unsigned r_max, const PrecisionSpec& prec) {
    MomentTable table;
    table.kind = MomentKind::central;
    table.m = m.value();
    table.a = a;
    return evaluate_table(std::move(table), prec, [&]<class T>(std::type_identity<T>) {
        return central_run<T>(m, T(a), r_max);
    });
}

MomentTable signed_moment_table(PoissonMean m, double a, double b, unsigned r_max,
                                const PrecisionSpec& prec) {
    MomentTable table;
    table.kind = MomentKind::signed_moment;
    table.m = m.value();
    table.a = a;
    table.b = b;
    return evaluate_table(std::move(table), prec, [&]<class T>(std::type_identity<T>) {
        return signed_run<T>(m, T(a), b, r_max);
    });
}

MomentValue central_moment_shifted(PoissonMean m, double a, unsigned r, const PrecisionSpec& prec) {
    require_order(r);
    return evaluate_value(prec, [&]<class T>(std::type_identity<T>) {
        const T center = a;
        const T mean = m.value();
        const auto lower = central_run<T>(m, T(center - 1), r - 1);
        const auto same = central_run<T>(m, center, r - 1);
        T value = mean * lower.values[r - 1] - center * same.values[r - 1];
        T magnitude = mean * lower.magnitudes[r - 1] + abs_of(center) * same.magnitudes[r - 1];
        return std::pair{value, magnitude};
    });
}

MomentValue signed_moment_shifted(PoissonMean m, double a, double b, unsigned r,
                                  const PrecisionSpec& prec) {
    require_order(r);
    if (b < 0.0) throw PreconditionError("signed shift identity needs threshold b >= 0");
    return evaluate_value(prec, [&]<class T>(std::type_identity<T>) {
        const T center = a;
        const T mean = m.value();
        const auto lower = signed_run<T>(m, T(center - 1), b - 1.0, r - 1);
        const auto same = signed_run<T>(m, center, b, r - 1);
        T value = mean * lower.values[r - 1] - center * same.values[r - 1];
        T magnitude = mean * lower.magnitudes[r - 1] + abs_of(center) * same.magnitudes[r - 1];
        return std::pair{value, magnitude};
    });
}

MomentValue abs_central_moment(PoissonMean m, double a, unsigned r, const PrecisionSpec& prec) {
    return evaluate_value(prec, [&]<class T>(std::type_identity<T>) {
        const auto run = r % 2 == 0 ? central_run<T>(m, T(a), r) : signed_run<T>(m, T(a), a, r);
        return std::pair{run.values[r], run.magnitudes[r]};
    });
}

template <class T>
T mean_deviation(PoissonMean m) {
    const auto floor_m = static_cast<std::uint64_t>(std::floor(m.value()));
    return 2 * mean_times_pmf<T>(floor_m, m);
}

template <class T>
T abs_moment_3_closed(PoissonMean m) {
    const T mean = m.value();
    const double floor_m = std::floor(m.value());
    const T frac = mean - floor_m;
    const T tail = 1 - 2 * cdf_as<T>(m.value(), m);
    const T factor = mean_deviation<T>(m) / 2;  // e^{-m} m^{floor(m)+1} / floor(m)!
    return mean * tail + 2 * (frac * frac + 2 * floor_m + 1) * factor;
}

template <class T>
T abs_moment_5_closed(PoissonMean m) {
    const T mean = m.value();
    const double floor_m = std::floor(m.value());
    const T frac = mean - floor_m;
    const T up = floor_m + 1 - mean;
    const T tail = 1 - 2 * cdf_as<T>(m.value(), m);
    const T factor = mean_deviation<T>(m) / 2;
    const T bracket = int_pow(up, 4) + 2 * mean * (2 * frac * frac + 7 * floor_m + 7 - 3 * mean);
    return (10 * mean * mean + mean) * tail + 2 * bracket * factor;
}

template double mean_deviation<double>(PoissonMean);
template Extended mean_deviation<Extended>(PoissonMean);
template double abs_moment_3_closed<double>(PoissonMean);
template Extended abs_moment_3_closed<Extended>(PoissonMean);
template double abs_moment_5_closed<double>(PoissonMean);
template Extended abs_moment_5_closed<Extended>(PoissonMean);

namespace {

// Cutoff and per-depth tail bounds for the base cases E Δ^j f(X), j = 0..depth.
struct BaseTruncation {
    std::uint64_t cutoff = 0;
    std::vector<double> tails;
};

BaseTruncation truncate_differences(PoissonMean m, const GrowthDeclaration& growth, unsigned depth,
                                    double eps) {
    BaseTruncation out;
    out.tails.assign(depth + 1, 0.0);
    if (const auto* support = std::get_if<FiniteSupport>(&growth)) {
        out.cutoff = support->last;
        return out;
    }
    const auto& poly = std::get<PolynomialGrowth>(growth);
    for (unsigned j = 0; j <= depth; ++j) {
        // |Δ^j f(x)| <= 2^j Cf (1 + x + j)^d
        const double scale = std::ldexp(poly.constant, static_cast<int>(j));
        const TailBound tb = truncation_index(m, poly.degree, -(1.0 + j), std::max(eps / scale, 1e-300));
        out.cutoff = std::max(out.cutoff, tb.cutoff);
        out.tails[j] = tb.bound * scale;
    }
    return out;
}

}  // namespace

MomentValue b_expectation(PoissonMean m, double a, unsigned r, const DiscreteFunction& f,
                          const PrecisionSpec& prec) {
    if (!f.has_growth()) {
        throw PreconditionError("b_expectation needs a growth declaration on f");
    }
    prec.validate();
    const double eps = std::max(prec.rel_tol * 1e-6, 1e-300);
    const BaseTruncation trunc = truncate_differences(m, *f.growth(), r, eps);

    std::vector<double> samples(trunc.cutoff + r + 1);
    for (std::uint64_t x = 0; x < samples.size(); ++x) samples[x] = f(x);

    return evaluate_value(prec, [&]<class T>(std::type_identity<T>) {
        const std::uint64_t n = trunc.cutoff;
        const auto p = pmf_sequence<T>(m, n);

        // base[j] = E Δ^j f(X) and its magnitude counterpart.
        std::vector<T> base(r + 1), base_mag(r + 1);
        std::vector<T> diff(samples.begin(), samples.end());
        std::vector<T> diff_mag(diff.size());
        for (std::size_t x = 0; x < diff.size(); ++x) diff_mag[x] = abs_of(diff[x]);
        for (unsigned j = 0; j <= r; ++j) {
            if (j > 0) {
                for (std::size_t x = 0; x + j < samples.size(); ++x) {
                    diff[x] = diff[x + 1] - diff[x];
                    diff_mag[x] = diff_mag[x + 1] + diff_mag[x];
                }
            }
            T sum = 0, sum_mag = 0;
            for (std::uint64_t x = 0; x <= n; ++x) {
                sum += diff[x] * p[x];
                sum_mag += diff_mag[x] * p[x];
            }
            base[j] = sum;
            base_mag[j] = sum_mag + T(trunc.tails[j]);
        }

        // level[j][k] = B(k, a, Δ^j f) for k + j <= r, built from the deepest
        // difference upward so level j + 1 is complete before level j.
        const T mean = m.value();
        const T drift = mean - T(a);
        const T drift_mag = abs_of(drift);
        std::vector<std::vector<T>> level(r + 2), level_mag(r + 2);
        for (unsigned jj = r + 1; jj-- > 0;) {
            const unsigned top = r - jj;
            auto& val = level[jj];
            auto& mag = level_mag[jj];
            val.assign(1, base[jj]);
            mag.assign(1, base_mag[jj]);
            std::vector<T> binom{T(1)};  // row k - 1
            for (unsigned k = 1; k <= top; ++k) {
                T own = 0, own_mag = 0, diffs = 0, diffs_mag = 0;
                for (unsigned i = 0; i + 2 <= k; ++i) {
                    own += binom[i] * val[i];
                    own_mag += binom[i] * mag[i];
                }
                for (unsigned i = 0; i + 1 <= k; ++i) {
                    diffs += binom[i] * level[jj + 1][i];
                    diffs_mag += binom[i] * level_mag[jj + 1][i];
                }
                val.push_back(drift * val[k - 1] + mean * own + mean * diffs);
                mag.push_back(drift_mag * mag[k - 1] + mean * own_mag + mean * diffs_mag);
                binom.push_back(T(1));
                for (std::size_t i = binom.size() - 2; i > 0; --i) binom[i] += binom[i - 1];
            }
        }
        return std::pair{level[0][r], level_mag[0][r]};
    });
}

}  // namespace poisson_moments
