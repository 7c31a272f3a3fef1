// Tests for the moment recurrences, shift identities, absolute-moment
// dispatch, closed forms and the forward-difference B recurrence. Reference
// values come from the brute-force oracle, which shares no code with the
// recurrences.

#include "poisson_moments/oracle.hpp"
#include "poisson_moments/recurrences.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace poisson_moments;
using Catch::Approx;

namespace {

const double kTwoOverE = 2.0 / std::exp(1.0);

double rel(double candidate, double reference) {
    return std::fabs(candidate - reference) / (std::fabs(reference) + 1.0);
}

double oracle_value(double m, const oracle::WeightSpec& w) {
    return to_double(oracle::expectation(PoissonMean(m), w, 1e-25).value);
}

const std::vector<double> kMeans{0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0};

std::vector<double> centers_for(double m) {
    return {0.0, m, std::floor(m) + 0.3, m + 1.0, -1.5};
}

}  // namespace

TEST_CASE("central table examples", "[recurrences][central]") {
    const auto prec = PrecisionSpec::native();
    for (double m : {0.3, 2.0, 9.0}) {
        for (double a : {-1.0, 0.0, 1.7}) {
            const auto t = central_moment_table(PoissonMean(m), a, 3, prec);
            REQUIRE(t.values.size() == 4);
            REQUIRE(t.value(0) == 1.0);
            REQUIRE(t.value(1) == Approx(m - a).margin(1e-15));
            REQUIRE(t.kind == MomentKind::central);
            REQUIRE_FALSE(t.b.has_value());
        }
    }
    // mu_4 = 3 m^2 + m at m = 2
    REQUIRE(central_moment_table(PoissonMean(2.0), 2.0, 4, prec).value(4) == Approx(14.0).epsilon(1e-14));
    REQUIRE(central_moment_table(PoissonMean(2.0), 0.0, 0, prec).values.size() == 1);
}

TEST_CASE("central table agrees with the oracle", "[recurrences][central][oracle]") {
    const auto prec = PrecisionSpec::native();
    for (double m : kMeans) {
        for (double a : centers_for(m)) {
            const auto t = central_moment_table(PoissonMean(m), a, 8, prec);
            for (unsigned r = 0; r <= 8; ++r) {
                INFO("m=" << m << " a=" << a << " r=" << r);
                REQUIRE(rel(t.value(r), oracle_value(m, oracle::Power{r, a})) <= 1e-10);
            }
        }
    }
}

TEST_CASE("central shift identity", "[recurrences][shifted]") {
    const auto prec = PrecisionSpec::native();
    REQUIRE(central_moment_shifted(PoissonMean(3.0), 0.0, 2, prec).to_double() == Approx(12.0).epsilon(1e-15));
    REQUIRE(central_moment_shifted(PoissonMean(3.0), 1.25, 1, prec).to_double() == Approx(1.75).epsilon(1e-15));
    REQUIRE_THROWS_AS(central_moment_shifted(PoissonMean(3.0), 0.0, 0, prec), PreconditionError);

    for (double m : kMeans) {
        for (double a : centers_for(m)) {
            const auto t = central_moment_table(PoissonMean(m), a, 10, prec);
            for (unsigned r = 1; r <= 10; ++r) {
                const auto s = central_moment_shifted(PoissonMean(m), a, r, prec);
                INFO("m=" << m << " a=" << a << " r=" << r);
                REQUIRE(rel(s.to_double(), t.value(r)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("signed table examples", "[recurrences][signed]") {
    const auto prec = PrecisionSpec::native();
    const auto base = signed_moment_table(PoissonMean(1.0), 0.4, 0.0, 0, prec);
    REQUIRE(base.value(0) == Approx(1.0 - kTwoOverE).epsilon(1e-15));
    REQUIRE(base.kind == MomentKind::signed_moment);
    REQUIRE(base.b == 0.0);

    const auto crow = signed_moment_table(PoissonMean(1.0), 1.0, 1.0, 1, prec);
    REQUIRE(crow.value(1) == Approx(kTwoOverE).epsilon(1e-15));

    // b < 0: sign(X - b) = +1 on the whole support
    for (double a : {-2.0, 0.0, 3.5}) {
        const auto s = signed_moment_table(PoissonMean(2.5), a, -1.0, 7, prec);
        const auto c = central_moment_table(PoissonMean(2.5), a, 7, prec);
        for (unsigned r = 0; r <= 7; ++r) REQUIRE(s.value(r) == c.value(r));
    }
}

TEST_CASE("signed table agrees with the oracle", "[recurrences][signed][oracle]") {
    const auto prec = PrecisionSpec::native();
    for (double m : kMeans) {
        for (double a : centers_for(m)) {
            for (double b : {a, 0.0, m / 2.0, std::floor(m), 3.0}) {
                const auto t = signed_moment_table(PoissonMean(m), a, b, 8, prec);
                for (unsigned r = 0; r <= 8; ++r) {
                    INFO("m=" << m << " a=" << a << " b=" << b << " r=" << r);
                    REQUIRE(rel(t.value(r), oracle_value(m, oracle::SignedPower{r, a, b})) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("D(0,a,b) counts the mass at an integer threshold as negative", "[recurrences][signed]") {
    const auto prec = PrecisionSpec::native();
    for (double m : {0.7, 3.0, 12.0}) {
        for (double b : {0.0, 1.0, 2.0, 5.0}) {
            const auto t = signed_moment_table(PoissonMean(m), 0.0, b, 0, prec);
            const double direct = oracle_value(m, oracle::SignedPower{0, 0.0, b});
            REQUIRE(t.value(0) == Approx(direct).margin(1e-14));
            // P(X = b) sits on the -1 side: 1 - 2 P(X <= b)
            REQUIRE(t.value(0) == Approx(1.0 - 2.0 * cdf(b, PoissonMean(m))).margin(1e-15));
        }
    }
}

TEST_CASE("signed shift identity", "[recurrences][shifted]") {
    const auto prec = PrecisionSpec::native();
    const PoissonMean one(1.0);
    REQUIRE(signed_moment_shifted(one, 0.0, 0.5, 1, prec).to_double() ==
            Approx(signed_moment_table(one, 0.0, 0.5, 1, prec).value(1)).epsilon(1e-14));
    REQUIRE(signed_moment_shifted(PoissonMean(2.0), 2.0, 2.0, 3, prec).to_double() ==
            Approx(abs_moment_3_closed(PoissonMean(2.0))).epsilon(1e-13));
    for (double b : {0.0, 0.5, 1.0, 4.2}) {
        const double expected = 2.5 * (1.0 - 2.0 * cdf(b - 1.0, PoissonMean(2.5)));
        REQUIRE(signed_moment_shifted(PoissonMean(2.5), 0.0, b, 1, prec).to_double() ==
                Approx(expected).epsilon(1e-14));
    }
    REQUIRE_THROWS_AS(signed_moment_shifted(one, 0.0, -0.5, 2, prec), PreconditionError);
    REQUIRE_THROWS_AS(signed_moment_shifted(one, 0.0, 0.5, 0, prec), PreconditionError);

    for (double m : kMeans) {
        for (double a : centers_for(m)) {
            for (double b : {std::max(a, 0.0), 0.0, m / 2.0}) {
                const auto t = signed_moment_table(PoissonMean(m), a, b, 9, prec);
                for (unsigned r = 1; r <= 9; ++r) {
                    const auto s = signed_moment_shifted(PoissonMean(m), a, b, r, prec);
                    INFO("m=" << m << " a=" << a << " b=" << b << " r=" << r);
                    REQUIRE(rel(s.to_double(), t.value(r)) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("absolute central moment dispatch", "[recurrences][abs]") {
    const auto prec = PrecisionSpec::native();
    REQUIRE(abs_central_moment(PoissonMean(3.0), 1.2, 0, prec).to_double() == 1.0);
    REQUIRE(abs_central_moment(PoissonMean(4.0), 4.0, 2, prec).to_double() == Approx(4.0).epsilon(1e-15));
    REQUIRE(abs_central_moment(PoissonMean(1.0), 1.0, 1, prec).to_double() == Approx(kTwoOverE).epsilon(1e-15));

    for (double m : kMeans) {
        for (double a : centers_for(m)) {
            for (unsigned r = 0; r <= 9; ++r) {
                const double v = abs_central_moment(PoissonMean(m), a, r, prec).to_double();
                INFO("m=" << m << " a=" << a << " r=" << r);
                REQUIRE(v >= 0.0);
                REQUIRE(rel(v, oracle_value(m, oracle::AbsPower{r, a})) <= 1e-10);
            }
        }
    }
}

TEST_CASE("signed moments are dominated by absolute moments", "[recurrences][property]") {
    const auto prec = PrecisionSpec::native();
    for (double m : kMeans) {
        for (double a : centers_for(m)) {
            for (double b : {0.0, 0.5, m / 3.0, m, 2.0 * m + 1.0}) {
                const auto d = signed_moment_table(PoissonMean(m), a, b, 8, prec);
                for (unsigned r = 0; r <= 8; ++r) {
                    const double absolute = abs_central_moment(PoissonMean(m), a, r, prec).to_double();
                    REQUIRE(std::fabs(d.value(r)) <= absolute * (1.0 + 1e-12) + 1e-300);
                }
            }
        }
    }
}

TEST_CASE("second central moment about the mean grows with m", "[recurrences][property]") {
    const auto prec = PrecisionSpec::native();
    double prev = 0.0;
    for (double m = 0.05; m < 40.0; m *= 1.3) {
        const double v = abs_central_moment(PoissonMean(m), m, 2, prec).to_double();
        REQUIRE(v == Approx(m).epsilon(1e-13));
        REQUIRE(v >= prev);
        prev = v;
        for (unsigned r : {4u, 6u, 8u}) REQUIRE(abs_central_moment(PoissonMean(m), m, r, prec).to_double() >= 0.0);
    }
}

TEST_CASE("closed forms", "[recurrences][closed]") {
    REQUIRE(mean_deviation(PoissonMean(1.0)) == Approx(0.73575888234288464319).epsilon(1e-15));
    REQUIRE(mean_deviation(PoissonMean(0.5)) == Approx(0.6065306597126334236).epsilon(1e-15));
    REQUIRE(abs_moment_3_closed(PoissonMean(1.0)) == Approx(1.7357588823428846432).epsilon(1e-15));

    const auto prec = PrecisionSpec::native();
    for (double m : {0.1, 0.5, 1.0, 2.7, 5.0, 10.0, 30.0, 77.7}) {
        const PoissonMean mean(m);
        INFO("m=" << m);
        REQUIRE(rel(mean_deviation(mean), abs_central_moment(mean, m, 1, prec).to_double()) <= 1e-12);
        REQUIRE(rel(abs_moment_3_closed(mean), abs_central_moment(mean, m, 3, prec).to_double()) <= 1e-12);
        REQUIRE(rel(abs_moment_5_closed(mean), abs_central_moment(mean, m, 5, prec).to_double()) <= 1e-12);
        REQUIRE(rel(abs_moment_5_closed(mean), oracle_value(m, oracle::AbsPower{5, m})) <= 1e-12);
    }
}

TEST_CASE("B recurrence reductions", "[recurrences][b_expectation]") {
    const auto prec = PrecisionSpec::native();
    const PoissonMean m(3.5);

    const auto identity = DiscreteFunction([](std::uint64_t j) { return double(j); }, PolynomialGrowth{1, 1.0});
    REQUIRE(b_expectation(m, 0.0, 0, identity, prec).to_double() == Approx(3.5).epsilon(1e-13));

    const auto one = DiscreteFunction::constant(1.0);
    for (double a : {0.0, 3.5, 1.2}) {
        const auto c = central_moment_table(m, a, 6, prec);
        for (unsigned r = 0; r <= 6; ++r) {
            REQUIRE(rel(b_expectation(m, a, r, one, prec).to_double(), c.value(r)) <= 1e-12);
        }
    }

    for (double b : {0.0, 2.0, 2.5, 7.0}) {
        const auto sign = DiscreteFunction::sign_step(b);
        const auto d = signed_moment_table(m, 1.5, b, 6, prec);
        for (unsigned r = 0; r <= 6; ++r) {
            INFO("b=" << b << " r=" << r);
            REQUIRE(rel(b_expectation(m, 1.5, r, sign, prec).to_double(), d.value(r)) <= 1e-12);
        }
    }
}

TEST_CASE("B recurrence with polynomial and finite-support weights", "[recurrences][b_expectation][oracle]") {
    const auto prec = PrecisionSpec::extended(256, 1e-40);
    const auto square = DiscreteFunction([](std::uint64_t j) { return double(j) * double(j); },
                                         PolynomialGrowth{2, 1.0});
    const auto window = DiscreteFunction([](std::uint64_t j) { return j <= 4 ? 1.0 + double(j) : 0.0; },
                                         FiniteSupport{4});
    for (double mean : {0.4, 2.0, 9.0}) {
        const PoissonMean m(mean);
        for (unsigned r = 0; r <= 5; ++r) {
            const double got_sq = b_expectation(m, 0.7, r, square, prec).to_double();
            const double got_win = b_expectation(m, 0.7, r, window, prec).to_double();
            REQUIRE(rel(got_sq, oracle_value(mean, oracle::Custom{square, r, 0.7})) <= 1e-18);
            REQUIRE(rel(got_win, oracle_value(mean, oracle::Custom{window, r, 0.7})) <= 1e-18);
        }
    }
}

TEST_CASE("B recurrence enforces the growth contract", "[recurrences][b_expectation]") {
    const auto prec = PrecisionSpec::native();
    const DiscreteFunction undeclared([](std::uint64_t) { return 1.0; });
    REQUIRE_THROWS_AS(b_expectation(PoissonMean(1.0), 0.0, 2, undeclared, prec), PreconditionError);

    const DiscreteFunction liar([](std::uint64_t j) { return std::exp(double(j)); }, PolynomialGrowth{3, 1.0});
    REQUIRE_THROWS_AS(b_expectation(PoissonMean(1.0), 0.0, 2, liar, prec), GrowthViolation);
}

TEST_CASE("extended tables agree with the oracle to 1e-20", "[recurrences][extended]") {
    const auto prec = PrecisionSpec::extended(256);
    for (double m : {0.1, 5.0, 50.0}) {
        for (double a : {0.0, m, m + 1.0}) {
            const auto c = central_moment_table(PoissonMean(m), a, 10, prec);
            const auto d = signed_moment_table(PoissonMean(m), a, m / 2.0, 10, prec);
            REQUIRE(c.arithmetic == Arithmetic::extended);
            for (unsigned r = 0; r <= 10; ++r) {
                const auto oc = oracle::expectation(PoissonMean(m), oracle::Power{r, a}, 1e-30).value;
                const auto od = oracle::expectation(PoissonMean(m), oracle::SignedPower{r, a, m / 2.0}, 1e-30).value;
                REQUIRE(oracle::relative_error(c.values[r], oc) <= 1e-20);
                REQUIRE(oracle::relative_error(d.values[r], od) <= 1e-20);
            }
        }
    }
}

TEST_CASE("B with sign weight matches D in extended precision", "[recurrences][b_expectation][extended]") {
    const auto prec = PrecisionSpec::extended(256, 1e-40);
    for (double m : {0.5, 4.0, 20.0}) {
        for (double b : {0.0, std::floor(m), m / 2.0}) {
            const auto d = signed_moment_table(PoissonMean(m), m, b, 6, prec);
            const auto sign = DiscreteFunction::sign_step(b);
            for (unsigned r = 0; r <= 6; ++r) {
                const auto v = b_expectation(PoissonMean(m), m, r, sign, prec);
                INFO("m=" << m << " b=" << b << " r=" << r);
                REQUIRE(oracle::relative_error(v.value, d.values[r]) <= 1e-20);
            }
        }
    }
}

TEST_CASE("condition estimates and escalation", "[recurrences][condition]") {
    // Raw moments (a = 0) only add positive terms.
    const auto raw = central_recurrence<double>(PoissonMean(7.0), 0.0, 10);
    for (unsigned r = 0; r <= 10; ++r) REQUIRE(raw.condition(r) == Approx(1.0).epsilon(1e-14));

    // E(X - m - 1/3)^3 = m - m - 1/27: the order-3 entry cancels terms of size m.
    const double mean = 1e5;
    const double a = mean + 1.0 / 3.0;
    const PoissonMean m(mean);
    const auto native_run = central_recurrence<double>(m, a, 3);
    REQUIRE(native_run.max_condition() > kConditionLimit);

    const auto escalated = central_moment_table(m, a, 3, PrecisionSpec::native());
    REQUIRE(escalated.escalated);
    REQUIRE(escalated.arithmetic == Arithmetic::extended);
    for (unsigned r = 0; r <= 3; ++r) {
        const auto ref = oracle::expectation(m, oracle::Power{r, a}, 1e-20).value;
        REQUIRE(oracle::relative_error(escalated.values[r], ref) <= 1e-15);
    }

    auto frozen = PrecisionSpec::native();
    frozen.escalate = false;
    const auto plain = central_moment_table(m, a, 3, frozen);
    REQUIRE_FALSE(plain.escalated);
    REQUIRE(plain.arithmetic == Arithmetic::native);
    REQUIRE(plain.condition[3] > kConditionLimit);
}
