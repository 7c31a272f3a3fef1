// Equivalence of the batch kernels: scalar reference, AVX2 variant and the
// single-point recurrence must produce bitwise-identical doubles.

#include "poisson_moments/batch.hpp"
#include "poisson_moments/recurrences.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <random>

using namespace poisson_moments;
using namespace poisson_moments::batch;

namespace {

bool same_bits(double x, double y) {
    return std::memcmp(&x, &y, sizeof(double)) == 0;
}

struct Grid {
    std::vector<double> mean, center, threshold;
};

Grid random_grid(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mean(0.05, 80.0);
    std::uniform_real_distribution<double> offset(-5.0, 5.0);
    Grid g;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = mean(rng);
        g.mean.push_back(m);
        g.center.push_back(i % 3 == 0 ? m : m + offset(rng));
        g.threshold.push_back(i % 4 == 0 ? -1.0 : std::max(0.0, m + offset(rng)));
    }
    return g;
}

}  // namespace

TEST_CASE("ISA selection", "[batch]") {
    REQUIRE(isa_supported(Isa::scalar));
    REQUIRE((active_isa() == Isa::scalar || isa_supported(Isa::avx2)));
    REQUIRE(to_string(Isa::avx2) == "avx2");
}

TEST_CASE("scalar batch kernel equals the single-point recurrence", "[batch]") {
    const Grid g = random_grid(23, 11);
    const unsigned r_max = 10;
    const auto central = run(prepare_central(g.mean, g.center), r_max, Isa::scalar);
    const auto signed_out = run(prepare_signed(g.mean, g.center, g.threshold), r_max, Isa::scalar);
    for (std::size_t i = 0; i < g.mean.size(); ++i) {
        const auto c = central_recurrence<double>(PoissonMean(g.mean[i]), g.center[i], r_max);
        const auto d = signed_recurrence<double>(PoissonMean(g.mean[i]), g.center[i], g.threshold[i], r_max);
        for (unsigned r = 0; r <= r_max; ++r) {
            INFO("point " << i << " r=" << r);
            REQUIRE(same_bits(central.value(r, i), c.values[r]));
            REQUIRE(same_bits(central.magnitudes[r * central.points + i], c.magnitudes[r]));
            REQUIRE(same_bits(signed_out.value(r, i), d.values[r]));
            REQUIRE(same_bits(signed_out.magnitudes[r * signed_out.points + i], d.magnitudes[r]));
            REQUIRE(signed_out.condition(r, i) == d.condition(r));
        }
    }
}

TEST_CASE("AVX2 batch kernel is bitwise equal to the scalar kernel", "[batch][avx2]") {
    if (!isa_supported(Isa::avx2)) {
        SKIP("CPU has no AVX2");
    }
    for (std::size_t n : {1u, 4u, 7u, 64u, 101u}) {
        const Grid g = random_grid(n, 1000 + n);
        for (unsigned r_max : {0u, 1u, 5u, 14u}) {
            const auto in = prepare_signed(g.mean, g.center, g.threshold);
            const auto ref = run(in, r_max, Isa::scalar);
            const auto simd = run(in, r_max, Isa::avx2);
            REQUIRE(ref.values.size() == simd.values.size());
            for (std::size_t k = 0; k < ref.values.size(); ++k) {
                INFO("n=" << n << " r_max=" << r_max << " k=" << k);
                REQUIRE(same_bits(ref.values[k], simd.values[k]));
                REQUIRE(same_bits(ref.magnitudes[k], simd.magnitudes[k]));
            }
        }
    }
}

TEST_CASE("batch input validation", "[batch]") {
    const std::vector<double> m{1.0, 2.0};
    const std::vector<double> a{1.0};
    REQUIRE_THROWS_AS(prepare_central(m, a), std::invalid_argument);
    const std::vector<double> bad{0.0, 1.0};
    REQUIRE_THROWS_AS(prepare_central(bad, m), PreconditionError);

    const auto in = prepare_central(m, m);
    std::vector<double> v(3), mg(3);
    REQUIRE_THROWS_AS(run_scalar(in, 1, v, mg), std::invalid_argument);
}
