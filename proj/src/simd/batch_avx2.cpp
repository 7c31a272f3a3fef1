#include "poisson_moments/batch.hpp"

#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define POISSON_MOMENTS_HAVE_AVX2_KERNEL 1
#endif

namespace poisson_moments::batch {

#ifdef POISSON_MOMENTS_HAVE_AVX2_KERNEL

namespace {

constexpr std::size_t kLanes = 4;

__attribute__((target("avx2"))) inline __m256d abs4(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// Same operation order as run_scalar, four points per pass. No FMA: the
// scalar kernel rounds every product separately.
__attribute__((target("avx2"))) void run_block(const RecurrenceInput& in, std::size_t first,
                                               unsigned r_max, std::span<double> values,
                                               std::span<double> magnitudes,
                                               std::vector<double>& binom) {
    const std::size_t n = in.size();
    const __m256d mean = _mm256_loadu_pd(&in.mean[first]);
    const __m256d drift = _mm256_sub_pd(mean, _mm256_loadu_pd(&in.center[first]));
    const __m256d drift_mag = abs4(drift);
    const __m256d jump = _mm256_loadu_pd(&in.jump[first]);
    const __m256d step = _mm256_loadu_pd(&in.step[first]);

    _mm256_storeu_pd(&values[first], _mm256_loadu_pd(&in.base[first]));
    _mm256_storeu_pd(&magnitudes[first], _mm256_loadu_pd(&in.base_magnitude[first]));
    __m256d power = _mm256_set1_pd(1.0);
    binom.assign(1, 1.0);
    for (unsigned r = 1; r <= r_max; ++r) {
        __m256d sum = _mm256_setzero_pd();
        __m256d sum_mag = _mm256_setzero_pd();
        for (unsigned k = 0; k + 2 <= r; ++k) {
            const __m256d c = _mm256_set1_pd(binom[k]);
            sum = _mm256_add_pd(sum, _mm256_mul_pd(c, _mm256_loadu_pd(&values[k * n + first])));
            sum_mag = _mm256_add_pd(sum_mag, _mm256_mul_pd(c, _mm256_loadu_pd(&magnitudes[k * n + first])));
        }
        const __m256d prev = _mm256_loadu_pd(&values[(r - 1) * n + first]);
        const __m256d prev_mag = _mm256_loadu_pd(&magnitudes[(r - 1) * n + first]);
        const __m256d value = _mm256_add_pd(_mm256_mul_pd(drift, prev), _mm256_mul_pd(mean, sum));
        const __m256d magnitude =
            _mm256_add_pd(_mm256_mul_pd(drift_mag, prev_mag), _mm256_mul_pd(mean, sum_mag));
        if (r > 1) power = _mm256_mul_pd(power, step);
        const __m256d extra = _mm256_mul_pd(jump, power);
        _mm256_storeu_pd(&values[r * n + first], _mm256_add_pd(value, extra));
        _mm256_storeu_pd(&magnitudes[r * n + first], _mm256_add_pd(magnitude, abs4(extra)));

        binom.push_back(1.0);
        for (std::size_t k = binom.size() - 2; k > 0; --k) binom[k] += binom[k - 1];
    }
}

}  // namespace

void run_avx2(const RecurrenceInput& in, unsigned r_max, std::span<double> values,
              std::span<double> magnitudes) {
    if (!isa_supported(Isa::avx2)) throw std::runtime_error("AVX2 kernel requested on a CPU without AVX2");
    const std::size_t n = in.size();
    const std::size_t need = (static_cast<std::size_t>(r_max) + 1) * n;
    if (values.size() < need || magnitudes.size() < need) {
        throw std::invalid_argument("batch output spans are too small");
    }
    std::vector<double> binom;
    std::size_t first = 0;
    for (; first + kLanes <= n; first += kLanes) run_block(in, first, r_max, values, magnitudes, binom);
    if (first == n) return;

    // Remainder: run the reference kernel on the leftover points and scatter.
    RecurrenceInput rest;
    const auto tail = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(first), v.end());
    };
    rest.mean = tail(in.mean);
    rest.center = tail(in.center);
    rest.base = tail(in.base);
    rest.base_magnitude = tail(in.base_magnitude);
    rest.jump = tail(in.jump);
    rest.step = tail(in.step);
    const std::size_t left = rest.size();
    std::vector<double> v((static_cast<std::size_t>(r_max) + 1) * left), mg(v.size());
    run_scalar(rest, r_max, v, mg);
    for (unsigned r = 0; r <= r_max; ++r) {
        for (std::size_t i = 0; i < left; ++i) {
            values[r * n + first + i] = v[r * left + i];
            magnitudes[r * n + first + i] = mg[r * left + i];
        }
    }
}

#else

void run_avx2(const RecurrenceInput&, unsigned, std::span<double>, std::span<double>) {
    throw std::runtime_error("AVX2 kernel is not available on this architecture");
}

#endif

}  // namespace poisson_moments::batch
