#ifndef POISSON_MOMENTS_KATTI_HPP
#define POISSON_MOMENTS_KATTI_HPP

#include "poisson_moments/numerics.hpp"
#include "poisson_moments/precision.hpp"
#include "poisson_moments/recurrences.hpp"

#include <vector>

namespace poisson_moments {

struct Hyp1F1Params {
    double alpha = 0.0;
    double beta = 1.0;
    double z = 0.0;
};

/// Kummer series 1F1(alpha; beta; z) = sum_n z^n/n! prod_{j<n} (alpha+j)/(beta+j).
///
/// Terms follow t_{n+1} = t_n z (alpha + n) / ((beta + n)(n + 1)); summation
/// stops once three consecutive terms satisfy |t_n| <= tol |S|, where tol is
/// prec.rel_tol in native mode and min(prec.rel_tol, 2^-bits) in extended
/// mode. T = Extended runs at the active MPFR precision.
template <class T>
T hyp1f1(const Hyp1F1Params& p, double rel_tol);

/// Dispatching form; beta must not be a nonpositive integer.
Extended hyp1f1(const Hyp1F1Params& p, const PrecisionSpec& prec);

/// Triangular table g[s][beta] = G^{(s)}(beta, 0), s = 0..r, beta = 0..r-s, with
///   G(beta, t) = exp(t (floor(a) - a + beta + 1)) 1F1(beta + 1, beta + floor(a) + 2, m e^t)
/// and
///   G^{(s+1)}(beta,0) = (floor(a) - a + beta + 1) G^{(s)}(beta,0)
///                       + m (beta + 1) / (beta + floor(a) + 2) G^{(s)}(beta+1,0).
template <class T>
struct GTable {
    double a = 0.0;
    double m = 0.0;
    unsigned r = 0;
    std::vector<std::vector<T>> entries;

    const T& top() const { return entries.at(r).at(0); }  ///< G^{(r)}(0, 0)
};

template <class T>
GTable<T> g_table(double a, PoissonMean m, unsigned r, double rel_tol);

/// E|X - a|^r for odd r >= 1 and a >= 0 from the hypergeometric route:
///   E|X - a|^r = -E(X - a)^r + 2 e^{-m} m^{floor(a)+1} / (floor(a)+1)! G^{(r)}(0, 0).
/// The condition estimate is (|C| + |correction|) / |result|.
MomentValue katti_abs_moment(PoissonMean m, double a, unsigned r, const PrecisionSpec& prec);

extern template struct GTable<double>;
extern template struct GTable<Extended>;

}  // namespace poisson_moments

#endif  // POISSON_MOMENTS_KATTI_HPP
