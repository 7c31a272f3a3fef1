#include "poisson_moments/kendall.hpp"

#include <algorithm>
#include <sstream>

namespace poisson_moments {

namespace {

using Coeffs = std::vector<BigInt>;

void trim(Coeffs& c) {
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    if (c.empty()) c.push_back(0);
}

void add_scaled(Coeffs& acc, const Coeffs& term, const BigInt& scale) {
    if (acc.size() < term.size()) acc.resize(term.size(), BigInt(0));
    for (std::size_t k = 0; k < term.size(); ++k) acc[k] += scale * term[k];
}

Coeffs times_m(const Coeffs& c) {
    Coeffs out(c.size() + 1, BigInt(0));
    std::copy(c.begin(), c.end(), out.begin() + 1);
    return out;
}

Coeffs derivative(const Coeffs& c) {
    Coeffs out;
    for (std::size_t k = 1; k < c.size(); ++k) out.push_back(c[k] * static_cast<unsigned>(k));
    trim(out);
    return out;
}

}  // namespace

std::vector<MomentPolynomial> moment_polynomials(unsigned r_max) {
    std::vector<MomentPolynomial> mu;
    mu.reserve(r_max + 1);
    mu.push_back({0, {BigInt(1)}});
    if (r_max >= 1) mu.push_back({1, {BigInt(0)}});

    std::vector<BigInt> binom{1, 1};  // row r - 1
    for (unsigned r = 2; r <= r_max; ++r) {
        Coeffs sum{BigInt(0)};
        for (unsigned k = 0; k + 2 <= r; ++k) add_scaled(sum, mu[k].coeffs, binom[k]);
        Coeffs next = times_m(sum);
        trim(next);
        mu.push_back({r, std::move(next)});

        binom.push_back(1);
        for (std::size_t k = binom.size() - 2; k > 0; --k) binom[k] += binom[k - 1];
    }
    return mu;
}

bool check_derivative_identity(unsigned r) {
    if (r == 0) throw PreconditionError("derivative identity is stated for r >= 1");
    const auto mu = moment_polynomials(r + 1);
    Coeffs rhs{BigInt(0)};
    add_scaled(rhs, times_m(mu[r - 1].coeffs), BigInt(r));
    add_scaled(rhs, times_m(derivative(mu[r].coeffs)), BigInt(1));
    trim(rhs);
    return rhs == mu[r + 1].coeffs;
}

Extended evaluate_polynomial(const MomentPolynomial& p, PoissonMean m, const PrecisionSpec& prec) {
    prec.validate();
    if (prec.mode == Arithmetic::native) {
        double acc = 0.0;
        for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
            acc = acc * m.value() + it->convert_to<double>();
        }
        return Extended(acc);
    }
    const ScopedPrecision guard(prec.bits);
    Extended acc = 0;
    const Extended mm = m.value();
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
        acc = acc * mm + Extended(it->str());
    }
    return acc;
}

std::string format_coefficients(const MomentPolynomial& p) {
    std::ostringstream os;
    os << '[';
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        if (k) os << ", ";
        os << p.coeffs[k];
    }
    os << ']';
    return os.str();
}

}  // namespace poisson_moments
