#include "evaluate.hpp"

#include "poisson_moments/katti.hpp"
#include "poisson_moments/kendall.hpp"
#include "poisson_moments/oracle.hpp"
#include "poisson_moments/recurrences.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace poisson_moments::cli {

std::string to_string(Method method) {
    switch (method) {
        case Method::recurrence: return "recurrence";
        case Method::shifted: return "shifted";
        case Method::katti: return "katti";
        case Method::closed: return "closed";
        case Method::oracle: return "oracle";
        case Method::poly: return "poly";
    }
    return "?";
}

std::string to_string(Kind kind) {
    switch (kind) {
        case Kind::abs: return "abs";
        case Kind::central: return "central";
        case Kind::signed_moment: return "signed";
    }
    return "?";
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods{Method::recurrence, Method::shifted, Method::katti,
                                             Method::closed,     Method::oracle,  Method::poly};
    return methods;
}

std::optional<std::string> inapplicable(const Query& q) {
    switch (q.method) {
        case Method::recurrence:
        case Method::oracle:
            return std::nullopt;
        case Method::shifted:
            if (q.r == 0) return "shifted needs order >= 1";
            if (q.kind == Kind::signed_moment && *q.b < 0.0) return "shifted needs threshold >= 0";
            if (q.kind == Kind::abs && q.r % 2 == 1 && q.a < 0.0) return "shifted needs center >= 0 for odd order";
            return std::nullopt;
        case Method::katti:
            if (q.kind != Kind::abs) return "katti computes absolute moments only";
            if (q.r % 2 == 0) return "katti needs odd order";
            if (q.a < 0.0) return "katti needs center >= 0";
            return std::nullopt;
        case Method::closed:
            if (q.kind != Kind::abs) return "closed forms exist for absolute moments only";
            if (q.a != q.m) return "closed forms need center equal to the mean";
            if (q.r != 1 && q.r != 3 && q.r != 5) return "closed forms exist for orders 1, 3, 5";
            return std::nullopt;
        case Method::poly:
            if (q.a != q.m) return "poly needs center equal to the mean";
            if (q.kind == Kind::signed_moment) return "poly computes central moments only";
            if (q.kind == Kind::abs && q.r % 2 == 1) return "poly gives absolute moments for even order only";
            return std::nullopt;
    }
    return "unknown method";
}

namespace {

MomentValue from_table(const MomentTable& t, unsigned r) {
    return {t.values.at(r), t.condition.at(r), t.arithmetic, t.escalated};
}

MomentValue closed_form(PoissonMean m, unsigned r, const PrecisionSpec& prec) {
    const auto pick = [&]<class T>(std::type_identity<T>) -> T {
        if (r == 1) return mean_deviation<T>(m);
        if (r == 3) return abs_moment_3_closed<T>(m);
        return abs_moment_5_closed<T>(m);
    };
    if (prec.mode == Arithmetic::native) return {Extended(pick(std::type_identity<double>{})), 1.0};
    const ScopedPrecision guard(prec.bits);
    return {pick(std::type_identity<Extended>{}), 1.0, Arithmetic::extended, false};
}

MomentValue dispatch(const Query& q, const PrecisionSpec& prec, OutputRecord& rec) {
    const PoissonMean m(q.m);
    switch (q.method) {
        case Method::recurrence:
            if (q.kind == Kind::abs) return abs_central_moment(m, q.a, q.r, prec);
            if (q.kind == Kind::central) return from_table(central_moment_table(m, q.a, q.r, prec), q.r);
            return from_table(signed_moment_table(m, q.a, *q.b, q.r, prec), q.r);
        case Method::shifted:
            if (q.kind == Kind::central || (q.kind == Kind::abs && q.r % 2 == 0))
                return central_moment_shifted(m, q.a, q.r, prec);
            return signed_moment_shifted(m, q.a, q.kind == Kind::abs ? q.a : *q.b, q.r, prec);
        case Method::katti:
            return katti_abs_moment(m, q.a, q.r, prec);
        case Method::closed:
            return closed_form(m, q.r, prec);
        case Method::poly: {
            const auto mu = moment_polynomials(q.r);
            const Arithmetic arith = prec.mode;
            return {evaluate_polynomial(mu[q.r], m, prec), 1.0, arith, false};
        }
        case Method::oracle: {
            oracle::WeightSpec w = oracle::Power{q.r, q.a};
            if (q.kind == Kind::abs) w = oracle::AbsPower{q.r, q.a};
            if (q.kind == Kind::signed_moment) w = oracle::SignedPower{q.r, q.a, *q.b};
            const unsigned bits = prec.mode == Arithmetic::extended
                                      ? std::max(prec.bits, oracle::kMinimumBits)
                                      : oracle::kDefaultBits;
            const auto e = oracle::expectation(m, w, prec.rel_tol, bits);
            rec.certified_error = e.certified_error;
            return {e.value, 1.0, Arithmetic::extended, false};
        }
    }
    throw InternalFault("unhandled method");
}

}  // namespace

OutputRecord evaluate(const Query& q, const PrecisionSpec& prec) {
    if (const auto why = inapplicable(q)) throw PreconditionError(*why);
    OutputRecord rec;
    rec.m = q.m;
    rec.a = q.a;
    rec.b = q.b;
    rec.r = q.r;
    rec.kind = q.kind;
    rec.method = q.method;
    const auto start = std::chrono::steady_clock::now();
    const MomentValue v = dispatch(q, prec, rec);
    rec.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    rec.exact = v.value;
    rec.value = v.to_double();
    rec.condition = v.condition;
    rec.arithmetic = v.arithmetic;
    rec.escalated = v.escalated;
    if (!std::isfinite(rec.value)) throw InternalFault("non-finite moment value");
    return rec;
}

}  // namespace poisson_moments::cli
