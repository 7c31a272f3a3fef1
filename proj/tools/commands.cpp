#include "commands.hpp"

#include "poisson_moments/katti.hpp"
#include "poisson_moments/kendall.hpp"
#include "poisson_moments/oracle.hpp"
#include "poisson_moments/recurrences.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

namespace poisson_moments::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ns_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

void require_means(const std::vector<double>& means) {
    if (means.empty()) throw UsageError("empty grid");
    for (double m : means)
        if (!(m > 0.0) || !std::isfinite(m)) throw UsageError("mean must be positive and finite, got " + format_number(m));
}

Query query_at(const GridPoint& p, unsigned r, Kind kind, Method method) {
    Query q;
    q.m = p.m;
    q.a = p.a;
    q.b = kind == Kind::signed_moment ? p.b : std::nullopt;
    q.r = r;
    q.kind = kind;
    q.method = method;
    return q;
}

OutputRecord batch_record(const Query& q, double value, double condition, std::int64_t elapsed) {
    OutputRecord rec;
    rec.m = q.m;
    rec.a = q.a;
    rec.b = q.b;
    rec.r = q.r;
    rec.kind = q.kind;
    rec.method = q.method;
    rec.exact = value;
    rec.value = value;
    rec.condition = condition;
    rec.elapsed_ns = elapsed;
    return rec;
}

TableResult batch_table(const TableConfig& cfg, const std::vector<GridPoint>& points) {
    std::vector<double> ms, as, bs;
    for (const auto& p : points) {
        ms.push_back(p.m);
        as.push_back(p.a);
        bs.push_back(cfg.kind == Kind::signed_moment ? *p.b : p.a);
    }
    const unsigned R = cfg.max_order;
    const auto start = Clock::now();
    batch::RecurrenceOutput even, odd;
    if (cfg.kind == Kind::central) {
        even = batch::run(batch::prepare_central(ms, as), R, cfg.isa);
    } else if (cfg.kind == Kind::signed_moment) {
        even = batch::run(batch::prepare_signed(ms, as, bs), R, cfg.isa);
    } else {
        even = batch::run(batch::prepare_central(ms, as), R, cfg.isa);
        odd = batch::run(batch::prepare_signed(ms, as, bs), R, cfg.isa);
    }
    const auto per_row = ns_since(start) / static_cast<std::int64_t>(points.size() * (R + 1));

    TableResult out;
    out.used_batch = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double prefix = 1.0;
        for (unsigned r = 0; r <= R; ++r) {
            const Query q = query_at(points[i], r, cfg.kind, cfg.method);
            const auto& src = cfg.kind == Kind::abs && r % 2 == 1 ? odd : even;
            const double condition = src.condition(r, i);
            prefix = std::max(prefix, condition);
            // Same escalation rule as the single-point path for this kind.
            const double decisive = cfg.kind == Kind::abs ? condition : prefix;
            if (cfg.prec.escalate && decisive > kConditionLimit) {
                out.rows.push_back(evaluate(q, cfg.prec));
            } else {
                out.rows.push_back(batch_record(q, src.value(r, i), condition, per_row));
            }
        }
    }
    return out;
}

double median_of(std::vector<std::int64_t> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? static_cast<double>(xs[n / 2]) : 0.5 * static_cast<double>(xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

std::vector<GridPoint> expand_grid(const std::vector<double>& means, const std::vector<PointExpr>& centers,
                                   const std::optional<std::vector<PointExpr>>& thresholds) {
    std::vector<GridPoint> points;
    for (double m : means) {
        for (const auto& c : centers) {
            const double a = c.eval(m);
            if (!thresholds) {
                points.push_back({m, a, std::nullopt});
                continue;
            }
            std::vector<double> seen;
            for (const auto& t : *thresholds) {
                const double b = t.eval(m, a);
                if (std::find(seen.begin(), seen.end(), b) != seen.end()) continue;
                seen.push_back(b);
                points.push_back({m, a, b});
            }
        }
    }
    return points;
}

TableResult run_table(const TableConfig& cfg) {
    require_means(cfg.means);
    if (cfg.centers.empty()) throw UsageError("empty grid");
    if ((cfg.kind == Kind::signed_moment) != cfg.thresholds.has_value())
        throw UsageError("a threshold grid is required for signed moments and only for them");
    if (cfg.thresholds && cfg.thresholds->empty()) throw UsageError("empty grid");
    cfg.prec.validate();
    const auto points = expand_grid(cfg.means, cfg.centers, cfg.thresholds);

    if (cfg.method == Method::recurrence && cfg.prec.mode == Arithmetic::native)
        return batch_table(cfg, points);

    TableResult out;
    for (const auto& p : points) {
        for (unsigned r = 0; r <= cfg.max_order; ++r) {
            const Query q = query_at(p, r, cfg.kind, cfg.method);
            if (inapplicable(q)) {
                ++out.skipped;
                continue;
            }
            out.rows.push_back(evaluate(q, cfg.prec));
        }
    }
    return out;
}

VerifyConfig default_verify_config() {
    VerifyConfig cfg;
    cfg.means = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0};
    cfg.centers = parse_point_exprs("0,m,fm+0.3,m+1", false);
    cfg.thresholds = parse_point_exprs("a,0,m*0.5", true);
    return cfg;
}

VerifyResult run_verify(const VerifyConfig& cfg) {
    require_means(cfg.means);
    if (cfg.centers.empty() || cfg.kinds.empty() || cfg.methods.empty()) throw UsageError("empty grid");
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw UsageError("tolerance must lie in (0, 1)");
    cfg.prec.validate();
    const double eps = std::max(cfg.tol * 1e-3, 1e-300);
    const unsigned oracle_bits = cfg.prec.mode == Arithmetic::extended
                                     ? std::max(cfg.prec.bits, oracle::kDefaultBits)
                                     : oracle::kDefaultBits;

    VerifyResult result;
    for (Method method : cfg.methods) {
        MethodSummary s;
        s.method = method;
        result.methods.push_back(s);
    }

    for (Kind kind : cfg.kinds) {
        std::optional<std::vector<PointExpr>> thresholds;
        if (kind == Kind::signed_moment) {
            if (cfg.thresholds.empty()) continue;
            thresholds = cfg.thresholds;
        }
        for (const auto& p : expand_grid(cfg.means, cfg.centers, thresholds)) {
            for (unsigned r = 0; r <= cfg.max_order; ++r) {
                oracle::WeightSpec w = oracle::Power{r, p.a};
                if (kind == Kind::abs) w = oracle::AbsPower{r, p.a};
                if (kind == Kind::signed_moment) w = oracle::SignedPower{r, p.a, *p.b};
                std::optional<oracle::Expectation> reference;

                for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
                    const Query q = query_at(p, r, kind, cfg.methods[k]);
                    if (q.method == Method::oracle || inapplicable(q)) continue;
                    if (!reference) {
                        reference = oracle::expectation(PoissonMean(p.m), w, eps, oracle_bits);
                        ++result.weights;
                    }
                    const OutputRecord rec = evaluate(q, cfg.prec);
                    const double err = oracle::relative_error(rec.exact, reference->value);

                    auto& s = result.methods[k];
                    ++s.checked;
                    if (rec.condition > kConditionLimit) ++s.flagged;
                    VerifyFailure row{p, r, kind, q.method, rec.value, to_double(reference->value), err,
                                      rec.condition};
                    if (!s.worst || !(err <= s.worst_rel_err)) {
                        s.worst_rel_err = err;
                        s.worst = row;
                    }
                    if (!(err <= cfg.tol)) {
                        ++s.failed;
                        result.failures.push_back(row);
                    }
                }
            }
        }
    }
    return result;
}

const BenchRow* BenchResult::find(const std::string& name) const {
    for (const auto& row : rows)
        if (row.name == name) return &row;
    return nullptr;
}

double BenchResult::oracle_over_recurrence() const {
    const auto* o = find("oracle");
    const auto* r = find("recurrence");
    if (!o || !r || r->median_ns <= 0) return std::nan("");
    return static_cast<double>(o->median_ns) / static_cast<double>(r->median_ns);
}

BenchResult run_bench(const BenchConfig& cfg) {
    require_means(cfg.means);
    if (cfg.repeats == 0) throw UsageError("repeats must be positive");
    const std::vector<PointExpr> centers =
        cfg.centers.empty() ? parse_point_exprs("m", false) : cfg.centers;
    const auto points = expand_grid(cfg.means, centers, std::nullopt);
    const unsigned R = cfg.max_order;
    const auto native = PrecisionSpec::native();
    volatile double sink = 0.0;

    // Each workload computes E|X-a|^r for every applicable order at every point
    // and returns the number of values produced.
    const auto per_order = [&](Method method) {
        return [&, method] {
            std::size_t n = 0;
            for (const auto& p : points) {
                for (unsigned r = 0; r <= R; ++r) {
                    const Query q = query_at(p, r, Kind::abs, method);
                    if (inapplicable(q)) continue;
                    PrecisionSpec prec = native;
                    if (method == Method::oracle) prec.rel_tol = cfg.oracle_eps;
                    sink = sink + evaluate(q, prec).value;
                    ++n;
                }
            }
            return n;
        };
    };
    const auto recurrence = [&] {
        for (const auto& p : points) {
            const PoissonMean m(p.m);
            const auto c = central_moment_table(m, p.a, R, native);
            const auto d = signed_moment_table(m, p.a, p.a, R, native);
            sink = sink + c.value(R) + d.value(R);
        }
        return points.size() * (R + 1);
    };
    const auto poly = [&] {
        const auto mu = moment_polynomials(R);
        std::size_t n = 0;
        for (const auto& p : points) {
            if (p.a != p.m) continue;
            for (unsigned r = 0; r <= R; r += 2) {
                sink = sink + to_double(evaluate_polynomial(mu[r], PoissonMean(p.m), native));
                ++n;
            }
        }
        return n;
    };
    std::vector<double> ms, as;
    for (const auto& p : points) {
        ms.push_back(p.m);
        as.push_back(p.a);
    }
    const auto batch_with = [&](batch::Isa isa) {
        return [&, isa] {
            const auto even = batch::run(batch::prepare_central(ms, as), R, isa);
            const auto odd = batch::run(batch::prepare_signed(ms, as, as), R, isa);
            sink = sink + even.values.back() + odd.values.back();
            return points.size() * (R + 1);
        };
    };

    std::vector<std::pair<std::string, std::function<std::size_t()>>> workloads{
        {"recurrence", recurrence},
        {"shifted", per_order(Method::shifted)},
        {"katti", per_order(Method::katti)},
        {"closed", per_order(Method::closed)},
        {"poly", poly},
        {"oracle", per_order(Method::oracle)},
        {"batch-scalar", batch_with(batch::Isa::scalar)},
    };
    if (batch::isa_supported(batch::Isa::avx2)) workloads.emplace_back("batch-avx2", batch_with(batch::Isa::avx2));

    BenchResult result;
    result.points = points.size();
    for (auto& [name, work] : workloads) {
        std::vector<std::int64_t> times;
        std::size_t n = 0;
        for (unsigned k = 0; k < cfg.repeats; ++k) {
            const auto start = Clock::now();
            n = work();
            times.push_back(ns_since(start));
        }
        if (n == 0) continue;
        result.rows.push_back({name, n, static_cast<std::int64_t>(median_of(times))});
    }
    return result;
}

}  // namespace poisson_moments::cli
