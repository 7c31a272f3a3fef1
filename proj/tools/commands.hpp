#ifndef POISSON_MOMENTS_TOOLS_COMMANDS_HPP
#define POISSON_MOMENTS_TOOLS_COMMANDS_HPP

#include "evaluate.hpp"
#include "grid.hpp"

#include "poisson_moments/batch.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace poisson_moments::cli {

struct GridPoint {
    double m = 0.0;
    double a = 0.0;
    std::optional<double> b;
};

/// Cartesian product mean x center [x threshold], in grid order. Thresholds
/// that repeat within one (m, a) are dropped.
std::vector<GridPoint> expand_grid(const std::vector<double>& means, const std::vector<PointExpr>& centers,
                                   const std::optional<std::vector<PointExpr>>& thresholds);

struct TableConfig {
    std::vector<double> means;
    std::vector<PointExpr> centers;
    std::optional<std::vector<PointExpr>> thresholds;
    unsigned max_order = 10;
    Kind kind = Kind::abs;
    Method method = Method::recurrence;
    PrecisionSpec prec;
    batch::Isa isa = batch::active_isa();
};

struct TableResult {
    std::vector<OutputRecord> rows;
    std::size_t skipped = 0;  ///< rows the method does not apply to
    bool used_batch = false;
};

/// Native recurrence tables run through the batch kernel; rows whose
/// condition estimate exceeds the limit are recomputed one by one.
TableResult run_table(const TableConfig& cfg);

struct VerifyConfig {
    std::vector<double> means;
    std::vector<PointExpr> centers;
    std::vector<PointExpr> thresholds;
    unsigned max_order = 10;
    std::vector<Kind> kinds{Kind::central, Kind::signed_moment, Kind::abs};
    std::vector<Method> methods{Method::recurrence, Method::shifted, Method::katti, Method::closed, Method::poly};
    double tol = 1e-9;
    PrecisionSpec prec;
};

/// Defaults reproduce the acceptance sweep.
VerifyConfig default_verify_config();

struct VerifyFailure {
    GridPoint point;
    unsigned r = 0;
    Kind kind = Kind::abs;
    Method method = Method::recurrence;
    double value = 0.0;
    double oracle = 0.0;
    double rel_err = 0.0;
    double condition = 1.0;
};

struct MethodSummary {
    Method method = Method::recurrence;
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::size_t flagged = 0;  ///< condition estimate above the escalation limit
    double worst_rel_err = 0.0;
    std::optional<VerifyFailure> worst;
};

struct VerifyResult {
    std::vector<MethodSummary> methods;
    std::vector<VerifyFailure> failures;
    std::size_t weights = 0;
    bool pass() const { return failures.empty(); }
};

VerifyResult run_verify(const VerifyConfig& cfg);

struct BenchConfig {
    std::vector<double> means{50.0};
    std::vector<PointExpr> centers;  ///< empty: the mean
    unsigned max_order = 10;
    unsigned repeats = 5;
    double oracle_eps = 1e-12;
};

struct BenchRow {
    std::string name;
    std::size_t evaluations = 0;
    std::int64_t median_ns = 0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::size_t points = 0;
    const BenchRow* find(const std::string& name) const;
    double oracle_over_recurrence() const;
};

/// Median-of-repeats timing of every method computing E|X-a|^r, r = 0..max_order,
/// at every grid point, plus the batch kernels on the same grid.
BenchResult run_bench(const BenchConfig& cfg);

}  // namespace poisson_moments::cli

#endif  // POISSON_MOMENTS_TOOLS_COMMANDS_HPP
