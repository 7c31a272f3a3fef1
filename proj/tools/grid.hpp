#ifndef POISSON_MOMENTS_TOOLS_GRID_HPP
#define POISSON_MOMENTS_TOOLS_GRID_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace poisson_moments::cli {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric axis: "a:b:step" (inclusive) or "v1,v2,...".
std::vector<double> parse_axis(const std::string& text);

/// A center or threshold that may depend on the grid point:
///   <number> | VAR | VAR+x | VAR-x | VAR*x
/// with VAR one of m (mean), fm (floor of the mean), a (center; thresholds only).
struct PointExpr {
    enum class Var { none, mean, floor_mean, center };
    Var var = Var::none;
    char op = '+';
    double operand = 0.0;
    std::string text;

    double eval(double m, double a = 0.0) const;
};

/// Comma-separated PointExpr list; a bare "a:b:step" range is accepted too.
std::vector<PointExpr> parse_point_exprs(const std::string& text, bool allow_center);

/// 17 significant digits.
std::string format_number(double x);

}  // namespace poisson_moments::cli

#endif  // POISSON_MOMENTS_TOOLS_GRID_HPP
