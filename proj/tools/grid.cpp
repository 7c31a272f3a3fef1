#include "grid.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace poisson_moments::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) parts.push_back(item);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw UsageError("empty number in grid specification");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_axis(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw UsageError("empty grid");
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw UsageError("range must be start:stop:step, got '" + s + "'");
        const double start = parse_number(parts[0]);
        const double stop = parse_number(parts[1]);
        const double step = parse_number(parts[2]);
        if (!(step > 0.0)) throw UsageError("range step must be positive");
        if (stop < start) throw UsageError("empty grid: stop < start in '" + s + "'");
        std::vector<double> axis;
        const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
        if (count > 1000000) throw UsageError("grid too large");
        for (long long i = 0; i <= count; ++i) axis.push_back(start + static_cast<double>(i) * step);
        return axis;
    }
    std::vector<double> axis;
    for (const auto& part : split(s, ',')) axis.push_back(parse_number(part));
    return axis;
}

double PointExpr::eval(double m, double a) const {
    double base = 0.0;
    switch (var) {
        case Var::none: return operand;
        case Var::mean: base = m; break;
        case Var::floor_mean: base = std::floor(m); break;
        case Var::center: base = a; break;
    }
    switch (op) {
        case '+': return base + operand;
        case '-': return base - operand;
        default: return base * operand;
    }
}

std::vector<PointExpr> parse_point_exprs(const std::string& text, bool allow_center) {
    const std::string s = trim(text);
    if (s.empty()) throw UsageError("empty grid");
    std::vector<PointExpr> out;
    if (s.find(':') != std::string::npos) {
        for (double v : parse_axis(s)) out.push_back({PointExpr::Var::none, '+', v, format_number(v)});
        return out;
    }
    for (const auto& raw : split(s, ',')) {
        const std::string item = trim(raw);
        PointExpr e;
        e.text = item;
        std::size_t var_len = 0;
        if (item.rfind("fm", 0) == 0) {
            e.var = PointExpr::Var::floor_mean;
            var_len = 2;
        } else if (item.rfind("m", 0) == 0) {
            e.var = PointExpr::Var::mean;
            var_len = 1;
        } else if (item.rfind("a", 0) == 0) {
            if (!allow_center) throw UsageError("'a' is only valid in threshold grids");
            e.var = PointExpr::Var::center;
            var_len = 1;
        }
        if (e.var == PointExpr::Var::none) {
            e.operand = parse_number(item);
        } else if (item.size() > var_len) {
            e.op = item[var_len];
            if (e.op != '+' && e.op != '-' && e.op != '*') throw UsageError("bad grid expression '" + item + "'");
            e.operand = parse_number(item.substr(var_len + 1));
        } else if (e.op == '+') {
            e.operand = 0.0;
        }
        out.push_back(e);
    }
    return out;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace poisson_moments::cli
