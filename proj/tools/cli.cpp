#include "cli.hpp"

#include "commands.hpp"
#include "grid.hpp"

#include "poisson_moments/kendall.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

namespace poisson_moments::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::map<std::string, Method> kMethods{
    {"recurrence", Method::recurrence}, {"shifted", Method::shifted}, {"katti", Method::katti},
    {"closed", Method::closed},         {"oracle", Method::oracle},   {"poly", Method::poly}};

const std::map<std::string, Kind> kKinds{
    {"abs", Kind::abs}, {"central", Kind::central}, {"signed", Kind::signed_moment}};

struct PrecisionFlags {
    unsigned bits = 0;
    double rel_tol = 1e-12;
    bool no_escalate = false;
    CLI::Option* rel_tol_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--precision-bits", bits, "0 for native double, otherwise MPFR bits (>= 64)");
        rel_tol_opt = cmd->add_option("--rel-tol", rel_tol, "relative tolerance of iterative steps");
        cmd->add_flag("--no-escalate", no_escalate, "keep ill-conditioned native results");
    }

    PrecisionSpec spec() const {
        if (bits != 0 && bits < 64) throw UsageError("--precision-bits must be 0 or at least 64");
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw UsageError("--rel-tol must lie in (0, 1)");
        PrecisionSpec p = bits == 0 ? PrecisionSpec::native(rel_tol) : PrecisionSpec::extended(bits);
        if (bits != 0 && rel_tol_opt->count() > 0) p.rel_tol = rel_tol;
        p.escalate = !no_escalate;
        return p;
    }
};

std::string optional_number(const std::optional<double>& x) {
    return x ? format_number(*x) : std::string();
}

Json record_json(const OutputRecord& rec) {
    Json j;
    j["m"] = rec.m;
    j["a"] = rec.a;
    j["b"] = rec.b ? Json(*rec.b) : Json(nullptr);
    j["r"] = rec.r;
    j["kind"] = to_string(rec.kind);
    j["method"] = to_string(rec.method);
    j["value"] = rec.value;
    j["condition"] = rec.condition;
    j["certified_error"] = rec.certified_error ? Json(*rec.certified_error) : Json(nullptr);
    j["elapsed_ns"] = rec.elapsed_ns;
    j["arithmetic"] = poisson_moments::to_string(rec.arithmetic);
    j["escalated"] = rec.escalated;
    return j;
}

Kind resolve_kind(const std::string& name, bool has_threshold) {
    if (name.empty()) return has_threshold ? Kind::signed_moment : Kind::abs;
    const Kind kind = kKinds.at(name);
    if (kind == Kind::signed_moment && !has_threshold) throw UsageError("signed moments need a threshold");
    if (kind != Kind::signed_moment && has_threshold) throw UsageError("a threshold only applies to signed moments");
    return kind;
}

void write_records(std::ostream& out, const std::string& format, const std::vector<OutputRecord>& rows,
                   bool as_array) {
    if (format == "csv") write_csv(out, rows);
    else if (format == "json") write_json(out, rows, as_array);
    else write_text(out, rows);
}

void print_verify(std::ostream& out, const VerifyResult& res, const VerifyConfig& cfg, std::size_t max_failures) {
    out << "verify: " << res.weights << " oracle values, tol " << format_number(cfg.tol) << ", arithmetic "
        << poisson_moments::to_string(cfg.prec.mode) << (cfg.prec.escalate ? "" : " (no escalation)") << "\n";
    out << std::left << std::setw(12) << "method" << std::setw(9) << "checked" << std::setw(8) << "failed"
        << std::setw(9) << "flagged" << std::setw(26) << "worst_rel_err" << "worst_at\n";
    for (const auto& s : res.methods) {
        if (s.checked == 0) continue;
        out << std::setw(12) << to_string(s.method) << std::setw(9) << s.checked << std::setw(8) << s.failed
            << std::setw(9) << s.flagged << std::setw(26) << format_number(s.worst_rel_err);
        if (s.worst) {
            const auto& w = *s.worst;
            out << "m=" << format_number(w.point.m) << " a=" << format_number(w.point.a);
            if (w.kind == Kind::signed_moment) out << " b=" << format_number(*w.point.b);
            out << " r=" << w.r << " kind=" << to_string(w.kind);
        }
        out << "\n";
    }
    std::size_t shown = 0;
    for (const auto& f : res.failures) {
        if (shown++ == max_failures) {
            out << "... " << res.failures.size() - max_failures << " more failures\n";
            break;
        }
        out << "FAIL m=" << format_number(f.point.m) << " a=" << format_number(f.point.a)
            << " b=" << (f.kind == Kind::signed_moment ? format_number(*f.point.b) : std::string("-"))
            << " r=" << f.r << " kind=" << to_string(f.kind) << " method=" << to_string(f.method)
            << " value=" << format_number(f.value) << " oracle=" << format_number(f.oracle)
            << " rel_err=" << format_number(f.rel_err) << " condition=" << format_number(f.condition) << "\n";
    }
    out << "result: " << (res.pass() ? "PASS" : "FAIL") << "\n";
}

void print_bench(std::ostream& out, const BenchResult& res, const BenchConfig& cfg, const std::string& format) {
    const auto* base = res.find("recurrence");
    if (format == "json") {
        Json rows = Json::array();
        for (const auto& row : res.rows) {
            rows.push_back({{"method", row.name},
                            {"evaluations", row.evaluations},
                            {"median_ns", row.median_ns},
                            {"ns_per_value", double(row.median_ns) / double(row.evaluations)}});
        }
        Json j{{"points", res.points}, {"max_order", cfg.max_order}, {"repeats", cfg.repeats},
               {"rows", rows}, {"oracle_over_recurrence", res.oracle_over_recurrence()}};
        out << j.dump(2) << "\n";
        return;
    }
    out << "bench: " << res.points << " points, orders 0.." << cfg.max_order << ", median of " << cfg.repeats
        << "\n";
    out << std::left << std::setw(14) << "method" << std::setw(8) << "values" << std::setw(14) << "median_ns"
        << std::setw(14) << "ns/value" << "vs_recurrence\n";
    for (const auto& row : res.rows) {
        char per[32], ratio[32];
        std::snprintf(per, sizeof per, "%.1f", double(row.median_ns) / double(row.evaluations));
        std::snprintf(ratio, sizeof ratio, "%.2f",
                      base && base->median_ns > 0 ? double(row.median_ns) / double(base->median_ns) : NAN);
        out << std::setw(14) << row.name << std::setw(8) << row.evaluations << std::setw(14) << row.median_ns
            << std::setw(14) << per << ratio << "\n";
    }
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.2f", res.oracle_over_recurrence());
    out << "oracle/recurrence: " << ratio << "\n";
}

std::vector<PointExpr> centers_or_mean(const std::string& text) {
    return parse_point_exprs(text.empty() ? "m" : text, false);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<OutputRecord>& rows) {
    out << kCsvHeader << "\n";
    for (const auto& rec : rows) {
        out << format_number(rec.m) << ',' << format_number(rec.a) << ',' << optional_number(rec.b) << ','
            << rec.r << ',' << to_string(rec.method) << ',' << format_number(rec.value) << ','
            << format_number(rec.condition) << ',' << optional_number(rec.certified_error) << ','
            << rec.elapsed_ns << "\n";
    }
}

void write_json(std::ostream& out, const std::vector<OutputRecord>& rows, bool as_array) {
    if (!as_array && rows.size() == 1) {
        out << record_json(rows.front()).dump() << "\n";
        return;
    }
    Json arr = Json::array();
    for (const auto& rec : rows) arr.push_back(record_json(rec));
    out << arr.dump(1) << "\n";
}

void write_text(std::ostream& out, const std::vector<OutputRecord>& rows) {
    for (const auto& rec : rows) {
        out << "m=" << format_number(rec.m) << " a=" << format_number(rec.a);
        if (rec.b) out << " b=" << format_number(*rec.b);
        out << " r=" << rec.r << " kind=" << to_string(rec.kind) << " method=" << to_string(rec.method)
            << " value=" << format_number(rec.value) << " condition=" << format_number(rec.condition);
        if (rec.certified_error) out << " certified_error=" << format_number(*rec.certified_error);
        out << " elapsed_ns=" << rec.elapsed_ns;
        if (rec.arithmetic == Arithmetic::extended) out << " digits=" << rec.exact.str(0, std::ios_base::scientific);
        if (rec.escalated) out << " escalated";
        out << "\n";
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Poisson moments: exact recurrences, closed forms and a brute-force oracle", "poisson-moments"};
    app.failure_message([](const CLI::App*, const CLI::Error& e) { return std::string("error: ") + e.what() + "\n"; });
    app.require_subcommand(1);
    const auto formats = CLI::IsMember({"text", "csv", "json"});
    const auto method_names = CLI::IsMember({"recurrence", "shifted", "katti", "closed", "oracle", "poly"});

    // moment
    auto* moment = app.add_subcommand("moment", "compute one moment");
    double mean = 0.0, center = 0.0, threshold = 0.0;
    unsigned order = 0;
    std::string kind_name, method_name = "recurrence", format = "text";
    PrecisionFlags moment_prec;
    moment->add_option("--mean", mean, "Poisson mean m")->required();
    moment->add_option("--order", order, "order r")->required();
    auto* center_opt = moment->add_option("--center", center, "center a (default: the mean)");
    auto* threshold_opt = moment->add_option("--threshold", threshold, "sign threshold b (signed moments)");
    moment->add_option("--kind", kind_name, "abs | central | signed")->check(CLI::IsMember({"abs", "central", "signed"}));
    moment->add_option("--method", method_name)->check(method_names);
    moment->add_option("--format", format)->check(formats);
    moment_prec.attach(moment);

    // table
    auto* table = app.add_subcommand("table", "moments over a grid");
    std::string mean_grid, center_grid, threshold_grid, isa_name = "auto";
    unsigned max_order = 10;
    PrecisionFlags table_prec;
    table->add_option("--mean-grid", mean_grid, "start:stop:step or comma list")->required();
    table->add_option("--center-grid", center_grid, "centers, e.g. m,fm+0.3,m+1,2.5");
    auto* table_threshold = table->add_option("--threshold-grid", threshold_grid, "thresholds, e.g. a,0,m*0.5");
    table->add_option("--max-order", max_order);
    table->add_option("--kind", kind_name)->check(CLI::IsMember({"abs", "central", "signed"}));
    table->add_option("--method", method_name)->check(method_names);
    table->add_option("--format", format)->check(formats);
    table->add_option("--isa", isa_name, "auto | scalar | avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
    table_prec.attach(table);

    // verify
    auto* verify = app.add_subcommand("verify", "check every method against the oracle");
    std::string verify_kind = "all";
    std::vector<std::string> verify_methods;
    double tol = 1e-9;
    std::size_t max_failures = 50;
    PrecisionFlags verify_prec;
    auto* verify_means = verify->add_option("--mean-grid", mean_grid);
    auto* verify_centers = verify->add_option("--center-grid", center_grid);
    auto* verify_thresholds = verify->add_option("--threshold-grid", threshold_grid);
    auto* verify_order = verify->add_option("--max-order", max_order);
    verify->add_option("--kind", verify_kind)->check(CLI::IsMember({"all", "abs", "central", "signed"}));
    verify->add_option("--method", verify_methods, "repeatable; default: every method but the oracle")
        ->check(method_names);
    verify->add_option("--tol", tol, "relative tolerance against the oracle");
    verify->add_option("--max-failures", max_failures, "failure lines to print");
    verify_prec.attach(verify);

    // bench
    auto* bench = app.add_subcommand("bench", "median-of-repeats timing per method");
    double bench_mean = 50.0;
    unsigned repeats = 5;
    double oracle_eps = 1e-12;
    auto* bench_mean_opt = bench->add_option("--mean", bench_mean);
    auto* bench_grid = bench->add_option("--mean-grid", mean_grid)->excludes(bench_mean_opt);
    bench->add_option("--center-grid", center_grid);
    bench->add_option("--max-order", max_order);
    bench->add_option("--repeats", repeats);
    bench->add_option("--rel-tol", oracle_eps, "oracle error budget");
    bench->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    // poly
    auto* poly = app.add_subcommand("poly", "exact central moment polynomials");
    unsigned poly_order = 4;
    poly->add_option("--max-order", poly_order);
    poly->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    std::vector<const char*> argv{"poisson-moments"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (moment->parsed()) {
            if (!(mean > 0.0) || !std::isfinite(mean)) throw UsageError("--mean must be positive and finite");
            Query q;
            q.m = mean;
            q.a = center_opt->count() ? center : mean;
            if (threshold_opt->count()) q.b = threshold;
            if (!std::isfinite(q.a) || (q.b && !std::isfinite(*q.b))) throw UsageError("center and threshold must be finite");
            q.r = order;
            q.kind = resolve_kind(kind_name, q.b.has_value());
            q.method = kMethods.at(method_name);
            const auto prec = moment_prec.spec();
            write_records(out, format, {evaluate(q, prec)}, false);
            return kOk;
        }
        if (table->parsed()) {
            TableConfig cfg;
            cfg.means = parse_axis(mean_grid);
            cfg.centers = centers_or_mean(center_grid);
            if (table_threshold->count()) cfg.thresholds = parse_point_exprs(threshold_grid, true);
            cfg.max_order = max_order;
            cfg.kind = resolve_kind(kind_name, cfg.thresholds.has_value());
            cfg.method = kMethods.at(method_name);
            cfg.prec = table_prec.spec();
            if (isa_name != "auto") {
                cfg.isa = isa_name == "avx2" ? batch::Isa::avx2 : batch::Isa::scalar;
                if (!batch::isa_supported(cfg.isa)) throw UsageError("this CPU does not support " + isa_name);
            }
            const auto res = run_table(cfg);
            if (res.rows.empty()) throw PreconditionError("method " + method_name + " applies to no grid row");
            if (res.skipped > 0) err << "note: skipped " << res.skipped << " rows where " << method_name << " does not apply\n";
            write_records(out, format, res.rows, true);
            return kOk;
        }
        if (verify->parsed()) {
            VerifyConfig cfg = default_verify_config();
            if (verify_means->count()) cfg.means = parse_axis(mean_grid);
            if (verify_centers->count()) cfg.centers = parse_point_exprs(center_grid, false);
            if (verify_thresholds->count()) cfg.thresholds = parse_point_exprs(threshold_grid, true);
            if (verify_order->count()) cfg.max_order = max_order;
            if (verify_kind != "all") cfg.kinds = {kKinds.at(verify_kind)};
            if (!verify_methods.empty()) {
                cfg.methods.clear();
                for (const auto& name : verify_methods) cfg.methods.push_back(kMethods.at(name));
            }
            cfg.tol = tol;
            cfg.prec = verify_prec.spec();
            const auto res = run_verify(cfg);
            print_verify(out, res, cfg, max_failures);
            return res.pass() ? kOk : kVerifyFailed;
        }
        if (bench->parsed()) {
            BenchConfig cfg;
            cfg.means = bench_grid->count() ? parse_axis(mean_grid) : std::vector<double>{bench_mean};
            if (!center_grid.empty()) cfg.centers = parse_point_exprs(center_grid, false);
            cfg.max_order = max_order;
            cfg.repeats = repeats;
            if (!(oracle_eps > 0.0 && oracle_eps < 1.0)) throw UsageError("--rel-tol must lie in (0, 1)");
            cfg.oracle_eps = oracle_eps;
            print_bench(out, run_bench(cfg), cfg, format);
            return kOk;
        }
        if (poly->parsed()) {
            const auto mu = moment_polynomials(poly_order);
            if (format == "json") {
                Json arr = Json::array();
                for (const auto& p : mu) {
                    Json coeffs = Json::array();
                    for (const auto& c : p.coeffs) coeffs.push_back(c.str());
                    arr.push_back({{"order", p.order}, {"coefficients", coeffs}});
                }
                out << arr.dump(1) << "\n";
            } else {
                for (const auto& p : mu) out << "μ" << p.order << ": " << format_coefficients(p) << "\n";
            }
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return kVerifyFailed;
    }
    return kUsage;
}

}  // namespace poisson_moments::cli
