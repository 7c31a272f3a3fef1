#include "cli.hpp"
#include "commands.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "json.hpp"

#include <cmath>
#include <sstream>

using namespace poisson_moments;
using namespace poisson_moments::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

double field(const std::string& text, const std::string& key) {
    const auto pos = text.find(" " + key + "=");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size() + 2));
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("moment examples", "[cli]") {
    const auto closed = invoke({"moment", "--mean", "1", "--order", "1", "--center", "1", "--method", "closed"});
    REQUIRE(closed.code == kOk);
    REQUIRE(field(closed.out, "value") == Catch::Approx(2.0 / std::exp(1.0)).epsilon(1e-15));

    const auto trivial = invoke({"moment", "--mean", "1", "--order", "0", "--center", "0", "--method", "recurrence"});
    REQUIRE(trivial.code == kOk);
    REQUIRE(field(trivial.out, "value") == 1.0);

    const auto katti = invoke({"moment", "--mean", "2", "--order", "3", "--center", "2", "--method", "katti"});
    const auto rec = invoke({"moment", "--mean", "2", "--order", "3", "--center", "2", "--method", "recurrence"});
    REQUIRE(katti.code == kOk);
    const double kv = field(katti.out, "value");
    const double rv = field(rec.out, "value");
    REQUIRE(std::fabs(kv - rv) / (std::fabs(rv) + 1) < 1e-12);
}

TEST_CASE("exit codes", "[cli]") {
    REQUIRE(invoke({}).code == kUsage);
    REQUIRE(invoke({"--help"}).code == kOk);
    REQUIRE(invoke({"moment", "--order", "1"}).code == kUsage);
    REQUIRE(invoke({"moment", "--mean", "0", "--order", "1"}).code == kUsage);
    REQUIRE(invoke({"moment", "--mean", "1", "--order", "-1"}).code == kUsage);
    REQUIRE(invoke({"moment", "--mean", "1", "--order", "1", "--rel-tol", "2"}).code == kUsage);
    REQUIRE(invoke({"moment", "--mean", "1", "--order", "1", "--precision-bits", "32"}).code == kUsage);
    REQUIRE(invoke({"moment", "--mean", "1", "--order", "1", "--method", "magic"}).code == kUsage);
    REQUIRE(invoke({"moment", "--mean", "1", "--order", "1", "--kind", "signed"}).code == kUsage);

    const auto even = invoke({"moment", "--mean", "2", "--order", "2", "--method", "katti"});
    REQUIRE(even.code == kPrecondition);
    REQUIRE(even.err.find('\n') == even.err.size() - 1);  // one-line diagnostic
    REQUIRE(invoke({"moment", "--mean", "2", "--order", "3", "--center", "-1", "--method", "katti"}).code ==
            kPrecondition);
    REQUIRE(invoke({"moment", "--mean", "2", "--order", "1", "--center", "1", "--method", "closed"}).code ==
            kPrecondition);
    REQUIRE(invoke({"moment", "--mean", "2", "--order", "0", "--method", "shifted"}).code == kPrecondition);
}

TEST_CASE("csv and json carry identical values", "[cli]") {
    const std::vector<std::string> base{"table", "--mean-grid", "0.5:2.5:1", "--center-grid", "m,0,fm+0.3",
                                        "--threshold-grid", "a,0", "--kind", "signed", "--max-order", "6"};
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "json"});
    const auto csv = invoke(csv_args);
    const auto js = invoke(json_args);
    REQUIRE(csv.code == kOk);
    REQUIRE(js.code == kOk);

    const auto rows = csv_rows(csv.out);
    REQUIRE(rows.front().size() == 9);
    REQUIRE(csv.out.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    const auto arr = nlohmann::json::parse(js.out);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() + 1 == rows.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& row = rows[i + 1];
        INFO("row " << i);
        REQUIRE(std::stod(row[0]) == arr[i]["m"].get<double>());
        REQUIRE(std::stod(row[1]) == arr[i]["a"].get<double>());
        REQUIRE(std::stod(row[2]) == arr[i]["b"].get<double>());
        REQUIRE(std::stoul(row[3]) == arr[i]["r"].get<unsigned>());
        REQUIRE(row[4] == arr[i]["method"].get<std::string>());
        REQUIRE(std::stod(row[5]) == arr[i]["value"].get<double>());
        REQUIRE(std::stod(row[6]) == arr[i]["condition"].get<double>());
        REQUIRE(row[7].empty());
    }
}

TEST_CASE("table rows match single moments", "[cli]") {
    TableConfig cfg;
    cfg.means = {0.7, 5.0, 40.0};
    cfg.centers = parse_point_exprs("m,0,fm+0.3,m+1", false);
    cfg.max_order = 9;
    for (Kind kind : {Kind::abs, Kind::central}) {
        cfg.kind = kind;
        const auto res = run_table(cfg);
        REQUIRE(res.used_batch);
        REQUIRE(res.rows.size() == 3 * 4 * 10);
        for (const auto& row : res.rows) {
            Query q{row.m, row.a, row.b, row.r, kind, Method::recurrence};
            const auto single = evaluate(q, cfg.prec);
            INFO("m=" << row.m << " a=" << row.a << " r=" << row.r);
            REQUIRE(single.value == row.value);
        }
    }
}

TEST_CASE("table skips rows a method does not cover", "[cli]") {
    const auto katti = invoke({"table", "--mean-grid", "1,2", "--max-order", "5", "--method", "katti", "--format", "csv"});
    REQUIRE(katti.code == kOk);
    REQUIRE(csv_rows(katti.out).size() == 1 + 2 * 3);
    REQUIRE(invoke({"table", "--mean-grid", "1", "--center-grid", "0", "--method", "closed"}).code == kPrecondition);
    REQUIRE(invoke({"table", "--mean-grid", "3:1:1"}).code == kUsage);
    REQUIRE(invoke({"table", "--mean-grid", "1", "--center-grid", "q+1"}).code == kUsage);
}

TEST_CASE("oracle records carry a certified error", "[cli]") {
    const auto out = invoke({"moment", "--mean", "3", "--order", "4", "--center", "1", "--method", "oracle",
                             "--format", "json"});
    REQUIRE(out.code == kOk);
    const auto j = nlohmann::json::parse(out.out);
    REQUIRE(j["certified_error"].get<double>() <= 1e-12);
    REQUIRE(j["b"].is_null());
}

TEST_CASE("poly prints exact coefficients", "[cli]") {
    const auto out = invoke({"poly", "--max-order", "4"});
    REQUIRE(out.code == kOk);
    REQUIRE(out.out.find("μ4: [0, 1, 3]\n") != std::string::npos);
    REQUIRE(out.out.find("μ0: [1]\n") != std::string::npos);
}

TEST_CASE("verify", "[cli]") {
    const auto ok = invoke({"verify", "--tol", "1e-9"});
    REQUIRE(ok.code == kOk);
    REQUIRE(ok.out.find("result: PASS") != std::string::npos);

    const auto strict = invoke({"verify", "--tol", "1e-18"});
    REQUIRE(strict.code == kVerifyFailed);
    REQUIRE(strict.out.find("FAIL m=") != std::string::npos);

    REQUIRE(invoke({"verify", "--mean-grid", "2:1:1"}).code == kUsage);
    REQUIRE(invoke({"verify", "--mean-grid", ""}).code == kUsage);
}

TEST_CASE("verify exit code reflects every row", "[cli][property]") {
    auto cfg = default_verify_config();
    cfg.means = {0.5, 7.0};
    for (double tol : {1e-9, 1e-14, 1e-17}) {
        cfg.tol = tol;
        const auto res = run_verify(cfg);
        std::size_t failed = 0;
        for (const auto& s : res.methods) {
            failed += s.failed;
            REQUIRE((s.failed == 0) == (s.worst_rel_err <= tol));
        }
        REQUIRE(res.pass() == (failed == 0));
    }
}

TEST_CASE("bench orders recurrence before oracle", "[cli]") {
    BenchConfig cfg;
    const auto res = run_bench(cfg);
    REQUIRE(res.find("recurrence"));
    REQUIRE(res.find("oracle"));
    REQUIRE(res.find("recurrence")->median_ns < res.find("oracle")->median_ns);

    const auto out = invoke({"bench", "--mean", "50", "--max-order", "10"});
    REQUIRE(out.code == kOk);
    REQUIRE(out.out.find("oracle/recurrence:") != std::string::npos);
}
