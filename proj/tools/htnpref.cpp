// htnpref: preference-based HTN planner command line.
//
//   htnpref solve --domain D --problem P --prefs F [--mode bestfirst|bruteforce]
//                 [--timeout S] [--json] [--tiebreak-lex] [--paper-literal-hold]
//   htnpref bench --suite DIR --timeout S --out FILE
//   htnpref check --suite DIR [--unsimplified-stride K]
//
// Exit codes: 0 ok, 1 no plan, 2 usage or parse error, 3 timeout,
// 4 weight mismatch or failed cross-check.

#include "htnpref/bench.hpp"
#include "htnpref/oracle.hpp"
#include "htnpref/parser.hpp"
#include "htnpref/search.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace htnpref;

namespace {

constexpr int kOk = 0;
constexpr int kNoPlan = 1;
constexpr int kUsage = 2;
constexpr int kTimeout = 3;
constexpr int kMismatch = 4;

struct SolveArgs {
    std::string domain, problem, prefs;
    std::string mode = "bestfirst";
    double timeout = 0;
    bool json = false;
    bool tiebreak_lex = false;
    bool paper_literal_hold = false;
};

int status_code(const RunRecord& r) {
    if (r.status == "ok") return kOk;
    if (r.status == "noplan") return kNoPlan;
    return kTimeout;
}

int run_solve(const SolveArgs& a) {
    Problem problem = load_problem(a.domain, a.problem, a.prefs);
    const std::string id = problem.name;
    RunRecord record;
    std::optional<Plan> plan;
    if (a.mode == "bestfirst") {
        SearchConfig config;
        config.tiebreak_lex = a.tiebreak_lex;
        config.progression.paper_literal_hold = a.paper_literal_hold;
        config.timeout_seconds = a.timeout;
        record.problem = id;
        record.mode = a.mode;
        try {
            SolveResult s = solve(problem, config);
            record.ne = s.stats.expanded;
            record.nc = s.stats.considered;
            record.seconds = s.stats.seconds;
            record.status = s.status == SolveResult::Status::Ok ? "ok" : "noplan";
            if (s.status == SolveResult::Status::Ok) {
                record.pl = s.stats.plan_length;
                record.weight = s.weight;
                plan = s.plan;
            }
        } catch (const ResourceLimit& e) {
            record.status = "timeout";
            record.ne = e.expanded;
            record.nc = e.considered;
            record.seconds = e.seconds;
            if (!a.json) std::cerr << "htnpref: " << e.what() << "\n";
        }
    } else {
        EnumerationCaps caps;
        caps.max_plans = UINT64_MAX;
        caps.max_seconds = a.timeout;
        record.problem = id;
        record.mode = a.mode;
        OracleResult o;
        try {
            o = enumerate_all(problem, caps);
            record.status = o.best_plan ? "ok" : "noplan";
        } catch (const CapExceeded& e) {
            o = e.partial;
            record.status = "timeout";
        }
        record.plan_count = o.plan_count;
        record.ne = o.stats.expanded;
        record.nc = o.stats.considered;
        record.seconds = o.stats.seconds;
        if (record.status == "ok") {
            plan = o.best_plan;
            record.pl = plan->size();
            record.weight = o.best_weight;
        }
    }

    if (a.json) {
        std::cout << to_json_line(record) << "\n";
        return status_code(record);
    }
    if (plan) {
        for (const auto& op : plan->ops) std::cout << op.str() << "\n";
        std::cout << "weight: " << record.weight->str() << "\n";
    } else {
        std::cout << (record.status == "noplan" ? "no plan\n" : "timeout\n");
    }
    std::cout << "status: " << record.status << "\n";
    if (record.plan_count) std::cout << "plans: " << *record.plan_count << "\n";
    std::cout << "NE: " << record.ne << "\n"
              << "NC: " << record.nc << "\n"
              << "PL: " << record.pl << "\n"
              << "seconds: " << std::fixed << std::setprecision(3) << record.seconds << "\n";
    return status_code(record);
}

int run_bench(const std::string& suite, double timeout, const std::string& out_path) {
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "htnpref: cannot write --out " << out_path << "\n";
        return kUsage;
    }
    std::vector<RunRecord> records;
    for (const auto& e : load_suite(suite)) {
        Problem p = load_problem(e.domain, e.problem, e.preference);
        for (const RunRecord& r : {run_bruteforce(p, e.id, timeout), run_bestfirst(p, e.id, timeout)}) {
            out << to_json_line(r) << "\n";
            records.push_back(r);
        }
    }
    try {
        std::cout << bench_table(records);
    } catch (const WeightMismatch& e) {
        std::cerr << "htnpref: " << e.what() << "\n";
        return kMismatch;
    }
    return kOk;
}

int run_check(const std::string& suite, std::uint64_t stride) {
    bool all = true;
    for (const auto& e : load_suite(suite)) {
        Problem p = load_problem(e.domain, e.problem, e.preference);
        CrossCheckReport report = cross_check(p, {}, {}, stride);
        for (const auto& item : report.items) {
            std::cout << (item.passed ? "PASS " : "FAIL ") << e.id << ": " << item.name << " (" << item.checked
                      << " checked)";
            if (!item.passed) std::cout << ": " << item.detail;
            std::cout << "\n";
        }
        all = all && report.passed();
    }
    return all ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preference-based HTN planner"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Find a most preferred plan");
    solve_cmd->add_option("--domain", solve_args.domain, "Domain file (.htn)")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--problem", solve_args.problem, "Problem file (.prob)")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--prefs", solve_args.prefs, "Preference file (.pref)")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--mode", solve_args.mode, "bestfirst or bruteforce")
        ->check(CLI::IsMember({"bestfirst", "bruteforce"}));
    solve_cmd->add_option("--timeout", solve_args.timeout, "Seconds, 0 for none")->check(CLI::NonNegativeNumber);
    solve_cmd->add_flag("--json", solve_args.json, "Print one JSON record");
    solve_cmd->add_flag("--tiebreak-lex", solve_args.tiebreak_lex, "Break weight ties lexicographically");
    solve_cmd->add_flag("--paper-literal-hold", solve_args.paper_literal_hold,
                        "Bound pending before/hold* constructs by the current prefix");

    std::string suite, out_path;
    double timeout = 60;
    auto* bench_cmd = app.add_subcommand("bench", "Run both modes over a suite");
    bench_cmd->add_option("--suite", suite, "Suite directory")->required()->check(CLI::ExistingDirectory);
    bench_cmd->add_option("--timeout", timeout, "Seconds per run")->required()->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", out_path, "JSON-lines output file")->required();

    std::string check_suite;
    auto* check_cmd = app.add_subcommand("check", "Cross-check search against the oracle");
    check_cmd->add_option("--suite", check_suite, "Suite directory")->required()->check(CLI::ExistingDirectory);
    std::uint64_t stride = 1;
    check_cmd->add_option("--unsimplified-stride", stride, "Replay unsimplified progression on every k-th plan (0 = never)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*solve_cmd) return run_solve(solve_args);
        if (*bench_cmd) return run_bench(suite, timeout, out_path);
        return run_check(check_suite, stride);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "htnpref: " << e.what() << "\n";
        return kUsage;
    }
}
