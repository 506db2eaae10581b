#include "htnpref/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <map>
#include <regex>
#include <sstream>

namespace htnpref {

std::string to_json_line(const RunRecord& r) {
    nlohmann::ordered_json j;
    j["problem"] = r.problem;
    j["mode"] = r.mode;
    j["planCount"] = r.plan_count ? nlohmann::ordered_json(*r.plan_count) : nlohmann::ordered_json(nullptr);
    j["NE"] = r.ne;
    j["NC"] = r.nc;
    j["seconds"] = r.seconds;
    j["PL"] = r.pl;
    j["weight"] = r.weight ? nlohmann::ordered_json(r.weight->str()) : nlohmann::ordered_json(nullptr);
    j["status"] = r.status;
    return j.dump();
}

RunRecord run_bestfirst(const Problem& problem, const std::string& id, double timeout_seconds,
                        const SearchConfig& config) {
    RunRecord r;
    r.problem = id;
    r.mode = "bestfirst";
    SearchConfig c = config;
    c.timeout_seconds = timeout_seconds;
    try {
        SolveResult s = solve(problem, c);
        r.ne = s.stats.expanded;
        r.nc = s.stats.considered;
        r.seconds = s.stats.seconds;
        if (s.status == SolveResult::Status::Ok) {
            r.status = "ok";
            r.pl = s.stats.plan_length;
            r.weight = s.weight;
        } else {
            r.status = "noplan";
        }
    } catch (const ResourceLimit& e) {
        r.status = "timeout";
        r.ne = e.expanded;
        r.nc = e.considered;
        r.seconds = e.seconds;
    }
    return r;
}

RunRecord run_bruteforce(const Problem& problem, const std::string& id, double timeout_seconds) {
    RunRecord r;
    r.problem = id;
    r.mode = "bruteforce";
    EnumerationCaps caps;
    caps.max_plans = UINT64_MAX;
    caps.max_seconds = timeout_seconds;
    auto fill = [&](const OracleResult& o) {
        r.plan_count = o.plan_count;
        r.ne = o.stats.expanded;
        r.nc = o.stats.considered;
        r.seconds = o.stats.seconds;
    };
    try {
        OracleResult o = enumerate_all(problem, caps);
        fill(o);
        if (o.best_plan) {
            r.status = "ok";
            r.pl = o.best_plan->size();
            r.weight = o.best_weight;
        } else {
            r.status = "noplan";
        }
    } catch (const CapExceeded& e) {
        fill(e.partial);
        r.status = "timeout";
    }
    return r;
}

std::vector<SuiteEntry> load_suite(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a suite directory: " + dir);
    std::vector<std::string> domains;
    std::map<std::string, std::map<int, std::pair<std::string, std::string>>> found;
    static const std::regex numbered(R"((.+)-(\d+)\.(prob|pref))");
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        std::smatch m;
        if (entry.path().extension() == ".htn") {
            domains.push_back(entry.path().stem().string());
        } else if (std::regex_match(name, m, numbered)) {
            auto& slot = found[m[1]][std::stoi(m[2])];
            (m[3] == "prob" ? slot.first : slot.second) = entry.path().string();
        }
    }
    if (domains.empty()) throw std::runtime_error("no .htn domain in " + dir);
    std::sort(domains.begin(), domains.end());
    std::vector<SuiteEntry> out;
    for (const auto& d : domains) {
        for (const auto& [k, files] : found[d]) {
            const std::string id = d + "-" + std::to_string(k);
            if (files.first.empty() || files.second.empty()) {
                throw std::runtime_error("incomplete problem/preference pair for " + id);
            }
            out.push_back({id, (fs::path(dir) / (d + ".htn")).string(), files.first, files.second});
        }
    }
    return out;
}

namespace {

std::string seconds_text(const RunRecord& r) {
    std::ostringstream s;
    s << (r.status == "timeout" ? ">" : "") << std::fixed << std::setprecision(3) << r.seconds;
    return s.str();
}

std::string count_text(std::uint64_t n, const RunRecord& r) {
    return (r.status == "timeout" ? ">" : "") + std::to_string(n);
}

}  // namespace

std::string bench_table(const std::vector<RunRecord>& records) {
    struct Row {
        const RunRecord* brute = nullptr;
        const RunRecord* best = nullptr;
    };
    std::map<std::string, Row> rows;
    for (const auto& r : records) {
        (r.mode == "bruteforce" ? rows[r.problem].brute : rows[r.problem].best) = &r;
    }
    std::vector<std::pair<std::string, Row>> ordered(rows.begin(), rows.end());
    auto plan_key = [](const Row& row) {
        if (!row.brute || !row.brute->plan_count) return UINT64_MAX;
        return *row.brute->plan_count;
    };
    std::stable_sort(ordered.begin(), ordered.end(),
                     [&](const auto& a, const auto& b) { return plan_key(a.second) < plan_key(b.second); });

    std::ostringstream out;
    out << std::left << std::setw(16) << "problem" << std::right << std::setw(10) << "#plan" << std::setw(11)
        << "bf-NE" << std::setw(11) << "bf-time" << std::setw(10) << "hp-NE" << std::setw(10) << "hp-NC"
        << std::setw(11) << "hp-time" << std::setw(5) << "PL" << std::setw(9) << "weight" << "\n";
    for (const auto& [id, row] : ordered) {
        if (row.brute && row.best && row.brute->weight && row.best->weight &&
            *row.brute->weight != *row.best->weight) {
            throw WeightMismatch("weight mismatch on " + id + ": bruteforce " + row.brute->weight->str() +
                                 ", bestfirst " + row.best->weight->str());
        }
        out << std::left << std::setw(16) << id << std::right;
        if (row.brute) {
            out << std::setw(10) << count_text(row.brute->plan_count.value_or(0), *row.brute) << std::setw(11)
                << count_text(row.brute->ne, *row.brute) << std::setw(11) << seconds_text(*row.brute);
        } else {
            out << std::setw(10) << "-" << std::setw(11) << "-" << std::setw(11) << "-";
        }
        if (row.best) {
            out << std::setw(10) << count_text(row.best->ne, *row.best) << std::setw(10)
                << count_text(row.best->nc, *row.best) << std::setw(11) << seconds_text(*row.best);
        } else {
            out << std::setw(10) << "-" << std::setw(10) << "-" << std::setw(11) << "-";
        }
        const RunRecord* done = row.best && row.best->weight ? row.best : row.brute;
        out << std::setw(5) << (done && done->weight ? std::to_string(done->pl) : "-") << std::setw(9)
            << (done && done->weight ? done->weight->str() : "-") << "\n";
    }
    return out.str();
}

}  // namespace htnpref
