#pragma once

#include "htnpref/oracle.hpp"
#include "htnpref/search.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace htnpref {

struct RunRecord {
    std::string problem;
    std::string mode;  // bestfirst | bruteforce
    std::optional<std::uint64_t> plan_count;  // bruteforce only; lower bound on timeout
    std::uint64_t ne = 0;
    std::uint64_t nc = 0;
    double seconds = 0;
    std::size_t pl = 0;
    std::optional<Weight> weight;
    std::string status;  // ok | timeout | noplan
};

/// One JSON object on a single line; keys are problem, mode, planCount, NE,
/// NC, seconds, PL, weight, status. Weights are exact decimal strings.
std::string to_json_line(const RunRecord& r);

RunRecord run_bestfirst(const Problem& problem, const std::string& id, double timeout_seconds,
                        const SearchConfig& config = {});
RunRecord run_bruteforce(const Problem& problem, const std::string& id, double timeout_seconds);

/// A NAME.htn plus NAME-k.prob / NAME-k.pref triple.
struct SuiteEntry {
    std::string id;  // NAME-k
    std::string domain;
    std::string problem;
    std::string preference;
};

/// Entries of a suite directory sorted by k. Throws std::runtime_error on a
/// malformed layout (no domain, problem without preference).
std::vector<SuiteEntry> load_suite(const std::string& dir);

class WeightMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Side-by-side table, one row per problem, sorted by bruteforce plan count.
/// Throws WeightMismatch if both modes finished with different weights.
std::string bench_table(const std::vector<RunRecord>& records);

}  // namespace htnpref
