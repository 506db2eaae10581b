#pragma once

#include "htnpref/search.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace htnpref {

struct EnumerationCaps {
    std::uint64_t max_plans = 1'000'000;
    int max_depth = 64;
    double max_seconds = 600;
};

struct OracleResult {
    std::uint64_t plan_count = 0;
    std::optional<Plan> best_plan;
    std::optional<Trace> best_trace;
    Weight best_weight = Weight::worst();
    std::vector<Weight> all_weights;  // enumeration order
    SearchStats stats;
    bool complete = true;
};

class CapExceeded : public std::runtime_error {
public:
    CapExceeded(const std::string& what, OracleResult partial)
        : std::runtime_error(what), partial(std::move(partial)) {}

    OracleResult partial;
};

/// Called with each complete trace and its weight, in enumeration order.
using PlanVisitor = std::function<void(const Trace&, const Weight&)>;

/// Depth-first enumeration of every solution over the same expansion as the
/// best-first search, each plan scored with the direct semantics. Reported
/// seconds exclude preference evaluation.
OracleResult enumerate_all(const Problem& problem, const EnumerationCaps& caps = {},
                           const PlanVisitor& visit = nullptr);

struct CheckItem {
    std::string name;
    bool passed = true;
    std::uint64_t checked = 0;
    std::string detail;  // first failure
};

struct CrossCheckReport {
    std::vector<CheckItem> items;
    OracleResult oracle;
    std::optional<SolveResult> best_first;

    bool passed() const;
};

/// Runs solve and enumerate_all and checks optimal-weight equality, terminal
/// progression against the direct semantics on every plan, prefix bound
/// properties on every plan, per-slot bound stability, and plan soundness.
/// `unsimplified_stride` runs the unsimplified progression on every k-th
/// plan only; it is quadratic in trace length.
CrossCheckReport cross_check(const Problem& problem, const EnumerationCaps& caps = {},
                             const SearchConfig& config = {}, std::uint64_t unsimplified_stride = 1);

}  // namespace htnpref
