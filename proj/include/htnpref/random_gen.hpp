#pragma once

#include "htnpref/problem.hpp"

#include <cstdint>
#include <set>
#include <string>

namespace htnpref {

enum class Construct {
    Literal,
    Final,
    Occ,
    Apply,
    Before,
    HoldBefore,
    HoldAfter,
    HoldBetween,
    Not,
    And,
    Or,
    Next,
    Always,
    Eventually,
    Until,
    Exists,
    Forall,
    Apf,
    Conditional,
    GeneralConjunction,
    GeneralDisjunction,
};

std::set<Construct> all_constructs();

struct GenConfig {
    std::uint64_t seed = 1;
    int num_operators = 4;   // 2..6
    int num_methods = 6;     // 2..8
    int max_subtasks = 3;    // 1..3
    int max_depth = 3;       // 1..4
    int num_constants = 3;   // 2..5
    int preference_budget = 25;  // BDF plus GPF nodes, at most 25
    std::set<Construct> constructs = all_constructs();
    /// Instances with more plans are discarded and redrawn.
    std::uint64_t max_plans = 2000;

    /// Throws std::invalid_argument when a field is outside its range.
    void validate() const;
};

struct GeneratedInstance {
    Problem problem;
    bool expected_solvable = false;
    std::uint64_t plan_count = 0;
    /// Attempts discarded for exceeding max_plans before this one.
    int redraws = 0;
};

/// Deterministic in the config. Nonprimitive tasks live in layers 1..max_depth
/// and a method only calls tasks of lower layers, so every plan set is finite.
GeneratedInstance generate(const GenConfig& config);

/// GPF plus BDF node count, the quantity bounded by preference_budget.
std::size_t preference_size(const Gpf& g);

/// Writes NAME.htn, NAME-1.prob and NAME-1.pref into `dir`.
void write_instance(const Problem& problem, const std::string& dir, const std::string& name);

}  // namespace htnpref
