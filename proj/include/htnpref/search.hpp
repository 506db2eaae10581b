#pragma once

#include "htnpref/problem.hpp"
#include "htnpref/progression.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace htnpref {

/// One entry of a node's remaining task network.
struct AgendaItem {
    enum class Kind { Pending, EndMarker, Group };

    Kind kind = Kind::Pending;
    Task task;                     // Pending: ground task
    std::vector<Literal> guards;   // Pending: ground literals that must hold right before it starts
    int depth = 0;                 // Pending: decomposition depth
    UnitRef unit;                  // EndMarker: the instance to end
    std::vector<AgendaItem> members;  // Group: unordered Pending items
};

/// back() is the front of the agenda.
using Agenda = std::vector<AgendaItem>;

struct EventChain {
    Event event;
    std::shared_ptr<const EventChain> prev;
};

struct SearchNode {
    Bounds bounds{Weight::best(), Weight::worst()};
    std::optional<Weight> weight;  // set iff the agenda is empty
    Agenda agenda;
    State state;
    std::shared_ptr<const EventChain> events;
    std::size_t event_count = 0;
    /// Preference progressed (non-terminally) through `state`; unset when
    /// preferences are not tracked or the node is terminal.
    std::optional<ProgressedFormula> settled;
    std::size_t plan_length = 0;
    InstanceId next_id = 0;
};

std::vector<Event> events_of(const SearchNode& node);

class ResourceLimit : public std::runtime_error {
public:
    ResourceLimit(const std::string& what, std::uint64_t expanded, std::uint64_t considered, double seconds)
        : std::runtime_error(what), expanded(expanded), considered(considered), seconds(seconds) {}

    std::uint64_t expanded;
    std::uint64_t considered;
    double seconds;
};

struct ExpandContext {
    const Problem* problem = nullptr;
    Gpf preference;  // ground
    ProgressionOptions progression;
    bool track_preferences = true;
    int max_depth = 64;
};

/// Replaces occurrence constructs whose unit can never run (a precondition on
/// a predicate no operator changes fails in the initial state) by false, then
/// folds constants. Preserves the weight of every plan.
Gpf prune_static(const Gpf& ground_preference, const Problem& problem);

ExpandContext make_context(const Problem& problem, const ProgressionOptions& options = {},
                           bool track_preferences = true, int max_depth = 64);

SearchNode initial_node(const ExpandContext& ctx);

/// Children of `node`, one per reachable next ground operator (or the
/// terminal completion). Children violating hard constraints are dropped.
/// Throws ResourceLimit when the decomposition depth cap is exceeded.
std::vector<SearchNode> expand(const SearchNode& node, const ExpandContext& ctx);

inline bool termination_check(const SearchNode& node) { return node.agenda.empty(); }

struct SearchConfig {
    ProgressionOptions progression;
    bool tiebreak_lex = false;
    std::uint64_t max_expansions = 0;  // 0: unlimited
    double timeout_seconds = 0;        // 0: unlimited
    int max_depth = 64;
};

struct SearchStats {
    std::uint64_t expanded = 0;    // NE
    std::uint64_t considered = 0;  // NC
    double seconds = 0;
    std::size_t plan_length = 0;   // PL
    Weight max_popped_opt;         // largest optW popped before returning
};

struct SolveResult {
    enum class Status { Ok, NoPlan };

    Status status = Status::NoPlan;
    Plan plan;
    Trace trace;
    Weight weight = Weight::worst();
    SearchStats stats;
};

SolveResult solve(const Problem& problem, const SearchConfig& config = {});

}  // namespace htnpref
