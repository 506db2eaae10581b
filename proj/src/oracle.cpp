#include "htnpref/oracle.hpp"

#include "htnpref/semantics.hpp"

#include <algorithm>
#include <chrono>

namespace htnpref {

OracleResult enumerate_all(const Problem& problem, const EnumerationCaps& caps, const PlanVisitor& visit) {
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    double eval_seconds = 0;
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count() - eval_seconds; };

    ExpandContext ctx = make_context(problem, {}, false, caps.max_depth);
    const auto constants = problem.constants();
    OracleResult result;
    auto fail = [&](const std::string& why) {
        result.complete = false;
        result.stats.seconds = elapsed();
        throw CapExceeded(why, result);
    };

    std::vector<SearchNode> stack;
    stack.push_back(initial_node(ctx));
    result.stats.considered = 1;
    while (!stack.empty()) {
        SearchNode node = std::move(stack.back());
        stack.pop_back();
        if (termination_check(node)) {
            if (result.plan_count >= caps.max_plans) fail("plan cap " + std::to_string(caps.max_plans) + " reached");
            const auto eval_start = Clock::now();
            Trace trace = replay(problem.init, events_of(node));
            Weight w = weight_gpf(trace, problem.preference, constants);
            ++result.plan_count;
            result.all_weights.push_back(w);
            if (!result.best_plan || w < result.best_weight) {
                result.best_weight = w;
                result.best_plan = project_plan(trace.events);
                result.best_trace = trace;
            }
            if (visit) visit(trace, w);
            eval_seconds += std::chrono::duration<double>(Clock::now() - eval_start).count();
            continue;
        }
        if (caps.max_seconds > 0 && elapsed() > caps.max_seconds) fail("time cap reached");
        std::vector<SearchNode> children;
        try {
            children = expand(node, ctx);
        } catch (const ResourceLimit& e) {
            fail(e.what());
        }
        result.stats.considered += children.size();
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
            result.stats.expanded += it->plan_length - node.plan_length;
            stack.push_back(std::move(*it));
        }
    }
    if (result.best_plan) result.stats.plan_length = result.best_plan->size();
    result.stats.seconds = elapsed();
    return result;
}

bool CrossCheckReport::passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
}

namespace {

template <class Detail>
void record(CheckItem& item, bool ok, Detail&& detail) {
    ++item.checked;
    if (!ok && item.passed) {
        item.passed = false;
        item.detail = detail();
    }
}

bool same_event(const Event& a, const Event& b) {
    return a.kind == b.kind && *a.unit == *b.unit;
}

/// Progression of the most recent trace, one entry per non-terminal step, so
/// that the next trace of a depth-first enumeration resumes from the first
/// event where the two differ.
struct PrefixCache {
    std::vector<Event> events;
    std::vector<ProgressedFormula> formulas;  // formulas[k]: after k events
    std::vector<Bounds> bounds;
    std::vector<std::vector<Truth>> truths;

    std::size_t reusable(const Trace& t) const {
        std::size_t k = 0;
        while (k < events.size() && k < t.events.size() && same_event(events[k], t.events[k])) ++k;
        return k;
    }

    void truncate(std::size_t k) {
        events.resize(k);
        formulas.resize(k + 1, formulas.front());
        bounds.resize(k + 1);
        truths.resize(k + 1);
    }
};

std::string plan_text(const Trace& t) {
    std::string out;
    for (const auto& op : project_plan(t.events).ops) out += op.str() + " ";
    return out;
}

}  // namespace

CrossCheckReport cross_check(const Problem& problem, const EnumerationCaps& caps, const SearchConfig& config,
                             std::uint64_t unsimplified_stride) {
    CrossCheckReport report;
    std::uint64_t visited = 0;
    CheckItem equivalence{"progression terminal weight equals direct weight", true, 0, {}};
    CheckItem unsimplified{"unsimplified progression gives the same terminal weight", true, 0, {}};
    CheckItem prefixes{"bounds monotone and enclosing the final weight on every prefix", true, 0, {}};
    CheckItem slots{"per-slot bounds stable and matching the slot's direct truth", true, 0, {}};

    const Gpf ground = prune_static(problem.ground_preference(), problem);
    const auto constants = problem.constants();
    std::vector<Bdf> direct_slots;
    for_each_slot(problem.preference, [&](const Bdf& slot) { direct_slots.push_back(htnpref::ground(slot, constants)); });
    ProgressionOptions raw = config.progression;
    raw.simplify = false;

    PrefixCache cache;
    auto visit = [&](const Trace& trace, const Weight& direct) {
        const std::size_t n = trace.events.size();
        auto where = [&] { return plan_text(trace); };
        const bool run_raw = unsimplified_stride > 0 && visited++ % unsimplified_stride == 0;
        ProgressedFormula pf(ground);
        ProgressedFormula pr(ground);
        if (n == 0) {
            pf = pf.step(nullptr, trace.states[0], true, config.progression);
            pr = pr.step(nullptr, trace.states[0], true, raw);
        } else {
            if (cache.formulas.empty()) {
                cache.formulas.push_back(pf.step(nullptr, trace.states[0], false, config.progression));
                cache.bounds.push_back(cache.formulas.back().bounds(config.progression));
                cache.truths.push_back(cache.formulas.back().slot_truths(config.progression));
            }
            cache.truncate(std::min(cache.reusable(trace), n - 1));
            for (std::size_t i = cache.events.size(); i + 1 < n; ++i) {
                cache.events.push_back(trace.events[i]);
                cache.formulas.push_back(
                    cache.formulas.back().step(&trace.events[i], trace.states[i + 1], false, config.progression));
                cache.bounds.push_back(cache.formulas.back().bounds(config.progression));
                cache.truths.push_back(cache.formulas.back().slot_truths(config.progression));
            }
            pf = cache.formulas.back().step(&trace.events[n - 1], trace.states[n], true, config.progression);
            if (run_raw) {
                pr = pr.step(nullptr, trace.states[0], false, raw);
                for (std::size_t i = 0; i < n; ++i) pr = pr.step(&trace.events[i], trace.states[i + 1], i + 1 == n, raw);
            }
        }
        static const std::vector<Bounds> no_bounds;
        static const std::vector<std::vector<Truth>> no_truths;
        const auto& chain = n == 0 ? no_bounds : cache.bounds;
        const auto& truths = n == 0 ? no_truths : cache.truths;
        const Weight progressed = pf.terminal_weight();
        record(equivalence, progressed == direct,
               [&] { return where() + ": progressed " + progressed.str() + " vs direct " + direct.str(); });
        if (run_raw) {
            record(unsimplified, pr.terminal_weight() == progressed, [&] {
                return where() + ": unsimplified " + pr.terminal_weight().str() + " vs " + progressed.str();
            });
        }

        bool ok = true;
        std::string why;
        for (std::size_t k = 0; k < chain.size() && ok; ++k) {
            const Bounds& b = chain[k];
            if (!(b.opt <= direct && direct <= b.pess)) {
                ok = false;
                why = "prefix " + std::to_string(k) + " bounds [" + b.opt.str() + "," + b.pess.str() +
                      "] exclude " + direct.str();
            } else if (k > 0 && (chain[k].opt < chain[k - 1].opt || chain[k - 1].pess < chain[k].pess)) {
                ok = false;
                why = "prefix " + std::to_string(k) + " bounds not monotone";
            } else if (b.opt == b.pess && b.opt != direct) {
                ok = false;
                why = "prefix " + std::to_string(k) + " collapsed to " + b.opt.str();
            }
        }
        record(prefixes, ok, [&] { return where() + ": " + why; });

        const auto final_truths = pf.slot_truths();
        std::size_t s = 0;
        ok = true;
        why.clear();
        for (const Bdf& slot : direct_slots) {
            const bool actual = satisfies(trace, 0, slot, constants);
            if (final_truths[s].opt != actual) {
                ok = false;
                why = "slot " + std::to_string(s) + " terminal residual disagrees with " + to_string(slot);
            }
            for (std::size_t k = 0; k < truths.size() && ok; ++k) {
                const Truth& t = truths[k][s];
                if ((t.pess && !actual) || (!t.opt && actual)) {
                    ok = false;
                    why = "slot " + std::to_string(s) + " prefix " + std::to_string(k) + " bound contradicts the outcome";
                }
                if (k > 0) {
                    const Truth& p = truths[k - 1][s];
                    if ((p.pess && !t.pess) || (!p.opt && t.opt)) {
                        ok = false;
                        why = "slot " + std::to_string(s) + " prefix " + std::to_string(k) + " bound reverted";
                    }
                }
            }
            ++s;
        }
        record(slots, ok, [&] { return where() + ": " + why; });
    };

    report.oracle = enumerate_all(problem, caps, visit);

    CheckItem optimal{"best-first weight equals the oracle minimum", true, 0, {}};
    CheckItem sound{"returned plan is a valid solution with the reported weight", true, 0, {}};
    CheckItem admissible{"no popped node had optW above the returned weight", true, 0, {}};
    SolveResult sr = solve(problem, config);
    report.best_first = sr;
    if (report.oracle.plan_count == 0) {
        record(optimal, sr.status == SolveResult::Status::NoPlan,
               [] { return "best-first found a plan the oracle did not"; });
    } else if (sr.status != SolveResult::Status::Ok) {
        record(optimal, false, [] { return "best-first reported no plan"; });
    } else {
        record(optimal, sr.weight == report.oracle.best_weight,
               [&] { return "best-first " + sr.weight.str() + " vs oracle " + report.oracle.best_weight.str(); });
        bool valid = is_valid_trace(sr.trace) && sr.trace.states.back().executing.empty() &&
                     weight_gpf(sr.trace, problem.preference, constants) == sr.weight &&
                     project_plan(sr.trace.events).ops == sr.plan.ops;
        record(sound, valid, [&] { return "returned plan " + plan_text(sr.trace); });
        record(admissible, sr.stats.max_popped_opt <= sr.weight,
               [&] { return "popped optW " + sr.stats.max_popped_opt.str() + " above " + sr.weight.str(); });
    }
    report.items = {optimal, equivalence, unsimplified, prefixes, slots, sound, admissible};
    return report;
}

}  // namespace htnpref
