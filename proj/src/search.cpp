#include "htnpref/search.hpp"

#include "htnpref/semantics.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <set>

namespace htnpref {

std::vector<Event> events_of(const SearchNode& node) {
    std::vector<Event> out(node.event_count);
    std::size_t i = node.event_count;
    for (const EventChain* c = node.events.get(); c; c = c->prev.get()) out[--i] = c->event;
    return out;
}

namespace {

bool static_possible(const UnitPattern& x, const Problem& problem, const std::set<std::string>& fluents) {
    const std::vector<Term>* params = nullptr;
    const std::vector<Literal>* pre = nullptr;
    if (x.kind == UnitKind::Operator) {
        const Operator* op = problem.domain->find_operator(x.symbol);
        if (!op) return true;
        params = &op->params;
        pre = &op->pre;
    } else if (x.kind == UnitKind::Method) {
        const Method* m = problem.domain->find_method(x.symbol);
        if (!m) return true;
        params = &m->params;
        pre = &m->pre;
    } else {
        return true;
    }
    Substitution sigma;
    for (std::size_t i = 0; i < x.args.size() && i < params->size(); ++i) {
        if (!x.args[i].is_variable()) sigma[(*params)[i].name] = x.args[i].name;
    }
    for (const auto& l : *pre) {
        if (fluents.count(l.atom.predicate)) continue;
        Literal g = substitute(l, sigma);
        if (g.atom.is_ground() && !problem.init.holds(g)) return false;
    }
    return true;
}

Bdf prune(const Bdf& f, const Problem& problem, const std::set<std::string>& fluents) {
    auto possible = [&](const UnitPattern& x) { return static_possible(x, problem, fluents); };
    switch (f->kind) {
        case BdfKind::Occ:
        case BdfKind::Apply:
        case BdfKind::HoldBefore:
        case BdfKind::HoldAfter:
            if (!possible(f->first)) return bdf::falsity();
            return f;
        case BdfKind::Before:
        case BdfKind::HoldBetween:
            if (!possible(f->first) || !possible(f->second)) return bdf::falsity();
            return f;
        default: break;
    }
    if (f->children.empty()) return f;
    BdfNode n = *f;
    for (auto& c : n.children) c = prune(c, problem, fluents);
    return std::make_shared<const BdfNode>(std::move(n));
}

Gpf prune(const Gpf& g, const Problem& problem, const std::set<std::string>& fluents) {
    GpfNode n = *g;
    for (auto& alt : n.apf.alternatives) alt.formula = fold_constants(prune(alt.formula, problem, fluents));
    if (n.condition) n.condition = fold_constants(prune(n.condition, problem, fluents));
    for (auto& c : n.children) c = prune(c, problem, fluents);
    return std::make_shared<const GpfNode>(std::move(n));
}

}  // namespace

Gpf prune_static(const Gpf& ground_preference, const Problem& problem) {
    std::set<std::string> fluents;
    for (const auto& op : problem.domain->operators) {
        for (const auto& a : op.add) fluents.insert(a.predicate);
        for (const auto& a : op.del) fluents.insert(a.predicate);
    }
    return prune(ground_preference, problem, fluents);
}

ExpandContext make_context(const Problem& problem, const ProgressionOptions& options, bool track_preferences,
                           int max_depth) {
    ExpandContext ctx;
    ctx.problem = &problem;
    ctx.preference = prune_static(problem.ground_preference(), problem);
    ctx.progression = options;
    ctx.track_preferences = track_preferences;
    ctx.max_depth = max_depth;
    return ctx;
}

namespace {

AgendaItem pending(Task task, std::vector<Literal> guards, int depth) {
    AgendaItem item;
    item.kind = AgendaItem::Kind::Pending;
    item.task = std::move(task);
    item.guards = std::move(guards);
    item.depth = depth;
    return item;
}

AgendaItem end_marker(UnitRef unit) {
    AgendaItem item;
    item.kind = AgendaItem::Kind::EndMarker;
    item.unit = std::move(unit);
    return item;
}

/// Pushes `items` so that items[0] ends up at the front.
void push_network(Agenda& agenda, std::vector<AgendaItem> items, bool unordered) {
    if (items.empty()) return;
    if (unordered && items.size() > 1) {
        AgendaItem group;
        group.kind = AgendaItem::Kind::Group;
        group.members = std::move(items);
        agenda.push_back(std::move(group));
        return;
    }
    for (auto it = items.rbegin(); it != items.rend(); ++it) agenda.push_back(std::move(*it));
}

/// A node under construction. Progression lags one event behind so that the
/// final step can be flagged terminal once the agenda is known to be empty.
struct Partial {
    Agenda agenda;
    State state;
    std::shared_ptr<const EventChain> events;
    std::size_t event_count = 0;
    std::size_t plan_length = 0;
    InstanceId next_id = 0;
    std::optional<ProgressedFormula> prev;
    std::optional<Event> last;
    bool applied = false;
};

class Expander {
public:
    Expander(const ExpandContext& ctx, std::vector<SearchNode>& out) : ctx_(ctx), out_(out) {}

    void drill(Partial p) const {
        for (;;) {
            if (p.agenda.empty()) return finish(std::move(p));
            AgendaItem& front = p.agenda.back();
            if (front.kind == AgendaItem::Kind::EndMarker) {
                UnitRef unit = front.unit;
                p.agenda.pop_back();
                emit(p, Event::end(std::move(unit)));
                continue;
            }
            if (p.applied) return finish(std::move(p));
            if (front.kind == AgendaItem::Kind::Group) {
                AgendaItem group = std::move(front);
                p.agenda.pop_back();
                for (std::size_t i = 0; i < group.members.size(); ++i) {
                    Partial q = p;
                    std::vector<AgendaItem> rest;
                    for (std::size_t j = 0; j < group.members.size(); ++j) {
                        if (j != i) rest.push_back(group.members[j]);
                    }
                    push_network(q.agenda, std::move(rest), true);
                    q.agenda.push_back(group.members[i]);
                    drill(std::move(q));
                }
                return;
            }
            AgendaItem item = std::move(front);
            p.agenda.pop_back();
            for (const auto& g : item.guards) {
                if (!p.state.holds(g)) return;
            }
            if (item.task.primitive) {
                if (!apply_primitive(p, item.task)) return;
                continue;
            }
            return decompose(std::move(p), item);
        }
    }

    void emit(Partial& p, Event e) const {
        if (ctx_.track_preferences && p.last) p.prev = p.prev->step(&*p.last, p.state, false, ctx_.progression);
        p.state = apply_event(p.state, e);
        p.events = std::make_shared<const EventChain>(EventChain{e, std::move(p.events)});
        ++p.event_count;
        if (ctx_.track_preferences) p.last = std::move(e);
    }

private:
    bool apply_primitive(Partial& p, const Task& task) const {
        const Operator* op = ctx_.problem->domain->find_operator(task.symbol);
        std::vector<std::string> args;
        for (const auto& a : task.args) args.push_back(a.name);
        auto ground = op ? ground_operator(*op, args) : std::nullopt;
        if (!ground) return false;
        for (const auto& l : ground->pre) {
            if (!p.state.holds(l)) return false;
        }
        InstanceId id = p.next_id++;
        emit(p, Event::apply(std::make_shared<const GroundOperator>(std::move(*ground)), id));
        ++p.plan_length;
        p.applied = true;
        return true;
    }

    void decompose(Partial p, const AgendaItem& item) const {
        if (item.depth >= ctx_.max_depth) {
            throw ResourceLimit("decomposition depth cap " + std::to_string(ctx_.max_depth) + " exceeded at " +
                                    item.task.str(),
                                0, 0, 0);
        }
        for (const auto& [method, head_sigma] : relevant_methods(item.task, *ctx_.problem->domain)) {
            for (const auto& sigma : satisfying_bindings(method->pre, p.state, head_sigma)) {
                Partial q = p;
                std::vector<std::string> task_args;
                for (const auto& a : item.task.args) task_args.push_back(a.name);
                auto task_unit = std::make_shared<const UnitInstance>(
                    UnitInstance{UnitKind::Task, item.task.symbol, std::move(task_args), q.next_id++});
                std::vector<std::string> method_args;
                for (const auto& t : method->params) method_args.push_back(substitute(t, sigma).name);
                auto method_unit = std::make_shared<const UnitInstance>(
                    UnitInstance{UnitKind::Method, method->name, std::move(method_args), q.next_id++});
                emit(q, Event::start(task_unit));
                emit(q, Event::start(method_unit));
                q.agenda.push_back(end_marker(task_unit));
                q.agenda.push_back(end_marker(method_unit));
                std::vector<AgendaItem> subtasks;
                for (std::size_t i = 0; i < method->subtasks.size(); ++i) {
                    const Task& st = method->subtasks[i];
                    Task ground{st.symbol, {}, st.primitive};
                    for (const auto& a : st.args) ground.args.push_back(substitute(a, sigma));
                    std::vector<Literal> guards;
                    for (const auto& b : method->before) {
                        if (b.subtask == i) guards.push_back(substitute(b.literal, sigma));
                    }
                    subtasks.push_back(pending(std::move(ground), std::move(guards), item.depth + 1));
                }
                push_network(q.agenda, std::move(subtasks), method->unordered);
                drill(std::move(q));
            }
        }
    }

    void finish(Partial p) const {
        SearchNode n;
        const bool terminal = p.agenda.empty();
        if (ctx_.track_preferences) {
            ProgressedFormula pf = p.prev->step(p.last ? &*p.last : nullptr, p.state, terminal, ctx_.progression);
            if (terminal) {
                n.weight = pf.terminal_weight();
                n.bounds = {*n.weight, *n.weight};
            } else {
                n.bounds = pf.bounds(ctx_.progression);
                n.settled = std::move(pf);
            }
        } else if (terminal) {
            n.weight = Weight::best();
            n.bounds = {Weight::best(), Weight::best()};
        }
        n.agenda = std::move(p.agenda);
        n.state = std::move(p.state);
        n.events = std::move(p.events);
        n.event_count = p.event_count;
        n.plan_length = p.plan_length;
        n.next_id = p.next_id;
        out_.push_back(std::move(n));
    }

    const ExpandContext& ctx_;
    std::vector<SearchNode>& out_;
};

Partial start_from(const SearchNode& node) {
    Partial p;
    p.agenda = node.agenda;
    p.state = node.state;
    p.events = node.events;
    p.event_count = node.event_count;
    p.plan_length = node.plan_length;
    p.next_id = node.next_id;
    p.prev = node.settled;
    return p;
}

}  // namespace

SearchNode initial_node(const ExpandContext& ctx) {
    SearchNode root;
    root.state = ctx.problem->init;
    std::vector<AgendaItem> roots;
    for (const auto& t : ctx.problem->network.tasks) roots.push_back(pending(t, {}, 0));
    push_network(root.agenda, std::move(roots), ctx.problem->network.unordered);
    const bool terminal = root.agenda.empty();
    if (ctx.track_preferences) {
        ProgressedFormula pf =
            ProgressedFormula(ctx.preference).step(nullptr, root.state, terminal, ctx.progression);
        if (terminal) {
            root.weight = pf.terminal_weight();
            root.bounds = {*root.weight, *root.weight};
        } else {
            root.bounds = pf.bounds(ctx.progression);
            root.settled = std::move(pf);
        }
    } else if (terminal) {
        root.weight = Weight::best();
        root.bounds = {Weight::best(), Weight::best()};
    }
    return root;
}

std::vector<SearchNode> expand(const SearchNode& node, const ExpandContext& ctx) {
    std::vector<SearchNode> out;
    if (node.agenda.empty()) return out;
    Expander(ctx, out).drill(start_from(node));
    return out;
}

namespace {

struct Entry {
    std::shared_ptr<SearchNode> node;
    std::uint64_t seq;
};

struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
        const SearchNode& x = *a.node;
        const SearchNode& y = *b.node;
        if (x.bounds.opt != y.bounds.opt) return y.bounds.opt < x.bounds.opt;
        if (x.bounds.pess != y.bounds.pess) return y.bounds.pess < x.bounds.pess;
        if (x.plan_length != y.plan_length) return y.plan_length < x.plan_length;
        return b.seq < a.seq;
    }
};

SolveResult result_from(const SearchNode& node, const Problem& problem, SearchStats stats) {
    SolveResult r;
    r.status = SolveResult::Status::Ok;
    r.trace = replay(problem.init, events_of(node));
    r.plan = project_plan(r.trace.events);
    r.weight = *node.weight;
    stats.plan_length = r.plan.size();
    r.stats = stats;
    return r;
}

}  // namespace

SolveResult solve(const Problem& problem, const SearchConfig& config) {
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

    ExpandContext ctx = make_context(problem, config.progression, true, config.max_depth);
    SearchStats stats;
    std::priority_queue<Entry, std::vector<Entry>, Later> frontier;
    std::uint64_t seq = 0;
    auto push = [&](SearchNode&& n) {
        frontier.push(Entry{std::make_shared<SearchNode>(std::move(n)), seq++});
        ++stats.considered;
    };
    auto check_limits = [&] {
        if (config.max_expansions && stats.expanded >= config.max_expansions) {
            throw ResourceLimit("expansion cap reached", stats.expanded, stats.considered, elapsed());
        }
        if (config.timeout_seconds > 0 && elapsed() > config.timeout_seconds) {
            throw ResourceLimit("timeout", stats.expanded, stats.considered, elapsed());
        }
    };
    auto expand_into_frontier = [&](const SearchNode& n) {
        check_limits();
        ++stats.expanded;
        std::vector<SearchNode> children;
        try {
            children = expand(n, ctx);
        } catch (const ResourceLimit& e) {
            throw ResourceLimit(e.what(), stats.expanded, stats.considered, elapsed());
        }
        for (auto& c : children) push(std::move(c));
    };

    push(initial_node(ctx));
    while (!frontier.empty()) {
        Entry head = frontier.top();
        frontier.pop();
        const SearchNode& node = *head.node;
        stats.max_popped_opt = std::max(stats.max_popped_opt, node.bounds.opt);
        if (!termination_check(node)) {
            expand_into_frontier(node);
            continue;
        }
        if (!config.tiebreak_lex) {
            stats.seconds = elapsed();
            return result_from(node, problem, stats);
        }
        // Every remaining node that could still reach weight w is settled,
        // then the candidate with the smallest constituent vector wins.
        const Weight w = *node.weight;
        const auto constants = problem.constants();
        auto vector_of = [&](const SearchNode& n) {
            return constituent_weights(replay(problem.init, events_of(n)), ctx.preference, constants);
        };
        std::shared_ptr<SearchNode> best = head.node;
        auto best_vec = vector_of(*best);
        while (!frontier.empty() && frontier.top().node->bounds.opt <= w) {
            Entry next = frontier.top();
            frontier.pop();
            if (!termination_check(*next.node)) {
                expand_into_frontier(*next.node);
                continue;
            }
            if (*next.node->weight != w) continue;
            auto vec = vector_of(*next.node);
            if (vec < best_vec) {
                best = next.node;
                best_vec = std::move(vec);
            }
        }
        stats.seconds = elapsed();
        return result_from(*best, problem, stats);
    }
    stats.seconds = elapsed();
    SolveResult r;
    r.stats = stats;
    return r;
}

}  // namespace htnpref
