#include "htnpref/model.hpp"

#include <algorithm>
#include <sstream>

namespace htnpref {

namespace {

std::string join_call(const std::string& head, const std::vector<std::string>& args) {
    std::string out = "(" + head;
    for (const auto& a : args) out += " " + a;
    return out + ")";
}

std::vector<std::string> names(const std::vector<Term>& terms) {
    std::vector<std::string> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(t.name);
    return out;
}

bool unify_term(const Term& pattern, const std::string& value, Substitution& sigma) {
    if (!pattern.is_variable()) return pattern.name == value;
    auto [it, inserted] = sigma.emplace(pattern.name, value);
    return inserted || it->second == value;
}

bool unify_atom(const Atom& pattern, const Atom& fact, Substitution& sigma) {
    if (pattern.predicate != fact.predicate || pattern.args.size() != fact.args.size()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        if (!unify_term(pattern.args[i], fact.args[i].name, sigma)) return false;
    }
    return true;
}

void collect_constants(const std::vector<Term>& terms, std::set<std::string>& out) {
    for (const auto& t : terms) {
        if (!t.is_variable()) out.insert(t.name);
    }
}

void bind_positive(const std::vector<const Literal*>& positives, std::size_t index,
                   const State& state, Substitution& sigma, std::vector<Substitution>& out) {
    if (index == positives.size()) {
        out.push_back(sigma);
        return;
    }
    const Atom atom = substitute(positives[index]->atom, sigma);
    if (atom.is_ground()) {
        if (state.holds(atom)) bind_positive(positives, index + 1, state, sigma, out);
        return;
    }
    // Facts are ordered by predicate first, so scan only the matching range.
    auto it = state.facts.lower_bound(Atom{atom.predicate, {}});
    for (; it != state.facts.end() && it->predicate == atom.predicate; ++it) {
        Substitution extended = sigma;
        if (unify_atom(atom, *it, extended)) {
            bind_positive(positives, index + 1, state, extended, out);
        }
    }
}

}  // namespace

bool Atom::is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::string Atom::str() const { return join_call(predicate, names(args)); }

std::string Literal::str() const { return positive ? atom.str() : "(not " + atom.str() + ")"; }

Term substitute(const Term& term, const Substitution& sigma) {
    if (!term.is_variable()) return term;
    auto it = sigma.find(term.name);
    return it == sigma.end() ? term : Term{it->second};
}

Atom substitute(const Atom& atom, const Substitution& sigma) {
    Atom out{atom.predicate, {}};
    out.args.reserve(atom.args.size());
    for (const auto& t : atom.args) out.args.push_back(substitute(t, sigma));
    return out;
}

Literal substitute(const Literal& lit, const Substitution& sigma) {
    return Literal{substitute(lit.atom, sigma), lit.positive};
}

std::string UnitInstance::str() const {
    std::string head = symbol;
    if (kind == UnitKind::Operator) head = "!" + head;
    return join_call(head, args) + "#" + std::to_string(id);
}

std::string GroundOperator::str() const { return join_call("!" + name, args); }

bool operator==(const State& a, const State& b) {
    auto same_units = [](const std::map<InstanceId, UnitRef>& x,
                         const std::map<InstanceId, UnitRef>& y) {
        return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const auto& p, const auto& q) {
            return p.first == q.first && *p.second == *q.second;
        });
    };
    return a.facts == b.facts && same_units(a.executing, b.executing) &&
           same_units(a.terminated, b.terminated);
}

bool Task::is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::string Task::str() const { return join_call(primitive ? "!" + symbol : symbol, names(args)); }

const Operator* Domain::find_operator(const std::string& op_name) const {
    for (const auto& op : operators) {
        if (op.name == op_name) return &op;
    }
    return nullptr;
}

const Method* Domain::find_method(const std::string& branch) const {
    for (const auto& m : methods) {
        if (m.name == branch) return &m;
    }
    return nullptr;
}

bool Domain::is_task_symbol(const std::string& symbol) const {
    return std::any_of(methods.begin(), methods.end(),
                       [&](const Method& m) { return m.head.symbol == symbol; });
}

std::map<std::string, std::size_t> Domain::predicates() const {
    std::map<std::string, std::size_t> out = declared_predicates;
    auto note = [&](const Atom& a) { out.emplace(a.predicate, a.args.size()); };
    for (const auto& op : operators) {
        for (const auto& l : op.pre) note(l.atom);
        for (const auto& a : op.add) note(a);
        for (const auto& a : op.del) note(a);
    }
    for (const auto& m : methods) {
        for (const auto& l : m.pre) note(l.atom);
        for (const auto& b : m.before) note(b.literal.atom);
    }
    return out;
}

std::vector<std::string> Domain::constants() const {
    std::set<std::string> out;
    for (const auto& op : operators) {
        for (const auto& l : op.pre) collect_constants(l.atom.args, out);
        for (const auto& a : op.add) collect_constants(a.args, out);
        for (const auto& a : op.del) collect_constants(a.args, out);
    }
    for (const auto& m : methods) {
        collect_constants(m.head.args, out);
        for (const auto& l : m.pre) collect_constants(l.atom.args, out);
        for (const auto& t : m.subtasks) collect_constants(t.args, out);
        for (const auto& b : m.before) collect_constants(b.literal.atom.args, out);
    }
    return {out.begin(), out.end()};
}

Event Event::apply(std::shared_ptr<const GroundOperator> op, InstanceId id) {
    auto unit = std::make_shared<UnitInstance>(UnitInstance{UnitKind::Operator, op->name, op->args, id});
    return Event{EventKind::Operator, std::move(unit), std::move(op)};
}

std::string Event::str() const {
    switch (kind) {
        case EventKind::Operator: return unit->str();
        case EventKind::Start: return "start" + unit->str();
        case EventKind::End: return "end" + unit->str();
    }
    return {};
}

std::optional<GroundOperator> ground_operator(const Operator& op, const std::vector<std::string>& args) {
    if (args.size() != op.params.size()) return std::nullopt;
    Substitution sigma;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!unify_term(op.params[i], args[i], sigma)) return std::nullopt;
    }
    GroundOperator g{op.name, args, {}, {}, {}};
    for (const auto& l : op.pre) g.pre.push_back(substitute(l, sigma));
    for (const auto& a : op.add) g.add.push_back(substitute(a, sigma));
    for (const auto& a : op.del) g.del.push_back(substitute(a, sigma));
    return g;
}

State apply_operator(const State& state, const GroundOperator& op, InstanceId event_id) {
    for (const auto& lit : op.pre) {
        if (!state.holds(lit)) throw PreconditionViolation(lit, op.str());
    }
    State next = state;
    for (const auto& a : op.del) next.facts.erase(a);
    for (const auto& a : op.add) next.facts.insert(a);
    next.terminated[event_id] =
        std::make_shared<UnitInstance>(UnitInstance{UnitKind::Operator, op.name, op.args, event_id});
    return next;
}

State apply_event(const State& state, const Event& event) {
    const InstanceId id = event.unit->id;
    switch (event.kind) {
        case EventKind::Operator: {
            if (state.terminated.count(id) || state.executing.count(id)) {
                throw IllegalEvent("instance id reused: " + event.str());
            }
            State next = apply_operator(state, *event.op, id);
            next.terminated[id] = event.unit;
            return next;
        }
        case EventKind::Start: {
            if (state.executing.count(id) || state.terminated.count(id)) {
                throw IllegalEvent("start of an instance already started: " + event.str());
            }
            State next = state;
            next.executing.emplace(id, event.unit);
            return next;
        }
        case EventKind::End: {
            auto it = state.executing.find(id);
            if (it == state.executing.end() || !(*it->second == *event.unit)) {
                throw IllegalEvent("end of an instance that is not executing: " + event.str());
            }
            State next = state;
            next.executing.erase(id);
            next.terminated.emplace(id, event.unit);
            return next;
        }
    }
    throw IllegalEvent("unknown event kind");
}

std::vector<std::pair<const Method*, Substitution>> relevant_methods(const Task& task,
                                                                    const Domain& domain) {
    if (task.primitive || domain.find_operator(task.symbol) != nullptr) {
        throw NotNonprimitive("task " + task.str() + " is primitive");
    }
    std::vector<std::pair<const Method*, Substitution>> out;
    for (const auto& m : domain.methods) {
        if (m.head.symbol != task.symbol || m.head.args.size() != task.args.size()) continue;
        Substitution sigma;
        bool ok = true;
        for (std::size_t i = 0; i < task.args.size() && ok; ++i) {
            ok = unify_term(m.head.args[i], task.args[i].name, sigma);
        }
        if (ok) out.emplace_back(&m, std::move(sigma));
    }
    return out;
}

std::vector<Substitution> satisfying_bindings(const std::vector<Literal>& pre, const State& state,
                                              const Substitution& sigma) {
    std::vector<const Literal*> positives;
    for (const auto& l : pre) {
        if (l.positive) positives.push_back(&l);
    }
    std::vector<Substitution> candidates;
    Substitution start = sigma;
    bind_positive(positives, 0, state, start, candidates);

    std::vector<Substitution> out;
    for (auto& s : candidates) {
        bool ok = true;
        for (const auto& l : pre) {
            if (l.positive) continue;
            const Atom atom = substitute(l.atom, s);
            if (!atom.is_ground()) {
                throw std::invalid_argument("negative precondition with unbound variable: " + l.str());
            }
            if (state.holds(atom)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(std::move(s));
    }
    return out;
}

Trace replay(const State& initial, const std::vector<Event>& events) {
    Trace trace;
    trace.events = events;
    trace.states.reserve(events.size() + 1);
    trace.states.push_back(initial);
    for (const auto& e : events) trace.states.push_back(apply_event(trace.states.back(), e));
    return trace;
}

bool is_valid_trace(const Trace& trace) {
    if (trace.states.size() != trace.events.size() + 1) return false;
    std::set<InstanceId> seen;
    std::set<InstanceId> open;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const Event& e = trace.events[i];
        const InstanceId id = e.unit->id;
        if (e.kind == EventKind::End) {
            if (!open.erase(id)) return false;
        } else {
            if (!seen.insert(id).second) return false;
            if (e.kind == EventKind::Start) open.insert(id);
        }
        try {
            if (!(apply_event(trace.states[i], e) == trace.states[i + 1])) return false;
        } catch (const std::exception&) {
            return false;
        }
    }
    return true;
}

Plan project_plan(const std::vector<Event>& events) {
    Plan plan;
    for (const auto& e : events) {
        if (e.kind == EventKind::Operator) plan.ops.push_back(*e.op);
    }
    return plan;
}

}  // namespace htnpref
