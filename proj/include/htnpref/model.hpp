#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace htnpref {

/// A constant ("avis") or a variable ("?c").
struct Term {
    std::string name;

    bool is_variable() const { return !name.empty() && name.front() == '?'; }

    friend auto operator<=>(const Term&, const Term&) = default;
    friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    bool is_ground() const;
    std::string str() const;

    friend auto operator<=>(const Atom&, const Atom&) = default;
    friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
    Atom atom;
    bool positive = true;

    std::string str() const;

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// Variable name -> constant.
using Substitution = std::map<std::string, std::string>;

Term substitute(const Term& term, const Substitution& sigma);
Atom substitute(const Atom& atom, const Substitution& sigma);
Literal substitute(const Literal& lit, const Substitution& sigma);

using InstanceId = std::uint32_t;

enum class UnitKind { Operator, Task, Method };

/// One occurrence of an operator, a nonprimitive task or a method application
/// inside a trace. Method args are the bindings of the method parameters.
struct UnitInstance {
    UnitKind kind = UnitKind::Operator;
    std::string symbol;
    std::vector<std::string> args;
    InstanceId id = 0;

    std::string str() const;

    friend bool operator==(const UnitInstance&, const UnitInstance&) = default;
};

using UnitRef = std::shared_ptr<const UnitInstance>;

struct GroundOperator {
    std::string name;
    std::vector<std::string> args;
    std::vector<Literal> pre;
    std::vector<Atom> add;
    std::vector<Atom> del;

    std::string str() const;

    friend bool operator==(const GroundOperator&, const GroundOperator&) = default;
};

/// World facts plus the executing/terminated bookkeeping for unit instances.
/// Closed world: an atom not in `facts` is false.
struct State {
    std::set<Atom> facts;
    std::map<InstanceId, UnitRef> executing;
    std::map<InstanceId, UnitRef> terminated;

    bool holds(const Atom& atom) const { return facts.count(atom) != 0; }
    bool holds(const Literal& lit) const { return holds(lit.atom) == lit.positive; }

    friend bool operator==(const State& a, const State& b);
};

struct Operator {
    std::string name;
    std::vector<Term> params;
    std::vector<Literal> pre;
    std::vector<Atom> del;
    std::vector<Atom> add;

    friend bool operator==(const Operator&, const Operator&) = default;
};

struct Task {
    std::string symbol;
    std::vector<Term> args;
    bool primitive = false;

    bool is_ground() const;
    std::string str() const;

    friend bool operator==(const Task&, const Task&) = default;
};

/// A literal that must hold right before subtask `subtask` starts.
struct BeforeConstraint {
    Literal literal;
    std::size_t subtask = 0;

    friend bool operator==(const BeforeConstraint&, const BeforeConstraint&) = default;
};

struct Method {
    std::string name;  // branch name, unique within a domain
    Task head;
    /// Head variables in order, then variables first bound by positive
    /// preconditions. UnitInstance args for an application follow this order.
    std::vector<Term> params;
    std::vector<Literal> pre;
    std::vector<Task> subtasks;
    bool unordered = false;
    std::vector<BeforeConstraint> before;

    friend bool operator==(const Method&, const Method&) = default;
};

struct Domain {
    std::string name;
    std::vector<Operator> operators;
    std::vector<Method> methods;
    /// Predicates declared with (:predicates ...); name -> arity.
    std::map<std::string, std::size_t> declared_predicates;

    const Operator* find_operator(const std::string& name) const;
    const Method* find_method(const std::string& branch) const;
    bool is_task_symbol(const std::string& symbol) const;
    /// Every predicate mentioned anywhere in the domain, with its arity.
    std::map<std::string, std::size_t> predicates() const;
    std::vector<std::string> constants() const;

    friend bool operator==(const Domain&, const Domain&) = default;
};

struct TaskNetwork {
    std::vector<Task> tasks;
    bool unordered = false;

    friend bool operator==(const TaskNetwork&, const TaskNetwork&) = default;
};

enum class EventKind { Operator, Start, End };

struct Event {
    EventKind kind = EventKind::Operator;
    UnitRef unit;
    std::shared_ptr<const GroundOperator> op;  // set for operator events

    static Event start(UnitRef unit) { return Event{EventKind::Start, std::move(unit), nullptr}; }
    static Event end(UnitRef unit) { return Event{EventKind::End, std::move(unit), nullptr}; }
    static Event apply(std::shared_ptr<const GroundOperator> op, InstanceId id);

    std::string str() const;
};

/// states[i] is the state before events[i]; states.size() == events.size() + 1.
struct Trace {
    std::vector<Event> events;
    std::vector<State> states;
};

struct Plan {
    std::vector<GroundOperator> ops;

    std::size_t size() const { return ops.size(); }
};

class PreconditionViolation : public std::runtime_error {
public:
    PreconditionViolation(const Literal& lit, const std::string& op)
        : std::runtime_error("precondition " + lit.str() + " of " + op + " does not hold"),
          literal(lit) {}
    Literal literal;
};

class IllegalEvent : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotNonprimitive : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grounds `op` with `args`; nullopt on arity mismatch.
std::optional<GroundOperator> ground_operator(const Operator& op, const std::vector<std::string>& args);

State apply_operator(const State& state, const GroundOperator& op, InstanceId event_id);
State apply_event(const State& state, const Event& event);

/// Methods whose head unifies with the ground task, in declaration order.
std::vector<std::pair<const Method*, Substitution>> relevant_methods(const Task& task,
                                                                    const Domain& domain);

/// All extensions of `sigma` under which every literal in `pre` holds in
/// `state`. Positive literals bind variables by matching facts in set order;
/// negative literals must be ground by the time they are reached.
std::vector<Substitution> satisfying_bindings(const std::vector<Literal>& pre,
                                              const State& state,
                                              const Substitution& sigma);

/// Replays `events` from `initial`, throwing IllegalEvent/PreconditionViolation
/// on the first illegal step.
Trace replay(const State& initial, const std::vector<Event>& events);

/// Structural trace invariants: sizes agree, each state follows from the
/// previous one, instance ids are unique and every end has a matching start.
bool is_valid_trace(const Trace& trace);

Plan project_plan(const std::vector<Event>& events);

}  // namespace htnpref
