#include "htnpref/model.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace htnpref;

namespace {

Atom atom(std::string p, std::vector<std::string> args = {}) {
    Atom a{std::move(p), {}};
    for (auto& s : args) a.args.push_back(Term{std::move(s)});
    return a;
}

UnitRef unit(UnitKind k, std::string symbol, InstanceId id, std::vector<std::string> args = {}) {
    return std::make_shared<const UnitInstance>(UnitInstance{k, std::move(symbol), std::move(args), id});
}

Operator drive() {
    Operator op;
    op.name = "drive";
    op.params = {Term{"?from"}, Term{"?to"}};
    op.pre = {Literal{atom("at", {"?from"}), true}};
    op.del = {atom("at", {"?from"})};
    op.add = {atom("at", {"?to"})};
    return op;
}

}  // namespace

TEST_CASE("terms and substitution") {
    CHECK(Term{"?x"}.is_variable());
    CHECK_FALSE(Term{"c1"}.is_variable());
    CHECK_FALSE(atom("at", {"?x"}).is_ground());
    CHECK(substitute(atom("at", {"?x"}), {{"?x", "c1"}}) == atom("at", {"c1"}));
    CHECK(substitute(atom("at", {"?y"}), {{"?x", "c1"}}) == atom("at", {"?y"}));
}

TEST_CASE("apply operator: STRIPS delete then add") {
    State s;
    s.facts = {atom("at", {"c1"})};
    auto g = ground_operator(drive(), {"c1", "c2"});
    REQUIRE(g);
    State t = apply_operator(s, *g, 7);
    CHECK(t.facts == std::set<Atom>{atom("at", {"c2"})});
    CHECK(t.terminated.count(7) == 1);
    CHECK_FALSE(ground_operator(drive(), {"c1"}));
}

TEST_CASE("apply operator: empty effects leave facts unchanged") {
    Operator walk;
    walk.name = "walk";
    State s;
    s.facts = {atom("p")};
    auto g = ground_operator(walk, {});
    CHECK(apply_operator(s, *g, 1).facts == s.facts);
}

TEST_CASE("apply operator: failed precondition") {
    State s;
    auto g = ground_operator(drive(), {"c1", "c2"});
    CHECK_THROWS_AS(apply_operator(s, *g, 1), PreconditionViolation);
    try {
        apply_operator(s, *g, 1);
    } catch (const PreconditionViolation& e) {
        CHECK(e.literal.atom == atom("at", {"c1"}));
    }
}

TEST_CASE("apply operator: negative precondition under closed world") {
    Operator op;
    op.name = "o";
    op.pre = {Literal{atom("busy"), false}};
    auto g = ground_operator(op, {});
    CHECK_NOTHROW(apply_operator(State{}, *g, 1));
    State busy;
    busy.facts = {atom("busy")};
    CHECK_THROWS_AS(apply_operator(busy, *g, 1), PreconditionViolation);
}

TEST_CASE("travel: book-train in the initial state adds hasTicket") {
    Problem p = testing::load_fixture("travel", 1);
    const Operator* op = p.domain->find_operator("book-train");
    REQUIRE(op);
    auto g = ground_operator(*op, {"t1"});
    State s = apply_operator(p.init, *g, 1);
    CHECK(s.holds(atom("hasTicket", {"t1"})));
    CHECK_FALSE(s.holds(atom("avail", {"t1"})));
}

TEST_CASE("apply event: start and end bookkeeping") {
    auto m = unit(UnitKind::Method, "m", 1);
    State s1 = apply_event(State{}, Event::start(m));
    CHECK(s1.executing.count(1) == 1);
    CHECK(s1.terminated.empty());
    State s2 = apply_event(s1, Event::end(m));
    CHECK(s2.executing.empty());
    CHECK(s2.terminated.count(1) == 1);
    CHECK_THROWS_AS(apply_event(s2, Event::start(m)), IllegalEvent);
    CHECK_THROWS_AS(apply_event(State{}, Event::end(m)), IllegalEvent);
}

TEST_CASE("apply event: operators never execute, they terminate at once") {
    Operator walk;
    walk.name = "walk";
    auto g = std::make_shared<const GroundOperator>(*ground_operator(walk, {}));
    State s = apply_event(State{}, Event::apply(g, 3));
    CHECK(s.executing.empty());
    CHECK(s.terminated.count(3) == 1);
}

TEST_CASE("relevant methods in declaration order") {
    auto d = testing::load_domain("travel");
    auto rel = relevant_methods(Task{"arrange-trans", {}, false}, *d);
    REQUIRE(rel.size() == 3);
    CHECK(rel[0].first->name == "by-flight-trans");
    CHECK(rel[1].first->name == "by-train-trans");
    CHECK(rel[2].first->name == "by-car-trans");
    CHECK_THROWS_AS(relevant_methods(Task{"walk", {}, true}, *d), NotNonprimitive);
}

TEST_CASE("relevant methods: conflicting constant gives none") {
    Domain d;
    Method m;
    m.name = "only-c1";
    m.head = Task{"go", {Term{"c1"}}, false};
    d.methods.push_back(m);
    CHECK(relevant_methods(Task{"go", {Term{"c2"}}, false}, d).empty());
    CHECK(relevant_methods(Task{"go", {Term{"c1"}}, false}, d).size() == 1);
}

TEST_CASE("satisfying bindings enumerate positive matches") {
    State s;
    s.facts = {atom("card", {"visa"}), atom("card", {"amex"}), atom("blocked", {"amex"})};
    std::vector<Literal> pre{Literal{atom("card", {"?k"}), true}, Literal{atom("blocked", {"?k"}), false}};
    auto b = satisfying_bindings(pre, s, {});
    REQUIRE(b.size() == 1);
    CHECK(b[0].at("?k") == "visa");
}

TEST_CASE("replay, validation and projection") {
    Operator walk;
    walk.name = "walk";
    auto g = std::make_shared<const GroundOperator>(*ground_operator(walk, {}));
    auto t = unit(UnitKind::Task, "move", 1);
    auto m = unit(UnitKind::Method, "by-foot", 2);
    std::vector<Event> events{Event::start(t), Event::start(m), Event::apply(g, 3), Event::end(m), Event::end(t)};
    Trace trace = replay(State{}, events);
    CHECK(trace.states.size() == events.size() + 1);
    CHECK(is_valid_trace(trace));
    CHECK(trace.states[2].executing.size() == 2);
    CHECK(trace.states.back().terminated.size() == 3);
    Plan plan = project_plan(events);
    REQUIRE(plan.size() == 1);
    CHECK(plan.ops[0].name == "walk");

    Trace broken = trace;
    broken.states.pop_back();
    CHECK_FALSE(is_valid_trace(broken));
    CHECK_THROWS_AS(replay(State{}, {Event::end(t)}), IllegalEvent);
}

TEST_CASE("terminated grows monotonically along a trace") {
    Problem p = testing::load_fixture("travel", 1);
    Operator walk;
    walk.name = "walk";
    auto g = std::make_shared<const GroundOperator>(*ground_operator(walk, {}));
    auto t = unit(UnitKind::Task, "arrange-local-trans", 1);
    auto m = unit(UnitKind::Method, "by-foot", 2);
    Trace trace = replay(p.init, {Event::start(t), Event::start(m), Event::apply(g, 3), Event::end(m), Event::end(t)});
    for (std::size_t i = 1; i < trace.states.size(); ++i) {
        for (const auto& [id, u] : trace.states[i - 1].terminated) CHECK(trace.states[i].terminated.count(id));
        for (const auto& [id, u] : trace.states[i].executing) CHECK_FALSE(trace.states[i].terminated.count(id));
    }
}
