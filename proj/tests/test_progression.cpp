#include "htnpref/oracle.hpp"
#include "htnpref/progression.hpp"
#include "htnpref/semantics.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace htnpref;
using testing::TraceBuilder;

namespace {

const Weight kZero;
const Weight kOne = Weight::worst();

/// Steps `pf` through the first `upto` events of `trace`; the last step is
/// terminal when `upto` covers the whole trace and `finish` is set.
ProgressedFormula run(const Gpf& g, const Trace& trace, std::size_t upto, bool finish,
                      const ProgressionOptions& options = {}) {
    const std::size_t n = trace.events.size();
    ProgressedFormula pf(g);
    pf = pf.step(nullptr, trace.states[0], finish && n == 0, options);
    for (std::size_t i = 0; i < upto; ++i) {
        pf = pf.step(&trace.events[i], trace.states[i + 1], finish && i + 1 == n, options);
    }
    return pf;
}

struct Travel {
    Problem problem = testing::load_fixture("travel", 1);

    Gpf gpf(const std::string& text) const { return ground(parse_preference(text, *problem.domain), problem.constants()); }
    Bdf bdf(const std::string& text) const { return gpf(text)->apf.alternatives.at(0).formula; }
    TraceBuilder builder() const { return TraceBuilder(problem.domain); }
};

Trace book_train(const Travel& tr) { return tr.builder().op("book-train", {"t1"}).replay_from(tr.problem.init); }

}  // namespace

TEST_CASE("occ of an operator is true once its event is seen") {
    Travel tr;
    Trace t = book_train(tr);
    ProgressedFormula pf = run(tr.gpf("(occ (book-train))"), t, 0, false);
    CHECK_FALSE(constant_value(pf.slots()[0]));
    pf = pf.step(&t.events[0], t.states[1], false);
    REQUIRE(constant_value(pf.slots()[0]));
    CHECK(*constant_value(pf.slots()[0]));

    ProgressedFormula other = run(tr.gpf("(occ (book-flight))"), t, 1, false);
    REQUIRE(constant_value(other.slots()[0]));
    CHECK_FALSE(*constant_value(other.slots()[0]));
}

TEST_CASE("occ of a task waits for its termination") {
    Travel tr;
    Trace t = tr.builder().task("arrange-trans").method("by-train-trans", {"t1", "visa"}).op("book-train", {"t1"}).op("pay", {"visa"}).end(2).replay_from(tr.problem.init);
    Gpf g = tr.gpf("(occ (arrange-trans))");
    for (std::size_t k = 1; k < t.events.size(); ++k) {
        ProgressedFormula pf = run(g, t, k, false);
        CHECK_FALSE(constant_value(pf.slots()[0]));
        CHECK(pf.bounds() == Bounds{kZero, kOne});
    }
    ProgressedFormula done = run(g, t, t.events.size(), false);
    REQUIRE(constant_value(done.slots()[0]));
    CHECK(*constant_value(done.slots()[0]));

    // The plan stops with the task still open.
    Trace open = tr.builder().task("arrange-trans").replay_from(tr.problem.init);
    CHECK(run(g, open, 1, true).terminal_weight() == kOne);
}

TEST_CASE("eventually stays pending while its body is false") {
    Travel tr;
    Trace t = book_train(tr);
    Bdf f = tr.bdf("(eventually (drivable))");
    Bdf r = progress(f, &t.events[0], t.states[1], false);
    CHECK(structurally_equal(r, f));
    CHECK(bound(r) == Truth{true, false});
}

TEST_CASE("always false collapses to false") {
    Travel tr;
    Trace t = book_train(tr);
    Bdf r = progress(bdf::always(bdf::falsity()), &t.events[0], t.states[1], false);
    REQUIRE(constant_value(r));
    CHECK_FALSE(*constant_value(r));
    Bdf s = progress(bdf::always(bdf::falsity()), nullptr, t.states[0], false);
    CHECK(constant_value(s) == std::optional<bool>(false));
}

TEST_CASE("before monitor") {
    Travel tr;
    Gpf g = tr.gpf("(before (arrange-trans) (arrange-acc))");
    SUBCASE("satisfied when the second task starts after the first ends") {
        Trace t = tr.builder()
                      .task("arrange-trans").method("by-train-trans", {"t1", "visa"}).op("book-train", {"t1"}).op("pay", {"visa"}).end(2)
                      .task("arrange-acc")
                      .replay_from(tr.problem.init);
        ProgressedFormula pf = run(g, t, t.events.size(), false);
        CHECK(pf.bounds() == Bounds{kZero, kZero});
    }
    SUBCASE("falsified when the second starts while the first executes") {
        Trace t = tr.builder().task("arrange-trans").task("arrange-acc").end().end().replay_from(tr.problem.init);
        ProgressedFormula pf = run(g, t, 1, false);
        CHECK(pf.bounds() == Bounds{kZero, kOne});
        pf = run(g, t, 2, false);
        CHECK(pf.bounds() == Bounds{kOne, kOne});
        CHECK(run(g, t, 4, true).terminal_weight() == kOne);
    }
    SUBCASE("falsified at the end without the second task") {
        Trace t = book_train(tr);
        CHECK(run(g, t, 1, false).bounds() == Bounds{kZero, kOne});
        CHECK(run(g, t, 1, true).terminal_weight() == kOne);
    }
}

TEST_CASE("paper-literal hold bounds pending monitors as falsified") {
    Travel tr;
    Gpf g = tr.gpf("(hold-after (arrange-trans) (hasTicket t1))");
    Trace t = book_train(tr);
    ProgressionOptions literal;
    literal.paper_literal_hold = true;
    CHECK(run(g, t, 1, false).bounds() == Bounds{kZero, kOne});
    CHECK(run(g, t, 1, false, literal).bounds(literal) == Bounds{kOne, kOne});
}

TEST_CASE("bounds") {
    Travel tr;
    Trace t = book_train(tr);
    CHECK(run(tr.gpf("(eventually (occ (walk)))"), t, 1, false).bounds() == Bounds{kZero, kOne});
    CHECK(run(gpf::from_bdf(bdf::falsity()), t, 1, false).bounds() == Bounds{kOne, kOne});
    Gpf apf = tr.gpf("(>> ((occ (book-flight)) 0) ((occ (book-train)) 0.4))");
    CHECK(run(apf, t, 1, false).bounds() == Bounds{Weight(Rational(2, 5)), Weight(Rational(2, 5))});
    // Final is open until the end, then read off the last state.
    Gpf fin = tr.gpf("(final (hasTicket t1))");
    CHECK(run(fin, t, 0, false).bounds() == Bounds{kZero, kOne});
    CHECK(run(fin, t, 1, true).terminal_weight() == kZero);
}

TEST_CASE("bounds lift through conditional, conjunction and disjunction") {
    Travel tr;
    Trace t = book_train(tr);
    Gpf cond = tr.gpf("(if (eventually (occ (walk))) (occ (book-flight)))");
    // The condition may still come true, so the body's falsity is possible.
    CHECK(run(cond, t, 1, false).bounds() == Bounds{kZero, kOne});
    Gpf conj = tr.gpf("(&! (>> ((occ (book-flight)) 0) ((occ (book-train)) 0.3)) (eventually (occ (walk))))");
    CHECK(run(conj, t, 1, false).bounds() == Bounds{Weight(Rational(3, 10)), kOne});
    Gpf disj = tr.gpf("(|! (>> ((occ (book-flight)) 0) ((occ (book-train)) 0.3)) (eventually (occ (walk))))");
    CHECK(run(disj, t, 1, false).bounds() == Bounds{kZero, Weight(Rational(3, 10))});
    Gpf neg = tr.gpf("(not (eventually (occ (walk))))");
    CHECK(run(neg, t, 1, false).bounds() == Bounds{kZero, kOne});
}

TEST_CASE("terminal step requires a terminal flag") {
    Travel tr;
    Trace t = book_train(tr);
    ProgressedFormula pf = run(tr.gpf("(eventually (occ (walk)))"), t, 1, false);
    CHECK_THROWS_AS(pf.terminal_weight(), std::logic_error);
    ProgressedFormula done = run(tr.gpf("(eventually (occ (walk)))"), t, 1, true);
    CHECK(done.terminal_weight() == kOne);
    CHECK_THROWS_AS(done.step(nullptr, t.states[1], true), std::logic_error);
}

TEST_CASE("root node with a pending preference has optimistic weight 0") {
    for (int k = 1; k <= 6; ++k) {
        Problem p = testing::load_fixture("travel", k);
        ProgressedFormula pf(ground(p.preference, p.constants()));
        CHECK(pf.step(nullptr, p.init, false).bounds().opt == kZero);
    }
}

namespace {

/// Checks every progression property on every plan of a fixture.
void check_all_plans(const Problem& p) {
    const auto constants = p.constants();
    const Gpf g = ground(p.preference, constants);
    ProgressionOptions raw;
    raw.simplify = false;
    std::uint64_t plans = 0;
    enumerate_all(p, {}, [&](const Trace& t, const Weight& w) {
        ++plans;
        CHECK(w == weight_gpf(t, p.preference, constants));
        const std::size_t n = t.events.size();
        ProgressedFormula pf(g);
        Bounds prev{kZero, kOne};
        std::vector<Truth> prev_truths;
        bool fixed = false;
        for (std::size_t i = 0; i <= n; ++i) {
            pf = i == 0 ? pf.step(nullptr, t.states[0], false) : pf.step(&t.events[i - 1], t.states[i], false);
            Bounds b = pf.bounds();
            CHECK(b.opt <= w);
            CHECK(w <= b.pess);
            CHECK(prev.opt <= b.opt);
            CHECK(b.pess <= prev.pess);
            if (b.opt == b.pess && !fixed) {
                fixed = true;
                CHECK(b.opt == w);
            }
            auto truths = pf.slot_truths();
            for (std::size_t s = 0; s < prev_truths.size(); ++s) {
                if (prev_truths[s].pess) CHECK(truths[s].pess);
                if (!prev_truths[s].opt) CHECK_FALSE(truths[s].opt);
            }
            prev = b;
            prev_truths = truths;
        }
        CHECK(run(g, t, n, true).terminal_weight() == w);
        CHECK(run(g, t, n, true, raw).terminal_weight() == w);
    });
    CHECK(plans > 0);
}

}  // namespace

TEST_CASE("progression agrees with the direct semantics on every travel plan") {
    for (int k : {1, 2, 3}) {
        CAPTURE(k);
        check_all_plans(testing::load_fixture("travel", k));
    }
}

TEST_CASE("progression agrees with the direct semantics on hold and until preferences") {
    const char* prefs[] = {
        "(hold-between (arrange-acc) (hotelReservation) (arrange-local-trans))",
        "(>> ((before (arrange-trans) (arrange-acc)) 0) ((hold-before (arrange-trans) (hotelReservation)) 0.5))",
        "(&! (until (not (hotelReservation)) (occ (pay visa))) (hold-after (arrange-acc) (hasTicket t1)))",
        "(|! (next (next (apply (acc-first)))) (always (not (occ (book-flight)))))",
        "(if (final (hasTicket t1)) (not (eventually (occ (pay amex)))))",
    };
    for (const char* text : prefs) {
        CAPTURE(text);
        check_all_plans(testing::with_preference("travel", 3, text));
    }
}
