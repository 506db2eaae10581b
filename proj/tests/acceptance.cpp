// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--seeds N] [--quick]
//
// --quick skips the timing comparison (criterion 4) for local iteration.

#include "htnpref/bench.hpp"
#include "htnpref/oracle.hpp"
#include "htnpref/parser.hpp"
#include "htnpref/random_gen.hpp"
#include "htnpref/semantics.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace htnpref;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const std::vector<std::string> kSuites{"travel", "logistics", "zeno"};

std::string fixture(const std::string& rel) { return std::string(HTNPREF_FIXTURES_DIR) + "/" + rel; }

Problem load_fixture(const std::string& suite, int k) {
    const std::string stem = fixture(suite + "/" + suite);
    return load_problem(stem + ".htn", stem + "-" + std::to_string(k) + ".prob",
                        stem + "-" + std::to_string(k) + ".pref");
}

struct Instance {
    std::string id;
    Problem problem;
    bool from_fixture = false;
    std::uint64_t plan_count = 0;
};

/// Collects failures of one criterion; prints the first few.
struct Verdict {
    int number;
    std::string title;
    std::uint64_t checks = 0;
    std::vector<std::string> failures;
    std::string note;

    void check(bool ok, const std::function<std::string()>& what) {
        ++checks;
        if (!ok) failures.push_back(what());
    }
    bool passed() const { return failures.empty() && checks > 0; }
    void print() const {
        std::cout << (passed() ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " (" << checks
                  << " checks" << (note.empty() ? "" : ", " + note) << ")\n";
        for (std::size_t i = 0; i < failures.size() && i < 5; ++i) std::cout << "    " << failures[i] << "\n";
        if (failures.size() > 5) std::cout << "    ... " << failures.size() - 5 << " more\n";
    }
};

std::uint64_t count_plans(const Problem& p) {
    Problem q = p;
    q.preference = gpf::from_bdf(bdf::truth());
    return enumerate_all(q).plan_count;
}

std::vector<Instance> instances(int seeds) {
    std::vector<Instance> out;
    for (const auto& suite : kSuites) {
        for (int k = 1; k <= 6; ++k) {
            Instance in{suite + "-" + std::to_string(k), load_fixture(suite, k), true, 0};
            in.plan_count = count_plans(in.problem);
            out.push_back(std::move(in));
        }
    }
    for (int s = 1; s <= seeds; ++s) {
        GenConfig c;
        c.seed = static_cast<std::uint64_t>(s);
        GeneratedInstance g = generate(c);
        out.push_back({"random-" + std::to_string(s), std::move(g.problem), false, g.plan_count});
    }
    return out;
}

// Criteria 1 to 3 share one cross-check per instance.
void cross_checks(const std::vector<Instance>& all, Verdict& c1, Verdict& c2, Verdict& c3) {
    const auto started = Clock::now();
    std::uint64_t plans = 0;
    std::uint64_t solvable = 0;
    for (const auto& in : all) {
        // The unsimplified replay is quadratic in trace length; about ten
        // sampled plans per instance keep the run inside its budget.
        const std::uint64_t stride = std::max<std::uint64_t>(1, in.plan_count / 10);
        try {
            CrossCheckReport r = cross_check(in.problem, {}, {}, stride);
            plans += r.oracle.plan_count;
            if (r.oracle.plan_count > 0) ++solvable;
            for (const auto& item : r.items) {
                Verdict* v = nullptr;
                if (item.name.rfind("best-first", 0) == 0 || item.name.rfind("returned plan", 0) == 0 ||
                    item.name.rfind("no popped", 0) == 0) {
                    v = &c1;
                } else if (item.name.find("terminal weight") != std::string::npos) {
                    v = &c2;
                } else {
                    v = &c3;
                }
                if (item.checked == 0) continue;
                v->check(item.passed, [&] { return in.id + ": " + item.name + ": " + item.detail; });
            }
        } catch (const std::exception& e) {
            for (Verdict* v : {&c1, &c2, &c3}) {
                v->check(false, [&] { return in.id + ": exception: " + e.what(); });
            }
        }
    }
    const std::string summary = std::to_string(all.size()) + " instances, " + std::to_string(solvable) +
                                " solvable, " + std::to_string(plans) + " plans, " +
                                std::to_string(static_cast<int>(since(started))) + " s";
    c1.note = c2.note = c3.note = summary;
}

void trend(const std::vector<Instance>& all, Verdict& c4) {
    const auto started = Clock::now();
    int eligible = 0;
    int wins = 0;
    std::vector<std::string> losses;
    for (const auto& in : all) {
        if (!in.from_fixture || in.plan_count < 90) continue;
        ++eligible;
        RunRecord best = run_bestfirst(in.problem, in.id, 60);
        RunRecord brute = run_bruteforce(in.problem, in.id, 60);
        // A brute-force timeout still bounds its NE and time from below.
        const bool won = best.status == "ok" && best.ne < brute.ne && best.seconds < brute.seconds;
        if (won) {
            ++wins;
        } else {
            losses.push_back(in.id + ": bestfirst NE " + std::to_string(best.ne) + " " +
                             std::to_string(best.seconds) + " s vs bruteforce NE " + std::to_string(brute.ne) + " " +
                             std::to_string(brute.seconds) + " s");
        }
    }
    c4.check(eligible > 0, [] { return std::string("no fixture has 90 or more plans"); });
    c4.check(wins * 10 >= eligible * 9, [&] {
        std::string s = std::to_string(wins) + "/" + std::to_string(eligible) + " wins;";
        for (const auto& l : losses) s += " " + l + ";";
        return s;
    });
    c4.check(since(started) < 600, [&] { return "took " + std::to_string(since(started)) + " s"; });
    c4.note = std::to_string(wins) + "/" + std::to_string(eligible) + " instances, " +
              std::to_string(static_cast<int>(since(started))) + " s";
}

bool uses(const Plan& plan, const std::string& op, const std::string& arg = "") {
    return std::any_of(plan.ops.begin(), plan.ops.end(), [&](const GroundOperator& g) {
        return g.name == op && (arg.empty() || (!g.args.empty() && g.args[0] == arg));
    });
}

void travel_examples(Verdict& c5) {
    const auto started = Clock::now();
    const std::string never_mc = "(always (not (eventually (occ (pay mastercard)))))";
    const std::string train = "(>> ((eventually (occ (book-train))) 0) ((eventually (occ (book-car))) 0.4))";
    for (int k = 1; k <= 6; ++k) {
        const std::string id = "travel-" + std::to_string(k);
        Problem base = load_fixture("travel", k);

        Problem p5 = base;
        p5.preference = parse_preference(never_mc, *base.domain);
        bool alternative = false;
        enumerate_all(p5, {}, [&](const Trace& t, const Weight&) {
            if (!uses(project_plan(t.events), "pay", "mastercard")) alternative = true;
        });
        SolveResult r5 = solve(p5);
        c5.check(!alternative || (r5.status == SolveResult::Status::Ok && !uses(r5.plan, "pay", "mastercard")),
                 [&] { return id + ": never-mastercard plan pays by mastercard"; });

        Problem p9 = base;
        p9.preference = parse_preference(train, *base.domain);
        bool train_plan = false;
        enumerate_all(p9, {}, [&](const Trace& t, const Weight&) {
            if (uses(project_plan(t.events), "book-train")) train_plan = true;
        });
        SolveResult r9 = solve(p9);
        c5.check(!train_plan || (r9.status == SolveResult::Status::Ok && uses(r9.plan, "book-train")),
                 [&] { return id + ": train preference did not book a train"; });
    }
    // travel-5 holds the aggregate conjunction.
    Problem p14 = load_fixture("travel", 5);
    SolveResult r = solve(p14);
    OracleResult o = enumerate_all(p14);
    c5.check(r.status == SolveResult::Status::Ok && r.weight == o.best_weight,
             [&] { return "travel-5: best-first " + r.weight.str() + " vs oracle " + o.best_weight.str(); });
    c5.check(since(started) < 10, [&] { return "took " + std::to_string(since(started)) + " s"; });
    c5.note = std::to_string(since(started)).substr(0, 4) + " s";
}

void semantics_examples(Verdict& c6) {
    Problem p = load_fixture("travel", 1);
    const auto& d = *p.domain;
    auto events_of = [&](bool flight) {
        std::vector<Event> ev;
        InstanceId id = 0;
        auto unit = [&](UnitKind k, const std::string& s, std::vector<std::string> args) {
            return std::make_shared<const UnitInstance>(UnitInstance{k, s, std::move(args), id++});
        };
        auto op = [&](const std::string& name, std::vector<std::string> args) {
            return Event::apply(std::make_shared<const GroundOperator>(*ground_operator(*d.find_operator(name), args)),
                                id++);
        };
        auto task = unit(UnitKind::Task, "arrange-trans", {});
        auto method = flight ? unit(UnitKind::Method, "by-flight-trans", {"f1", "visa"})
                             : unit(UnitKind::Method, "by-train-trans", {"t1", "visa"});
        ev.push_back(Event::start(task));
        ev.push_back(Event::start(method));
        ev.push_back(flight ? op("book-flight", {"f1"}) : op("book-train", {"t1"}));
        ev.push_back(op("pay", {"visa"}));
        ev.push_back(Event::end(method));
        ev.push_back(Event::end(task));
        return replay(p.init, ev);
    };
    const Trace train = events_of(false);
    const Trace flight = events_of(true);
    auto pref = [&](const std::string& text) { return parse_preference(text, d); };
    auto bdf_of = [&](const std::string& text) { return pref(text)->apf.alternatives[0].formula; };
    const Weight zero;
    const Weight one = Weight::worst();
    auto w = [](std::int64_t n, std::int64_t q) { return Weight(Rational(n, q)); };
    auto fixed = [](Rational v) {
        if (v == Rational(0)) return gpf::from_bdf(bdf::truth());
        return gpf::atomic(Apf{{{bdf::falsity(), Weight()}, {bdf::truth(), Weight(v)}}});
    };
    auto expect = [&](bool ok, const std::string& what) { c6.check(ok, [&] { return what; }); };

    // Basic desire weights.
    expect(weight_bdf(train, bdf_of("(eventually (occ (book-train)))")) == zero, "satisfied BDF weighs 0");
    expect(weight_bdf(train, bdf_of("(before (arrange-trans) (arrange-acc))")) == one, "falsified BDF weighs 1");
    expect(weight_bdf(train, bdf::falsity()) == one && weight_bdf(flight, bdf::falsity()) == one,
           "false weighs 1 on every trace");
    expect(weight_bdf(train, bdf::always(bdf::truth())) == zero, "always true weighs 0");

    // Atomic preferences: first satisfied alternative.
    Gpf apf = pref("(>> ((eventually (occ (book-flight))) 0) ((eventually (occ (book-train))) 0.4))");
    expect(weight_apf(train, apf->apf) == w(2, 5), "APF second alternative only gives 0.4");
    Gpf both = pref("(>> ((eventually (occ (pay visa))) 0) ((eventually (occ (book-train))) 0.4))");
    expect(weight_apf(train, both->apf) == zero, "APF both satisfied gives 0");
    Gpf neither = pref("(>> ((eventually (occ (book-car))) 0) ((eventually (occ (walk))) 0.4))");
    expect(weight_apf(train, neither->apf) == one, "APF none satisfied gives 1");

    // General preferences.
    expect(weight_gpf(train, pref("(if (drivable) (eventually (occ (book-car))))")) == zero,
           "conditional with unmet condition gives 0");
    expect(weight_gpf(train, pref("(if (avail t1) (eventually (occ (book-car))))")) == one,
           "conditional with met condition gives the body weight");
    expect(weight_gpf(train, gpf::conjunction({fixed(0), fixed(Rational(2, 5))})) == w(2, 5),
           "general conjunction of 0 and 0.4 gives 0.4");
    expect(weight_gpf(train, gpf::disjunction({fixed(Rational(3, 10)), fixed(1)})) == w(3, 10),
           "general disjunction of 0.3 and 1 gives 0.3");

    // Plan comparison.
    Gpf prefer_train = pref("(>> ((eventually (occ (book-train))) 0) ((eventually (occ (book-flight))) 0.2)"
                            " ((always (true)) 0.5))");
    expect(compare_plans(train, flight, prefer_train) == Ordering::APreferred, "0 against 0.2 prefers A");
    Gpf tie = pref("(eventually (occ (pay visa)))");
    expect(compare_plans(train, flight, tie) == Ordering::Indistinguishable, "equal weights are indistinguishable");
    Gpf lex = gpf::conjunction({pref("(>> ((drivable) 0) ((eventually (occ (pay visa))) 0.4))"),
                                pref("(>> ((eventually (occ (book-train))) 0) ((eventually (occ (book-flight))) 0.3))")});
    expect(compare_plans(train, flight, lex, true) == Ordering::APreferred &&
               compare_plans(train, flight, lex, false) == Ordering::Indistinguishable,
           "lexicographic tie-break on (0.4, 0) against (0.4, 0.3)");
}

/// One random edit of `text`.
std::string mutate(std::string text, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 5);
    auto pos = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng); };
    const char alphabet[] = "()?;\" \n\t.-0123456789abcdefghijklmnopqrstuvwxyz:!>|&";
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
        switch (kind(rng)) {
            case 0:
                if (!text.empty()) text.erase(pos(text.size() - 1), 1);
                break;
            case 1: text.insert(pos(text.size()), 1, alphabet[rng() % (sizeof(alphabet) - 1)]); break;
            case 2: text.insert(pos(text.size()), 1, static_cast<char>(rng() % 256)); break;
            case 3: text.resize(pos(text.size())); break;
            case 4:
                if (!text.empty()) text[pos(text.size() - 1)] = alphabet[rng() % (sizeof(alphabet) - 1)];
                break;
            default: {
                // Duplicate a slice, which unbalances or nests forms.
                if (text.empty()) break;
                std::size_t a = pos(text.size() - 1);
                std::size_t len = std::min<std::size_t>(rng() % 40, text.size() - a);
                text.insert(pos(text.size()), text.substr(a, len));
            }
        }
    }
    return text;
}

void parser_robustness(Verdict& c7) {
    // Round trip on every fixture.
    for (const auto& suite : kSuites) {
        for (int k = 1; k <= 6; ++k) {
            const std::string id = suite + "-" + std::to_string(k);
            Problem p = load_fixture(suite, k);
            auto d = std::make_shared<const Domain>(parse_domain(print_domain(*p.domain)));
            c7.check(*d == *p.domain, [&] { return id + ": domain round trip"; });
            Problem q = parse_problem(print_problem(p), d);
            c7.check(q.init == p.init && q.network == p.network && q.name == p.name,
                     [&] { return id + ": problem round trip"; });
            c7.check(structurally_equal(parse_preference(print_preference(p.preference), *d), p.preference),
                     [&] { return id + ": preference round trip"; });
        }
    }

    // Fuzzing: mutated fixture texts and raw random bytes.
    struct Seed {
        std::string text;
        int kind;  // 0 domain, 1 problem, 2 preference
        std::shared_ptr<const Domain> domain;
    };
    std::vector<Seed> seeds;
    for (const auto& suite : kSuites) {
        const std::string domain_text = read_file(fixture(suite + "/" + suite + ".htn"));
        auto domain = std::make_shared<const Domain>(parse_domain(domain_text));
        seeds.push_back({domain_text, 0, domain});
        for (int k = 1; k <= 6; ++k) {
            const std::string stem = fixture(suite + "/" + suite + "-" + std::to_string(k));
            seeds.push_back({read_file(stem + ".prob"), 1, domain});
            seeds.push_back({read_file(stem + ".pref"), 2, domain});
        }
    }
    std::mt19937_64 rng(20240611);
    int parsed = 0;
    int rejected = 0;
    for (int i = 0; i < 1000; ++i) {
        const Seed& seed = seeds[rng() % seeds.size()];
        std::string text;
        if (i % 10 == 9) {
            text.resize(rng() % 200);
            for (auto& ch : text) ch = static_cast<char>(rng() % 256);
        } else {
            text = mutate(seed.text, rng);
        }
        const int kind = seed.kind;
        try {
            if (kind == 0) {
                Domain d = parse_domain(text);
                Domain again = parse_domain(print_domain(d));
                c7.check(again == d, [&] { return "fuzz " + std::to_string(i) + ": parsed domain does not round trip"; });
            } else {
                const auto& d = seed.domain;
                if (kind == 1) {
                    Problem p = parse_problem(text, d);
                    Problem again = parse_problem(print_problem(p), d);
                    c7.check(again.init == p.init && again.network == p.network,
                             [&] { return "fuzz " + std::to_string(i) + ": parsed problem does not round trip"; });
                } else {
                    Gpf g = parse_preference(text, *d);
                    c7.check(structurally_equal(parse_preference(print_preference(g), *d), g),
                             [&] { return "fuzz " + std::to_string(i) + ": parsed preference does not round trip"; });
                }
            }
            ++parsed;
        } catch (const ParseError& e) {
            ++rejected;
            c7.check(e.line >= 1 && e.column >= 1 && !e.message.empty(),
                     [&] { return "fuzz " + std::to_string(i) + ": error without a location"; });
        } catch (const std::exception& e) {
            c7.check(false, [&] { return "fuzz " + std::to_string(i) + ": unstructured exception: " + e.what(); });
        }
    }
    c7.note = "1000 fuzzed inputs: " + std::to_string(parsed) + " parsed, " + std::to_string(rejected) + " rejected";
}

}  // namespace

int main(int argc, char** argv) {
    int seeds = 50;
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--seeds") && i + 1 < argc) seeds = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--quick")) quick = true;
    }

    Verdict c1{1, "best-first weight equals the brute-force minimum"};
    Verdict c2{2, "terminal progressed weight equals the direct semantics on every plan"};
    Verdict c3{3, "prefix bounds monotone, enclosing and exact once collapsed"};
    Verdict c4{4, "best-first beats brute force on NE and time for instances with >= 90 plans"};
    Verdict c5{5, "travel example preferences"};
    Verdict c6{6, "basic, atomic and general preference weight rules"};
    Verdict c7{7, "parser round trip and fuzzing"};

    const auto all = instances(seeds);
    const auto started = Clock::now();
    cross_checks(all, c1, c2, c3);
    c1.check(since(started) < 300, [&] { return "cross-checks took " + std::to_string(since(started)) + " s"; });
    if (quick) {
        c4.note = "skipped";
    } else {
        trend(all, c4);
    }
    try {
        travel_examples(c5);
    } catch (const std::exception& e) {
        c5.check(false, [&] { return std::string("exception: ") + e.what(); });
    }
    try {
        semantics_examples(c6);
    } catch (const std::exception& e) {
        c6.check(false, [&] { return std::string("exception: ") + e.what(); });
    }
    parser_robustness(c7);

    bool ok = true;
    for (const Verdict* v : {&c1, &c2, &c3, &c4, &c5, &c6, &c7}) {
        v->print();
        ok = ok && (v->passed() || (quick && v == &c4));
    }
    return ok ? 0 : 1;
}
