#include "htnpref/semantics.hpp"

#include <algorithm>

namespace htnpref {

bool event_matches(const Event& e, const UnitPattern& x) {
    return e.kind != EventKind::End && x.matches(*e.unit);
}

namespace {

bool any_match(const std::map<InstanceId, UnitRef>& units, const UnitPattern& x) {
    return std::any_of(units.begin(), units.end(), [&](const auto& kv) { return x.matches(*kv.second); });
}

bool literal_holds(const State& s, const Literal& l) {
    if (!l.atom.is_ground()) throw UnboundVariable("unbound variable in " + l.str());
    return s.holds(l);
}

void require_ground(const UnitPattern& x) {
    for (const auto& a : x.args) {
        if (a.is_variable()) throw UnboundVariable("unbound variable in " + x.str());
    }
}

class Evaluator {
public:
    Evaluator(const Trace& trace, const std::vector<std::string>& constants)
        : trace_(trace), constants_(constants), n_(trace.events.size()) {}

    bool eval(std::size_t i, const Bdf& f) const {
        switch (f->kind) {
            case BdfKind::True: return true;
            case BdfKind::False: return false;
            case BdfKind::Lit: return literal_holds(state(i), f->literal);
            case BdfKind::Final: return literal_holds(state(n_), f->literal);
            case BdfKind::Occ:
            case BdfKind::Apply:
                require_ground(f->first);
                return i < n_ && event_matches(trace_.events[i], f->first);
            case BdfKind::Terminated:
                require_ground(f->first);
                return terminated_match(state(i), f->first);
            case BdfKind::Before: return before(i, f, false);
            case BdfKind::HoldBetween: return before(i, f, true);
            case BdfKind::HoldBefore:
                require_ground(f->first);
                for (std::size_t s = i; s < n_; ++s) {
                    if (literal_holds(state(s), f->literal) && event_matches(trace_.events[s], f->first)) return true;
                }
                return false;
            case BdfKind::HoldAfter:
                require_ground(f->first);
                for (std::size_t s = i; s <= n_; ++s) {
                    if (terminated_match(state(s), f->first) && literal_holds(state(s), f->literal)) return true;
                }
                return false;
            case BdfKind::Not: return !eval(i, f->children.front());
            case BdfKind::And:
                return std::all_of(f->children.begin(), f->children.end(), [&](const Bdf& c) { return eval(i, c); });
            case BdfKind::Or:
                return std::any_of(f->children.begin(), f->children.end(), [&](const Bdf& c) { return eval(i, c); });
            case BdfKind::Exists:
            case BdfKind::Forall: {
                const bool want = f->kind == BdfKind::Exists;
                for (const auto& c : constants_) {
                    if (eval(i, substitute(f->children.front(), {{f->variable, c}})) == want) return want;
                }
                return !want;
            }
            case BdfKind::Next: return i < n_ && eval(i + 1, f->children.front());
            case BdfKind::Always:
                for (std::size_t j = i; j <= n_; ++j) {
                    if (!eval(j, f->children.front())) return false;
                }
                return true;
            case BdfKind::Eventually:
                for (std::size_t j = i; j <= n_; ++j) {
                    if (eval(j, f->children.front())) return true;
                }
                return false;
            case BdfKind::Until:
                for (std::size_t j = i; j <= n_; ++j) {
                    if (eval(j, f->children[1])) return true;
                    if (!eval(j, f->children[0])) return false;
                }
                return false;
            case BdfKind::OccNext:
            case BdfKind::ApplyNext:
            case BdfKind::Monitor:
                throw std::invalid_argument("progression-only formula in direct evaluation: " + to_string(f));
        }
        return false;
    }

private:
    const State& state(std::size_t i) const { return trace_.states[i]; }

    // Shared by before and hold-between: a witness s1 where X1 is terminated
    // and X2 has not begun, followed (s1 <= s2) by X2 occurring at s2; for
    // hold-between the fluent must also hold on every state of [s1, s2].
    bool before(std::size_t i, const Bdf& f, bool with_fluent) const {
        require_ground(f->first);
        require_ground(f->second);
        for (std::size_t s1 = i; s1 < n_; ++s1) {
            const State& st = state(s1);
            if (!terminated_match(st, f->first) || executing_match(st, f->second) ||
                terminated_match(st, f->second)) {
                continue;
            }
            for (std::size_t s2 = s1; s2 < n_; ++s2) {
                if (with_fluent && !literal_holds(state(s2), f->literal)) break;
                if (event_matches(trace_.events[s2], f->second)) return true;
            }
        }
        return false;
    }

    const Trace& trace_;
    const std::vector<std::string>& constants_;
    std::size_t n_;
};

}  // namespace

bool executing_match(const State& s, const UnitPattern& x) { return any_match(s.executing, x); }
bool terminated_match(const State& s, const UnitPattern& x) { return any_match(s.terminated, x); }

bool satisfies(const Trace& trace, std::size_t from, const Bdf& f, const std::vector<std::string>& constants) {
    if (from > trace.events.size() || trace.states.size() != trace.events.size() + 1) {
        throw std::out_of_range("trace position out of range");
    }
    return Evaluator(trace, constants).eval(from, f);
}

Weight weight_bdf(const Trace& trace, const Bdf& f, const std::vector<std::string>& constants) {
    return satisfies(trace, 0, f, constants) ? Weight::best() : Weight::worst();
}

Weight weight_apf(const Trace& trace, const Apf& apf, const std::vector<std::string>& constants) {
    for (const auto& alt : apf.alternatives) {
        if (satisfies(trace, 0, alt.formula, constants)) return alt.value;
    }
    return Weight::worst();
}

Weight weight_gpf(const Trace& trace, const Gpf& g, const std::vector<std::string>& constants) {
    switch (g->kind) {
        case GpfKind::Atomic: return weight_apf(trace, g->apf, constants);
        case GpfKind::Conditional:
            if (!satisfies(trace, 0, g->condition, constants)) return Weight::best();
            return weight_gpf(trace, g->children.front(), constants);
        case GpfKind::Conjunction:
        case GpfKind::Disjunction: {
            Weight acc = weight_gpf(trace, g->children.front(), constants);
            for (std::size_t i = 1; i < g->children.size(); ++i) {
                Weight w = weight_gpf(trace, g->children[i], constants);
                acc = g->kind == GpfKind::Conjunction ? std::max(acc, w) : std::min(acc, w);
            }
            return acc;
        }
    }
    return Weight::worst();
}

std::vector<Weight> constituent_weights(const Trace& trace, const Gpf& g, const std::vector<std::string>& constants) {
    if (g->kind != GpfKind::Conjunction && g->kind != GpfKind::Disjunction) {
        return {weight_gpf(trace, g, constants)};
    }
    std::vector<Weight> out;
    for (const auto& c : g->children) out.push_back(weight_gpf(trace, c, constants));
    return out;
}

Ordering compare_plans(const Trace& a, const Trace& b, const Gpf& g, bool tiebreak_lex,
                       const std::vector<std::string>& constants) {
    Weight wa = weight_gpf(a, g, constants);
    Weight wb = weight_gpf(b, g, constants);
    if (wa < wb) return Ordering::APreferred;
    if (wb < wa) return Ordering::BPreferred;
    if (!tiebreak_lex) return Ordering::Indistinguishable;
    auto va = constituent_weights(a, g, constants);
    auto vb = constituent_weights(b, g, constants);
    if (va < vb) return Ordering::APreferred;
    if (vb < va) return Ordering::BPreferred;
    return Ordering::Indistinguishable;
}

}  // namespace htnpref
