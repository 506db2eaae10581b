#include "htnpref/progression.hpp"

#include "htnpref/semantics.hpp"

#include <stdexcept>
#include <unordered_map>

namespace htnpref {

namespace {

bool literal_holds(const State& s, const Literal& l) {
    if (!l.atom.is_ground()) throw UnboundVariable("unbound variable in " + l.str());
    return s.holds(l);
}

Bdf combine(BdfKind kind, std::vector<Bdf> parts, bool simplify) {
    if (!simplify) {
        BdfNode n;
        n.kind = kind;
        n.children = std::move(parts);
        return std::make_shared<const BdfNode>(std::move(n));
    }
    const BdfKind unit = kind == BdfKind::And ? BdfKind::True : BdfKind::False;
    const BdfKind zero = kind == BdfKind::And ? BdfKind::False : BdfKind::True;
    std::vector<Bdf> flat;
    std::unordered_multimap<std::size_t, std::size_t> seen;
    auto add = [&](const Bdf& p) {
        const std::size_t h = structural_hash(p);
        for (auto [it, end] = seen.equal_range(h); it != end; ++it) {
            if (structurally_equal(p, flat[it->second])) return;
        }
        seen.emplace(h, flat.size());
        flat.push_back(p);
    };
    for (const auto& p : parts) {
        if (p->kind == zero) return p;
        if (p->kind == unit) continue;
        if (p->kind == kind) {
            for (const auto& c : p->children) add(c);
        } else {
            add(p);
        }
    }
    if (flat.empty()) return bdf::constant(kind == BdfKind::And);
    if (flat.size() == 1) return flat.front();
    BdfNode n;
    n.kind = kind;
    n.children = std::move(flat);
    return std::make_shared<const BdfNode>(std::move(n));
}

Bdf make_not(Bdf f, bool simplify) {
    if (simplify) {
        if (f->kind == BdfKind::True) return bdf::falsity();
        if (f->kind == BdfKind::False) return bdf::truth();
        if (f->kind == BdfKind::Not) return f->children.front();
    }
    return bdf::raw_not(std::move(f));
}

class Progressor {
public:
    Progressor(const Event* last, const State& state, bool terminal, const ProgressionOptions& o)
        : last_(last), state_(state), terminal_(terminal), o_(o) {}

    Bdf run(const Bdf& f) const {
        switch (f->kind) {
            case BdfKind::True:
            case BdfKind::False: return f;
            case BdfKind::Lit: return bdf::constant(literal_holds(state_, f->literal));
            case BdfKind::Terminated: return bdf::constant(terminated_match(state_, f->first));
            case BdfKind::Final: return terminal_ ? bdf::constant(literal_holds(state_, f->literal)) : f;
            case BdfKind::Occ:
            case BdfKind::Apply: {
                if (terminal_) return bdf::falsity();
                Bdf now = f->kind == BdfKind::Occ ? bdf::occ_next(f->first) : bdf::apply_next(f->first);
                // An operator instance terminates with its own event.
                if (f->first.kind == UnitKind::Operator) return now;
                return combine(BdfKind::And, {now, bdf::eventually(bdf::terminated(f->first))}, o_.simplify);
            }
            case BdfKind::OccNext:
            case BdfKind::ApplyNext: {
                if (!last_) return bdf::falsity();
                bool hit = event_matches(*last_, f->first);
                if (o_.corrupt_occ_next && f->kind == BdfKind::OccNext) hit = !hit;
                return bdf::constant(hit);
            }
            case BdfKind::Next: return terminal_ ? bdf::falsity() : f->children.front();
            case BdfKind::Always: {
                Bdf now = run(f->children.front());
                return terminal_ ? now : combine(BdfKind::And, {now, f}, o_.simplify);
            }
            case BdfKind::Eventually: {
                Bdf now = run(f->children.front());
                return terminal_ ? now : combine(BdfKind::Or, {now, f}, o_.simplify);
            }
            case BdfKind::Until: {
                Bdf rhs = run(f->children[1]);
                if (terminal_) return rhs;
                Bdf lhs = combine(BdfKind::And, {run(f->children[0]), f}, o_.simplify);
                return combine(BdfKind::Or, {rhs, lhs}, o_.simplify);
            }
            case BdfKind::Not: {
                Bdf c = run(f->children.front());
                if (!o_.simplify && c == f->children.front()) return f;
                return make_not(std::move(c), o_.simplify);
            }
            case BdfKind::And:
            case BdfKind::Or: {
                std::vector<Bdf> parts;
                parts.reserve(f->children.size());
                bool same = true;
                for (const auto& c : f->children) {
                    parts.push_back(run(c));
                    same = same && parts.back() == c;
                }
                // A progressed constant is itself, so a settled subtree is shared.
                if (!o_.simplify && same) return f;
                return combine(f->kind, std::move(parts), o_.simplify);
            }
            case BdfKind::Exists:
            case BdfKind::Forall:
                throw std::invalid_argument("quantifiers must be grounded before progression: " + to_string(f));
            case BdfKind::Before:
            case BdfKind::HoldBefore:
            case BdfKind::HoldAfter:
            case BdfKind::HoldBetween: {
                MonitorState m;
                state_phase(m, *f, f->kind);
                return finish(m, *f);
            }
            case BdfKind::Monitor: {
                if (f->monitor.status != MonitorStatus::Pending) return f;
                MonitorState m = f->monitor;
                event_phase(m, *f);
                if (m.status == MonitorStatus::Pending) state_phase(m, *f, f->monitored);
                return finish(m, *f);
            }
        }
        return f;
    }

private:
    bool cond1(const BdfNode& n) const {
        return terminated_match(state_, n.first) && !executing_match(state_, n.second) &&
               !terminated_match(state_, n.second);
    }

    bool x2_begun(const BdfNode& n) const {
        return executing_match(state_, n.second) || terminated_match(state_, n.second);
    }

    void event_phase(MonitorState& m, const BdfNode& n) const {
        if (!last_) return;
        switch (n.monitored) {
            case BdfKind::Before:
            case BdfKind::HoldBetween:
                if (m.armed && event_matches(*last_, n.second)) m.status = MonitorStatus::Satisfied;
                break;
            case BdfKind::HoldBefore:
                if (m.fluent_before && event_matches(*last_, n.first)) m.status = MonitorStatus::Satisfied;
                break;
            default: break;
        }
    }

    void state_phase(MonitorState& m, const BdfNode& n, BdfKind kind) const {
        switch (kind) {
            case BdfKind::Before:
                if (cond1(n)) m.armed = true;
                if (!m.armed && x2_begun(n)) m.status = MonitorStatus::Falsified;
                break;
            case BdfKind::HoldBetween: {
                const bool f = literal_holds(state_, n.literal);
                if (m.armed && !f) m.armed = false;
                if (f && cond1(n)) m.armed = true;
                if (!m.armed && x2_begun(n)) m.status = MonitorStatus::Falsified;
                break;
            }
            case BdfKind::HoldBefore: m.fluent_before = literal_holds(state_, n.literal); break;
            case BdfKind::HoldAfter:
                if (terminated_match(state_, n.first) && literal_holds(state_, n.literal)) {
                    m.status = MonitorStatus::Satisfied;
                }
                break;
            default: throw std::logic_error("not a monitored construct");
        }
    }

    Bdf finish(MonitorState m, const BdfNode& construct) const {
        if (terminal_ && m.status == MonitorStatus::Pending) m.status = MonitorStatus::Falsified;
        if (o_.simplify && m.status != MonitorStatus::Pending) {
            return bdf::constant(m.status == MonitorStatus::Satisfied);
        }
        return bdf::monitor(construct, m);
    }

    const Event* last_;
    const State& state_;
    bool terminal_;
    const ProgressionOptions& o_;
};

Weight first_value(const Apf& apf, const std::vector<Truth>& truths, std::size_t& k, bool Truth::*field) {
    std::optional<Weight> out;
    for (const auto& alt : apf.alternatives) {
        if (!out && truths[k].*field) out = alt.value;
        ++k;
    }
    return out.value_or(Weight::worst());
}

Bounds lift(const Gpf& g, const std::vector<Truth>& truths, std::size_t& k) {
    switch (g->kind) {
        case GpfKind::Atomic: {
            std::size_t k2 = k;
            Weight opt = first_value(g->apf, truths, k, &Truth::opt);
            Weight pess = first_value(g->apf, truths, k2, &Truth::pess);
            return {opt, pess};
        }
        case GpfKind::Conditional: {
            Truth c = truths[k++];
            Bounds body = lift(g->children.front(), truths, k);
            return {c.pess ? body.opt : Weight::best(), c.opt ? body.pess : Weight::best()};
        }
        case GpfKind::Conjunction:
        case GpfKind::Disjunction: {
            Bounds acc = lift(g->children.front(), truths, k);
            for (std::size_t i = 1; i < g->children.size(); ++i) {
                Bounds b = lift(g->children[i], truths, k);
                if (g->kind == GpfKind::Conjunction) {
                    acc = {std::max(acc.opt, b.opt), std::max(acc.pess, b.pess)};
                } else {
                    acc = {std::min(acc.opt, b.opt), std::min(acc.pess, b.pess)};
                }
            }
            return acc;
        }
    }
    return {Weight::best(), Weight::worst()};
}

}  // namespace

Bdf progress(const Bdf& f, const Event* last, const State& state, bool terminal, const ProgressionOptions& options) {
    return Progressor(last, state, terminal, options).run(f);
}

Bdf fold_constants(const Bdf& f) {
    if (f->children.empty()) return f;
    std::vector<Bdf> kids;
    for (const auto& c : f->children) kids.push_back(fold_constants(c));
    auto is = [](const Bdf& x, BdfKind k) { return x->kind == k; };
    switch (f->kind) {
        case BdfKind::And:
        case BdfKind::Or: return combine(f->kind, std::move(kids), true);
        case BdfKind::Not: return make_not(kids.front(), true);
        case BdfKind::Always:
        case BdfKind::Eventually:
            if (is(kids.front(), BdfKind::True) || is(kids.front(), BdfKind::False)) return kids.front();
            break;
        case BdfKind::Next:
            if (is(kids.front(), BdfKind::False)) return kids.front();
            break;
        case BdfKind::Until:
            if (is(kids[1], BdfKind::True) || is(kids[1], BdfKind::False)) return kids[1];
            if (is(kids[0], BdfKind::False)) return kids[1];
            break;
        default: break;
    }
    BdfNode n = *f;
    n.children = std::move(kids);
    return std::make_shared<const BdfNode>(std::move(n));
}

std::optional<bool> constant_value(const Bdf& f) {
    switch (f->kind) {
        case BdfKind::True: return true;
        case BdfKind::False: return false;
        case BdfKind::Monitor:
            if (f->monitor.status == MonitorStatus::Pending) return std::nullopt;
            return f->monitor.status == MonitorStatus::Satisfied;
        case BdfKind::Not: {
            auto v = constant_value(f->children.front());
            if (!v) return std::nullopt;
            return !*v;
        }
        case BdfKind::And:
        case BdfKind::Or: {
            const bool absorbing = f->kind == BdfKind::Or;
            bool all_known = true;
            for (const auto& c : f->children) {
                auto v = constant_value(c);
                if (v && *v == absorbing) return absorbing;
                if (!v) all_known = false;
            }
            if (!all_known) return std::nullopt;
            return !absorbing;
        }
        default: return std::nullopt;
    }
}

Truth bound(const Bdf& f, const ProgressionOptions& options) {
    switch (f->kind) {
        case BdfKind::True: return {true, true};
        case BdfKind::False: return {false, false};
        case BdfKind::Monitor:
            switch (f->monitor.status) {
                case MonitorStatus::Satisfied: return {true, true};
                case MonitorStatus::Falsified: return {false, false};
                case MonitorStatus::Pending:
                    return options.paper_literal_hold ? Truth{false, false} : Truth{true, false};
            }
            break;
        case BdfKind::Not: {
            Truth t = bound(f->children.front(), options);
            return {!t.pess, !t.opt};
        }
        case BdfKind::And:
        case BdfKind::Or: {
            const bool conj = f->kind == BdfKind::And;
            Truth acc{conj, conj};
            for (const auto& c : f->children) {
                Truth t = bound(c, options);
                if (conj) {
                    acc = {acc.opt && t.opt, acc.pess && t.pess};
                } else {
                    acc = {acc.opt || t.opt, acc.pess || t.pess};
                }
            }
            return acc;
        }
        default: break;
    }
    return {true, false};
}

ProgressedFormula::ProgressedFormula(Gpf ground_preference) : skeleton_(std::move(ground_preference)) {
    for_each_slot(skeleton_, [&](const Bdf& f) { slots_.push_back(f); });
}

ProgressedFormula ProgressedFormula::step(const Event* last, const State& state, bool terminal,
                                          const ProgressionOptions& options) const {
    if (terminal_) throw std::logic_error("progression past a terminal step");
    ProgressedFormula next = *this;
    Progressor p(last, state, terminal, options);
    for (auto& slot : next.slots_) slot = p.run(slot);
    next.terminal_ = terminal;
    return next;
}

std::vector<Truth> ProgressedFormula::slot_truths(const ProgressionOptions& options) const {
    std::vector<Truth> out;
    out.reserve(slots_.size());
    for (const auto& s : slots_) {
        if (terminal_) {
            auto v = constant_value(s);
            if (!v) throw std::logic_error("terminal residual is not constant: " + to_string(s));
            out.push_back({*v, *v});
        } else {
            out.push_back(bound(s, options));
        }
    }
    return out;
}

Bounds ProgressedFormula::bounds(const ProgressionOptions& options) const {
    std::size_t k = 0;
    return lift(skeleton_, slot_truths(options), k);
}

Weight ProgressedFormula::terminal_weight() const {
    if (!terminal_) throw std::logic_error("terminal_weight before a terminal step");
    return bounds().opt;
}

}  // namespace htnpref
