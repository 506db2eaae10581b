#include "htnpref/formula.hpp"

#include <algorithm>
#include <stdexcept>

namespace htnpref {

bool UnitPattern::matches(const UnitInstance& unit) const {
    if (unit.kind != kind || unit.symbol != symbol || args.size() > unit.args.size()) return false;
    Substitution sigma;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].is_variable()) {
            if (args[i].name != unit.args[i]) return false;
            continue;
        }
        auto [it, inserted] = sigma.emplace(args[i].name, unit.args[i]);
        if (!inserted && it->second != unit.args[i]) return false;
    }
    return true;
}

std::string UnitPattern::str() const {
    std::string out = "(" + symbol;
    for (const auto& a : args) out += " " + a.name;
    return out + ")";
}

UnitPattern substitute(const UnitPattern& p, const Substitution& sigma) {
    UnitPattern out{p.kind, p.symbol, {}};
    for (const auto& a : p.args) out.args.push_back(substitute(a, sigma));
    return out;
}

namespace bdf {

namespace {

Bdf make(BdfNode node) { return std::make_shared<const BdfNode>(std::move(node)); }

Bdf unary(BdfKind kind, Bdf f) {
    BdfNode n;
    n.kind = kind;
    n.children.push_back(std::move(f));
    return make(std::move(n));
}

Bdf pattern_node(BdfKind kind, UnitPattern x) {
    BdfNode n;
    n.kind = kind;
    n.first = std::move(x);
    return make(std::move(n));
}

}  // namespace

Bdf truth() {
    static const Bdf t = make(BdfNode{});
    return t;
}

Bdf falsity() {
    static const Bdf f = [] {
        BdfNode n;
        n.kind = BdfKind::False;
        return make(std::move(n));
    }();
    return f;
}

Bdf constant(bool value) { return value ? truth() : falsity(); }

Bdf lit(Literal l) {
    BdfNode n;
    n.kind = BdfKind::Lit;
    n.literal = std::move(l);
    return make(std::move(n));
}

Bdf final_(Literal l) {
    BdfNode n;
    n.kind = BdfKind::Final;
    n.literal = std::move(l);
    return make(std::move(n));
}

Bdf occ(UnitPattern x) { return pattern_node(BdfKind::Occ, std::move(x)); }
Bdf apply(UnitPattern p) { return pattern_node(BdfKind::Apply, std::move(p)); }
Bdf occ_next(UnitPattern x) { return pattern_node(BdfKind::OccNext, std::move(x)); }
Bdf apply_next(UnitPattern p) { return pattern_node(BdfKind::ApplyNext, std::move(p)); }
Bdf terminated(UnitPattern x) { return pattern_node(BdfKind::Terminated, std::move(x)); }

Bdf before(UnitPattern t1, UnitPattern t2) {
    BdfNode n;
    n.kind = BdfKind::Before;
    n.first = std::move(t1);
    n.second = std::move(t2);
    return make(std::move(n));
}

Bdf hold_before(UnitPattern t, Literal f) {
    BdfNode n;
    n.kind = BdfKind::HoldBefore;
    n.first = std::move(t);
    n.literal = std::move(f);
    return make(std::move(n));
}

Bdf hold_after(UnitPattern t, Literal f) {
    BdfNode n;
    n.kind = BdfKind::HoldAfter;
    n.first = std::move(t);
    n.literal = std::move(f);
    return make(std::move(n));
}

Bdf hold_between(UnitPattern t1, Literal f, UnitPattern t2) {
    BdfNode n;
    n.kind = BdfKind::HoldBetween;
    n.first = std::move(t1);
    n.literal = std::move(f);
    n.second = std::move(t2);
    return make(std::move(n));
}

Bdf raw_not(Bdf f) { return unary(BdfKind::Not, std::move(f)); }

Bdf negate(const Bdf& f) {
    switch (f->kind) {
        case BdfKind::True: return falsity();
        case BdfKind::False: return truth();
        case BdfKind::Lit: {
            Literal l = f->literal;
            l.positive = !l.positive;
            return lit(std::move(l));
        }
        case BdfKind::Final: {
            Literal l = f->literal;
            l.positive = !l.positive;
            return final_(std::move(l));
        }
        case BdfKind::Not: return f->children.front();
        case BdfKind::And:
        case BdfKind::Or: {
            std::vector<Bdf> kids;
            for (const auto& c : f->children) kids.push_back(negate(c));
            return f->kind == BdfKind::And ? disj(std::move(kids)) : conj(std::move(kids));
        }
        case BdfKind::Exists: return forall(f->variable, negate(f->children.front()));
        case BdfKind::Forall: return exists(f->variable, negate(f->children.front()));
        case BdfKind::Always: return eventually(negate(f->children.front()));
        case BdfKind::Eventually: return always(negate(f->children.front()));
        default: return raw_not(f);
    }
}

Bdf conj(std::vector<Bdf> fs) {
    if (fs.size() == 1) return fs.front();
    BdfNode n;
    n.kind = BdfKind::And;
    n.children = std::move(fs);
    return make(std::move(n));
}

Bdf disj(std::vector<Bdf> fs) {
    if (fs.size() == 1) return fs.front();
    BdfNode n;
    n.kind = BdfKind::Or;
    n.children = std::move(fs);
    return make(std::move(n));
}

Bdf exists(std::string var, Bdf body) {
    BdfNode n;
    n.kind = BdfKind::Exists;
    n.variable = std::move(var);
    n.children.push_back(std::move(body));
    return make(std::move(n));
}

Bdf forall(std::string var, Bdf body) {
    BdfNode n;
    n.kind = BdfKind::Forall;
    n.variable = std::move(var);
    n.children.push_back(std::move(body));
    return make(std::move(n));
}

Bdf next(Bdf f) { return unary(BdfKind::Next, std::move(f)); }
Bdf always(Bdf f) { return unary(BdfKind::Always, std::move(f)); }
Bdf eventually(Bdf f) { return unary(BdfKind::Eventually, std::move(f)); }

Bdf until(Bdf lhs, Bdf rhs) {
    BdfNode n;
    n.kind = BdfKind::Until;
    n.children = {std::move(lhs), std::move(rhs)};
    return make(std::move(n));
}

Bdf monitor(const BdfNode& construct, MonitorState state) {
    BdfNode n;
    n.kind = BdfKind::Monitor;
    n.monitored = construct.kind == BdfKind::Monitor ? construct.monitored : construct.kind;
    n.first = construct.first;
    n.second = construct.second;
    n.literal = construct.literal;
    n.monitor = state;
    return make(std::move(n));
}

}  // namespace bdf

bool structurally_equal(const Bdf& a, const Bdf& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->children.size() != b->children.size()) return false;
    if (a->hash.value && b->hash.value && a->hash.value != b->hash.value) return false;
    if (!(a->literal == b->literal) || !(a->first == b->first) || !(a->second == b->second) ||
        a->variable != b->variable) {
        return false;
    }
    if (a->kind == BdfKind::Monitor && (a->monitored != b->monitored || !(a->monitor == b->monitor))) {
        return false;
    }
    for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!structurally_equal(a->children[i], b->children[i])) return false;
    }
    return true;
}

namespace {

void mix(std::size_t& seed, std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); }

void mix(std::size_t& seed, const UnitPattern& x) {
    mix(seed, static_cast<std::size_t>(x.kind));
    mix(seed, std::hash<std::string>{}(x.symbol));
    for (const auto& a : x.args) mix(seed, std::hash<std::string>{}(a.name));
}

}  // namespace

std::size_t structural_hash(const Bdf& f) {
    if (f->hash.value) return f->hash.value;
    std::size_t h = static_cast<std::size_t>(f->kind) + 1;
    mix(h, std::hash<std::string>{}(f->literal.atom.predicate));
    for (const auto& a : f->literal.atom.args) mix(h, std::hash<std::string>{}(a.name));
    mix(h, f->literal.positive);
    mix(h, f->first);
    mix(h, f->second);
    mix(h, std::hash<std::string>{}(f->variable));
    if (f->kind == BdfKind::Monitor) {
        mix(h, static_cast<std::size_t>(f->monitored));
        mix(h, static_cast<std::size_t>(f->monitor.status));
        mix(h, f->monitor.armed);
        mix(h, f->monitor.fluent_before);
    }
    for (const auto& c : f->children) mix(h, structural_hash(c));
    if (h == 0) h = 1;
    f->hash.value = h;
    return h;
}

namespace {

std::string keyword(BdfKind k) {
    switch (k) {
        case BdfKind::Final: return "final";
        case BdfKind::Occ: return "occ";
        case BdfKind::Apply: return "apply";
        case BdfKind::Before: return "before";
        case BdfKind::HoldBefore: return "hold-before";
        case BdfKind::HoldAfter: return "hold-after";
        case BdfKind::HoldBetween: return "hold-between";
        case BdfKind::Not: return "not";
        case BdfKind::And: return "and";
        case BdfKind::Or: return "or";
        case BdfKind::Exists: return "exists";
        case BdfKind::Forall: return "forall";
        case BdfKind::Next: return "next";
        case BdfKind::Always: return "always";
        case BdfKind::Eventually: return "eventually";
        case BdfKind::Until: return "until";
        case BdfKind::OccNext: return "occ-next";
        case BdfKind::ApplyNext: return "apply-next";
        case BdfKind::Terminated: return "terminated";
        default: return "?";
    }
}

std::string literal_text(const Literal& l) {
    // 0-ary atoms print bare so "(p 0.4)" style alternatives survive a round trip.
    std::string atom = l.atom.args.empty() ? l.atom.predicate : l.atom.str();
    return l.positive ? atom : "(not " + atom + ")";
}

}  // namespace

std::string to_string(const Bdf& f) {
    switch (f->kind) {
        case BdfKind::True: return "(true)";
        case BdfKind::False: return "(false)";
        case BdfKind::Lit: return literal_text(f->literal);
        case BdfKind::Final: return "(final " + literal_text(f->literal) + ")";
        case BdfKind::Occ:
        case BdfKind::Apply:
        case BdfKind::OccNext:
        case BdfKind::ApplyNext:
        case BdfKind::Terminated: return "(" + keyword(f->kind) + " " + f->first.str() + ")";
        case BdfKind::Before: return "(before " + f->first.str() + " " + f->second.str() + ")";
        case BdfKind::HoldBefore:
        case BdfKind::HoldAfter:
            return "(" + keyword(f->kind) + " " + f->first.str() + " " + literal_text(f->literal) + ")";
        case BdfKind::HoldBetween:
            return "(hold-between " + f->first.str() + " " + literal_text(f->literal) + " " +
                   f->second.str() + ")";
        case BdfKind::Exists:
        case BdfKind::Forall:
            return "(" + keyword(f->kind) + " (" + f->variable + ") " + to_string(f->children.front()) +
                   ")";
        case BdfKind::Monitor: {
            BdfNode raw = *f;
            raw.kind = f->monitored;
            const char* status = f->monitor.status == MonitorStatus::Pending     ? "pending"
                                 : f->monitor.status == MonitorStatus::Satisfied ? "satisfied"
                                                                                 : "falsified";
            return "(monitor " + std::string(status) + " " +
                   to_string(std::make_shared<const BdfNode>(std::move(raw))) + ")";
        }
        default: {
            std::string out = "(" + keyword(f->kind);
            for (const auto& c : f->children) out += " " + to_string(c);
            return out + ")";
        }
    }
}

std::size_t node_count(const Bdf& f) {
    std::size_t n = 1;
    for (const auto& c : f->children) n += node_count(c);
    return n;
}

Bdf substitute(const Bdf& f, const Substitution& sigma) {
    if (sigma.empty()) return f;
    BdfNode n = *f;
    n.literal = substitute(f->literal, sigma);
    n.first = substitute(f->first, sigma);
    n.second = substitute(f->second, sigma);
    const Substitution* inner = &sigma;
    Substitution shadowed;
    if (f->kind == BdfKind::Exists || f->kind == BdfKind::Forall) {
        shadowed = sigma;
        shadowed.erase(f->variable);
        inner = &shadowed;
    }
    for (auto& c : n.children) c = substitute(c, *inner);
    return std::make_shared<const BdfNode>(std::move(n));
}

Bdf ground(const Bdf& f, const std::vector<std::string>& constants) {
    if (f->kind == BdfKind::Exists || f->kind == BdfKind::Forall) {
        std::vector<Bdf> parts;
        for (const auto& c : constants) {
            parts.push_back(ground(substitute(f->children.front(), {{f->variable, c}}), constants));
        }
        if (parts.empty()) return bdf::constant(f->kind == BdfKind::Forall);
        return f->kind == BdfKind::Exists ? bdf::disj(std::move(parts)) : bdf::conj(std::move(parts));
    }
    if (f->children.empty()) return f;
    BdfNode n = *f;
    for (auto& c : n.children) c = ground(c, constants);
    return std::make_shared<const BdfNode>(std::move(n));
}

void Apf::validate() const {
    if (alternatives.empty()) throw std::invalid_argument("APF needs at least one alternative");
    if (alternatives.front().value != Weight::best()) {
        throw std::invalid_argument("first APF value must be 0, got " + alternatives.front().value.str());
    }
    for (std::size_t i = 1; i < alternatives.size(); ++i) {
        if (!(alternatives[i - 1].value < alternatives[i].value)) {
            throw std::invalid_argument("APF values must be strictly increasing: " +
                                        alternatives[i - 1].value.str() + " then " +
                                        alternatives[i].value.str());
        }
    }
}

namespace gpf {

Gpf atomic(Apf apf) {
    apf.validate();
    GpfNode n;
    n.kind = GpfKind::Atomic;
    n.apf = std::move(apf);
    return std::make_shared<const GpfNode>(std::move(n));
}

Gpf from_bdf(Bdf f) { return atomic(Apf{{Alternative{std::move(f), Weight::best()}}}); }

Gpf conditional(Bdf condition, Gpf body) {
    GpfNode n;
    n.kind = GpfKind::Conditional;
    n.condition = std::move(condition);
    n.children.push_back(std::move(body));
    return std::make_shared<const GpfNode>(std::move(n));
}

namespace {
Gpf combine(GpfKind kind, std::vector<Gpf> parts) {
    if (parts.size() < 2) throw std::invalid_argument("general conjunction/disjunction needs two parts");
    GpfNode n;
    n.kind = kind;
    n.children = std::move(parts);
    return std::make_shared<const GpfNode>(std::move(n));
}
}  // namespace

Gpf conjunction(std::vector<Gpf> parts) { return combine(GpfKind::Conjunction, std::move(parts)); }
Gpf disjunction(std::vector<Gpf> parts) { return combine(GpfKind::Disjunction, std::move(parts)); }

}  // namespace gpf

bool structurally_equal(const Gpf& a, const Gpf& b) {
    if (a->kind != b->kind || a->children.size() != b->children.size()) return false;
    switch (a->kind) {
        case GpfKind::Atomic: {
            const auto& x = a->apf.alternatives;
            const auto& y = b->apf.alternatives;
            if (x.size() != y.size()) return false;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i].value != y[i].value || !structurally_equal(x[i].formula, y[i].formula)) return false;
            }
            return true;
        }
        case GpfKind::Conditional:
            if (!structurally_equal(a->condition, b->condition)) return false;
            break;
        default: break;
    }
    for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!structurally_equal(a->children[i], b->children[i])) return false;
    }
    return true;
}

std::string to_string(const Gpf& g) {
    switch (g->kind) {
        case GpfKind::Atomic: {
            const auto& alts = g->apf.alternatives;
            if (alts.size() == 1) return to_string(alts.front().formula);
            std::string out = "(>>";
            for (const auto& a : alts) out += " (" + to_string(a.formula) + " " + a.value.str() + ")";
            return out + ")";
        }
        case GpfKind::Conditional:
            return "(if " + to_string(g->condition) + " " + to_string(g->children.front()) + ")";
        case GpfKind::Conjunction:
        case GpfKind::Disjunction: {
            std::string out = g->kind == GpfKind::Conjunction ? "(&!" : "(|!";
            for (const auto& c : g->children) out += " " + to_string(c);
            return out + ")";
        }
    }
    return {};
}

Gpf ground(const Gpf& g, const std::vector<std::string>& constants) {
    GpfNode n = *g;
    for (auto& alt : n.apf.alternatives) alt.formula = ground(alt.formula, constants);
    if (n.condition) n.condition = ground(n.condition, constants);
    for (auto& c : n.children) c = ground(c, constants);
    return std::make_shared<const GpfNode>(std::move(n));
}

}  // namespace htnpref
