#pragma once

#include "htnpref/model.hpp"
#include "htnpref/weight.hpp"

#include <memory>
#include <string>
#include <vector>

namespace htnpref {

/// Names a task, operator or method occurrence inside a formula. Arguments
/// match an instance positionally as a prefix, so `(book-car)` matches every
/// book-car occurrence and `(book-car c1)` only those whose first argument is c1.
struct UnitPattern {
    UnitKind kind = UnitKind::Operator;
    std::string symbol;
    std::vector<Term> args;

    bool matches(const UnitInstance& unit) const;
    std::string str() const;

    friend bool operator==(const UnitPattern&, const UnitPattern&) = default;
};

UnitPattern substitute(const UnitPattern& p, const Substitution& sigma);

enum class BdfKind {
    True,
    False,
    Lit,
    Final,
    Occ,
    Apply,
    Before,
    HoldBefore,
    HoldAfter,
    HoldBetween,
    Not,
    And,
    Or,
    Exists,
    Forall,
    Next,
    Always,
    Eventually,
    Until,
    // Only produced by progression.
    OccNext,
    ApplyNext,
    Terminated,
    Monitor,
};

enum class MonitorStatus { Pending, Satisfied, Falsified };

/// Incremental evaluation state for before / hold-before / hold-after /
/// hold-between. `armed` means a witness s1 has been seen (for hold-between,
/// one whose fluent run is still unbroken); `fluent_before` is the fluent's
/// value in the previous state, needed by hold-before.
struct MonitorState {
    MonitorStatus status = MonitorStatus::Pending;
    bool armed = false;
    bool fluent_before = false;

    friend bool operator==(const MonitorState&, const MonitorState&) = default;
};

struct BdfNode;
using Bdf = std::shared_ptr<const BdfNode>;

/// Memo slot for structural_hash; a copied node starts with an empty slot.
struct HashMemo {
    mutable std::size_t value = 0;

    HashMemo() = default;
    HashMemo(const HashMemo&) {}
    HashMemo& operator=(const HashMemo&) {
        value = 0;
        return *this;
    }
};

struct BdfNode {
    BdfKind kind = BdfKind::True;
    Literal literal;          // Lit, Final, hold-*
    UnitPattern first;        // occ/apply/before/hold-*/occ-next/apply-next/terminated
    UnitPattern second;       // before, hold-between
    std::string variable;     // exists/forall
    std::vector<Bdf> children;
    BdfKind monitored = BdfKind::Before;  // Monitor only
    MonitorState monitor;                 // Monitor only
    HashMemo hash;
};

namespace bdf {

Bdf truth();
Bdf falsity();
Bdf constant(bool value);
Bdf lit(Literal l);
Bdf final_(Literal l);
Bdf occ(UnitPattern x);
Bdf apply(UnitPattern p);
Bdf before(UnitPattern t1, UnitPattern t2);
Bdf hold_before(UnitPattern t, Literal f);
Bdf hold_after(UnitPattern t, Literal f);
Bdf hold_between(UnitPattern t1, Literal f, UnitPattern t2);
/// Negation pushed inward where the grammar has a dual (and/or, always/
/// eventually, exists/forall, literals, final); kept as a Not node otherwise.
Bdf negate(const Bdf& f);
Bdf raw_not(Bdf f);
Bdf conj(std::vector<Bdf> fs);
Bdf disj(std::vector<Bdf> fs);
Bdf exists(std::string var, Bdf body);
Bdf forall(std::string var, Bdf body);
Bdf next(Bdf f);
Bdf always(Bdf f);
Bdf eventually(Bdf f);
Bdf until(Bdf lhs, Bdf rhs);
Bdf occ_next(UnitPattern x);
Bdf apply_next(UnitPattern p);
Bdf terminated(UnitPattern x);
Bdf monitor(const BdfNode& construct, MonitorState state);

}  // namespace bdf

bool structurally_equal(const Bdf& a, const Bdf& b);
/// Consistent with structurally_equal; memoized per node.
std::size_t structural_hash(const Bdf& f);
std::string to_string(const Bdf& f);
std::size_t node_count(const Bdf& f);

/// Substitutes free variables; quantifiers shadow their own variable.
Bdf substitute(const Bdf& f, const Substitution& sigma);
/// Expands exists/forall into or/and over `constants`.
Bdf ground(const Bdf& f, const std::vector<std::string>& constants);

struct Alternative {
    Bdf formula;
    Weight value;
};

/// phi_0[v_0] >> phi_1[v_1] >> ... with v_0 = 0 and strictly increasing values.
struct Apf {
    std::vector<Alternative> alternatives;

    /// Throws std::invalid_argument if the value ordering is violated.
    void validate() const;
};

enum class GpfKind { Atomic, Conditional, Conjunction, Disjunction };

struct GpfNode;
using Gpf = std::shared_ptr<const GpfNode>;

struct GpfNode {
    GpfKind kind = GpfKind::Atomic;
    Apf apf;                    // Atomic
    Bdf condition;              // Conditional
    std::vector<Gpf> children;  // Conditional: one; Conjunction/Disjunction: two or more
};

namespace gpf {

Gpf atomic(Apf apf);
/// A bare BDF is the single-alternative APF phi[0].
Gpf from_bdf(Bdf f);
Gpf conditional(Bdf condition, Gpf body);
Gpf conjunction(std::vector<Gpf> parts);
Gpf disjunction(std::vector<Gpf> parts);

}  // namespace gpf

bool structurally_equal(const Gpf& a, const Gpf& b);
std::string to_string(const Gpf& g);
Gpf ground(const Gpf& g, const std::vector<std::string>& constants);

/// Calls `fn` on every BDF slot of the GPF in document order: each APF
/// alternative and each conditional's condition. Progression and bounds
/// both rely on this order.
template <class Fn>
void for_each_slot(const Gpf& g, Fn&& fn) {
    switch (g->kind) {
        case GpfKind::Atomic:
            for (const auto& alt : g->apf.alternatives) fn(alt.formula);
            break;
        case GpfKind::Conditional:
            fn(g->condition);
            for_each_slot(g->children.front(), fn);
            break;
        case GpfKind::Conjunction:
        case GpfKind::Disjunction:
            for (const auto& c : g->children) for_each_slot(c, fn);
            break;
    }
}

}  // namespace htnpref
