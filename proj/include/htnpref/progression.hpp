#pragma once

#include "htnpref/formula.hpp"
#include "htnpref/model.hpp"

#include <optional>
#include <vector>

namespace htnpref {

struct ProgressionOptions {
    /// And/Or flattening, constant elimination and dedupe after every step.
    bool simplify = true;
    /// Pending before/hold* monitors bound as falsified (opt = pess = the
    /// current-prefix weight) instead of three-valued.
    bool paper_literal_hold = false;
    /// Fault injection for negative-control tests: occ-next resolves inverted.
    bool corrupt_occ_next = false;
};

/// Optimistic / pessimistic satisfaction of a residual formula.
struct Truth {
    bool opt = true;
    bool pess = false;

    friend bool operator==(const Truth&, const Truth&) = default;
};

struct Bounds {
    Weight opt;
    Weight pess;

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// One progression step. `state` is the current state, `last` the event that
/// produced it (null at the initial state). With `terminal` the result is a
/// constant (possibly an unsimplified combination of constants).
Bdf progress(const Bdf& f, const Event* last, const State& state, bool terminal,
             const ProgressionOptions& options = {});

/// Constant propagation through the connectives and temporal operators.
Bdf fold_constants(const Bdf& f);

/// Bounds of a residual produced by a non-terminal step.
Truth bound(const Bdf& f, const ProgressionOptions& options = {});

/// The truth value of a formula built only from constants and decided
/// monitors; nullopt otherwise.
std::optional<bool> constant_value(const Bdf& f);

/// A ground GPF together with the progressed residual of each slot
/// (for_each_slot order).
class ProgressedFormula {
public:
    explicit ProgressedFormula(Gpf ground_preference);

    ProgressedFormula step(const Event* last, const State& state, bool terminal,
                           const ProgressionOptions& options = {}) const;

    bool terminal() const { return terminal_; }
    const Gpf& skeleton() const { return skeleton_; }
    const std::vector<Bdf>& slots() const { return slots_; }
    std::vector<Truth> slot_truths(const ProgressionOptions& options = {}) const;

    /// Bounds on the weight of every completion; exact after a terminal step.
    Bounds bounds(const ProgressionOptions& options = {}) const;
    /// Throws std::logic_error unless the last step was terminal.
    Weight terminal_weight() const;

private:
    Gpf skeleton_;
    std::vector<Bdf> slots_;
    bool terminal_ = false;
};

}  // namespace htnpref
