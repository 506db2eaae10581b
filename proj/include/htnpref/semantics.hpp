#pragma once

#include "htnpref/formula.hpp"
#include "htnpref/model.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace htnpref {

class UnboundVariable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An event "is" X when it is X's operator event or the start of X.
bool event_matches(const Event& e, const UnitPattern& x);
bool executing_match(const State& s, const UnitPattern& x);
bool terminated_match(const State& s, const UnitPattern& x);

/// Truth of `f` over the suffix of `trace` starting at state index `from`
/// (0 <= from <= events.size()). Quantifiers range over `constants`.
bool satisfies(const Trace& trace, std::size_t from, const Bdf& f,
               const std::vector<std::string>& constants = {});

Weight weight_bdf(const Trace& trace, const Bdf& f, const std::vector<std::string>& constants = {});
Weight weight_apf(const Trace& trace, const Apf& apf, const std::vector<std::string>& constants = {});
Weight weight_gpf(const Trace& trace, const Gpf& g, const std::vector<std::string>& constants = {});

/// Weights of the top-level constituents of a general conjunction or
/// disjunction, in document order; a single weight for any other GPF.
std::vector<Weight> constituent_weights(const Trace& trace, const Gpf& g,
                                        const std::vector<std::string>& constants = {});

enum class Ordering { APreferred, BPreferred, Indistinguishable };

/// Compares by GPF weight; on a tie and with `tiebreak_lex`, by the
/// lexicographic order of the constituent weight vectors.
Ordering compare_plans(const Trace& a, const Trace& b, const Gpf& g, bool tiebreak_lex = false,
                       const std::vector<std::string>& constants = {});

}  // namespace htnpref
