#pragma once

#include "htnpref/formula.hpp"
#include "htnpref/model.hpp"

#include <memory>
#include <string>
#include <vector>

namespace htnpref {

struct Problem {
    std::string name;
    std::shared_ptr<const Domain> domain;
    State init;
    TaskNetwork network;
    Gpf preference = gpf::from_bdf(bdf::truth());

    /// Constants of the domain, the initial facts and the root tasks, sorted.
    std::vector<std::string> constants() const;
    /// The preference with quantifiers expanded over constants().
    Gpf ground_preference() const;
};

}  // namespace htnpref
