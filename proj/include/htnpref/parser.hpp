#pragma once

#include "htnpref/problem.hpp"
#include "htnpref/sexpr.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace htnpref {

Domain parse_domain(std::string_view text, const std::string& file = "<domain>");

/// The returned problem carries the empty preference; see parse_preference.
Problem parse_problem(std::string_view text, std::shared_ptr<const Domain> domain,
                      const std::string& file = "<problem>");

Gpf parse_preference(std::string_view text, const Domain& domain,
                     const std::string& file = "<preference>");

std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);
/// Same text as to_string(Gpf), newline-terminated.
std::string print_preference(const Gpf& preference);

std::string read_file(const std::string& path);

/// Reads and parses a domain/problem/preference triple.
Problem load_problem(const std::string& domain_path, const std::string& problem_path,
                     const std::string& preference_path);

}  // namespace htnpref
