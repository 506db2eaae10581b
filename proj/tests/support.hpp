#pragma once

#include "htnpref/parser.hpp"
#include "htnpref/problem.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace htnpref::testing {

inline std::string fixture(const std::string& relative) { return std::string(HTNPREF_FIXTURES_DIR) + "/" + relative; }

inline std::shared_ptr<const Domain> load_domain(const std::string& suite) {
    const std::string path = fixture(suite + "/" + suite + ".htn");
    return std::make_shared<const Domain>(parse_domain(read_file(path), path));
}

/// A fixture problem with the preference given inline.
inline Problem with_preference(const std::string& suite, int k, const std::string& preference) {
    auto domain = load_domain(suite);
    const std::string path = fixture(suite + "/" + suite + "-" + std::to_string(k) + ".prob");
    Problem p = parse_problem(read_file(path), domain, path);
    p.preference = parse_preference(preference, *domain);
    return p;
}

inline Problem load_fixture(const std::string& suite, int k) {
    const std::string stem = fixture(suite + "/" + suite);
    const std::string n = std::to_string(k);
    return load_problem(stem + ".htn", stem + "-" + n + ".prob", stem + "-" + n + ".pref");
}

/// Builds event sequences by hand. Operators are grounded against `domain`,
/// so replaying the result checks their preconditions.
class TraceBuilder {
public:
    explicit TraceBuilder(std::shared_ptr<const Domain> domain) : domain_(std::move(domain)) {}

    TraceBuilder& start(UnitKind kind, const std::string& symbol, std::vector<std::string> args = {}) {
        auto u = std::make_shared<const UnitInstance>(UnitInstance{kind, symbol, std::move(args), next_id_++});
        open_.push_back(u);
        events_.push_back(Event::start(u));
        return *this;
    }
    TraceBuilder& task(const std::string& symbol, std::vector<std::string> args = {}) {
        return start(UnitKind::Task, symbol, std::move(args));
    }
    TraceBuilder& method(const std::string& branch, std::vector<std::string> args = {}) {
        return start(UnitKind::Method, branch, std::move(args));
    }
    TraceBuilder& op(const std::string& name, const std::vector<std::string>& args = {}) {
        const Operator* o = domain_->find_operator(name);
        if (!o) throw std::invalid_argument("no operator " + name);
        auto g = ground_operator(*o, args);
        if (!g) throw std::invalid_argument("arity of " + name);
        events_.push_back(Event::apply(std::make_shared<const GroundOperator>(*g), next_id_++));
        return *this;
    }
    /// Ends the innermost open unit.
    TraceBuilder& end(int count = 1) {
        for (int i = 0; i < count; ++i) {
            events_.push_back(Event::end(open_.back()));
            open_.pop_back();
        }
        return *this;
    }

    const std::vector<Event>& events() const { return events_; }
    Trace replay_from(const State& init) const { return htnpref::replay(init, events_); }

private:
    std::shared_ptr<const Domain> domain_;
    std::vector<Event> events_;
    std::vector<UnitRef> open_;
    InstanceId next_id_ = 1;
};

}  // namespace htnpref::testing
