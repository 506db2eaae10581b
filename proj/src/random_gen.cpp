#include "htnpref/random_gen.hpp"

#include "htnpref/oracle.hpp"
#include "htnpref/parser.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

namespace htnpref {

std::set<Construct> all_constructs() {
    std::set<Construct> out;
    for (int c = 0; c <= static_cast<int>(Construct::GeneralDisjunction); ++c) out.insert(static_cast<Construct>(c));
    return out;
}

void GenConfig::validate() const {
    auto check = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("GenConfig: ") + what);
    };
    check(num_operators >= 2 && num_operators <= 6, "num_operators must be in 2..6");
    check(num_methods >= 2 && num_methods <= 8, "num_methods must be in 2..8");
    check(max_subtasks >= 1 && max_subtasks <= 3, "max_subtasks must be in 1..3");
    check(max_depth >= 1 && max_depth <= 4, "max_depth must be in 1..4");
    check(num_constants >= 2 && num_constants <= 5, "num_constants must be in 2..5");
    check(preference_budget >= 1 && preference_budget <= 25, "preference_budget must be in 1..25");
    check(max_plans >= 1, "max_plans must be positive");
    check(!constructs.empty(), "constructs must not be empty");
}

std::size_t preference_size(const Gpf& g) {
    std::size_t n = 1;
    switch (g->kind) {
        case GpfKind::Atomic:
            for (const auto& alt : g->apf.alternatives) n += node_count(alt.formula);
            break;
        case GpfKind::Conditional: n += node_count(g->condition) + preference_size(g->children.front()); break;
        case GpfKind::Conjunction:
        case GpfKind::Disjunction:
            for (const auto& c : g->children) n += preference_size(c);
            break;
    }
    return n;
}

namespace {

class Generator {
public:
    explicit Generator(const GenConfig& c) : c_(c), rng_(c.seed) {}

    Problem draw(int attempt) {
        const std::string name = "rand-" + std::to_string(c_.seed) + (attempt ? "-" + std::to_string(attempt) : "");
        Domain d = draw_domain(name);
        auto domain = std::make_shared<const Domain>(parse_domain(print_domain(d), name + ".htn"));
        Problem p = parse_problem(draw_problem_text(*domain, name), domain, name + ".prob");
        p.preference = draw_preference(*domain);
        return p;
    }

private:
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
    }

    std::string constant() { return "c" + std::to_string(uniform(0, c_.num_constants - 1)); }

    Term term_from(const std::vector<std::string>& vars, double var_bias) {
        if (!vars.empty() && chance(var_bias)) return Term{pick(vars)};
        return Term{constant()};
    }

    Atom atom_over(const std::vector<std::string>& vars, double var_bias) {
        Atom a;
        const std::size_t k = static_cast<std::size_t>(uniform(0, static_cast<int>(arity_.size()) - 1));
        a.predicate = "p" + std::to_string(k);
        for (std::size_t i = 0; i < arity_[k]; ++i) a.args.push_back(term_from(vars, var_bias));
        return a;
    }

    Domain draw_domain(const std::string& name) {
        Domain d;
        d.name = name;
        arity_.clear();
        const int num_predicates = uniform(2, 4);
        for (int i = 0; i < num_predicates; ++i) arity_.push_back(static_cast<std::size_t>(uniform(0, 2)));
        for (std::size_t i = 0; i < arity_.size(); ++i) d.declared_predicates["p" + std::to_string(i)] = arity_[i];

        std::vector<Task> operator_tasks;
        for (int i = 0; i < c_.num_operators; ++i) {
            Operator op;
            op.name = "o" + std::to_string(i);
            std::vector<std::string> params;
            const int np = uniform(0, 2);
            for (int j = 0; j < np; ++j) params.push_back("?x" + std::to_string(j));
            for (const auto& v : params) op.params.push_back(Term{v});
            const int npre = uniform(0, 1);
            for (int j = 0; j < npre; ++j) op.pre.push_back(Literal{atom_over(params, 0.7), !chance(0.25)});
            const int nadd = uniform(0, 2);
            for (int j = 0; j < nadd; ++j) op.add.push_back(atom_over(params, 0.7));
            const int ndel = uniform(0, 1);
            for (int j = 0; j < ndel; ++j) op.del.push_back(atom_over(params, 0.7));
            operator_tasks.push_back(Task{op.name, op.params, true});
            d.operators.push_back(std::move(op));
        }

        // Nonprimitive tasks in layers 1..max_depth; t0 is the root, on the top layer.
        const int num_tasks = std::max(1, std::min(c_.num_methods / 3 + 1, c_.max_depth * 2));
        struct Head {
            std::string symbol;
            std::size_t arity;
            int layer;
        };
        std::vector<Head> tasks;
        for (int i = 0; i < num_tasks; ++i) {
            const int layer = i == 0 ? c_.max_depth : 1 + (i - 1) % c_.max_depth;
            tasks.push_back({"t" + std::to_string(i), static_cast<std::size_t>(uniform(0, 1)), layer});
        }
        root_arity_ = tasks.front().arity;

        std::vector<std::size_t> owners;
        for (std::size_t i = 0; i < tasks.size(); ++i) owners.push_back(i);
        while (static_cast<int>(owners.size()) < c_.num_methods) {
            owners.push_back(static_cast<std::size_t>(uniform(0, num_tasks - 1)));
        }
        for (std::size_t m = 0; m < owners.size(); ++m) {
            const Head& h = tasks[owners[m]];
            Method method;
            method.name = "m" + std::to_string(m);
            method.head.symbol = h.symbol;
            std::vector<std::string> bound;
            for (std::size_t j = 0; j < h.arity; ++j) {
                bound.push_back("?h" + std::to_string(j));
                method.head.args.push_back(Term{bound.back()});
            }
            // The first method of each task is usually unconditional, which keeps
            // most instances solvable.
            const bool first = m < tasks.size();
            const int npos = first && chance(0.7) ? 0 : uniform(0, 2);
            std::vector<std::string> fresh = bound;
            for (int j = 0; j < npos; ++j) {
                const std::string v = "?v" + std::to_string(j);
                fresh.push_back(v);
                method.pre.push_back(Literal{atom_over(fresh, 0.8), true});
            }
            for (const auto& l : method.pre) {
                for (const auto& t : l.atom.args) {
                    if (t.is_variable() && std::find(bound.begin(), bound.end(), t.name) == bound.end()) {
                        bound.push_back(t.name);
                    }
                }
            }
            if (!first && chance(0.2)) method.pre.push_back(Literal{atom_over(bound, 0.6), false});

            std::vector<Task> lower;
            for (const auto& t : tasks) {
                if (t.layer < h.layer) lower.push_back(Task{t.symbol, std::vector<Term>(t.arity), false});
            }
            const int ns = uniform(1, c_.max_subtasks);
            for (int j = 0; j < ns; ++j) {
                Task sub = !lower.empty() && chance(0.6) ? pick(lower) : pick(operator_tasks);
                for (auto& a : sub.args) a = term_from(bound, 0.7);
                method.subtasks.push_back(std::move(sub));
            }
            d.methods.push_back(std::move(method));
        }
        return d;
    }

    std::string draw_problem_text(const Domain& d, const std::string& name) {
        std::string init;
        for (std::size_t k = 0; k < arity_.size(); ++k) {
            std::size_t tuples = 1;
            for (std::size_t i = 0; i < arity_[k]; ++i) tuples *= static_cast<std::size_t>(c_.num_constants);
            for (std::size_t t = 0; t < tuples; ++t) {
                if (!chance(0.6)) continue;
                init += " (p" + std::to_string(k);
                std::size_t rest = t;
                for (std::size_t i = 0; i < arity_[k]; ++i) {
                    init += " c" + std::to_string(rest % static_cast<std::size_t>(c_.num_constants));
                    rest /= static_cast<std::size_t>(c_.num_constants);
                }
                init += ")";
            }
        }
        std::string root = "(t0";
        for (std::size_t i = 0; i < root_arity_; ++i) root += " " + constant();
        root += ")";
        return "(problem " + name + " :domain " + d.name + " :init (" + init + ") :tasks (" + root + "))";
    }

    // Preference drawing. Sizes are checked after the fact and the whole
    // preference is redrawn when over budget.
    Gpf draw_preference(const Domain& d) {
        domain_ = &d;
        for (int tries = 0; tries < 1000; ++tries) {
            Gpf g = draw_gpf(c_.preference_budget, 2);
            if (preference_size(g) <= static_cast<std::size_t>(c_.preference_budget)) return g;
        }
        return gpf::from_bdf(bdf::truth());
    }

    bool allowed(Construct k) const { return c_.constructs.count(k) != 0; }

    Gpf draw_gpf(int budget, int depth) {
        std::vector<Construct> kinds;
        if (allowed(Construct::Apf)) kinds.push_back(Construct::Apf);
        if (depth > 0 && budget >= 4) {
            for (Construct k : {Construct::Conditional, Construct::GeneralConjunction, Construct::GeneralDisjunction}) {
                if (allowed(k)) kinds.push_back(k);
            }
        }
        if (kinds.empty()) return gpf::from_bdf(draw_bdf(std::max(1, budget - 1), {}));
        const Construct k = pick(kinds);
        switch (k) {
            case Construct::Conditional: {
                const int cond = uniform(1, std::max(1, (budget - 1) / 2));
                return gpf::conditional(draw_bdf(cond, {}), draw_gpf(budget - 1 - cond, depth - 1));
            }
            case Construct::GeneralConjunction:
            case Construct::GeneralDisjunction: {
                const int left = (budget - 1) / 2;
                std::vector<Gpf> parts{draw_gpf(left, depth - 1), draw_gpf(budget - 1 - left, depth - 1)};
                return k == Construct::GeneralConjunction ? gpf::conjunction(std::move(parts))
                                                          : gpf::disjunction(std::move(parts));
            }
            default: break;
        }
        const int n = std::min(uniform(1, 3), std::max(1, budget - 1));
        std::vector<int> values{0};
        std::vector<int> pool{1, 2, 3, 4, 5, 6, 7, 8, 9};
        std::shuffle(pool.begin(), pool.end(), rng_);
        std::vector<int> chosen(pool.begin(), pool.begin() + (n - 1));
        std::sort(chosen.begin(), chosen.end());
        values.insert(values.end(), chosen.begin(), chosen.end());
        Apf apf;
        const int share = std::max(1, (budget - 1) / n);
        for (int v : values) {
            apf.alternatives.push_back({draw_bdf(share, {}), Weight(Rational(v, 10))});
        }
        return gpf::atomic(std::move(apf));
    }

    UnitPattern draw_pattern(bool methods_only, const std::vector<std::string>& scope) {
        const Domain& d = *domain_;
        UnitPattern x;
        std::size_t arity = 0;
        if (methods_only) {
            const Method& m = d.methods[static_cast<std::size_t>(uniform(0, static_cast<int>(d.methods.size()) - 1))];
            x.kind = UnitKind::Method;
            x.symbol = m.name;
            arity = m.params.size();
        } else if (chance(0.5)) {
            const Operator& op =
                d.operators[static_cast<std::size_t>(uniform(0, static_cast<int>(d.operators.size()) - 1))];
            x.kind = UnitKind::Operator;
            x.symbol = op.name;
            arity = op.params.size();
        } else {
            const Method& m = d.methods[static_cast<std::size_t>(uniform(0, static_cast<int>(d.methods.size()) - 1))];
            x.kind = UnitKind::Task;
            x.symbol = m.head.symbol;
            arity = m.head.args.size();
        }
        const int n = uniform(0, static_cast<int>(arity));
        for (int i = 0; i < n; ++i) x.args.push_back(term_from(scope, 0.5));
        return x;
    }

    Literal draw_literal(const std::vector<std::string>& scope) { return Literal{atom_over(scope, 0.5), true}; }

    Bdf draw_leaf(const std::vector<std::string>& scope) {
        std::vector<Construct> leaves;
        for (Construct k : {Construct::Literal, Construct::Final, Construct::Occ, Construct::Apply, Construct::Before,
                            Construct::HoldBefore, Construct::HoldAfter, Construct::HoldBetween}) {
            if (allowed(k)) leaves.push_back(k);
        }
        if (leaves.empty()) return bdf::constant(chance(0.5));
        switch (pick(leaves)) {
            case Construct::Literal: return bdf::lit(draw_literal(scope));
            case Construct::Final: return bdf::final_(draw_literal(scope));
            case Construct::Occ: return bdf::occ(draw_pattern(false, scope));
            case Construct::Apply: return bdf::apply(draw_pattern(true, scope));
            case Construct::Before: return bdf::before(draw_pattern(false, scope), draw_pattern(false, scope));
            case Construct::HoldBefore: return bdf::hold_before(draw_pattern(false, scope), draw_literal(scope));
            case Construct::HoldAfter: return bdf::hold_after(draw_pattern(false, scope), draw_literal(scope));
            default:
                return bdf::hold_between(draw_pattern(false, scope), draw_literal(scope),
                                         draw_pattern(false, scope));
        }
    }

    Bdf draw_bdf(int budget, std::vector<std::string> scope) {
        std::vector<Construct> inner;
        if (budget >= 2) {
            for (Construct k : {Construct::Not, Construct::Next, Construct::Always, Construct::Eventually,
                                Construct::Exists, Construct::Forall}) {
                if (allowed(k)) inner.push_back(k);
            }
        }
        if (budget >= 3) {
            for (Construct k : {Construct::And, Construct::Or, Construct::Until}) {
                if (allowed(k)) inner.push_back(k);
            }
        }
        if (inner.empty() || chance(0.35)) return draw_leaf(scope);
        const Construct k = pick(inner);
        switch (k) {
            case Construct::Not: return bdf::negate(draw_bdf(budget - 1, scope));
            case Construct::Next: return bdf::next(draw_bdf(budget - 1, scope));
            case Construct::Always: return bdf::always(draw_bdf(budget - 1, scope));
            case Construct::Eventually: return bdf::eventually(draw_bdf(budget - 1, scope));
            case Construct::Exists:
            case Construct::Forall: {
                const std::string v = "?q" + std::to_string(scope.size());
                scope.push_back(v);
                Bdf body = draw_bdf(budget - 1, scope);
                return k == Construct::Exists ? bdf::exists(v, body) : bdf::forall(v, body);
            }
            default: break;
        }
        const int left = uniform(1, budget - 2);
        Bdf a = draw_bdf(left, scope);
        Bdf b = draw_bdf(budget - 1 - left, scope);
        if (k == Construct::Until) return bdf::until(a, b);
        return k == Construct::And ? bdf::conj({a, b}) : bdf::disj({a, b});
    }

    const GenConfig& c_;
    std::mt19937_64 rng_;
    std::vector<std::size_t> arity_;
    std::size_t root_arity_ = 0;
    const Domain* domain_ = nullptr;
};

}  // namespace

GeneratedInstance generate(const GenConfig& config) {
    config.validate();
    Generator gen(config);
    EnumerationCaps caps;
    caps.max_plans = config.max_plans;
    caps.max_seconds = 60;
    for (int attempt = 0; attempt < 200; ++attempt) {
        GeneratedInstance out;
        out.problem = gen.draw(attempt);
        out.redraws = attempt;
        Problem counting = out.problem;
        counting.preference = gpf::from_bdf(bdf::truth());
        try {
            out.plan_count = enumerate_all(counting, caps).plan_count;
        } catch (const CapExceeded&) {
            continue;
        }
        out.expected_solvable = out.plan_count > 0;
        return out;
    }
    throw std::runtime_error("generate: no instance within the plan cap for seed " + std::to_string(config.seed));
}

void write_instance(const Problem& problem, const std::string& dir, const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write = [&](const std::string& file, const std::string& text) {
        std::ofstream out(fs::path(dir) / file);
        if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / file).string());
        out << text;
    };
    write(name + ".htn", print_domain(*problem.domain));
    write(name + "-1.prob", print_problem(problem));
    write(name + "-1.pref", print_preference(problem.preference));
}

}  // namespace htnpref
