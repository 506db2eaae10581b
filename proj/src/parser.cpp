#include "htnpref/parser.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace htnpref {

std::vector<std::string> Problem::constants() const {
    std::set<std::string> out;
    if (domain) {
        auto dc = domain->constants();
        out.insert(dc.begin(), dc.end());
    }
    for (const auto& fact : init.facts) {
        for (const auto& t : fact.args) out.insert(t.name);
    }
    for (const auto& t : network.tasks) {
        for (const auto& a : t.args) {
            if (!a.is_variable()) out.insert(a.name);
        }
    }
    return {out.begin(), out.end()};
}

Gpf Problem::ground_preference() const { return ground(preference, constants()); }

namespace {

using Kind = ParseErrorKind;

class Parser {
public:
    explicit Parser(std::string file) : file_(std::move(file)) {}

    [[noreturn]] void fail(Kind kind, const SExpr& at, const std::string& msg) const {
        throw ParseError(kind, file_, at.line, at.column, msg, at.str());
    }

    const SExpr& single_form(std::string_view text, const char* what) const {
        forms_ = read_sexprs(text, file_);
        if (forms_.size() != 1) {
            int line = forms_.size() > 1 ? forms_[1].line : 1;
            int col = forms_.size() > 1 ? forms_[1].column : 1;
            throw ParseError(Kind::Syntax, file_, line, col,
                             std::string("expected exactly one ") + what + " form",
                             forms_.size() > 1 ? forms_[1].str() : "");
        }
        return forms_.front();
    }

    const SExpr& list(const SExpr& e, const char* what) const {
        if (!e.is_list()) fail(Kind::Syntax, e, std::string("expected a list for ") + what);
        return e;
    }

    const std::string& symbol(const SExpr& e, const char* what) const {
        if (!e.is_symbol()) fail(Kind::Syntax, e, std::string("expected a symbol for ") + what);
        return e.text;
    }

    Term term(const SExpr& e) const {
        if (e.kind != SExpr::Kind::Symbol && e.kind != SExpr::Kind::Number) {
            fail(Kind::Syntax, e, "expected a term");
        }
        if (e.text == "?") fail(Kind::Syntax, e, "empty variable name");
        return Term{e.text};
    }

    /// (pred term*), predicate arity recorded or checked.
    Atom atom(const SExpr& e) {
        if (!e.is_list() || e.items.empty()) fail(Kind::Syntax, e, "expected an atom (pred term*)");
        Atom a{symbol(e.items[0], "predicate"), {}};
        if (a.predicate == "not") fail(Kind::Syntax, e, "negation where an atom is required");
        for (std::size_t i = 1; i < e.items.size(); ++i) a.args.push_back(term(e.items[i]));
        note_predicate(a, e);
        return a;
    }

    Literal literal(const SExpr& e) {
        if (e.is_list() && e.items.size() == 2 && e.items[0].is_symbol("not")) {
            return Literal{atom(e.items[1]), false};
        }
        return Literal{atom(e), true};
    }

    void note_predicate(const Atom& a, const SExpr& at) {
        auto [it, inserted] = arity_.emplace(a.predicate, a.args.size());
        if (!inserted && it->second != a.args.size()) {
            fail(Kind::ArityMismatch, at,
                 "predicate " + a.predicate + " has arity " + std::to_string(it->second));
        }
        if (!known_predicates_.empty() || strict_predicates_) {
            if (!known_predicates_.count(a.predicate)) {
                fail(Kind::UnknownPredicate, at, "unknown predicate " + a.predicate);
            }
        }
    }

    Task task(const SExpr& e) const {
        if (!e.is_list() || e.items.empty()) fail(Kind::Syntax, e, "expected a task (name term*)");
        Task t;
        t.symbol = symbol(e.items[0], "task name");
        if (t.symbol.size() > 1 && t.symbol.front() == '!') {
            t.symbol.erase(0, 1);
            t.primitive = true;
        }
        for (std::size_t i = 1; i < e.items.size(); ++i) t.args.push_back(term(e.items[i]));
        return t;
    }

    /// Classifies `t` against the domain and checks its arity.
    void resolve_task(Task& t, const Domain& d, const SExpr& at) const {
        if (const Operator* op = d.find_operator(t.symbol)) {
            t.primitive = true;
            if (op->params.size() != t.args.size()) {
                fail(Kind::ArityMismatch, at,
                     "operator " + op->name + " takes " + std::to_string(op->params.size()) + " arguments");
            }
            return;
        }
        if (t.primitive) fail(Kind::UnknownTask, at, "unknown operator !" + t.symbol);
        auto it = task_arity_.find(t.symbol);
        if (it == task_arity_.end()) fail(Kind::UnknownTask, at, "unknown task " + t.symbol);
        if (it->second != t.args.size()) {
            fail(Kind::ArityMismatch, at,
                 "task " + t.symbol + " takes " + std::to_string(it->second) + " arguments");
        }
    }

    Domain domain(std::string_view text) {
        const SExpr& top = list(single_form(text, "(domain ...)"), "domain");
        if (top.items.size() < 2 || !top.items[0].is_symbol("domain")) {
            fail(Kind::Syntax, top, "expected (domain NAME ...)");
        }
        Domain d;
        d.name = symbol(top.items[1], "domain name");
        std::vector<const SExpr*> method_forms;
        for (std::size_t i = 2; i < top.items.size(); ++i) {
            const SExpr& item = top.items[i];
            if (!item.is_list() || item.items.empty()) fail(Kind::Syntax, item, "expected a domain section");
            const SExpr& head = item.items[0];
            if (head.is_symbol(":predicates")) {
                for (std::size_t k = 1; k < item.items.size(); ++k) {
                    Atom a = atom(item.items[k]);
                    for (const auto& t : a.args) {
                        if (!t.is_variable()) fail(Kind::Syntax, item.items[k], "predicate declaration with a constant");
                    }
                    if (!d.declared_predicates.emplace(a.predicate, a.args.size()).second) {
                        fail(Kind::DuplicateName, item.items[k], "predicate declared twice: " + a.predicate);
                    }
                }
            } else if (head.is_symbol(":operator")) {
                Operator op = operator_form(item);
                if (d.find_operator(op.name)) fail(Kind::DuplicateName, item, "duplicate operator " + op.name);
                d.operators.push_back(std::move(op));
            } else if (head.is_symbol(":method")) {
                d.methods.push_back(method_form(item));
                method_forms.push_back(&item);
            } else {
                fail(Kind::Syntax, head, "unknown domain section");
            }
        }
        for (std::size_t i = 0; i < d.methods.size(); ++i) {
            const Method& m = d.methods[i];
            if (d.find_operator(m.head.symbol)) {
                fail(Kind::DuplicateName, *method_forms[i], "method head names an operator: " + m.head.symbol);
            }
            auto [it, inserted] = task_arity_.emplace(m.head.symbol, m.head.args.size());
            if (!inserted && it->second != m.head.args.size()) {
                fail(Kind::ArityMismatch, method_forms[i]->items[1],
                     "task " + m.head.symbol + " has arity " + std::to_string(it->second));
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (d.methods[j].name == m.name) {
                    fail(Kind::DuplicateName, *method_forms[i], "duplicate method name " + m.name);
                }
            }
        }
        for (std::size_t i = 0; i < d.methods.size(); ++i) finish_method(d.methods[i], d, *method_forms[i]);
        return d;
    }

    Operator operator_form(const SExpr& e) {
        if (e.items.size() < 2) fail(Kind::Syntax, e, "expected (:operator (!name ?v*) ...)");
        const SExpr& sig = e.items[1];
        if (!sig.is_list() || sig.items.empty()) fail(Kind::Syntax, sig, "expected (!name ?v*)");
        Operator op;
        op.name = symbol(sig.items[0], "operator name");
        if (op.name.size() < 2 || op.name.front() != '!') fail(Kind::Syntax, sig.items[0], "operator names start with '!'");
        op.name.erase(0, 1);
        std::set<std::string> params;
        for (std::size_t i = 1; i < sig.items.size(); ++i) {
            Term t = term(sig.items[i]);
            if (!t.is_variable()) fail(Kind::Syntax, sig.items[i], "operator parameters must be variables");
            if (!params.insert(t.name).second) fail(Kind::DuplicateName, sig.items[i], "repeated parameter");
            op.params.push_back(t);
        }
        std::set<std::string> seen;
        for (std::size_t i = 2; i < e.items.size(); i += 2) {
            const std::string& key = symbol(e.items[i], "operator keyword");
            if (i + 1 >= e.items.size()) fail(Kind::Syntax, e.items[i], "missing value");
            if (!seen.insert(key).second) fail(Kind::Syntax, e.items[i], "repeated keyword");
            const SExpr& value = list(e.items[i + 1], key.c_str());
            if (key == ":pre") {
                for (const auto& l : value.items) op.pre.push_back(literal(l));
            } else if (key == ":del") {
                for (const auto& a : value.items) op.del.push_back(atom(a));
            } else if (key == ":add") {
                for (const auto& a : value.items) op.add.push_back(atom(a));
            } else {
                fail(Kind::Syntax, e.items[i], "unknown operator keyword");
            }
        }
        auto check = [&](const Atom& a) {
            for (const auto& t : a.args) {
                if (t.is_variable() && !params.count(t.name)) {
                    fail(Kind::UnboundVariable, e, "variable " + t.name + " of " + a.str() + " is not a parameter");
                }
            }
        };
        for (const auto& l : op.pre) check(l.atom);
        for (const auto& a : op.add) check(a);
        for (const auto& a : op.del) check(a);
        return op;
    }

    Method method_form(const SExpr& e) {
        if (e.items.size() < 2) fail(Kind::Syntax, e, "expected (:method (head term*) ...)");
        Method m;
        m.head = task(e.items[1]);
        if (m.head.primitive) fail(Kind::Syntax, e.items[1], "method head must be nonprimitive");
        bool has_name = false;
        bool has_tasks = false;
        std::vector<std::pair<Literal, const SExpr*>> before;
        std::set<std::string> seen;
        for (std::size_t i = 2; i < e.items.size(); ++i) {
            const std::string& key = symbol(e.items[i], "method keyword");
            if (!seen.insert(key).second) fail(Kind::Syntax, e.items[i], "repeated keyword");
            if (key == ":unordered") {
                m.unordered = true;
                continue;
            }
            if (i + 1 >= e.items.size()) fail(Kind::Syntax, e.items[i], "missing value");
            const SExpr& value = e.items[++i];
            if (key == ":name") {
                m.name = symbol(value, "method name");
                has_name = true;
            } else if (key == ":pre") {
                for (const auto& l : list(value, ":pre").items) m.pre.push_back(literal(l));
            } else if (key == ":tasks") {
                for (const auto& t : list(value, ":tasks").items) m.subtasks.push_back(task(t));
                has_tasks = true;
            } else if (key == ":before") {
                for (const auto& pair : list(value, ":before").items) {
                    if (!pair.is_list() || pair.items.size() != 2 || pair.items[1].kind != SExpr::Kind::Number) {
                        fail(Kind::Syntax, pair, "expected (literal subtask-index)");
                    }
                    before.emplace_back(literal(pair.items[0]), &pair.items[1]);
                }
            } else {
                fail(Kind::Syntax, e.items[i - 1], "unknown method keyword");
            }
        }
        if (!has_name) fail(Kind::Syntax, e, "method without :name");
        if (!has_tasks) fail(Kind::Syntax, e, "method without :tasks");
        for (auto& [lit, idx] : before) {
            auto r = parse_decimal(idx->text);
            if (!r || r->denominator() != 1 || r->numerator() < 0 ||
                r->numerator() >= static_cast<std::int64_t>(m.subtasks.size())) {
                fail(Kind::Syntax, *idx, "before-constraint index out of range");
            }
            m.before.push_back(BeforeConstraint{lit, static_cast<std::size_t>(r->numerator())});
        }
        return m;
    }

    void finish_method(Method& m, const Domain& d, const SExpr& e) const {
        std::set<std::string> bound;
        auto bind = [&](const Term& t) {
            if (t.is_variable() && bound.insert(t.name).second) m.params.push_back(t);
        };
        for (const auto& t : m.head.args) bind(t);
        for (const auto& l : m.pre) {
            if (l.positive) {
                for (const auto& t : l.atom.args) bind(t);
            }
        }
        auto require = [&](const std::vector<Term>& terms, const std::string& where) {
            for (const auto& t : terms) {
                if (t.is_variable() && !bound.count(t.name)) {
                    fail(Kind::UnboundVariable, e, "variable " + t.name + " in " + where + " of method " + m.name +
                                                       " is not bound by the head or a positive precondition");
                }
            }
        };
        for (const auto& l : m.pre) {
            if (!l.positive) require(l.atom.args, l.str());
        }
        for (const auto& b : m.before) require(b.literal.atom.args, b.literal.str());
        const SExpr* tasks_form = nullptr;
        for (std::size_t i = 2; i + 1 < e.items.size(); ++i) {
            if (e.items[i].is_symbol(":tasks")) tasks_form = &e.items[i + 1];
        }
        for (std::size_t i = 0; i < m.subtasks.size(); ++i) {
            const SExpr& at = tasks_form ? tasks_form->items[i] : e;
            resolve_task(m.subtasks[i], d, at);
            require(m.subtasks[i].args, m.subtasks[i].str());
        }
    }

    Problem problem(std::string_view text, std::shared_ptr<const Domain> d) {
        const SExpr& top = list(single_form(text, "(problem ...)"), "problem");
        if (top.items.size() < 2 || !top.items[0].is_symbol("problem")) {
            fail(Kind::Syntax, top, "expected (problem NAME ...)");
        }
        for (const auto& m : d->methods) task_arity_.emplace(m.head.symbol, m.head.args.size());
        for (const auto& [name, arity] : d->predicates()) {
            known_predicates_.insert(name);
            arity_.emplace(name, arity);
        }
        strict_predicates_ = true;

        Problem p;
        p.name = symbol(top.items[1], "problem name");
        p.domain = d;
        std::set<std::string> seen;
        for (std::size_t i = 2; i < top.items.size(); ++i) {
            const std::string& key = symbol(top.items[i], "problem keyword");
            if (!seen.insert(key).second) fail(Kind::Syntax, top.items[i], "repeated keyword");
            if (key == ":unordered") {
                p.network.unordered = true;
                continue;
            }
            if (i + 1 >= top.items.size()) fail(Kind::Syntax, top.items[i], "missing value");
            const SExpr& value = top.items[++i];
            if (key == ":domain") {
                if (symbol(value, "domain name") != d->name) {
                    fail(Kind::Syntax, value, "problem is for domain " + value.text + ", not " + d->name);
                }
            } else if (key == ":init") {
                for (const auto& f : list(value, ":init").items) {
                    Atom a = atom(f);
                    if (!a.is_ground()) fail(Kind::NonGroundInit, f, "initial fact with a variable");
                    p.init.facts.insert(std::move(a));
                }
            } else if (key == ":tasks") {
                for (const auto& t : list(value, ":tasks").items) {
                    Task task_ = task(t);
                    resolve_task(task_, *d, t);
                    if (!task_.is_ground()) fail(Kind::NonGroundInit, t, "root task with a variable");
                    p.network.tasks.push_back(std::move(task_));
                }
            } else {
                fail(Kind::Syntax, top.items[i - 1], "unknown problem keyword");
            }
        }
        return p;
    }

    // Preferences.

    Gpf preference(std::string_view text, const Domain& d) {
        domain_ = &d;
        for (const auto& m : d.methods) task_arity_.emplace(m.head.symbol, m.head.args.size());
        for (const auto& [name, arity] : d.predicates()) {
            known_predicates_.insert(name);
            arity_.emplace(name, arity);
        }
        strict_predicates_ = true;
        return gpf_expr(single_form(text, "preference"));
    }

    Gpf gpf_expr(const SExpr& e) {
        if (e.is_list() && !e.items.empty() && e.items[0].is_symbol()) {
            const std::string& head = e.items[0].text;
            if (head == ">>") return apf_expr(e);
            if (head == "if") {
                if (e.items.size() != 3) fail(Kind::Syntax, e, "expected (if condition preference)");
                Bdf cond = bdf_expr(e.items[1]);
                return gpf::conditional(std::move(cond), gpf_expr(e.items[2]));
            }
            if (head == "&!" || head == "|!") {
                if (e.items.size() < 3) fail(Kind::Syntax, e, head + " needs at least two preferences");
                std::vector<Gpf> parts;
                for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(gpf_expr(e.items[i]));
                return head == "&!" ? gpf::conjunction(std::move(parts)) : gpf::disjunction(std::move(parts));
            }
        }
        return gpf::from_bdf(bdf_expr(e));
    }

    Gpf apf_expr(const SExpr& e) {
        if (e.items.size() < 2) fail(Kind::Syntax, e, "(>> ...) needs at least one alternative");
        std::vector<Weight> values;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            const SExpr& alt = e.items[i];
            if (!alt.is_list() || alt.items.size() != 2 || alt.items[1].kind != SExpr::Kind::Number) {
                fail(Kind::Syntax, alt, "expected (formula value)");
            }
            try {
                values.push_back(parse_weight(alt.items[1].text));
            } catch (const std::invalid_argument& ex) {
                fail(Kind::BadValueOrder, alt.items[1], ex.what());
            }
        }
        if (values.front() != Weight::best()) fail(Kind::BadValueOrder, e.items[1], "first value must be 0");
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (!(values[i - 1] < values[i])) {
                fail(Kind::BadValueOrder, e.items[i + 1], "values must be strictly increasing");
            }
        }
        Apf apf;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            apf.alternatives.push_back(Alternative{bdf_expr(e.items[i].items[0]), values[i - 1]});
        }
        return gpf::atomic(std::move(apf));
    }

    void require_bound(const std::vector<Term>& terms, const SExpr& at) const {
        for (const auto& t : terms) {
            if (t.is_variable() && std::find(scope_.begin(), scope_.end(), t.name) == scope_.end()) {
                fail(Kind::UnboundVariable, at, "free variable " + t.name);
            }
        }
    }

    Literal pref_literal(const SExpr& e) {
        if (e.is_symbol()) {
            Atom a{e.text, {}};
            note_predicate(a, e);
            return Literal{a, true};
        }
        if (e.is_list() && e.items.size() == 2 && e.items[0].is_symbol("not") && e.items[1].is_symbol()) {
            return Literal{pref_literal(e.items[1]).atom, false};
        }
        Literal l = literal(e);
        require_bound(l.atom.args, e);
        return l;
    }

    UnitPattern pattern(const SExpr& e, bool method) {
        if (!e.is_list() || e.items.empty()) fail(Kind::Syntax, e, "expected (name term*)");
        UnitPattern p;
        p.symbol = symbol(e.items[0], "unit name");
        for (std::size_t i = 1; i < e.items.size(); ++i) p.args.push_back(term(e.items[i]));
        require_bound(p.args, e);
        std::size_t arity = 0;
        if (method) {
            const Method* m = domain_->find_method(p.symbol);
            if (!m) fail(Kind::UnknownMethodName, e, "unknown method " + p.symbol);
            p.kind = UnitKind::Method;
            arity = m->params.size();
        } else {
            bool bang = p.symbol.size() > 1 && p.symbol.front() == '!';
            if (bang) p.symbol.erase(0, 1);
            if (const Operator* op = domain_->find_operator(p.symbol)) {
                p.kind = UnitKind::Operator;
                arity = op->params.size();
            } else if (!bang && task_arity_.count(p.symbol)) {
                p.kind = UnitKind::Task;
                arity = task_arity_.at(p.symbol);
            } else {
                fail(Kind::UnknownTask, e, "unknown task or operator " + p.symbol);
            }
        }
        if (p.args.size() > arity) {
            fail(Kind::ArityMismatch, e, p.symbol + " takes " + std::to_string(arity) + " arguments");
        }
        return p;
    }

    void arity(const SExpr& e, std::size_t n) const {
        if (e.items.size() != n + 1) {
            fail(Kind::Syntax, e, e.items[0].text + " takes " + std::to_string(n) + " argument(s)");
        }
    }

    Bdf bdf_expr(const SExpr& e) {
        if (e.is_symbol()) return bdf::lit(pref_literal(e));
        if (!e.is_list() || e.items.empty()) fail(Kind::Syntax, e, "expected a formula");
        if (!e.items[0].is_symbol()) fail(Kind::Syntax, e.items[0], "expected an operator symbol");
        const std::string& head = e.items[0].text;
        if (head == "true" || head == "false") {
            arity(e, 0);
            return bdf::constant(head == "true");
        }
        if (head == "final") {
            arity(e, 1);
            return bdf::final_(pref_literal(e.items[1]));
        }
        if (head == "occ") {
            arity(e, 1);
            return bdf::occ(pattern(e.items[1], false));
        }
        if (head == "apply") {
            arity(e, 1);
            return bdf::apply(pattern(e.items[1], true));
        }
        if (head == "before") {
            arity(e, 2);
            auto t1 = pattern(e.items[1], false);
            return bdf::before(std::move(t1), pattern(e.items[2], false));
        }
        if (head == "hold-before" || head == "hold-after") {
            arity(e, 2);
            auto t = pattern(e.items[1], false);
            Literal f = pref_literal(e.items[2]);
            return head == "hold-before" ? bdf::hold_before(std::move(t), std::move(f))
                                         : bdf::hold_after(std::move(t), std::move(f));
        }
        if (head == "hold-between") {
            arity(e, 3);
            auto t1 = pattern(e.items[1], false);
            Literal f = pref_literal(e.items[2]);
            return bdf::hold_between(std::move(t1), std::move(f), pattern(e.items[3], false));
        }
        if (head == "next" || head == "always" || head == "eventually" || head == "not") {
            arity(e, 1);
            Bdf body = bdf_expr(e.items[1]);
            if (head == "next") return bdf::next(std::move(body));
            if (head == "always") return bdf::always(std::move(body));
            if (head == "eventually") return bdf::eventually(std::move(body));
            return bdf::negate(body);
        }
        if (head == "until") {
            arity(e, 2);
            Bdf lhs = bdf_expr(e.items[1]);
            return bdf::until(std::move(lhs), bdf_expr(e.items[2]));
        }
        if (head == "and" || head == "or") {
            if (e.items.size() < 2) fail(Kind::Syntax, e, head + " needs at least one operand");
            std::vector<Bdf> parts;
            for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(bdf_expr(e.items[i]));
            return head == "and" ? bdf::conj(std::move(parts)) : bdf::disj(std::move(parts));
        }
        if (head == "exists" || head == "forall") {
            arity(e, 2);
            const SExpr& vars = e.items[1];
            if (!vars.is_list() || vars.items.empty()) fail(Kind::Syntax, vars, "expected (?var+)");
            std::vector<std::string> names;
            for (const auto& v : vars.items) {
                Term t = term(v);
                if (!t.is_variable()) fail(Kind::Syntax, v, "quantified name must be a variable");
                if (std::find(scope_.begin(), scope_.end(), t.name) != scope_.end() ||
                    std::find(names.begin(), names.end(), t.name) != names.end()) {
                    fail(Kind::DuplicateName, v, "variable bound twice: " + t.name);
                }
                names.push_back(t.name);
            }
            scope_.insert(scope_.end(), names.begin(), names.end());
            Bdf body = bdf_expr(e.items[2]);
            scope_.resize(scope_.size() - names.size());
            for (auto it = names.rbegin(); it != names.rend(); ++it) {
                body = head == "exists" ? bdf::exists(*it, std::move(body)) : bdf::forall(*it, std::move(body));
            }
            return body;
        }
        return bdf::lit(pref_literal(e));
    }

private:
    std::string file_;
    mutable std::vector<SExpr> forms_;
    std::map<std::string, std::size_t> arity_;
    std::map<std::string, std::size_t> task_arity_;
    std::set<std::string> known_predicates_;
    bool strict_predicates_ = false;
    const Domain* domain_ = nullptr;
    std::vector<std::string> scope_;
};

std::string terms_text(const std::vector<Term>& terms) {
    std::string out;
    for (const auto& t : terms) out += " " + t.name;
    return out;
}

template <class T, class Fn>
std::string joined(const std::vector<T>& xs, Fn&& fn) {
    std::string out = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += " ";
        out += fn(xs[i]);
    }
    return out + ")";
}

}  // namespace

Domain parse_domain(std::string_view text, const std::string& file) { return Parser(file).domain(text); }

Problem parse_problem(std::string_view text, std::shared_ptr<const Domain> domain, const std::string& file) {
    return Parser(file).problem(text, std::move(domain));
}

Gpf parse_preference(std::string_view text, const Domain& domain, const std::string& file) {
    return Parser(file).preference(text, domain);
}

std::string print_domain(const Domain& d) {
    std::ostringstream out;
    out << "(domain " << d.name << "\n";
    if (!d.declared_predicates.empty()) {
        out << "  (:predicates";
        for (const auto& [name, arity] : d.declared_predicates) {
            out << " (" << name;
            for (std::size_t i = 0; i < arity; ++i) out << " ?a" << i;
            out << ")";
        }
        out << ")\n";
    }
    auto lit = [](const Literal& l) { return l.str(); };
    auto atom = [](const Atom& a) { return a.str(); };
    for (const auto& op : d.operators) {
        out << "  (:operator (!" << op.name << terms_text(op.params) << ")\n"
            << "    :pre " << joined(op.pre, lit) << "\n"
            << "    :del " << joined(op.del, atom) << "\n"
            << "    :add " << joined(op.add, atom) << ")\n";
    }
    for (const auto& m : d.methods) {
        out << "  (:method (" << m.head.symbol << terms_text(m.head.args) << ")\n"
            << "    :name " << m.name << "\n"
            << "    :pre " << joined(m.pre, lit) << "\n"
            << "    :tasks " << joined(m.subtasks, [](const Task& t) { return t.str(); });
        if (m.unordered) out << "\n    :unordered";
        if (!m.before.empty()) {
            out << "\n    :before " << joined(m.before, [](const BeforeConstraint& b) {
                return "(" + b.literal.str() + " " + std::to_string(b.subtask) + ")";
            });
        }
        out << ")\n";
    }
    out << ")\n";
    return out.str();
}

std::string print_problem(const Problem& p) {
    std::ostringstream out;
    std::vector<Atom> facts(p.init.facts.begin(), p.init.facts.end());
    out << "(problem " << p.name << "\n"
        << "  :domain " << (p.domain ? p.domain->name : "unknown") << "\n"
        << "  :init " << joined(facts, [](const Atom& a) { return a.str(); }) << "\n"
        << "  :tasks " << joined(p.network.tasks, [](const Task& t) { return t.str(); });
    if (p.network.unordered) out << "\n  :unordered";
    out << ")\n";
    return out.str();
}

std::string print_preference(const Gpf& preference) { return to_string(preference) + "\n"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Problem load_problem(const std::string& domain_path, const std::string& problem_path,
                     const std::string& preference_path) {
    auto domain = std::make_shared<const Domain>(parse_domain(read_file(domain_path), domain_path));
    Problem p = parse_problem(read_file(problem_path), domain, problem_path);
    p.preference = parse_preference(read_file(preference_path), *domain, preference_path);
    return p;
}

}  // namespace htnpref
