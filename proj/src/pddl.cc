#include "pocl/pddl.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pocl::pddl {

ParseError::ParseError(std::string file, int line, int column, const std::string &message)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      file_(std::move(file)),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 1;
    int column = 1;
};

class Reader {
public:
    Reader(std::string_view text, const std::string &file) : text_(text), file_(file) {}

    SExpr read_toplevel() {
        skip_blank();
        if (pos_ >= text_.size())
            fail(line_, col_, "unexpected end of input");
        SExpr e = read();
        skip_blank();
        if (pos_ < text_.size())
            fail(line_, col_, "trailing input after top-level expression");
        return e;
    }

    [[noreturn]] void fail(int line, int col, const std::string &msg) const {
        throw ParseError(file_, line, col, msg);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_blank();
        if (pos_ >= text_.size())
            fail(line_, col_, "unexpected end of input; missing ')'");
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = text_[pos_];
        if (c == ')')
            fail(line_, col_, "unexpected ')'");
        if (c == '(') {
            e.is_list = true;
            advance();
            while (true) {
                skip_blank();
                if (pos_ >= text_.size())
                    fail(e.line, e.column, "unbalanced '(': missing ')'");
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';')
                break;
            e.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
            advance();
        }
        return e;
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(const Reader &reader) : reader_(reader) {}

    [[noreturn]] void fail(const SExpr &at, const std::string &msg) const {
        reader_.fail(at.line, at.column, msg);
    }

    const std::string &expect_atom(const SExpr &e, const char *what) const {
        if (e.is_list || e.atom.empty())
            fail(e, std::string("expected ") + what);
        return e.atom;
    }

    void expect_list(const SExpr &e, const char *what) const {
        if (!e.is_list)
            fail(e, std::string("expected ") + what);
    }

    void expect_head(const SExpr &e, const char *head) const {
        if (!e.is_list || e.items.empty() || e.items[0].is_list || e.items[0].atom != head)
            fail(e, std::string("expected (") + head + " ...)");
    }

    // "a b - t c - u d" -> [(a,t), (b,t), (c,u), (d,object)]
    std::vector<TypedName> typed_list(const std::vector<SExpr> &items, std::size_t begin,
                                      bool variables) const {
        std::vector<TypedName> out;
        std::size_t pending = 0;
        for (std::size_t i = begin; i < items.size(); ++i) {
            const SExpr &e = items[i];
            if (e.is_list) {
                if (!e.items.empty() && !e.items[0].is_list && e.items[0].atom == "either")
                    fail(e, "unsupported type expression 'either'");
                fail(e, "expected a name in typed list");
            }
            if (e.atom == "-") {
                if (i + 1 >= items.size())
                    fail(e, "missing type after '-'");
                if (pending == 0)
                    fail(e, "type annotation without names");
                const SExpr &t = items[++i];
                if (t.is_list)
                    fail(t, "unsupported type expression 'either'");
                for (std::size_t k = out.size() - pending; k < out.size(); ++k)
                    out[k].type = t.atom;
                pending = 0;
                continue;
            }
            if (variables && e.atom[0] != '?')
                fail(e, "expected variable, got '" + e.atom + "'");
            if (!variables && e.atom[0] == '?')
                fail(e, "unexpected variable '" + e.atom + "'");
            out.push_back({e.atom, "object"});
            ++pending;
        }
        return out;
    }

    Atom atom_of(const SExpr &e) const {
        expect_list(e, "atom");
        if (e.items.empty())
            fail(e, "empty atom");
        Atom a;
        a.predicate = expect_atom(e.items[0], "predicate name");
        for (std::size_t i = 1; i < e.items.size(); ++i)
            a.args.push_back(expect_atom(e.items[i], "term"));
        return a;
    }

    // Flattens (and ...) and returns the conjuncts.
    void conjuncts(const SExpr &e, std::vector<const SExpr *> &out) const {
        expect_list(e, "formula");
        if (!e.items.empty() && !e.items[0].is_list && e.items[0].atom == "and") {
            for (std::size_t i = 1; i < e.items.size(); ++i)
                conjuncts(e.items[i], out);
        } else if (!e.items.empty()) {
            out.push_back(&e);
        }
    }

    static bool is_head(const SExpr &e, const char *head) {
        return e.is_list && !e.items.empty() && !e.items[0].is_list && e.items[0].atom == head;
    }

private:
    const Reader &reader_;
};

const std::set<std::string> kSupportedRequirements = {":strips", ":typing", ":equality"};

void check_atom(const Parser &p, const SExpr &where, const Atom &a, const DomainAst &d) {
    const PredicateDecl *decl = d.find_predicate(a.predicate);
    if (!decl)
        p.fail(where, "undeclared predicate '" + a.predicate + "'");
    if (decl->params.size() != a.args.size())
        p.fail(where, "predicate '" + a.predicate + "' expects " +
                          std::to_string(decl->params.size()) + " arguments, got " +
                          std::to_string(a.args.size()));
}

void check_term(const Parser &p, const SExpr &where, const std::string &term,
                const ActionSchema &s, const DomainAst &d) {
    if (term[0] == '?') {
        for (const auto &param : s.params)
            if (param.name == term) return;
        p.fail(where, "unbound variable '" + term + "' in action '" + s.name + "'");
    }
    for (const auto &c : d.constants)
        if (c.name == term) return;
    p.fail(where, "undeclared constant '" + term + "' in action '" + s.name + "'");
}

ActionSchema parse_action(const Parser &p, const SExpr &e, const DomainAst &d) {
    ActionSchema s;
    if (e.items.size() < 2)
        p.fail(e, "action without name");
    s.name = p.expect_atom(e.items[1], "action name");
    const SExpr *pre = nullptr;
    const SExpr *eff = nullptr;
    for (std::size_t i = 2; i < e.items.size(); ++i) {
        const std::string &key = p.expect_atom(e.items[i], "action keyword");
        if (i + 1 >= e.items.size())
            p.fail(e.items[i], "missing value for " + key);
        const SExpr &val = e.items[++i];
        if (key == ":parameters") {
            p.expect_list(val, "parameter list");
            s.params = p.typed_list(val.items, 0, true);
        } else if (key == ":precondition") {
            pre = &val;
        } else if (key == ":effect") {
            eff = &val;
        } else {
            p.fail(e.items[i - 1], "unsupported action keyword '" + key + "'");
        }
    }
    std::set<std::string> seen;
    for (const auto &param : s.params) {
        if (!seen.insert(param.name).second)
            p.fail(e, "duplicate parameter '" + param.name + "' in action '" + s.name + "'");
    }
    auto check_all = [&](const SExpr &where, const Atom &a) {
        for (const auto &t : a.args) check_term(p, where, t, s, d);
    };
    if (pre) {
        std::vector<const SExpr *> parts;
        p.conjuncts(*pre, parts);
        for (const SExpr *c : parts) {
            if (Parser::is_head(*c, "not")) {
                if (c->items.size() != 2 || !Parser::is_head(c->items[1], "="))
                    p.fail(*c, "negative precondition is not STRIPS (action '" + s.name + "')");
                Atom eq = p.atom_of(c->items[1]);
                if (eq.args.size() != 2)
                    p.fail(c->items[1], "'=' expects 2 arguments");
                check_all(*c, eq);
                s.not_equal.emplace_back(eq.args[0], eq.args[1]);
            } else if (Parser::is_head(*c, "=")) {
                Atom eq = p.atom_of(*c);
                if (eq.args.size() != 2)
                    p.fail(*c, "'=' expects 2 arguments");
                check_all(*c, eq);
                s.equal.emplace_back(eq.args[0], eq.args[1]);
            } else if (Parser::is_head(*c, "or") || Parser::is_head(*c, "imply") ||
                       Parser::is_head(*c, "forall") || Parser::is_head(*c, "exists")) {
                p.fail(*c, "unsupported precondition connective '" + c->items[0].atom + "'");
            } else {
                Atom a = p.atom_of(*c);
                check_atom(p, *c, a, d);
                check_all(*c, a);
                s.precondition.push_back(std::move(a));
            }
        }
    }
    if (eff) {
        std::vector<const SExpr *> parts;
        p.conjuncts(*eff, parts);
        for (const SExpr *c : parts) {
            if (Parser::is_head(*c, "not")) {
                if (c->items.size() != 2)
                    p.fail(*c, "malformed negative effect");
                Atom a = p.atom_of(c->items[1]);
                check_atom(p, *c, a, d);
                check_all(*c, a);
                s.del.push_back(std::move(a));
            } else if (Parser::is_head(*c, "when") || Parser::is_head(*c, "forall") ||
                       Parser::is_head(*c, "increase")) {
                p.fail(*c, "unsupported effect '" + c->items[0].atom + "'");
            } else {
                Atom a = p.atom_of(*c);
                check_atom(p, *c, a, d);
                check_all(*c, a);
                s.add.push_back(std::move(a));
            }
        }
    }
    return s;
}

} // namespace

const PredicateDecl *DomainAst::find_predicate(const std::string &pred) const {
    for (const auto &decl : predicates)
        if (decl.name == pred) return &decl;
    return nullptr;
}

bool DomainAst::is_subtype(const std::string &type, const std::string &ancestor) const {
    if (ancestor == "object") return true;
    std::string cur = type;
    for (std::size_t guard = 0; guard <= types.size(); ++guard) {
        if (cur == ancestor) return true;
        auto it = std::find_if(types.begin(), types.end(),
                               [&](const TypedName &t) { return t.name == cur; });
        if (it == types.end() || it->type == cur) return false;
        cur = it->type;
    }
    return false;
}

DomainAst parse_domain(std::string_view text, const std::string &file) {
    Reader reader(text, file);
    SExpr root = reader.read_toplevel();
    Parser p(reader);
    p.expect_head(root, "define");
    if (root.items.size() < 2)
        p.fail(root, "missing (domain <name>)");
    const SExpr &header = root.items[1];
    p.expect_head(header, "domain");
    if (header.items.size() != 2)
        p.fail(header, "expected (domain <name>)");

    DomainAst d;
    d.name = p.expect_atom(header.items[1], "domain name");
    std::vector<const SExpr *> action_nodes;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr &sec = root.items[i];
        p.expect_list(sec, "domain section");
        if (sec.items.empty())
            p.fail(sec, "empty section");
        const std::string &key = p.expect_atom(sec.items[0], "section keyword");
        if (key == ":requirements") {
            for (std::size_t k = 1; k < sec.items.size(); ++k) {
                const std::string &r = p.expect_atom(sec.items[k], "requirement");
                if (!kSupportedRequirements.count(r))
                    p.fail(sec.items[k], "unsupported requirement '" + r + "'");
                d.requirements.push_back(r);
            }
        } else if (key == ":types") {
            d.types = p.typed_list(sec.items, 1, false);
        } else if (key == ":constants") {
            d.constants = p.typed_list(sec.items, 1, false);
        } else if (key == ":predicates") {
            for (std::size_t k = 1; k < sec.items.size(); ++k) {
                const SExpr &pe = sec.items[k];
                p.expect_list(pe, "predicate declaration");
                if (pe.items.empty())
                    p.fail(pe, "empty predicate declaration");
                PredicateDecl decl;
                decl.name = p.expect_atom(pe.items[0], "predicate name");
                decl.params = p.typed_list(pe.items, 1, true);
                d.predicates.push_back(std::move(decl));
            }
        } else if (key == ":action") {
            action_nodes.push_back(&sec);
        } else {
            p.fail(sec.items[0], "unsupported domain section '" + key + "'");
        }
    }
    for (const SExpr *a : action_nodes) d.actions.push_back(parse_action(p, *a, d));
    return d;
}

ProblemAst parse_problem(std::string_view text, const DomainAst &domain, const std::string &file) {
    Reader reader(text, file);
    SExpr root = reader.read_toplevel();
    Parser p(reader);
    p.expect_head(root, "define");
    if (root.items.size() < 2)
        p.fail(root, "missing (problem <name>)");
    const SExpr &header = root.items[1];
    p.expect_head(header, "problem");
    if (header.items.size() != 2)
        p.fail(header, "expected (problem <name>)");

    ProblemAst pr;
    pr.name = p.expect_atom(header.items[1], "problem name");
    const SExpr *init = nullptr;
    const SExpr *goal = nullptr;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr &sec = root.items[i];
        p.expect_list(sec, "problem section");
        if (sec.items.empty())
            p.fail(sec, "empty section");
        const std::string &key = p.expect_atom(sec.items[0], "section keyword");
        if (key == ":domain") {
            if (sec.items.size() != 2)
                p.fail(sec, "expected (:domain <name>)");
            pr.domain_name = p.expect_atom(sec.items[1], "domain name");
            if (pr.domain_name != domain.name)
                p.fail(sec.items[1], "problem is for domain '" + pr.domain_name +
                                         "', but domain '" + domain.name + "' was loaded");
        } else if (key == ":objects") {
            pr.objects = p.typed_list(sec.items, 1, false);
        } else if (key == ":init") {
            init = &sec;
        } else if (key == ":goal") {
            goal = &sec;
        } else if (key == ":requirements") {
            for (std::size_t k = 1; k < sec.items.size(); ++k) {
                const std::string &r = p.expect_atom(sec.items[k], "requirement");
                if (!kSupportedRequirements.count(r))
                    p.fail(sec.items[k], "unsupported requirement '" + r + "'");
            }
        } else {
            p.fail(sec.items[0], "unsupported problem section '" + key + "'");
        }
    }
    if (pr.domain_name.empty())
        p.fail(root, "missing (:domain <name>)");

    std::set<std::string> known;
    for (const auto &o : domain.constants) known.insert(o.name);
    for (const auto &o : pr.objects) known.insert(o.name);
    auto ground_atom = [&](const SExpr &e) {
        Atom a = p.atom_of(e);
        check_atom(p, e, a, domain);
        for (std::size_t k = 0; k < a.args.size(); ++k)
            if (!known.count(a.args[k]))
                p.fail(e.items[k + 1], "undeclared object '" + a.args[k] + "'");
        return a;
    };
    if (init) {
        for (std::size_t k = 1; k < init->items.size(); ++k)
            pr.init.push_back(ground_atom(init->items[k]));
    }
    if (goal) {
        if (goal->items.size() != 2)
            p.fail(*goal, "expected (:goal <formula>)");
        std::vector<const SExpr *> parts;
        p.conjuncts(goal->items[1], parts);
        for (const SExpr *c : parts) {
            if (Parser::is_head(*c, "not") || Parser::is_head(*c, "or"))
                p.fail(*c, "goal must be a conjunction of positive atoms");
            pr.goal.push_back(ground_atom(*c));
        }
    }
    return pr;
}

namespace {

void write_typed(std::ostringstream &out, const std::vector<TypedName> &names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ' ';
        out << names[i].name;
        bool last_of_type = i + 1 == names.size() || names[i + 1].type != names[i].type;
        if (last_of_type) out << " - " << names[i].type;
    }
}

void write_atom(std::ostringstream &out, const Atom &a) {
    out << '(' << a.predicate;
    for (const auto &arg : a.args) out << ' ' << arg;
    out << ')';
}

} // namespace

std::string to_pddl(const DomainAst &d) {
    std::ostringstream out;
    out << "(define (domain " << d.name << ")\n";
    if (!d.requirements.empty()) {
        out << "  (:requirements";
        for (const auto &r : d.requirements) out << ' ' << r;
        out << ")\n";
    }
    if (!d.types.empty()) {
        out << "  (:types ";
        write_typed(out, d.types);
        out << ")\n";
    }
    if (!d.constants.empty()) {
        out << "  (:constants ";
        write_typed(out, d.constants);
        out << ")\n";
    }
    out << "  (:predicates";
    for (const auto &p : d.predicates) {
        out << " (" << p.name;
        if (!p.params.empty()) out << ' ';
        write_typed(out, p.params);
        out << ')';
    }
    out << ")\n";
    for (const auto &a : d.actions) {
        out << "  (:action " << a.name << "\n    :parameters (";
        write_typed(out, a.params);
        out << ")\n    :precondition (and";
        for (const auto &atom : a.precondition) {
            out << ' ';
            write_atom(out, atom);
        }
        for (const auto &[x, y] : a.equal) out << " (= " << x << ' ' << y << ')';
        for (const auto &[x, y] : a.not_equal) out << " (not (= " << x << ' ' << y << "))";
        out << ")\n    :effect (and";
        for (const auto &atom : a.add) {
            out << ' ';
            write_atom(out, atom);
        }
        for (const auto &atom : a.del) {
            out << " (not ";
            write_atom(out, atom);
            out << ')';
        }
        out << "))\n";
    }
    out << ")\n";
    return out.str();
}

std::string to_pddl(const ProblemAst &pr) {
    std::ostringstream out;
    out << "(define (problem " << pr.name << ")\n  (:domain " << pr.domain_name << ")\n";
    out << "  (:objects ";
    write_typed(out, pr.objects);
    out << ")\n  (:init";
    for (const auto &a : pr.init) {
        out << ' ';
        write_atom(out, a);
    }
    out << ")\n  (:goal (and";
    for (const auto &a : pr.goal) {
        out << ' ';
        write_atom(out, a);
    }
    out << ")))\n";
    return out.str();
}

namespace {

std::string atom_name(const std::string &pred, const std::vector<std::string> &args) {
    std::string s = "(" + pred;
    for (const auto &a : args) s += " " + a;
    return s + ")";
}

class FactIndex {
public:
    FactId get(const std::string &name) {
        auto [it, inserted] = index_.emplace(name, static_cast<FactId>(names_.size()));
        if (inserted) names_.push_back(name);
        return it->second;
    }
    std::vector<std::string> take() { return std::move(names_); }

private:
    std::unordered_map<std::string, FactId> index_;
    std::vector<std::string> names_;
};

struct RawAction {
    std::string name;
    std::vector<std::string> pre, add, del;
};

GroundTask assemble(const std::string &domain_name, const std::string &problem_name,
                    const std::vector<std::string> &init, const std::vector<std::string> &goal,
                    const std::vector<RawAction> &actions) {
    FactIndex index;
    GroundTask task;
    task.domain_name = domain_name;
    task.problem_name = problem_name;
    for (const auto &f : init) task.init.push_back(index.get(f));
    for (const auto &f : goal) task.goal.push_back(index.get(f));
    for (const auto &raw : actions) {
        GroundAction a;
        a.name = raw.name;
        for (const auto &f : raw.pre) a.pre.push_back(index.get(f));
        for (const auto &f : raw.add) a.add.push_back(index.get(f));
        for (const auto &f : raw.del) a.del.push_back(index.get(f));
        task.actions.push_back(std::move(a));
    }
    task.facts = index.take();
    task.finalize();
    return task;
}

} // namespace

GroundTask ground(const DomainAst &domain, const ProblemAst &problem,
                  const GroundOptions &options) {
    std::vector<TypedName> objects = domain.constants;
    for (const auto &o : problem.objects)
        if (std::none_of(objects.begin(), objects.end(),
                         [&](const TypedName &x) { return x.name == o.name; }))
            objects.push_back(o);

    std::vector<std::string> init, goal;
    for (const auto &a : problem.init) init.push_back(atom_name(a.predicate, a.args));
    for (const auto &a : problem.goal) goal.push_back(atom_name(a.predicate, a.args));

    std::vector<RawAction> actions;
    for (const auto &schema : domain.actions) {
        std::vector<std::vector<const std::string *>> candidates;
        for (const auto &param : schema.params) {
            std::vector<const std::string *> objs;
            for (const auto &o : objects)
                if (domain.is_subtype(o.type, param.type)) objs.push_back(&o.name);
            candidates.push_back(std::move(objs));
        }
        if (std::any_of(candidates.begin(), candidates.end(),
                        [](const auto &c) { return c.empty(); }))
            continue;

        std::vector<std::size_t> choice(schema.params.size(), 0);
        std::map<std::string, const std::string *> binding;
        auto resolve = [&](const std::string &term) -> const std::string & {
            if (term[0] == '?') return *binding.at(term);
            return term;
        };
        auto instantiate = [&](const Atom &a) {
            std::vector<std::string> args;
            for (const auto &t : a.args) args.push_back(resolve(t));
            return atom_name(a.predicate, args);
        };
        bool done = false;
        while (!done) {
            for (std::size_t k = 0; k < choice.size(); ++k)
                binding[schema.params[k].name] = candidates[k][choice[k]];
            bool ok = true;
            for (const auto &[x, y] : schema.equal)
                if (resolve(x) != resolve(y)) ok = false;
            for (const auto &[x, y] : schema.not_equal)
                if (resolve(x) == resolve(y)) ok = false;
            if (ok) {
                RawAction raw;
                std::vector<std::string> args;
                for (std::size_t k = 0; k < choice.size(); ++k)
                    args.push_back(*candidates[k][choice[k]]);
                raw.name = atom_name(schema.name, args);
                for (const auto &a : schema.precondition) raw.pre.push_back(instantiate(a));
                for (const auto &a : schema.add) raw.add.push_back(instantiate(a));
                for (const auto &a : schema.del) raw.del.push_back(instantiate(a));
                actions.push_back(std::move(raw));
            }
            // Odometer over the candidate lists, last parameter fastest.
            done = true;
            for (std::size_t k = choice.size(); k-- > 0;) {
                if (++choice[k] < candidates[k].size()) {
                    done = false;
                    break;
                }
                choice[k] = 0;
            }
        }
    }

    if (options.prune_unreachable) {
        std::set<std::string> reached(init.begin(), init.end());
        std::vector<bool> keep(actions.size(), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < actions.size(); ++i) {
                if (keep[i]) continue;
                const auto &pre = actions[i].pre;
                if (std::all_of(pre.begin(), pre.end(),
                                [&](const std::string &f) { return reached.count(f) > 0; })) {
                    keep[i] = true;
                    changed = true;
                    for (const auto &f : actions[i].add) reached.insert(f);
                }
            }
        }
        std::vector<RawAction> kept;
        for (std::size_t i = 0; i < actions.size(); ++i)
            if (keep[i]) kept.push_back(std::move(actions[i]));
        actions = std::move(kept);
    }
    return assemble(domain.name, problem.name, init, goal, actions);
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path, 0, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GroundTask load_task(const std::string &domain_path, const std::string &problem_path,
                     const GroundOptions &options) {
    DomainAst domain = parse_domain(read_file(domain_path), domain_path);
    ProblemAst problem = parse_problem(read_file(problem_path), domain, problem_path);
    return ground(domain, problem, options);
}

} // namespace pocl::pddl
