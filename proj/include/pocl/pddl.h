#ifndef POCL_PDDL_H
#define POCL_PDDL_H

#include "pocl/ground_task.h"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

/*
  STRIPS subset of PDDL: :strips, :typing and :equality. Everything is
  lower-cased while tokenizing, so names compare case-insensitively.
*/
namespace pocl::pddl {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, int line, int column, const std::string &message);

    const std::string &file() const { return file_; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string &message() const { return message_; }

private:
    std::string file_;
    int line_;
    int column_;
    std::string message_;
};

struct TypedName {
    std::string name;
    std::string type = "object";
    bool operator==(const TypedName &) const = default;
};

// Arguments are either variables ("?x") or object/constant names.
struct Atom {
    std::string predicate;
    std::vector<std::string> args;
    bool operator==(const Atom &) const = default;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> params;
    bool operator==(const PredicateDecl &) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Atom> precondition;
    std::vector<std::pair<std::string, std::string>> equal;
    std::vector<std::pair<std::string, std::string>> not_equal;
    std::vector<Atom> add;
    std::vector<Atom> del;
    bool operator==(const ActionSchema &) const = default;
};

struct DomainAst {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypedName> types;      // name with its parent type
    std::vector<TypedName> constants;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> actions;
    bool operator==(const DomainAst &) const = default;

    const PredicateDecl *find_predicate(const std::string &name) const;
    bool is_subtype(const std::string &type, const std::string &ancestor) const;
};

struct ProblemAst {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    std::vector<Atom> init;
    std::vector<Atom> goal;
    bool operator==(const ProblemAst &) const = default;
};

DomainAst parse_domain(std::string_view text, const std::string &file = "<domain>");

// The domain is needed to report undeclared objects and predicates.
ProblemAst parse_problem(std::string_view text, const DomainAst &domain,
                         const std::string &file = "<problem>");

std::string to_pddl(const DomainAst &domain);
std::string to_pddl(const ProblemAst &problem);

struct GroundOptions {
    // Drop actions whose preconditions are unreachable under delete relaxation.
    bool prune_unreachable = false;
};

GroundTask ground(const DomainAst &domain, const ProblemAst &problem,
                  const GroundOptions &options = {});

std::string read_file(const std::string &path);

GroundTask load_task(const std::string &domain_path, const std::string &problem_path,
                     const GroundOptions &options = {});

} // namespace pocl::pddl

#endif
