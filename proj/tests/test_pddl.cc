#include "pocl/pddl.h"

#include "support.h"

#include <gtest/gtest.h>

#include <map>

using namespace pocl;
using namespace pocl::pddl;
using pocl::testing::data;

namespace {

const char *kMinimal = R"(
(define (domain tiny)
  (:requirements :strips)
  (:predicates (p) (q))
  (:action flip :parameters () :precondition (p) :effect (and (q) (not (p)))))
)";

DomainAst gripper_domain() {
    return parse_domain(read_file(data("gripper/domain.pddl")), "gripper/domain.pddl");
}

int count_schema_groundings(const GroundTask &task, const std::string &schema) {
    int n = 0;
    for (const auto &a : task.actions)
        if (a.name.rfind("(" + schema + " ", 0) == 0 || a.name == "(" + schema + ")") ++n;
    return n;
}

} // namespace

TEST(ParseDomain, MinimalDomainHasOneSchema) {
    DomainAst d = parse_domain(kMinimal);
    EXPECT_EQ(d.name, "tiny");
    ASSERT_EQ(d.actions.size(), 1u);
    EXPECT_EQ(d.actions[0].name, "flip");
    EXPECT_TRUE(d.actions[0].params.empty());
    EXPECT_EQ(d.actions[0].add.size(), 1u);
    EXPECT_EQ(d.actions[0].del.size(), 1u);
}

TEST(ParseDomain, MinimalDomainRoundTrips) {
    DomainAst d = parse_domain(kMinimal);
    EXPECT_EQ(parse_domain(to_pddl(d)), d);
}

TEST(ParseDomain, DurativeActionsRejected) {
    const char *text = "(define (domain t)\n  (:requirements :strips :durative-actions)\n"
                       "  (:predicates (p)))";
    try {
        parse_domain(text, "t.pddl");
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.file(), "t.pddl");
        EXPECT_EQ(e.line(), 2);
        EXPECT_NE(e.message().find("durative-actions"), std::string::npos);
        EXPECT_EQ(std::string(e.what()).rfind("t.pddl:2:", 0), 0u);
    }
}

TEST(ParseDomain, GripperHasThreeSchemas) {
    DomainAst d = gripper_domain();
    ASSERT_EQ(d.actions.size(), 3u);
    EXPECT_EQ(d.actions[0].name, "move");
    EXPECT_EQ(d.actions[1].name, "pick");
    EXPECT_EQ(d.actions[2].name, "drop");
    EXPECT_EQ(d.actions[0].not_equal.size(), 1u);
}

TEST(ParseDomain, EveryFixtureRoundTrips) {
    for (const char *dom : {"gripper", "logistics", "blocks"}) {
        DomainAst d = parse_domain(read_file(data(std::string(dom) + "/domain.pddl")));
        EXPECT_EQ(parse_domain(to_pddl(d)), d) << dom;
    }
    for (const auto &[dom, prob] : pocl::testing::all_fixtures()) {
        DomainAst d = parse_domain(read_file(data(dom + "/domain.pddl")));
        ProblemAst p = parse_problem(read_file(data(dom + "/" + prob + ".pddl")), d);
        EXPECT_EQ(parse_problem(to_pddl(p), d), p) << dom << "/" << prob;
    }
}

TEST(ParseDomain, NameCaseIsFolded) {
    DomainAst d = parse_domain("(DEFINE (DOMAIN Tiny) (:REQUIREMENTS :STRIPS) (:PREDICATES (P)))");
    EXPECT_EQ(d.name, "tiny");
    EXPECT_EQ(d.predicates.at(0).name, "p");
}

TEST(ParseDomain, ErrorsCarryPosition) {
    try {
        parse_domain("(define (domain t)\n (:predicates (p))\n (:action a :parameters ()\n"
                     "   :precondition (r) :effect (p)))",
                     "x.pddl");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 4);
        EXPECT_GT(e.column(), 0);
        EXPECT_NE(e.message().find("undeclared predicate"), std::string::npos);
    }
    EXPECT_THROW(parse_domain("(define (domain t) (:predicates (p))"), ParseError);
    EXPECT_THROW(parse_domain("(define (domain t) (:predicates (p)) (:action a :parameters (?x) "
                              ":precondition (p ?x) :effect (p)))"),
                 ParseError);  // arity
    EXPECT_THROW(parse_domain("(define (domain t) (:predicates (p ?x)) (:action a :parameters () "
                              ":precondition (p ?y) :effect ()))"),
                 ParseError);  // unbound
    EXPECT_THROW(parse_domain("(define (domain t) (:predicates (p)) (:action a :parameters () "
                              ":precondition (not (p)) :effect (p)))"),
                 ParseError);  // negative precondition
    EXPECT_THROW(parse_domain("(define (domain t) (:requirements :adl) (:predicates (p)))"),
                 ParseError);
}

TEST(ParseProblem, EmptyGoal) {
    DomainAst d = parse_domain(kMinimal);
    ProblemAst p = parse_problem("(define (problem e) (:domain tiny) (:init (p)) (:goal (and)))", d);
    EXPECT_TRUE(p.goal.empty());
    EXPECT_EQ(p.init.size(), 1u);
}

TEST(ParseProblem, GripperTwoBallsInit) {
    DomainAst d = gripper_domain();
    ProblemAst p = parse_problem(read_file(data("gripper/p02.pddl")), d);
    std::map<std::string, int> by_predicate;
    for (const auto &a : p.init) ++by_predicate[a.predicate];
    EXPECT_EQ(by_predicate["at"], 2);
    EXPECT_EQ(by_predicate["at-robby"], 1);
    EXPECT_EQ(by_predicate["free"], 2);
    EXPECT_EQ(p.init.size(), 5u);
    EXPECT_EQ(p.goal.size(), 2u);
}

TEST(ParseProblem, UndeclaredObjectInGoal) {
    DomainAst d = gripper_domain();
    const char *text = "(define (problem g) (:domain gripper-typed)\n"
                       " (:objects rooma roomb - room ball1 - ball left - gripper)\n"
                       " (:init (at-robby rooma) (at ball1 rooma))\n"
                       " (:goal (at ball7 roomb)))";
    try {
        parse_problem(text, d, "g.pddl");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 4);
        EXPECT_NE(e.message().find("ball7"), std::string::npos);
    }
}

TEST(ParseProblem, WrongDomainName) {
    DomainAst d = gripper_domain();
    EXPECT_THROW(parse_problem("(define (problem g) (:domain other) (:objects) (:init) (:goal (and)))", d),
                 ParseError);
}

TEST(ReadFile, MissingFileIsParseError) {
    EXPECT_THROW(read_file(data("nope.pddl")), ParseError);
}

TEST(Ground, GripperTwoBallCounts) {
    GroundTask t = pocl::testing::fixture("gripper", "p02");
    // move: ordered pairs of distinct rooms; pick/drop: ball x room x gripper.
    EXPECT_EQ(count_schema_groundings(t, "move"), 2 * 1);
    EXPECT_EQ(count_schema_groundings(t, "pick"), 2 * 2 * 2);
    EXPECT_EQ(count_schema_groundings(t, "drop"), 2 * 2 * 2);
    EXPECT_EQ(t.num_actions(), 18u);
    EXPECT_EQ(t.goal.size(), 2u);
    EXPECT_EQ(t.init.size(), 5u);
}

TEST(Ground, ZeroParameterSchemaGroundsOnce) {
    DomainAst d = parse_domain(kMinimal);
    ProblemAst p = parse_problem("(define (problem e) (:domain tiny) (:init (p)) (:goal (q)))", d);
    GroundTask t = ground(d, p);
    ASSERT_EQ(t.num_actions(), 1u);
    EXPECT_EQ(t.actions[0].name, "(flip)");
}

TEST(Ground, ActionsAreWellFormed) {
    for (const auto &[dom, prob] : pocl::testing::all_fixtures()) {
        GroundTask t = pocl::testing::fixture(dom, prob);
        for (const auto &a : t.actions) {
            EXPECT_TRUE(std::is_sorted(a.pre.begin(), a.pre.end()));
            EXPECT_TRUE(std::is_sorted(a.add.begin(), a.add.end()));
            for (FactId f : a.del) EXPECT_FALSE(contains(a.add, f));
            for (FactId f : a.add)
                EXPECT_NE(std::find(t.achievers[f].begin(), t.achievers[f].end(), a.id),
                          t.achievers[f].end());
        }
    }
}

TEST(Ground, BindingCountMatchesBruteForce) {
    // Independent count: every tuple of objects whose types fit, minus the
    // tuples violating an (in)equality constraint.
    for (const auto &[dom, prob] : pocl::testing::all_fixtures()) {
        DomainAst d = parse_domain(read_file(data(dom + "/domain.pddl")));
        ProblemAst p = parse_problem(read_file(data(dom + "/" + prob + ".pddl")), d);
        GroundTask t = ground(d, p);
        std::vector<TypedName> objects = d.constants;
        objects.insert(objects.end(), p.objects.begin(), p.objects.end());
        std::size_t expected = 0;
        for (const auto &s : d.actions) {
            std::size_t k = s.params.size();
            std::size_t total = 1;
            for (std::size_t i = 0; i < k; ++i) total *= objects.size();
            for (std::size_t code = 0; code < total; ++code) {
                std::map<std::string, std::string> bind;
                std::size_t c = code;
                bool ok = true;
                for (std::size_t i = 0; i < k; ++i) {
                    const TypedName &o = objects[c % objects.size()];
                    c /= objects.size();
                    if (!d.is_subtype(o.type, s.params[i].type)) ok = false;
                    bind[s.params[i].name] = o.name;
                }
                auto val = [&](const std::string &x) { return x[0] == '?' ? bind[x] : x; };
                for (const auto &[x, y] : s.equal) ok = ok && val(x) == val(y);
                for (const auto &[x, y] : s.not_equal) ok = ok && val(x) != val(y);
                if (ok) ++expected;
            }
        }
        EXPECT_EQ(t.num_actions(), expected) << dom << "/" << prob;
    }
}

TEST(Ground, Deterministic) {
    GroundTask a = pocl::testing::fixture("logistics", "p03");
    GroundTask b = pocl::testing::fixture("logistics", "p03");
    EXPECT_EQ(a.facts, b.facts);
    ASSERT_EQ(a.num_actions(), b.num_actions());
    for (std::size_t i = 0; i < a.num_actions(); ++i) {
        EXPECT_EQ(a.actions[i].name, b.actions[i].name);
        EXPECT_EQ(a.actions[i].pre, b.actions[i].pre);
        EXPECT_EQ(a.actions[i].add, b.actions[i].add);
        EXPECT_EQ(a.actions[i].del, b.actions[i].del);
    }
}

TEST(Ground, PruneUnreachableKeepsReachable) {
    DomainAst d = parse_domain(read_file(data("blocks/domain.pddl")));
    ProblemAst p = parse_problem(read_file(data("blocks/sussman.pddl")), d);
    GroundTask full = ground(d, p);
    GroundTask pruned = ground(d, p, {true});
    EXPECT_LE(pruned.num_actions(), full.num_actions());
    EXPECT_GT(pruned.num_actions(), 0u);
}
