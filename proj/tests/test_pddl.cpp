#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "grlab/domains.hpp"
#include "grlab/pddl.hpp"

using namespace grlab;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("hanoi domain parses with expected structure") {
  DomainModel dom = parse_domain(domain_pddl(DomainKind::Hanoi34));
  CHECK(dom.name == "hanoi34");
  CHECK(dom.predicates.size() == 3);
  CHECK(dom.operators.size() == 1);
  const Operator& mv = dom.operators[0];
  CHECK(mv.name == "move");
  CHECK(mv.params.size() == 3);
  CHECK(mv.pre.size() == 4);
  CHECK(mv.add.size() == 2);
  CHECK(mv.del.size() == 2);
  CHECK(dom.type_ok("disk", "loc"));
  CHECK(dom.type_ok("peg", "loc"));
  CHECK_FALSE(dom.type_ok("loc", "disk"));
}

TEST_CASE("all shipped domains round-trip through the printer") {
  for (DomainKind k : {DomainKind::Hanoi34, DomainKind::EightPuzzle,
                       DomainKind::LightsOut4}) {
    DomainModel dom = parse_domain(domain_pddl(k));
    DomainModel again = parse_domain(print_domain(dom));
    CHECK(print_domain(dom) == print_domain(again));
    CHECK(dom.operators.size() == again.operators.size());
    CHECK(dom.predicates.size() == again.predicates.size());
  }
}

TEST_CASE("problem parsing resolves objects, init, goal and candidates") {
  DomainModel dom = parse_domain(read_file(FIXTURE_DIR "/hanoi34.pddl"));
  ProblemSpec prob =
      parse_problem(read_file(FIXTURE_DIR "/hanoi34_example.pddl"), dom);
  CHECK(prob.name == "hanoi34-example");
  CHECK(prob.domain_name == "hanoi34");
  CHECK(prob.objects.size() == 7);
  CHECK(prob.init.size() == 22);
  CHECK(prob.goal.size() == 7);
  REQUIRE(prob.candidates.size() == 2);
  CHECK(prob.candidates[0].size() == 7);
  ProblemSpec again = parse_problem(print_problem(prob), dom);
  CHECK(print_problem(prob) == print_problem(again));
}

TEST_CASE("lexer lowercases and strips comments") {
  DomainModel dom = parse_domain(
      "(define (domain Mixed) ; a comment\n"
      "  (:requirements :STRIPS)\n"
      "  (:predicates (P ?x))\n"
      "  (:action GO :parameters (?x)\n"
      "    :precondition (and (p ?x)) :effect (and (p ?x))))");
  CHECK(dom.name == "mixed");
  CHECK(dom.operators[0].name == "go");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_domain("(define (domain x)\n  (:predicates (p))\n  (oops");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line >= 3);
  }
}

TEST_CASE("misspelled action keywords are rejected by name") {
  CHECK_THROWS_WITH_AS(
      parse_domain("(define (domain x) (:predicates (p))"
                   " (:action a :parameters ()"
                   " :precondtion (and (p)) :effect (and (p))))"),
      doctest::Contains("unknown action field ':precondtion'"), ParseError);
}

TEST_CASE("unsupported features are rejected") {
  CHECK_THROWS_AS(
      parse_domain("(define (domain x) (:requirements :adl)"
                   " (:predicates (p))"
                   " (:action a :parameters ()"
                   " :precondition (and (p)) :effect (and (p))))"),
      Error);
  // Negative preconditions are outside the subset.
  CHECK_THROWS_AS(
      parse_domain("(define (domain x) (:predicates (p) (q))"
                   " (:action a :parameters ()"
                   " :precondition (and (not (q))) :effect (and (p))))"),
      Error);
}

TEST_CASE("semantic checks on domains") {
  // Undeclared predicate in a precondition.
  CHECK_THROWS_AS(
      parse_domain("(define (domain x) (:predicates (p))"
                   " (:action a :parameters ()"
                   " :precondition (and (q)) :effect (and (p))))"),
      ModelError);
  // Unbound variable in an effect.
  CHECK_THROWS_AS(
      parse_domain("(define (domain x) (:predicates (p ?x))"
                   " (:action a :parameters ()"
                   " :precondition (and) :effect (and (p ?y))))"),
      ModelError);
  // Duplicate operator names.
  CHECK_THROWS_AS(
      parse_domain("(define (domain x) (:predicates (p))"
                   " (:action a :parameters ()"
                   " :precondition (and (p)) :effect (and (p)))"
                   " (:action a :parameters ()"
                   " :precondition (and (p)) :effect (and (p))))"),
      ModelError);
}

TEST_CASE("semantic checks on problems") {
  DomainModel dom = parse_domain(domain_pddl(DomainKind::Hanoi34));
  // Unknown object in init.
  CHECK_THROWS_AS(
      parse_problem("(define (problem p) (:domain hanoi34)"
                    " (:objects d1 - disk p1 - peg)"
                    " (:init (on d9 p1)) (:goal (and (on d1 p1))))",
                    dom),
      ModelError);
  // Arity mismatch.
  CHECK_THROWS_AS(
      parse_problem("(define (problem p) (:domain hanoi34)"
                    " (:objects d1 - disk p1 - peg)"
                    " (:init (on d1)) (:goal (and (on d1 p1))))",
                    dom),
      ModelError);
  // Type mismatch: a peg is not a disk.
  CHECK_THROWS_AS(
      parse_problem("(define (problem p) (:domain hanoi34)"
                    " (:objects d1 - disk p1 - peg)"
                    " (:init (smaller p1 d1)) (:goal (and (on d1 p1))))",
                    dom),
      ModelError);
}

TEST_CASE("zero-arity fixtures parse") {
  DomainModel dom = parse_domain(read_file(FIXTURE_DIR "/chain.pddl"));
  CHECK(dom.predicates.size() == 4);
  CHECK(dom.operators.size() == 3);
  ProblemSpec prob =
      parse_problem(read_file(FIXTURE_DIR "/chain_example.pddl"), dom);
  CHECK(prob.objects.empty());
  CHECK(prob.candidates.size() == 2);
}
