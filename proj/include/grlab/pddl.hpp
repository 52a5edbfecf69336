#pragma once

#include <string>

#include "grlab/strips.hpp"

namespace grlab {

// Parses the :strips + :typing PDDL subset (see docs/pddl-subset.md).
// Unsupported requirement flags and first syntax/semantic errors throw.
DomainModel parse_domain(const std::string& text);

// Parses a problem file against an already-parsed domain. Recognizes the
// non-standard (:candidates (<atom>*)*) block carrying candidate goal sets.
ProblemSpec parse_problem(const std::string& text, const DomainModel& dom);

// Fixture printers; parse_domain(print_domain(d)) is structurally equal to d.
std::string print_domain(const DomainModel& dom);
std::string print_problem(const ProblemSpec& prob);

}  // namespace grlab
