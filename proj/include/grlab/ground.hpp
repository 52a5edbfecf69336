#pragma once

#include "grlab/strips.hpp"

namespace grlab {

// Exhaustive typed instantiation. Actions whose static preconditions do not
// hold in init are pruned, as are degenerate bindings with overlapping
// add/delete effects; only relaxed-reachable actions are kept. The fact table
// covers init, every reachable add effect, and all goal/candidate atoms.
GroundTask ground(const DomainModel& dom, const ProblemSpec& prob);

}  // namespace grlab
