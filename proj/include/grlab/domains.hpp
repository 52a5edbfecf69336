#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "grlab/strips.hpp"

namespace grlab {

enum class DomainKind { Hanoi34, EightPuzzle, LightsOut4 };

std::string domain_name(DomainKind kind);
DomainKind domain_from_name(const std::string& name);

// Compact board-level view of a state, shared by all three puzzles:
//   Hanoi34:     cells[0..2]  = peg index (0..3) of disk d1..d3 (d1 smallest)
//   EightPuzzle: cells[0..8]  = tile at cell (row-major), 0 = blank
//   LightsOut4:  cells[0..15] = 1 when lit (row-major)
struct Board {
  DomainKind kind = DomainKind::Hanoi34;
  std::array<int, 16> cells{};

  bool operator==(const Board& o) const {
    return kind == o.kind && cells == o.cells;
  }
};

// Canonical PDDL text for the domain (also shipped under domains/).
std::string domain_pddl(DomainKind kind);

// Problem text: full-state init and goal, plus the (:candidates ...) block.
// goal = candidates[goal_index].
std::string problem_pddl(const std::string& name, const Board& init,
                         const std::vector<Board>& candidates, int goal_index);

// Fluent atoms fully describing the board, canonical order.
std::vector<std::string> board_atoms(const Board& b);

Board canonical_init(DomainKind kind);

// Board-level transition system; used for random walks and test oracles.
std::vector<Board> board_successors(const Board& b);
Board random_walk(Board b, int steps, std::mt19937& rng);
Board random_board(DomainKind kind, std::mt19937& rng);

// All 64 Hanoi boards (disk->peg assignments), lexicographic.
std::vector<Board> enumerate_hanoi_boards();

// Conversions between a board and a state of a grounded task for the same
// domain. Throw when the state is malformed or an atom is missing.
Board board_from_state(DomainKind kind, const GroundTask& task,
                       const State& s);
State state_from_board(const GroundTask& task, const Board& b);

}  // namespace grlab
