#include "grlab/domains.hpp"

#include <algorithm>
#include <sstream>

namespace grlab {
namespace {

const char* kHanoiName = "hanoi34";
const char* kPuzzleName = "eight_puzzle";
const char* kLightsName = "lights_out4";

std::string disk(int d) { return "d" + std::to_string(d + 1); }
std::string peg(int p) { return "p" + std::to_string(p + 1); }
std::string tile(int t) { return "t" + std::to_string(t); }
std::string cell(int c) { return "c" + std::to_string(c); }

// Orthogonal neighbours on a w x w grid, row-major, ascending.
std::vector<int> grid_neighbors(int k, int w) {
  std::vector<int> out;
  int r = k / w, c = k % w;
  if (r > 0) out.push_back(k - w);
  if (c > 0) out.push_back(k - 1);
  if (c + 1 < w) out.push_back(k + 1);
  if (r + 1 < w) out.push_back(k + w);
  return out;
}

// Cell plus neighbours, ascending; the press pattern domain.
std::vector<int> lights_region(int k) {
  std::vector<int> out = grid_neighbors(k, 4);
  out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string domain_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::Hanoi34:
      return kHanoiName;
    case DomainKind::EightPuzzle:
      return kPuzzleName;
    case DomainKind::LightsOut4:
      return kLightsName;
  }
  throw Error("bad domain kind");
}

DomainKind domain_from_name(const std::string& name) {
  if (name == kHanoiName) return DomainKind::Hanoi34;
  if (name == kPuzzleName) return DomainKind::EightPuzzle;
  if (name == kLightsName) return DomainKind::LightsOut4;
  throw Error("unknown domain '" + name + "'");
}

std::string domain_pddl(DomainKind kind) {
  std::ostringstream os;
  switch (kind) {
    case DomainKind::Hanoi34:
      os << "(define (domain hanoi34)\n"
            "  (:requirements :strips :typing)\n"
            "  (:types disk - loc peg - loc loc)\n"
            "  (:predicates\n"
            "    (on ?d - disk ?x - loc)\n"
            "    (clear ?x - loc)\n"
            "    (smaller ?d - disk ?x - loc))\n"
            "  (:action move\n"
            "    :parameters (?d - disk ?from - loc ?to - loc)\n"
            "    :precondition (and (on ?d ?from) (clear ?d) (clear ?to)"
            " (smaller ?d ?to))\n"
            "    :effect (and (on ?d ?to) (clear ?from)"
            " (not (on ?d ?from)) (not (clear ?to)))))\n";
      break;
    case DomainKind::EightPuzzle:
      os << "(define (domain eight_puzzle)\n"
            "  (:requirements :strips :typing)\n"
            "  (:types tile cell)\n"
            "  (:predicates\n"
            "    (at ?t - tile ?c - cell)\n"
            "    (blank ?c - cell)\n"
            "    (adjacent ?a - cell ?b - cell))\n"
            "  (:action slide\n"
            "    :parameters (?t - tile ?from - cell ?to - cell)\n"
            "    :precondition (and (at ?t ?from) (blank ?to)"
            " (adjacent ?from ?to))\n"
            "    :effect (and (at ?t ?to) (blank ?from)"
            " (not (at ?t ?from)) (not (blank ?to)))))\n";
      break;
    case DomainKind::LightsOut4: {
      os << "(define (domain lights_out4)\n"
            "  (:requirements :strips :typing)\n"
            "  (:types cell)\n"
            "  (:predicates (lit ?c - cell) (unlit ?c - cell))\n";
      // Pressing a cell flips it and its orthogonal neighbours. One operator
      // per (cell, current on/off pattern of the affected region), so every
      // action has plain add/delete effects.
      for (int k = 0; k < 16; ++k) {
        std::vector<int> region = lights_region(k);
        int n = static_cast<int>(region.size());
        for (int m = 0; m < (1 << n); ++m) {
          os << "  (:action press-" << cell(k) << "-m" << m
             << "\n    :parameters ()\n    :precondition (and";
          for (int i = 0; i < n; ++i) {
            bool on = (m >> i) & 1;
            os << " (" << (on ? "lit " : "unlit ") << cell(region[i]) << ")";
          }
          os << ")\n    :effect (and";
          for (int i = 0; i < n; ++i) {
            bool on = (m >> i) & 1;
            os << " (" << (on ? "unlit " : "lit ") << cell(region[i]) << ")";
            os << " (not (" << (on ? "lit " : "unlit ") << cell(region[i])
               << "))";
          }
          os << "))\n";
        }
      }
      os << ")\n";
      break;
    }
  }
  return os.str();
}

std::vector<std::string> board_atoms(const Board& b) {
  std::vector<std::string> atoms;
  switch (b.kind) {
    case DomainKind::Hanoi34: {
      for (int d = 0; d < 3; ++d) {
        // Rests on the next larger disk on the same peg, else the peg.
        std::string below = peg(b.cells[d]);
        for (int e = d + 1; e < 3; ++e) {
          if (b.cells[e] == b.cells[d]) {
            below = disk(e);
            break;
          }
        }
        atoms.push_back("(on " + disk(d) + " " + below + ")");
      }
      for (int p = 0; p < 4; ++p) {
        int top = -1;
        for (int d = 0; d < 3; ++d) {
          if (b.cells[d] == p) {
            top = d;
            break;
          }
        }
        atoms.push_back("(clear " + (top < 0 ? peg(p) : disk(top)) + ")");
      }
      break;
    }
    case DomainKind::EightPuzzle: {
      for (int c = 0; c < 9; ++c) {
        if (b.cells[c] == 0) {
          atoms.push_back("(blank " + cell(c) + ")");
        } else {
          atoms.push_back("(at " + tile(b.cells[c]) + " " + cell(c) + ")");
        }
      }
      break;
    }
    case DomainKind::LightsOut4: {
      for (int c = 0; c < 16; ++c) {
        atoms.push_back("(" + std::string(b.cells[c] ? "lit " : "unlit ") +
                        cell(c) + ")");
      }
      break;
    }
  }
  return atoms;
}

namespace {

std::vector<std::string> static_atoms(DomainKind kind) {
  std::vector<std::string> atoms;
  if (kind == DomainKind::Hanoi34) {
    for (int d = 0; d < 3; ++d) {
      for (int e = d + 1; e < 3; ++e) {
        atoms.push_back("(smaller " + disk(d) + " " + disk(e) + ")");
      }
      for (int p = 0; p < 4; ++p) {
        atoms.push_back("(smaller " + disk(d) + " " + peg(p) + ")");
      }
    }
  } else if (kind == DomainKind::EightPuzzle) {
    for (int k = 0; k < 9; ++k) {
      for (int j : grid_neighbors(k, 3)) {
        atoms.push_back("(adjacent " + cell(k) + " " + cell(j) + ")");
      }
    }
  }
  return atoms;
}

std::string objects_decl(DomainKind kind) {
  std::ostringstream os;
  switch (kind) {
    case DomainKind::Hanoi34:
      os << "d1 d2 d3 - disk p1 p2 p3 p4 - peg";
      break;
    case DomainKind::EightPuzzle:
      for (int t = 1; t <= 8; ++t) os << tile(t) << " ";
      os << "- tile ";
      for (int c = 0; c < 9; ++c) os << cell(c) << " ";
      os << "- cell";
      break;
    case DomainKind::LightsOut4:
      for (int c = 0; c < 16; ++c) os << cell(c) << " ";
      os << "- cell";
      break;
  }
  return os.str();
}

}  // namespace

std::string problem_pddl(const std::string& name, const Board& init,
                         const std::vector<Board>& candidates,
                         int goal_index) {
  if (goal_index < 0 || goal_index >= static_cast<int>(candidates.size())) {
    throw Error("goal_index out of range");
  }
  std::ostringstream os;
  os << "(define (problem " << name << ")\n  (:domain "
     << domain_name(init.kind) << ")\n  (:objects " << objects_decl(init.kind)
     << ")\n  (:init";
  for (const auto& a : board_atoms(init)) os << " " << a;
  for (const auto& a : static_atoms(init.kind)) os << " " << a;
  os << ")\n  (:goal (and";
  for (const auto& a : board_atoms(candidates[goal_index])) os << " " << a;
  os << "))\n  (:candidates";
  for (const Board& c : candidates) {
    os << "\n    (";
    bool first = true;
    for (const auto& a : board_atoms(c)) {
      if (!first) os << " ";
      os << a;
      first = false;
    }
    os << ")";
  }
  os << ")\n)\n";
  return os.str();
}

Board canonical_init(DomainKind kind) {
  Board b;
  b.kind = kind;
  if (kind == DomainKind::EightPuzzle) {
    for (int c = 0; c < 9; ++c) b.cells[c] = c;  // blank at c0, tiles ordered
  }
  return b;  // hanoi: all disks on p1; lights: all off
}

std::vector<Board> board_successors(const Board& b) {
  std::vector<Board> out;
  switch (b.kind) {
    case DomainKind::Hanoi34: {
      for (int d = 0; d < 3; ++d) {
        bool topmost = true;
        for (int e = 0; e < d; ++e) {
          if (b.cells[e] == b.cells[d]) topmost = false;
        }
        if (!topmost) continue;
        for (int p = 0; p < 4; ++p) {
          if (p == b.cells[d]) continue;
          bool legal = true;  // target top must be larger
          for (int e = 0; e < d; ++e) {
            if (b.cells[e] == p) legal = false;
          }
          if (!legal) continue;
          Board nb = b;
          nb.cells[d] = p;
          out.push_back(nb);
        }
      }
      break;
    }
    case DomainKind::EightPuzzle: {
      int blank = 0;
      for (int c = 0; c < 9; ++c) {
        if (b.cells[c] == 0) blank = c;
      }
      for (int j : grid_neighbors(blank, 3)) {
        Board nb = b;
        std::swap(nb.cells[blank], nb.cells[j]);
        out.push_back(nb);
      }
      break;
    }
    case DomainKind::LightsOut4: {
      for (int k = 0; k < 16; ++k) {
        Board nb = b;
        for (int j : lights_region(k)) nb.cells[j] ^= 1;
        out.push_back(nb);
      }
      break;
    }
  }
  return out;
}

Board random_walk(Board b, int steps, std::mt19937& rng) {
  for (int i = 0; i < steps; ++i) {
    std::vector<Board> succ = board_successors(b);
    b = succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(
        rng)];
  }
  return b;
}

Board random_board(DomainKind kind, std::mt19937& rng) {
  Board b;
  b.kind = kind;
  switch (kind) {
    case DomainKind::Hanoi34:
      for (int d = 0; d < 3; ++d) {
        b.cells[d] = std::uniform_int_distribution<int>(0, 3)(rng);
      }
      break;
    case DomainKind::EightPuzzle: {
      for (int c = 0; c < 9; ++c) b.cells[c] = c;
      std::shuffle(b.cells.begin(), b.cells.begin() + 9, rng);
      break;
    }
    case DomainKind::LightsOut4:
      for (int c = 0; c < 16; ++c) {
        b.cells[c] = std::uniform_int_distribution<int>(0, 1)(rng);
      }
      break;
  }
  return b;
}

std::vector<Board> enumerate_hanoi_boards() {
  std::vector<Board> out;
  for (int a = 0; a < 4; ++a) {
    for (int bb = 0; bb < 4; ++bb) {
      for (int c = 0; c < 4; ++c) {
        Board b;
        b.kind = DomainKind::Hanoi34;
        b.cells = {a, bb, c};
        out.push_back(b);
      }
    }
  }
  return out;
}

namespace {

// "(pred a b)" -> {pred, a, b}
std::vector<std::string> split_fact(const std::string& name) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : name) {
    if (ch == '(' || ch == ')') continue;
    if (ch == ' ') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace

Board board_from_state(DomainKind kind, const GroundTask& task,
                       const State& s) {
  Board b;
  b.kind = kind;
  switch (kind) {
    case DomainKind::Hanoi34: {
      std::array<int, 3> below{-1, -1, -1};  // -1 unset; 0..3 peg; 4..6 disk
      for (int id : s.ids()) {
        auto p = split_fact(task.fact_names[id]);
        if (p[0] != "on") continue;
        int d = std::stoi(p[1].substr(1)) - 1;
        if (below[d] != -1) throw Error("disk " + p[1] + " on two supports");
        below[d] = p[2][0] == 'p' ? std::stoi(p[2].substr(1)) - 1
                                  : 4 + std::stoi(p[2].substr(1)) - 1;
      }
      for (int d = 0; d < 3; ++d) {
        int cur = d;
        int guard = 0;
        while (below[cur] >= 4) {
          cur = below[cur] - 4;
          if (cur <= d || ++guard > 3) throw Error("malformed hanoi state");
        }
        if (below[cur] < 0) throw Error("disk without support");
        b.cells[d] = below[cur];
      }
      break;
    }
    case DomainKind::EightPuzzle: {
      std::array<int, 9> t;
      t.fill(-1);
      for (int id : s.ids()) {
        auto p = split_fact(task.fact_names[id]);
        if (p[0] == "at") {
          int c = std::stoi(p[2].substr(1));
          if (t[c] != -1) throw Error("two tiles on cell " + p[2]);
          t[c] = std::stoi(p[1].substr(1));
        } else if (p[0] == "blank") {
          int c = std::stoi(p[1].substr(1));
          if (t[c] != -1) throw Error("tile and blank on cell " + p[1]);
          t[c] = 0;
        }
      }
      for (int c = 0; c < 9; ++c) {
        if (t[c] < 0) throw Error("cell c" + std::to_string(c) + " empty");
        b.cells[c] = t[c];
      }
      break;
    }
    case DomainKind::LightsOut4: {
      std::array<int, 16> v;
      v.fill(-1);
      for (int id : s.ids()) {
        auto p = split_fact(task.fact_names[id]);
        if (p[0] != "lit" && p[0] != "unlit") continue;
        int c = std::stoi(p[1].substr(1));
        int val = p[0] == "lit" ? 1 : 0;
        if (v[c] == 1 - val) throw Error("cell " + p[1] + " both lit and unlit");
        v[c] = val;
      }
      for (int c = 0; c < 16; ++c) {
        if (v[c] < 0) throw Error("cell c" + std::to_string(c) + " unknown");
        b.cells[c] = v[c];
      }
      break;
    }
  }
  return b;
}

State state_from_board(const GroundTask& task, const Board& b) {
  static const std::vector<std::string> kFluents[] = {
      {"on", "clear"}, {"at", "blank"}, {"lit", "unlit"}};
  const auto& fluents = kFluents[static_cast<int>(b.kind)];

  State s = task.init;
  for (int id : task.init.ids()) {
    auto parts = split_fact(task.fact_names[id]);
    if (std::find(fluents.begin(), fluents.end(), parts[0]) != fluents.end()) {
      s.reset(id);
    }
  }
  for (const auto& atom : board_atoms(b)) {
    int id = task.fact_id(atom);
    if (id < 0) throw Error("atom " + atom + " not in the task's fact table");
    s.set(id);
  }
  return s;
}

}  // namespace grlab
