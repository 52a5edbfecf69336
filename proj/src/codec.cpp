#include "grlab/codec.hpp"

#include <cmath>
#include <cstdio>

namespace grlab {

std::string code_hex(StateCode code) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%09llx",
                static_cast<unsigned long long>(code));
  return buf;
}

StateCode code_from_hex(const std::string& hex) {
  if (hex.size() != 9) throw Error("state code must be 9 hex digits");
  StateCode code = 0;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      throw Error("bad hex digit in state code");
    }
    code = (code << 4) | v;
  }
  return code;
}

StateCode encode_board(const Board& b) {
  StateCode code = 0;
  switch (b.kind) {
    case DomainKind::Hanoi34:
      for (int d = 0; d < 3; ++d) {
        code |= static_cast<StateCode>(b.cells[d]) << (34 - 2 * d);
      }
      break;
    case DomainKind::EightPuzzle:
      for (int c = 0; c < 9; ++c) {
        code |= static_cast<StateCode>(b.cells[c]) << (4 * (8 - c));
      }
      break;
    case DomainKind::LightsOut4:
      for (int c = 0; c < 16; ++c) {
        if (b.cells[c]) code |= StateCode{1} << (35 - c);
      }
      break;
  }
  return code;
}

Board decode_board(DomainKind kind, StateCode code) {
  if (code >> 36) throw Error("state code wider than 36 bits");
  Board b;
  b.kind = kind;
  switch (kind) {
    case DomainKind::Hanoi34: {
      if (code & ((StateCode{1} << 30) - 1)) {
        throw Error("nonzero padding bits in hanoi34 code");
      }
      for (int d = 0; d < 3; ++d) {
        b.cells[d] = static_cast<int>((code >> (34 - 2 * d)) & 3);
      }
      break;
    }
    case DomainKind::EightPuzzle: {
      std::array<bool, 9> seen{};
      for (int c = 0; c < 9; ++c) {
        int t = static_cast<int>((code >> (4 * (8 - c))) & 15);
        if (t > 8) throw Error("tile nibble out of range in code");
        if (seen[t]) throw Error("duplicate tile nibble in code");
        seen[t] = true;
        b.cells[c] = t;
      }
      break;
    }
    case DomainKind::LightsOut4: {
      if (code & ((StateCode{1} << 20) - 1)) {
        throw Error("nonzero padding bits in lights_out4 code");
      }
      for (int c = 0; c < 16; ++c) {
        b.cells[c] = static_cast<int>((code >> (35 - c)) & 1);
      }
      break;
    }
  }
  return b;
}

StateCode encode(DomainKind kind, const GroundTask& task, const State& s) {
  return encode_board(board_from_state(kind, task, s));
}

State decode(DomainKind kind, const GroundTask& task, StateCode code) {
  return state_from_board(task, decode_board(kind, code));
}

NearestResult nearest_valid(const std::array<double, 36>& probs,
                            const std::vector<StateCode>& candidates) {
  if (candidates.empty()) throw Error("nearest_valid needs candidates");
  NearestResult res;
  double best = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double dist = 0.0;
    for (int b = 0; b < 36; ++b) {
      dist += std::abs(probs[b] - code_bit(candidates[i], b));
    }
    if (best < 0.0 || dist < best - 1e-12) {
      best = dist;
      res.index = static_cast<int>(i);
    }
  }
  res.distance = best;
  int match = 0;
  for (int b = 0; b < 36; ++b) {
    res.thresholded[b] = probs[b] >= 0.5 ? 1 : 0;
    if (res.thresholded[b] == code_bit(candidates[res.index], b)) ++match;
  }
  res.bit_match = match / 36.0;
  return res;
}

}  // namespace grlab
