#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "grlab/domains.hpp"

namespace grlab {

// 36-bit injective state codes, one layout per domain. Bit index 0 is the
// most significant bit of the 9-hex-digit serialization:
//   eight_puzzle: cell k (row-major) occupies bits 4k..4k+3 as the tile
//                 nibble (0 = blank); solved board -> 0x012345678
//   lights_out4:  cell k occupies bit k (1 = lit); bits 16..35 zero
//   hanoi34:      disk j (smallest first) occupies bits 2j..2j+1 as its peg
//                 id; bits 6..35 zero
using StateCode = std::uint64_t;

inline int code_bit(StateCode code, int b) { return (code >> (35 - b)) & 1; }

std::string code_hex(StateCode code);     // 9 lowercase hex digits
StateCode code_from_hex(const std::string& hex);

StateCode encode_board(const Board& b);
Board decode_board(DomainKind kind, StateCode code);  // rejects invalid codes

StateCode encode(DomainKind kind, const GroundTask& task, const State& s);
State decode(DomainKind kind, const GroundTask& task, StateCode code);

struct NearestResult {
  int index = -1;            // chosen candidate
  double distance = 0.0;     // expected Hamming distance to the chosen code
  std::array<int, 36> thresholded{};  // probs >= 0.5
  double bit_match = 0.0;    // thresholded bits agreeing with the chosen code
};

// Argmin over candidates of sum_b |probs[b] - bit_b(c)|; ties break toward
// the lower candidate index.
NearestResult nearest_valid(const std::array<double, 36>& probs,
                            const std::vector<StateCode>& candidates);

// StateCode -> dense integer ids for the sequence model. Id 0 is reserved
// for out-of-vocabulary codes.
class Vocabulary {
 public:
  int add(StateCode code) {
    if (frozen_) throw Error("vocabulary is frozen");
    auto it = ids_.find(code);
    if (it != ids_.end()) return it->second;
    codes_.push_back(code);
    int id = static_cast<int>(codes_.size());
    ids_.emplace(code, id);
    return id;
  }

  // 0 when unknown.
  int id(StateCode code) const {
    auto it = ids_.find(code);
    return it == ids_.end() ? 0 : it->second;
  }

  StateCode code_of(int id) const { return codes_.at(id - 1); }
  int size() const { return static_cast<int>(codes_.size()); }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  const std::vector<StateCode>& codes() const { return codes_; }

 private:
  std::unordered_map<StateCode, int> ids_;
  std::vector<StateCode> codes_;
  bool frozen_ = false;
};

}  // namespace grlab
