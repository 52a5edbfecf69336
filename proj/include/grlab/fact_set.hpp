#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace grlab {

// Fixed-width bitset over the fact ids of one ground task.
class FactSet {
 public:
  FactSet() = default;
  explicit FactSet(std::size_t n_bits)
      : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

  std::size_t size() const { return n_bits_; }

  void set(int id) { words_[id >> 6] |= std::uint64_t{1} << (id & 63); }
  void reset(int id) { words_[id >> 6] &= ~(std::uint64_t{1} << (id & 63)); }
  bool test(int id) const { return (words_[id >> 6] >> (id & 63)) & 1; }

  // Superset test: every bit of `sub` is set here.
  bool contains(const FactSet& sub) const {
    for (std::size_t w = 0; w < sub.words_.size(); ++w) {
      if ((sub.words_[w] & ~words_[w]) != 0) return false;
    }
    return true;
  }

  bool intersects(const FactSet& other) const {
    std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t w = 0; w < n; ++w) {
      if (words_[w] & other.words_[w]) return true;
    }
    return false;
  }

  void unite(const FactSet& other) {
    for (std::size_t w = 0; w < other.words_.size(); ++w) {
      words_[w] |= other.words_[w];
    }
  }

  void subtract(const FactSet& other) {
    for (std::size_t w = 0; w < other.words_.size(); ++w) {
      words_[w] &= ~other.words_[w];
    }
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += __builtin_popcountll(w);
    return n;
  }

  bool empty() const {
    for (std::uint64_t w : words_) {
      if (w) return false;
    }
    return true;
  }

  std::vector<int> ids() const {
    std::vector<int> out;
    out.reserve(count());
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        out.push_back(static_cast<int>(w * 64 + b));
        bits &= bits - 1;
      }
    }
    return out;
  }

  // Grows the universe, preserving existing bits. Used when a task is
  // extended with marker facts.
  void resize_grow(std::size_t n_bits) {
    n_bits_ = n_bits;
    words_.resize((n_bits + 63) / 64, 0);
  }

  bool operator==(const FactSet& o) const {
    return n_bits_ == o.n_bits_ && words_ == o.words_;
  }
  bool operator!=(const FactSet& o) const { return !(*this == o); }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (std::uint64_t w : words_) {
      h ^= w;
      h *= 0x100000001b3ull;
    }
    return h;
  }

 private:
  std::size_t n_bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct FactSetHash {
  std::size_t operator()(const FactSet& s) const { return s.hash(); }
};

}  // namespace grlab
