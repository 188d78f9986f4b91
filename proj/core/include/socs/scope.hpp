#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace socs {

/// A set of variable indices, stored as a bitset sized to the circuit's
/// variable table so that disjointness and union tests are O(words).
class Scope {
public:
  Scope() = default;
  explicit Scope(int num_vars) : num_vars_(num_vars), words_((num_vars + 63) / 64, 0) {}

  static Scope singleton(int num_vars, int var) {
    Scope s(num_vars);
    s.add(var);
    return s;
  }
  static Scope full(int num_vars) {
    Scope s(num_vars);
    for (int v = 0; v < num_vars; ++v) s.add(v);
    return s;
  }

  int num_vars() const { return num_vars_; }

  void add(int var) { words_[var >> 6] |= (std::uint64_t(1) << (var & 63)); }
  bool contains(int var) const {
    return (words_[var >> 6] >> (var & 63)) & 1;
  }

  bool empty() const {
    for (auto w : words_) {
      if (w) return false;
    }
    return true;
  }

  int count() const {
    int n = 0;
    for (auto w : words_) n += __builtin_popcountll(w);
    return n;
  }

  bool disjoint(const Scope& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & o.words_[i]) return false;
    }
    return true;
  }

  bool subset_of(const Scope& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~o.words_[i]) return false;
    }
    return true;
  }

  bool intersects(const Scope& o) const { return !disjoint(o); }

  Scope union_with(const Scope& o) const {
    Scope s = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] |= o.words_[i];
    return s;
  }

  Scope intersect_with(const Scope& o) const {
    Scope s = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] &= o.words_[i];
    return s;
  }

  Scope minus(const Scope& o) const {
    Scope s = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] &= ~o.words_[i];
    return s;
  }

  /// Smallest member index; INT_MAX for the empty scope (sorts last in the
  /// canonical child ordering).
  int min_index() const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i]) return int(i) * 64 + __builtin_ctzll(words_[i]);
    }
    return std::numeric_limits<int>::max();
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (int v = 0; v < num_vars_; ++v) {
      if (contains(v)) out.push_back(v);
    }
    return out;
  }

  bool operator==(const Scope& o) const { return words_ == o.words_; }
  bool operator!=(const Scope& o) const { return !(*this == o); }

  struct Hash {
    std::size_t operator()(const Scope& s) const {
      std::size_t h = 0xcbf29ce484222325ULL;
      for (auto w : s.words_) {
        h ^= w;
        h *= 0x100000001b3ULL;
      }
      return h;
    }
  };

private:
  int num_vars_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace socs
