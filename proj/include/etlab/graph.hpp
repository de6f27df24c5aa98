#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "etlab/errors.hpp"

namespace etlab {

/// Fixed-size bitset over vertex ids, stored as 64-bit words.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t capacity() const { return size_; }
  void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  VertexSet& operator&=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }

  /// Index of the lowest set bit, or capacity() when empty.
  std::size_t first() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return (w << 6) + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return size_;
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto bits = words_[w];
      while (bits) {
        out.push_back((w << 6) + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Explicit simple graph with optional loops. Independent sets never contain
/// a looped vertex.
class Graph {
 public:
  explicit Graph(std::size_t vertex_count)
      : n_(vertex_count), adj_(vertex_count, VertexSet(vertex_count)), loops_(vertex_count, false) {}

  std::size_t vertex_count() const { return n_; }

  void add_edge(std::size_t u, std::size_t v) {
    check(u);
    check(v);
    if (u == v) {
      loops_[u] = true;
      return;
    }
    adj_[u].set(v);
    adj_[v].set(u);
  }
  void add_loop(std::size_t v) {
    check(v);
    loops_[v] = true;
  }

  bool adjacent(std::size_t u, std::size_t v) const { return u == v ? loops_[u] : adj_[u].test(v); }
  bool has_loop(std::size_t v) const { return loops_[v]; }
  const VertexSet& neighbours(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return adj_[v].count(); }

  /// True iff no two members are adjacent and none carries a loop.
  bool is_independent(const std::vector<std::size_t>& vs) const {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (loops_[vs[i]]) return false;
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if (vs[i] == vs[j] || adj_[vs[i]].test(vs[j])) return false;
    }
    return true;
  }

 private:
  void check(std::size_t v) const {
    if (v >= n_) throw ParameterError("Graph: vertex " + std::to_string(v) + " out of range");
  }

  std::size_t n_;
  std::vector<VertexSet> adj_;
  std::vector<bool> loops_;
};

}  // namespace etlab
