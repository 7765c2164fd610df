#pragma once

// Explicit hypergraphs produced by the reductions.
//
// Vertices are numbered block by block: v = 0 first, then v = 1, ...; inside
// a block by coset index (T28) or coset-pair index a * coset_count + b (T44).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcpcp/quadratic_code.hpp"
#include "qcpcp/verifier.hpp"

namespace qcpcp {

/// Variable-length edges packed into one id array (millions of 4-sets fit
/// in a few hundred MB this way).
class EdgeList {
 public:
  class const_iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::span<const std::uint32_t>;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = value_type;

    const_iterator() = default;
    const_iterator(const EdgeList* list, std::size_t i) : list_(list), i_(i) {}
    value_type operator*() const { return (*list_)[i_]; }
    const_iterator& operator++() {
      ++i_;
      return *this;
    }
    const_iterator operator++(int) {
      auto old = *this;
      ++i_;
      return old;
    }
    friend bool operator==(const const_iterator& a, const const_iterator& b) { return a.i_ == b.i_; }

   private:
    const EdgeList* list_ = nullptr;
    std::size_t i_ = 0;
  };

  std::size_t size() const { return starts_.size() - 1; }
  bool empty() const { return size() == 0; }
  std::size_t total_ids() const { return ids_.size(); }
  std::span<const std::uint32_t> operator[](std::size_t i) const {
    return {ids_.data() + starts_[i], static_cast<std::size_t>(starts_[i + 1] - starts_[i])};
  }
  const_iterator begin() const { return {this, 0}; }
  const_iterator end() const { return {this, size()}; }

  void reserve(std::size_t edges, std::size_t ids) {
    starts_.reserve(edges + 1);
    ids_.reserve(ids);
  }
  void push_back(std::span<const std::uint32_t> e) {
    ids_.insert(ids_.end(), e.begin(), e.end());
    starts_.push_back(ids_.size());
  }
  void push_back(std::initializer_list<std::uint32_t> e) { push_back(std::span<const std::uint32_t>(e.begin(), e.size())); }
  /// Reorders edges lexicographically.
  void sort();

  friend bool operator==(const EdgeList&, const EdgeList&) = default;

 private:
  std::vector<std::uint32_t> ids_;
  std::vector<std::uint64_t> starts_{0};
};

struct Hypergraph {
  struct Vertex {
    std::size_t v = 0;
    std::uint64_t coset = 0;
  };

  std::size_t n = 0;
  int uniformity = 0;  // 8 or 4; edges may be smaller after merging repeated vertices
  std::vector<Vertex> vertices;
  std::vector<std::uint64_t> offsets;  // first id of each block
  /// Sorted, distinct-vertex, deduplicated; the list itself is sorted.
  EdgeList edges;
  /// Randomness outcomes (X's counted by coset) whose queries hit one vertex.
  std::uint64_t collapsed = 0;

  std::uint32_t id(std::size_t v, std::uint64_t coset) const {
    return static_cast<std::uint32_t>(offsets.at(v) + coset);
  }
};

struct HypergraphLimits {
  std::size_t max_m = 2;
  std::uint64_t max_edges = 5'000'000;
};

/// Refusal to materialize; `estimate` is the number of candidate edges (or,
/// for an oversized vertex block, its size).
class LimitExceeded : public std::runtime_error {
 public:
  LimitExceeded(const std::string& what, std::uint64_t estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t estimate_;
};

/// Enumerates every (u, v, w), every F and vector choice, and every coset of
/// X1, X2, Y1, Y2. Since the v-queries and the w-queries share only F, the
/// edge set is, per (u, v, w, F), the product of the distinct v-parts with
/// the distinct w-parts; that product is what gets enumerated.
Hypergraph build_hypergraph(const Reduction& red, TestMode mode, const HypergraphLimits& limits = {});

/// colors[id] for every hypergraph vertex.
std::vector<int> vertex_colors(const Hypergraph& h, const FoldedColoring& col);

}  // namespace qcpcp
