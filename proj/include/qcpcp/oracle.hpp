#pragma once

// Exact brute-force answers for small hypergraphs, plus the plain edge-scan
// checkers every returned witness is run through.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcpcp/hypergraph.hpp"

namespace qcpcp {

class OracleTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The search ran out of its node budget; no answer either way.
class SearchLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- checkers (edge scans, no search) ----

/// No edge lies entirely inside `set`.
bool is_independent(const Hypergraph& h, std::span<const std::uint32_t> set);
std::size_t count_monochromatic(const Hypergraph& h, std::span<const int> colors);
/// Every edge is non-monochromatic under at least one assignment.
bool covers_all_edges(const Hypergraph& h, const std::vector<std::vector<int>>& assignments);

// ---- searches ----

struct IndependentSetResult {
  std::size_t size = 0;
  std::vector<std::uint32_t> witness;
  std::uint64_t nodes = 0;
};

/// Branch and bound over bitmasks. Throws OracleTooLarge if n > cap (cap is
/// at most 64).
IndependentSetResult max_independent_set(const Hypergraph& h, std::size_t cap = 64,
                                         std::uint64_t node_limit = 1'000'000'000);

struct ColoringResult {
  bool colorable = false;
  std::vector<int> witness;  // empty unless colorable
  std::uint64_t nodes = 0;
};

/// Backtracking, most-constrained vertex first; a new vertex may only open
/// the next unused color. Throws SearchLimitExceeded past node_limit.
ColoringResult is_q_colorable(const Hypergraph& h, int q, std::uint64_t node_limit = 20'000'000);

struct CoverResult {
  bool feasible = false;  // false iff some edge has a single vertex
  int t = 0;
  std::vector<std::vector<int>> assignments;  // t Boolean assignments
};

/// Least t such that t Boolean assignments leave no edge monochromatic in
/// all of them. Edges act as not-all-equal constraints, so t assignments
/// suffice exactly when the hypergraph is 2^t-colorable (read the t bits of
/// a color). Searches t = 0..max_t; throws SearchLimitExceeded if the
/// answer is above max_t.
CoverResult covering_number(const Hypergraph& h, int max_t = 3, std::uint64_t node_limit = 20'000'000);

struct OracleOptions {
  std::size_t mis_cap = 64;
  bool run_mis = true;
  std::vector<int> qs = {2, 3, 4};
  bool run_cover = true;
  int max_t = 3;
  std::uint64_t node_limit = 20'000'000;
};

struct OracleResult {
  std::optional<IndependentSetResult> mis;
  struct QResult {
    int q = 0;
    ColoringResult result;
  };
  std::vector<QResult> colorability;
  std::optional<CoverResult> cover;
  /// All witnesses re-verified by the checkers above.
  bool witnesses_verified = true;
};

OracleResult solve(const Hypergraph& h, const OracleOptions& opt = {});

}  // namespace qcpcp
