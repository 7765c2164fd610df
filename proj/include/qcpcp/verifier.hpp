#pragma once

// The 8-query test T28 and the 4-query, 4-color test T44 built on it.
//
// T28 picks u, then v and w independently among the edges at u (so v = w is
// possible), uniform X1, X2, Y1, Y2, vectors x, y, z, x', y', z' and an r x r
// matrix F, and queries
//   v: X1, X2, X3 = X1 + x(x)y + F.pi,  X4 = X2 + (x + e)(x)z + F.pi
//   w: Y1, Y2, Y3 = Y1 + x'(x)y' + F.sigma + E,  Y4 = Y2 + (x' + e)(x)z' + F.sigma + E
// with e the last unit vector and E = e(x)e. T44 asks the paired-coset
// vertices (X1,X2), (X3,X4), (Y1,Y2), (Y3,Y4). Both accept iff the colors
// seen are not all equal.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qcpcp/exact.hpp"
#include "qcpcp/gf2.hpp"
#include "qcpcp/label_cover.hpp"
#include "qcpcp/quadratic_code.hpp"

namespace qcpcp {

class Rng;

enum class TestMode { T28 = 28, T44 = 44 };

/// Throws std::invalid_argument unless mode is 28 or 44.
TestMode test_mode_from_int(int mode);
FoldedColoring::Domain domain_of(TestMode mode);

/// Instance plus everything derived from it that the tests need.
class Reduction {
 public:
  explicit Reduction(LabelCoverInstance inst);

  const LabelCoverInstance& instance() const { return inst_; }
  std::size_t m() const { return inst_.m(); }
  std::size_t r() const { return inst_.r(); }
  const std::vector<FoldingSpace>& spaces() const { return spaces_; }
  const FoldingSpace& space(std::size_t v) const { return spaces_[v]; }

  /// alpha -> pi_e(alpha), on codes.
  const LinearCodeMap& forward(std::size_t e) const { return forward_[e]; }
  /// F -> F o pi_e, on codes.
  const LinearCodeMap& adjoint(std::size_t e) const { return adjoint_[e]; }

  /// Code of e (x) e.
  std::uint64_t corner_code() const { return std::uint64_t{1} << (m() * m() - 1); }
  std::uint64_t last_unit() const { return std::uint64_t{1} << (m() - 1); }

  /// Vertex-block size of v in the hypergraph of the given test.
  std::uint64_t block_size(std::size_t v, TestMode mode) const;

 private:
  LabelCoverInstance inst_;
  std::vector<FoldingSpace> spaces_;
  std::vector<LinearCodeMap> forward_, adjoint_;
};

struct TestRandomness {
  std::size_t u = 0;
  std::size_t edge_v = 0, edge_w = 0;  // edge indices (u, v) and (u, w)
  std::size_t v = 0, w = 0;
  BitMatrix X1, X2, Y1, Y2;
  BitVector xbar, ybar, zbar, xbar2, ybar2, zbar2;  // xbar2 is x', etc.
  BitMatrix F;
};

struct Query {
  std::size_t vertex = 0;
  std::uint64_t coset = 0;  // pair index a * coset_count + b for T44
  friend bool operator==(const Query&, const Query&) = default;
};

/// Order: v:X1, v:X2, v:X3, v:X4, w:Y1, w:Y2, w:Y3, w:Y4.
struct QueryTuple8 {
  std::array<BitMatrix, 8> matrices;
  std::array<Query, 8> queries;
};

struct Sample28 {
  TestRandomness randomness;
  QueryTuple8 tuple;
};

/// Order: v:(X1,X2), v:(X3,X4), w:(Y1,Y2), w:(Y3,Y4).
struct Sample44 {
  TestRandomness randomness;
  QueryTuple8 singles;
  std::array<Query, 4> pairs;
};

/// Derives the eight queries from explicit randomness (also a test hook for
/// forcing particular vectors). Throws DimensionError on shape mismatch or an
/// edge that does not start at u.
QueryTuple8 queries_from_randomness(const Reduction& red, const TestRandomness& t);
std::array<Query, 4> pair_queries(const Reduction& red, const QueryTuple8& singles);

TestRandomness sample_randomness(const Reduction& red, Rng& rng);
Sample28 sample_test_28(const Reduction& red, Rng& rng);
Sample44 sample_test_44(const Reduction& red, Rng& rng);

/// Not-all-equal. Throws std::invalid_argument on an empty list.
bool check_edge(std::span<const int> colors);

/// Colors the test sees on a sample (8 for T28, 4 for T44).
std::vector<int> observed_colors(const Reduction& red, const FoldedColoring& col, const Sample28& s);
std::vector<int> observed_colors(const Reduction& red, const FoldedColoring& col, const Sample44& s);

/// E[prod of the indicator over all queried points], computed exactly by
/// factoring the expectation over the shared randomness (u, v, w, x, x', F);
/// the remaining averages are autocorrelations of the per-vertex tables.
/// This is Theta: zero iff the 1-set of `indicator` is independent.
/// Throws std::invalid_argument if the coloring is not a 0/1 table over the
/// domain of the mode.
Rational independence_theta(const Reduction& red, const FoldedColoring& indicator, TestMode mode);

/// 1 - sum over colors c of Theta(indicator of c).
Rational acceptance_probability(const Reduction& red, const FoldedColoring& col, TestMode mode);

struct MonteCarloEstimate {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double mean = 0;
  double std_error = 0;
  /// mean -/+ 3 standard errors, clamped to [0, 1].
  double lo = 0, hi = 0;
  bool covers(double x) const { return lo <= x && x <= hi; }
};

/// Plain sampling estimate of Theta for an indicator.
MonteCarloEstimate monte_carlo_theta(const Reduction& red, const FoldedColoring& indicator, TestMode mode,
                                     std::uint64_t samples, Rng& rng);

struct CompletenessReport {
  Rational acceptance;
  /// Randomness outcomes replayed against the symbolic value table.
  std::uint64_t table_checks = 0;
  std::uint64_t table_mismatches = 0;
  /// Outcomes where all four row offsets vanished (all 8 values could agree).
  std::uint64_t all_rows_equal = 0;
  bool ok() const { return acceptance == 1 && table_mismatches == 0 && all_rows_equal == 0; }
};

/// Honest coloring acceptance plus a replay of the value table
///   x1, x1 + <y,x><y,y~> + f;  x2, x2 + (<y,x> + 1)<y,z> + f;
///   y1, y1 + <y',x'><y',y~'> + f + 1;  y2, y2 + (<y',x'> + 1)<y',z'> + f + 1
/// with f = <F, x_u (x) x_u>. Enumerates the shared randomness when it has at
/// most 2^22 outcomes per (u, v, w), otherwise samples 2^16 outcomes with a
/// fixed seed. Throws std::invalid_argument if the labeling is not perfect.
CompletenessReport completeness_check(const Reduction& red, const PlantedLabeling& lab, TestMode mode);

}  // namespace qcpcp
