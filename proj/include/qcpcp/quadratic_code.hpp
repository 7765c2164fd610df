#pragma once

// The quadratic code, folding over H_v and folded colorings.
//
// For a vertex v with constraints C_v, W_v is the space of symmetric m x m
// matrices satisfying C_v and H_v = W_v^perp. A coloring of the cosets of
// H_v extends uniquely to a function on F_2^{m x m} that is constant on
// cosets, and the Fourier support of that extension lies inside W_v.
//
// Cosets are numbered densely: the canonical representative (reduction by
// the RREF basis of H_v) is zero at every pivot position, and its index is
// the integer formed by its remaining bits in increasing position order.
// Ordering indices therefore orders representatives by their flattened
// integer value, and index(X + Y) = index(X) xor index(Y).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qcpcp/exact.hpp"
#include "qcpcp/gf2.hpp"
#include "qcpcp/label_cover.hpp"

namespace qcpcp {

class Rng;

/// x |-> (X |-> <X, x (x) x>).
class QuadraticCodeword {
 public:
  explicit QuadraticCodeword(BitVector x);
  int operator()(const BitMatrix& X) const;
  const BitVector& message() const { return x_; }

 private:
  BitVector x_;
  BitMatrix xx_;
};

QuadraticCodeword encode_quadratic(const BitVector& x);

class FoldingSpace {
 public:
  FoldingSpace(std::size_t m, const std::vector<BitMatrix>& constraints);

  std::size_t m() const { return m_; }
  std::size_t ambient_bits() const { return m_ * m_; }
  const Subspace& H() const { return H_; }
  const Subspace& W() const { return W_; }
  /// log2 of the number of cosets (= dim W).
  std::size_t coset_bits() const { return coset_bits_; }
  std::uint64_t coset_count() const { return std::uint64_t{1} << coset_bits_; }

  std::uint64_t reduce(std::uint64_t code) const;
  std::uint64_t coset_index(std::uint64_t code) const { return extract_bits(reduce(code), free_mask_); }
  std::uint64_t coset_index(const BitMatrix& X) const;
  /// Canonical representative of the coset with the given index.
  std::uint64_t representative(std::uint64_t index) const { return deposit_bits(index, free_mask_); }
  bool in_W(std::uint64_t code) const;

 private:
  std::size_t m_;
  Subspace W_, H_;
  std::vector<std::uint64_t> h_basis_;
  std::vector<std::uint64_t> h_pivot_bits_;
  std::vector<std::uint64_t> w_dual_;  // basis of H, used for membership in W
  std::uint64_t free_mask_ = 0;
  std::size_t coset_bits_ = 0;
};

/// W = Sym_m cap {M : <c, M> = 0 for c in constraints}, H = dual(W).
FoldingSpace build_folding_space(std::size_t m, const std::vector<BitMatrix>& constraints);

std::vector<FoldingSpace> build_folding_spaces(const LabelCoverInstance& inst);

/// Per-vertex color tables for the hypergraph built by one of the tests.
///
/// Domain::Cosets tables are indexed by coset index; Domain::CosetPairs
/// tables (the 4-query test) by a * coset_count + b for the pair of cosets
/// (a, b). Colors are 0..colors-1; a 4-color value c stands for the pair
/// (c >> 1, c & 1).
class FoldedColoring {
 public:
  enum class Domain { Cosets, CosetPairs };

  FoldedColoring(Domain domain, int colors, std::vector<std::vector<std::uint8_t>> tables);

  Domain domain() const { return domain_; }
  int colors() const { return colors_; }
  std::size_t num_vertices() const { return tables_.size(); }
  const std::vector<std::uint8_t>& table(std::size_t v) const { return tables_.at(v); }
  const std::vector<std::vector<std::uint8_t>>& tables() const { return tables_; }

  /// Fraction of the block of v carrying color c.
  Rational color_fraction(std::size_t v, int c) const;
  /// Fraction colored 1; for a set indicator this is its density in the block.
  Rational density(std::size_t v) const { return color_fraction(v, 1); }

  /// Throws DimensionError if table sizes disagree with the folding spaces.
  void validate(const std::vector<FoldingSpace>& spaces) const;

  /// 0/1 table of {x : color(x) == c}.
  FoldedColoring indicator(int c) const;

 private:
  Domain domain_;
  int colors_;
  std::vector<std::vector<std::uint8_t>> tables_;
};

int evaluate_folded(const FoldedColoring& col, const std::vector<FoldingSpace>& spaces, std::size_t v,
                    const BitMatrix& X);
int evaluate_folded(const FoldedColoring& col, const std::vector<FoldingSpace>& spaces, std::size_t v,
                    const BitMatrix& X1, const BitMatrix& X2);

/// A_v(X) = <X, y_v (x) y_v> on cosets; with 4 colors A_v(X1, X2) is the pair
/// of the two quadratic-code values.
FoldedColoring honest_coloring(const std::vector<FoldingSpace>& spaces, const PlantedLabeling& lab,
                               FoldedColoring::Domain domain);

/// Independent uniform 0/1 tables, each entry 1 with probability num/den.
FoldedColoring random_folded_coloring(const std::vector<FoldingSpace>& spaces, Rng& rng,
                                      std::uint64_t num = 1, std::uint64_t den = 2);

/// The extension of the v-table to all of F_2^{m x m} (2-color, coset domain).
std::vector<std::uint8_t> extend_to_matrices(const FoldedColoring& col, const FoldingSpace& space,
                                             std::size_t v);

/// Exact Fourier coefficients A^(alpha) = numer[alpha] / 2^bits.
struct FourierTable {
  std::size_t bits = 0;
  std::vector<std::int64_t> numer;

  Rational coefficient(std::uint64_t alpha) const { return dyadic(numer[alpha], static_cast<int>(bits)); }
  double value(std::uint64_t alpha) const;
  std::vector<std::uint64_t> support() const;
  /// sum_alpha A^(alpha)^2, exactly.
  Rational mass() const;
};

/// Largest matrix dimension with a tabulated transform (2^{m^2} entries).
inline constexpr std::size_t kMaxFourierM = 4;

class DomainTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transform of an arbitrary 0/1 function on F_2^{m x m}, tabulated by code.
FourierTable fourier_transform(std::span<const std::uint8_t> full_table, std::size_t m);
/// Transform of the folded extension of the v-table.
FourierTable fourier_transform(const FoldedColoring& col, const FoldingSpace& space, std::size_t v);

/// Whether every coefficient above 1e-12 in magnitude sits on W.
bool check_folding_support(const FourierTable& ft, const FoldingSpace& space);
bool check_folding_support(const FoldedColoring& col, const FoldingSpace& space, std::size_t v);

}  // namespace qcpcp
