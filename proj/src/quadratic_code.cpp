#include "qcpcp/quadratic_code.hpp"

#include <cmath>
#include <stdexcept>

#include "qcpcp/rng.hpp"
#include "qcpcp/walsh.hpp"

namespace qcpcp {

QuadraticCodeword::QuadraticCodeword(BitVector x) : x_(std::move(x)), xx_(outer_product(x_, x_)) {}

int QuadraticCodeword::operator()(const BitMatrix& X) const {
  if (X.rows() != x_.size() || X.cols() != x_.size())
    throw DimensionError("quadratic codeword: query must be m x m");
  return mat_inner(X, xx_);
}

QuadraticCodeword encode_quadratic(const BitVector& x) { return QuadraticCodeword(x); }

// ---------------------------------------------------------------- folding

FoldingSpace::FoldingSpace(std::size_t m, const std::vector<BitMatrix>& constraints) : m_(m) {
  if (m < 1 || m > 8) throw DimensionError("FoldingSpace: m must be in [1, 8]");
  const std::size_t n = m * m;
  std::vector<BitVector> eqs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      BitVector e(n);
      e.set(i * m + j, true);
      e.set(j * m + i, true);
      eqs.push_back(std::move(e));
    }
  for (const auto& c : constraints) {
    if (c.rows() != m || c.cols() != m) throw DimensionError("FoldingSpace: constraint must be m x m");
    eqs.push_back(c.flatten());
  }
  BitMatrix A(eqs.size(), n);
  for (std::size_t i = 0; i < eqs.size(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (eqs[i].get(j)) A.set(i, j, true);
  W_ = eqs.empty() ? Subspace::full(n) : kernel(A);
  H_ = dual(W_);

  std::uint64_t pivot_mask = 0;
  for (std::size_t i = 0; i < H_.dim(); ++i) {
    h_basis_.push_back(H_.basis()[i].to_word());
    h_pivot_bits_.push_back(std::uint64_t{1} << H_.pivots()[i]);
    pivot_mask |= h_pivot_bits_.back();
  }
  w_dual_ = h_basis_;
  free_mask_ = low_mask(n) & ~pivot_mask;
  coset_bits_ = n - H_.dim();
}

std::uint64_t FoldingSpace::reduce(std::uint64_t code) const {
  for (std::size_t i = 0; i < h_basis_.size(); ++i)
    if (code & h_pivot_bits_[i]) code ^= h_basis_[i];
  return code;
}

std::uint64_t FoldingSpace::coset_index(const BitMatrix& X) const {
  if (X.rows() != m_ || X.cols() != m_) throw DimensionError("coset_index: X must be m x m");
  return coset_index(X.code());
}

bool FoldingSpace::in_W(std::uint64_t code) const {
  for (auto h : w_dual_)
    if (parity(h & code)) return false;
  return true;
}

FoldingSpace build_folding_space(std::size_t m, const std::vector<BitMatrix>& constraints) {
  return FoldingSpace(m, constraints);
}

std::vector<FoldingSpace> build_folding_spaces(const LabelCoverInstance& inst) {
  std::vector<FoldingSpace> out;
  out.reserve(inst.num_v());
  for (std::size_t v = 0; v < inst.num_v(); ++v) out.emplace_back(inst.m(), inst.constraints(v));
  return out;
}

// ---------------------------------------------------------------- colorings

FoldedColoring::FoldedColoring(Domain domain, int colors, std::vector<std::vector<std::uint8_t>> tables)
    : domain_(domain), colors_(colors), tables_(std::move(tables)) {
  if (colors != 2 && colors != 4) throw std::invalid_argument("FoldedColoring: colors must be 2 or 4");
  for (const auto& t : tables_)
    for (auto c : t)
      if (c >= colors) throw std::invalid_argument("FoldedColoring: color out of range");
}

Rational FoldedColoring::color_fraction(std::size_t v, int c) const {
  const auto& t = tables_.at(v);
  std::size_t hits = 0;
  for (auto x : t) hits += (x == c);
  return Rational(hits, t.size());
}

void FoldedColoring::validate(const std::vector<FoldingSpace>& spaces) const {
  if (spaces.size() != tables_.size()) throw DimensionError("coloring: wrong number of vertex tables");
  for (std::size_t v = 0; v < spaces.size(); ++v) {
    const std::uint64_t cc = spaces[v].coset_count();
    const std::uint64_t want = domain_ == Domain::Cosets ? cc : cc * cc;
    if (tables_[v].size() != want)
      throw DimensionError("coloring: table of vertex " + std::to_string(v) + " has " +
                           std::to_string(tables_[v].size()) + " entries, expected " + std::to_string(want));
  }
}

FoldedColoring FoldedColoring::indicator(int c) const {
  auto t = tables_;
  for (auto& row : t)
    for (auto& x : row) x = (x == c);
  return FoldedColoring(domain_, 2, std::move(t));
}

int evaluate_folded(const FoldedColoring& col, const std::vector<FoldingSpace>& spaces, std::size_t v,
                    const BitMatrix& X) {
  if (v >= spaces.size() || v >= col.num_vertices()) throw std::out_of_range("evaluate_folded: unknown vertex");
  if (col.domain() != FoldedColoring::Domain::Cosets)
    throw std::invalid_argument("evaluate_folded: coloring is over coset pairs");
  return col.table(v).at(spaces[v].coset_index(X));
}

int evaluate_folded(const FoldedColoring& col, const std::vector<FoldingSpace>& spaces, std::size_t v,
                    const BitMatrix& X1, const BitMatrix& X2) {
  if (v >= spaces.size() || v >= col.num_vertices()) throw std::out_of_range("evaluate_folded: unknown vertex");
  if (col.domain() != FoldedColoring::Domain::CosetPairs)
    throw std::invalid_argument("evaluate_folded: coloring is over single cosets");
  const auto& s = spaces[v];
  return col.table(v).at(s.coset_index(X1) * s.coset_count() + s.coset_index(X2));
}

FoldedColoring honest_coloring(const std::vector<FoldingSpace>& spaces, const PlantedLabeling& lab,
                               FoldedColoring::Domain domain) {
  if (lab.y.size() != spaces.size()) throw DimensionError("honest_coloring: labeling size mismatch");
  std::vector<std::vector<std::uint8_t>> tables;
  for (std::size_t v = 0; v < spaces.size(); ++v) {
    const auto& s = spaces[v];
    const std::uint64_t y = lab.y[v].to_word();
    const std::uint64_t yy = outer_code(y, y, s.m());
    std::vector<std::uint8_t> single(s.coset_count());
    for (std::uint64_t c = 0; c < s.coset_count(); ++c) single[c] = parity(s.representative(c) & yy);
    if (domain == FoldedColoring::Domain::Cosets) {
      tables.push_back(std::move(single));
      continue;
    }
    std::vector<std::uint8_t> pairs(s.coset_count() * s.coset_count());
    for (std::uint64_t a = 0; a < s.coset_count(); ++a)
      for (std::uint64_t b = 0; b < s.coset_count(); ++b)
        pairs[a * s.coset_count() + b] = static_cast<std::uint8_t>((single[a] << 1) | single[b]);
    tables.push_back(std::move(pairs));
  }
  return FoldedColoring(domain, domain == FoldedColoring::Domain::Cosets ? 2 : 4, std::move(tables));
}

FoldedColoring random_folded_coloring(const std::vector<FoldingSpace>& spaces, Rng& rng, std::uint64_t num,
                                      std::uint64_t den) {
  std::vector<std::vector<std::uint8_t>> tables;
  for (const auto& s : spaces) {
    std::vector<std::uint8_t> t(s.coset_count());
    for (auto& x : t) x = rng.bernoulli(num, den);
    tables.push_back(std::move(t));
  }
  return FoldedColoring(FoldedColoring::Domain::Cosets, 2, std::move(tables));
}

std::vector<std::uint8_t> extend_to_matrices(const FoldedColoring& col, const FoldingSpace& space,
                                             std::size_t v) {
  if (col.domain() != FoldedColoring::Domain::Cosets || col.colors() != 2)
    throw std::invalid_argument("extend_to_matrices: needs a 2-color coset coloring");
  if (space.ambient_bits() > 4 * kMaxFourierM)
    throw DomainTooLarge("extend_to_matrices: 2^{m^2} table too large");
  const auto& t = col.table(v);
  if (t.size() != space.coset_count()) throw DimensionError("extend_to_matrices: table size mismatch");
  std::vector<std::uint8_t> full(std::size_t{1} << space.ambient_bits());
  for (std::uint64_t X = 0; X < full.size(); ++X) full[X] = t[space.coset_index(X)];
  return full;
}

// ---------------------------------------------------------------- Fourier

double FourierTable::value(std::uint64_t alpha) const {
  return std::ldexp(static_cast<double>(numer[alpha]), -static_cast<int>(bits));
}

std::vector<std::uint64_t> FourierTable::support() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < numer.size(); ++a)
    if (numer[a] != 0) out.push_back(a);
  return out;
}

Rational FourierTable::mass() const {
  BigInt acc = 0;
  for (auto a : numer) acc += BigInt(a) * a;
  return dyadic(acc, 2 * static_cast<int>(bits));
}

FourierTable fourier_transform(std::span<const std::uint8_t> full_table, std::size_t m) {
  if (m > kMaxFourierM) throw DomainTooLarge("fourier_transform: m^2 exceeds 16");
  const std::size_t n = m * m;
  if (full_table.size() != (std::size_t{1} << n)) throw DimensionError("fourier_transform: table must have 2^{m^2} entries");
  FourierTable ft;
  ft.bits = n;
  ft.numer.assign(full_table.begin(), full_table.end());
  fwht(ft.numer);
  return ft;
}

FourierTable fourier_transform(const FoldedColoring& col, const FoldingSpace& space, std::size_t v) {
  if (space.m() > kMaxFourierM) throw DomainTooLarge("fourier_transform: m^2 exceeds 16");
  return fourier_transform(extend_to_matrices(col, space, v), space.m());
}

bool check_folding_support(const FourierTable& ft, const FoldingSpace& space) {
  if (ft.bits != space.ambient_bits()) throw DimensionError("check_folding_support: transform/space mismatch");
  for (std::uint64_t a = 0; a < ft.numer.size(); ++a)
    if (std::abs(ft.value(a)) > 1e-12 && !space.in_W(a)) return false;
  return true;
}

bool check_folding_support(const FoldedColoring& col, const FoldingSpace& space, std::size_t v) {
  return check_folding_support(fourier_transform(col, space, v), space);
}

}  // namespace qcpcp
