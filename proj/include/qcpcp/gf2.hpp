#pragma once

// Dense linear algebra over GF(2).
//
// Vectors and matrices are bit-packed into 64-bit words. When a matrix is
// viewed as a vector (e.g. as an element of F_2^{m*m}) it is flattened
// row-major: entry (i, j) of an R x C matrix lands at position i*C + j.
// For ambient dimensions up to 64 the flattened form also fits in a single
// machine word (a "code"); the hot enumeration loops work on codes.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcpcp {

class Rng;

/// Thrown on shape/dimension mismatches anywhere in the library.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline int parity(std::uint64_t w) { return std::popcount(w) & 1; }

inline std::uint64_t low_mask(std::size_t bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t len);

  static BitVector from_bits(std::initializer_list<int> bits);
  static BitVector from_bits(std::span<const int> bits);
  static BitVector from_word(std::size_t len, std::uint64_t word);
  static BitVector unit(std::size_t len, std::size_t i);
  static BitVector random(std::size_t len, Rng& rng);

  std::size_t size() const { return len_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool b);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool is_zero() const;
  std::size_t weight() const;
  /// Lowest set position, or size() when zero.
  std::size_t lowest_set() const;

  /// Only valid for size() <= 64.
  std::uint64_t to_word() const;
  std::vector<int> to_bits() const;

  BitVector& operator^=(const BitVector& o);
  friend BitVector operator+(BitVector a, const BitVector& b) { return a ^= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;
  /// Lexicographic order on (len, words); used only for sorting.
  friend bool operator<(const BitVector& a, const BitVector& b);

  /// Inner product mod 2.
  int dot(const BitVector& o) const;

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
  static BitMatrix from_rows(const std::vector<std::vector<int>>& rows);
  static BitMatrix identity(std::size_t n);
  static BitMatrix random(std::size_t rows, std::size_t cols, Rng& rng);
  static BitMatrix unflatten(const BitVector& flat, std::size_t rows, std::size_t cols);
  /// Inverse of code(); requires rows*cols <= 64.
  static BitMatrix from_code(std::uint64_t code, std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t i, std::size_t j) const { return data_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool b) { data_[i].set(j, b); }
  const BitVector& row(std::size_t i) const { return data_[i]; }
  BitVector column(std::size_t j) const;

  bool is_zero() const;
  bool is_symmetric() const;

  BitMatrix transpose() const;
  BitVector flatten() const;
  /// Flattened row-major code; requires rows*cols <= 64.
  std::uint64_t code() const;
  std::vector<std::vector<int>> to_rows() const;

  BitVector apply(const BitVector& x) const;

  BitMatrix& operator+=(const BitMatrix& o);
  friend BitMatrix operator+(BitMatrix a, const BitMatrix& b) { return a += b; }
  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);
  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BitVector> data_;
};

/// result[i][j] = x[i] * y[j].
BitMatrix outer_product(const BitVector& x, const BitVector& y);

/// Sum over entries of X .* Y, mod 2. Note <alpha, x (x) y> = x^T alpha y.
int mat_inner(const BitMatrix& X, const BitMatrix& Y);

std::size_t rank(const BitMatrix& A);

/// A linear subspace of F_2^n held as a basis in reduced row-echelon form.
///
/// The pivot of a basis row is its lowest set position; rows are ordered by
/// pivot and every pivot column is zero in all other rows. The form is
/// unique for a given subspace, so equality of subspaces is equality of
/// bases.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim);
  /// Span of arbitrary generators (dependent ones are dropped).
  Subspace(std::size_t ambient_dim, const std::vector<BitVector>& generators);

  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<BitVector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// x reduced modulo the basis: zero at every pivot position.
  BitVector reduce(const BitVector& x) const;
  bool contains(const BitVector& x) const { return reduce(x).is_zero(); }

  friend bool operator==(const Subspace&, const Subspace&) = default;

 private:
  void insert(BitVector v);

  std::size_t ambient_ = 0;
  std::vector<BitVector> basis_;
  std::vector<std::size_t> pivots_;
};

/// {x : A x = 0}.
Subspace kernel(const BitMatrix& A);
/// {y : <y, x> = 0 for all x in S}.
Subspace dual(const Subspace& S);
/// Canonical coset representative of x + S.
BitVector coset_rep(const BitVector& x, const Subspace& S);
/// Intersection of two subspaces of the same ambient space.
Subspace intersect(const Subspace& a, const Subspace& b);

/// Linear map F_2^{m x m} -> F_2^{r x r}.
///
/// Conjugation(rho) sends alpha to rho alpha rho^T. General(M) multiplies the
/// flattened input by an r^2 x m^2 matrix. Construction of a General map
/// verifies that symmetric inputs have symmetric images and throws
/// std::invalid_argument otherwise.
class MatrixSpaceMap {
 public:
  enum class Form { Conjugation, General };

  MatrixSpaceMap() = default;
  static MatrixSpaceMap conjugation(BitMatrix rho);
  static MatrixSpaceMap general(std::size_t m, std::size_t r, BitMatrix matrix);

  Form form() const { return form_; }
  std::size_t m() const { return m_; }
  std::size_t r() const { return r_; }
  const BitMatrix& rho() const { return matrix_; }
  const BitMatrix& matrix() const { return matrix_; }

  BitMatrix apply(const BitMatrix& alpha) const;
  bool preserves_symmetry() const;

 private:
  MatrixSpaceMap(Form form, std::size_t m, std::size_t r, BitMatrix matrix)
      : form_(form), m_(m), r_(r), matrix_(std::move(matrix)) {}

  Form form_ = Form::Conjugation;
  std::size_t m_ = 0;
  std::size_t r_ = 0;
  BitMatrix matrix_;
};

/// The unique Z (m x m) with <Z, Y> = <X, pi(Y)> for all Y.
BitMatrix adjoint_apply(const BitMatrix& X, const MatrixSpaceMap& pi);

/// Basis of the symmetric m x m matrices: E_ii and E_ij + E_ji (i < j).
std::vector<BitMatrix> symmetric_basis(std::size_t m);

// ---- word-level helpers (ambient dimension <= 64) ----

/// A linear map between word-coded spaces, stored as images of unit vectors.
class LinearCodeMap {
 public:
  LinearCodeMap() = default;
  explicit LinearCodeMap(std::vector<std::uint64_t> images) : images_(std::move(images)) {}

  std::uint64_t operator()(std::uint64_t x) const {
    std::uint64_t out = 0;
    while (x) {
      out ^= images_[std::countr_zero(x)];
      x &= x - 1;
    }
    return out;
  }
  std::size_t in_bits() const { return images_.size(); }

 private:
  std::vector<std::uint64_t> images_;
};

/// alpha -> pi(alpha) on codes.
LinearCodeMap forward_code_map(const MatrixSpaceMap& pi);
/// F -> F o pi on codes.
LinearCodeMap adjoint_code_map(const MatrixSpaceMap& pi);

/// Code of x (x) y for m-bit vector words.
std::uint64_t outer_code(std::uint64_t x, std::uint64_t y, std::size_t m);
/// Code of the transpose of an m x m code.
std::uint64_t transpose_code(std::uint64_t a, std::size_t m);
std::size_t rank_code(std::uint64_t a, std::size_t rows, std::size_t cols);
/// Row i of an m-column code, as an m-bit word.
inline std::uint64_t code_row(std::uint64_t a, std::size_t i, std::size_t cols) {
  return (a >> (i * cols)) & low_mask(cols);
}
/// alpha * x for an m x m code and m-bit word x.
std::uint64_t apply_code(std::uint64_t a, std::uint64_t x, std::size_t m);

/// Number of solutions x in F_2^n of the system rows[i] . x = rhs[i]
/// (0 if inconsistent, else 2^{n - rank}).
std::uint64_t affine_solution_count(std::span<const std::uint64_t> rows,
                                    std::span<const int> rhs, std::size_t n);

/// Compress the bits of x selected by mask into the low bits (software pext).
std::uint64_t extract_bits(std::uint64_t x, std::uint64_t mask);
/// Inverse of extract_bits (software pdep).
std::uint64_t deposit_bits(std::uint64_t x, std::uint64_t mask);

}  // namespace qcpcp
