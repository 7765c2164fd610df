#include "qcpcp/gf2.hpp"

#include <algorithm>

#include "qcpcp/rng.hpp"

namespace qcpcp {

namespace {

std::size_t words_for(std::size_t len) { return (len + 63) / 64; }

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

BitVector BitVector::from_bits(std::initializer_list<int> bits) {
  return from_bits(std::span<const int>(bits.begin(), bits.size()));
}

BitVector BitVector::from_bits(std::span<const int> bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) v.set(i, bits[i] & 1);
  return v;
}

BitVector BitVector::from_word(std::size_t len, std::uint64_t word) {
  require(len <= 64, "BitVector::from_word: length exceeds 64");
  BitVector v(len);
  if (len > 0) v.words_[0] = word & low_mask(len);
  return v;
}

BitVector BitVector::unit(std::size_t len, std::size_t i) {
  require(i < len, "BitVector::unit: index out of range");
  BitVector v(len);
  v.set(i, true);
  return v;
}

BitVector BitVector::random(std::size_t len, Rng& rng) {
  BitVector v(len);
  for (std::size_t w = 0; w < v.words_.size(); ++w) v.words_[w] = rng.next();
  if (len % 64) v.words_.back() &= low_mask(len % 64);
  return v;
}

void BitVector::set(std::size_t i, bool b) {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (b)
    words_[i >> 6] |= bit;
  else
    words_[i >> 6] &= ~bit;
}

bool BitVector::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVector::weight() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::size_t BitVector::lowest_set() const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
  return len_;
}

std::uint64_t BitVector::to_word() const {
  require(len_ <= 64, "BitVector::to_word: length exceeds 64");
  return words_.empty() ? 0 : words_[0];
}

std::vector<int> BitVector::to_bits() const {
  std::vector<int> out(len_);
  for (std::size_t i = 0; i < len_; ++i) out[i] = get(i);
  return out;
}

BitVector& BitVector::operator^=(const BitVector& o) {
  require(len_ == o.len_, "BitVector: length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
  return *this;
}

bool operator<(const BitVector& a, const BitVector& b) {
  if (a.len_ != b.len_) return a.len_ < b.len_;
  return a.words_ < b.words_;
}

int BitVector::dot(const BitVector& o) const {
  require(len_ == o.len_, "BitVector::dot: length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
  return parity(acc);
}

// ---------------------------------------------------------------- BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> tmp;
  for (const auto& r : rows) tmp.emplace_back(r);
  return from_rows(tmp);
}

BitMatrix BitMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  BitMatrix M(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == cols, "BitMatrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) M.set(i, j, rows[i][j] & 1);
  }
  return M;
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I.set(i, i, true);
  return I;
}

BitMatrix BitMatrix::random(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix M(rows, cols);
  for (auto& r : M.data_) r = BitVector::random(cols, rng);
  return M;
}

BitMatrix BitMatrix::unflatten(const BitVector& flat, std::size_t rows, std::size_t cols) {
  require(flat.size() == rows * cols, "BitMatrix::unflatten: size mismatch");
  BitMatrix M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) M.set(i, j, flat.get(i * cols + j));
  return M;
}

BitMatrix BitMatrix::from_code(std::uint64_t code, std::size_t rows, std::size_t cols) {
  require(rows * cols <= 64, "BitMatrix::from_code: more than 64 entries");
  return unflatten(BitVector::from_word(rows * cols, code), rows, cols);
}

BitVector BitMatrix::column(std::size_t j) const {
  BitVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c.set(i, get(i, j));
  return c;
}

bool BitMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const BitVector& r) { return r.is_zero(); });
}

bool BitMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (get(i, j) != get(j, i)) return false;
  return true;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix T(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (get(i, j)) T.set(j, i, true);
  return T;
}

BitVector BitMatrix::flatten() const {
  BitVector flat(rows_ * cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (get(i, j)) flat.set(i * cols_ + j, true);
  return flat;
}

std::uint64_t BitMatrix::code() const {
  require(rows_ * cols_ <= 64, "BitMatrix::code: more than 64 entries");
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    if (cols_ > 0) c |= data_[i].to_word() << (i * cols_);
  return c;
}

std::vector<std::vector<int>> BitMatrix::to_rows() const {
  std::vector<std::vector<int>> out;
  out.reserve(rows_);
  for (const auto& r : data_) out.push_back(r.to_bits());
  return out;
}

BitVector BitMatrix::apply(const BitVector& x) const {
  require(x.size() == cols_, "BitMatrix::apply: dimension mismatch");
  BitVector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) y.set(i, data_[i].dot(x));
  return y;
}

BitMatrix& BitMatrix::operator+=(const BitMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "BitMatrix: shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i) data_[i] ^= o.data_[i];
  return *this;
}

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
  require(a.cols_ == b.rows_, "BitMatrix product: shape mismatch");
  BitMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k)
      if (a.get(i, k)) c.data_[i] ^= b.data_[k];
  return c;
}

// ---------------------------------------------------------------- free ops

BitMatrix outer_product(const BitVector& x, const BitVector& y) {
  BitMatrix M(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.get(i))
      for (std::size_t j = 0; j < y.size(); ++j) M.set(i, j, y.get(j));
  return M;
}

int mat_inner(const BitMatrix& X, const BitMatrix& Y) {
  require(X.rows() == Y.rows() && X.cols() == Y.cols(), "mat_inner: shape mismatch");
  int acc = 0;
  for (std::size_t i = 0; i < X.rows(); ++i) acc ^= X.row(i).dot(Y.row(i));
  return acc;
}

std::size_t rank(const BitMatrix& A) {
  std::vector<BitVector> gens;
  for (std::size_t i = 0; i < A.rows(); ++i) gens.push_back(A.row(i));
  return Subspace(A.cols(), gens).dim();
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}

Subspace::Subspace(std::size_t ambient_dim, const std::vector<BitVector>& generators)
    : ambient_(ambient_dim) {
  for (const auto& g : generators) {
    require(g.size() == ambient_dim, "Subspace: generator dimension mismatch");
    insert(g);
  }
}

Subspace Subspace::full(std::size_t ambient_dim) {
  std::vector<BitVector> gens;
  for (std::size_t i = 0; i < ambient_dim; ++i) gens.push_back(BitVector::unit(ambient_dim, i));
  return Subspace(ambient_dim, gens);
}

BitVector Subspace::reduce(const BitVector& x) const {
  require(x.size() == ambient_, "Subspace::reduce: dimension mismatch");
  BitVector y = x;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (y.get(pivots_[i])) y ^= basis_[i];
  return y;
}

void Subspace::insert(BitVector v) {
  v = reduce(v);
  if (v.is_zero()) return;
  const std::size_t p = v.lowest_set();
  // Clear the new pivot from existing rows to stay reduced.
  for (auto& b : basis_)
    if (b.get(p)) b ^= v;
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p);
  const auto idx = pos - pivots_.begin();
  pivots_.insert(pos, p);
  basis_.insert(basis_.begin() + idx, std::move(v));
}

Subspace kernel(const BitMatrix& A) {
  const std::size_t n = A.cols();
  std::vector<BitVector> gens;
  for (std::size_t i = 0; i < A.rows(); ++i) gens.push_back(A.row(i));
  const Subspace rowspace(n, gens);

  // Each free column f gives the kernel vector e_f + sum_{pivot rows with bit f} e_pivot.
  std::vector<bool> is_pivot(n, false);
  for (auto p : rowspace.pivots()) is_pivot[p] = true;
  std::vector<BitVector> kgens;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    BitVector v = BitVector::unit(n, f);
    for (std::size_t i = 0; i < rowspace.dim(); ++i)
      if (rowspace.basis()[i].get(f)) v.set(rowspace.pivots()[i], true);
    kgens.push_back(std::move(v));
  }
  return Subspace(n, kgens);
}

Subspace dual(const Subspace& S) {
  BitMatrix A(S.dim(), S.ambient_dim());
  for (std::size_t i = 0; i < S.dim(); ++i)
    for (std::size_t j = 0; j < S.ambient_dim(); ++j)
      if (S.basis()[i].get(j)) A.set(i, j, true);
  if (S.dim() == 0) return Subspace::full(S.ambient_dim());
  return kernel(A);
}

BitVector coset_rep(const BitVector& x, const Subspace& S) { return S.reduce(x); }

Subspace intersect(const Subspace& a, const Subspace& b) {
  require(a.ambient_dim() == b.ambient_dim(), "intersect: ambient mismatch");
  // (a cap b)^perp = a^perp + b^perp
  std::vector<BitVector> gens = dual(a).basis();
  const Subspace db = dual(b);
  gens.insert(gens.end(), db.basis().begin(), db.basis().end());
  return dual(Subspace(a.ambient_dim(), gens));
}

// ---------------------------------------------------------------- maps

std::vector<BitMatrix> symmetric_basis(std::size_t m) {
  std::vector<BitMatrix> out;
  for (std::size_t i = 0; i < m; ++i) {
    BitMatrix E(m, m);
    E.set(i, i, true);
    out.push_back(E);
    for (std::size_t j = i + 1; j < m; ++j) {
      BitMatrix S(m, m);
      S.set(i, j, true);
      S.set(j, i, true);
      out.push_back(S);
    }
  }
  return out;
}

MatrixSpaceMap MatrixSpaceMap::conjugation(BitMatrix rho) {
  const std::size_t r = rho.rows(), m = rho.cols();
  require(r >= 1 && m >= 1, "MatrixSpaceMap: empty rho");
  return MatrixSpaceMap(Form::Conjugation, m, r, std::move(rho));
}

MatrixSpaceMap MatrixSpaceMap::general(std::size_t m, std::size_t r, BitMatrix matrix) {
  require(matrix.rows() == r * r && matrix.cols() == m * m,
          "MatrixSpaceMap::general: matrix must be r^2 x m^2");
  MatrixSpaceMap map(Form::General, m, r, std::move(matrix));
  if (!map.preserves_symmetry())
    throw std::invalid_argument("MatrixSpaceMap::general: map does not send symmetric matrices to symmetric matrices");
  return map;
}

BitMatrix MatrixSpaceMap::apply(const BitMatrix& alpha) const {
  require(alpha.rows() == m_ && alpha.cols() == m_, "MatrixSpaceMap::apply: input must be m x m");
  if (form_ == Form::Conjugation) return matrix_ * alpha * matrix_.transpose();
  return BitMatrix::unflatten(matrix_.apply(alpha.flatten()), r_, r_);
}

bool MatrixSpaceMap::preserves_symmetry() const {
  for (const auto& b : symmetric_basis(m_))
    if (!apply(b).is_symmetric()) return false;
  return true;
}

BitMatrix adjoint_apply(const BitMatrix& X, const MatrixSpaceMap& pi) {
  require(X.rows() == pi.r() && X.cols() == pi.r(), "adjoint_apply: X must be r x r");
  if (pi.form() == MatrixSpaceMap::Form::Conjugation) return pi.rho().transpose() * X * pi.rho();
  return BitMatrix::unflatten(pi.matrix().transpose().apply(X.flatten()), pi.m(), pi.m());
}

LinearCodeMap forward_code_map(const MatrixSpaceMap& pi) {
  const std::size_t n = pi.m() * pi.m();
  require(n <= 64 && pi.r() * pi.r() <= 64, "forward_code_map: dimension exceeds 64");
  std::vector<std::uint64_t> images(n);
  for (std::size_t b = 0; b < n; ++b)
    images[b] = pi.apply(BitMatrix::from_code(std::uint64_t{1} << b, pi.m(), pi.m())).code();
  return LinearCodeMap(std::move(images));
}

LinearCodeMap adjoint_code_map(const MatrixSpaceMap& pi) {
  const std::size_t n = pi.r() * pi.r();
  require(n <= 64 && pi.m() * pi.m() <= 64, "adjoint_code_map: dimension exceeds 64");
  std::vector<std::uint64_t> images(n);
  for (std::size_t b = 0; b < n; ++b)
    images[b] = adjoint_apply(BitMatrix::from_code(std::uint64_t{1} << b, pi.r(), pi.r()), pi).code();
  return LinearCodeMap(std::move(images));
}

// ---------------------------------------------------------------- codes

std::uint64_t outer_code(std::uint64_t x, std::uint64_t y, std::size_t m) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < m; ++i)
    if ((x >> i) & 1) c |= y << (i * m);
  return c;
}

std::uint64_t transpose_code(std::uint64_t a, std::size_t m) {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if ((a >> (i * m + j)) & 1) t |= std::uint64_t{1} << (j * m + i);
  return t;
}

std::size_t rank_code(std::uint64_t a, std::size_t rows, std::size_t cols) {
  std::uint64_t basis[64] = {};
  std::size_t r = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    std::uint64_t v = code_row(a, i, cols);
    for (std::size_t k = 0; k < r; ++k) v = std::min(v, v ^ basis[k]);
    if (v) {
      basis[r++] = v;
      // keep basis sorted descending so the min-trick reduces by leading bit
      std::sort(basis, basis + r, std::greater<>());
    }
  }
  return r;
}

std::uint64_t apply_code(std::uint64_t a, std::uint64_t x, std::size_t m) {
  std::uint64_t y = 0;
  for (std::size_t i = 0; i < m; ++i) y |= std::uint64_t(parity(code_row(a, i, m) & x)) << i;
  return y;
}

std::uint64_t affine_solution_count(std::span<const std::uint64_t> rows, std::span<const int> rhs,
                                    std::size_t n) {
  require(rows.size() == rhs.size(), "affine_solution_count: rows/rhs mismatch");
  require(n < 64, "affine_solution_count: n must be < 64");
  // Augmented rows: bit n holds the right-hand side.
  std::vector<std::uint64_t> basis;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::uint64_t v = (rows[i] & low_mask(n)) | (std::uint64_t(rhs[i] & 1) << n);
    for (auto b : basis) v = std::min(v, v ^ b);
    if (v) {
      basis.push_back(v);
      std::sort(basis.begin(), basis.end(), std::greater<>());
    }
  }
  // Inconsistent iff the lone right-hand-side bit (the equation 0 = 1) is in the row space.
  std::uint64_t w = std::uint64_t{1} << n;
  for (auto b : basis) w = std::min(w, w ^ b);
  if (w == 0) return 0;
  return std::uint64_t{1} << (n - basis.size());
}

std::uint64_t extract_bits(std::uint64_t x, std::uint64_t mask) {
  std::uint64_t out = 0;
  unsigned k = 0;
  while (mask) {
    const unsigned b = std::countr_zero(mask);
    out |= ((x >> b) & 1) << k++;
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t deposit_bits(std::uint64_t x, std::uint64_t mask) {
  std::uint64_t out = 0;
  unsigned k = 0;
  while (mask) {
    const unsigned b = std::countr_zero(mask);
    out |= ((x >> k++) & 1) << b;
    mask &= mask - 1;
  }
  return out;
}

}  // namespace qcpcp
