#include "qcpcp/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "qcpcp/rng.hpp"
#include "qcpcp/walsh.hpp"

namespace qcpcp {

TestMode test_mode_from_int(int mode) {
  if (mode == 28) return TestMode::T28;
  if (mode == 44) return TestMode::T44;
  throw std::invalid_argument("mode must be 28 or 44, got " + std::to_string(mode));
}

FoldedColoring::Domain domain_of(TestMode mode) {
  return mode == TestMode::T28 ? FoldedColoring::Domain::Cosets : FoldedColoring::Domain::CosetPairs;
}

Reduction::Reduction(LabelCoverInstance inst) : inst_(std::move(inst)), spaces_(build_folding_spaces(inst_)) {
  for (const auto& e : inst_.edges()) {
    forward_.push_back(forward_code_map(e.pi));
    adjoint_.push_back(adjoint_code_map(e.pi));
  }
}

std::uint64_t Reduction::block_size(std::size_t v, TestMode mode) const {
  const std::uint64_t cc = spaces_.at(v).coset_count();
  return mode == TestMode::T28 ? cc : cc * cc;
}

// ---------------------------------------------------------------- sampling

QueryTuple8 queries_from_randomness(const Reduction& red, const TestRandomness& t) {
  const auto& inst = red.instance();
  const std::size_t m = red.m(), r = red.r();
  if (t.edge_v >= inst.edges().size() || t.edge_w >= inst.edges().size())
    throw DimensionError("queries: edge index out of range");
  const auto& ev = inst.edge(t.edge_v);
  const auto& ew = inst.edge(t.edge_w);
  if (ev.u != t.u || ew.u != t.u || ev.v != t.v || ew.v != t.w)
    throw DimensionError("queries: edges do not match (u, v, w)");
  for (const auto* X : {&t.X1, &t.X2, &t.Y1, &t.Y2})
    if (X->rows() != m || X->cols() != m) throw DimensionError("queries: X and Y must be m x m");
  for (const auto* x : {&t.xbar, &t.ybar, &t.zbar, &t.xbar2, &t.ybar2, &t.zbar2})
    if (x->size() != m) throw DimensionError("queries: vectors must have length m");
  if (t.F.rows() != r || t.F.cols() != r) throw DimensionError("queries: F must be r x r");

  const BitVector e = BitVector::unit(m, m - 1);
  const BitMatrix E = outer_product(e, e);
  const BitMatrix Fp = adjoint_apply(t.F, ev.pi);
  const BitMatrix Fs = adjoint_apply(t.F, ew.pi);

  QueryTuple8 q;
  q.matrices[0] = t.X1;
  q.matrices[1] = t.X2;
  q.matrices[2] = t.X1 + outer_product(t.xbar, t.ybar) + Fp;
  q.matrices[3] = t.X2 + outer_product(t.xbar + e, t.zbar) + Fp;
  q.matrices[4] = t.Y1;
  q.matrices[5] = t.Y2;
  q.matrices[6] = t.Y1 + outer_product(t.xbar2, t.ybar2) + Fs + E;
  q.matrices[7] = t.Y2 + outer_product(t.xbar2 + e, t.zbar2) + Fs + E;
  for (std::size_t i = 0; i < 8; ++i) {
    const std::size_t vert = i < 4 ? t.v : t.w;
    q.queries[i] = {vert, red.space(vert).coset_index(q.matrices[i])};
  }
  return q;
}

std::array<Query, 4> pair_queries(const Reduction& red, const QueryTuple8& s) {
  std::array<Query, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Query& a = s.queries[2 * i];
    const Query& b = s.queries[2 * i + 1];
    out[i] = {a.vertex, a.coset * red.space(a.vertex).coset_count() + b.coset};
  }
  return out;
}

TestRandomness sample_randomness(const Reduction& red, Rng& rng) {
  const auto& inst = red.instance();
  const std::size_t m = red.m(), r = red.r();
  TestRandomness t;
  t.u = rng.below(inst.num_u());
  const auto& eu = inst.edges_of_u(t.u);
  t.edge_v = eu[rng.below(eu.size())];
  t.edge_w = eu[rng.below(eu.size())];
  t.v = inst.edge(t.edge_v).v;
  t.w = inst.edge(t.edge_w).v;
  t.X1 = BitMatrix::random(m, m, rng);
  t.X2 = BitMatrix::random(m, m, rng);
  t.Y1 = BitMatrix::random(m, m, rng);
  t.Y2 = BitMatrix::random(m, m, rng);
  t.xbar = BitVector::random(m, rng);
  t.ybar = BitVector::random(m, rng);
  t.zbar = BitVector::random(m, rng);
  t.xbar2 = BitVector::random(m, rng);
  t.ybar2 = BitVector::random(m, rng);
  t.zbar2 = BitVector::random(m, rng);
  t.F = BitMatrix::random(r, r, rng);
  return t;
}

Sample28 sample_test_28(const Reduction& red, Rng& rng) {
  Sample28 s;
  s.randomness = sample_randomness(red, rng);
  s.tuple = queries_from_randomness(red, s.randomness);
  return s;
}

Sample44 sample_test_44(const Reduction& red, Rng& rng) {
  Sample44 s;
  s.randomness = sample_randomness(red, rng);
  s.singles = queries_from_randomness(red, s.randomness);
  s.pairs = pair_queries(red, s.singles);
  return s;
}

bool check_edge(std::span<const int> colors) {
  if (colors.empty()) throw std::invalid_argument("check_edge: no colors");
  for (int c : colors)
    if (c != colors.front()) return true;
  return false;
}

std::vector<int> observed_colors(const Reduction& red, const FoldedColoring& col, const Sample28& s) {
  if (col.domain() != FoldedColoring::Domain::Cosets) throw std::invalid_argument("T28 needs a coset coloring");
  col.validate(red.spaces());
  std::vector<int> out;
  for (const auto& q : s.tuple.queries) out.push_back(col.table(q.vertex)[q.coset]);
  return out;
}

std::vector<int> observed_colors(const Reduction& red, const FoldedColoring& col, const Sample44& s) {
  if (col.domain() != FoldedColoring::Domain::CosetPairs)
    throw std::invalid_argument("T44 needs a coset-pair coloring");
  col.validate(red.spaces());
  std::vector<int> out;
  for (const auto& q : s.pairs) out.push_back(col.table(q.vertex)[q.coset]);
  return out;
}

// ---------------------------------------------------------------- exact Theta

namespace {

using u128 = unsigned __int128;

// Per-vertex data for the factored sums: the autocorrelation of the table and
// the coset index of every x (x) y.
struct VertexData {
  std::vector<std::int64_t> R;
  std::vector<std::uint64_t> outer_idx;  // [x << m | y]
  std::uint64_t cc = 0;
};

// Sum over the vector randomness of one side, for a fixed F whose image on
// this side has coset index `shift`:
//   T28: sum_x (sum_y R[d1]) (sum_z R[d2])
//   T44: sum_{x,y,z} R2[d1, d2]
// with d1 = idx(x (x) y) ^ shift, d2 = idx((x + e) (x) z) ^ shift.
u128 side_sum(const VertexData& d, std::size_t m, std::uint64_t shift, TestMode mode) {
  const std::uint64_t M = std::uint64_t{1} << m;
  const std::uint64_t e = std::uint64_t{1} << (m - 1);
  u128 total = 0;
  for (std::uint64_t x = 0; x < M; ++x) {
    const std::uint64_t* row1 = &d.outer_idx[x << m];
    const std::uint64_t* row2 = &d.outer_idx[(x ^ e) << m];
    if (mode == TestMode::T28) {
      std::uint64_t p1 = 0, p2 = 0;
      for (std::uint64_t y = 0; y < M; ++y) p1 += d.R[row1[y] ^ shift];
      for (std::uint64_t z = 0; z < M; ++z) p2 += d.R[row2[z] ^ shift];
      total += u128(p1) * p2;
    } else {
      for (std::uint64_t y = 0; y < M; ++y) {
        const std::uint64_t base = (row1[y] ^ shift) * d.cc;
        for (std::uint64_t z = 0; z < M; ++z) total += d.R[base + (row2[z] ^ shift)];
      }
    }
  }
  return total;
}

void require_indicator(const Reduction& red, const FoldedColoring& col, TestMode mode) {
  if (col.colors() != 2) throw std::invalid_argument("Theta needs a 0/1 indicator coloring");
  if (col.domain() != domain_of(mode))
    throw std::invalid_argument("coloring domain does not match test mode " +
                                std::to_string(static_cast<int>(mode)));
  col.validate(red.spaces());
}

}  // namespace

Rational independence_theta(const Reduction& red, const FoldedColoring& ind, TestMode mode) {
  require_indicator(red, ind, mode);
  const auto& inst = red.instance();
  const std::size_t m = red.m(), r = red.r();
  const std::uint64_t M = std::uint64_t{1} << m;

  std::vector<VertexData> data(inst.num_v());
  for (std::size_t v = 0; v < inst.num_v(); ++v) {
    auto& d = data[v];
    const auto& s = red.space(v);
    d.cc = s.coset_count();
    d.R = autocorrelation(ind.table(v));
    d.outer_idx.resize(M * M);
    for (std::uint64_t x = 0; x < M; ++x)
      for (std::uint64_t y = 0; y < M; ++y) d.outer_idx[x << m | y] = s.coset_index(outer_code(x, y, m));
  }

  const std::uint64_t num_F = std::uint64_t{1} << (r * r);
  Rational total = 0;
  for (std::size_t u = 0; u < inst.num_u(); ++u) {
    const auto& eu = inst.edges_of_u(u);
    Rational acc_u = 0;
    for (std::size_t ev : eu)
      for (std::size_t ew : eu) {
        const std::size_t v = inst.edge(ev).v, w = inst.edge(ew).v;
        const auto& sv = red.space(v);
        const auto& sw = red.space(w);
        const std::uint64_t corner_w = sw.coset_index(red.corner_code());
        u128 numer = 0;
        for (std::uint64_t F = 0; F < num_F; ++F) {
          const u128 a = side_sum(data[v], m, sv.coset_index(red.adjoint(ev)(F)), mode);
          if (a == 0) continue;
          numer += a * side_sum(data[w], m, sw.coset_index(red.adjoint(ew)(F)) ^ corner_w, mode);
        }
        // Denominator: F, six vectors, and the X / Y averages (cc per coset, squared).
        const BigInt den = BigInt(num_F) * (BigInt(1) << (6 * m)) * BigInt(data[v].cc * data[v].cc) *
                           BigInt(data[w].cc * data[w].cc);
        acc_u += Rational(bigint_from_u128(numer), den);
      }
    total += acc_u / (eu.size() * eu.size());
  }
  return total / inst.num_u();
}

Rational acceptance_probability(const Reduction& red, const FoldedColoring& col, TestMode mode) {
  if (col.domain() != domain_of(mode)) throw std::invalid_argument("coloring domain does not match test mode");
  Rational p = 1;
  for (int c = 0; c < col.colors(); ++c) p -= independence_theta(red, col.indicator(c), mode);
  return p;
}

MonteCarloEstimate monte_carlo_theta(const Reduction& red, const FoldedColoring& ind, TestMode mode,
                                     std::uint64_t samples, Rng& rng) {
  require_indicator(red, ind, mode);
  if (samples == 0) throw std::invalid_argument("monte_carlo_theta: need at least one sample");
  MonteCarloEstimate est;
  est.samples = samples;
  for (std::uint64_t i = 0; i < samples; ++i) {
    bool all = true;
    if (mode == TestMode::T28) {
      const auto s = sample_test_28(red, rng);
      for (const auto& q : s.tuple.queries) all = all && ind.table(q.vertex)[q.coset] == 1;
    } else {
      const auto s = sample_test_44(red, rng);
      for (const auto& q : s.pairs) all = all && ind.table(q.vertex)[q.coset] == 1;
    }
    est.hits += all;
  }
  const double n = static_cast<double>(samples);
  const double p = est.hits / n;
  est.mean = p;
  est.std_error = std::sqrt(p * (1 - p) / n);
  // Wilson score interval at z = 3; stays honest when hits is 0 or n.
  const double z = 3.0, z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  est.lo = std::max(0.0, centre - half);
  est.hi = std::min(1.0, centre + half);
  return est;
}

// ---------------------------------------------------------------- completeness

CompletenessReport completeness_check(const Reduction& red, const PlantedLabeling& lab, TestMode mode) {
  const auto& inst = red.instance();
  const auto lr = verify_labeling(inst, lab);
  if (!lr.perfect()) throw std::invalid_argument("completeness_check: labeling is not a perfect YES labeling");

  CompletenessReport rep;
  rep.acceptance = acceptance_probability(red, honest_coloring(red.spaces(), lab, domain_of(mode)), mode);

  const std::size_t m = red.m(), r = red.r();
  const std::size_t bits = r * r + 6 * m;
  const bool exhaustive = bits <= 22;
  const std::uint64_t outcomes = exhaustive ? std::uint64_t{1} << bits : std::uint64_t{1} << 16;
  const std::uint64_t e = red.last_unit();
  Rng rng(0x51ab1e);

  for (std::size_t u = 0; u < inst.num_u(); ++u) {
    const std::uint64_t xu = lab.x[u].to_word();
    const std::uint64_t xx = outer_code(xu, xu, r);
    for (std::size_t ev : inst.edges_of_u(u))
      for (std::size_t ew : inst.edges_of_u(u)) {
        const std::uint64_t yv = lab.y[inst.edge(ev).v].to_word();
        const std::uint64_t yw = lab.y[inst.edge(ew).v].to_word();
        const std::uint64_t yyv = outer_code(yv, yv, m), yyw = outer_code(yw, yw, m);
        const std::uint64_t E = red.corner_code();
        for (std::uint64_t o = 0; o < outcomes; ++o) {
          const std::uint64_t w = exhaustive ? o : rng.bits(static_cast<unsigned>(bits));
          std::uint64_t vec[6];
          for (std::size_t i = 0; i < 6; ++i) vec[i] = (w >> (i * m)) & low_mask(m);
          const std::uint64_t F = w >> (6 * m);
          const auto [x, y, z, x2, y2, z2] = std::tuple(vec[0], vec[1], vec[2], vec[3], vec[4], vec[5]);
          const std::uint64_t Fp = red.adjoint(ev)(F), Fs = red.adjoint(ew)(F);

          // Offsets A(X3) - A(X1), ... as actually evaluated.
          const int d1 = parity((outer_code(x, y, m) ^ Fp) & yyv);
          const int d2 = parity((outer_code(x ^ e, z, m) ^ Fp) & yyv);
          const int d3 = parity((outer_code(x2, y2, m) ^ Fs ^ E) & yyw);
          const int d4 = parity((outer_code(x2 ^ e, z2, m) ^ Fs ^ E) & yyw);
          // The same offsets from the displayed table.
          const int f = parity(F & xx);
          const int t1 = (parity(yv & x) & parity(yv & y)) ^ f;
          const int t2 = ((parity(yv & x) ^ 1) & parity(yv & z)) ^ f;
          const int t3 = (parity(yw & x2) & parity(yw & y2)) ^ f ^ 1;
          const int t4 = ((parity(yw & x2) ^ 1) & parity(yw & z2)) ^ f ^ 1;

          ++rep.table_checks;
          if (d1 != t1 || d2 != t2 || d3 != t3 || d4 != t4) ++rep.table_mismatches;
          if (!(d1 | d2 | d3 | d4)) ++rep.all_rows_equal;
        }
      }
  }
  return rep;
}

}  // namespace qcpcp
