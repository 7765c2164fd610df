#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "qcpcp/hypergraph.hpp"
#include "qcpcp/oracle.hpp"
#include "qcpcp/rng.hpp"
#include "qcpcp/verifier.hpp"

using namespace qcpcp;

namespace {

GeneratedInstance yes(std::uint64_t seed, std::size_t m = 2) {
  YesInstanceParams p;
  p.m = m;
  p.seed = seed;
  return generate_yes_instance(p);
}

// Random table over the domain of the mode with values in [0, colors).
FoldedColoring random_coloring(const Reduction& red, TestMode mode, int colors, Rng& rng) {
  std::vector<std::vector<std::uint8_t>> tables;
  for (std::size_t v = 0; v < red.spaces().size(); ++v) {
    std::vector<std::uint8_t> t(red.block_size(v, mode));
    for (auto& x : t) x = static_cast<std::uint8_t>(rng.below(colors));
    tables.push_back(std::move(t));
  }
  return FoldedColoring(domain_of(mode), colors, std::move(tables));
}

FoldedColoring sparse_indicator(const Reduction& red, TestMode mode, std::uint64_t num, std::uint64_t den,
                                Rng& rng) {
  std::vector<std::vector<std::uint8_t>> tables;
  for (std::size_t v = 0; v < red.spaces().size(); ++v) {
    std::vector<std::uint8_t> t(red.block_size(v, mode));
    for (auto& x : t) x = rng.bernoulli(num, den);
    tables.push_back(std::move(t));
  }
  return FoldedColoring(domain_of(mode), 2, std::move(tables));
}

FoldedColoring constant(const Reduction& red, TestMode mode, int colors, std::uint8_t c) {
  std::vector<std::vector<std::uint8_t>> tables;
  for (std::size_t v = 0; v < red.spaces().size(); ++v) tables.emplace_back(red.block_size(v, mode), c);
  return FoldedColoring(domain_of(mode), colors, std::move(tables));
}

std::vector<std::uint32_t> ones(const Hypergraph& h, const FoldedColoring& ind) {
  std::vector<std::uint32_t> out;
  const auto c = vertex_colors(h, ind);
  for (std::uint32_t i = 0; i < c.size(); ++i)
    if (c[i] == 1) out.push_back(i);
  return out;
}

// The edge list is sorted lexicographically.
bool has_edge(const Hypergraph& h, std::span<const std::uint32_t> e) {
  std::size_t lo = 0, hi = h.edges.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto x = h.edges[mid];
    if (std::lexicographical_compare(x.begin(), x.end(), e.begin(), e.end())) lo = mid + 1;
    else hi = mid;
  }
  return lo < h.edges.size() && std::ranges::equal(h.edges[lo], e);
}

}  // namespace

TEST(CheckEdge, NotAllEqual) {
  EXPECT_FALSE(check_edge(std::vector<int>{0, 0, 0, 0}));
  EXPECT_TRUE(check_edge(std::vector<int>{0, 0, 1, 0}));
  EXPECT_FALSE(check_edge(std::vector<int>{3}));
  EXPECT_TRUE(check_edge(std::vector<int>{2, 3}));
  EXPECT_THROW(check_edge(std::vector<int>{}), std::invalid_argument);
}

TEST(TestMode, OnlyTwoModes) {
  EXPECT_EQ(test_mode_from_int(28), TestMode::T28);
  EXPECT_EQ(test_mode_from_int(44), TestMode::T44);
  EXPECT_THROW(test_mode_from_int(8), std::invalid_argument);
}

// The offsets carry exactly <y,x><y,ybar> + <F, x_u (x) x_u> (plus 1 on the w side)
// against y_v (x) y_v, which is what makes the honest coloring pass.
TEST(Queries, OffsetsAgainstPlantedSquares) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = yes(seed, 2 + seed % 2);
    const Reduction red(g.instance);
    Rng rng(seed);
    for (int i = 0; i < 1000; ++i) {
      const auto s = sample_test_28(red, rng);
      const auto& t = s.randomness;
      const auto& yv = g.planted.y[t.v];
      const auto& yw = g.planted.y[t.w];
      const auto& xu = g.planted.x[t.u];
      const auto V = outer_product(yv, yv), Wm = outer_product(yw, yw);
      const int f = mat_inner(t.F, outer_product(xu, xu));
      const int ev = yv.get(red.m() - 1), ew = yw.get(red.m() - 1);
      const auto& M = s.tuple.matrices;
      EXPECT_EQ(mat_inner(M[2] + M[0], V), (yv.dot(t.xbar) & yv.dot(t.ybar)) ^ f);
      EXPECT_EQ(mat_inner(M[3] + M[1], V), ((yv.dot(t.xbar) ^ ev) & yv.dot(t.zbar)) ^ f);
      EXPECT_EQ(mat_inner(M[6] + M[4], Wm), (yw.dot(t.xbar2) & yw.dot(t.ybar2)) ^ f ^ ew);
      EXPECT_EQ(mat_inner(M[7] + M[5], Wm), ((yw.dot(t.xbar2) ^ ew) & yw.dot(t.zbar2)) ^ f ^ ew);
    }
  }
}

TEST(Queries, ZeroVectorsLeaveOnlyF) {
  const auto g = yes(3);
  const Reduction red(g.instance);
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    auto t = sample_randomness(red, rng);
    t.xbar = BitVector(red.m());
    t.zbar = BitVector(red.m());
    t.xbar2 = BitVector(red.m());
    t.zbar2 = BitVector(red.m());
    const auto q = queries_from_randomness(red, t);
    const auto Fp = adjoint_apply(t.F, g.instance.edge(t.edge_v).pi);
    const auto Fs = adjoint_apply(t.F, g.instance.edge(t.edge_w).pi);
    const auto E = outer_product(BitVector::unit(red.m(), red.m() - 1), BitVector::unit(red.m(), red.m() - 1));
    EXPECT_EQ(q.matrices[2], t.X1 + Fp);
    EXPECT_EQ(q.matrices[3], t.X2 + Fp);
    EXPECT_EQ(q.matrices[6], t.Y1 + Fs + E);
    EXPECT_EQ(q.matrices[7], t.Y2 + Fs + E);
    for (std::size_t j = 0; j < 8; ++j)
      EXPECT_EQ(q.queries[j].coset, red.space(q.queries[j].vertex).coset_index(q.matrices[j]));
  }
}

TEST(Queries, RejectsMismatchedRandomness) {
  const auto g = yes(4);
  const Reduction red(g.instance);
  Rng rng(1);
  auto t = sample_randomness(red, rng);
  auto bad = t;
  bad.F = BitMatrix(red.r() + 1, red.r() + 1);
  EXPECT_THROW(queries_from_randomness(red, bad), DimensionError);
  bad = t;
  bad.X1 = BitMatrix(red.m() + 1, red.m());
  EXPECT_THROW(queries_from_randomness(red, bad), DimensionError);
  bad = t;
  bad.u = (t.u + 1) % g.instance.num_u();
  EXPECT_THROW(queries_from_randomness(red, bad), DimensionError);
}

TEST(Sampling, FirstQueryCosetIsUniform) {
  const auto g = yes(5);
  const Reduction red(g.instance);
  Rng rng(17);
  const std::size_t samples = 100'000;
  std::map<std::size_t, std::vector<std::uint64_t>> counts;
  std::map<std::size_t, std::uint64_t> totals;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto s = sample_test_28(red, rng);
    const auto q = s.tuple.queries[0];
    auto& c = counts[q.vertex];
    c.resize(red.space(q.vertex).coset_count());
    ++c[q.coset];
    ++totals[q.vertex];
  }
  for (const auto& [v, c] : counts) {
    const double expect = static_cast<double>(totals[v]) / c.size();
    double chi2 = 0;
    for (auto x : c) chi2 += (x - expect) * (x - expect) / expect;
    const double df = static_cast<double>(c.size() - 1);
    EXPECT_LT(chi2, df + 5 * std::sqrt(2 * df)) << "vertex " << v;
  }
}

TEST(Sampling, SeededDeterminism) {
  const auto g = yes(6);
  const Reduction red(g.instance);
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    const auto s = sample_test_44(red, a), t = sample_test_44(red, b);
    EXPECT_EQ(s.pairs, t.pairs);
    EXPECT_EQ(s.singles.matrices, t.singles.matrices);
  }
}

TEST(Sampling, PairsProjectToSingles) {
  const auto g = yes(7);
  const Reduction red(g.instance);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto s = sample_test_44(red, rng);
    for (std::size_t j = 0; j < 4; ++j) {
      const auto& a = s.singles.queries[2 * j];
      const auto& b = s.singles.queries[2 * j + 1];
      const auto cc = red.space(a.vertex).coset_count();
      EXPECT_EQ(a.vertex, b.vertex);
      EXPECT_EQ(s.pairs[j].vertex, a.vertex);
      EXPECT_EQ(s.pairs[j].coset / cc, a.coset);
      EXPECT_EQ(s.pairs[j].coset % cc, b.coset);
      EXPECT_LT(s.pairs[j].coset, red.block_size(a.vertex, TestMode::T44));
    }
  }
  for (std::size_t v = 0; v < red.spaces().size(); ++v) {
    const auto cc = red.space(v).coset_count();
    EXPECT_EQ(red.block_size(v, TestMode::T28), cc);
    EXPECT_EQ(red.block_size(v, TestMode::T44), cc * cc);
  }
}

TEST(Completeness, HonestColoringsAlwaysAccepted) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = yes(seed, 2 + seed % 2);
    const Reduction red(g.instance);
    for (auto mode : {TestMode::T28, TestMode::T44}) {
      const auto rep = completeness_check(red, g.planted, mode);
      EXPECT_TRUE(rep.ok()) << "seed " << seed;
      EXPECT_GT(rep.table_checks, 0u);
      const auto col = honest_coloring(red.spaces(), g.planted, domain_of(mode));
      EXPECT_EQ(acceptance_probability(red, col, mode), 1);
    }
  }
}

TEST(Completeness, SampledHonestRunsNeverReject) {
  const auto g = yes(8);
  const Reduction red(g.instance);
  const auto c28 = honest_coloring(red.spaces(), g.planted, FoldedColoring::Domain::Cosets);
  const auto c44 = honest_coloring(red.spaces(), g.planted, FoldedColoring::Domain::CosetPairs);
  Rng rng(1);
  for (int i = 0; i < 5000; ++i) {
    EXPECT_TRUE(check_edge(observed_colors(red, c28, sample_test_28(red, rng))));
    EXPECT_TRUE(check_edge(observed_colors(red, c44, sample_test_44(red, rng))));
  }
}

TEST(Completeness, ConstantColoringAlwaysRejected) {
  const auto g = yes(9);
  const Reduction red(g.instance);
  EXPECT_EQ(acceptance_probability(red, constant(red, TestMode::T28, 2, 0), TestMode::T28), 0);
  EXPECT_EQ(acceptance_probability(red, constant(red, TestMode::T44, 4, 2), TestMode::T44), 0);
}

TEST(Completeness, RejectsImperfectLabeling) {
  auto g = yes(10);
  const Reduction red(g.instance);
  g.planted.x[0].flip(0);
  EXPECT_THROW(completeness_check(red, g.planted, TestMode::T28), std::invalid_argument);
}

TEST(Theta, HonestClassesAreIndependentAndFullSetIsNot) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = yes(seed);
    const Reduction red(g.instance);
    for (auto mode : {TestMode::T28, TestMode::T44}) {
      const auto col = honest_coloring(red.spaces(), g.planted, domain_of(mode));
      for (int c = 0; c < col.colors(); ++c) EXPECT_EQ(independence_theta(red, col.indicator(c), mode), 0);
      EXPECT_EQ(independence_theta(red, constant(red, mode, 2, 1), mode), 1);
      EXPECT_EQ(independence_theta(red, constant(red, mode, 2, 0), mode), 0);
    }
  }
}

TEST(Theta, RejectsWrongDomain) {
  const auto g = yes(1);
  const Reduction red(g.instance);
  EXPECT_THROW(independence_theta(red, constant(red, TestMode::T44, 2, 1), TestMode::T28), std::invalid_argument);
  EXPECT_THROW(independence_theta(red, constant(red, TestMode::T28, 4, 3), TestMode::T28), std::invalid_argument);
}

TEST(Theta, AcceptanceIsOneMinusSumOfThetas) {
  Rng rng(21);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = yes(seed);
    const Reduction red(g.instance);
    for (auto [mode, q] : {std::pair{TestMode::T28, 2}, std::pair{TestMode::T44, 4}}) {
      const auto col = random_coloring(red, mode, q, rng);
      Rational sum = 0;
      for (int c = 0; c < q; ++c) sum += independence_theta(red, col.indicator(c), mode);
      EXPECT_EQ(acceptance_probability(red, col, mode), 1 - sum);
    }
  }
}

// Theta = 0 iff no hyperedge lies inside the set, checked by a plain scan.
TEST(Theta, ZeroIffHypergraphIndependent) {
  Rng rng(23);
  int zero = 0, positive = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto g = yes(seed);
    const Reduction red(g.instance);
    for (auto mode : {TestMode::T28, TestMode::T44}) {
      const auto h = build_hypergraph(red, mode, {2, 100'000'000});
      for (int trial = 0; trial < 6; ++trial) {
        const auto ind = sparse_indicator(red, mode, 1 + trial, 8, rng);
        const bool is_zero = independence_theta(red, ind, mode) == 0;
        EXPECT_EQ(is_zero, is_independent(h, ones(h, ind)));
        (is_zero ? zero : positive)++;
      }
      const auto honest = honest_coloring(red.spaces(), g.planted, domain_of(mode));
      EXPECT_TRUE(is_independent(h, ones(h, honest.indicator(0))));
      ++zero;
    }
  }
  EXPECT_GT(zero, 0);
  EXPECT_GT(positive, 0);
}

// Every sampled run of the test lands on a hyperedge (after merging repeats).
TEST(Hypergraph, SampledRunsAreEdges) {
  Rng rng(29);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto g = yes(seed);
    const Reduction red(g.instance);
    for (auto mode : {TestMode::T28, TestMode::T44}) {
      const auto h = build_hypergraph(red, mode, {2, 100'000'000});
      const auto col = random_coloring(red, mode, mode == TestMode::T28 ? 2 : 4, rng);
      const auto colors = vertex_colors(h, col);
      for (int i = 0; i < 2000; ++i) {
        std::vector<std::uint32_t> ids;
        std::vector<int> seen;
        if (mode == TestMode::T28) {
          const auto s = sample_test_28(red, rng);
          for (const auto& q : s.tuple.queries) ids.push_back(h.id(q.vertex, q.coset));
          seen = observed_colors(red, col, s);
        } else {
          const auto s = sample_test_44(red, rng);
          for (const auto& q : s.pairs) ids.push_back(h.id(q.vertex, q.coset));
          seen = observed_colors(red, col, s);
        }
        std::vector<int> via_graph;
        for (auto id : ids) via_graph.push_back(colors[id]);
        EXPECT_EQ(seen, via_graph);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (ids.size() > 1) {
          EXPECT_TRUE(has_edge(h, ids)) << "seed " << seed;
        }
      }
    }
  }
}

TEST(MonteCarlo, IntervalCoversExactTheta) {
  Rng rng(31);
  int covered = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = yes(seed);
    const Reduction red(g.instance);
    for (auto mode : {TestMode::T28, TestMode::T44}) {
      for (std::uint64_t num : {4, 6, 7}) {
        const auto ind = sparse_indicator(red, mode, num, 8, rng);
        const double exact = to_double(independence_theta(red, ind, mode));
        const auto est = monte_carlo_theta(red, ind, mode, 40'000, rng);
        EXPECT_EQ(est.samples, 40'000u);
        EXPECT_LE(est.lo, est.hi);
        covered += est.covers(exact);
        ++total;
      }
    }
  }
  // 3-sigma intervals; allow one miss in thirty.
  EXPECT_GE(covered, total - 1);
}
