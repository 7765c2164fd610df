#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "qcpcp/hypergraph.hpp"
#include "qcpcp/oracle.hpp"
#include "qcpcp/rng.hpp"

using namespace qcpcp;

namespace {

Hypergraph hand(std::size_t n, std::vector<std::vector<std::uint32_t>> edges) {
  Hypergraph h;
  h.n = n;
  h.uniformity = 0;
  h.offsets = {0};
  for (std::size_t i = 0; i < n; ++i) h.vertices.push_back({0, i});
  for (auto& e : edges) {
    std::sort(e.begin(), e.end());
    h.uniformity = std::max<int>(h.uniformity, static_cast<int>(e.size()));
    h.edges.push_back(std::span<const std::uint32_t>(e));
  }
  h.edges.sort();
  return h;
}

Reduction reduction(std::uint64_t seed, std::size_t num_constraints = 1) {
  YesInstanceParams p;
  p.seed = seed;
  p.num_constraints = num_constraints;
  return Reduction(generate_yes_instance(p).instance);
}

// Exhaustive reference for tiny hypergraphs.
std::size_t brute_mis(const Hypergraph& h) {
  std::size_t best = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << h.n); ++s) {
    bool ok = true;
    for (const auto e : h.edges) {
      bool inside = true;
      for (auto x : e) inside &= (s >> x) & 1;
      if (inside) {
        ok = false;
        break;
      }
    }
    if (ok) best = std::max<std::size_t>(best, std::popcount(s));
  }
  return best;
}

bool brute_colorable(const Hypergraph& h, int q) {
  std::vector<int> c(h.n, 0);
  while (true) {
    if (count_monochromatic(h, c) == 0) return true;
    std::size_t i = 0;
    while (i < h.n && ++c[i] == q) c[i++] = 0;
    if (i == h.n) return false;
  }
}

}  // namespace

TEST(EdgeList, PackAndSort) {
  EdgeList a;
  a.push_back({3, 4});
  a.push_back({0, 1, 2});
  a.push_back({0, 5});
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.total_ids(), 7u);
  a.sort();
  std::vector<std::vector<std::uint32_t>> got;
  for (const auto e : a) got.emplace_back(e.begin(), e.end());
  EXPECT_EQ(got, (std::vector<std::vector<std::uint32_t>>{{0, 1, 2}, {0, 5}, {3, 4}}));
  EdgeList b;
  b.push_back({0, 1, 2});
  b.push_back({0, 5});
  b.push_back({3, 4});
  EXPECT_EQ(a, b);
  b.push_back({7});
  EXPECT_FALSE(a == b);
  EXPECT_TRUE(EdgeList{}.empty());
}

TEST(Checkers, IndependenceAndMonochromatic) {
  const auto h = hand(4, {{0, 1, 2}, {1, 2, 3}});
  EXPECT_TRUE(is_independent(h, std::vector<std::uint32_t>{0, 1, 3}));
  EXPECT_FALSE(is_independent(h, std::vector<std::uint32_t>{1, 2, 3}));
  EXPECT_EQ(count_monochromatic(h, std::vector<int>{0, 0, 0, 0}), 2u);
  EXPECT_EQ(count_monochromatic(h, std::vector<int>{1, 0, 0, 0}), 1u);
  EXPECT_TRUE(covers_all_edges(h, {{1, 0, 0, 0}, {0, 0, 0, 1}}));
  EXPECT_FALSE(covers_all_edges(h, {{1, 0, 0, 0}}));
}

TEST(Mis, SingleEightEdge) {
  const auto h = hand(8, {{0, 1, 2, 3, 4, 5, 6, 7}});
  const auto r = max_independent_set(h);
  EXPECT_EQ(r.size, 7u);
  EXPECT_TRUE(is_independent(h, r.witness));
  EXPECT_EQ(r.witness.size(), 7u);
}

TEST(Mis, GraphTriangle) {
  const auto h = hand(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(max_independent_set(h).size, 1u);
  EXPECT_FALSE(is_q_colorable(h, 2).colorable);
  EXPECT_TRUE(is_q_colorable(h, 3).colorable);
}

TEST(Mis, CapRefusesLargeGraphs) {
  const auto h = hand(10, {{0, 1}});
  EXPECT_THROW(max_independent_set(h, 8), OracleTooLarge);
}

TEST(Oracle, AgreesWithBruteForceOnRandomGraphs) {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + rng.below(9);
    std::vector<std::vector<std::uint32_t>> edges;
    const std::size_t count = 1 + rng.below(3 * n);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<std::uint32_t> e;
      const std::size_t size = 2 + rng.below(3);
      while (e.size() < size) {
        const auto x = static_cast<std::uint32_t>(rng.below(n));
        if (std::find(e.begin(), e.end(), x) == e.end()) e.push_back(x);
        if (e.size() == n) break;
      }
      edges.push_back(e);
    }
    const auto h = hand(n, edges);
    const auto mis = max_independent_set(h);
    EXPECT_EQ(mis.size, brute_mis(h));
    EXPECT_TRUE(is_independent(h, mis.witness));
    for (int q : {2, 3}) {
      const auto c = is_q_colorable(h, q);
      EXPECT_EQ(c.colorable, brute_colorable(h, q)) << "trial " << trial << " q " << q;
      if (c.colorable) {
        EXPECT_EQ(count_monochromatic(h, c.witness), 0u);
        EXPECT_TRUE(std::all_of(c.witness.begin(), c.witness.end(), [q](int x) { return x >= 0 && x < q; }));
      }
    }
    const auto cover = covering_number(h, 3);
    ASSERT_TRUE(cover.feasible);
    EXPECT_TRUE(covers_all_edges(h, cover.assignments));
    EXPECT_EQ(static_cast<int>(cover.assignments.size()), cover.t);
    // t assignments exist iff 2^t colors suffice.
    EXPECT_EQ(cover.t == 1, brute_colorable(h, 2) && !h.edges.empty());
  }
}

TEST(Cover, SingleEdgeNeedsOne) {
  const auto h = hand(2, {{0, 1}});
  const auto c = covering_number(h);
  EXPECT_TRUE(c.feasible);
  EXPECT_EQ(c.t, 1);
  EXPECT_TRUE(is_q_colorable(h, 2).colorable);
}

TEST(Cover, NoEdgesNeedsNone) {
  const auto c = covering_number(hand(3, {}));
  EXPECT_TRUE(c.feasible);
  EXPECT_EQ(c.t, 0);
}

TEST(Cover, SingletonEdgeIsInfeasible) {
  const auto h = hand(3, {{1}, {0, 2}});
  EXPECT_FALSE(covering_number(h).feasible);
  EXPECT_FALSE(is_q_colorable(h, 4).colorable);
}

TEST(Cover, CompleteGraphOnFiveNeedsThree) {
  std::vector<std::vector<std::uint32_t>> edges;
  for (std::uint32_t i = 0; i < 5; ++i)
    for (std::uint32_t j = i + 1; j < 5; ++j) edges.push_back({i, j});
  const auto h = hand(5, edges);
  const auto c = covering_number(h);
  EXPECT_EQ(c.t, 3);
  EXPECT_TRUE(covers_all_edges(h, c.assignments));
  EXPECT_THROW(covering_number(h, 2), SearchLimitExceeded);
}

TEST(Build, VertexCountsMatchBlocks) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto red = reduction(seed);
    for (auto mode : {TestMode::T28, TestMode::T44}) {
      const auto h = build_hypergraph(red, mode, {2, 100'000'000});
      std::uint64_t want = 0;
      for (std::size_t v = 0; v < red.spaces().size(); ++v) {
        EXPECT_EQ(h.offsets[v], want);
        want += red.block_size(v, mode);
      }
      EXPECT_EQ(h.n, want);
      EXPECT_EQ(h.vertices.size(), h.n);
      EXPECT_EQ(h.uniformity, mode == TestMode::T28 ? 8 : 4);
      for (std::size_t i = 0; i < h.n; ++i) EXPECT_EQ(h.id(h.vertices[i].v, h.vertices[i].coset), i);
      for (const auto e : h.edges) {
        ASSERT_GE(e.size(), 2u);
        ASSERT_LE(e.size(), static_cast<std::size_t>(h.uniformity));
        EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
        EXPECT_TRUE(std::adjacent_find(e.begin(), e.end()) == e.end());
        EXPECT_LT(e.back(), h.n);
      }
      for (std::size_t i = 1; i < h.edges.size(); ++i) {
        const auto a = h.edges[i - 1], b = h.edges[i];
        EXPECT_TRUE(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
      }
    }
  }
}

TEST(Build, Deterministic) {
  const auto red = reduction(2);
  const auto a = build_hypergraph(red, TestMode::T28);
  const auto b = build_hypergraph(red, TestMode::T28);
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_EQ(a.collapsed, b.collapsed);
}

TEST(Build, LimitCarriesEstimate) {
  const auto red = reduction(3);
  try {
    build_hypergraph(red, TestMode::T44, {2, 10});
    FAIL() << "expected LimitExceeded";
  } catch (const LimitExceeded& e) {
    EXPECT_GT(e.estimate(), 10u);
  }
  YesInstanceParams p;
  p.m = 3;
  const Reduction big(generate_yes_instance(p).instance);
  EXPECT_THROW(build_hypergraph(big, TestMode::T28, {2, 5'000'000}), LimitExceeded);
}

TEST(YesInstances, HonestColoringsSolveTheHypergraph) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    YesInstanceParams p;
    p.seed = seed;
    const auto g = generate_yes_instance(p);
    const Reduction red(g.instance);
    for (auto mode : {TestMode::T28, TestMode::T44}) {
      const auto h = build_hypergraph(red, mode, {2, 100'000'000});
      const auto honest = vertex_colors(h, honest_coloring(red.spaces(), g.planted, domain_of(mode)));
      EXPECT_EQ(count_monochromatic(h, honest), 0u);
    }
  }
}

TEST(YesInstances, OracleFindsColoringsAndLargeSets) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto red = reduction(seed);
    const auto h28 = build_hypergraph(red, TestMode::T28);
    OracleOptions opt;
    opt.qs = {2};
    const auto r28 = solve(h28, opt);
    EXPECT_TRUE(r28.witnesses_verified);
    ASSERT_TRUE(r28.mis.has_value());
    EXPECT_GE(2 * r28.mis->size, h28.n);
    ASSERT_EQ(r28.colorability.size(), 1u);
    EXPECT_TRUE(r28.colorability[0].result.colorable);
    ASSERT_TRUE(r28.cover.has_value());
    EXPECT_EQ(r28.cover->t, 1);

    const auto h44 = build_hypergraph(red, TestMode::T44, {2, 100'000'000});
    const auto c = is_q_colorable(h44, 4);
    EXPECT_TRUE(c.colorable);
    EXPECT_EQ(count_monochromatic(h44, c.witness), 0u);
  }
}
