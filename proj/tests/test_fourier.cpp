#include <gtest/gtest.h>

#include <chrono>

#include "qcpcp/fourier.hpp"
#include "qcpcp/rng.hpp"
#include "qcpcp/verifier.hpp"

using namespace qcpcp;

namespace {

GeneratedInstance yes(std::uint64_t seed, std::size_t m = 2, std::size_t constraints = 1) {
  YesInstanceParams p;
  p.m = m;
  p.num_constraints = constraints;
  p.seed = seed;
  return generate_yes_instance(p);
}

FoldedColoring constant(const Reduction& red, std::uint8_t c) {
  std::vector<std::vector<std::uint8_t>> tables;
  for (const auto& s : red.spaces()) tables.emplace_back(s.coset_count(), c);
  return FoldedColoring(FoldedColoring::Domain::Cosets, 2, std::move(tables));
}

// Pr over uniform x of alpha x = b, by enumeration.
Rational enumerate_prob(const BitMatrix& alpha, const BitVector& b) {
  const std::size_t n = alpha.cols();
  std::uint64_t hits = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) hits += alpha.apply(BitVector::from_word(n, x)) == b;
  return Rational(hits) * pow2(-static_cast<int>(n));
}

// Theta as E_{u, v~u, w~u} of the quadruple sum, one compute_term at a time.
Rational brute_quadruple_sum(const Reduction& red, const FoldedColoring& ind) {
  const auto& inst = red.instance();
  const std::size_t m = red.m();
  const std::uint64_t N = std::uint64_t{1} << (m * m);
  const auto tr = fourier_transforms(red, ind);
  Rational total = 0;
  for (std::size_t u = 0; u < inst.num_u(); ++u) {
    const auto& eu = inst.edges_of_u(u);
    Rational per_u = 0;
    for (auto ev : eu)
      for (auto ew : eu) {
        const auto& tv = tr[inst.edge(ev).v];
        const auto& tw = tr[inst.edge(ew).v];
        for (std::uint64_t a1 = 0; a1 < N; ++a1) {
          if (tv.numer[a1] == 0) continue;
          for (std::uint64_t a2 = 0; a2 < N; ++a2) {
            if (tv.numer[a2] == 0) continue;
            for (std::uint64_t b1 = 0; b1 < N; ++b1) {
              if (tw.numer[b1] == 0) continue;
              for (std::uint64_t b2 = 0; b2 < N; ++b2) {
                if (tw.numer[b2] == 0) continue;
                per_u += compute_term(red, ev, ew, BitMatrix::from_code(a1, m, m), BitMatrix::from_code(a2, m, m),
                                      BitMatrix::from_code(b1, m, m), BitMatrix::from_code(b2, m, m), tr);
              }
            }
          }
        }
      }
    total += per_u / Rational(eu.size() * eu.size());
  }
  return total / Rational(inst.num_u());
}

}  // namespace

TEST(RankProb, Examples) {
  const auto I = BitMatrix::identity(3);
  EXPECT_EQ(rank_prob(I, BitVector::from_bits({1, 0, 1})), Rational(1, 8));
  EXPECT_EQ(rank_prob(BitMatrix(3, 3), BitVector(3)), 1);
  EXPECT_EQ(rank_prob(BitMatrix(3, 3), BitVector::from_bits({0, 1, 0})), 0);
  const auto A = BitMatrix::from_rows({{1, 1, 0}, {1, 1, 0}, {0, 0, 0}});
  EXPECT_EQ(rank_prob(A, BitVector::from_bits({1, 1, 0})), Rational(1, 2));
  EXPECT_EQ(rank_prob(A, BitVector::from_bits({1, 0, 0})), 0);
}

TEST(RankProb, ExhaustiveAtM3) {
  for (std::uint64_t a = 0; a < 512; ++a) {
    const auto alpha = BitMatrix::from_code(a, 3, 3);
    for (std::uint64_t b = 0; b < 8; ++b) {
      const auto bv = BitVector::from_word(3, b);
      const auto p = rank_prob(alpha, bv);
      ASSERT_EQ(p, enumerate_prob(alpha, bv));
      if (p != 0) {
        ASSERT_EQ(p, pow2(-static_cast<int>(rank(alpha))));
      }
    }
  }
}

TEST(TermSolutionCount, AgainstEnumeration) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.below(2);
    const auto a1 = BitMatrix::random(m, m, rng), a2 = BitMatrix::random(m, m, rng);
    const auto e = BitVector::unit(m, m - 1);
    std::uint64_t want = 0;
    for (std::uint64_t x = 0; x < (1u << m); ++x) {
      const auto xv = BitVector::from_word(m, x);
      want += a1.transpose().apply(xv).is_zero() && a2.transpose().apply(xv) == a2.transpose().apply(e);
    }
    EXPECT_EQ(term_solution_count(a1.code(), a2.code(), m), want);
  }
}

TEST(ComputeTerm, ZeroIndicesGiveDensityPowers) {
  Rng rng(2);
  const auto g = yes(1);
  const Reduction red(g.instance);
  const auto ind = random_folded_coloring(red.spaces(), rng, 3, 8);
  const auto tr = fourier_transforms(red, ind);
  const auto Z = BitMatrix(2, 2);
  const auto& inst = red.instance();
  const auto& eu = inst.edges_of_u(0);
  const auto dv = tr[inst.edge(eu[0]).v].coefficient(0), dw = tr[inst.edge(eu[1]).v].coefficient(0);
  EXPECT_EQ(dv, ind.density(inst.edge(eu[0]).v));
  const auto t = compute_term(red, eu[0], eu[1], Z, Z, Z, Z, tr);
  EXPECT_EQ(t, dv * dv * dv * dv * dw * dw * dw * dw);
}

TEST(ComputeTerm, MismatchedProjectionsVanish) {
  Rng rng(3);
  const auto g = yes(2);
  const Reduction red(g.instance);
  const auto ind = random_folded_coloring(red.spaces(), rng);
  const auto tr = fourier_transforms(red, ind);
  const auto& eu = red.instance().edges_of_u(0);
  int checked = 0;
  for (std::uint64_t a = 0; a < 16; ++a)
    for (std::uint64_t b = 0; b < 16; ++b) {
      if (red.forward(eu[0])(a) == red.forward(eu[1])(b)) continue;
      const auto Z = BitMatrix(2, 2);
      EXPECT_EQ(compute_term(red, eu[0], eu[1], BitMatrix::from_code(a, 2, 2), Z, BitMatrix::from_code(b, 2, 2), Z,
                             tr),
                0);
      ++checked;
    }
  EXPECT_GT(checked, 0);
  EXPECT_THROW(compute_term(red, eu[0], red.instance().edges().size(), BitMatrix(2, 2), BitMatrix(2, 2),
                            BitMatrix(2, 2), BitMatrix(2, 2), tr),
               DimensionError);
}

TEST(ThetaRoutes, QuadrupleSumAgreesWithBothRoutes) {
  Rng rng(4);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = yes(seed);
    const Reduction red(g.instance);
    const auto ind = random_folded_coloring(red.spaces(), rng, 1 + seed % 7, 8);
    const auto brute = brute_quadruple_sum(red, ind);
    EXPECT_EQ(brute, fourier_sums(red, ind, 1).theta);
    EXPECT_EQ(brute, compute_theta_fourier(red, ind));
    EXPECT_EQ(brute, independence_theta(red, ind, TestMode::T28));
  }
}

TEST(ThetaRoutes, HonestAndConstantSets) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = yes(seed, 2 + seed % 2);
    const Reduction red(g.instance);
    const auto honest = honest_coloring(red.spaces(), g.planted, FoldedColoring::Domain::Cosets);
    for (int c = 0; c < 2; ++c) EXPECT_EQ(compute_theta_fourier(red, honest.indicator(c)), 0);
    EXPECT_EQ(compute_theta_fourier(red, constant(red, 1)), 1);
    EXPECT_EQ(compute_theta_fourier(red, constant(red, 0)), 0);
  }
}

TEST(Decompose, RandomColoringsSatisfyEveryBound) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = yes(trial, 2, 1 + trial % 2);
    const Reduction red(g.instance);
    const auto ind = random_folded_coloring(red.spaces(), rng, 1 + rng.below(7), 8);
    const int k = 1 + trial % 3;
    const auto rep = decompose_theta(red, ind, k);
    EXPECT_TRUE(rep.all_ok()) << "trial " << trial;
    EXPECT_EQ(rep.theta, rep.theta0 + rep.theta1 + rep.theta2);
    EXPECT_EQ(rep.theta, rep.theta_direct);
    EXPECT_GE(rep.theta0, rep.s8);
    EXPECT_EQ(rep.s8, rep.s * rep.s * rep.s * rep.s * rep.s * rep.s * rep.s * rep.s);
    EXPECT_EQ(rep.s, average_density(red, ind));
    EXPECT_LE(abs(rep.theta1), rep.theta1_mass);
    EXPECT_EQ(rep.theta1_mass, rep.decoding.success_probability);
    // every 2 x 2 index has rank <= 2
    if (k >= 2) {
      EXPECT_EQ(rep.theta2, 0);
    }
  }
}

TEST(Decompose, Theta2BoundAtLargeK) {
  Rng rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    const auto g = yes(trial, 3);
    const Reduction red(g.instance);
    const auto ind = random_folded_coloring(red.spaces(), rng);
    for (int k : {1, 2, 3, 6}) {
      const auto rep = decompose_theta(red, ind, k);
      const auto chk = theta2_bound_check(rep, fourier_transforms(red, ind), k);
      EXPECT_TRUE(chk.aggregate_ok && chk.parseval_ok && chk.per_term_ok) << "trial " << trial << " k " << k;
      EXPECT_EQ(chk.bound_squared, pow2(-(k + 2)));
      if (k >= 3) {
        EXPECT_EQ(rep.theta2, 0);
      }
    }
  }
}

TEST(Decoding, HonestSetsAreHomogeneous) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = yes(seed, 2 + seed % 2);
    const Reduction red(g.instance);
    const auto honest = honest_coloring(red.spaces(), g.planted, FoldedColoring::Domain::Cosets);
    for (int c = 0; c < 2; ++c) {
      const auto d = decode_labeling(red, honest.indicator(c), 2);
      EXPECT_TRUE(d.homogeneous);
      for (std::size_t v = 0; v < red.instance().num_v(); ++v) {
        const auto y = g.planted.y[v].to_word();
        EXPECT_EQ(d.v_labels[v], (std::vector<std::uint64_t>{0, outer_code(y, y, red.m())}));
      }
    }
  }
}

TEST(Decoding, ConstantSets) {
  const auto g = yes(3);
  const Reduction red(g.instance);
  const auto full = decode_labeling(red, constant(red, 1), 1);
  EXPECT_EQ(full.unrestricted_success, 1);
  EXPECT_EQ(full.success_probability, 0);
  for (const auto& l : full.v_labels) EXPECT_EQ(l, std::vector<std::uint64_t>{0});
  for (const auto& l : full.u_labels) EXPECT_EQ(l, std::vector<std::uint64_t>{0});
  const auto empty = decode_labeling(red, constant(red, 0), 1);
  EXPECT_EQ(empty.unrestricted_success, 0);
  EXPECT_EQ(empty.success_probability, 0);
  for (const auto& l : empty.v_labels) EXPECT_TRUE(l.empty());
}

TEST(Decompose, RejectsFourColorTables) {
  const auto g = yes(1);
  const Reduction red(g.instance);
  std::vector<std::vector<std::uint8_t>> t;
  for (const auto& s : red.spaces()) t.emplace_back(s.coset_count(), 3);
  const FoldedColoring four(FoldedColoring::Domain::Cosets, 4, t);
  EXPECT_THROW(decompose_theta(red, four, 1), std::invalid_argument);
}

TEST(Decompose, ThreeByThreeStress) {
  Rng rng(7);
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = yes(100 + trial, 3, 1 + trial % 3);
    const Reduction red(g.instance);
    const auto ind = random_folded_coloring(red.spaces(), rng, 1 + rng.below(7), 8);
    const auto rep = decompose_theta(red, ind, 1 + trial % 3);
    EXPECT_TRUE(rep.all_ok()) << "trial " << trial;
    EXPECT_EQ(rep.theta, rep.theta_direct);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 60.0);
}
