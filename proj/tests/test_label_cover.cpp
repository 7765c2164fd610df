#include <gtest/gtest.h>

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qcpcp/label_cover.hpp"
#include "qcpcp/rng.hpp"

using namespace qcpcp;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

GeneratedInstance small_instance(std::uint64_t seed, std::size_t m = 2, std::size_t r = 1) {
  YesInstanceParams p;
  p.m = m;
  p.r = r;
  p.seed = seed;
  return generate_yes_instance(p);
}

BitMatrix random_symmetric(std::size_t m, Rng& rng) {
  BitMatrix M(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const bool b = rng.coin();
      M.set(i, j, b);
      M.set(j, i, b);
    }
  return M;
}

}  // namespace

TEST(GenerateYes, PlantedLabelingIsPerfect) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    YesInstanceParams p;
    p.m = 2 + seed % 3;
    p.r = 1 + seed % 2;
    p.num_u = 4;
    p.num_v = 3;
    p.degree = 2;
    p.num_constraints = 2;
    p.seed = seed;
    const auto g = generate_yes_instance(p);
    const auto rep = verify_labeling(g.instance, g.planted);
    EXPECT_TRUE(rep.perfect()) << "seed " << seed;
    EXPECT_EQ(rep.fraction, 1);
    for (const auto& e : g.instance.edges()) EXPECT_TRUE(e.pi.preserves_symmetry());
  }
}

TEST(GenerateYes, ConstraintsVanishOnPlantedSquares) {
  YesInstanceParams p;
  p.m = 2;
  p.r = 1;
  p.num_u = 2;
  p.num_v = 2;
  p.degree = 2;
  p.num_constraints = 1;
  p.seed = 1234;
  const auto g = generate_yes_instance(p);
  for (std::size_t v = 0; v < 2; ++v) {
    const auto yy = outer_product(g.planted.y[v], g.planted.y[v]);
    ASSERT_EQ(g.instance.constraints(v).size(), 1u);
    for (const auto& c : g.instance.constraints(v)) {
      int direct = 0;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) direct ^= c.get(i, j) & g.planted.y[v].get(i) & g.planted.y[v].get(j);
      EXPECT_EQ(direct, 0);
      EXPECT_EQ(mat_inner(c, yy), 0);
    }
  }
}

TEST(GenerateYes, ShapeAndDeterminism) {
  const auto a = small_instance(7), b = small_instance(7), c = small_instance(8);
  EXPECT_EQ(a.instance.num_u(), 3u);
  EXPECT_EQ(a.instance.num_v(), 3u);
  EXPECT_EQ(a.instance.edges().size(), 6u);
  for (std::size_t u = 0; u < 3; ++u) EXPECT_EQ(a.instance.edges_of_u(u).size(), 2u);
  for (std::size_t v = 0; v < 3; ++v) {
    EXPECT_FALSE(a.instance.edges_of_v(v).empty());
    EXPECT_TRUE(a.planted.y[v].get(1));
  }
  bool same = true, differs = false;
  for (std::size_t e = 0; e < 6; ++e) {
    same &= a.instance.edge(e).pi.rho() == b.instance.edge(e).pi.rho();
    differs |= a.instance.edge(e).pi.rho() != c.instance.edge(e).pi.rho() || a.instance.edge(e).v != c.instance.edge(e).v;
  }
  EXPECT_TRUE(same);
  EXPECT_TRUE(differs);
}

TEST(GenerateYes, RejectsBadParameters) {
  YesInstanceParams p;
  p.m = 2;
  p.r = 3;
  EXPECT_THROW(generate_yes_instance(p), std::invalid_argument);
  p.r = 1;
  p.degree = 4;
  EXPECT_THROW(generate_yes_instance(p), std::invalid_argument);
}

TEST(VerifyLabeling, FlippedFirstCoordinateMatchesEdgeRecount) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = small_instance(seed, 3, 2);
    auto lab = g.planted;
    lab.y[0].flip(0);
    std::size_t sat = 0;
    for (const auto& e : g.instance.edges()) {
      const auto lhs = e.pi.rho() * outer_product(lab.y[e.v], lab.y[e.v]) * e.pi.rho().transpose();
      sat += lhs == outer_product(lab.x[e.u], lab.x[e.u]);
    }
    const auto rep = verify_labeling(g.instance, lab);
    EXPECT_EQ(rep.satisfied_edges, sat);
    EXPECT_EQ(rep.fraction, Rational(sat, g.instance.edges().size()));
  }
}

TEST(VerifyLabeling, FlipBreaksSomeEdgeEventually) {
  bool seen_below_one = false;
  for (std::uint64_t seed = 0; seed < 20 && !seen_below_one; ++seed) {
    const auto g = small_instance(seed, 3, 2);
    auto lab = g.planted;
    lab.y[0].flip(0);
    seen_below_one = verify_labeling(g.instance, lab).fraction < 1;
  }
  EXPECT_TRUE(seen_below_one);
}

TEST(VerifyLabeling, ZeroYViolatesLastCoordinate) {
  const auto g = small_instance(3);
  auto lab = g.planted;
  for (auto& y : lab.y) y = BitVector(2);
  const auto rep = verify_labeling(g.instance, lab);
  EXPECT_EQ(rep.last_coordinate_violations.size(), 3u);
  EXPECT_FALSE(rep.perfect());
}

TEST(CheckMatrixAssignment, PlantedIsValid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = small_instance(seed, 3, 2);
    const auto rep = check_matrix_assignment(g.instance, MatrixAssignment::from_planted(g.planted), 1);
    EXPECT_TRUE(rep.all_flags());
    EXPECT_EQ(rep.satisfied_fraction, 1);
  }
}

TEST(CheckMatrixAssignment, ZeroLabelFailsCorner) {
  const auto g = small_instance(4);
  auto a = MatrixAssignment::from_planted(g.planted);
  a.on_v[1] = BitMatrix(2, 2);
  const auto rep = check_matrix_assignment(g.instance, a, 1);
  EXPECT_FALSE(rep.v_flags[1].corner_one);
  EXPECT_TRUE(rep.v_flags[0].corner_one);
}

TEST(CheckMatrixAssignment, RandomSymmetricAgainstEdgeLoop) {
  Rng rng(99);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = small_instance(seed, 3, 2);
    auto a = MatrixAssignment::from_planted(g.planted);
    for (auto& M : a.on_v) {
      do M = random_symmetric(3, rng);
      while (rank(M) != 2);
    }
    std::size_t sat = 0;
    for (const auto& e : g.instance.edges())
      sat += e.pi.rho() * a.on_v[e.v] * e.pi.rho().transpose() == a.on_u[e.u];
    const auto rep = check_matrix_assignment(g.instance, a, 2);
    EXPECT_EQ(rep.satisfied_edges, sat);
    for (const auto& f : rep.v_flags) EXPECT_TRUE(f.symmetric && f.rank_ok);
    EXPECT_FALSE(check_matrix_assignment(g.instance, a, 1).v_flags[0].rank_ok);
  }
}

TEST(Smoothness, PlantedSquareNeverVanishes) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = small_instance(seed, 3, 2);
    for (std::size_t v = 0; v < g.instance.num_v(); ++v)
      EXPECT_EQ(smoothness_estimate(g.instance, v, outer_product(g.planted.y[v], g.planted.y[v])), 0);
  }
}

TEST(Smoothness, RandomRankOneAgainstRecount) {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = small_instance(seed, 3, 1);
    for (std::size_t v = 0; v < g.instance.num_v(); ++v) {
      BitVector z;
      do z = BitVector::random(3, rng);
      while (z.is_zero());
      const auto M = outer_product(z, z);
      std::size_t zero = 0;
      for (auto e : g.instance.edges_of_v(v)) zero += g.instance.edge(e).pi.apply(M).is_zero();
      const auto s = smoothness_estimate(g.instance, v, M);
      EXPECT_EQ(s, Rational(zero, g.instance.edges_of_v(v).size()));
      EXPECT_GE(s, 0);
      EXPECT_LE(s, 1);
    }
  }
}

TEST(Smoothness, RejectsZeroAndAsymmetric) {
  const auto g = small_instance(1);
  EXPECT_THROW(smoothness_estimate(g.instance, 0, BitMatrix(2, 2)), std::invalid_argument);
  EXPECT_THROW(smoothness_estimate(g.instance, 0, BitMatrix::from_rows({{0, 1}, {0, 0}})), std::invalid_argument);
}

TEST(Smoothness, SingleEdgeVertex) {
  // Hand-built: one u, one v, rho = [1 0] so pi(M) = M[0][0].
  std::vector<LabelCoverEdge> edges{{0, 0, MatrixSpaceMap::conjugation(BitMatrix::from_rows({{1, 0}}))}};
  const LabelCoverInstance inst(2, 1, 1, 1, edges, {{}}, 1, -1);
  EXPECT_EQ(smoothness_estimate(inst, 0, BitMatrix::from_rows({{1, 0}, {0, 0}})), 0);
  EXPECT_EQ(smoothness_estimate(inst, 0, BitMatrix::from_rows({{0, 0}, {0, 1}})), 1);
}

TEST(Instance, RejectsIsolatedAndBadShapes) {
  std::vector<LabelCoverEdge> edges{{0, 0, MatrixSpaceMap::conjugation(BitMatrix::from_rows({{1, 1}}))}};
  EXPECT_THROW(LabelCoverInstance(2, 1, 2, 1, edges, {{}}, 1, -1), std::invalid_argument);
  EXPECT_THROW(LabelCoverInstance(2, 1, 1, 2, edges, {{}, {}}, 1, -1), std::invalid_argument);
  EXPECT_THROW(LabelCoverInstance(3, 1, 1, 1, edges, {{}}, 1, -1), std::invalid_argument);
}

// ---- parameter arithmetic, re-evaluated at 50 digits ----

namespace {

struct Reference {
  Big k, log2_delta, m_bound, log2_n, log2_s;
};

Reference reference(double L, double eps) {
  using boost::multiprecision::pow;
  const Big l(L), e(eps);
  return {pow(l, Big(1) / 8 - 2 * e), -pow(l, Big(1) / 4 - 2 * e), pow(l, Big(5) / 4 + e),
          l + pow(l, Big(10) / 4 + 2 * e), -pow(l, Big(1) / 8 - 3 * e)};
}

double rel(double got, const Big& want) {
  return static_cast<double>(boost::multiprecision::abs((Big(got) - want) / want));
}

}  // namespace

TEST(Parameters, ClosedFormsAtHighPrecision) {
  for (double L : {std::ldexp(1.0, 10), std::ldexp(1.0, 20), std::ldexp(1.0, 30)})
    for (double eps : {0.001, 0.01, 0.04}) {
      const auto p = compute_parameters(L, eps);
      const auto ref = reference(L, eps);
      EXPECT_LT(rel(p.k, ref.k), 1e-12);
      EXPECT_LT(rel(p.log2_delta, ref.log2_delta), 1e-12);
      EXPECT_LT(rel(p.m_bound, ref.m_bound), 1e-12);
      EXPECT_LT(rel(p.log2_n_bound, ref.log2_n), 1e-12);
      EXPECT_LT(rel(p.log2_s_bound, ref.log2_s), 1e-12);
    }
}

TEST(Parameters, MonotoneInN) {
  for (double eps : {0.001, 0.01}) {
    double prev_k = 0, prev_delta = 0;
    for (int e = 4; e <= 40; e += 4) {
      const auto p = compute_parameters(std::ldexp(1.0, e), eps);
      if (e > 4) {
        EXPECT_GT(p.k, prev_k);
        EXPECT_LT(p.log2_delta, prev_delta);
      }
      prev_k = p.k;
      prev_delta = p.log2_delta;
    }
  }
}

TEST(Parameters, SoundnessConsistencyMatchesHighPrecision) {
  // s_bound^8 >= delta + 2^{-(k/2+1)} needs roughly (log N)^eps >= 16, so it
  // fails throughout the desk range and only holds for astronomically large N.
  using boost::multiprecision::pow;
  for (int e : {10, 20, 30, 100, 500, 1000})
    for (double eps : {0.001, 0.01, 0.04}) {
      const double L = std::ldexp(1.0, e);
      const auto p = compute_parameters(L, eps);
      const auto ref = reference(L, eps);
      // Compare in log2 form; the raw values underflow even at 50 digits.
      const Big a = ref.log2_delta, b = -(ref.k / 2 + 1);
      const Big hi = a > b ? a : b, lo = a > b ? b : a;
      const Big log2_rhs = hi + boost::multiprecision::log2(1 + pow(Big(2), lo - hi));
      EXPECT_EQ(p.soundness_consistent(), 8 * ref.log2_s >= log2_rhs) << "log2 N = 2^" << e << " eps " << eps;
    }
  EXPECT_FALSE(compute_parameters(std::ldexp(1.0, 20), 0.01).soundness_consistent());
  EXPECT_TRUE(compute_parameters(std::ldexp(1.0, 500), 0.01).soundness_consistent());
}

TEST(Parameters, RejectsOutOfRange) {
  EXPECT_THROW(compute_parameters(1024, 0.0), std::invalid_argument);
  EXPECT_THROW(compute_parameters(1024, 0.05), std::invalid_argument);
  EXPECT_THROW(compute_parameters(0.5, 0.01), std::invalid_argument);
}
