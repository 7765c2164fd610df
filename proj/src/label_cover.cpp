#include "qcpcp/label_cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcpcp/rng.hpp"

namespace qcpcp {

LabelCoverInstance::LabelCoverInstance(std::size_t m, std::size_t r, std::size_t num_u,
                                       std::size_t num_v, std::vector<LabelCoverEdge> edges,
                                       std::vector<std::vector<BitMatrix>> constraints, int k,
                                       double delta_log2)
    : m_(m),
      r_(r),
      num_u_(num_u),
      num_v_(num_v),
      edges_(std::move(edges)),
      constraints_(std::move(constraints)),
      k_(k),
      delta_log2_(delta_log2),
      by_u_(num_u),
      by_v_(num_v) {
  if (m < 1 || r < 1) throw std::invalid_argument("label cover: m and r must be positive");
  if (m * m > 64 || r * r > 64) throw std::invalid_argument("label cover: m, r must be at most 8");
  if (constraints_.size() != num_v) throw std::invalid_argument("label cover: one constraint list per v required");
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    if (ed.u >= num_u || ed.v >= num_v) throw std::invalid_argument("label cover: edge endpoint out of range");
    if (ed.pi.m() != m || ed.pi.r() != r) throw std::invalid_argument("label cover: projection has wrong shape");
    if (!ed.pi.preserves_symmetry())
      throw std::invalid_argument("label cover: projection on edge " + std::to_string(e) +
                                  " does not preserve symmetry");
    by_u_[ed.u].push_back(e);
    by_v_[ed.v].push_back(e);
  }
  for (std::size_t u = 0; u < num_u; ++u)
    if (by_u_[u].empty()) throw std::invalid_argument("label cover: isolated u " + std::to_string(u));
  for (std::size_t v = 0; v < num_v; ++v) {
    if (by_v_[v].empty()) throw std::invalid_argument("label cover: isolated v " + std::to_string(v));
    for (const auto& c : constraints_[v])
      if (c.rows() != m || c.cols() != m) throw std::invalid_argument("label cover: constraint must be m x m");
  }
}

bool LabelCoverInstance::satisfies_constraints(std::size_t v, const BitMatrix& M) const {
  return std::all_of(constraints_[v].begin(), constraints_[v].end(),
                     [&](const BitMatrix& c) { return mat_inner(c, M) == 0; });
}

MatrixAssignment MatrixAssignment::from_planted(const PlantedLabeling& lab) {
  MatrixAssignment a;
  for (const auto& x : lab.x) a.on_u.push_back(outer_product(x, x));
  for (const auto& y : lab.y) a.on_v.push_back(outer_product(y, y));
  return a;
}

GeneratedInstance generate_yes_instance(const YesInstanceParams& p) {
  if (p.m < 1 || p.r < 1 || p.r > p.m) throw std::invalid_argument("generate_yes_instance: need 1 <= r <= m");
  if (p.m > 8) throw std::invalid_argument("generate_yes_instance: m must be at most 8");
  if (p.num_u < 1 || p.num_v < 1) throw std::invalid_argument("generate_yes_instance: empty vertex set");
  if (p.degree < 1 || p.degree > p.num_v)
    throw std::invalid_argument("generate_yes_instance: need 1 <= degree <= |V|");
  if (p.num_u * p.degree < p.num_v)
    throw std::invalid_argument("generate_yes_instance: |U| * degree < |V| leaves isolated V vertices");

  Rng rng(p.seed);
  const std::size_t m = p.m, r = p.r;

  PlantedLabeling lab;
  for (std::size_t v = 0; v < p.num_v; ++v) {
    std::uint64_t y = rng.bits(m - 1) | (std::uint64_t{1} << (m - 1));
    lab.y.push_back(BitVector::from_word(m, y));
  }
  for (std::size_t u = 0; u < p.num_u; ++u) {
    std::uint64_t x;
    do {
      x = rng.bits(r);
    } while (x == 0);
    lab.x.push_back(BitVector::from_word(r, x));
  }

  // Neighbourhoods: `degree` distinct v per u, resampled until V is covered.
  std::vector<std::vector<std::size_t>> nbrs;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 1000) throw std::invalid_argument("generate_yes_instance: could not cover V");
    nbrs.assign(p.num_u, {});
    std::vector<bool> hit(p.num_v, false);
    for (std::size_t u = 0; u < p.num_u; ++u) {
      std::vector<std::size_t> pool(p.num_v);
      for (std::size_t i = 0; i < p.num_v; ++i) pool[i] = i;
      for (std::size_t i = 0; i < p.degree; ++i) {
        const std::size_t j = i + rng.below(p.num_v - i);
        std::swap(pool[i], pool[j]);
        nbrs[u].push_back(pool[i]);
        hit[pool[i]] = true;
      }
      std::sort(nbrs[u].begin(), nbrs[u].end());
    }
    if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) break;
  }

  std::vector<LabelCoverEdge> edges;
  const std::uint64_t last = std::uint64_t{1} << (m - 1);
  for (std::size_t u = 0; u < p.num_u; ++u) {
    const std::uint64_t xu = lab.x[u].to_word();
    for (std::size_t v : nbrs[u]) {
      const std::uint64_t yv = lab.y[v].to_word();
      BitMatrix rho(r, m);
      for (std::size_t i = 0; i < r; ++i) {
        std::uint64_t w = rng.bits(m);
        // y_v has last coordinate 1, so toggling it toggles <w, y_v>.
        if (parity(w & yv) != static_cast<int>((xu >> i) & 1)) w ^= last;
        for (std::size_t j = 0; j < m; ++j) rho.set(i, j, (w >> j) & 1);
      }
      edges.push_back({u, v, MatrixSpaceMap::conjugation(std::move(rho))});
    }
  }

  std::vector<std::vector<BitMatrix>> constraints(p.num_v);
  const std::uint64_t corner = std::uint64_t{1} << (m * m - 1);
  for (std::size_t v = 0; v < p.num_v; ++v) {
    const std::uint64_t yy = outer_code(lab.y[v].to_word(), lab.y[v].to_word(), m);
    for (std::size_t c = 0; c < p.num_constraints; ++c) {
      std::uint64_t code = rng.bits(static_cast<unsigned>(m * m));
      // <E_mm, y (x) y> = 1, so toggling the corner toggles <c, y (x) y>.
      if (parity(code & yy)) code ^= corner;
      constraints[v].push_back(BitMatrix::from_code(code, m, m));
    }
  }

  LabelCoverInstance inst(m, r, p.num_u, p.num_v, std::move(edges), std::move(constraints), p.k,
                          p.delta_log2);
  return {std::move(inst), std::move(lab)};
}

LabelingReport verify_labeling(const LabelCoverInstance& inst, const PlantedLabeling& lab) {
  if (lab.x.size() != inst.num_u() || lab.y.size() != inst.num_v())
    throw DimensionError("verify_labeling: labeling has wrong number of vertices");
  for (const auto& x : lab.x)
    if (x.size() != inst.r()) throw DimensionError("verify_labeling: x_u must have length r");
  for (const auto& y : lab.y)
    if (y.size() != inst.m()) throw DimensionError("verify_labeling: y_v must have length m");

  LabelingReport rep;
  rep.total_edges = inst.edges().size();
  for (const auto& e : inst.edges()) {
    const BitMatrix lhs = e.pi.apply(outer_product(lab.y[e.v], lab.y[e.v]));
    if (lhs == outer_product(lab.x[e.u], lab.x[e.u])) ++rep.satisfied_edges;
  }
  for (std::size_t v = 0; v < inst.num_v(); ++v) {
    if (!lab.y[v].get(inst.m() - 1)) rep.last_coordinate_violations.push_back(v);
    if (!inst.satisfies_constraints(v, outer_product(lab.y[v], lab.y[v])))
      rep.constraint_violations.push_back(v);
  }
  rep.fraction = rep.total_edges ? Rational(rep.satisfied_edges, rep.total_edges) : Rational(1);
  return rep;
}

bool AssignmentReport::all_flags() const {
  return std::all_of(u_flags.begin(), u_flags.end(), [](const VertexFlags& f) { return f.all(); }) &&
         std::all_of(v_flags.begin(), v_flags.end(), [](const VertexFlags& f) { return f.all(); });
}

AssignmentReport check_matrix_assignment(const LabelCoverInstance& inst, const MatrixAssignment& a,
                                         int k) {
  if (a.on_u.size() != inst.num_u() || a.on_v.size() != inst.num_v())
    throw DimensionError("check_matrix_assignment: wrong number of vertices");
  AssignmentReport rep;
  for (const auto& M : a.on_u) {
    if (M.rows() != inst.r() || M.cols() != inst.r()) throw DimensionError("check_matrix_assignment: M_u must be r x r");
    AssignmentReport::VertexFlags f;
    f.symmetric = M.is_symmetric();
    f.rank_ok = static_cast<int>(rank(M)) <= k;
    rep.u_flags.push_back(f);
  }
  const std::size_t m = inst.m();
  for (std::size_t v = 0; v < inst.num_v(); ++v) {
    const auto& M = a.on_v[v];
    if (M.rows() != m || M.cols() != m) throw DimensionError("check_matrix_assignment: M_v must be m x m");
    AssignmentReport::VertexFlags f;
    f.symmetric = M.is_symmetric();
    f.rank_ok = static_cast<int>(rank(M)) <= k;
    f.corner_one = M.get(m - 1, m - 1);
    f.constraints_ok = inst.satisfies_constraints(v, M);
    rep.v_flags.push_back(f);
  }
  for (const auto& e : inst.edges())
    if (e.pi.apply(a.on_v[e.v]) == a.on_u[e.u]) ++rep.satisfied_edges;
  rep.satisfied_fraction =
      inst.edges().empty() ? Rational(0) : Rational(rep.satisfied_edges, inst.edges().size());
  return rep;
}

Rational smoothness_estimate(const LabelCoverInstance& inst, std::size_t v, const BitMatrix& M) {
  if (v >= inst.num_v()) throw std::invalid_argument("smoothness_estimate: unknown vertex");
  if (M.rows() != inst.m() || M.cols() != inst.m()) throw DimensionError("smoothness_estimate: M must be m x m");
  if (M.is_zero()) throw std::invalid_argument("smoothness_estimate: M must be nonzero");
  if (!M.is_symmetric()) throw std::invalid_argument("smoothness_estimate: M must be symmetric");
  const auto& es = inst.edges_of_v(v);
  std::size_t zero = 0;
  for (auto e : es)
    if (inst.edge(e).pi.apply(M).is_zero()) ++zero;
  return Rational(zero, es.size());
}

// ---------------------------------------------------------------- parameters

namespace {

// (log N)^p with log N given in log2 form.
double power_of_log(double log2N, double p) { return std::exp2(p * std::log2(log2N)); }

// log2(2^a + 2^b)
double log2_sum(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

}  // namespace

Parameters compute_parameters(double log2N, double epsilon) {
  if (!(log2N >= 1.0) || !std::isfinite(log2N))
    throw std::invalid_argument("compute_parameters: need log2 N >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0 / 20.0))
    throw std::invalid_argument("compute_parameters: need 0 < epsilon < 1/20");
  Parameters p;
  p.log2_n_vertices_outer = log2N;
  p.epsilon = epsilon;
  p.k = power_of_log(log2N, 1.0 / 8.0 - 2.0 * epsilon);
  p.log2_delta = -power_of_log(log2N, 1.0 / 4.0 - 2.0 * epsilon);
  p.m_bound = power_of_log(log2N, 5.0 / 4.0 + epsilon);
  p.log2_n_bound = log2N + power_of_log(log2N, 10.0 / 4.0 + 2.0 * epsilon);
  p.log2_s_bound = -power_of_log(log2N, 1.0 / 8.0 - 3.0 * epsilon);
  return p;
}

double Parameters::log2_soundness_rhs() const { return log2_sum(log2_delta, -(k / 2.0 + 1.0)); }

bool Parameters::soundness_consistent() const { return 8.0 * log2_s_bound >= log2_soundness_rhs(); }

bool Parameters::outer_delta_ok() const {
  return log2_delta <= -power_of_log(log2_n_vertices_outer, 1.0 / 3.0);
}

bool Parameters::outer_k_ok() const { return k >= power_of_log(log2_n_vertices_outer, 1.0 / 9.0); }

}  // namespace qcpcp
