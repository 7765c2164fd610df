#pragma once

// Label-cover instances whose labels are matrices: U-side labels live in
// F_2^{r x r}, V-side labels in F_2^{m x m}, and every edge carries a linear
// projection between the two spaces. Each v in V additionally carries a
// list of homogeneous linear constraints <c, M> = 0 on its label.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qcpcp/exact.hpp"
#include "qcpcp/gf2.hpp"

namespace qcpcp {

struct LabelCoverEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  MatrixSpaceMap pi;
};

class LabelCoverInstance {
 public:
  /// Validates dimensions, symmetry preservation of every projection, and
  /// that no vertex on either side is isolated. Throws std::invalid_argument.
  LabelCoverInstance(std::size_t m, std::size_t r, std::size_t num_u, std::size_t num_v,
                     std::vector<LabelCoverEdge> edges,
                     std::vector<std::vector<BitMatrix>> constraints, int k, double delta_log2);

  std::size_t m() const { return m_; }
  std::size_t r() const { return r_; }
  std::size_t num_u() const { return num_u_; }
  std::size_t num_v() const { return num_v_; }
  int k() const { return k_; }
  double delta_log2() const { return delta_log2_; }

  const std::vector<LabelCoverEdge>& edges() const { return edges_; }
  const LabelCoverEdge& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<BitMatrix>& constraints(std::size_t v) const { return constraints_[v]; }

  /// Edge indices incident on u (resp. v), in edge-list order.
  const std::vector<std::size_t>& edges_of_u(std::size_t u) const { return by_u_[u]; }
  const std::vector<std::size_t>& edges_of_v(std::size_t v) const { return by_v_[v]; }

  /// Whether <c, M> = 0 for every constraint c of v.
  bool satisfies_constraints(std::size_t v, const BitMatrix& M) const;

 private:
  std::size_t m_, r_, num_u_, num_v_;
  std::vector<LabelCoverEdge> edges_;
  std::vector<std::vector<BitMatrix>> constraints_;
  int k_;
  double delta_log2_;
  std::vector<std::vector<std::size_t>> by_u_, by_v_;
};

/// The vector labels behind a perfect quadratic labeling x_u (x) x_u, y_v (x) y_v.
struct PlantedLabeling {
  std::vector<BitVector> x;  // per u, length r
  std::vector<BitVector> y;  // per v, length m, last coordinate 1
};

struct MatrixAssignment {
  std::vector<BitMatrix> on_u;  // r x r
  std::vector<BitMatrix> on_v;  // m x m

  static MatrixAssignment from_planted(const PlantedLabeling& lab);
};

struct YesInstanceParams {
  std::size_t m = 2;
  std::size_t r = 1;
  std::size_t num_u = 3;
  std::size_t num_v = 3;
  std::size_t degree = 2;
  std::size_t num_constraints = 1;
  int k = 1;
  double delta_log2 = -1.0;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  LabelCoverInstance instance;
  PlantedLabeling planted;
};

/// Samples a YES instance together with its planted labeling.
///
/// Every u gets `degree` distinct neighbours (the graph is regular on the U
/// side only). Edge maps are conjugations rho . rho^T where each row of rho
/// is uniform on {w : <w, y_v> = x_u[i]}, so pi(y_v (x) y_v) = x_u (x) x_u.
/// Constraints of v are uniform on {c : <c, y_v (x) y_v> = 0}.
GeneratedInstance generate_yes_instance(const YesInstanceParams& params);

struct LabelingReport {
  std::size_t satisfied_edges = 0;
  std::size_t total_edges = 0;
  Rational fraction;
  std::vector<std::size_t> last_coordinate_violations;  // v with y_v[m] != 1
  std::vector<std::size_t> constraint_violations;       // v whose C_v fails on y_v (x) y_v

  bool perfect() const {
    return satisfied_edges == total_edges && last_coordinate_violations.empty() &&
           constraint_violations.empty();
  }
};

LabelingReport verify_labeling(const LabelCoverInstance& inst, const PlantedLabeling& lab);

struct AssignmentReport {
  struct VertexFlags {
    bool symmetric = false;
    bool rank_ok = false;
    bool corner_one = true;       // (m,m) entry is 1; V side only
    bool constraints_ok = true;   // C_v holds; V side only
    bool all() const { return symmetric && rank_ok && corner_one && constraints_ok; }
  };
  std::vector<VertexFlags> u_flags;
  std::vector<VertexFlags> v_flags;
  std::size_t satisfied_edges = 0;
  Rational satisfied_fraction;

  bool all_flags() const;
};

AssignmentReport check_matrix_assignment(const LabelCoverInstance& inst, const MatrixAssignment& a,
                                         int k);

/// Exact fraction of edges e incident on v with pi_e(M) = 0. Throws
/// std::invalid_argument if M is zero or not symmetric.
Rational smoothness_estimate(const LabelCoverInstance& inst, std::size_t v, const BitMatrix& M);

/// Parameter arithmetic of the 8-query reduction, in log2 form.
struct Parameters {
  double log2_n_vertices_outer = 0;  // log2 N
  double epsilon = 0;
  double k = 0;             // (log N)^{1/8 - 2 eps}
  double log2_delta = 0;    // -(log N)^{1/4 - 2 eps}
  double m_bound = 0;       // m <= (log N)^{5/4 + eps}, from m^2 <= (log N)^{10/4 + 2 eps}
  double log2_n_bound = 0;  // log N + (log N)^{10/4 + 2 eps}
  double log2_s_bound = 0;  // -(log N)^{1/8 - 3 eps}

  /// log2(delta + 2^{-(k/2+1)}).
  double log2_soundness_rhs() const;
  /// Whether s_bound^8 >= delta + 2^{-(k/2+1)}, i.e. the returned s_bound is
  /// actually implied by the soundness inequality at these values.
  bool soundness_consistent() const;
  /// The outer-PCP guarantees delta <= 2^{-(log N)^{1/3}} and k >= (log N)^{1/9}.
  bool outer_delta_ok() const;
  bool outer_k_ok() const;
};

/// Throws std::invalid_argument unless log2N >= 1 and 0 < epsilon < 1/20.
Parameters compute_parameters(double log2N, double epsilon);

}  // namespace qcpcp
