#pragma once

// Fourier-side analysis of Theta for T28.
//
// With A_v the folded indicator of a set, expanding in characters and
// averaging out X1, X2, Y1, Y2, the vectors and F gives
//   Theta = E_{u,v,w} sum Term(a1, a2, b1, b2),
//   Term  = (-1)^{nu(b1+b2)} A_v(a1)^2 A_v(a2)^2 A_w(b1)^2 A_w(b2)^2
//           * Pr_x[a1^T x = 0, a2^T x = a2^T e] * Pr_x'[b1^T x' = 0, b2^T x' = b2^T e]
// when pi(a1 + a2) = sigma(b1 + b2), and 0 otherwise. Here nu(b) is the bit
// <b, e (x) e> and the (-1)^nu sign comes from the E offset on the w side.
// (The transposes come from <a, x (x) y> = x^T a y; for symmetric a, which is
// all that folding leaves, they are invisible.)
//
// Theta0 / Theta1 collect the matching terms with rank(a1+a2), rank(b1+b2)
// <= k and nu = 0 / 1; Theta2 the matching terms with either rank above k.

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcpcp/exact.hpp"
#include "qcpcp/gf2.hpp"
#include "qcpcp/quadratic_code.hpp"
#include "qcpcp/verifier.hpp"

namespace qcpcp {

/// Exact Pr_x[alpha x = b] over uniform x; always 0 or 2^{-rank(alpha)}.
Rational rank_prob(const BitMatrix& alpha, const BitVector& b);

/// Number of x in F_2^m with a1^T x = 0 and a2^T x = a2^T e (a1, a2 m x m codes).
std::uint64_t term_solution_count(std::uint64_t a1, std::uint64_t a2, std::size_t m);

/// Transforms of the folded extension of every vertex table (2-color coset colorings).
std::vector<FourierTable> fourier_transforms(const Reduction& red, const FoldedColoring& col);

/// Term(a1, a2, b1, b2) for the triple (u, v, w) given by two edges at u.
Rational compute_term(const Reduction& red, std::size_t edge_v, std::size_t edge_w, const BitMatrix& a1,
                      const BitMatrix& a2, const BitMatrix& b1, const BitMatrix& b2,
                      const std::vector<FourierTable>& transforms);

struct FourierLimits {
  /// Per (u, v, w): (support pairs at v) x (support pairs at w).
  std::uint64_t max_terms = std::uint64_t{1} << 24;
};

class SupportTooLarge : public std::runtime_error {
 public:
  SupportTooLarge(const std::string& what, std::uint64_t estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t estimate_;
};

/// Result of one pass over all (u, v, w) and support quadruples.
struct FourierSums {
  Rational theta;   // every matching term
  Rational theta0, theta1, theta2;
  Rational theta1_mass;  // coefficient products over the Theta1 index set, no probabilities
  bool theta0_terms_nonnegative = true;
  /// Every Theta2 term has an individual index of rank > k/2.
  bool theta2_rank_split_ok = true;
  /// Largest probability factor of a Theta2 term (0 if there are none).
  Rational theta2_max_probability;
  std::uint64_t terms_visited = 0;
};

/// Throws SupportTooLarge past the cap, DomainTooLarge for m > 4.
FourierSums fourier_sums(const Reduction& red, const FoldedColoring& ind, int k, const FourierLimits& limits = {});

/// Theta from the Fourier side alone.
Rational compute_theta_fourier(const Reduction& red, const FoldedColoring& ind, const FourierLimits& limits = {});

struct DecodingOutcome {
  /// Probability that the strategy (u gets pi(a1 + a2) for a random
  /// neighbour v, w gets b1 + b2, pairs drawn with weight A^2 A^2) satisfies a
  /// random edge, counting only draws inside the Theta1 index conditions.
  Rational success_probability;
  /// Same strategy with no rank / nu restriction.
  Rational unrestricted_success;
  /// Label supports: per u the possible r x r labels, per v the possible m x m labels.
  std::vector<std::vector<std::uint64_t>> u_labels, v_labels;
  /// Every b1 + b2 drawn is symmetric and satisfies C_v (likewise a1 + a2).
  bool homogeneous = true;
};

DecodingOutcome decode_labeling(const Reduction& red, const FoldedColoring& ind, int k);

struct Theta2Check {
  bool aggregate_ok = false;   // |Theta2| <= 2^{-(k/2 + 1)}, exactly
  bool parseval_ok = false;    // sum of squared coefficients <= 1 for every v
  bool per_term_ok = false;    // every Theta2 probability factor <= 2^{-(floor(k/2) + 1)}
  Rational bound_squared;      // 2^{-(k + 2)}
};

struct ThetaReport {
  int k = 0;
  Rational theta;         // Fourier side
  Rational theta_direct;  // factored expectation
  Rational theta0, theta1, theta2;
  Rational s, s8;
  Rational theta1_mass;
  DecodingOutcome decoding;
  Rational theta2_max_probability;
  double delta_log2 = 0;  // declared by the instance

  bool identity_ok = false;
  bool theta0_nonnegative = false;
  bool theta0_ge_s8 = false;
  bool mass_matches_decoding = false;
  bool theta1_le_decoding = false;
  bool theta2_le_rankbound = false;
  bool theta2_rank_split_ok = false;
  bool parseval_ok = false;
  bool folding_ok = false;
  bool homogeneity_ok = false;
  /// s^8 <= decoding + 2^{-(k/2+1)}; only meaningful when theta == 0.
  bool soundness_applicable = false;
  bool soundness_chain_ok = true;
  /// |Theta1| <= declared delta; synthetic instances carry no certified delta,
  /// so this is informational.
  bool theta1_le_declared_delta = false;

  bool all_ok() const {
    return identity_ok && theta0_nonnegative && theta0_ge_s8 && mass_matches_decoding && theta1_le_decoding &&
           theta2_le_rankbound && parseval_ok && folding_ok && homogeneity_ok && soundness_chain_ok;
  }
};

/// s = E_{u, v ~ u} A_v(0), the average density seen from U.
Rational average_density(const Reduction& red, const FoldedColoring& ind);

Theta2Check theta2_bound_check(const ThetaReport& report, const std::vector<FourierTable>& transforms, int k);

/// Full decomposition with every bound evaluated.
ThetaReport decompose_theta(const Reduction& red, const FoldedColoring& ind, int k, const FourierLimits& limits = {});

}  // namespace qcpcp
