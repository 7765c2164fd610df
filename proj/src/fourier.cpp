#include "qcpcp/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcpcp {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

void require_coset_indicator(const Reduction& red, const FoldedColoring& ind) {
  if (ind.domain() != FoldedColoring::Domain::Cosets || ind.colors() != 2)
    throw std::invalid_argument("Fourier analysis needs a 0/1 coloring of single cosets");
  ind.validate(red.spaces());
}

// A support pair (a1, a2) at the endpoint of an edge, with everything the
// sums need to know about it.
struct PairInfo {
  std::uint64_t key = 0;   // pi(a1 + a2)
  std::uint64_t sum = 0;   // a1 + a2
  int rank = 0;            // rank(a1 + a2)
  int nu = 0;              // <a1 + a2, e (x) e>
  int max_single_rank = 0; // max(rank a1, rank a2)
  std::uint64_t count = 0; // solutions of the term system
  u128 coeff = 0;          // numer(a1)^2 numer(a2)^2
};

std::vector<PairInfo> edge_pairs(const Reduction& red, std::size_t e, const FourierTable& ft) {
  const std::size_t m = red.m();
  const auto supp = ft.support();
  std::vector<int> ranks(supp.size());
  for (std::size_t i = 0; i < supp.size(); ++i) ranks[i] = static_cast<int>(rank_code(supp[i], m, m));
  std::vector<PairInfo> out;
  out.reserve(supp.size() * supp.size());
  for (std::size_t i = 0; i < supp.size(); ++i)
    for (std::size_t j = 0; j < supp.size(); ++j) {
      const std::uint64_t a1 = supp[i], a2 = supp[j];
      PairInfo p;
      p.sum = a1 ^ a2;
      p.key = red.forward(e)(p.sum);
      p.rank = static_cast<int>(rank_code(p.sum, m, m));
      p.nu = parity(p.sum & red.corner_code());
      p.max_single_rank = std::max(ranks[i], ranks[j]);
      p.count = term_solution_count(a1, a2, m);
      const auto n1 = static_cast<u128>(ft.numer[a1] < 0 ? -ft.numer[a1] : ft.numer[a1]);
      const auto n2 = static_cast<u128>(ft.numer[a2] < 0 ? -ft.numer[a2] : ft.numer[a2]);
      p.coeff = n1 * n1 * n2 * n2;
      out.push_back(p);
    }
  return out;
}

BigInt big(u128 v) { return bigint_from_u128(v); }
BigInt big(i128 v) { return bigint_from_i128(v); }

}  // namespace

Rational rank_prob(const BitMatrix& alpha, const BitVector& b) {
  if (alpha.rows() != b.size()) throw DimensionError("rank_prob: b must have one entry per row of alpha");
  if (alpha.cols() >= 63) throw DimensionError("rank_prob: too many columns");
  std::vector<std::uint64_t> rows;
  std::vector<int> rhs;
  for (std::size_t i = 0; i < alpha.rows(); ++i) {
    rows.push_back(alpha.row(i).to_word());
    rhs.push_back(b.get(i));
  }
  const std::uint64_t n = affine_solution_count(rows, rhs, alpha.cols());
  return Rational(BigInt(n), BigInt(1) << alpha.cols());
}

std::uint64_t term_solution_count(std::uint64_t a1, std::uint64_t a2, std::size_t m) {
  const std::uint64_t t1 = transpose_code(a1, m), t2 = transpose_code(a2, m);
  std::vector<std::uint64_t> rows;
  std::vector<int> rhs;
  for (std::size_t i = 0; i < m; ++i) {
    rows.push_back(code_row(t1, i, m));
    rhs.push_back(0);
  }
  // (a2^T e)_i = a2[m-1][i]
  const std::uint64_t last_row = code_row(a2, m - 1, m);
  for (std::size_t i = 0; i < m; ++i) {
    rows.push_back(code_row(t2, i, m));
    rhs.push_back(static_cast<int>((last_row >> i) & 1));
  }
  return affine_solution_count(rows, rhs, m);
}

std::vector<FourierTable> fourier_transforms(const Reduction& red, const FoldedColoring& col) {
  require_coset_indicator(red, col);
  std::vector<FourierTable> out;
  for (std::size_t v = 0; v < red.instance().num_v(); ++v) out.push_back(fourier_transform(col, red.space(v), v));
  return out;
}

Rational compute_term(const Reduction& red, std::size_t edge_v, std::size_t edge_w, const BitMatrix& a1,
                      const BitMatrix& a2, const BitMatrix& b1, const BitMatrix& b2,
                      const std::vector<FourierTable>& tr) {
  const auto& inst = red.instance();
  const std::size_t m = red.m();
  if (edge_v >= inst.edges().size() || edge_w >= inst.edges().size())
    throw DimensionError("compute_term: edge index out of range");
  if (inst.edge(edge_v).u != inst.edge(edge_w).u) throw DimensionError("compute_term: edges must share u");
  for (const auto* X : {&a1, &a2, &b1, &b2})
    if (X->rows() != m || X->cols() != m) throw DimensionError("compute_term: indices must be m x m");
  const auto& tv = tr.at(inst.edge(edge_v).v);
  const auto& tw = tr.at(inst.edge(edge_w).v);

  const std::uint64_t c1 = a1.code(), c2 = a2.code(), d1 = b1.code(), d2 = b2.code();
  if (red.forward(edge_v)(c1 ^ c2) != red.forward(edge_w)(d1 ^ d2)) return 0;
  Rational t = tv.coefficient(c1) * tv.coefficient(c1) * tv.coefficient(c2) * tv.coefficient(c2) *
               tw.coefficient(d1) * tw.coefficient(d1) * tw.coefficient(d2) * tw.coefficient(d2);
  t *= Rational(term_solution_count(c1, c2, m) * term_solution_count(d1, d2, m)) * pow2(-2 * static_cast<int>(m));
  if (parity((d1 ^ d2) & red.corner_code())) t = -t;
  return t;
}

FourierSums fourier_sums(const Reduction& red, const FoldedColoring& ind, int k, const FourierLimits& limits) {
  require_coset_indicator(red, ind);
  const auto& inst = red.instance();
  const std::size_t m = red.m();
  if (m > kMaxFourierM) throw DomainTooLarge("fourier_sums: m exceeds 4");
  const auto tr = fourier_transforms(red, ind);

  std::vector<std::vector<PairInfo>> pairs(inst.edges().size());
  for (std::size_t e = 0; e < inst.edges().size(); ++e) pairs[e] = edge_pairs(red, e, tr[inst.edge(e).v]);

  std::uint64_t estimate = 0, worst = 0;
  for (std::size_t u = 0; u < inst.num_u(); ++u)
    for (std::size_t ev : inst.edges_of_u(u))
      for (std::size_t ew : inst.edges_of_u(u)) {
        const std::uint64_t t = pairs[ev].size() * pairs[ew].size();
        estimate += t;
        worst = std::max(worst, t);
      }
  if (worst > limits.max_terms)
    throw SupportTooLarge("fourier_sums: " + std::to_string(worst) + " quadruple terms for one (u, v, w) exceed cap " +
                              std::to_string(limits.max_terms),
                          estimate);

  FourierSums out;
  const int den_exp = 8 * static_cast<int>(m * m) + 2 * static_cast<int>(m);
  const int mass_exp = 8 * static_cast<int>(m * m);
  for (std::size_t u = 0; u < inst.num_u(); ++u) {
    const auto& eu = inst.edges_of_u(u);
    BigInt all = 0, c0 = 0, c1 = 0, c2 = 0, mass = 0;
    for (std::size_t ev : eu)
      for (std::size_t ew : eu) {
        const auto& pv = pairs[ev];
        const auto& pw = pairs[ew];
        for (const auto& p : pv) {
          // Inner sums over matching w-pairs, split by class; all of them
          // carry the w-side sign and probability count.
          i128 low0 = 0, low1 = 0, high = 0;
          u128 mass_inner = 0;
          for (const auto& q : pw) {
            if (q.key != p.key) continue;
            ++out.terms_visited;
            const i128 wq = static_cast<i128>(q.coeff * q.count);
            const i128 signed_wq = q.nu ? -wq : wq;
            const bool low = p.rank <= k && q.rank <= k;
            if (low && q.nu == 0) {
              low0 += signed_wq;
              if (signed_wq < 0) out.theta0_terms_nonnegative = false;
            } else if (low) {
              low1 += signed_wq;
              mass_inner += q.coeff;
            } else {
              high += signed_wq;
              // rank(a1 + a2) <= rank a1 + rank a2, so a sum of rank > k has a
              // summand of rank > k/2 (and likewise for b).
              if (2 * std::max(p.max_single_rank, q.max_single_rank) <= k) out.theta2_rank_split_ok = false;
              if (p.count * q.count != 0) {
                const Rational pr = Rational(p.count * q.count) * pow2(-2 * static_cast<int>(m));
                if (pr > out.theta2_max_probability) out.theta2_max_probability = pr;
              }
            }
          }
          if (low0 == 0 && low1 == 0 && high == 0 && mass_inner == 0) continue;
          const BigInt wp = big(p.coeff * p.count);
          c0 += wp * big(low0);
          c1 += wp * big(low1);
          c2 += wp * big(high);
          all += wp * big(low0 + low1 + high);
          if (mass_inner) mass += big(p.coeff) * big(mass_inner);
        }
      }
    const Rational scale = Rational(1, BigInt(eu.size() * eu.size()));
    out.theta += Rational(all) * pow2(-den_exp) * scale;
    out.theta0 += Rational(c0) * pow2(-den_exp) * scale;
    out.theta1 += Rational(c1) * pow2(-den_exp) * scale;
    out.theta2 += Rational(c2) * pow2(-den_exp) * scale;
    out.theta1_mass += Rational(mass) * pow2(-mass_exp) * scale;
  }
  const Rational nu = inst.num_u();
  out.theta /= nu;
  out.theta0 /= nu;
  out.theta1 /= nu;
  out.theta2 /= nu;
  out.theta1_mass /= nu;
  return out;
}

Rational compute_theta_fourier(const Reduction& red, const FoldedColoring& ind, const FourierLimits& limits) {
  return fourier_sums(red, ind, static_cast<int>(red.m()), limits).theta;
}

DecodingOutcome decode_labeling(const Reduction& red, const FoldedColoring& ind, int k) {
  require_coset_indicator(red, ind);
  const auto& inst = red.instance();
  const std::size_t m = red.m();
  if (m > kMaxFourierM) throw DomainTooLarge("decode_labeling: m exceeds 4");
  const auto tr = fourier_transforms(red, ind);

  DecodingOutcome out;
  // Label weights at each v: b1 + b2 -> sum of numer(b1)^2 numer(b2)^2.
  std::vector<std::map<std::uint64_t, BigInt>> dv(inst.num_v()), dv_all(inst.num_v());
  out.v_labels.resize(inst.num_v());
  for (std::size_t v = 0; v < inst.num_v(); ++v) {
    const auto supp = tr[v].support();
    for (auto b1 : supp)
      for (auto b2 : supp) {
        const std::uint64_t M = b1 ^ b2;
        const BigInt n1 = tr[v].numer[b1], n2 = tr[v].numer[b2];
        const BigInt wgt = n1 * n1 * n2 * n2;
        if (!red.space(v).in_W(M)) out.homogeneous = false;
        dv_all[v][M] += wgt;
        if (static_cast<int>(rank_code(M, m, m)) <= k && parity(M & red.corner_code())) dv[v][M] += wgt;
      }
    for (const auto& [M, _] : dv_all[v]) out.v_labels[v].push_back(M);
  }

  // Label weights at u: a random neighbour v, then pi(a1 + a2) with rank(a1 + a2) <= k.
  Rational success = 0, unrestricted = 0;
  out.u_labels.resize(inst.num_u());
  for (std::size_t u = 0; u < inst.num_u(); ++u) {
    const auto& eu = inst.edges_of_u(u);
    std::map<std::uint64_t, BigInt> du, du_all;
    for (std::size_t e : eu) {
      const std::size_t v = inst.edge(e).v;
      for (const auto& [M, wgt] : dv_all[v]) {
        du_all[red.forward(e)(M)] += wgt;
        if (static_cast<int>(rank_code(M, m, m)) <= k) du[red.forward(e)(M)] += wgt;
      }
    }
    for (const auto& [l, _] : du_all) out.u_labels[u].push_back(l);

    BigInt hit = 0, hit_all = 0;
    for (std::size_t e : eu) {
      const std::size_t w = inst.edge(e).v;
      for (const auto& [M, wgt] : dv[w]) {
        auto it = du.find(red.forward(e)(M));
        if (it != du.end()) hit += wgt * it->second;
      }
      for (const auto& [M, wgt] : dv_all[w]) {
        auto it = du_all.find(red.forward(e)(M));
        if (it != du_all.end()) hit_all += wgt * it->second;
      }
    }
    const Rational scale = Rational(1, BigInt(eu.size() * eu.size())) * pow2(-8 * static_cast<int>(m * m));
    success += Rational(hit) * scale;
    unrestricted += Rational(hit_all) * scale;
  }
  out.success_probability = success / inst.num_u();
  out.unrestricted_success = unrestricted / inst.num_u();
  return out;
}

Rational average_density(const Reduction& red, const FoldedColoring& ind) {
  require_coset_indicator(red, ind);
  const auto& inst = red.instance();
  Rational s = 0;
  for (std::size_t u = 0; u < inst.num_u(); ++u) {
    Rational acc = 0;
    for (std::size_t e : inst.edges_of_u(u)) acc += ind.density(inst.edge(e).v);
    s += acc / inst.edges_of_u(u).size();
  }
  return s / inst.num_u();
}

Theta2Check theta2_bound_check(const ThetaReport& report, const std::vector<FourierTable>& transforms, int k) {
  Theta2Check c;
  c.bound_squared = pow2(-(k + 2));
  c.aggregate_ok = le_pow2_neg_half_k_plus_one(abs(report.theta2), k);
  c.parseval_ok = std::all_of(transforms.begin(), transforms.end(), [](const FourierTable& t) { return t.mass() <= 1; });
  c.per_term_ok = report.theta2_max_probability <= pow2(-(k / 2 + 1));
  return c;
}

ThetaReport decompose_theta(const Reduction& red, const FoldedColoring& ind, int k, const FourierLimits& limits) {
  if (k < 0) throw std::invalid_argument("decompose_theta: k must be nonnegative");
  const auto sums = fourier_sums(red, ind, k, limits);
  const auto tr = fourier_transforms(red, ind);

  ThetaReport rep;
  rep.k = k;
  rep.delta_log2 = red.instance().delta_log2();
  rep.theta = sums.theta;
  rep.theta0 = sums.theta0;
  rep.theta1 = sums.theta1;
  rep.theta2 = sums.theta2;
  rep.theta1_mass = sums.theta1_mass;
  rep.theta2_max_probability = sums.theta2_max_probability;
  rep.theta_direct = independence_theta(red, ind, TestMode::T28);
  rep.s = average_density(red, ind);
  rep.s8 = rep.s * rep.s * rep.s * rep.s;
  rep.s8 *= rep.s8;
  rep.decoding = decode_labeling(red, ind, k);

  rep.identity_ok = rep.theta == rep.theta_direct && rep.theta0 + rep.theta1 + rep.theta2 == rep.theta;
  rep.theta0_nonnegative = sums.theta0_terms_nonnegative && rep.theta0 >= 0;
  rep.theta0_ge_s8 = rep.theta0 >= rep.s8;
  rep.mass_matches_decoding = rep.theta1_mass == rep.decoding.success_probability;
  rep.theta1_le_decoding = abs(rep.theta1) <= rep.theta1_mass;
  rep.theta2_rank_split_ok = sums.theta2_rank_split_ok;

  const auto t2 = theta2_bound_check(rep, tr, k);
  rep.theta2_le_rankbound = t2.aggregate_ok;
  rep.parseval_ok = t2.parseval_ok;

  rep.folding_ok = true;
  for (std::size_t v = 0; v < tr.size(); ++v) rep.folding_ok &= check_folding_support(tr[v], red.space(v));
  rep.homogeneity_ok = rep.decoding.homogeneous;

  rep.soundness_applicable = rep.theta_direct == 0;
  if (rep.soundness_applicable)
    rep.soundness_chain_ok = le_pow2_neg_half_k_plus_one(rep.s8 - rep.decoding.success_probability, k);
  rep.theta1_le_declared_delta = to_double(abs(rep.theta1)) <= std::exp2(rep.delta_log2);
  return rep;
}

}  // namespace qcpcp
