#include "qcpcp/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qcpcp/exact.hpp"
#include "qcpcp/fourier.hpp"
#include "qcpcp/hypergraph.hpp"
#include "qcpcp/label_cover.hpp"
#include "qcpcp/oracle.hpp"
#include "qcpcp/quadratic_code.hpp"
#include "qcpcp/rng.hpp"
#include "qcpcp/verifier.hpp"

namespace qcpcp {

namespace {

constexpr int kKs[] = {1, 2, 3};

struct Case {
  GeneratedInstance gen;
  Reduction red;
  std::optional<Hypergraph> h28, h44;

  explicit Case(GeneratedInstance g) : gen(std::move(g)), red(gen.instance) {}
};

struct ColoringCase {
  std::size_t instance = 0;
  FoldedColoring col;
  std::vector<ThetaReport> reports;  // one per k in kKs
};

// Collects failures; the first few are kept for the detail line.
struct Tally {
  std::size_t checks = 0, failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  bool ok() const { return failures == 0; }
  std::string summary(const std::string& pass_text) const {
    if (ok()) return pass_text;
    return std::to_string(failures) + "/" + std::to_string(checks) + " checks failed; first: " + first;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string label(std::size_t inst, std::size_t i = SIZE_MAX) {
  std::string s = "instance " + std::to_string(inst);
  if (i != SIZE_MAX) s += " coloring " + std::to_string(i);
  return s;
}

FoldedColoring constant_coloring(const std::vector<FoldingSpace>& spaces, std::uint8_t value) {
  std::vector<std::vector<std::uint8_t>> t;
  for (const auto& s : spaces) t.emplace_back(s.coset_count(), value);
  return FoldedColoring(FoldedColoring::Domain::Cosets, 2, std::move(t));
}

bool soundness_holds(const ThetaReport& rep) {
  return le_pow2_neg_half_k_plus_one(rep.s8 - rep.decoding.success_probability, rep.k);
}

}  // namespace

struct AcceptanceSuite::State {
  AcceptanceOptions opt;
  std::vector<Case> cases;
  std::vector<ColoringCase> colorings;
  bool colorings_ready = false;

  void ensure_cases() {
    if (!cases.empty()) return;
    cases.reserve(opt.instances);
    for (int i = 0; i < opt.instances; ++i) {
      YesInstanceParams p;  // m=2, r=1, |U|=|V|=3, degree 2, one constraint
      p.seed = opt.seed + static_cast<std::uint64_t>(i);
      cases.emplace_back(generate_yes_instance(p));
    }
  }

  const Hypergraph& hypergraph(std::size_t i, TestMode mode) {
    auto& c = cases[i];
    auto& slot = mode == TestMode::T28 ? c.h28 : c.h44;
    // Three blocks of 64 pairs reach about 8M distinct edges.
    if (!slot) slot = build_hypergraph(c.red, mode, HypergraphLimits{2, 100'000'000});
    return *slot;
  }

  // The shared pool for criteria 4-7: colorings spread round-robin over the
  // first ten instances, densities cycling through 1/8 .. 7/8.
  void ensure_colorings() {
    if (colorings_ready) return;
    ensure_cases();
    const std::size_t pool = std::min<std::size_t>(10, cases.size());
    for (int i = 0; i < opt.colorings; ++i) {
      const std::size_t inst = static_cast<std::size_t>(i) % pool;
      Rng rng(0xC0104ull * 1000 + opt.seed * 7919 + static_cast<std::uint64_t>(i));
      auto col = random_folded_coloring(cases[inst].red.spaces(), rng, 1 + i % 7, 8);
      ColoringCase cc{inst, col, {}};
      for (int k : kKs) cc.reports.push_back(decompose_theta(cases[inst].red, col, k));
      colorings.push_back(std::move(cc));
    }
    colorings_ready = true;
  }

  CriterionResult c1();
  CriterionResult c2();
  CriterionResult c3();
  CriterionResult c4();
  CriterionResult c5();
  CriterionResult c6();
  CriterionResult c7();
  CriterionResult c8();
  CriterionResult c9();
  CriterionResult c10();
  CriterionResult c11();
};

AcceptanceSuite::AcceptanceSuite(AcceptanceOptions opt) : st_(std::make_unique<State>()) { st_->opt = opt; }
AcceptanceSuite::~AcceptanceSuite() = default;

CriterionResult AcceptanceSuite::State::c1() {
  CriterionResult r{1, "completeness, 8-uniform test", false, {}, 0};
  const auto t0 = std::chrono::steady_clock::now();
  ensure_cases();
  Tally t;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto rep = completeness_check(c.red, c.gen.planted, TestMode::T28);
    t.expect(rep.acceptance == 1, label(i) + ": acceptance " + to_string(rep.acceptance));
    t.expect(rep.table_mismatches == 0 && rep.all_rows_equal == 0, label(i) + ": value table replay failed");
    const auto honest = honest_coloring(c.red.spaces(), c.gen.planted, FoldedColoring::Domain::Cosets);
    t.expect(acceptance_probability(c.red, honest, TestMode::T28) == 1, label(i) + ": factored acceptance != 1");
    const auto& h = hypergraph(i, TestMode::T28);
    edges += h.edges.size();
    const auto mono = count_monochromatic(h, vertex_colors(h, honest));
    t.expect(mono == 0, label(i) + ": " + std::to_string(mono) + " monochromatic edges");
    t.expect(h.collapsed == 0, label(i) + ": collapsed queries");
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t.expect(secs < 60.0, "runtime " + fmt("%.1f s", secs) + " >= 60 s");
  r.passed = t.ok();
  r.detail = t.summary(std::to_string(cases.size()) + " instances, acceptance exactly 1, 0 of " +
                       std::to_string(edges) + " edges monochromatic");
  return r;
}

CriterionResult AcceptanceSuite::State::c2() {
  CriterionResult r{2, "completeness, 4-color / 4-uniform test", false, {}, 0};
  ensure_cases();
  Tally t;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto rep = completeness_check(c.red, c.gen.planted, TestMode::T44);
    t.expect(rep.acceptance == 1, label(i) + ": acceptance " + to_string(rep.acceptance));
    t.expect(rep.table_mismatches == 0, label(i) + ": value table replay failed");
    const auto honest = honest_coloring(c.red.spaces(), c.gen.planted, FoldedColoring::Domain::CosetPairs);
    t.expect(acceptance_probability(c.red, honest, TestMode::T44) == 1, label(i) + ": factored acceptance != 1");
    const auto& h = hypergraph(i, TestMode::T44);
    edges += h.edges.size();
    t.expect(count_monochromatic(h, vertex_colors(h, honest)) == 0, label(i) + ": honest 4-coloring fails");
    const auto q4 = is_q_colorable(h, 4);
    t.expect(q4.colorable, label(i) + ": oracle finds no 4-coloring");
    if (q4.colorable) t.expect(count_monochromatic(h, q4.witness) == 0, label(i) + ": oracle witness invalid");
  }
  r.passed = t.ok();
  r.detail = t.summary(std::to_string(cases.size()) + " instances, acceptance exactly 1, oracle 4-colors all (" +
                       std::to_string(edges) + " edges)");
  return r;
}

CriterionResult AcceptanceSuite::State::c3() {
  CriterionResult r{3, "balanced honest color classes", false, {}, 0};
  ensure_cases();
  Tally t;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    for (auto mode : {TestMode::T28, TestMode::T44}) {
      const auto honest = honest_coloring(c.red.spaces(), c.gen.planted, domain_of(mode));
      const Rational share(1, honest.colors());
      const auto& h = hypergraph(i, mode);
      const auto colors = vertex_colors(h, honest);
      for (int col = 0; col < honest.colors(); ++col) {
        for (std::size_t v = 0; v < honest.num_vertices(); ++v)
          t.expect(honest.color_fraction(v, col) == share,
                   label(i) + " mode " + std::to_string(int(mode)) + ": class " + std::to_string(col) +
                       " has share " + to_string(honest.color_fraction(v, col)) + " at v" + std::to_string(v));
        std::vector<std::uint32_t> cls;
        for (std::uint32_t x = 0; x < h.n; ++x)
          if (colors[x] == col) cls.push_back(x);
        t.expect(is_independent(h, cls), label(i) + ": class " + std::to_string(col) + " contains an edge");
        t.expect(independence_theta(c.red, honest.indicator(col), mode) == 0,
                 label(i) + ": class " + std::to_string(col) + " has nonzero Theta");
      }
      if (mode == TestMode::T28) {
        // Exact maximum independent set: at least the class size n/2.
        const auto mis = max_independent_set(h);
        t.expect(is_independent(h, mis.witness) && mis.witness.size() == mis.size, label(i) + ": MIS witness invalid");
        t.expect(2 * mis.size >= h.n, label(i) + ": MIS smaller than an honest class");
      }
    }
  }
  r.passed = t.ok();
  r.detail = t.summary("shares exactly 1/2 and 1/4 in every block; every class independent (" +
                       std::to_string(t.checks) + " checks)");
  return r;
}

CriterionResult AcceptanceSuite::State::c4() {
  CriterionResult r{4, "Theta identity direct = Fourier = Theta0+Theta1+Theta2", false, {}, 0};
  const auto t0 = std::chrono::steady_clock::now();
  ensure_colorings();
  Tally t;
  for (std::size_t i = 0; i < colorings.size(); ++i)
    for (const auto& rep : colorings[i].reports) {
      const std::string where = label(colorings[i].instance, i) + " k=" + std::to_string(rep.k);
      t.expect(rep.theta_direct == rep.theta, where + ": direct " + to_string(rep.theta_direct) + " vs Fourier " +
                                                  to_string(rep.theta));
      t.expect(rep.theta0 + rep.theta1 + rep.theta2 == rep.theta, where + ": parts do not sum to Theta");
    }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t.expect(secs < 300.0, "runtime " + fmt("%.1f s", secs) + " >= 300 s");
  r.passed = t.ok();
  r.detail = t.summary(std::to_string(colorings.size()) + " colorings x k in {1,2,3}, exact equality");
  return r;
}

CriterionResult AcceptanceSuite::State::c5() {
  CriterionResult r{5, "Theta0 >= s^8", false, {}, 0};
  ensure_colorings();
  Tally t;
  for (std::size_t i = 0; i < colorings.size(); ++i)
    for (const auto& rep : colorings[i].reports)
      t.expect(rep.theta0 >= rep.s8, label(colorings[i].instance, i) + " k=" + std::to_string(rep.k) +
                                         ": Theta0 " + to_string(rep.theta0) + " < s^8 " + to_string(rep.s8));
  const std::size_t pool = std::min<std::size_t>(10, cases.size());
  for (std::size_t i = 0; i < pool; ++i) {
    const auto& red = cases[i].red;
    for (int k : kKs) {
      const auto empty = decompose_theta(red, constant_coloring(red.spaces(), 0), k);
      const auto full = decompose_theta(red, constant_coloring(red.spaces(), 1), k);
      t.expect(empty.s == 0 && empty.theta0 == 0, label(i) + ": empty set gives Theta0 " + to_string(empty.theta0));
      t.expect(full.s == 1 && full.theta0 == 1, label(i) + ": full set gives Theta0 " + to_string(full.theta0));
    }
  }
  r.passed = t.ok();
  r.detail = t.summary(std::to_string(colorings.size()) + " colorings hold; s=0 gives 0 and s=1 gives 1");
  return r;
}

CriterionResult AcceptanceSuite::State::c6() {
  CriterionResult r{6, "|Theta1| <= decoding sum, homogeneous labels", false, {}, 0};
  ensure_colorings();
  Tally t;
  for (std::size_t i = 0; i < colorings.size(); ++i)
    for (const auto& rep : colorings[i].reports) {
      const std::string where = label(colorings[i].instance, i) + " k=" + std::to_string(rep.k);
      t.expect(rep.theta1_mass == rep.decoding.success_probability, where + ": coefficient sum " + to_string(rep.theta1_mass) +
                                                                " != decoding success " +
                                                                to_string(rep.decoding.success_probability));
      t.expect(abs(rep.theta1) <= rep.theta1_mass, where + ": |Theta1| " + to_string(abs(rep.theta1)) + " exceeds " +
                                               to_string(rep.theta1_mass));
      t.expect(rep.decoding.homogeneous, where + ": a decoded label is not symmetric or violates C_v");
    }
  r.passed = t.ok();
  r.detail = t.summary(std::to_string(colorings.size()) + " colorings x k in {1,2,3}");
  return r;
}

CriterionResult AcceptanceSuite::State::c7() {
  CriterionResult r{7, "|Theta2| <= 2^-(k/2+1), rank probabilities", false, {}, 0};
  ensure_colorings();
  Tally t;
  for (std::size_t i = 0; i < colorings.size(); ++i)
    for (const auto& rep : colorings[i].reports)
      t.expect(le_pow2_neg_half_k_plus_one(abs(rep.theta2), rep.k),
               label(colorings[i].instance, i) + " k=" + std::to_string(rep.k) + ": |Theta2| " +
                   to_string(abs(rep.theta2)));

  // Every 3x3 alpha and right-hand side b, against a direct count over x.
  constexpr std::size_t m = 3;
  std::size_t cases_checked = 0;
  for (std::uint64_t a = 0; a < (1u << (m * m)); ++a) {
    const auto alpha = BitMatrix::from_code(a, m, m);
    const std::size_t rank = rank_code(a, m, m);
    for (std::uint64_t bw = 0; bw < (1u << m); ++bw) {
      const auto b = BitVector::from_word(m, bw);
      std::uint64_t hits = 0;
      for (std::uint64_t xw = 0; xw < (1u << m); ++xw) hits += alpha.apply(BitVector::from_word(m, xw)) == b;
      const Rational p = rank_prob(alpha, b);
      t.expect(p == Rational(hits, 1u << m), "rank_prob mismatch at alpha " + std::to_string(a));
      t.expect(p == 0 || p == pow2(-static_cast<int>(rank)), "rank_prob off {0, 2^-rank} at " + std::to_string(a));
      ++cases_checked;
    }
  }
  r.passed = t.ok();
  r.detail = t.summary(std::to_string(colorings.size()) + " colorings x k in {1,2,3}; " +
                       std::to_string(cases_checked) + " (alpha, b) cases at m=3");
  return r;
}

CriterionResult AcceptanceSuite::State::c8() {
  CriterionResult r{8, "soundness chain on independent sets", false, {}, 0};
  ensure_cases();
  Tally t;
  std::size_t honest = 0, searched = 0, trivial = 0;
  auto check = [&](const Reduction& red, const FoldedColoring& ind, const std::string& where) {
    for (int k : kKs) {
      const auto rep = decompose_theta(red, ind, k);
      t.expect(rep.theta == 0 && rep.theta_direct == 0, where + ": Theta is not zero");
      t.expect(soundness_holds(rep), where + " k=" + std::to_string(k) + ": s^8 " + to_string(rep.s8) +
                                         " > success " + to_string(rep.decoding.success_probability) +
                                         " + 2^-(k/2+1)");
    }
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto col = honest_coloring(c.red.spaces(), c.gen.planted, FoldedColoring::Domain::Cosets);
    for (int cls = 0; cls < 2; ++cls, ++honest) check(c.red, col.indicator(cls), label(i) + " honest class");
    check(c.red, constant_coloring(c.red.spaces(), 0), label(i) + " empty set");
    ++trivial;

    // Randomized greedy growth: add cosets in random order while Theta stays 0.
    Rng rng(0x50D1ull + opt.seed * 104729 + i);
    for (int trial = 0; trial < 4; ++trial) {
      auto tables = constant_coloring(c.red.spaces(), 0).tables();
      std::vector<std::pair<std::size_t, std::uint64_t>> order;
      for (std::size_t v = 0; v < tables.size(); ++v)
        for (std::uint64_t x = 0; x < tables[v].size(); ++x) order.emplace_back(v, x);
      for (std::size_t j = order.size(); j > 1; --j) std::swap(order[j - 1], order[rng.below(j)]);
      for (auto [v, x] : order) {
        tables[v][x] = 1;
        const FoldedColoring cand(FoldedColoring::Domain::Cosets, 2, tables);
        if (independence_theta(c.red, cand, TestMode::T28) != 0) tables[v][x] = 0;
      }
      check(c.red, FoldedColoring(FoldedColoring::Domain::Cosets, 2, tables), label(i) + " greedy set");
      ++searched;
    }
  }
  t.expect(searched > 0, "randomized search produced no sets");
  r.passed = t.ok();
  r.detail = t.summary(std::to_string(honest) + " honest classes, " + std::to_string(searched) +
                       " searched maximal sets, " + std::to_string(trivial) + " empty sets; k in {1,2,3}");
  return r;
}

CriterionResult AcceptanceSuite::State::c9() {
  CriterionResult r{9, "folding support inside W", false, {}, 0};
  ensure_cases();
  Tally t;
  const std::size_t pool = std::min<std::size_t>(10, cases.size());
  for (int i = 0; i < 50; ++i) {
    const auto& c = cases[static_cast<std::size_t>(i) % pool];
    Rng rng(0xF01Dull + opt.seed * 31 + static_cast<std::uint64_t>(i));
    const auto col = random_folded_coloring(c.red.spaces(), rng);
    for (std::size_t v = 0; v < col.num_vertices(); ++v)
      t.expect(check_folding_support(col, c.red.space(v), v),
               label(i % pool, i) + ": support leaves W at v" + std::to_string(v));
  }
  // Negative controls: uniformly random functions on all matrices.
  int rejected = 0;
  for (int i = 0; i < 10; ++i) {
    const auto& c = cases[static_cast<std::size_t>(i) % pool];
    Rng rng(0xBAD0ull + opt.seed * 37 + static_cast<std::uint64_t>(i));
    const std::size_t v = static_cast<std::size_t>(i) % c.red.instance().num_v();
    const auto& space = c.red.space(v);
    t.expect(!c.red.instance().constraints(v).empty(), "negative control vertex has no constraint");
    std::vector<std::uint8_t> full(std::size_t{1} << space.ambient_bits());
    for (auto& x : full) x = static_cast<std::uint8_t>(rng.coin());
    const bool passes = check_folding_support(fourier_transform(full, space.m()), space);
    t.expect(!passes, "unfolded control " + std::to_string(i) + " passed the folding check");
    rejected += !passes;
  }
  r.passed = t.ok();
  r.detail = t.summary("50 folded colorings supported on W; " + std::to_string(rejected) +
                       "/10 unfolded controls rejected");
  return r;
}

CriterionResult AcceptanceSuite::State::c10() {
  CriterionResult r{10, "covering number <= 2", false, {}, 0};
  ensure_cases();
  Tally t;
  int max_t = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto& h = hypergraph(i, TestMode::T44);
    const auto honest = honest_coloring(c.red.spaces(), c.gen.planted, FoldedColoring::Domain::CosetPairs);
    const auto colors = vertex_colors(h, honest);
    // Coordinate j of the pair color is the honest 2-coloring of one query.
    std::vector<std::vector<int>> coords(2, std::vector<int>(h.n));
    for (std::size_t x = 0; x < h.n; ++x) {
      coords[0][x] = colors[x] >> 1;
      coords[1][x] = colors[x] & 1;
    }
    t.expect(covers_all_edges(h, coords), label(i) + ": honest coordinates leave an edge uncovered");
    const auto cover = covering_number(h, 2);
    t.expect(cover.feasible && cover.t <= 2, label(i) + ": oracle covering number above 2");
    t.expect(covers_all_edges(h, cover.assignments), label(i) + ": oracle assignments do not cover");
    max_t = std::max(max_t, cover.t);
  }
  r.passed = t.ok();
  r.detail = t.summary("honest coordinates cover every edge; oracle covering number " + std::to_string(max_t) +
                       " on all " + std::to_string(cases.size()) + " instances");
  return r;
}

CriterionResult AcceptanceSuite::State::c11() {
  CriterionResult r{11, "parameter arithmetic", false, {}, 0};
  using Big = boost::multiprecision::cpp_bin_float_50;
  Tally t;
  double worst = 0;
  for (int e : {10, 20, 30}) {
    for (double eps : {0.001, 0.01}) {
      const double L = std::ldexp(1.0, e);
      const auto p = compute_parameters(L, eps);
      const Big bl = Big(L);
      const Big be = Big(eps);
      const Big n_exp = bl + boost::multiprecision::pow(bl, Big(10) / 4 + 2 * be);
      const Big s_bound = boost::multiprecision::pow(Big(2), -boost::multiprecision::pow(bl, Big(1) / 8 - 3 * be));
      const double rel_n = static_cast<double>(boost::multiprecision::abs(Big(p.log2_n_bound) - n_exp) / n_exp);
      const double rel_s =
          static_cast<double>(boost::multiprecision::abs(Big(std::exp2(p.log2_s_bound)) - s_bound) / s_bound);
      worst = std::max({worst, rel_n, rel_s});
      const std::string where = "log2 N = 2^" + std::to_string(e) + ", eps = " + fmt("%g", eps);
      t.expect(rel_n <= 1e-9, where + ": n-bound exponent off by " + fmt("%.3g", rel_n));
      t.expect(rel_s <= 1e-9, where + ": s-bound off by " + fmt("%.3g", rel_s));
    }
  }
  r.passed = t.ok();
  r.detail = t.summary("6 settings, worst relative error " + fmt("%.2e", worst));
  return r;
}

CriterionResult AcceptanceSuite::run(int id) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = st_->c1(); break;
      case 2: r = st_->c2(); break;
      case 3: r = st_->c3(); break;
      case 4: r = st_->c4(); break;
      case 5: r = st_->c5(); break;
      case 6: r = st_->c6(); break;
      case 7: r = st_->c7(); break;
      case 8: r = st_->c8(); break;
      case 9: r = st_->c9(); break;
      case 10: r = st_->c10(); break;
      case 11: r = st_->c11(); break;
      default: throw std::out_of_range("no criterion " + std::to_string(id));
    }
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> AcceptanceSuite::run_all(const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    out.push_back(run(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "[%s] %2d  %-52s (%7.2f s)  ", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace qcpcp
