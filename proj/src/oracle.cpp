#include "qcpcp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace qcpcp {

bool is_independent(const Hypergraph& h, std::span<const std::uint32_t> set) {
  std::vector<char> in(h.n, 0);
  for (auto x : set) in.at(x) = 1;
  for (const auto& e : h.edges)
    if (std::all_of(e.begin(), e.end(), [&](std::uint32_t x) { return in[x]; })) return false;
  return true;
}

std::size_t count_monochromatic(const Hypergraph& h, std::span<const int> colors) {
  if (colors.size() != h.n) throw std::invalid_argument("count_monochromatic: one color per vertex required");
  std::size_t bad = 0;
  for (const auto& e : h.edges) {
    const int c = colors[e.front()];
    bad += std::all_of(e.begin(), e.end(), [&](std::uint32_t x) { return colors[x] == c; });
  }
  return bad;
}

bool covers_all_edges(const Hypergraph& h, const std::vector<std::vector<int>>& assignments) {
  for (const auto& a : assignments)
    if (a.size() != h.n) throw std::invalid_argument("covers_all_edges: assignment size mismatch");
  for (const auto& e : h.edges) {
    bool covered = false;
    for (const auto& a : assignments) {
      const int c = a[e.front()];
      if (std::any_of(e.begin(), e.end(), [&](std::uint32_t x) { return a[x] != c; })) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

// ---------------------------------------------------------------- MIS

namespace {

struct MisSearch {
  std::vector<std::vector<std::uint64_t>> incident;  // edge masks through each vertex
  std::vector<std::size_t> degree;
  std::uint64_t best = 0;
  int best_size = -1;
  std::uint64_t nodes = 0;
  std::uint64_t node_limit = 0;

  void run(std::uint64_t S, std::uint64_t cand) {
    if (++nodes > node_limit) throw SearchLimitExceeded("max_independent_set: node limit reached");
    const int size = std::popcount(S);
    if (size + std::popcount(cand) <= best_size) return;
    if (cand == 0) {
      best = S;
      best_size = size;
      return;
    }
    // Branch on the candidate of highest degree.
    std::uint32_t v = std::countr_zero(cand);
    for (std::uint64_t c = cand; c; c &= c - 1) {
      const auto x = static_cast<std::uint32_t>(std::countr_zero(c));
      if (degree[x] > degree[v]) v = x;
    }
    const std::uint64_t bit = std::uint64_t{1} << v;
    const std::uint64_t S2 = S | bit;
    std::uint64_t cand2 = cand & ~bit;
    bool ok = true;
    for (auto e : incident[v]) {
      const std::uint64_t rest = e & ~S2;
      if (rest == 0) {
        ok = false;
        break;
      }
      if (std::has_single_bit(rest)) cand2 &= ~rest;  // that vertex would close the edge
    }
    if (ok) run(S2, cand2);
    run(S, cand & ~bit);
  }
};

}  // namespace

IndependentSetResult max_independent_set(const Hypergraph& h, std::size_t cap, std::uint64_t node_limit) {
  if (h.n > std::min<std::size_t>(cap, 64))
    throw OracleTooLarge("max_independent_set: n = " + std::to_string(h.n) + " exceeds cap " +
                         std::to_string(std::min<std::size_t>(cap, 64)));
  MisSearch s;
  s.node_limit = node_limit;
  s.incident.resize(h.n);
  s.degree.assign(h.n, 0);
  std::uint64_t cand = h.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << h.n) - 1;
  for (const auto& e : h.edges) {
    std::uint64_t mask = 0;
    for (auto x : e) mask |= std::uint64_t{1} << x;
    if (e.size() == 1) cand &= ~mask;  // never allowed in
    for (auto x : e) {
      s.incident[x].push_back(mask);
      ++s.degree[x];
    }
  }
  s.run(0, cand);

  IndependentSetResult out;
  out.size = static_cast<std::size_t>(s.best_size);
  out.nodes = s.nodes;
  for (std::uint64_t b = s.best; b; b &= b - 1) out.witness.push_back(static_cast<std::uint32_t>(std::countr_zero(b)));
  return out;
}

// ---------------------------------------------------------------- coloring

namespace {

// Incidence in CSR form: the edges through x are inc[start[x] .. start[x+1]).
struct Incidence {
  std::vector<std::uint64_t> start;
  std::vector<std::uint32_t> inc;

  explicit Incidence(const Hypergraph& h) : start(h.n + 1, 0) {
    for (const auto e : h.edges)
      for (auto x : e) ++start[x + 1];
    for (std::size_t x = 0; x < h.n; ++x) start[x + 1] += start[x];
    inc.resize(start[h.n]);
    auto fill = start;
    for (std::uint32_t i = 0; i < h.edges.size(); ++i)
      for (auto x : h.edges[i]) inc[fill[x]++] = i;
  }
  std::span<const std::uint32_t> of(std::size_t x) const { return {inc.data() + start[x], start[x + 1] - start[x]}; }
  std::size_t degree(std::size_t x) const { return start[x + 1] - start[x]; }
};

// Backtracking with incremental bookkeeping: once an edge has a single
// uncolored vertex and its other vertices agree on color c, that vertex
// gets c forbidden. Assigning and undoing a vertex costs its degree.
struct ColorSearch {
  const Hypergraph* h = nullptr;
  const Incidence* inc = nullptr;
  int q = 0;
  std::vector<int> color;
  std::vector<std::uint8_t> uncolored;         // per edge
  std::vector<std::uint32_t> forbid;           // n x q counters
  std::vector<std::pair<std::uint32_t, int>> trail;
  std::uint64_t nodes = 0;
  std::uint64_t node_limit = 0;

  unsigned allowed(std::uint32_t x) const {
    unsigned mask = 0;
    for (int c = 0; c < q; ++c)
      if (forbid[std::size_t{x} * q + c] == 0) mask |= 1u << c;
    return mask;
  }

  void assign(std::uint32_t v, int c) {
    color[v] = c;
    for (auto ei : inc->of(v)) {
      if (--uncolored[ei] != 1) continue;
      const auto e = h->edges[ei];
      std::uint32_t last = 0;
      int common = -1;
      bool agree = true;
      for (auto x : e) {
        if (color[x] < 0) {
          last = x;
        } else if (common < 0) {
          common = color[x];
        } else if (color[x] != common) {
          agree = false;
          break;
        }
      }
      if (agree) {
        ++forbid[std::size_t{last} * q + common];
        trail.emplace_back(last, common);
      }
    }
  }

  void undo(std::uint32_t v, std::size_t mark) {
    while (trail.size() > mark) {
      const auto [x, c] = trail.back();
      --forbid[std::size_t{x} * q + c];
      trail.pop_back();
    }
    for (auto ei : inc->of(v)) ++uncolored[ei];
    color[v] = -1;
  }

  bool run(std::size_t colored, int used) {
    if (++nodes > node_limit) throw SearchLimitExceeded("is_q_colorable: node limit reached");
    if (colored == color.size()) return true;
    // Fewest allowed colors first; ties to higher degree.
    std::uint32_t best = 0;
    int best_count = q + 1;
    unsigned best_mask = 0;
    for (std::uint32_t v = 0; v < color.size(); ++v) {
      if (color[v] >= 0) continue;
      const unsigned mask = allowed(v);
      const int cnt = std::popcount(mask);
      if (cnt == 0) return false;
      if (cnt < best_count || (cnt == best_count && inc->degree(v) > inc->degree(best))) {
        best = v;
        best_count = cnt;
        best_mask = mask;
      }
    }
    for (int c = 0; c < q && c <= used; ++c) {
      if (!((best_mask >> c) & 1)) continue;
      const std::size_t mark = trail.size();
      assign(best, c);
      if (run(colored + 1, std::max(used, c + 1))) return true;
      undo(best, mark);
    }
    return false;
  }
};

}  // namespace

ColoringResult is_q_colorable(const Hypergraph& h, int q, std::uint64_t node_limit) {
  if (q < 1 || q > 16) throw std::invalid_argument("is_q_colorable: q must be in [1, 16]");
  ColoringResult out;
  for (const auto e : h.edges)
    if (e.size() < 2) return out;  // a single vertex is always monochromatic
  const Incidence inc(h);
  ColorSearch s;
  s.h = &h;
  s.inc = &inc;
  s.q = q;
  s.node_limit = node_limit;
  s.color.assign(h.n, -1);
  s.uncolored.resize(h.edges.size());
  for (std::size_t i = 0; i < h.edges.size(); ++i) s.uncolored[i] = static_cast<std::uint8_t>(h.edges[i].size());
  s.forbid.assign(h.n * static_cast<std::size_t>(q), 0);
  out.colorable = s.run(0, 0);
  out.nodes = s.nodes;
  if (out.colorable) out.witness = s.color;
  return out;
}

CoverResult covering_number(const Hypergraph& h, int max_t, std::uint64_t node_limit) {
  CoverResult out;
  for (const auto e : h.edges)
    if (e.size() < 2) return out;
  if (h.edges.empty()) {
    out.feasible = true;
    return out;
  }
  for (int t = 1; t <= max_t; ++t) {
    const auto col = is_q_colorable(h, 1 << t, node_limit);
    if (!col.colorable) continue;
    out.feasible = true;
    out.t = t;
    out.assignments.assign(t, std::vector<int>(h.n));
    for (int j = 0; j < t; ++j)
      for (std::size_t x = 0; x < h.n; ++x) out.assignments[j][x] = (col.witness[x] >> j) & 1;
    return out;
  }
  throw SearchLimitExceeded("covering_number: exceeds max_t = " + std::to_string(max_t));
}

OracleResult solve(const Hypergraph& h, const OracleOptions& opt) {
  OracleResult res;
  if (opt.run_mis && h.n <= std::min<std::size_t>(opt.mis_cap, 64)) {
    res.mis = max_independent_set(h, opt.mis_cap, opt.node_limit * 50);
    res.witnesses_verified &= is_independent(h, res.mis->witness);
  }
  for (int q : opt.qs) {
    auto r = is_q_colorable(h, q, opt.node_limit);
    if (r.colorable) res.witnesses_verified &= count_monochromatic(h, r.witness) == 0;
    res.colorability.push_back({q, std::move(r)});
  }
  if (opt.run_cover) {
    res.cover = covering_number(h, opt.max_t, opt.node_limit);
    if (res.cover->feasible) res.witnesses_verified &= covers_all_edges(h, res.cover->assignments);
  }
  return res;
}

}  // namespace qcpcp
