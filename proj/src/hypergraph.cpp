#include "qcpcp/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>

namespace qcpcp {

namespace {

// Distinct vertex sets one side of the test can query, as bitmasks over
// the block, for a fixed shift (coset index of F o pi, plus E on the w side).
// Also counts the vector choices for which both offsets vanish.
struct SideParts {
  std::vector<std::uint64_t> masks;
  std::uint64_t zero_offsets = 0;
};

SideParts side_parts(const FoldingSpace& s, std::uint64_t shift, TestMode mode) {
  const std::size_t m = s.m();
  const std::uint64_t M = std::uint64_t{1} << m;
  const std::uint64_t e = std::uint64_t{1} << (m - 1);
  const std::uint64_t cc = s.coset_count();

  SideParts out;
  std::set<std::pair<std::uint64_t, std::uint64_t>> offsets;
  for (std::uint64_t x = 0; x < M; ++x)
    for (std::uint64_t y = 0; y < M; ++y)
      for (std::uint64_t z = 0; z < M; ++z) {
        const std::uint64_t d1 = s.coset_index(outer_code(x, y, m)) ^ shift;
        const std::uint64_t d2 = s.coset_index(outer_code(x ^ e, z, m)) ^ shift;
        offsets.emplace(d1, d2);
        out.zero_offsets += (d1 == 0 && d2 == 0);
      }

  std::unordered_set<std::uint64_t> seen;
  for (auto [d1, d2] : offsets)
    for (std::uint64_t a = 0; a < cc; ++a)
      for (std::uint64_t b = 0; b < cc; ++b) {
        std::uint64_t mask;
        if (mode == TestMode::T28) {
          mask = (std::uint64_t{1} << a) | (std::uint64_t{1} << (a ^ d1)) | (std::uint64_t{1} << b) |
                 (std::uint64_t{1} << (b ^ d2));
        } else {
          mask = (std::uint64_t{1} << (a * cc + b)) | (std::uint64_t{1} << ((a ^ d1) * cc + (b ^ d2)));
        }
        if (seen.insert(mask).second) out.masks.push_back(mask);
      }
  return out;
}

}  // namespace

Hypergraph build_hypergraph(const Reduction& red, TestMode mode, const HypergraphLimits& limits) {
  const auto& inst = red.instance();
  const std::size_t m = red.m(), r = red.r();
  if (m > limits.max_m)
    throw LimitExceeded("build_hypergraph: m = " + std::to_string(m) + " exceeds max_m = " +
                            std::to_string(limits.max_m),
                        std::uint64_t{1} << std::min<std::size_t>(63, 2 * m * m));

  Hypergraph h;
  h.uniformity = mode == TestMode::T28 ? 8 : 4;
  for (std::size_t v = 0; v < inst.num_v(); ++v) {
    const std::uint64_t block = red.block_size(v, mode);
    if (block > 64)
      throw LimitExceeded("build_hypergraph: vertex block of " + std::to_string(v) + " has " +
                              std::to_string(block) + " vertices (limit 64)",
                          block);
    h.offsets.push_back(h.n);
    for (std::uint64_t c = 0; c < block; ++c) h.vertices.push_back({v, c});
    h.n += block;
  }

  // Parts depend on the edge only through the shift, so compute them once
  // per (v, shift); the w role adds the coset of E to the shift.
  const std::uint64_t num_F = std::uint64_t{1} << (r * r);
  std::map<std::pair<std::size_t, std::uint64_t>, SideParts> parts;
  auto parts_of = [&](std::size_t v, std::uint64_t shift) -> const SideParts& {
    auto it = parts.find({v, shift});
    if (it == parts.end()) it = parts.emplace(std::pair{v, shift}, side_parts(red.space(v), shift, mode)).first;
    return it->second;
  };
  std::vector<std::vector<std::uint64_t>> v_shift(inst.edges().size()), w_shift(inst.edges().size());
  for (std::size_t e = 0; e < inst.edges().size(); ++e) {
    const auto& s = red.space(inst.edge(e).v);
    const std::uint64_t corner = s.coset_index(red.corner_code());
    for (std::uint64_t F = 0; F < num_F; ++F) {
      const std::uint64_t shift = s.coset_index(red.adjoint(e)(F));
      v_shift[e].push_back(shift);
      w_shift[e].push_back(shift ^ corner);
      parts_of(inst.edge(e).v, shift);
      parts_of(inst.edge(e).v, shift ^ corner);
    }
  }

  // Every (u, v, w, F) contributes the product of its parts; group those by
  // the unordered block pair so each group can be deduplicated by sorting.
  struct Contribution {
    const SideParts* pv;
    const SideParts* pw;
    bool swap;  // v is the larger block
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Contribution>> groups;
  std::uint64_t estimate = 0;
  for (std::size_t u = 0; u < inst.num_u(); ++u)
    for (std::size_t ev : inst.edges_of_u(u))
      for (std::size_t ew : inst.edges_of_u(u)) {
        const auto v = static_cast<std::uint32_t>(inst.edge(ev).v);
        const auto w = static_cast<std::uint32_t>(inst.edge(ew).v);
        for (std::uint64_t F = 0; F < num_F; ++F) {
          const SideParts& pv = parts_of(v, v_shift[ev][F]);
          const SideParts& pw = parts_of(w, w_shift[ew][F]);
          if (v == w) h.collapsed += pv.zero_offsets * pw.zero_offsets * red.block_size(v, mode);
          estimate += pv.masks.size() * pw.masks.size();
          groups[{std::min(v, w), std::max(v, w)}].push_back({&pv, &pw, v > w});
        }
      }
  if (estimate > limits.max_edges)
    throw LimitExceeded("build_hypergraph: " + std::to_string(estimate) + " candidate edges exceed max_edges = " +
                            std::to_string(limits.max_edges),
                        estimate);

  std::vector<std::uint32_t> ids;
  for (const auto& [blocks, list] : groups) {
    const auto [a, b] = blocks;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> keys;
    for (const auto& c : list)
      for (auto mv : c.pv->masks)
        for (auto mw : c.pw->masks) {
          if (a == b) {
            const std::uint64_t all = mv | mw;
            if (std::popcount(all) >= 2) keys.emplace_back(all, 0);
          } else {
            keys.push_back(c.swap ? std::pair{mw, mv} : std::pair{mv, mw});
          }
        }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (auto [m1, m2] : keys) {
      ids.clear();
      for (; m1; m1 &= m1 - 1) ids.push_back(h.id(a, static_cast<std::uint64_t>(std::countr_zero(m1))));
      for (; m2; m2 &= m2 - 1) ids.push_back(h.id(b, static_cast<std::uint64_t>(std::countr_zero(m2))));
      h.edges.push_back(ids);  // ascending: block a precedes block b
    }
  }
  h.edges.sort();
  return h;
}

void EdgeList::sort() {
  std::vector<std::uint32_t> order(size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    const auto ex = (*this)[x], ey = (*this)[y];
    return std::lexicographical_compare(ex.begin(), ex.end(), ey.begin(), ey.end());
  });
  EdgeList out;
  out.reserve(size(), ids_.size());
  for (auto i : order) out.push_back((*this)[i]);
  *this = std::move(out);
}

std::vector<int> vertex_colors(const Hypergraph& h, const FoldedColoring& col) {
  std::vector<int> out(h.n);
  for (std::size_t i = 0; i < h.n; ++i) out[i] = col.table(h.vertices[i].v).at(h.vertices[i].coset);
  return out;
}

}  // namespace qcpcp
