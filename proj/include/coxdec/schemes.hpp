#pragma once

// Prism-into-prism decompositions come in parametric families ("schemes"):
// a decomposition pattern of the base triangle, applied identically to both
// bases, crossed with a side structure of one or two layers (a horizontal
// mirror at mid-height).  A scheme is accepted when some assignment of the
// free labels over a grid realizes both the fundamental prism and the target.

#include <array>
#include <set>
#include <tuple>
#include <vector>

#include "coxdec/prism.hpp"
#include "coxdec/tiling2d.hpp"

namespace coxdec {

struct PrismScheme {
  int baseTiles = 1;
  int layers = 1;  // 2 = reflection through the horizontal mid-plane
  std::array<int, 3> cornerParts{1, 1, 1};
  std::array<int, 3> edgeSplits{1, 1, 1};
  CoxeterPrism fund;                      // witness fundamental prism
  std::array<AngleFraction, 9> target{};  // witness target decoration

  int tiles() const { return baseTiles * layers; }
};

namespace detail {

// Bottom-circuit slot of the fundamental side opposite base corner j
// (corners A1,A2,A3; side 0 = A2A3 etc.); the top circuit is slot+3.
inline constexpr std::array<int, 3> kSideBottomSlot{4, 5, 3};

struct LabelClasses {
  std::array<int, 6> parent{0, 1, 2, 3, 4, 5};  // x0,x1,x2,y0,y1,y2
  std::array<int, 6> forced{0, 0, 0, 0, 0, 0};  // forced label, 0 = free

  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  void force(int v, int q) { forced[find(v)] = q; }
};

}  // namespace detail

// Schemes for one base pattern and side variant over one corner triple; the
// witness search sweeps free boundary labels over `grid`.
inline std::optional<PrismScheme> prism_scheme_witness(
    const std::array<int, 3>& corner, const TriangleDecomposition& pat,
    const PatternSides& ps, int layers, const std::vector<int>& grid) {
  detail::LabelClasses cls;
  for (int j : ps.interior) {
    cls.force(j, 2);      // two coplanar bottom faces meet along the edge
    cls.force(3 + j, 2);  // and likewise on the top
  }
  if (layers == 2)
    for (int j = 0; j < 3; ++j) cls.force(3 + j, 2);  // mid-plane is a mirror
  for (int i = 0; i < 3; ++i) {
    if (ps.wall[i].empty()) return std::nullopt;
    for (size_t s = 1; s < ps.wall[i].size(); ++s) {
      cls.unite(ps.wall[i][0], ps.wall[i][s]);
      cls.unite(3 + ps.wall[i][0], 3 + ps.wall[i][s]);
    }
  }
  // Forcing after unification: propagate forced values to class roots.
  for (int v = 0; v < 6; ++v)
    if (cls.forced[v]) cls.force(v, cls.forced[v]);

  std::vector<int> freeRoots;
  for (int v = 0; v < 6; ++v)
    if (cls.find(v) == v && !cls.forced[v]) freeRoots.push_back(v);

  std::array<int, 6> value{};
  auto assemble = [&]() -> std::optional<PrismScheme> {
    CoxeterPrism f;
    f.labels[1] = corner[0];
    f.labels[2] = corner[1];
    f.labels[0] = corner[2];
    for (int j = 0; j < 3; ++j) {
      f.labels[detail::kSideBottomSlot[j]] = value[j];
      f.labels[detail::kSideBottomSlot[j] + 3] = value[3 + j];
    }
    if (!andreev_prefilter_prism(f) || !realize_prism(f)) return std::nullopt;

    std::array<AngleFraction, 9> tg{};
    tg[1] = pat.corner_fracs[0];
    tg[2] = pat.corner_fracs[1];
    tg[0] = pat.corner_fracs[2];
    for (int j = 0; j < 3; ++j) {
      const int side = ps.wall[j][0];
      tg[detail::kSideBottomSlot[j]] = AngleFraction{1, value[side]};
      tg[detail::kSideBottomSlot[j] + 3] =
          AngleFraction{1, layers == 2 ? value[side] : value[3 + side]};
    }
    std::array<double, 9> ta{};
    for (int s = 0; s < 9; ++s) ta[s] = angle_value(tg[s]);
    if (!realize_prism_angles(ta)) return std::nullopt;

    PrismScheme out;
    out.baseTiles = pat.tiles;
    out.layers = layers;
    out.cornerParts = pat.corner_parts;
    out.edgeSplits = pat.edge_splits;
    out.fund = f;
    out.target = tg;
    return out;
  };

  std::optional<PrismScheme> hit;
  auto sweep = [&](auto&& self, size_t k) -> void {
    if (hit) return;
    if (k == freeRoots.size()) {
      for (int v = 0; v < 6; ++v) {
        const int r = cls.find(v);
        value[v] = cls.forced[r] ? cls.forced[r] : value[r];
      }
      hit = assemble();
      return;
    }
    for (int q : grid) {
      value[freeRoots[k]] = q;
      self(self, k + 1);
      if (hit) return;
    }
  };
  sweep(sweep, 0);
  return hit;
}

// All feasible schemes over corner triples and free labels from `grid`,
// deduplicated by combinatorial type.
inline std::vector<PrismScheme> enumerate_prisms_into_prisms(
    const std::vector<int>& grid = {2, 3, 4, 5, 6, 8, 10, 12},
    int maxBaseTiles = 16) {
  using Key = std::tuple<int, int, std::array<int, 3>, std::array<int, 3>>;
  std::set<Key> seen;
  std::vector<PrismScheme> out;
  for (size_t ia = 0; ia < grid.size(); ++ia)
    for (size_t ib = ia; ib < grid.size(); ++ib)
      for (size_t ic = ib; ic < grid.size(); ++ic) {
        const long a = grid[ia], b = grid[ib], c = grid[ic];
        if (b * c + a * c + a * b >= a * b * c) continue;  // not hyperbolic
        CoxeterPrism probe;
        probe.labels[1] = static_cast<int>(a);
        probe.labels[2] = static_cast<int>(b);
        probe.labels[0] = static_cast<int>(c);
        std::vector<PatternSides> sides;
        const auto pats = base_patterns_for_prism(probe, maxBaseTiles, &sides);
        for (size_t pi = 0; pi < pats.size(); ++pi)
          for (int layers : {1, 2}) {
            if (pats[pi].tiles * layers < 2) continue;
            std::array<int, 3> parts = pats[pi].corner_parts;
            std::array<int, 3> splits = pats[pi].edge_splits;
            std::sort(parts.begin(), parts.end());
            std::sort(splits.begin(), splits.end());
            const Key key{pats[pi].tiles, layers, parts, splits};
            if (seen.count(key)) continue;
            auto w = prism_scheme_witness(
                {static_cast<int>(a), static_cast<int>(b),
                 static_cast<int>(c)},
                pats[pi], sides[pi], layers, grid);
            if (!w) continue;
            seen.insert(key);
            out.push_back(*w);
          }
      }
  std::sort(out.begin(), out.end(), [](const PrismScheme& l,
                                       const PrismScheme& r) {
    return std::tuple(l.tiles(), l.baseTiles, l.layers, l.cornerParts,
                      l.edgeSplits) < std::tuple(r.tiles(), r.baseTiles,
                                                 r.layers, r.cornerParts,
                                                 r.edgeSplits);
  });
  return out;
}

}  // namespace coxdec
