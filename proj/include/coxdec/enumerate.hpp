#pragma once

// Classification searches: fundamental tetrahedra, quasi-Coxeter tetrahedra,
// pyramids by base size, prisms into tetrahedra by level.  Every search is a
// fixed-point closure of the gluing operator over a per-fundamental workspace;
// entries are deduplicated by (shape, canonical record) and keep the first
// gluing tree that produced them.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coxdec/polyhedron.hpp"
#include "coxdec/tetrahedron.hpp"

namespace coxdec {

struct SearchConfig {
  int maxTiles = 64;
  int maxLevel = 8;
  int labelBound = 5;
};

// All compact Coxeter tetrahedra with labels <= labelBound, one per S4 orbit,
// sorted by label tuple.  Spherical vertex links force labels in {2,3,4,5},
// so the list saturates at labelBound 5.
inline std::vector<CoxeterTetrahedron> enumerate_fundamental_tetrahedra(
    int labelBound) {
  std::set<std::array<int, 6>> seen;
  std::vector<CoxeterTetrahedron> out;
  std::array<int, 6> q{};
  auto rec = [&](auto&& self, int k) -> void {
    if (k == 6) {
      CoxeterTetrahedron t{q};
      if (!is_compact(t)) return;
      auto c = canonical_labels(t);
      if (seen.insert(c.labels).second) out.push_back(c);
      return;
    }
    for (int v = 2; v <= labelBound; ++v) {
      q[k] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// One gluing step: the parents' workspace indices, the glued faces, and the
// vertex matching handed to glue().  left < 0 marks the one-tile seed.
struct GlueStep {
  int left = -1, right = -1;
  int faceLeft = 0, faceRight = 0;
  std::vector<int> matchRight;
};

struct CatalogEntry {
  Decorated poly;
  ShapeKind shape{};
  Labeling lab;         // labeling realizing the canonical record
  std::string record;
  GlueStep prov;
  int level = -1;       // prisms into tetrahedra only
};

// Everything discovered for one fundamental tile, across all shapes.
struct Workspace {
  int fundamentalId = 0;
  std::vector<CatalogEntry> entries;
  std::map<std::pair<ShapeKind, std::string>, int> index;

  int find(ShapeKind s, const std::string& rec) const {
    auto it = index.find({s, rec});
    return it == index.end() ? -1 : it->second;
  }

  // Returns the new index, or -1 if an equal entry already exists.
  int add(Decorated d, const GlueStep& prov, int level = -1) {
    auto cls = classify_shape(d);
    if (!cls) return -1;
    auto [rec, lab] = canonical_record(d, cls->first, cls->second);
    auto [it, fresh] =
        index.try_emplace({cls->first, rec}, static_cast<int>(entries.size()));
    if (!fresh) return -1;
    CatalogEntry e;
    e.poly = std::move(d);
    e.shape = cls->first;
    e.lab = lab;
    e.record = std::move(rec);
    e.prov = prov;
    e.level = level;
    entries.push_back(std::move(e));
    return it->second;
  }

  std::vector<int> of_shape(ShapeKind s) const {
    std::vector<int> out;
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].shape == s) out.push_back(static_cast<int>(i));
    return out;
  }
};

namespace detail {

// All successful gluings of b onto a; fn(faceA, faceB, match, result).
template <class Fn>
inline void for_each_glue(const Decorated& a, const Decorated& b, Fn&& fn,
                          int maxFaceSize = 4) {
  for (int fa = 0; fa < static_cast<int>(a.faces.size()); ++fa) {
    if (static_cast<int>(a.faces[fa].size()) > maxFaceSize) continue;
    for (int fb = 0; fb < static_cast<int>(b.faces.size()); ++fb) {
      if (a.faces[fa].size() != b.faces[fb].size()) continue;
      for (const auto& m : face_matchings(a, fa, b, fb)) {
        auto out = glue(a, fa, b, fb, m);
        if (std::holds_alternative<Decorated>(out))
          fn(fa, fb, m, std::get<Decorated>(std::move(out)));
      }
    }
  }
}

// Fixed-point closure ordered by combined tile count, so entries appear in
// nondecreasing k and the numbering is deterministic.  pairOk prefilters the
// entry pair; keepShape admits result shapes.
template <class PairOk, class KeepShape>
inline void closure(Workspace& w, int maxTiles, PairOk pairOk,
                    KeepShape keepShape, int maxFaceSize = 4) {
  for (int k = 2; k <= maxTiles; ++k) {
    const int n = static_cast<int>(w.entries.size());
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if (w.entries[i].poly.tiles + w.entries[j].poly.tiles != k) continue;
        if (!pairOk(w.entries[i], w.entries[j])) continue;
        // add() can grow entries, so glue copies, not references.
        const Decorated a = w.entries[i].poly;
        const Decorated b = w.entries[j].poly;
        for_each_glue(
            a, b,
            [&](int fa, int fb, const std::vector<int>& m, Decorated d) {
              auto cls = classify_shape(d);
              if (!cls || !keepShape(cls->first)) return;
              w.add(std::move(d), GlueStep{i, j, fa, fb, m});
            },
            maxFaceSize);
      }
  }
}

}  // namespace detail

// Seed workspace: the one-tile decomposition of F.
inline Workspace make_workspace(const CoxeterTetrahedron& f, int fundId) {
  Workspace w;
  w.fundamentalId = fundId;
  auto r = realize_tetrahedron(f);
  if (r) w.add(decorated_from_tetrahedron(f, *r, fundId), GlueStep{});
  return w;
}

// Closure of {F} under gluing two tetrahedra along congruent faces, keeping
// tetrahedra with at most maxTiles tiles.
inline Workspace enumerate_quasicoxeter_tetrahedra(const CoxeterTetrahedron& f,
                                                   int maxTiles,
                                                   int fundId = 0) {
  Workspace w = make_workspace(f, fundId);
  detail::closure(
      w, maxTiles,
      [](const CatalogEntry& a, const CatalogEntry& b) {
        return a.shape == ShapeKind::Tetrahedron &&
               b.shape == ShapeKind::Tetrahedron;
      },
      [](ShapeKind s) { return s == ShapeKind::Tetrahedron; }, 3);
  return w;
}

// Pyramid closure: every pyramid splits along a mirror through a lateral edge
// into two smaller pyramids (a triangular pyramid being a tetrahedron), so
// gluing tetrahedra and pyramids along triangular faces reaches all of them.
inline void enumerate_pyramids(Workspace& w, int maxTiles) {
  auto pyramidal = [](ShapeKind s) {
    return s == ShapeKind::Pyramid4 || s == ShapeKind::Pyramid5 ||
           s == ShapeKind::Pyramid6 || s == ShapeKind::Pyramid7;
  };
  detail::closure(
      w, maxTiles,
      [&](const CatalogEntry& a, const CatalogEntry& b) {
        return (a.shape == ShapeKind::Tetrahedron || pyramidal(a.shape)) &&
               (b.shape == ShapeKind::Tetrahedron || pyramidal(b.shape));
      },
      pyramidal, 3);
}

struct PrismLevelsResult {
  std::vector<std::vector<int>> levels;  // entry indices per level
  bool exceeded = false;                 // a level beyond maxLevel was nonempty
};

// Prisms decomposed into the workspace's tetrahedra (and pyramids), graded by
// level: level 0 entries assemble from three catalog tetrahedra through a
// two-tetrahedron quadrilateral pyramid; level k+1 entries glue a level-k
// prism with a tetrahedron, pyramid, or prism of level <= k.
inline PrismLevelsResult enumerate_prisms_into_tetrahedra(
    Workspace& w, const SearchConfig& cfg) {
  PrismLevelsResult res;
  const auto tets = w.of_shape(ShapeKind::Tetrahedron);

  // Quadrilateral pyramids that split into two catalog tetrahedra.
  std::set<int> twoTet;
  for (size_t ii = 0; ii < tets.size(); ++ii)
    for (size_t jj = ii; jj < tets.size(); ++jj)
      detail::for_each_glue(
          w.entries[tets[ii]].poly, w.entries[tets[jj]].poly,
          [&](int, int, const std::vector<int>&, Decorated d) {
            auto cls = classify_shape(d);
            if (!cls || cls->first != ShapeKind::Pyramid4) return;
            auto rec = canonical_record(d, cls->first, cls->second).first;
            const int idx = w.find(ShapeKind::Pyramid4, rec);
            if (idx >= 0) twoTet.insert(idx);
          },
          3);

  std::vector<int> level0;
  for (int p : twoTet)
    for (int t : tets) {
      const Decorated a = w.entries[p].poly;
      const Decorated b = w.entries[t].poly;
      detail::for_each_glue(
          a, b,
          [&](int fa, int fb, const std::vector<int>& m, Decorated d) {
            if (d.tiles > cfg.maxTiles) return;
            auto cls = classify_shape(d);
            if (!cls || cls->first != ShapeKind::TriangularPrism) return;
            const int idx = w.add(std::move(d), GlueStep{p, t, fa, fb, m}, 0);
            if (idx >= 0) level0.push_back(idx);
          },
          3);
    }
  std::sort(level0.begin(), level0.end());
  res.levels.push_back(level0);

  std::vector<int> frontier = level0;
  std::vector<int> prisms = level0;
  for (int lvl = 1; !frontier.empty(); ++lvl) {
    std::vector<int> partners;
    for (size_t i = 0; i < w.entries.size(); ++i)
      if (w.entries[i].shape != ShapeKind::TriangularPrism ||
          std::count(prisms.begin(), prisms.end(), static_cast<int>(i)))
        partners.push_back(static_cast<int>(i));
    std::vector<int> next;
    for (int p : frontier)
      for (int q : partners) {
        if (w.entries[p].poly.tiles + w.entries[q].poly.tiles > cfg.maxTiles)
          continue;
        const Decorated a = w.entries[p].poly;
        const Decorated b = w.entries[q].poly;
        detail::for_each_glue(
            a, b,
            [&](int fa, int fb, const std::vector<int>& m, Decorated d) {
              auto cls = classify_shape(d);
              if (!cls || cls->first != ShapeKind::TriangularPrism) return;
              const int idx =
                  w.add(std::move(d), GlueStep{p, q, fa, fb, m}, lvl);
              if (idx >= 0) next.push_back(idx);
            });
      }
    std::sort(next.begin(), next.end());
    if (!next.empty() && lvl > cfg.maxLevel) {
      res.exceeded = true;
      break;
    }
    res.levels.push_back(next);
    prisms.insert(prisms.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return res;
}

// True iff the entry factors through an intermediate quasi-Coxeter tile: some
// catalog entry M with more than one tile retiles the same polyhedron, and
// refining every M-copy by M's own decomposition reproduces the entry.
inline bool detect_superposition(const Workspace& w, int entryIdx) {
  const auto& e = w.entries[entryIdx];
  const int kE = e.poly.tiles;
  if (kE <= 2) return false;
  for (size_t m = 0; m < w.entries.size(); ++m) {
    const auto& tile = w.entries[m];
    const int kM = tile.poly.tiles;
    if (kM <= 1 || kM >= kE || kE % kM != 0) continue;
    const int cap = kE / kM;

    Workspace sub;
    sub.fundamentalId = 1000000 + static_cast<int>(m);
    Decorated seed = tile.poly;
    seed.tiles = 1;
    seed.depth = 0;
    seed.fundamental = sub.fundamentalId;
    if (sub.add(std::move(seed), GlueStep{}) < 0) continue;
    detail::closure(
        sub, cap, [](const CatalogEntry&, const CatalogEntry&) { return true; },
        [](ShapeKind) { return true; });
    const int hit = sub.find(e.shape, e.record);
    if (hit >= 0 && sub.entries[hit].poly.tiles == cap) return true;
  }
  return false;
}

}  // namespace coxdec
