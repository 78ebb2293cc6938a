#pragma once

// Tilings of a face plane of a compact Coxeter tetrahedron by tetrahedron
// faces: the plane of any face is a mirror of the reflection group, so the
// 3D orbit of the tetrahedron stamps a triangle tiling onto it.  On top of
// that footprint, a bounded search for triangles whose sides run along tile
// edges, with corner decomposition data and side edge-labels.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "coxdec/tetrahedron.hpp"

namespace coxdec {

namespace facedetail {

inline std::array<long long, 4> vec_key(const Vec4& v) {
  std::array<long long, 4> k;
  for (int i = 0; i < 4; ++i) {
    k[i] = llround(v[i] * 1e5);
    if (k[i] == 0) k[i] = 0;
  }
  return k;
}

// e with e . x = det[a, b, c, x] for all x.
inline Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 e;
  Eigen::Matrix3d m;
  for (int i = 0; i < 4; ++i) {
    int col = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      m(0, col) = a[j];
      m(1, col) = b[j];
      m(2, col) = c[j];
      ++col;
    }
    e[i] = ((i % 2) ? 1.0 : -1.0) * m.determinant();
  }
  return e;
}

inline Vec4 apply_form(const Vec4& v) {
  Vec4 r = v;
  r[3] = -r[3];
  return r;
}

}  // namespace facedetail

inline int edge_label(const CoxeterTetrahedron& t, int u, int v) {
  int f1 = -1, f2 = -1;
  for (int f = 0; f < 4; ++f)
    if (f != u && f != v) (f1 < 0 ? f1 : f2) = f;
  return t.label(f1, f2);
}

struct FaceTile {
  std::array<Vec4, 3> verts;
  std::array<int, 3> sideLabels;   // side i opposite vertex i
  std::array<double, 3> angles;    // planar angle at vertex i
  Vec4 centroid;
  double area;
};

struct FaceTiling {
  Vec4 planeNormal;
  std::vector<FaceTile> tiles;
};

// Footprint of the reflection orbit on the plane of `face`, out to cells
// whose barycenter stays within `radius` of the starting tetrahedron.
inline std::optional<FaceTiling> face_plane_tiling(const CoxeterTetrahedron& t,
                                                   int face, double radius,
                                                   int maxCells = 400000) {
  const auto r = realize_tetrahedron(t);
  if (!r) return std::nullopt;
  std::array<Mat4, 4> refl;
  for (int f = 0; f < 4; ++f) refl[f] = reflection_matrix(r->normals[f]);

  Vec4 b0 = Vec4::Zero();
  for (const auto& v : r->vertices) b0 += v;
  b0 = normalize_point(b0);
  const double reach = std::cosh(radius);

  auto cell_key = [&](const Mat4& m) {
    std::array<std::array<long long, 4>, 4> vk;
    for (int i = 0; i < 4; ++i) vk[i] = facedetail::vec_key(m * r->vertices[i]);
    std::sort(vk.begin(), vk.end());
    return vk;
  };

  std::vector<Mat4> cells{Mat4::Identity()};
  std::map<std::array<std::array<long long, 4>, 4>, int> seen;
  seen[cell_key(cells[0])] = 0;
  for (size_t head = 0; head < cells.size(); ++head) {
    const Mat4 m = cells[head];
    for (int f = 0; f < 4; ++f) {
      const Mat4 nb = m * refl[f];
      if (-mdot(b0, nb * b0.eval()) > reach) continue;
      const auto key = cell_key(nb);
      if (seen.count(key)) continue;
      if (static_cast<int>(cells.size()) >= maxCells) return std::nullopt;
      seen[key] = static_cast<int>(cells.size());
      cells.push_back(nb);
    }
  }

  FaceTiling out;
  out.planeNormal = r->normals[face];
  std::map<std::array<std::array<long long, 4>, 3>, int> tileSeen;
  for (const Mat4& m : cells)
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> vi{};
      int n = 0;
      for (int u = 0; u < 4; ++u)
        if (u != f) vi[n++] = u;
      std::array<Vec4, 3> vs;
      bool onPlane = true;
      for (int i = 0; i < 3; ++i) {
        vs[i] = m * r->vertices[vi[i]];
        if (std::abs(mdot(vs[i], out.planeNormal)) > kTolGeom) onPlane = false;
      }
      if (!onPlane) continue;
      std::array<std::array<long long, 4>, 3> key;
      for (int i = 0; i < 3; ++i) key[i] = facedetail::vec_key(vs[i]);
      std::sort(key.begin(), key.end());
      if (!tileSeen.emplace(key, 0).second) continue;
      FaceTile tile;
      tile.verts = vs;
      for (int i = 0; i < 3; ++i) {
        tile.sideLabels[i] = edge_label(t, vi[(i + 1) % 3], vi[(i + 2) % 3]);
        tile.angles[i] =
            corner_angle(vs[i], vs[(i + 1) % 3], vs[(i + 2) % 3]);
      }
      tile.centroid = normalize_point(vs[0] + vs[1] + vs[2]);
      tile.area = kPi - tile.angles[0] - tile.angles[1] - tile.angles[2];
      out.tiles.push_back(tile);
    }
  return out;
}

struct SplitTriangleReport {
  int tiles = 0;
  std::array<int, 3> cornerParts{};  // tiles meeting corner i
  std::array<int, 3> sideLabels{};   // side opposite corner i; 0 if mixed
  std::array<double, 3> cornerAngles{};
};

// Triangles bounded by extensions of tile edges that the footprint covers
// exactly, out to maxTiles tiles.  Corners must stay within `window` of the
// starting tetrahedron; the footprint reaches one tile diameter further so
// every covering tile is guaranteed to be present.
inline std::vector<SplitTriangleReport> bounded_face_triangles(
    const CoxeterTetrahedron& t, int face, int maxTiles, double window) {
  std::vector<SplitTriangleReport> out;
  const auto real = realize_tetrahedron(t);
  if (!real) return out;
  double maxEdge = 0;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v)
      maxEdge = std::max(maxEdge,
                         distance(real->vertices[u], real->vertices[v]));
  const auto ft = face_plane_tiling(t, face, window + maxEdge + 0.2);
  if (!ft) return out;
  const Vec4 N = ft->planeNormal;

  // Geodesics through tile edges, as in-plane normals.
  std::vector<Vec4> lines;
  {
    std::map<std::array<long long, 4>, int> seen;
    for (const auto& tile : ft->tiles)
      for (int i = 0; i < 3; ++i) {
        Vec4 L = facedetail::apply_form(facedetail::cross4(
            tile.verts[(i + 1) % 3], tile.verts[(i + 2) % 3], N));
        const double nn = mdot(L, L);
        if (nn <= 1e-12) continue;
        L /= std::sqrt(nn);
        for (int c = 0; c < 4; ++c) {
          if (std::abs(L[c]) > 1e-6) {
            if (L[c] < 0) L = -L;
            break;
          }
        }
        if (seen.emplace(facedetail::vec_key(L), 0).second)
          lines.push_back(L);
      }
  }

  // Pairwise intersections inside the window.
  Vec4 b0 = ft->tiles.empty() ? Vec4::Zero() : ft->tiles[0].centroid;
  double maxTileArea = 0;
  for (const auto& tile : ft->tiles)
    maxTileArea = std::max(maxTileArea, tile.area);
  const int L = static_cast<int>(lines.size());
  std::map<std::pair<int, int>, Vec4> meet;
  std::vector<std::vector<int>> adj(L);
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      Vec4 x = facedetail::apply_form(
          facedetail::cross4(lines[i], lines[j], N));
      const double xx = mdot(x, x);
      if (xx >= -1e-10) continue;
      x /= std::sqrt(-xx);
      if (x[3] < 0) x = -x;
      if (-mdot(x, b0) > std::cosh(window)) continue;
      meet[{i, j}] = x;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }

  for (int i = 0; i < L; ++i)
    for (int j : adj[i]) {
      if (j <= i) continue;
      for (int k : adj[j]) {
        if (k <= j || !meet.count({i, k})) continue;
        const Vec4 cK = meet.at({i, j});   // corner opposite line k
        const Vec4 cJ = meet.at({i, k});
        const Vec4 cI = meet.at({j, k});
        if (distance(cI, cJ) < 1e-6 || distance(cI, cK) < 1e-6 ||
            distance(cJ, cK) < 1e-6)
          continue;
        // Orient each line against its opposite corner.
        std::array<Vec4, 3> w{lines[i], lines[j], lines[k]};
        const std::array<Vec4, 3> corners{cI, cJ, cK};
        bool ok = true;
        for (int s = 0; s < 3 && ok; ++s) {
          const double d = mdot(corners[s], w[s]);
          if (std::abs(d) < 1e-9) ok = false;
          if (d > 0) w[s] = -w[s];
        }
        if (!ok) continue;
        std::array<double, 3> ang;
        for (int s = 0; s < 3; ++s)
          ang[s] = std::acos(std::clamp(
              -mdot(w[(s + 1) % 3], w[(s + 2) % 3]), -1.0, 1.0));
        if (ang[0] + ang[1] + ang[2] >= kPi - 1e-9) continue;
        const double area = kPi - ang[0] - ang[1] - ang[2];
        if (area > maxTiles * maxTileArea + 1e-9) continue;

        std::vector<int> inside;
        double areaSum = 0;
        bool straddle = false;
        for (size_t ti = 0; ti < ft->tiles.size(); ++ti) {
          const auto& tile = ft->tiles[ti];
          bool in = true;
          for (int s = 0; s < 3; ++s)
            if (mdot(tile.centroid, w[s]) > -1e-9) in = false;
          if (!in) continue;
          for (int s = 0; s < 3; ++s)
            for (int v = 0; v < 3; ++v)
              if (mdot(tile.verts[v], w[s]) > kTolGeom) straddle = true;
          inside.push_back(static_cast<int>(ti));
          areaSum += tile.area;
          if (static_cast<int>(inside.size()) > maxTiles) break;
        }
        if (straddle || inside.empty() ||
            static_cast<int>(inside.size()) > maxTiles)
          continue;
        if (std::abs(area - areaSum) > 1e-6 * (1 + inside.size())) continue;

        // Closure containment of a point in a tile.
        auto tile_contains = [&](const FaceTile& tile, const Vec4& x) {
          for (int e = 0; e < 3; ++e) {
            Vec4 el = facedetail::apply_form(facedetail::cross4(
                tile.verts[(e + 1) % 3], tile.verts[(e + 2) % 3], N));
            const double nn = mdot(el, el);
            if (nn <= 1e-12) return false;
            el /= std::sqrt(nn);
            if (mdot(tile.verts[e], el) > 0) el = -el;
            if (mdot(x, el) > kTolGeom) return false;
          }
          return true;
        };

        SplitTriangleReport rep;
        rep.tiles = static_cast<int>(inside.size());
        rep.cornerAngles = ang;
        for (int s = 0; s < 3; ++s) {
          for (int ti : inside)
            if (tile_contains(ft->tiles[ti], corners[s]))
              ++rep.cornerParts[s];
          int lbl = -1;
          bool mixed = false;
          for (int ti : inside) {
            const auto& tile = ft->tiles[ti];
            for (int e = 0; e < 3; ++e) {
              const Vec4& p = tile.verts[(e + 1) % 3];
              const Vec4& q = tile.verts[(e + 2) % 3];
              if (std::abs(mdot(p, w[s])) > kTolGeom ||
                  std::abs(mdot(q, w[s])) > kTolGeom)
                continue;
              if (lbl < 0)
                lbl = tile.sideLabels[e];
              else if (lbl != tile.sideLabels[e])
                mixed = true;
            }
          }
          rep.sideLabels[s] = mixed || lbl < 0 ? 0 : lbl;
        }
        out.push_back(rep);
      }
    }
  return out;
}

}  // namespace coxdec
