#pragma once

// Reflection tilings of the sphere and the hyperbolic plane by a Coxeter
// triangle, and the enumeration of triangle decompositions on top of them.
// Both planes are modelled linearly in R^3: the sphere with the euclidean
// form, the hyperbolic plane on the upper hyperboloid sheet of diag(1,1,-1).

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coxdec/prism.hpp"
#include "coxdec/tetrahedron.hpp"
#include "coxdec/triangle2d.hpp"

namespace coxdec {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Tiling2D {
  Geometry2D geo{};
  Mat3 form = Mat3::Identity();
  std::array<Vec3, 3> baseNormals{};  // outward; wall i opposite vertex i
  std::array<Vec3, 3> baseVerts{};
  std::array<double, 3> fundAngles{};  // angle value at vertex i
  std::vector<Mat3> cells;             // isometries; cells[0] = identity
  std::vector<std::array<int, 3>> neighbors;  // across wall i; -1 if absent
  std::vector<Vec3> centroids;
  std::vector<Vec3> mirrors;  // deduplicated lines, canonical sign

  double inner(const Vec3& a, const Vec3& b) const { return a.dot(form * b); }
  Vec3 cell_vertex(int c, int i) const { return cells[c] * baseVerts[i]; }
  bool same_point(const Vec3& p, const Vec3& q) const {
    const double s = geo == Geometry2D::Spherical ? 1.0 : -1.0;
    return std::abs(inner(p, q) - s) < 1e-7;
  }
  double dist(const Vec3& p, const Vec3& q) const {
    if (geo == Geometry2D::Spherical)
      return std::acos(std::clamp(inner(p, q), -1.0, 1.0));
    return std::acosh(std::max(1.0, -inner(p, q)));
  }
};

namespace detail2d {

inline std::array<long long, 3> point_key(const Vec3& p) {
  std::array<long long, 3> k;
  for (int i = 0; i < 3; ++i) {
    k[i] = llround(p[i] * 1e5);
    if (k[i] == 0) k[i] = 0;  // collapse -0
  }
  return k;
}

inline Vec3 canonical_line(Vec3 n) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(n[i]) > 1e-6) {
      if (n[i] < 0) n = -n;
      break;
    }
  }
  return n;
}

}  // namespace detail2d

// Builds the reflection tiling generated by the fundamental triangle's walls.
// Spherical tilings are completed; hyperbolic ones are truncated to cells
// whose centroid stays within `radius` of the base centroid.
inline std::optional<Tiling2D> build_tiling(const Triangle2D& fund,
                                            double radius = 0.0,
                                            int maxCells = 200000) {
  Tiling2D t;
  t.geo = fund.geometry();
  if (t.geo == Geometry2D::Euclidean) return std::nullopt;
  if (!fund.is_coxeter()) return std::nullopt;
  t.form = Mat3::Identity();
  if (t.geo == Geometry2D::Hyperbolic) t.form(2, 2) = -1;
  for (int i = 0; i < 3; ++i) t.fundAngles[i] = angle_value(fund.angles[i]);

  // Wall Gram matrix: the angle between walls i and j is the corner angle at
  // the opposite vertex.
  Mat3 g = Mat3::Identity();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      g(i, j) = g(j, i) = -std::cos(t.fundAngles[3 - i - j]);
  Eigen::SelfAdjointEigenSolver<Mat3> es(g);
  const auto& ev = es.eigenvalues();
  if (t.geo == Geometry2D::Spherical) {
    if (ev[0] <= 1e-12) return std::nullopt;
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 3; ++c)
        t.baseNormals[i][c] = std::sqrt(ev[c]) * es.eigenvectors()(i, c);
  } else {
    if (ev[0] >= -1e-12 || ev[1] <= 1e-12) return std::nullopt;
    for (int i = 0; i < 3; ++i) {
      t.baseNormals[i][0] = std::sqrt(ev[1]) * es.eigenvectors()(i, 1);
      t.baseNormals[i][1] = std::sqrt(ev[2]) * es.eigenvectors()(i, 2);
      t.baseNormals[i][2] = std::sqrt(-ev[0]) * es.eigenvectors()(i, 0);
    }
  }
  // Vertex i is orthogonal to the two walls j != i.
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    Vec3 w = t.form * t.baseNormals[a].cross(t.baseNormals[b]);
    if (t.geo == Geometry2D::Spherical) {
      w.normalize();
      if (t.inner(w, t.baseNormals[i]) > 0) w = -w;
    } else {
      const double ww = t.inner(w, w);
      if (ww >= -1e-12) return std::nullopt;
      w /= std::sqrt(-ww);
      if (w[2] < 0) w = -w;
    }
    t.baseVerts[i] = w;
  }
  if (t.geo == Geometry2D::Hyperbolic &&
      t.inner(t.baseVerts[0], t.baseNormals[0]) > 0)
    for (auto& n : t.baseNormals) n = -n;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double d = t.inner(t.baseVerts[i], t.baseNormals[j]);
      if (i == j ? d > -1e-8 : std::abs(d) > 1e-8) return std::nullopt;
    }

  std::array<Mat3, 3> refl;
  for (int i = 0; i < 3; ++i)
    refl[i] = Mat3::Identity() -
              2.0 * t.baseNormals[i] * (t.form * t.baseNormals[i]).transpose();

  Vec3 c0 = t.baseVerts[0] + t.baseVerts[1] + t.baseVerts[2];
  if (t.geo == Geometry2D::Spherical)
    c0.normalize();
  else
    c0 /= std::sqrt(-t.inner(c0, c0));
  const double reach = std::cosh(radius);

  auto cell_key = [&](const Mat3& m) {
    std::array<std::array<long long, 3>, 3> vk;
    for (int i = 0; i < 3; ++i) vk[i] = detail2d::point_key(m * t.baseVerts[i]);
    std::sort(vk.begin(), vk.end());
    std::array<long long, 9> out{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[3 * i + j] = vk[i][j];
    return out;
  };

  std::map<std::array<long long, 9>, int> seen;
  t.cells.push_back(Mat3::Identity());
  t.centroids.push_back(c0);
  seen[cell_key(t.cells[0])] = 0;
  for (size_t head = 0; head < t.cells.size(); ++head) {
    const Mat3 m = t.cells[head];
    for (int i = 0; i < 3; ++i) {
      const Mat3 nb = m * refl[i];
      const Vec3 cc = nb * c0;
      if (t.geo == Geometry2D::Hyperbolic && -t.inner(c0, cc) > reach)
        continue;
      const auto key = cell_key(nb);
      if (seen.count(key)) continue;
      if (static_cast<int>(t.cells.size()) >= maxCells) return std::nullopt;
      seen[key] = static_cast<int>(t.cells.size());
      t.cells.push_back(nb);
      t.centroids.push_back(cc);
    }
  }
  t.neighbors.assign(t.cells.size(), {-1, -1, -1});
  for (size_t c = 0; c < t.cells.size(); ++c)
    for (int i = 0; i < 3; ++i) {
      const auto it = seen.find(cell_key(t.cells[c] * refl[i]));
      if (it != seen.end()) t.neighbors[c][i] = it->second;
    }
  std::map<std::array<long long, 3>, int> mseen;
  for (const auto& m : t.cells)
    for (int i = 0; i < 3; ++i) {
      const Vec3 line = detail2d::canonical_line(m * t.baseNormals[i]);
      if (mseen.emplace(detail2d::point_key(line),
                        static_cast<int>(t.mirrors.size()))
              .second)
        t.mirrors.push_back(line);
    }
  return t;
}

struct TriangleDecomposition {
  int tiles = 0;
  std::array<AngleFraction, 3> corner_fracs{};  // angle at corner i
  std::array<int, 3> corner_parts{};            // tiles incident to corner i
  std::array<int, 3> edge_splits{};             // segments of side opposite i
  std::string signature;

  friend bool operator<(const TriangleDecomposition& a,
                        const TriangleDecomposition& b) {
    return std::tie(a.tiles, a.signature) < std::tie(b.tiles, b.signature);
  }
};

namespace detail2d {

// Canonicalizes a tiled triangle (or marked lune): picks, among the corner
// flags compatible with the requested angle order, the one minimising a
// geometric fingerprint of the tile cloud.
inline std::optional<TriangleDecomposition> canonical_pattern(
    const Tiling2D& t, const std::vector<int>& cellIdx,
    const std::array<Vec3, 3>& corners, const std::array<double, 3>& cornerVal,
    const std::array<Vec3, 3>& walls,  // outward, wall i opposite corner i
    const std::optional<std::array<double, 3>>& targetOrder,
    std::array<int, 3>* ordOut = nullptr) {
  const double sgn = t.geo == Geometry2D::Spherical ? 1.0 : -1.0;

  std::array<int, 3> parts{};
  std::array<AngleFraction, 3> fracs{};
  for (int c = 0; c < 3; ++c) {
    for (int idx : cellIdx)
      for (int i = 0; i < 3; ++i)
        if (t.same_point(t.cell_vertex(idx, i), corners[c])) ++parts[c];
    if (parts[c] == 0) return std::nullopt;
    const int q = static_cast<int>(llround(parts[c] * kPi / cornerVal[c]));
    if (q < 1 || std::abs(parts[c] * kPi / q - cornerVal[c]) > 1e-6)
      return std::nullopt;
    fracs[c] = AngleFraction{parts[c], q};
  }

  // Boundary vertices per side; side s is opposite corner s.
  std::array<int, 3> splits{};
  for (int s = 0; s < 3; ++s) {
    const int a = (s + 1) % 3, b = (s + 2) % 3;
    const bool useBetween =
        t.geo == Geometry2D::Hyperbolic || t.dist(corners[a], corners[b]) < kPi - 1e-6;
    std::vector<Vec3> pts;
    for (int idx : cellIdx)
      for (int i = 0; i < 3; ++i) {
        const Vec3 p = t.cell_vertex(idx, i);
        if (std::abs(t.inner(p, walls[s])) > 1e-6) continue;
        bool inside = true;
        for (int w = 0; w < 3; ++w)
          if (w != s && t.inner(p, walls[w]) > 1e-6) inside = false;
        if (!inside) continue;
        if (t.same_point(p, corners[a]) || t.same_point(p, corners[b]))
          continue;
        if (useBetween && std::abs(t.dist(corners[a], p) +
                                   t.dist(p, corners[b]) -
                                   t.dist(corners[a], corners[b])) > 1e-6)
          continue;
        bool dup = false;
        for (const auto& q : pts)
          if (t.same_point(p, q)) dup = true;
        if (!dup) pts.push_back(p);
      }
    splits[s] = static_cast<int>(pts.size()) + 1;
  }

  // The signature minimises over every flag so that it is independent of the
  // requested corner order; the output arrays use the best order-compatible
  // flag.
  TriangleDecomposition best;
  std::string bestSig;
  std::array<int, 3> bestOrd{0, 1, 2};
  bool have = false, haveSig = false;
  for (int a = 0; a < 3; ++a)
    for (int dir : {1, 2})
      for (int refl : {1, -1}) {
      const std::array<int, 3> ord{a, (a + dir) % 3, (a + 2 * dir) % 3};
      bool matches = true;
      if (targetOrder) {
        for (int i = 0; i < 3; ++i)
          if (std::abs(cornerVal[ord[i]] - (*targetOrder)[i]) > 1e-6)
            matches = false;
      }
      // Frame anchored at the flag (corner ord[0], side toward ord[1]).
      const Vec3 p = corners[ord[0]];
      const Vec3 q = corners[ord[1]];
      Vec3 tv = q - sgn * t.inner(q, p) * p;
      const double tn = t.inner(tv, tv);
      if (tn <= 1e-14) continue;
      tv /= std::sqrt(tn);
      Vec3 w = refl * (t.form * p.cross(tv));
      const double wn = t.inner(w, w);
      if (wn <= 1e-14) continue;
      w /= std::sqrt(wn);
      Mat3 f;
      f.col(0) = tv;
      f.col(1) = w;
      f.col(2) = p;
      const Mat3 minv = f.inverse();

      std::vector<std::array<long long, 9>> cloud;
      for (int idx : cellIdx) {
        std::array<std::array<long long, 3>, 3> vk;
        for (int i = 0; i < 3; ++i) {
          const Vec3 mapped = minv * t.cell_vertex(idx, i);
          for (int c = 0; c < 3; ++c) {
            vk[i][c] = llround(mapped[c] * 1e4);
            if (vk[i][c] == 0) vk[i][c] = 0;
          }
        }
        std::sort(vk.begin(), vk.end());
        std::array<long long, 9> flat{};
        for (int i = 0; i < 3; ++i)
          for (int c = 0; c < 3; ++c) flat[3 * i + c] = vk[i][c];
        cloud.push_back(flat);
      }
      std::sort(cloud.begin(), cloud.end());
      std::string sig;
      for (const auto& cl : cloud) {
        for (long long v : cl) {
          sig += std::to_string(v);
          sig += ',';
        }
        sig += '|';
      }
      TriangleDecomposition cand;
      cand.tiles = static_cast<int>(cellIdx.size());
      for (int i = 0; i < 3; ++i) {
        cand.corner_fracs[i] = fracs[ord[i]];
        cand.corner_parts[i] = parts[ord[i]];
        cand.edge_splits[i] = splits[ord[i]];
      }
      cand.signature = sig;
      if (!haveSig || sig < bestSig) {
        bestSig = sig;
        haveSig = true;
      }
      if (matches && (!have || cand.signature < best.signature)) {
        best = cand;
        bestOrd = ord;
        have = true;
      }
    }
  if (!have) return std::nullopt;
  best.signature = bestSig;
  if (ordOut) *ordOut = bestOrd;
  return best;
}

inline void push_unique(std::vector<TriangleDecomposition>& out,
                        const TriangleDecomposition& d) {
  for (const auto& e : out)
    if (e.signature == d.signature && e.tiles == d.tiles) return;
  out.push_back(d);
}

// Hyperbolic side length opposite angle C from the three angles.
inline double hyp_side(double A, double B, double C) {
  return std::acosh((std::cos(C) + std::cos(A) * std::cos(B)) /
                    (std::sin(A) * std::sin(B)));
}

inline double patch_radius(const Triangle2D& fund,
                           const std::array<double, 3>& targetVals) {
  double side = 0;
  for (int i = 0; i < 3; ++i)
    side = std::max(side, hyp_side(targetVals[(i + 1) % 3],
                                   targetVals[(i + 2) % 3], targetVals[i]));
  std::array<double, 3> fv{angle_value(fund.angles[0]),
                           angle_value(fund.angles[1]),
                           angle_value(fund.angles[2])};
  double fside = 0;
  for (int i = 0; i < 3; ++i)
    fside = std::max(fside, hyp_side(fv[(i + 1) % 3], fv[(i + 2) % 3], fv[i]));
  return side + fside + 0.3;
}

}  // namespace detail2d

// All decompositions of `target` into at most maxTiles copies of `fund`,
// deduplicated up to symmetry.  A target corner with angle exactly pi marks
// a distinguished straight boundary point (the degenerate-triangle case).
inline std::vector<TriangleDecomposition> enumerate_triangle_decompositions(
    const Triangle2D& fund, const Triangle2D& target, int maxTiles) {
  std::vector<TriangleDecomposition> out;
  if (!fund.is_coxeter()) return out;
  const Geometry2D geo = fund.geometry();
  if (geo == Geometry2D::Euclidean || target.geometry() != geo) return out;

  int flatIdx = -1;
  for (int i = 0; i < 3; ++i)
    if (target.angles[i].parts == target.angles[i].denom) {
      if (flatIdx >= 0) return out;
      flatIdx = i;
    }
  const auto k = exact_tile_count(fund, target);
  if (!k || *k > maxTiles) return out;

  std::array<double, 3> vals{angle_value(target.angles[0]),
                             angle_value(target.angles[1]),
                             angle_value(target.angles[2])};
  double radius = 0;
  if (geo == Geometry2D::Hyperbolic)
    radius = detail2d::patch_radius(fund, vals);
  auto tlg = build_tiling(fund, radius);
  if (!tlg) return out;
  const Tiling2D& t = *tlg;

  auto cells_inside = [&](const std::array<Vec3, 3>& ns,
                          int nWalls) -> std::optional<std::vector<int>> {
    // The base cell must lie inside.
    for (int i = 0; i < 3; ++i)
      for (int w = 0; w < nWalls; ++w)
        if (t.inner(t.baseVerts[i], ns[w]) > 1e-7) return std::nullopt;
    std::vector<int> idx;
    for (size_t c = 0; c < t.cells.size(); ++c) {
      bool in = true;
      for (int w = 0; w < nWalls; ++w)
        if (t.inner(t.centroids[c], ns[w]) > -1e-7) in = false;
      if (in) idx.push_back(static_cast<int>(c));
    }
    if (static_cast<long long>(idx.size()) != *k) return std::nullopt;
    return idx;
  };

  const int m = static_cast<int>(t.mirrors.size());
  if (flatIdx < 0) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double dij = t.inner(t.mirrors[i], t.mirrors[j]);
        if (std::abs(dij) > 1 - 1e-9) continue;  // parallel or equal
        for (int l = j + 1; l < m; ++l) {
          const double dil = t.inner(t.mirrors[i], t.mirrors[l]);
          const double djl = t.inner(t.mirrors[j], t.mirrors[l]);
          if (std::abs(dil) > 1 - 1e-9 || std::abs(djl) > 1 - 1e-9) continue;
          for (int s = 0; s < 8; ++s) {
            const double s1 = s & 1 ? -1 : 1, s2 = s & 2 ? -1 : 1,
                         s3 = s & 4 ? -1 : 1;
            std::array<Vec3, 3> ns{s1 * t.mirrors[i], s2 * t.mirrors[j],
                                   s3 * t.mirrors[l]};
            std::array<double, 3> ang;  // angle at corner c: walls != c
            ang[0] = std::acos(std::clamp(-s2 * s3 * djl, -1.0, 1.0));
            ang[1] = std::acos(std::clamp(-s1 * s3 * dil, -1.0, 1.0));
            ang[2] = std::acos(std::clamp(-s1 * s2 * dij, -1.0, 1.0));
            std::array<double, 3> need = vals, got = ang;
            std::sort(need.begin(), need.end());
            std::sort(got.begin(), got.end());
            bool match = true;
            for (int c = 0; c < 3; ++c)
              if (std::abs(need[c] - got[c]) > 1e-6) match = false;
            if (!match) continue;
            std::array<Vec3, 3> corners;
            bool geomOk = true;
            for (int c = 0; c < 3 && geomOk; ++c) {
              const int a = (c + 1) % 3, b = (c + 2) % 3;
              Vec3 w = t.form * ns[a].cross(ns[b]);
              if (t.geo == Geometry2D::Spherical) {
                w.normalize();
                if (t.inner(w, ns[c]) > 0) w = -w;
              } else {
                const double ww = t.inner(w, w);
                if (ww >= -1e-12) {
                  geomOk = false;
                  break;
                }
                w /= std::sqrt(-ww);
                if (w[2] < 0) w = -w;
              }
              if (t.inner(w, ns[c]) > -1e-9) geomOk = false;
              corners[c] = w;
            }
            if (!geomOk) continue;
            auto inside = cells_inside(ns, 3);
            if (!inside) continue;
            auto d = detail2d::canonical_pattern(t, *inside, corners, ang, ns,
                                                 vals);
            if (d) detail2d::push_unique(out, *d);
          }
        }
      }
  } else {
    // Lune with a marked straight point: the two non-flat angles must agree.
    const int o1 = (flatIdx + 1) % 3, o2 = (flatIdx + 2) % 3;
    if (std::abs(vals[o1] - vals[o2]) > 1e-9) return out;
    if (geo != Geometry2D::Spherical) return out;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double dij = t.inner(t.mirrors[i], t.mirrors[j]);
        if (std::abs(dij) > 1 - 1e-9) continue;
        for (int s = 0; s < 4; ++s) {
          const double s1 = s & 1 ? -1 : 1, s2 = s & 2 ? -1 : 1;
          std::array<Vec3, 3> ns{s1 * t.mirrors[i], s2 * t.mirrors[j],
                                 Vec3::Zero()};
          const double theta =
              std::acos(std::clamp(-s1 * s2 * dij, -1.0, 1.0));
          if (std::abs(theta - vals[o1]) > 1e-6) continue;
          auto inside = cells_inside(ns, 2);
          if (!inside) continue;
          Vec3 apexB = ns[0].cross(ns[1]).normalized();
          const Vec3 apexC = -apexB;
          // Marked-point candidates: straight boundary tiling vertices.
          std::vector<Vec3> marks;
          for (int idx : *inside)
            for (int vi = 0; vi < 3; ++vi) {
              const Vec3 p = t.cell_vertex(idx, vi);
              if (t.same_point(p, apexB) || t.same_point(p, apexC)) continue;
              const bool on0 = std::abs(t.inner(p, ns[0])) < 1e-6;
              const bool on1 = std::abs(t.inner(p, ns[1])) < 1e-6;
              if (!on0 && !on1) continue;
              if (t.inner(p, ns[0]) > 1e-6 || t.inner(p, ns[1]) > 1e-6)
                continue;
              bool dup = false;
              for (const auto& q : marks)
                if (t.same_point(p, q)) dup = true;
              if (!dup) marks.push_back(p);
            }
          for (const Vec3& a : marks) {
            std::array<Vec3, 3> corners;
            std::array<double, 3> ang;
            std::array<Vec3, 3> walls;
            corners[flatIdx] = a;
            corners[o1] = apexB;
            corners[o2] = apexC;
            ang[flatIdx] = kPi;
            ang[o1] = ang[o2] = theta;
            const bool onFirst = std::abs(t.inner(a, ns[0])) < 1e-6;
            walls[flatIdx] = onFirst ? ns[1] : ns[0];  // opposite side
            walls[o1] = walls[o2] = onFirst ? ns[0] : ns[1];
            auto d = detail2d::canonical_pattern(t, *inside, corners, ang,
                                                 walls, vals);
            if (d) detail2d::push_unique(out, *d);
          }
        }
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Independent oracle: grows connected cell sets breadth-first and recognises
// those whose union is congruent to the target, deduplicating identically to
// the arrangement-based enumerator.
inline std::vector<TriangleDecomposition> triangle_decompositions_bfs(
    const Triangle2D& fund, const Triangle2D& target, int maxTiles) {
  std::vector<TriangleDecomposition> out;
  if (!fund.is_coxeter()) return out;
  const Geometry2D geo = fund.geometry();
  if (geo == Geometry2D::Euclidean || target.geometry() != geo) return out;
  int flatIdx = -1;
  for (int i = 0; i < 3; ++i)
    if (target.angles[i].parts == target.angles[i].denom) {
      if (flatIdx >= 0) return out;
      flatIdx = i;
    }
  const auto k = exact_tile_count(fund, target);
  if (!k || *k > maxTiles) return out;
  std::array<double, 3> vals{angle_value(target.angles[0]),
                             angle_value(target.angles[1]),
                             angle_value(target.angles[2])};
  double radius = 0;
  if (geo == Geometry2D::Hyperbolic)
    radius = detail2d::patch_radius(fund, vals);
  auto tlg = build_tiling(fund, radius);
  if (!tlg) return out;
  const Tiling2D& t = *tlg;

  std::set<std::vector<int>> layer{{0}};
  for (long long size = 1; size < *k; ++size) {
    std::set<std::vector<int>> next;
    for (const auto& s : layer)
      for (int c : s)
        for (int i = 0; i < 3; ++i) {
          const int nb = t.neighbors[c][i];
          if (nb < 0 || std::count(s.begin(), s.end(), nb)) continue;
          std::vector<int> grown = s;
          grown.insert(std::upper_bound(grown.begin(), grown.end(), nb), nb);
          next.insert(std::move(grown));
        }
    layer = std::move(next);
  }

  for (const auto& s : layer) {
    // Distinct vertices of the union with their total interior angle.
    std::vector<Vec3> pts;
    std::vector<double> angs;
    for (int c : s)
      for (int i = 0; i < 3; ++i) {
        const Vec3 p = t.cell_vertex(c, i);
        bool found = false;
        for (size_t x = 0; x < pts.size(); ++x)
          if (t.same_point(p, pts[x])) {
            angs[x] += t.fundAngles[i];
            found = true;
          }
        if (!found) {
          pts.push_back(p);
          angs.push_back(t.fundAngles[i]);
        }
      }
    std::vector<int> cornerIdx;
    bool valid = true;
    for (size_t x = 0; x < pts.size() && valid; ++x) {
      if (std::abs(angs[x] - 2 * kPi) < 1e-6) continue;   // interior
      if (std::abs(angs[x] - kPi) < 1e-6) continue;       // straight boundary
      if (angs[x] > 2 * kPi - 1e-6) valid = false;        // folded over
      cornerIdx.push_back(static_cast<int>(x));
    }
    if (!valid) continue;

    // Boundary mirror lines.
    std::vector<Vec3> lines;
    for (int c : s)
      for (int i = 0; i < 3; ++i) {
        if (t.neighbors[c][i] >= 0 &&
            std::count(s.begin(), s.end(), t.neighbors[c][i]))
          continue;
        const Vec3 line =
            detail2d::canonical_line(t.cells[c] * t.baseNormals[i]);
        bool dup = false;
        for (const auto& q : lines)
          if ((q - line).cwiseAbs().maxCoeff() < 1e-6) dup = true;
        if (!dup) lines.push_back(line);
      }
    Vec3 inner0 = t.centroids[s[0]];

    auto oriented = [&](const Vec3& line) {
      return t.inner(inner0, line) > 0 ? Vec3(-line) : line;
    };

    if (flatIdx < 0) {
      if (cornerIdx.size() != 3 || lines.size() != 3) continue;
      std::array<double, 3> got{angs[cornerIdx[0]], angs[cornerIdx[1]],
                                angs[cornerIdx[2]]};
      std::array<double, 3> need = vals, gs = got;
      std::sort(need.begin(), need.end());
      std::sort(gs.begin(), gs.end());
      bool match = true;
      for (int i = 0; i < 3; ++i)
        if (std::abs(need[i] - gs[i]) > 1e-6) match = false;
      if (!match) continue;
      std::array<Vec3, 3> corners{pts[cornerIdx[0]], pts[cornerIdx[1]],
                                  pts[cornerIdx[2]]};
      // Wall opposite corner c: the boundary line not through it.
      std::array<Vec3, 3> walls;
      bool wallsOk = true;
      for (int c = 0; c < 3 && wallsOk; ++c) {
        int found = -1;
        for (size_t li = 0; li < lines.size(); ++li)
          if (std::abs(t.inner(corners[c], lines[li])) > 1e-6) {
            if (found >= 0) wallsOk = false;
            found = static_cast<int>(li);
          }
        if (found < 0)
          wallsOk = false;
        else
          walls[c] = oriented(lines[found]);
      }
      if (!wallsOk) continue;
      const std::vector<int> cellIdx(s.begin(), s.end());
      auto d = detail2d::canonical_pattern(t, cellIdx, corners, got, walls,
                                           vals);
      if (d) detail2d::push_unique(out, *d);
    } else {
      if (geo != Geometry2D::Spherical) continue;
      if (cornerIdx.size() != 2 || lines.size() != 2) continue;
      const int o1 = (flatIdx + 1) % 3, o2 = (flatIdx + 2) % 3;
      if (std::abs(vals[o1] - vals[o2]) > 1e-9) continue;
      if (std::abs(angs[cornerIdx[0]] - vals[o1]) > 1e-6 ||
          std::abs(angs[cornerIdx[1]] - vals[o1]) > 1e-6)
        continue;
      const std::vector<int> cellIdx(s.begin(), s.end());
      for (size_t x = 0; x < pts.size(); ++x) {
        if (std::abs(angs[x] - kPi) > 1e-6) continue;  // marks are straight
        std::array<Vec3, 3> corners;
        std::array<double, 3> ang;
        std::array<Vec3, 3> walls;
        corners[flatIdx] = pts[x];
        corners[o1] = pts[cornerIdx[0]];
        corners[o2] = pts[cornerIdx[1]];
        ang[flatIdx] = kPi;
        ang[o1] = ang[o2] = vals[o1];
        const Vec3 w0 = oriented(lines[0]), w1 = oriented(lines[1]);
        const bool onFirst = std::abs(t.inner(pts[x], w0)) < 1e-6;
        walls[flatIdx] = onFirst ? w1 : w0;
        walls[o1] = walls[o2] = onFirst ? w0 : w1;
        auto d = detail2d::canonical_pattern(t, cellIdx, corners, ang, walls,
                                             vals);
        if (d) detail2d::push_unique(out, *d);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Which fundamental sides make up a pattern's edges: fund side j (opposite
// fund corner j) indices on interior pattern edges and along each target side.
// Indexed like TriangleDecomposition (target side i opposite corner i).
struct PatternSides {
  std::vector<int> interior;
  std::array<std::vector<int>, 3> wall;
};

// Target-free search: every triangle bounded by mirror lines that the fund
// tiling fills with at most maxTiles cells and whose sides are split into at
// most maxEdgeSplit segments.  sidesOut, when given, receives the side
// structure of each pattern, aligned with the returned list.
inline std::vector<TriangleDecomposition> enumerate_bounded_triangle_patterns(
    const Triangle2D& fund, int maxTiles, int maxEdgeSplit,
    std::vector<PatternSides>* sidesOut = nullptr) {
  std::vector<TriangleDecomposition> out;
  std::vector<PatternSides> sides;
  if (!fund.is_coxeter()) return out;
  const Geometry2D geo = fund.geometry();
  if (geo == Geometry2D::Euclidean) return out;

  // Possible corner angles are multiples of pi/q for the fund labels q;
  // bound the patch radius over all admissible corner combinations.
  std::vector<Rat> angleSet;
  for (const auto& a : fund.angles)
    for (int p = 1; p < a.denom; ++p) angleSet.push_back(Rat::make(p, a.denom));
  const Rat fa = fund.area_over_pi();
  double radius = 0;
  if (geo == Geometry2D::Hyperbolic) {
    for (const Rat& x : angleSet)
      for (const Rat& y : angleSet)
        for (const Rat& z : angleSet) {
          const Rat defect = Rat{1, 1} - (x + y + z);
          if (!defect.positive()) continue;
          const auto kk = (defect / fa).as_integer();
          if (!kk || *kk < 1 || *kk > maxTiles) continue;
          const std::array<double, 3> v{kPi * x.n / x.d, kPi * y.n / y.d,
                                        kPi * z.n / z.d};
          radius = std::max(radius, detail2d::patch_radius(fund, v));
        }
    if (radius == 0) return out;
  }
  auto tlg = build_tiling(fund, radius);
  if (!tlg) return out;
  const Tiling2D& t = *tlg;

  auto rat_of = [&](double angle) -> std::optional<Rat> {
    for (const Rat& x : angleSet)
      if (std::abs(kPi * x.n / x.d - angle) < 1e-6) return x;
    return std::nullopt;
  };

  // A candidate wall encloses the base cell on its nonpositive side; that
  // fixes the orientation of every usable mirror line (lines cutting through
  // the base cell can bound nothing that contains it).
  std::vector<Vec3> lines;
  for (const auto& mr : t.mirrors)
    for (double sg : {1.0, -1.0}) {
      bool ok = true;
      for (int v = 0; v < 3; ++v)
        if (sg * t.inner(t.baseVerts[v], mr) > 1e-7) ok = false;
      if (ok) {
        lines.push_back(sg * mr);
        break;
      }
    }
  const int m = static_cast<int>(lines.size());

  // Only pairs meeting at an admissible rational angle can be corner walls.
  struct PairInfo {
    int j;
    double ang;
    Rat r;
  };
  std::vector<std::vector<PairInfo>> compat(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double dij = t.inner(lines[i], lines[j]);
      if (std::abs(dij) > 1 - 1e-9) continue;
      const double ang = std::acos(std::clamp(-dij, -1.0, 1.0));
      const auto r = rat_of(ang);
      if (r) compat[i].push_back({j, ang, *r});
    }

  for (int i = 0; i < m; ++i)
    for (size_t pa = 0; pa < compat[i].size(); ++pa) {
      const int j = compat[i][pa].j;
      // Walk compat[i] beyond j and compat[j] in lockstep for common lines.
      size_t pb = pa + 1, pc = 0;
      while (pb < compat[i].size() && pc < compat[j].size()) {
        if (compat[i][pb].j < compat[j][pc].j) {
          ++pb;
          continue;
        }
        if (compat[j][pc].j < compat[i][pb].j) {
          ++pc;
          continue;
        }
        const int l = compat[i][pb].j;
        const PairInfo& pil = compat[i][pb];
        const PairInfo& pjl = compat[j][pc];
        ++pb;
        ++pc;
        {
          std::array<Vec3, 3> ns{lines[i], lines[j], lines[l]};
          std::array<double, 3> ang;
          ang[0] = pjl.ang;
          ang[1] = pil.ang;
          ang[2] = compat[i][pa].ang;
          const Rat sum = pjl.r + pil.r + compat[i][pa].r;
          const Rat area = geo == Geometry2D::Spherical ? sum - Rat{1, 1}
                                                        : Rat{1, 1} - sum;
          if (!area.positive()) continue;
          const auto kk = (area / fa).as_integer();
          if (!kk || *kk < 1 || *kk > maxTiles) continue;

          std::array<Vec3, 3> corners;
          bool geomOk = true;
          for (int c = 0; c < 3 && geomOk; ++c) {
            const int a = (c + 1) % 3, b = (c + 2) % 3;
            Vec3 w = t.form * ns[a].cross(ns[b]);
            if (t.geo == Geometry2D::Spherical) {
              w.normalize();
              if (t.inner(w, ns[c]) > 0) w = -w;
            } else {
              const double ww = t.inner(w, w);
              if (ww >= -1e-12) {
                geomOk = false;
                break;
              }
              w /= std::sqrt(-ww);
              if (w[2] < 0) w = -w;
            }
            if (t.inner(w, ns[c]) > -1e-9) geomOk = false;
            corners[c] = w;
          }
          if (!geomOk) continue;
          bool contains = true;
          for (int v = 0; v < 3; ++v)
            for (int w = 0; w < 3; ++w)
              if (t.inner(t.baseVerts[v], ns[w]) > 1e-7) contains = false;
          if (!contains) continue;
          std::vector<int> inside;
          for (size_t c = 0; c < t.cells.size(); ++c) {
            bool in = true;
            for (int w = 0; w < 3; ++w)
              if (t.inner(t.centroids[c], ns[w]) > -1e-7) in = false;
            if (in) inside.push_back(static_cast<int>(c));
          }
          if (static_cast<long long>(inside.size()) != *kk) continue;
          std::array<int, 3> ord{0, 1, 2};
          auto d = detail2d::canonical_pattern(t, inside, corners, ang, ns,
                                               std::nullopt, &ord);
          if (!d) continue;
          if (*std::max_element(d->edge_splits.begin(), d->edge_splits.end()) >
              maxEdgeSplit)
            continue;
          bool dup = false;
          for (const auto& e : out)
            if (e.signature == d->signature && e.tiles == d->tiles) dup = true;
          if (dup) continue;
          if (sidesOut) {
            // Classify each tile side: on a target wall, or interior (its
            // mirror neighbor is another tile of the pattern).
            PatternSides ps;
            std::array<std::set<int>, 3> onWall;
            std::set<int> interior, insideSet(inside.begin(), inside.end());
            bool okSides = true;
            for (int c : inside)
              for (int j = 0; j < 3 && okSides; ++j) {
                const Vec3 p1 = t.cell_vertex(c, (j + 1) % 3);
                const Vec3 p2 = t.cell_vertex(c, (j + 2) % 3);
                int hit = -1;
                for (int ww = 0; ww < 3; ++ww)
                  if (std::abs(t.inner(p1, ns[ww])) < 1e-6 &&
                      std::abs(t.inner(p2, ns[ww])) < 1e-6)
                    hit = ww;
                if (hit >= 0)
                  onWall[hit].insert(j);
                else if (t.neighbors[c][j] >= 0 &&
                         insideSet.count(t.neighbors[c][j]))
                  interior.insert(j);
                else
                  okSides = false;
              }
            if (!okSides) continue;
            ps.interior.assign(interior.begin(), interior.end());
            for (int i = 0; i < 3; ++i)
              ps.wall[i].assign(onWall[ord[i]].begin(), onWall[ord[i]].end());
            sides.push_back(std::move(ps));
          }
          out.push_back(*d);
        }
      }
    }
  std::vector<size_t> perm(out.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](size_t a, size_t b) { return out[a] < out[b]; });
  std::vector<TriangleDecomposition> sortedOut;
  for (size_t i : perm) sortedOut.push_back(std::move(out[i]));
  out = std::move(sortedOut);
  if (sidesOut) {
    sidesOut->clear();
    for (size_t i : perm) sidesOut->push_back(std::move(sides[i]));
  }
  return out;
}

// Decompositions of a triangle by the prism's base triangle, every side split
// into at most two parts.  Corners carry the lateral dihedral labels: corner
// order (A1, A2, A3) uses slots (A1B1, A2B2, A3B3).
inline std::vector<TriangleDecomposition> base_patterns_for_prism(
    const CoxeterPrism& p, int maxTiles = 16,
    std::vector<PatternSides>* sidesOut = nullptr) {
  const Triangle2D fund{{AngleFraction{1, p.labels[1]},
                         AngleFraction{1, p.labels[2]},
                         AngleFraction{1, p.labels[0]}}};
  if (fund.geometry() != Geometry2D::Hyperbolic) return {};
  return enumerate_bounded_triangle_patterns(fund, maxTiles, 2, sidesOut);
}

// Spherical vertex-link tiling of a compact Coxeter tetrahedron at `vertex`.
// Wall i of the link corresponds to the i-th incident face in ascending
// face order.
inline std::optional<Tiling2D> link_tiling(const CoxeterTetrahedron& tet,
                                           int vertex) {
  std::array<int, 3> faces{};
  int n = 0;
  for (int f = 0; f < 4; ++f)
    if (f != vertex) faces[n++] = f;
  Triangle2D link;
  for (int i = 0; i < 3; ++i) {
    const int a = faces[(i + 1) % 3], b = faces[(i + 2) % 3];
    link.angles[i] = AngleFraction{1, tet.label(a, b)};
  }
  if (link.geometry() != Geometry2D::Spherical) return std::nullopt;
  return build_tiling(link, 0.0, 50000);
}

// Number of link-tiling vertices on the great circle of `face` at `vertex`:
// the directions in the face plane along which decomposition rays may leave
// the vertex.
inline int plane_tiling_rays(const CoxeterTetrahedron& tet, int face,
                             int vertex) {
  if (face == vertex) return 0;  // not incident
  auto tlg = link_tiling(tet, vertex);
  if (!tlg) return 0;
  const Tiling2D& t = *tlg;
  int wall = 0;
  {
    int n = 0;
    for (int f = 0; f < 4; ++f)
      if (f != vertex) {
        if (f == face) wall = n;
        ++n;
      }
  }
  const Vec3 circle = t.baseNormals[wall];
  std::vector<Vec3> pts;
  for (size_t c = 0; c < t.cells.size(); ++c)
    for (int i = 0; i < 3; ++i) {
      const Vec3 p = t.cell_vertex(static_cast<int>(c), i);
      if (std::abs(t.inner(p, circle)) > 1e-6) continue;
      bool dup = false;
      for (const auto& q : pts)
        if (t.same_point(p, q)) dup = true;
      if (!dup) pts.push_back(p);
    }
  return static_cast<int>(pts.size());
}

// Angular positions of those circle vertices, sorted; useful for splitting
// straight angles through the vertex inside the face plane.
inline std::vector<double> plane_tiling_ray_angles(
    const CoxeterTetrahedron& tet, int face, int vertex) {
  std::vector<double> out;
  auto tlg = link_tiling(tet, vertex);
  if (!tlg || face == vertex) return out;
  const Tiling2D& t = *tlg;
  int wall = 0;
  {
    int n = 0;
    for (int f = 0; f < 4; ++f)
      if (f != vertex) {
        if (f == face) wall = n;
        ++n;
      }
  }
  const Vec3 nrm = t.baseNormals[wall];
  // Orthonormal basis of the circle's plane.
  Vec3 e1 = nrm.unitOrthogonal();
  Vec3 e2 = nrm.cross(e1);
  std::vector<Vec3> pts;
  for (size_t c = 0; c < t.cells.size(); ++c)
    for (int i = 0; i < 3; ++i) {
      const Vec3 p = t.cell_vertex(static_cast<int>(c), i);
      if (std::abs(t.inner(p, nrm)) > 1e-6) continue;
      bool dup = false;
      for (const auto& q : pts)
        if (t.same_point(p, q)) dup = true;
      if (!dup) pts.push_back(p);
    }
  for (const auto& p : pts) out.push_back(std::atan2(p.dot(e2), p.dot(e1)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace coxdec
