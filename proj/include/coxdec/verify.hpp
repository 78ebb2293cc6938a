#pragma once

// Independent validation of catalog entries.  A gluing tree is unfolded into
// explicit isometric copies of the seed tile, and the decomposition
// definition is checked tile by tile against that unfolding: adjacent copies
// must be mirror images, interiors must be disjoint, boundary dihedrals must
// match the decorations.  A Monte Carlo volume ratio gives a statistical
// witness that the copies exactly fill the union.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxdec/enumerate.hpp"
#include "coxdec/polyhedron.hpp"
#include "coxdec/schemes.hpp"
#include "coxdec/tiling2d.hpp"

namespace coxdec {

// Copies of the seed tile placing the whole decomposition in the frame of
// the union polyhedron.
struct UnfoldedTiling {
  std::vector<Vec4> baseVerts;   // seed tile
  std::vector<Vec4> baseNorms;   // outward, face f opposite vertex f
  std::vector<Mat4> tiles;       // one isometry per copy

  Vec4 vert(int t, int i) const { return tiles[t] * baseVerts[i]; }
  Vec4 norm(int t, int f) const { return tiles[t] * baseNorms[f]; }
};

namespace vdetail {

// Lorentz transform carrying b's glued face onto a's, with b flipped to the
// far side of the face plane (a mirror-image placement).
inline std::optional<Mat4> placement(const Decorated& a, int faceA,
                                     const Decorated& b, int faceB,
                                     const std::vector<int>& matchB) {
  Mat4 A, B;
  for (int c = 0; c < 3; ++c) {
    A.col(c) = a.verts[a.faces[faceA][c]];
    B.col(c) = b.verts[matchB[c]];
  }
  A.col(3) = -a.normals[faceA];
  B.col(3) = b.normals[faceB];
  if (std::abs(B.determinant()) < 1e-12) return std::nullopt;
  const Mat4 T = A * B.inverse();
  if (!is_lorentz(T, 1e-6)) return std::nullopt;
  return T;
}

inline bool unfold_rec(const Workspace& w, int idx, std::vector<Mat4>& out) {
  const auto& e = w.entries[idx];
  if (e.prov.left < 0) {
    out.push_back(Mat4::Identity());
    return true;
  }
  if (!unfold_rec(w, e.prov.left, out)) return false;
  std::vector<Mat4> right;
  if (!unfold_rec(w, e.prov.right, right)) return false;
  const auto& l = w.entries[e.prov.left].poly;
  const auto& r = w.entries[e.prov.right].poly;
  const auto T =
      placement(l, e.prov.faceLeft, r, e.prov.faceRight, e.prov.matchRight);
  if (!T) return false;
  for (const auto& m : right) out.push_back(*T * m);
  return true;
}

inline bool same_pt(const Vec4& p, const Vec4& q, double tol = kTolGeom) {
  return (p - q).cwiseAbs().maxCoeff() <= tol;
}

// Point of the geodesic through p, q at chord parameter s, on the sheet.
inline Vec4 geodesic_point(const Vec4& p, const Vec4& q, double s) {
  return normalize_point(p + s * (q - p));
}

}  // namespace vdetail

// The unfolding is only defined on workspaces whose seeds are one-tile
// entries (every enumeration workspace).
inline std::optional<UnfoldedTiling> unfold_tiling(const Workspace& w,
                                                   int idx) {
  int seed = -1;
  for (size_t i = 0; i < w.entries.size(); ++i)
    if (w.entries[i].prov.left < 0) seed = static_cast<int>(i);
  if (seed < 0 || w.entries[seed].poly.verts.size() != 4) return std::nullopt;
  UnfoldedTiling u;
  u.baseVerts = w.entries[seed].poly.verts;
  u.baseNorms = w.entries[seed].poly.normals;
  if (!vdetail::unfold_rec(w, idx, u.tiles)) return std::nullopt;
  return u;
}

struct VerifyReport {
  bool unfolded = false;
  bool mirror_ok = false;    // (a) adjacent copies are mirror images
  bool disjoint_ok = false;  // (b) interiors pairwise separated by a mirror
  bool dihedral_ok = false;  // (c) boundary dihedrals match the decorations
  bool count_ok = false;     // (d) copy count equals the recorded tile count
  bool inside_ok = false;    // (e) tile vertices lie in the closed union
  double mirror_residual = 0, dihedral_residual = 0, inside_residual = 0;
  int bad_a = -1, bad_b = -1;  // offending tile pair, if any
  std::string detail;

  bool ok() const {
    return unfolded && mirror_ok && disjoint_ok && dihedral_ok && count_ok &&
           inside_ok;
  }
  nlohmann::json to_json() const {
    return nlohmann::json{
        {"ok", ok()},
        {"unfolded", unfolded},
        {"mirror", {{"pass", mirror_ok}, {"residual", mirror_residual}}},
        {"disjoint", {{"pass", disjoint_ok}}},
        {"dihedral", {{"pass", dihedral_ok}, {"residual", dihedral_residual}}},
        {"tile_count", {{"pass", count_ok}}},
        {"inside", {{"pass", inside_ok}, {"residual", inside_residual}}},
        {"bad_pair", {bad_a, bad_b}},
        {"detail", detail}};
  }
};

inline VerifyReport verify_decomposition(const Workspace& w, int idx) {
  VerifyReport rep;
  const auto& e = w.entries[idx];
  auto uo = unfold_tiling(w, idx);
  if (!uo) {
    rep.detail = "unfolding failed";
    return rep;
  }
  const UnfoldedTiling& u = *uo;
  rep.unfolded = true;
  const int k = static_cast<int>(u.tiles.size());
  rep.count_ok = (k == e.poly.tiles);

  std::vector<std::array<Vec4, 4>> tv(k);
  std::vector<std::array<Vec4, 4>> tn(k);
  for (int t = 0; t < k; ++t)
    for (int i = 0; i < 4; ++i) {
      tv[t][i] = u.vert(t, i);
      tn[t][i] = u.norm(t, i);
    }

  // (a) copies sharing a triangle must be exact mirror images across it.
  rep.mirror_ok = true;
  for (int s = 0; s < k && rep.mirror_ok; ++s)
    for (int t = s + 1; t < k && rep.mirror_ok; ++t) {
      std::vector<int> sharedS;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (vdetail::same_pt(tv[s][i], tv[t][j])) sharedS.push_back(i);
      if (sharedS.size() != 3) continue;
      // The shared triangle is the face of s opposite its leftover vertex.
      int f = 0 + 1 + 2 + 3;
      for (int i : sharedS) f -= i;
      const Vec4 mir = tn[s][f];
      double res = 0;
      for (int i = 0; i < 4; ++i) {
        const Vec4 r = reflect(tv[s][i], mir);
        double best = 1e30;
        for (int j = 0; j < 4; ++j)
          best = std::min(best, (r - tv[t][j]).cwiseAbs().maxCoeff());
        res = std::max(res, best);
      }
      rep.mirror_residual = std::max(rep.mirror_residual, res);
      if (res > 1e-8) {
        rep.mirror_ok = false;
        rep.bad_a = s;
        rep.bad_b = t;
        rep.detail = "adjacent tiles are not mirror images";
      }
    }

  // (b) every pair of copies is separated by some mirror plane.
  rep.disjoint_ok = true;
  for (int s = 0; s < k && rep.disjoint_ok; ++s)
    for (int t = s + 1; t < k && rep.disjoint_ok; ++t) {
      bool separated = false;
      for (int ct = 0; ct < k && !separated; ++ct)
        for (int f = 0; f < 4 && !separated; ++f) {
          const Vec4& pl = tn[ct][f];
          double loS = 1e30, hiS = -1e30, loT = 1e30, hiT = -1e30;
          for (int i = 0; i < 4; ++i) {
            const double ds = mdot(tv[s][i], pl);
            const double dt = mdot(tv[t][i], pl);
            loS = std::min(loS, ds);
            hiS = std::max(hiS, ds);
            loT = std::min(loT, dt);
            hiT = std::max(hiT, dt);
          }
          separated = (hiS <= kTolGeom && loT >= -kTolGeom) ||
                      (hiT <= kTolGeom && loS >= -kTolGeom);
        }
      if (!separated) {
        rep.disjoint_ok = false;
        rep.bad_a = s;
        rep.bad_b = t;
        rep.detail = "no separating mirror for a tile pair";
      }
    }

  // (c) the union's decorated fraction at each edge equals the sum of the
  // tile wedges along that edge, measured on the unfolded copies.
  rep.dihedral_ok = true;
  for (const auto& [key, frac] : e.poly.fracs) {
    const Vec4& p = e.poly.verts[key.first];
    const Vec4& q = e.poly.verts[key.second];
    // A probe point in the open edge, away from any tile vertex (tile edges
    // may subdivide the union edge).
    Vec4 x;
    bool generic = false;
    for (double s : {0.381966, 0.5, 0.723}) {
      x = vdetail::geodesic_point(p, q, s);
      generic = true;
      for (int t = 0; t < k && generic; ++t)
        for (int i = 0; i < 4; ++i)
          if (vdetail::same_pt(tv[t][i], x, 1e-5)) generic = false;
      if (generic) break;
    }
    double total = 0;
    for (int t = 0; t < k; ++t)
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          // x = alpha vi + beta vj with positive weights <=> x lies in the
          // open tile edge (vi, vj).
          const Vec4 &vi = tv[t][i], &vj = tv[t][j];
          // Gram of two sheet points is [[-1, c], [c, -1]] with c < -1.
          const double c = mdot(vi, vj);
          const double det = 1 - c * c;
          if (std::abs(det) < 1e-12) continue;
          const double bi = mdot(x, vi), bj = mdot(x, vj);
          const double alpha = -(bi + c * bj) / det;
          const double beta = -(bj + c * bi) / det;
          if (alpha < 1e-9 || beta < 1e-9) continue;
          if ((x - alpha * vi - beta * vj).cwiseAbs().maxCoeff() > kTolGeom)
            continue;
          // The two tile faces meeting along (vi, vj).
          std::array<int, 2> fc{};
          int n = 0;
          for (int f = 0; f < 4; ++f)
            if (f != i && f != j) fc[n++] = f;
          total += dihedral_angle(tn[t][fc[0]], tn[t][fc[1]]);
        }
    const double res = std::abs(total - angle_value(frac));
    rep.dihedral_residual = std::max(rep.dihedral_residual, res);
    if (res > 1e-8 || !generic) {
      rep.dihedral_ok = false;
      rep.detail = "boundary dihedral differs from the decoration";
    }
  }

  // (e) every tile vertex stays in the closed union (erased flat vertices
  // land on its faces), and every union vertex is a tile vertex.
  rep.inside_ok = true;
  for (int t = 0; t < k; ++t)
    for (int i = 0; i < 4; ++i)
      for (const auto& nf : e.poly.normals)
        rep.inside_residual = std::max(rep.inside_residual, mdot(tv[t][i], nf));
  if (rep.inside_residual > 1e-8) {
    rep.inside_ok = false;
    rep.detail = "tile vertex outside the union";
  }
  for (const auto& v : e.poly.verts) {
    bool hit = false;
    for (int t = 0; t < k && !hit; ++t)
      for (int i = 0; i < 4; ++i) hit |= vdetail::same_pt(tv[t][i], v);
    if (!hit) {
      rep.inside_ok = false;
      rep.detail = "union vertex is not a tile vertex";
    }
  }
  return rep;
}

// Monte Carlo volume ratio vol(P)/vol(F) in the projective ball model, with
// the hyperbolic volume element 1/(1-|y|^2)^2.  The 3-sigma interval must
// contain the integer tile count.
struct VolumeCheck {
  double estimate = 0, lo = 0, hi = 0;
  int k = 0;
  bool ok = false;
  nlohmann::json to_json() const {
    return nlohmann::json{{"estimate", estimate}, {"lo", lo},   {"hi", hi},
                          {"k", k},               {"pass", ok}};
  }
};

namespace vdetail {

struct MCVolume {
  double value = 0, sigma = 0;
};

inline MCVolume mc_volume(const Decorated& d, long samples,
                          std::mt19937_64& rng) {
  // Klein coordinates of the vertices bound the convex body.
  double lo[3] = {1e30, 1e30, 1e30}, hi[3] = {-1e30, -1e30, -1e30};
  for (const auto& v : d.verts)
    for (int c = 0; c < 3; ++c) {
      lo[c] = std::min(lo[c], v[c] / v[3]);
      hi[c] = std::max(hi[c], v[c] / v[3]);
    }
  double box = 1;
  for (int c = 0; c < 3; ++c) box *= hi[c] - lo[c];
  std::uniform_real_distribution<double> un(0.0, 1.0);
  double sum = 0, sum2 = 0;
  for (long s = 0; s < samples; ++s) {
    Vec4 x;
    double r2 = 0;
    for (int c = 0; c < 3; ++c) {
      x[c] = lo[c] + (hi[c] - lo[c]) * un(rng);
      r2 += x[c] * x[c];
    }
    x[3] = 1.0;
    double g = 0;
    if (r2 < 1.0) {
      bool in = true;
      for (const auto& nf : d.normals)
        if (mdot(x, nf) > 0) in = false;
      if (in) {
        const double t = 1.0 - r2;
        g = 1.0 / (t * t);
      }
    }
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sum2 / samples - mean * mean);
  MCVolume out;
  out.value = box * mean;
  out.sigma = box * std::sqrt(var / samples);
  return out;
}

}  // namespace vdetail

inline VolumeCheck volume_ratio_check(const Workspace& w, int idx,
                                      long samples = 1000000,
                                      std::uint64_t seed = 20260826ULL) {
  VolumeCheck out;
  const auto& e = w.entries[idx];
  out.k = e.poly.tiles;
  int seedIdx = -1;
  for (size_t i = 0; i < w.entries.size(); ++i)
    if (w.entries[i].prov.left < 0) seedIdx = static_cast<int>(i);
  if (seedIdx < 0) return out;
  std::mt19937_64 rng(seed);
  const auto vp = vdetail::mc_volume(e.poly, samples, rng);
  const auto vf = vdetail::mc_volume(w.entries[seedIdx].poly, samples, rng);
  if (vp.value <= 0 || vf.value <= 0) return out;
  out.estimate = vp.value / vf.value;
  const double rel = std::sqrt(vp.sigma * vp.sigma / (vp.value * vp.value) +
                               vf.sigma * vf.sigma / (vf.value * vf.value));
  const double half = 3.0 * out.estimate * rel;
  out.lo = out.estimate - half;
  out.hi = out.estimate + half;
  out.ok = out.lo <= out.k && out.k <= out.hi;
  return out;
}

// A side of a prism-into-prism decomposition is a lattice with at most one
// vertical and at most one horizontal mirror line.
inline bool side_is_lattice(int verticalLines, int horizontalLines) {
  return verticalLines >= 0 && verticalLines <= 1 && horizontalLines >= 0 &&
         horizontalLines <= 1;
}

// Structural check of a prism-into-prism scheme: every side is a lattice
// within the line bounds, and both bases carry one of the admissible base
// patterns of the fundamental prism (identical by construction).
inline bool lattice_check(const PrismScheme& s) {
  for (int j = 0; j < 3; ++j)
    if (!side_is_lattice(s.edgeSplits[j] - 1, s.layers - 1)) return false;
  if (s.baseTiles == 1)
    return s.cornerParts == std::array<int, 3>{1, 1, 1} &&
           s.edgeSplits == std::array<int, 3>{1, 1, 1};
  auto sorted = [](std::array<int, 3> a) {
    std::sort(a.begin(), a.end());
    return a;
  };
  for (const auto& pat : base_patterns_for_prism(s.fund)) {
    if (pat.tiles != s.baseTiles) continue;
    if (sorted(pat.corner_parts) == sorted(s.cornerParts) &&
        sorted(pat.edge_splits) == sorted(s.edgeSplits))
      return true;
  }
  return false;
}

// Every non-fundamental vertex (one met by more than one tile) must have a
// non-fundamental incident edge, and every vertex link must admit a convex
// spherical polygon with the decorated angles.
inline bool link_check(const Workspace& w, int idx) {
  const auto& e = w.entries[idx];
  auto uo = unfold_tiling(w, idx);
  if (!uo) return false;
  const UnfoldedTiling& u = *uo;
  const int k = static_cast<int>(u.tiles.size());
  for (int vi = 0; vi < static_cast<int>(e.poly.verts.size()); ++vi) {
    const Vec4& v = e.poly.verts[vi];
    int meets = 0;
    for (int t = 0; t < k; ++t)
      for (int i = 0; i < 4; ++i)
        if (vdetail::same_pt(u.vert(t, i), v)) {
          ++meets;
          break;
        }
    std::vector<AngleFraction> incident;
    for (const auto& [key, f] : e.poly.fracs)
      if (key.first == vi || key.second == vi) incident.push_back(f);
    if (meets > 1) {
      bool nonFund = false;
      for (const auto& f : incident) nonFund |= !is_fundamental(f);
      if (!nonFund) return false;
    }
    // Convex spherical polygon: each angle below pi, angle sum above (n-2)pi.
    double sum = 0;
    for (const auto& f : incident) {
      const double a = angle_value(f);
      if (a >= kPi - 1e-9) return false;
      sum += a;
    }
    const int n = static_cast<int>(incident.size());
    if (sum <= (n - 2) * kPi + 1e-9) return false;
  }
  return true;
}

}  // namespace coxdec
