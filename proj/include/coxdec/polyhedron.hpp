#pragma once

// Combinatorial-geometric model of the target shapes (tetrahedron, pyramids
// with 4..7 base vertices, triangular prism), decorated with angle fractions,
// plus the gluing algebra and canonical record strings.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "coxdec/angle.hpp"
#include "coxdec/minkowski.hpp"
#include "coxdec/tetrahedron.hpp"

namespace coxdec {

enum class ShapeKind {
  Tetrahedron,
  Pyramid4,
  Pyramid5,
  Pyramid6,
  Pyramid7,
  TriangularPrism,
};

inline const char* shape_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::Tetrahedron: return "tet";
    case ShapeKind::Pyramid4: return "pyr4";
    case ShapeKind::Pyramid5: return "pyr5";
    case ShapeKind::Pyramid6: return "pyr6";
    case ShapeKind::Pyramid7: return "pyr7";
    case ShapeKind::TriangularPrism: return "prism";
  }
  return "?";
}

inline std::optional<ShapeKind> shape_from_name(std::string_view s) {
  for (ShapeKind k :
       {ShapeKind::Tetrahedron, ShapeKind::Pyramid4, ShapeKind::Pyramid5,
        ShapeKind::Pyramid6, ShapeKind::Pyramid7, ShapeKind::TriangularPrism})
    if (s == shape_name(k)) return k;
  return std::nullopt;
}

inline int pyramid_base(ShapeKind k) {
  switch (k) {
    case ShapeKind::Pyramid4: return 4;
    case ShapeKind::Pyramid5: return 5;
    case ShapeKind::Pyramid6: return 6;
    case ShapeKind::Pyramid7: return 7;
    default: return 0;
  }
}

// Fixed numbering conventions.  Template vertices: tetrahedron 0..3 (face i
// is opposite vertex i); pyramid O=0, A_i=i with base face number 0 and
// lateral face O A_i A_{i+1} number i; prism A_i = i-1, B_i = i+2 with base
// A1A2A3 = face 0, base B1B2B3 = face 1, side A_iA_{i+1}B_{i+1}B_i = i+1.
struct ShapeTemplate {
  ShapeKind kind{};
  int nverts = 0;
  std::vector<std::vector<int>> faces;
  std::vector<std::pair<int, int>> slots;  // record fields as vertex pairs
  std::vector<int> seps;                   // ';' after these slot indices
  std::vector<std::vector<int>> autos;     // vertex permutations
};

namespace detail {

inline std::vector<std::vector<int>> close_group(
    int n, std::vector<std::vector<int>> gens) {
  std::vector<int> id(n);
  for (int i = 0; i < n; ++i) id[i] = i;
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        std::vector<int> q(n);
        for (int i = 0; i < n; ++i) q[i] = p[g[i]];
        if (seen.insert(q).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

inline ShapeTemplate make_template(ShapeKind kind) {
  ShapeTemplate t;
  t.kind = kind;
  if (kind == ShapeKind::Tetrahedron) {
    t.nverts = 4;
    for (int f = 0; f < 4; ++f) {
      std::vector<int> cyc;
      for (int v = 0; v < 4; ++v)
        if (v != f) cyc.push_back(v);
      t.faces.push_back(cyc);
    }
    // Slot order follows the face pairs (0,1),(0,2),... via complements.
    for (const auto& fp : kFacePairs) {
      std::vector<int> comp;
      for (int v = 0; v < 4; ++v)
        if (v != fp[0] && v != fp[1]) comp.push_back(v);
      t.slots.emplace_back(comp[0], comp[1]);
    }
    std::vector<int> perm{0, 1, 2, 3};
    do {
      t.autos.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else if (kind == ShapeKind::TriangularPrism) {
    t.nverts = 6;
    t.faces = {{0, 1, 2}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}};
    // Nine fractions in the printed order:
    // (A3B3, A1B1, A2B2; A1A2; A2A3, A3A1; B1B2, B2B3, B3B1)
    t.slots = {{2, 5}, {0, 3}, {1, 4}, {0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}};
    t.seps = {2, 3, 5};
    t.autos = close_group(6, {{1, 2, 0, 4, 5, 3},      // rotate 1->2->3
                              {1, 0, 2, 4, 3, 5},      // swap A1,A2 / B1,B2
                              {3, 4, 5, 0, 1, 2}});    // swap bases
  } else {
    const int n = pyramid_base(kind);
    t.nverts = n + 1;
    std::vector<int> base;
    for (int i = 1; i <= n; ++i) base.push_back(i);
    t.faces.push_back(base);
    for (int i = 1; i <= n; ++i) t.faces.push_back({0, i, i % n + 1});
    for (int i = 1; i <= n; ++i) t.slots.emplace_back(i, i % n + 1);
    for (int i = 1; i <= n; ++i) t.slots.emplace_back(0, i);
    t.seps = {n - 1};
    std::vector<int> rot(n + 1), refl(n + 1);
    rot[0] = refl[0] = 0;
    for (int i = 1; i <= n; ++i) {
      rot[i] = i % n + 1;
      refl[i] = n + 1 - i;
    }
    t.autos = close_group(n + 1, {rot, refl});
  }
  return t;
}

}  // namespace detail

inline const ShapeTemplate& shape_template(ShapeKind kind) {
  static const ShapeTemplate tet = detail::make_template(ShapeKind::Tetrahedron);
  static const ShapeTemplate p4 = detail::make_template(ShapeKind::Pyramid4);
  static const ShapeTemplate p5 = detail::make_template(ShapeKind::Pyramid5);
  static const ShapeTemplate p6 = detail::make_template(ShapeKind::Pyramid6);
  static const ShapeTemplate p7 = detail::make_template(ShapeKind::Pyramid7);
  static const ShapeTemplate pr = detail::make_template(ShapeKind::TriangularPrism);
  switch (kind) {
    case ShapeKind::Tetrahedron: return tet;
    case ShapeKind::Pyramid4: return p4;
    case ShapeKind::Pyramid5: return p5;
    case ShapeKind::Pyramid6: return p6;
    case ShapeKind::Pyramid7: return p7;
    case ShapeKind::TriangularPrism: return pr;
  }
  return tet;
}

inline const std::vector<std::vector<int>>& symmetries(ShapeKind kind) {
  return shape_template(kind).autos;
}

using EdgeKey = std::pair<int, int>;
inline EdgeKey edge_key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

// A combinatorial shape carried together with its Minkowski realization and
// an angle fraction per edge.  Immutable after construction.
struct Decorated {
  std::vector<Vec4> verts;
  std::vector<std::vector<int>> faces;  // vertex cycles
  std::vector<Vec4> normals;            // outward, parallel to faces
  std::map<EdgeKey, AngleFraction> fracs;
  int fundamental = 0;        // id of the fundamental tile
  bool fund_is_prism = false;
  int tiles = 1;              // number of fundamental tiles (the paper's k)
  int depth = 0;              // gluing depth (the paper's l)

  const AngleFraction& frac(int u, int v) const { return fracs.at(edge_key(u, v)); }
};

// Mapping from template vertices to vertex ids of a Decorated.
struct Labeling {
  std::vector<int> tverts;
};

inline Decorated decorated_from_tetrahedron(const CoxeterTetrahedron& t,
                                            const Realization& r, int fundId) {
  Decorated d;
  d.verts = r.vertices;
  d.normals = r.normals;
  for (int f = 0; f < 4; ++f) {
    std::vector<int> cyc;
    for (int v = 0; v < 4; ++v)
      if (v != f) cyc.push_back(v);
    d.faces.push_back(cyc);
  }
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) {
      std::array<int, 2> other{};
      int n = 0;
      for (int f = 0; f < 4; ++f)
        if (f != u && f != v) other[n++] = f;
      d.fracs[{u, v}] = AngleFraction{1, t.label(other[0], other[1])};
    }
  d.fundamental = fundId;
  return d;
}

// --- classification ---------------------------------------------------------

inline std::optional<Labeling> classify_shape_as(const Decorated& p,
                                                 ShapeKind kind) {
  const auto& tmpl = shape_template(kind);
  if (static_cast<int>(p.verts.size()) != tmpl.nverts) return std::nullopt;
  if (p.faces.size() != tmpl.faces.size()) return std::nullopt;

  auto face_sets = [](const std::vector<std::vector<int>>& fs) {
    std::set<std::set<int>> out;
    for (const auto& f : fs) out.insert(std::set<int>(f.begin(), f.end()));
    return out;
  };
  const auto pf = face_sets(p.faces);

  auto matches = [&](const Labeling& lab) {
    std::set<std::set<int>> tf;
    for (const auto& f : tmpl.faces) {
      std::set<int> s;
      for (int tv : f) s.insert(lab.tverts[tv]);
      tf.insert(std::move(s));
    }
    return tf == pf;
  };

  Labeling lab;
  lab.tverts.assign(tmpl.nverts, -1);
  if (kind == ShapeKind::Tetrahedron) {
    for (int v = 0; v < 4; ++v) lab.tverts[v] = v;
    if (matches(lab)) return lab;
    return std::nullopt;
  }
  if (kind == ShapeKind::TriangularPrism) {
    // Two triangles and three quads; the triangles are the bases.
    std::vector<int> tris, quads;
    for (size_t f = 0; f < p.faces.size(); ++f)
      (p.faces[f].size() == 3 ? tris : quads).push_back(static_cast<int>(f));
    if (tris.size() != 2 || quads.size() != 3) return std::nullopt;
    const auto& a = p.faces[tris[0]];
    const auto& b = p.faces[tris[1]];
    std::set<int> edges;  // edge keys packed
    for (const auto& f : p.faces)
      for (size_t i = 0; i < f.size(); ++i) {
        auto [u, v] = edge_key(f[i], f[(i + 1) % f.size()]);
        edges.insert(u * 64 + v);
      }
    for (int i = 0; i < 3; ++i) lab.tverts[i] = a[i];
    for (int i = 0; i < 3; ++i) {
      int bi = -1;
      for (int w : b) {
        auto [u, v] = edge_key(a[i], w);
        if (edges.count(u * 64 + v)) bi = w;
      }
      if (bi < 0) return std::nullopt;
      lab.tverts[3 + i] = bi;
    }
    if (matches(lab)) return lab;
    // The base cycle orientation may need a flip.
    std::swap(lab.tverts[1], lab.tverts[2]);
    std::swap(lab.tverts[4], lab.tverts[5]);
    if (matches(lab)) return lab;
    return std::nullopt;
  }
  // Pyramid: unique n-gon base, the apex is the vertex off the base.
  const int n = pyramid_base(kind);
  int baseFace = -1;
  for (size_t f = 0; f < p.faces.size(); ++f)
    if (static_cast<int>(p.faces[f].size()) == n) {
      if (baseFace >= 0) return std::nullopt;
      baseFace = static_cast<int>(f);
    }
  if (baseFace < 0) return std::nullopt;
  std::set<int> baseSet(p.faces[baseFace].begin(), p.faces[baseFace].end());
  int apex = -1;
  for (int v = 0; v < static_cast<int>(p.verts.size()); ++v)
    if (!baseSet.count(v)) {
      if (apex >= 0) return std::nullopt;
      apex = v;
    }
  if (apex < 0) return std::nullopt;
  lab.tverts[0] = apex;
  for (int i = 0; i < n; ++i) lab.tverts[1 + i] = p.faces[baseFace][i];
  if (matches(lab)) return lab;
  return std::nullopt;
}

inline std::optional<std::pair<ShapeKind, Labeling>> classify_shape(
    const Decorated& p) {
  for (ShapeKind k :
       {ShapeKind::Tetrahedron, ShapeKind::Pyramid4, ShapeKind::Pyramid5,
        ShapeKind::Pyramid6, ShapeKind::Pyramid7, ShapeKind::TriangularPrism}) {
    if (auto lab = classify_shape_as(p, k)) return std::make_pair(k, *lab);
  }
  return std::nullopt;
}

// --- record strings ---------------------------------------------------------

inline std::string record_string(ShapeKind kind,
                                 const std::vector<AngleFraction>& slotFracs) {
  const auto& tmpl = shape_template(kind);
  std::string s = "(";
  for (size_t i = 0; i < slotFracs.size(); ++i) {
    s += to_string(slotFracs[i]);
    if (i + 1 < slotFracs.size())
      s += std::count(tmpl.seps.begin(), tmpl.seps.end(), static_cast<int>(i))
               ? ';'
               : ',';
  }
  s += ")";
  return s;
}

inline std::vector<AngleFraction> slot_fractions(const Decorated& p,
                                                 ShapeKind kind,
                                                 const Labeling& lab) {
  const auto& tmpl = shape_template(kind);
  std::vector<AngleFraction> out;
  out.reserve(tmpl.slots.size());
  for (const auto& [u, v] : tmpl.slots)
    out.push_back(p.frac(lab.tverts[u], lab.tverts[v]));
  return out;
}

// Lexicographic minimum of the record string over the shape's automorphisms;
// also returns the labeling achieving it.
inline std::pair<std::string, Labeling> canonical_record(
    const Decorated& p, ShapeKind kind, const Labeling& lab) {
  const auto& tmpl = shape_template(kind);
  std::string best;
  Labeling bestLab;
  for (const auto& sigma : tmpl.autos) {
    Labeling l2;
    l2.tverts.resize(tmpl.nverts);
    for (int t = 0; t < tmpl.nverts; ++t) l2.tverts[t] = lab.tverts[sigma[t]];
    std::string s = record_string(kind, slot_fractions(p, kind, l2));
    if (best.empty() || s < best) {
      best = s;
      bestLab = l2;
    }
  }
  return {best, bestLab};
}

// Template face number of an actual face under a labeling.
inline int template_face_number(const Decorated& p, ShapeKind kind,
                                const Labeling& lab, int faceIndex) {
  const auto& tmpl = shape_template(kind);
  std::set<int> fs(p.faces[faceIndex].begin(), p.faces[faceIndex].end());
  for (size_t tf = 0; tf < tmpl.faces.size(); ++tf) {
    std::set<int> s;
    for (int tv : tmpl.faces[tf]) s.insert(lab.tverts[tv]);
    if (s == fs) return static_cast<int>(tf);
  }
  return -1;
}

// --- gluing -----------------------------------------------------------------

struct GlueError {
  enum class Kind {
    NotCongruent,
    DenominatorMismatch,
    NonConvex,
    InconsistentEdge,
    UnsupportedShape,
  };
  Kind kind{};
};

using GlueOutcome = std::variant<Decorated, GlueError>;

namespace detail {

// Splice two face cycles that share the removed edge {u,w} into one cycle.
inline std::optional<std::vector<int>> merge_cycles(std::vector<int> c1,
                                                    std::vector<int> c2, int u,
                                                    int w) {
  auto rotate_to_edge = [](std::vector<int>& c, int x, int y) -> bool {
    const int n = static_cast<int>(c.size());
    for (int i = 0; i < n; ++i) {
      int a = c[i], b = c[(i + 1) % n];
      if ((a == x && b == y) || (a == y && b == x)) {
        std::rotate(c.begin(), c.begin() + (i + 1) % n, c.end());
        return true;
      }
    }
    return false;
  };
  if (!rotate_to_edge(c1, u, w)) return std::nullopt;  // c1: [x ... y], edge (y,x)
  if (!rotate_to_edge(c2, u, w)) return std::nullopt;
  // c1 runs from one endpoint of the edge to the other; glue c2 in reverse or
  // forward so the path continues from c1.back().
  if (c2.front() != c1.back()) std::reverse(c2.begin(), c2.end());
  if (c2.front() != c1.back() || c2.back() != c1.front()) return std::nullopt;
  std::vector<int> out(c1.begin(), c1.end());
  out.insert(out.end(), c2.begin() + 1, c2.end() - 1);
  return out;
}

}  // namespace detail

// Places b against a across a's face faceA (a mirror-image placement along
// the matched vertices), merges the hinge fractions, dissolves flat hinges,
// erases vertices left with fewer than three faces, and classifies what
// survives.  matchB[j] is the b-vertex glued to a.faces[faceA][j].
inline GlueOutcome glue(const Decorated& a, int faceA, const Decorated& b,
                        int faceB, const std::vector<int>& matchB) {
  using K = GlueError::Kind;
  const auto& cycA = a.faces[faceA];
  const auto& cycB = b.faces[faceB];
  const int m = static_cast<int>(cycA.size());
  if (static_cast<int>(cycB.size()) != m ||
      static_cast<int>(matchB.size()) != m)
    return GlueError{K::NotCongruent};
  if (a.fundamental != b.fundamental || a.fund_is_prism != b.fund_is_prism)
    return GlueError{K::NotCongruent};
  {
    std::set<int> bs(matchB.begin(), matchB.end()),
        cs(cycB.begin(), cycB.end());
    if (bs != cs) return GlueError{K::NotCongruent};
  }

  // Exact rejects first: hinge fraction merges.
  std::vector<MergeResult> hinges(m);
  for (int j = 0; j < m; ++j) {
    const auto ea = edge_key(cycA[j], cycA[(j + 1) % m]);
    const auto eb = edge_key(matchB[j], matchB[(j + 1) % m]);
    auto itA = a.fracs.find(ea);
    auto itB = b.fracs.find(eb);
    if (itA == a.fracs.end() || itB == b.fracs.end())
      return GlueError{K::NotCongruent};  // matching does not follow the cycle
    hinges[j] = merge(itA->second, itB->second);
    if (hinges[j].is_error())
      return GlueError{hinges[j].error == MergeError::DenominatorMismatch
                           ? K::DenominatorMismatch
                           : K::NonConvex};
  }

  // Geometric congruence of the glued faces: edge lengths and corner angles.
  for (int j = 0; j < m; ++j) {
    const double la = distance(a.verts[cycA[j]], a.verts[cycA[(j + 1) % m]]);
    const double lb = distance(b.verts[matchB[j]], b.verts[matchB[(j + 1) % m]]);
    if (std::abs(la - lb) > kTolGeom) return GlueError{K::NotCongruent};
    const double ca =
        corner_angle(a.verts[cycA[j]], a.verts[cycA[(j + m - 1) % m]],
                     a.verts[cycA[(j + 1) % m]]);
    const double cb =
        corner_angle(b.verts[matchB[j]], b.verts[matchB[(j + m - 1) % m]],
                     b.verts[matchB[(j + 1) % m]]);
    if (std::abs(ca - cb) > kTolGeom) return GlueError{K::NotCongruent};
  }

  // The Lorentz transform mapping b's face onto a's with b flipped to the
  // far side of the face plane.
  Mat4 A, B;
  for (int c = 0; c < 3; ++c) {
    A.col(c) = a.verts[cycA[c]];
    B.col(c) = b.verts[matchB[c]];
  }
  A.col(3) = -a.normals[faceA];
  B.col(3) = b.normals[faceB];
  if (std::abs(B.determinant()) < 1e-12) return GlueError{K::NotCongruent};
  const Mat4 T = A * B.inverse();
  if (!is_lorentz(T, 1e-6)) return GlueError{K::NotCongruent};
  for (int j = 3; j < m; ++j)
    if ((T * b.verts[matchB[j]] - a.verts[cycA[j]]).cwiseAbs().maxCoeff() >
        kTolGeom)
      return GlueError{K::NotCongruent};

  // Assemble the union.
  Decorated u;
  u.verts = a.verts;
  std::vector<int> bmap(b.verts.size(), -1);
  for (int j = 0; j < m; ++j) bmap[matchB[j]] = cycA[j];
  for (int v = 0; v < static_cast<int>(b.verts.size()); ++v)
    if (bmap[v] < 0) {
      bmap[v] = static_cast<int>(u.verts.size());
      u.verts.push_back(T * b.verts[v]);
    }

  std::vector<std::vector<int>> cycles;   // face cycles of the union
  std::vector<Vec4> normals;
  std::map<EdgeKey, int> otherFaceA, otherFaceB;  // hinge edge -> face slot
  for (int f = 0; f < static_cast<int>(a.faces.size()); ++f) {
    if (f == faceA) continue;
    cycles.push_back(a.faces[f]);
    normals.push_back(a.normals[f]);
    for (size_t i = 0; i < a.faces[f].size(); ++i)
      otherFaceA[edge_key(a.faces[f][i],
                          a.faces[f][(i + 1) % a.faces[f].size()])] =
          static_cast<int>(cycles.size()) - 1;
  }
  for (int f = 0; f < static_cast<int>(b.faces.size()); ++f) {
    if (f == faceB) continue;
    std::vector<int> cyc;
    for (int v : b.faces[f]) cyc.push_back(bmap[v]);
    cycles.push_back(cyc);
    normals.push_back(T * b.normals[f]);
    for (size_t i = 0; i < cyc.size(); ++i)
      otherFaceB[edge_key(cyc[i], cyc[(i + 1) % cyc.size()])] =
          static_cast<int>(cycles.size()) - 1;
  }

  // Edge fractions: interior edges inherited, hinge edges merged.
  for (const auto& [e, fr] : a.fracs) {
    bool hinge = false;
    for (int j = 0; j < m; ++j)
      if (e == edge_key(cycA[j], cycA[(j + 1) % m])) hinge = true;
    if (!hinge) u.fracs[e] = fr;
  }
  for (const auto& [e, fr] : b.fracs) {
    const EdgeKey em = edge_key(bmap[e.first], bmap[e.second]);
    bool hinge = false;
    for (int j = 0; j < m; ++j)
      if (em == edge_key(cycA[j], cycA[(j + 1) % m])) hinge = true;
    if (!hinge) u.fracs[em] = fr;
  }

  // Flat hinges unify the two adjacent faces; angle hinges keep the edge.
  std::vector<std::pair<int, int>> toUnify;
  for (int j = 0; j < m; ++j) {
    const EdgeKey e = edge_key(cycA[j], cycA[(j + 1) % m]);
    if (hinges[j].is_angle()) {
      u.fracs[e] = hinges[j].angle;
    } else {
      toUnify.emplace_back(otherFaceA.at(e), otherFaceB.at(e));
    }
  }

  // Union-find over face slots, then splice the grouped cycles.
  std::vector<int> parent(cycles.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [x, y] : toUnify) {
    const int rx = find(x), ry = find(y);
    if (rx == ry) return GlueError{K::UnsupportedShape};
    if ((normals[x] - normals[y]).cwiseAbs().maxCoeff() > 1e-6)
      return GlueError{K::NotCongruent};  // flat hinge but planes disagree
    parent[rx] = ry;
  }
  std::map<int, std::vector<int>> groups;
  for (size_t i = 0; i < cycles.size(); ++i)
    groups[find(static_cast<int>(i))].push_back(static_cast<int>(i));
  for (const auto& [root, members] : groups) {
    std::vector<std::vector<int>> pool;
    for (int f : members) pool.push_back(cycles[f]);
    while (pool.size() > 1) {
      // Find two cycles sharing a dissolved hinge edge and splice them.
      bool done = false;
      for (size_t i = 0; i < pool.size() && !done; ++i)
        for (size_t j = i + 1; j < pool.size() && !done; ++j) {
          std::set<EdgeKey> ei;
          for (size_t x = 0; x < pool[i].size(); ++x)
            ei.insert(edge_key(pool[i][x], pool[i][(x + 1) % pool[i].size()]));
          for (size_t x = 0; x < pool[j].size(); ++x) {
            const EdgeKey e =
                edge_key(pool[j][x], pool[j][(x + 1) % pool[j].size()]);
            if (ei.count(e) && !u.fracs.count(e)) {
              auto merged =
                  detail::merge_cycles(pool[i], pool[j], e.first, e.second);
              if (!merged) return GlueError{K::UnsupportedShape};
              pool[i] = *merged;
              pool.erase(pool.begin() + static_cast<long>(j));
              done = true;
              break;
            }
          }
        }
      if (!done) return GlueError{K::UnsupportedShape};
    }
    u.faces.push_back(pool[0]);
    u.normals.push_back(normals[members[0]]);
  }

  // Erase vertices that ended up on fewer than three faces: they now lie in
  // the interior of an edge of the union.  The two collinear sub-edges must
  // carry identical fractions (mirrors continue along the whole line).
  for (bool changed = true; changed;) {
    changed = false;
    std::map<int, std::vector<int>> vfaces;
    for (size_t f = 0; f < u.faces.size(); ++f)
      for (int v : u.faces[f]) vfaces[v].push_back(static_cast<int>(f));
    for (int v = 0; v < static_cast<int>(u.verts.size()); ++v) {
      const auto it = vfaces.find(v);
      const size_t deg = it == vfaces.end() ? 0 : it->second.size();
      if (deg == 0) continue;  // already spliced out; compacted later
      if (deg == 1) return GlueError{K::UnsupportedShape};
      if (deg != 2) continue;
      // Neighbors of v in both cycles must agree: {p, q}.
      std::set<int> nbrs;
      for (int f : it->second) {
        const auto& c = u.faces[f];
        const auto pos = std::find(c.begin(), c.end(), v) - c.begin();
        nbrs.insert(c[(pos + 1) % c.size()]);
        nbrs.insert(c[(pos + c.size() - 1) % c.size()]);
      }
      if (nbrs.size() != 2) return GlueError{K::UnsupportedShape};
      const int p = *nbrs.begin(), q = *std::next(nbrs.begin());
      const auto f1 = u.fracs.find(edge_key(p, v));
      const auto f2 = u.fracs.find(edge_key(v, q));
      if (f1 == u.fracs.end() || f2 == u.fracs.end())
        return GlueError{K::UnsupportedShape};
      if (f1->second != f2->second) return GlueError{K::InconsistentEdge};
      if (std::abs(distance(u.verts[p], u.verts[v]) +
                   distance(u.verts[v], u.verts[q]) -
                   distance(u.verts[p], u.verts[q])) > 1e-6)
        return GlueError{K::UnsupportedShape};  // not collinear
      const AngleFraction fr = f1->second;
      u.fracs.erase(edge_key(p, v));
      u.fracs.erase(edge_key(v, q));
      u.fracs[edge_key(p, q)] = fr;
      for (int f : it->second) {
        auto& c = u.faces[f];
        c.erase(std::find(c.begin(), c.end(), v));
        if (c.size() < 3) return GlueError{K::UnsupportedShape};
      }
      changed = true;
      break;
    }
  }

  // Compact vertex ids.
  {
    std::vector<int> remap(u.verts.size(), -1);
    std::vector<Vec4> nv;
    for (const auto& c : u.faces)
      for (int v : c)
        if (remap[v] < 0) {
          remap[v] = static_cast<int>(nv.size());
          nv.push_back(u.verts[v]);
        }
    for (auto& c : u.faces)
      for (auto& v : c) v = remap[v];
    std::map<EdgeKey, AngleFraction> nf;
    for (const auto& [e, fr] : u.fracs) {
      if (remap[e.first] < 0 || remap[e.second] < 0)
        return GlueError{K::UnsupportedShape};
      nf[edge_key(remap[e.first], remap[e.second])] = fr;
    }
    u.fracs = std::move(nf);
    u.verts = std::move(nv);
  }

  // Consistency: the edge set read off the cycles must equal the fraction
  // keys, every edge on exactly two faces.
  {
    std::map<EdgeKey, int> count;
    for (const auto& c : u.faces)
      for (size_t i = 0; i < c.size(); ++i)
        ++count[edge_key(c[i], c[(i + 1) % c.size()])];
    if (count.size() != u.fracs.size()) return GlueError{K::UnsupportedShape};
    for (const auto& [e, n] : count)
      if (n != 2 || !u.fracs.count(e)) return GlueError{K::UnsupportedShape};
  }

  if (!classify_shape(u)) return GlueError{K::UnsupportedShape};

  u.fundamental = a.fundamental;
  u.fund_is_prism = a.fund_is_prism;
  u.tiles = a.tiles + b.tiles;
  u.depth = 1 + std::max(a.depth, b.depth);
  return u;
}

// All cyclic matchings (rotations and reflections) of b's face against a's.
inline std::vector<std::vector<int>> face_matchings(const Decorated& a,
                                                    int faceA,
                                                    const Decorated& b,
                                                    int faceB) {
  const int m = static_cast<int>(a.faces[faceA].size());
  std::vector<std::vector<int>> out;
  if (static_cast<int>(b.faces[faceB].size()) != m) return out;
  const auto& cycB = b.faces[faceB];
  for (int flip = 0; flip < 2; ++flip)
    for (int off = 0; off < m; ++off) {
      std::vector<int> match(m);
      for (int j = 0; j < m; ++j)
        match[j] = flip ? cycB[(off + m - j) % m] : cycB[(off + j) % m];
      out.push_back(std::move(match));
    }
  return out;
}

}  // namespace coxdec
