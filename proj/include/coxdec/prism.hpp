#pragma once

// Compact Coxeter triangular prisms: admissibility prefilter and Minkowski
// realization.  Labels live on the nine edges in the record slot order of the
// prism template (see polyhedron.hpp):
//   0 A3B3, 1 A1B1, 2 A2B2, 3 A1A2, 4 A2A3, 5 A3A1, 6 B1B2, 7 B2B3, 8 B3B1.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "coxdec/gram.hpp"
#include "coxdec/minkowski.hpp"
#include "coxdec/polyhedron.hpp"

namespace coxdec {

struct CoxeterPrism {
  std::array<int, 9> labels{2, 2, 2, 2, 2, 2, 2, 2, 2};

  friend bool operator==(const CoxeterPrism&, const CoxeterPrism&) = default;
  friend auto operator<=>(const CoxeterPrism&, const CoxeterPrism&) = default;
};

// Slot index of the edge between template faces f < g (faces 0,1 never meet).
inline int prism_slot_of_faces(int f, int g) {
  if (f > g) std::swap(f, g);
  if (f == 0) return g == 2 ? 3 : g == 3 ? 4 : 5;  // A1A2, A2A3, A3A1
  if (f == 1) return g == 2 ? 6 : g == 3 ? 7 : 8;  // B1B2, B2B3, B3B1
  if (f == 2) return g == 3 ? 2 : 1;               // A2B2, A1B1
  return 0;                                        // A3B3
}

// The three slots meeting at each template vertex A1,A2,A3,B1,B2,B3.
inline const std::array<std::array<int, 3>, 6>& prism_vertex_slots() {
  static const std::array<std::array<int, 3>, 6> s{{
      {{3, 5, 1}},  // A1: A1A2, A3A1, A1B1
      {{3, 4, 2}},  // A2
      {{4, 5, 0}},  // A3
      {{6, 8, 1}},  // B1
      {{6, 7, 2}},  // B2
      {{7, 8, 0}},  // B3
  }};
  return s;
}

// Exact necessary conditions for compactness: every vertex link spherical
// and the lateral three-circuit strictly hyperbolic (angle sum below pi).
inline bool andreev_prefilter_prism(const CoxeterPrism& p) {
  for (int q : p.labels)
    if (q < 2) return false;
  for (const auto& vs : prism_vertex_slots()) {
    const long a = p.labels[vs[0]], b = p.labels[vs[1]], c = p.labels[vs[2]];
    if (b * c + a * c + a * b <= a * b * c) return false;
  }
  const long a = p.labels[0], b = p.labels[1], c = p.labels[2];
  if (b * c + a * c + a * b >= a * b * c) return false;
  return true;
}

struct PrismRealization {
  std::vector<Vec4> normals;   // faces 0..4
  std::vector<Vec4> vertices;  // A1,A2,A3,B1,B2,B3
  double base_gram = 0;        // <n0,n1>, below -1 for ultraparallel bases
};

// Vertices as face triples, in template vertex order.
inline const std::array<std::array<int, 3>, 6>& prism_vertex_faces() {
  static const std::array<std::array<int, 3>, 6> s{{
      {{0, 2, 4}}, {{0, 2, 3}}, {{0, 3, 4}},
      {{1, 2, 4}}, {{1, 2, 3}}, {{1, 3, 4}},
  }};
  return s;
}

// Completes the 5x5 Gram matrix (the base-base entry is free), forcing the
// rank down to four, factorizes, and verifies the resulting polyhedron.
// Angles are dihedral values per slot; they need not be of the form pi/q.
inline std::optional<PrismRealization> realize_prism_angles(
    const std::array<double, 9>& angles) {
  for (double a : angles)
    if (!(a > 0) || a >= kPi - 1e-9) return std::nullopt;
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(5, 5);
  for (int f = 0; f < 5; ++f)
    for (int h = f + 1; h < 5; ++h) {
      if (f == 0 && h == 1) continue;
      const double v = -std::cos(angles[prism_slot_of_faces(f, h)]);
      g(f, h) = g(h, f) = v;
    }
  auto det_at = [&](double c) {
    Eigen::MatrixXd m = g;
    m(0, 1) = m(1, 0) = c;
    return m.determinant();
  };
  // det is quadratic in the completed entry.
  const double p0 = det_at(0), p1 = det_at(1), pm1 = det_at(-1);
  const double alpha = (p1 + pm1 - 2 * p0) / 2;
  const double beta = (p1 - pm1) / 2;
  const double gamma = p0;
  std::vector<double> roots;
  if (std::abs(alpha) < 1e-14) {
    if (std::abs(beta) > 1e-14) roots.push_back(-gamma / beta);
  } else {
    const double disc = beta * beta - 4 * alpha * gamma;
    if (disc < 0) return std::nullopt;
    const double sq = std::sqrt(disc);
    roots.push_back((-beta - sq) / (2 * alpha));
    roots.push_back((-beta + sq) / (2 * alpha));
    if (roots[0] > roots[1]) std::swap(roots[0], roots[1]);
  }

  const auto& vfaces = prism_vertex_faces();
  for (double c : roots) {
    if (c >= -1 - 1e-12) continue;  // bases must be ultraparallel
    Eigen::MatrixXd m = g;
    m(0, 1) = m(1, 0) = c;
    Eigen::Matrix<double, Eigen::Dynamic, 4> rows;
    if (!lorentz_factorize(m, rows, kTolSolved)) continue;
    PrismRealization r;
    for (int f = 0; f < 5; ++f) r.normals.push_back(rows.row(f).transpose());
    bool ok = true;
    for (const auto& vf : vfaces) {
      auto v = plane_triple_vertex(
          {r.normals[vf[0]], r.normals[vf[1]], r.normals[vf[2]]});
      if (!v) {
        ok = false;
        break;
      }
      r.vertices.push_back(*v);
    }
    if (!ok) continue;
    // The factorization fixes all relative signs; at most a global flip of
    // the normals can be needed to make them outward.
    const double side = mdot(r.vertices[5], r.normals[0]);
    if (std::abs(side) < kTolSolved) continue;
    if (side > 0)
      for (auto& n : r.normals) n = -n;
    for (int v = 0; v < 6 && ok; ++v)
      for (int f = 0; f < 5 && ok; ++f) {
        const bool onFace = std::count(vfaces[v].begin(), vfaces[v].end(), f);
        const double d = mdot(r.vertices[v], r.normals[f]);
        if (onFace ? std::abs(d) > kTolSolved : d > -kTolSolved) ok = false;
      }
    if (!ok) continue;
    for (int f = 0; f < 5 && ok; ++f)
      for (int h = f + 1; h < 5 && ok; ++h) {
        if (f == 0 && h == 1) continue;
        const double want = angles[prism_slot_of_faces(f, h)];
        if (std::abs(dihedral_angle(r.normals[f], r.normals[h]) - want) >
            kTolSolved)
          ok = false;
      }
    if (!ok) continue;
    r.base_gram = mdot(r.normals[0], r.normals[1]);
    return r;
  }
  return std::nullopt;
}

inline std::optional<PrismRealization> realize_prism(const CoxeterPrism& p) {
  std::array<double, 9> angles{};
  for (int s = 0; s < 9; ++s) angles[s] = kPi / p.labels[s];
  return realize_prism_angles(angles);
}

inline Decorated decorated_from_prism(const CoxeterPrism& p,
                                      const PrismRealization& r, int fundId) {
  const auto& tmpl = shape_template(ShapeKind::TriangularPrism);
  Decorated d;
  d.verts = r.vertices;
  d.faces = tmpl.faces;
  d.normals = r.normals;
  for (size_t s = 0; s < tmpl.slots.size(); ++s)
    d.fracs[edge_key(tmpl.slots[s].first, tmpl.slots[s].second)] =
        AngleFraction{1, p.labels[s]};
  d.fundamental = fundId;
  d.fund_is_prism = true;
  return d;
}

// Canonical representative under the prism symmetry group.
inline CoxeterPrism canonical_prism_labels(const CoxeterPrism& p) {
  const auto& tmpl = shape_template(ShapeKind::TriangularPrism);
  // Vertex pair -> slot lookup.
  auto slot_of = [&](int u, int v) {
    for (size_t s = 0; s < tmpl.slots.size(); ++s) {
      auto [a, b] = tmpl.slots[s];
      if (edge_key(a, b) == edge_key(u, v)) return static_cast<int>(s);
    }
    return -1;
  };
  CoxeterPrism best = p;
  for (const auto& sigma : tmpl.autos) {
    CoxeterPrism q;
    for (size_t s = 0; s < tmpl.slots.size(); ++s) {
      auto [u, v] = tmpl.slots[s];
      q.labels[s] = p.labels[slot_of(sigma[u], sigma[v])];
    }
    if (q.labels < best.labels) best = q;
  }
  return best;
}

}  // namespace coxdec
