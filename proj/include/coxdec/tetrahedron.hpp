#pragma once

// Coxeter tetrahedra: six integer labels q_ij on the face pairs, dihedral
// angles pi/q_ij, and their realization as compact simplices in H^3.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "coxdec/gram.hpp"
#include "coxdec/minkowski.hpp"

namespace coxdec {

// Unordered face pairs of a tetrahedron in fixed order.
inline constexpr std::array<std::array<int, 2>, 6> kFacePairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline int face_pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  for (int k = 0; k < 6; ++k)
    if (kFacePairs[k][0] == i && kFacePairs[k][1] == j) return k;
  return -1;
}

struct CoxeterTetrahedron {
  std::array<int, 6> labels{2, 2, 2, 2, 2, 2};  // q_ij >= 2, kFacePairs order

  int label(int i, int j) const { return labels[face_pair_index(i, j)]; }
  friend bool operator==(const CoxeterTetrahedron&,
                         const CoxeterTetrahedron&) = default;
  friend auto operator<=>(const CoxeterTetrahedron&,
                          const CoxeterTetrahedron&) = default;
};

inline Mat4 gram_of_tetrahedron(const CoxeterTetrahedron& t) {
  Mat4 g = Mat4::Identity();
  for (int k = 0; k < 6; ++k) {
    const double v = -std::cos(kPi / t.labels[k]);
    g(kFacePairs[k][0], kFacePairs[k][1]) = v;
    g(kFacePairs[k][1], kFacePairs[k][0]) = v;
  }
  return g;
}

// Vertex v of the simplex is the one opposite face v, incident to the three
// faces != v; its link triangle has angles pi/q over the three labels among
// those faces.
inline std::array<int, 3> vertex_link_labels(const CoxeterTetrahedron& t,
                                             int vertex) {
  std::array<int, 3> fs{};
  int n = 0;
  for (int f = 0; f < 4; ++f)
    if (f != vertex) fs[n++] = f;
  return {t.label(fs[0], fs[1]), t.label(fs[0], fs[2]), t.label(fs[1], fs[2])};
}

// Spherical link: 1/k + 1/l + 1/m > 1 (exact integer arithmetic).
inline bool spherical_triple(int k, int l, int m) {
  return l * m + k * m + k * l > k * l * m;
}

inline bool is_compact(const CoxeterTetrahedron& t) {
  for (int v = 0; v < 4; ++v) {
    const auto [k, l, m] = vertex_link_labels(t, v);
    if (!spherical_triple(k, l, m)) return false;
  }
  return signature(gram_of_tetrahedron(t)) == Signature{3, 1, 0};
}

// Canonical representative of the labels under the S4 action on faces.
inline CoxeterTetrahedron canonical_labels(const CoxeterTetrahedron& t) {
  std::array<int, 4> perm{0, 1, 2, 3};
  CoxeterTetrahedron best = t;
  bool first = true;
  do {
    CoxeterTetrahedron c;
    for (int k = 0; k < 6; ++k)
      c.labels[face_pair_index(perm[kFacePairs[k][0]],
                               perm[kFacePairs[k][1]])] = t.labels[k];
    if (first || c.labels < best.labels) best = c;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct Realization {
  std::vector<Vec4> normals;   // outward unit spacelike
  std::vector<Vec4> vertices;  // normalised timelike, upper sheet
  std::vector<std::vector<int>> vertex_faces;  // incidence, per vertex
};

// Kernel direction of the planes {n_f} through a common vertex; normalised
// timelike point, if any.
inline std::optional<Vec4> plane_triple_vertex(const std::vector<Vec4>& ns,
                                               double tol = kTolSolved) {
  Eigen::MatrixXd a(static_cast<int>(ns.size()), 4);
  const Mat4 j = minkowski_form();
  for (size_t r = 0; r < ns.size(); ++r) a.row(static_cast<int>(r)) = (j * ns[r]).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  if (svd.singularValues()[2] <= tol) return std::nullopt;  // rank < 3
  Vec4 v = svd.matrixV().col(3);
  if (mdot(v, v) >= -tol) return std::nullopt;  // not timelike
  return normalize_point(v);
}

enum class RealizeError { FactorizationFailure, NonCompact };

// Factorizes the Gram matrix in signature (3,1), intersects plane triples for
// the vertices, and orients every normal outward.
inline std::optional<Realization> realize_tetrahedron(
    const CoxeterTetrahedron& t, RealizeError* err = nullptr) {
  auto fail = [&](RealizeError e) {
    if (err) *err = e;
    return std::nullopt;
  };
  Eigen::Matrix<double, Eigen::Dynamic, 4> rows;
  if (!lorentz_factorize(gram_of_tetrahedron(t), rows))
    return fail(RealizeError::FactorizationFailure);
  Realization r;
  for (int f = 0; f < 4; ++f) r.normals.push_back(rows.row(f).transpose());
  for (int v = 0; v < 4; ++v) {
    std::vector<Vec4> planes;
    std::vector<int> inc;
    for (int f = 0; f < 4; ++f)
      if (f != v) {
        planes.push_back(r.normals[f]);
        inc.push_back(f);
      }
    auto p = plane_triple_vertex(planes);
    if (!p) return fail(RealizeError::NonCompact);
    r.vertices.push_back(*p);
    r.vertex_faces.push_back(inc);
  }
  // Outward orientation: the opposite vertex lies on the negative side.
  for (int f = 0; f < 4; ++f)
    if (mdot(r.vertices[f], r.normals[f]) > 0) r.normals[f] = -r.normals[f];
  // The oriented normals must still reproduce the Gram matrix.
  const Mat4 g = gram_of_tetrahedron(t);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(mdot(r.normals[i], r.normals[j]) - g(i, j)) > kTolSolved)
        return fail(RealizeError::FactorizationFailure);
  return r;
}

}  // namespace coxdec
