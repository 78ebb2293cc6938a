#pragma once

// Minkowski model of H^3: signature (+,+,+,-).  Points of the space are
// timelike vectors normalised to <v,v> = -1 on the upper sheet; planes are
// unit spacelike normals.

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "coxdec/angle.hpp"

namespace coxdec {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kTolAlgebraic = 1e-9;  // exact algebraic identities
inline constexpr double kTolSolved = 1e-8;     // quantities behind a solve
inline constexpr double kTolGeom = 1e-7;       // congruence / incidence tests

inline double mdot(const Vec4& x, const Vec4& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3];
}

inline Mat4 minkowski_form() {
  Mat4 j = Mat4::Identity();
  j(3, 3) = -1.0;
  return j;
}

inline bool is_lorentz(const Mat4& t, double tol = kTolSolved) {
  const Mat4 j = minkowski_form();
  return (t.transpose() * j * t - j).cwiseAbs().maxCoeff() <= tol;
}

// Reflection in the plane with unit spacelike normal e: x - 2<x,e>e.
inline Vec4 reflect(const Vec4& x, const Vec4& e) {
  return x - 2.0 * mdot(x, e) * e;
}

inline Mat4 reflection_matrix(const Vec4& e) {
  return Mat4::Identity() - 2.0 * (e * (minkowski_form() * e).transpose());
}

inline Vec4 normalize_point(Vec4 v) {
  const double q = mdot(v, v);
  v /= std::sqrt(-q);
  if (v[3] < 0) v = -v;  // upper sheet
  return v;
}

enum class LengthError { DegenerateEdge };

// Hyperbolic distance between normalised points: cosh d = -<v,w>.
inline std::optional<double> edge_length(const Vec4& v, const Vec4& w,
                                         double tol = kTolAlgebraic) {
  const double c = -mdot(v, w);
  if (c <= 1.0 + tol) return std::nullopt;  // coincident or degenerate
  return std::acosh(c);
}

inline double distance(const Vec4& v, const Vec4& w) {
  const double c = -mdot(v, w);
  return c <= 1.0 ? 0.0 : std::acosh(c);
}

// Angle at point v between geodesics towards u and w (intrinsic face angle).
inline double corner_angle(const Vec4& v, const Vec4& u, const Vec4& w) {
  const Vec4 tu = u + mdot(u, v) * v;  // projection to the tangent space at v
  const Vec4 tw = w + mdot(w, v) * v;
  const double c =
      mdot(tu, tw) / std::sqrt(mdot(tu, tu) * mdot(tw, tw));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Dihedral angle between faces with outward unit normals m, n: <m,n> = -cos.
inline double dihedral_angle(const Vec4& m, const Vec4& n) {
  return std::acos(std::clamp(-mdot(m, n), -1.0, 1.0));
}

}  // namespace coxdec
