#pragma once

// Triangles with rational angles across the three constant-curvature plane
// geometries, classified exactly from the angle sum.

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>

#include "coxdec/angle.hpp"

namespace coxdec {

enum class Geometry2D { Spherical, Euclidean, Hyperbolic };

// Small exact rational helper for angle sums and area ratios.
struct Rat {
  long long n = 0, d = 1;

  static Rat make(long long n, long long d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    return Rat{g ? n / g : n, g ? d / g : d};
  }
  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(a.n * b.d + b.n * a.d, a.d * b.d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(a.n * b.d - b.n * a.d, a.d * b.d);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    return make(a.n * b.d, a.d * b.n);
  }
  friend bool operator==(const Rat&, const Rat&) = default;
  bool positive() const { return n > 0; }
  std::optional<long long> as_integer() const {
    if (d == 1) return n;
    return std::nullopt;
  }
};

struct Triangle2D {
  std::array<AngleFraction, 3> angles;  // multiples of pi: parts/denom each

  // Angle sum as a fraction of pi.
  Rat angle_sum() const {
    Rat s{0, 1};
    for (const auto& a : angles) s = s + Rat::make(a.parts, a.denom);
    return s;
  }
  Geometry2D geometry() const {
    const Rat excess = angle_sum() - Rat{1, 1};
    if (excess.n > 0) return Geometry2D::Spherical;
    if (excess.n < 0) return Geometry2D::Hyperbolic;
    return Geometry2D::Euclidean;
  }
  // |area| / pi, exact: the angle excess or defect.
  Rat area_over_pi() const {
    const Rat excess = angle_sum() - Rat{1, 1};
    return excess.n >= 0 ? excess : Rat{-excess.n, excess.d};
  }
  bool is_coxeter() const {
    for (const auto& a : angles)
      if (a.parts != 1 || a.denom < 2) return false;
    return true;
  }
  friend bool operator==(const Triangle2D&, const Triangle2D&) = default;
};

inline Triangle2D coxeter_triangle(int k, int l, int m) {
  return Triangle2D{{AngleFraction{1, k}, AngleFraction{1, l},
                     AngleFraction{1, m}}};
}

// Spherical vertex link at a trivalent corner: strictly positive excess.
inline bool vertex_link_ok(int k, int l, int m) {
  return static_cast<long long>(l) * m + static_cast<long long>(k) * m +
             static_cast<long long>(k) * l >
         static_cast<long long>(k) * l * m;
}

// Exact tile count of a decomposition of `target` by `fund`, if integral.
inline std::optional<long long> exact_tile_count(const Triangle2D& fund,
                                                 const Triangle2D& target) {
  const Rat af = fund.area_over_pi(), at = target.area_over_pi();
  if (!af.positive() || !at.positive()) return std::nullopt;
  const auto k = (at / af).as_integer();
  if (!k || *k < 1) return std::nullopt;
  return k;
}

}  // namespace coxdec
