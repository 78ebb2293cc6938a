#pragma once

// Unreduced dihedral-angle fractions.  A fraction k/q stands for a dihedral
// angle of value k*pi/q that is decomposed into k wedges of pi/q each, so
// 2/4 (a right angle split in two) and 1/2 (an undivided right angle) are
// different values and are never normalised.

#include <cassert>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace coxdec {

inline constexpr double kPi = 3.14159265358979323846;

struct AngleFraction {
  int parts = 1;  // number of fundamental wedges, >= 1
  int denom = 2;  // fundamental wedge is pi/denom, denom >= 2

  friend bool operator==(const AngleFraction&, const AngleFraction&) = default;
  friend auto operator<=>(const AngleFraction&, const AngleFraction&) = default;
};

inline bool valid(const AngleFraction& a) {
  return a.parts >= 1 && a.denom >= 2;
}

// Convex polyhedron edges carry angles strictly below pi.
inline bool convex(const AngleFraction& a) { return a.parts < a.denom; }

inline double angle_value(const AngleFraction& a) {
  return static_cast<double>(a.parts) * kPi / static_cast<double>(a.denom);
}

inline bool is_fundamental(const AngleFraction& a) { return a.parts == 1; }

enum class MergeError { DenominatorMismatch, NonConvex };

// Gluing two tiles along a face merges the fractions at each hinge edge.
// Flat means the merged angle is exactly pi: the hinge edge dissolves and
// the two adjacent faces become one.
struct MergeResult {
  enum class Kind { Angle, Flat, Error };
  Kind kind = Kind::Error;
  AngleFraction angle{};        // valid iff kind == Angle
  MergeError error = MergeError::DenominatorMismatch;

  bool is_angle() const { return kind == Kind::Angle; }
  bool is_flat() const { return kind == Kind::Flat; }
  bool is_error() const { return kind == Kind::Error; }

  friend bool operator==(const MergeResult&, const MergeResult&) = default;
};

// Successive tiles around a shared edge are mirror images, so every wedge at
// the edge has one and the same fundamental angle pi/q; mismatched
// denominators can never tile a common edge.
inline MergeResult merge(const AngleFraction& a, const AngleFraction& b) {
  assert(valid(a) && valid(b));
  if (a.denom != b.denom)
    return {MergeResult::Kind::Error, {}, MergeError::DenominatorMismatch};
  const int sum = a.parts + b.parts;
  if (sum > a.denom)
    return {MergeResult::Kind::Error, {}, MergeError::NonConvex};
  if (sum == a.denom) return {MergeResult::Kind::Flat, {}, {}};
  return {MergeResult::Kind::Angle, AngleFraction{sum, a.denom}, {}};
}

// Text form "k/q"; round-trips bit-exactly.
inline std::string to_string(const AngleFraction& a) {
  return std::to_string(a.parts) + "/" + std::to_string(a.denom);
}

inline std::optional<AngleFraction> parse_fraction(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  AngleFraction a;
  auto r1 = std::from_chars(s.data(), s.data() + slash, a.parts);
  if (r1.ec != std::errc{} || r1.ptr != s.data() + slash) return std::nullopt;
  auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), a.denom);
  if (r2.ec != std::errc{} || r2.ptr != s.data() + s.size()) return std::nullopt;
  if (!valid(a)) return std::nullopt;
  return a;
}

}  // namespace coxdec
