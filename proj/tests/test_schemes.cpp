#include <array>

#include "coxdec/schemes.hpp"
#include <doctest.h>

using namespace coxdec;

TEST_CASE("prisms into prisms: the five schemes") {
  const auto schemes = enumerate_prisms_into_prisms();
  REQUIRE(schemes.size() == 5);

  struct Expect {
    int baseTiles, layers;
    std::array<int, 3> parts, splits;
    std::array<int, 9> fund;
  };
  const std::array<Expect, 5> expect{{
      {1, 2, {1, 1, 1}, {1, 1, 1}, {8, 2, 3, 3, 2, 2, 2, 2, 2}},
      {2, 1, {1, 2, 1}, {1, 2, 1}, {8, 2, 3, 2, 2, 2, 3, 2, 2}},
      {2, 2, {1, 2, 1}, {1, 2, 1}, {8, 2, 3, 3, 2, 2, 2, 2, 2}},
      {4, 1, {2, 1, 1}, {2, 2, 2}, {5, 2, 4, 2, 2, 2, 2, 2, 3}},
      {4, 2, {2, 1, 1}, {2, 2, 2}, {5, 2, 4, 2, 2, 3, 2, 2, 2}},
  }};
  for (size_t i = 0; i < 5; ++i) {
    CHECK(schemes[i].baseTiles == expect[i].baseTiles);
    CHECK(schemes[i].layers == expect[i].layers);
    CHECK(schemes[i].cornerParts == expect[i].parts);
    CHECK(schemes[i].edgeSplits == expect[i].splits);
    CHECK(schemes[i].fund.labels == expect[i].fund);
    CHECK(schemes[i].tiles() == expect[i].baseTiles * expect[i].layers);
  }

  // One scheme with both bases fundamental (a pure layer doubling), plus two
  // base patterns each in a one- and a two-layer variant.
  int trivialBase = 0;
  for (const auto& s : schemes)
    if (s.baseTiles == 1) {
      ++trivialBase;
      CHECK(s.layers == 2);
    }
  CHECK(trivialBase == 1);

  // Witnesses actually realize on both sides.
  for (const auto& s : schemes) {
    CHECK(realize_prism(s.fund).has_value());
    std::array<double, 9> ang{};
    for (int k = 0; k < 9; ++k) ang[k] = angle_value(s.target[k]);
    CHECK(realize_prism_angles(ang).has_value());
  }
}
