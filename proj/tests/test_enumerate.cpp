#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "coxdec/enumerate.hpp"
#include <doctest.h>

using namespace coxdec;

namespace {

std::vector<CoxeterTetrahedron> atoms() {
  return enumerate_fundamental_tetrahedra(5);
}

// The full pipeline for one fundamental tetrahedron.
Workspace pipeline(const CoxeterTetrahedron& f, int fundId,
                   PrismLevelsResult* prOut = nullptr) {
  Workspace w = enumerate_quasicoxeter_tetrahedra(f, 64, fundId);
  enumerate_pyramids(w, 64);
  SearchConfig cfg;
  auto pr = enumerate_prisms_into_tetrahedra(w, cfg);
  if (prOut) *prOut = std::move(pr);
  return w;
}

// Canonical records of quadrilateral pyramids obtainable as one gluing of two
// catalog tetrahedra.
std::set<std::string> two_tet_pyr4_records(const Workspace& w) {
  std::set<std::string> out;
  const auto tets = w.of_shape(ShapeKind::Tetrahedron);
  for (size_t a = 0; a < tets.size(); ++a)
    for (size_t b = a; b < tets.size(); ++b) {
      const Decorated A = w.entries[tets[a]].poly;
      const Decorated B = w.entries[tets[b]].poly;
      detail::for_each_glue(
          A, B,
          [&](int, int, const std::vector<int>&, Decorated d) {
            auto cls = classify_shape(d);
            if (!cls || cls->first != ShapeKind::Pyramid4) return;
            out.insert(canonical_record(d, cls->first, cls->second).first);
          },
          3);
    }
  return out;
}

}  // namespace

TEST_CASE("fundamental tetrahedra: nine, saturating at label 5") {
  const auto a5 = enumerate_fundamental_tetrahedra(5);
  CHECK(a5.size() == 9);
  const auto a10 = enumerate_fundamental_tetrahedra(10);
  REQUIRE(a10.size() == a5.size());
  for (size_t i = 0; i < a5.size(); ++i) CHECK(a10[i].labels == a5[i].labels);

  const std::vector<std::array<int, 6>> expect{
      {2, 2, 3, 2, 3, 5}, {2, 2, 3, 3, 2, 5}, {2, 2, 4, 5, 2, 3},
      {2, 2, 5, 5, 2, 3}, {2, 3, 3, 3, 4, 2}, {2, 3, 3, 3, 5, 2},
      {2, 3, 4, 4, 3, 2}, {2, 3, 4, 5, 3, 2}, {2, 3, 5, 5, 3, 2}};
  REQUIRE(a5.size() == expect.size());
  for (size_t i = 0; i < a5.size(); ++i) CHECK(a5[i].labels == expect[i]);
}

TEST_CASE("quasi-Coxeter tetrahedra: counts and saturation") {
  const auto fs = atoms();
  const std::vector<size_t> counts{4, 6, 6, 3, 1, 1, 1, 1, 1};  // incl. seed
  const std::vector<int> maxk{4, 6, 8, 4, 1, 1, 1, 1, 1};
  for (size_t i = 0; i < fs.size(); ++i) {
    Workspace w = enumerate_quasicoxeter_tetrahedra(fs[i], 64, (int)i);
    const auto tets = w.of_shape(ShapeKind::Tetrahedron);
    CHECK(tets.size() == counts[i]);
    int mk = 0;
    for (int t : tets) mk = std::max(mk, w.entries[t].poly.tiles);
    CHECK(mk == maxk[i]);
    // Saturated well below the tile bound.
    Workspace w2 = enumerate_quasicoxeter_tetrahedra(fs[i], 96, (int)i);
    CHECK(w2.of_shape(ShapeKind::Tetrahedron).size() == counts[i]);
  }
}

TEST_CASE("pyramids: counts per base size") {
  const auto fs = atoms();
  const std::vector<size_t> p4{8, 9, 15, 4, 2, 2, 1, 2, 1};
  const std::vector<size_t> p5{1, 2, 3, 2, 0, 0, 0, 0, 0};
  size_t hexTotal = 0;
  for (size_t i = 0; i < fs.size(); ++i) {
    Workspace w = enumerate_quasicoxeter_tetrahedra(fs[i], 64, (int)i);
    enumerate_pyramids(w, 64);
    CHECK(w.of_shape(ShapeKind::Pyramid4).size() == p4[i]);
    CHECK(w.of_shape(ShapeKind::Pyramid5).size() == p5[i]);
    const auto p6 = w.of_shape(ShapeKind::Pyramid6);
    hexTotal += p6.size();
    if (i == 1) CHECK(p6.size() == 1);
    CHECK(w.of_shape(ShapeKind::Pyramid7).empty());
  }
  CHECK(hexTotal == 1);
}

TEST_CASE("pyramids: minimal quadrilateral ones split into two tetrahedra") {
  const auto fs = atoms();
  for (size_t i = 0; i < fs.size(); ++i) {
    Workspace w = enumerate_quasicoxeter_tetrahedra(fs[i], 64, (int)i);
    enumerate_pyramids(w, 64);
    const auto twoTet = two_tet_pyr4_records(w);
    const auto p4 = w.of_shape(ShapeKind::Pyramid4);
    REQUIRE(!p4.empty());
    int kmin = w.entries[p4[0]].poly.tiles;
    for (int p : p4) kmin = std::min(kmin, w.entries[p].poly.tiles);
    for (int p : p4)
      if (w.entries[p].poly.tiles == kmin)
        CHECK(twoTet.count(w.entries[p].record) == 1);
  }
}

TEST_CASE("pyramids: some lateral edge is non-fundamental") {
  const auto fs = atoms();
  for (size_t i = 0; i < fs.size(); ++i) {
    Workspace w = enumerate_quasicoxeter_tetrahedra(fs[i], 64, (int)i);
    enumerate_pyramids(w, 64);
    for (const auto& e : w.entries) {
      const int base = pyramid_base(e.shape);
      if (base == 0 || e.poly.tiles <= 1) continue;
      bool nonFund = false;
      for (int b = 1; b <= base; ++b)
        nonFund |= !is_fundamental(e.poly.frac(e.lab.tverts[0], e.lab.tverts[b]));
      CHECK(nonFund);
    }
  }
}

TEST_CASE("prisms into tetrahedra: level grading") {
  const auto fs = atoms();
  const std::vector<std::vector<size_t>> levels{
      {6, 4, 0}, {9, 3, 0}, {11, 17, 5, 0}, {3, 4, 1, 0}, {2, 2, 0},
      {2, 2, 0}, {1, 0},    {1, 0},         {1, 0}};
  for (size_t i = 0; i < fs.size(); ++i) {
    PrismLevelsResult pr;
    Workspace w = pipeline(fs[i], (int)i, &pr);
    CHECK(!pr.exceeded);
    REQUIRE(pr.levels.size() == levels[i].size());
    CHECK(pr.levels.size() <= 9);  // empty level reached within the bound
    CHECK(pr.levels.back().empty());
    for (size_t l = 0; l < levels[i].size(); ++l)
      CHECK(pr.levels[l].size() == levels[i][l]);

    // Level 0 assembles three tetrahedral parts: a pyramid that splits into
    // two catalog tetrahedra, glued with a third one.
    const auto twoTet = two_tet_pyr4_records(w);
    for (int idx : pr.levels[0]) {
      const auto& e = w.entries[idx];
      CHECK(w.entries[e.prov.left].shape == ShapeKind::Pyramid4);
      CHECK(twoTet.count(w.entries[e.prov.left].record) == 1);
      CHECK(w.entries[e.prov.right].shape == ShapeKind::Tetrahedron);
    }
    // Every prism keeps a non-fundamental dihedral.
    for (const auto& e : w.entries) {
      if (e.shape != ShapeKind::TriangularPrism) continue;
      bool nonFund = false;
      for (const auto& [edge, f] : e.poly.fracs) nonFund |= !is_fundamental(f);
      CHECK(nonFund);
    }
  }
}

TEST_CASE("closure is saturated: a full unrestricted sweep adds nothing") {
  const auto fs = atoms();
  const std::vector<size_t> totals{23, 30, 57, 17, 7, 7, 3, 4, 3};
  for (size_t i = 0; i < fs.size(); ++i) {
    Workspace w = pipeline(fs[i], (int)i);
    CHECK(w.entries.size() == totals[i]);
    detail::closure(
        w, 64, [](const CatalogEntry&, const CatalogEntry&) { return true; },
        [](ShapeKind) { return true; });
    CHECK(w.entries.size() == totals[i]);
  }
}

TEST_CASE("provenance: tiles add, depth is one over the deeper parent") {
  const auto fs = atoms();
  for (size_t i = 0; i < fs.size(); ++i) {
    Workspace w = pipeline(fs[i], (int)i);
    for (const auto& e : w.entries) {
      if (e.prov.left < 0) {
        CHECK(e.poly.tiles == 1);
        CHECK(e.poly.depth == 0);
        continue;
      }
      const auto& a = w.entries[e.prov.left];
      const auto& b = w.entries[e.prov.right];
      CHECK(e.poly.tiles == a.poly.tiles + b.poly.tiles);
      CHECK(e.poly.depth == 1 + std::max(a.poly.depth, b.poly.depth));
    }
  }
}

TEST_CASE("enumeration is deterministic") {
  const auto fs = atoms();
  Workspace a = pipeline(fs[2], 2);
  Workspace b = pipeline(fs[2], 2);
  REQUIRE(a.entries.size() == b.entries.size());
  for (size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].record == b.entries[i].record);
    CHECK(a.entries[i].shape == b.entries[i].shape);
    CHECK(a.entries[i].level == b.entries[i].level);
  }
}

TEST_CASE("superposition detection") {
  const auto fs = atoms();
  const std::vector<int> stars{14, 12, 34, 4, 0, 0, 0, 0, 0};
  for (size_t i = 0; i < fs.size(); ++i) {
    Workspace w = pipeline(fs[i], (int)i);
    int n = 0;
    for (size_t e = 0; e < w.entries.size(); ++e) {
      const bool s = detect_superposition(w, (int)e);
      if (w.entries[e].poly.tiles <= 2) CHECK(!s);
      n += s;
    }
    CHECK(n == stars[i]);
  }
}
