#include <set>
#include <vector>

#include "coxdec/prism.hpp"
#include <doctest.h>

using namespace coxdec;

namespace {

std::vector<CoxeterPrism> sweep_prefilter(const std::vector<int>& grid) {
  std::vector<CoxeterPrism> out;
  CoxeterPrism p;
  const size_t n = grid.size();
  std::array<size_t, 9> idx{};
  while (true) {
    for (int s = 0; s < 9; ++s) p.labels[s] = grid[idx[s]];
    if (andreev_prefilter_prism(p)) out.push_back(p);
    int s = 8;
    while (s >= 0 && ++idx[s] == n) idx[s--] = 0;
    if (s < 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("prefilter rejects flat and spherical configurations") {
  CoxeterPrism allRight;  // lateral circuit sums to 3*pi/2
  CHECK_FALSE(andreev_prefilter_prism(allRight));
  CoxeterPrism euclCircuit;  // lateral circuit sums to exactly pi
  euclCircuit.labels = {3, 3, 3, 2, 2, 2, 2, 2, 2};
  CHECK_FALSE(andreev_prefilter_prism(euclCircuit));
  CoxeterPrism hypCircuit = euclCircuit;
  hypCircuit.labels[0] = 4;  // now 1/4 + 1/3 + 1/3 < 1
  CHECK(andreev_prefilter_prism(hypCircuit));
  CoxeterPrism badVertex = hypCircuit;
  badVertex.labels[3] = 7;  // vertex A1 link (7, 2, 1/3-edge...) turns flat
  badVertex.labels[5] = 3;
  CHECK_FALSE(andreev_prefilter_prism(badVertex));
}

TEST_CASE("compact prisms exist, realize, and verify geometrically") {
  auto candidates = sweep_prefilter({2, 3, 4, 5});
  CHECK(candidates.size() > 0);
  std::set<std::array<int, 9>> realized;
  int checked = 0;
  for (const auto& p : candidates) {
    auto r = realize_prism(p);
    if (!r) continue;
    realized.insert(canonical_prism_labels(p).labels);
    if (++checked > 200) continue;  // geometric deep-checks on a sample
    CHECK(r->base_gram < -1.0);
    // Vertices on the upper sheet, pairwise distinct.
    for (const auto& v : r->vertices) {
      CHECK(mdot(v, v) == doctest::Approx(-1).epsilon(1e-9));
      CHECK(v[3] > 0);
    }
    for (size_t i = 0; i < r->vertices.size(); ++i)
      for (size_t j = i + 1; j < r->vertices.size(); ++j)
        CHECK(distance(r->vertices[i], r->vertices[j]) > 1e-6);
    // The decorated polyhedron classifies as a prism and its measured
    // dihedrals reproduce the labels.
    Decorated d = decorated_from_prism(p, *r, 0);
    auto cls = classify_shape(d);
    REQUIRE(cls.has_value());
    CHECK(cls->first == ShapeKind::TriangularPrism);
    for (int f = 0; f < 5; ++f)
      for (int h = f + 1; h < 5; ++h) {
        if (f == 0 && h == 1) {
          CHECK(mdot(r->normals[0], r->normals[1]) < -1.0);
          continue;
        }
        CHECK(dihedral_angle(r->normals[f], r->normals[h]) ==
              doctest::Approx(kPi / p.labels[prism_slot_of_faces(f, h)])
                  .epsilon(1e-8));
      }
  }
  CHECK(realized.size() > 0);
  MESSAGE("distinct realizable prisms (canonical, labels<=5): ",
          realized.size());
}

TEST_CASE("realization is deterministic") {
  auto candidates = sweep_prefilter({2, 3, 4, 5, 6});
  CoxeterPrism witness;
  bool found = false;
  for (const auto& p : candidates) {
    if (realize_prism(p)) {
      witness = p;
      found = true;
      break;
    }
  }
  REQUIRE(found);
  auto a = realize_prism(witness);
  auto b = realize_prism(witness);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->base_gram == b->base_gram);
  for (int f = 0; f < 5; ++f)
    CHECK((a->normals[f] - b->normals[f]).cwiseAbs().maxCoeff() == 0.0);
  for (int v = 0; v < 6; ++v)
    CHECK((a->vertices[v] - b->vertices[v]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("canonical prism labels are symmetry invariants") {
  const auto& tmpl = shape_template(ShapeKind::TriangularPrism);
  CoxeterPrism p;
  p.labels = {4, 3, 2, 2, 3, 2, 2, 2, 5};
  auto slot_of = [&](int u, int v) {
    for (size_t s = 0; s < tmpl.slots.size(); ++s)
      if (edge_key(tmpl.slots[s].first, tmpl.slots[s].second) ==
          edge_key(u, v))
        return static_cast<int>(s);
    return -1;
  };
  const auto canon = canonical_prism_labels(p);
  for (const auto& sigma : tmpl.autos) {
    CoxeterPrism q;
    for (size_t s = 0; s < tmpl.slots.size(); ++s) {
      auto [u, v] = tmpl.slots[s];
      q.labels[s] = p.labels[slot_of(sigma[u], sigma[v])];
    }
    CHECK(canonical_prism_labels(q).labels == canon.labels);
  }
}
