// Acceptance gate: one line per criterion.  Exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "coxdec/catalog.hpp"
#include "coxdec/verify.hpp"

using namespace coxdec;

namespace {

int failures = 0;

void report(int n, bool pass, const char* what) {
  std::printf("criterion %2d: %s  %s\n", n, pass ? "PASS" : "FAIL", what);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Workspace pipeline(const CoxeterTetrahedron& f, int id,
                   PrismLevelsResult* pr = nullptr) {
  Workspace w = enumerate_quasicoxeter_tetrahedra(f, 64, id);
  enumerate_pyramids(w, 64);
  SearchConfig cfg;
  auto r = enumerate_prisms_into_tetrahedra(w, cfg);
  if (pr) *pr = std::move(r);
  return w;
}

std::set<std::string> two_tet_pyr4(const Workspace& w) {
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
            if (cls && cls->first == ShapeKind::Pyramid4)
              out.insert(canonical_record(d, cls->first, cls->second).first);
          },
          3);
    }
  return out;
}

}  // namespace

int main() {
  // 1. Fundamental atoms: saturation at label bound 5, nine atoms, < 1 s.
  {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a5 = enumerate_fundamental_tetrahedra(5);
    const auto a10 = enumerate_fundamental_tetrahedra(10);
    bool same = a5.size() == a10.size() && a5.size() == 9;
    for (size_t i = 0; same && i < a5.size(); ++i)
      same = a5[i].labels == a10[i].labels;
    report(1, same && seconds_since(t0) < 1.0,
           "nine fundamental tetrahedra, label bound saturates at 5, < 1 s");
  }

  const auto atoms = enumerate_fundamental_tetrahedra(5);
  std::vector<Workspace> ws;
  std::vector<PrismLevelsResult> prs(atoms.size());
  const auto tAll = std::chrono::steady_clock::now();
  for (size_t i = 0; i < atoms.size(); ++i)
    ws.push_back(pipeline(atoms[i], (int)i, &prs[i]));
  const double enumSecs = seconds_since(tAll);

  // 2. No heptagonal pyramid, full search < 5 min.
  {
    size_t n = 0;
    for (const auto& w : ws) n += w.of_shape(ShapeKind::Pyramid7).size();
    report(2, n == 0 && enumSecs < 300.0,
           "no heptagonal pyramid at tile bound 64, < 5 min");
  }

  // 3. Exactly one hexagonal pyramid across all atoms.
  {
    size_t n = 0;
    for (const auto& w : ws) n += w.of_shape(ShapeKind::Pyramid6).size();
    report(3, n == 1, "exactly one hexagonal pyramid");
  }

  // 4. Minimal quadrilateral pyramids split into two tetrahedral parts.
  {
    bool ok = true;
    for (const auto& w : ws) {
      const auto twoTet = two_tet_pyr4(w);
      const auto p4 = w.of_shape(ShapeKind::Pyramid4);
      if (p4.empty()) {
        ok = false;
        continue;
      }
      int kmin = w.entries[p4[0]].poly.tiles;
      for (int p : p4) kmin = std::min(kmin, w.entries[p].poly.tiles);
      for (int p : p4)
        if (w.entries[p].poly.tiles == kmin && !twoTet.count(w.entries[p].record))
          ok = false;
    }
    report(4, ok, "every minimal quadrilateral pyramid is two tetrahedra");
  }

  // 5. Prism levels terminate by level 8; every prism keeps a
  //    non-fundamental dihedral.
  {
    bool ok = true;
    for (size_t i = 0; i < ws.size(); ++i) {
      if (prs[i].exceeded || prs[i].levels.empty() ||
          !prs[i].levels.back().empty() || prs[i].levels.size() > 9)
        ok = false;
      for (const auto& e : ws[i].entries) {
        if (e.shape != ShapeKind::TriangularPrism) continue;
        bool nf = false;
        for (const auto& [key, f] : e.poly.fracs) nf |= !is_fundamental(f);
        ok = ok && nf;
      }
    }
    report(5, ok, "prism search empties by level 8; prisms keep a "
                  "non-fundamental dihedral");
  }

  // 6. Level-0 prisms assemble from three tetrahedral parts.
  {
    bool ok = true;
    for (size_t i = 0; i < ws.size(); ++i) {
      const auto twoTet = two_tet_pyr4(ws[i]);
      for (int idx : prs[i].levels[0]) {
        const auto& e = ws[i].entries[idx];
        ok = ok && e.prov.left >= 0 &&
             ws[i].entries[e.prov.left].shape == ShapeKind::Pyramid4 &&
             twoTet.count(ws[i].entries[e.prov.left].record) == 1 &&
             ws[i].entries[e.prov.right].shape == ShapeKind::Tetrahedron;
      }
    }
    report(6, ok, "every level-0 prism is three tetrahedra");
  }

  // 7. Prism-into-prism schemes: 1 fundamental-bases + 2 patterns x 2 layer
  //    variants = 5.
  {
    const auto schemes = enumerate_prisms_into_prisms();
    int trivial = 0;
    std::set<std::pair<std::array<int, 3>, std::array<int, 3>>> patterns;
    for (const auto& s : schemes) {
      if (s.baseTiles == 1) ++trivial;
      else patterns.insert({s.cornerParts, s.edgeSplits});
    }
    report(7,
           schemes.size() == 5 && trivial == 1 && patterns.size() == 2 &&
               schemes.size() - trivial == 2 * patterns.size(),
           "five prism-into-prism schemes: 1 fundamental-bases + 2x2");
  }

  // 8. Geometric soundness: every entry verifies; every 3-sigma volume
  //    interval contains k at a million samples.
  {
    bool ok = true;
    double residual = 0, perEntry = 0;
    for (const auto& w : ws)
      for (size_t e = 0; e < w.entries.size(); ++e) {
        const auto rep = verify_decomposition(w, (int)e);
        ok = ok && rep.ok();
        residual = std::max({residual, rep.mirror_residual,
                             rep.dihedral_residual, rep.inside_residual});
        const auto t0 = std::chrono::steady_clock::now();
        const auto vol = volume_ratio_check(w, (int)e, 1000000);
        perEntry = std::max(perEntry, seconds_since(t0));
        ok = ok && vol.ok && link_check(w, (int)e);
      }
    ok = ok && residual <= 1e-8 && perEntry < 1.0;
    char msg[96];
    std::snprintf(msg, sizeof msg,
                  "all entries verify (max residual %.2e), volume intervals "
                  "hold", residual);
    report(8, ok, msg);
  }

  // 9. Property spot checks (the full randomized suites run under ctest):
  //    merge laws, reflection involution, canonical idempotence.
  {
    bool ok = true;
    for (int d1 = 2; d1 <= 12; ++d1)
      for (int p1 = 1; p1 <= 11; ++p1)
        for (int d2 = 2; d2 <= 12; ++d2)
          for (int p2 = 1; p2 <= 11; ++p2) {
            const AngleFraction a{p1, d1}, b{p2, d2};
            if (!(merge(a, b) == merge(b, a))) ok = false;
          }
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int s = 0; s < 10000 && ok; ++s) {
      Vec4 x, e;
      for (int c = 0; c < 4; ++c) {
        x[c] = g(rng);
        e[c] = g(rng);
      }
      // A unit spacelike mirror normal, kept away from the light cone.
      e[3] = u(rng) * e.head<3>().norm();
      e /= std::sqrt(mdot(e, e));
      if ((reflect(reflect(x, e), e) - x).cwiseAbs().maxCoeff() > 1e-10)
        ok = false;
      if (std::abs(mdot(reflect(x, e), reflect(x, e)) - mdot(x, x)) > 1e-10)
        ok = false;
    }
    for (const auto& w : ws)
      for (const auto& e : w.entries) {
        auto cls = classify_shape(e.poly);
        if (!cls || canonical_record(e.poly, cls->first, cls->second).first !=
                        e.record)
          ok = false;
      }
    report(9, ok, "merge laws, reflection involution, canonical idempotence");
  }

  // 10. Determinism: two full catalog builds serialize byte-identically.
  {
    SearchConfig cfg;
    const std::string a = serialize_catalog(build_catalog("all", -1, cfg).file);
    const std::string b = serialize_catalog(build_catalog("all", -1, cfg).file);
    report(10, !a.empty() && a == b, "byte-identical catalogs across runs");
  }

  return failures == 0 ? 0 : 1;
}
