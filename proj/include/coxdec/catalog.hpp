#pragma once

// Catalog persistence and table rendering.  The JSON layout is byte-stable:
// ordered keys, integer-only values, fixed indentation, and an FNV-1a
// checksum over the checksum-free serialization, so identical runs produce
// identical files and a round trip reproduces the input byte for byte.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxdec/enumerate.hpp"
#include "coxdec/schemes.hpp"

namespace coxdec {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "coxdec 1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 20260826ULL;

// Table grouping of a row: tetrahedron column, the pyramid column's dotted
// subgroups, and the prism column.
enum class RowGroup {
  Tetra = 0,
  Pyr4TwoTet = 1,
  Pyr4Rest = 2,
  Pyr5 = 3,
  Pyr6 = 4,
  Pyr7 = 5,
  Prism = 6,
};

inline int row_column(RowGroup g) {
  if (g == RowGroup::Tetra) return 0;
  return g == RowGroup::Prism ? 2 : 1;
}

struct CatalogRow {
  int fundamental = 0;                // atom index
  std::array<int, 6> fundLabels{};
  RowGroup group = RowGroup::Tetra;
  int t = 0;                          // serial, per fundamental and column
  std::string shape;
  std::string record;
  int k = 0, l = 0, level = -1;
  bool star = false;
  int left = -1, right = -1, faceLeft = 0, faceRight = 0;  // workspace ids
};

struct SchemeRow {
  int baseTiles = 1, layers = 1;
  std::array<int, 9> fundLabels{};
  std::string record;                 // target decoration, prism slot order
  std::array<int, 3> cornerParts{}, edgeSplits{};
};

struct CatalogFile {
  std::string tool = kToolVersion;
  SearchConfig config;
  std::uint64_t seed = kDefaultSeed;
  std::vector<CatalogRow> rows;
  std::vector<SchemeRow> schemes;
};

namespace catdetail {

inline std::string prism_fraction_record(const std::array<AngleFraction, 9>& f) {
  std::string out = "(";
  for (int s = 0; s < 9; ++s) {
    out += to_string(f[s]);
    if (s == 2 || s == 3 || s == 5) out += ';';
    else if (s < 8) out += ',';
  }
  return out + ")";
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace catdetail

// Which enumerations a shape filter asks for.
inline bool shape_filter_valid(const std::string& s) {
  static const std::set<std::string> ok{"tetra",           "pyr4",
                                        "pyr5",            "pyr6",
                                        "pyr7",            "prism-into-tetra",
                                        "prism-into-prism", "all"};
  return ok.count(s) > 0;
}

inline bool group_selected(RowGroup g, const std::string& filter) {
  if (filter == "all") return true;
  switch (g) {
    case RowGroup::Tetra: return filter == "tetra";
    case RowGroup::Pyr4TwoTet:
    case RowGroup::Pyr4Rest: return filter == "pyr4";
    case RowGroup::Pyr5: return filter == "pyr5";
    case RowGroup::Pyr6: return filter == "pyr6";
    case RowGroup::Pyr7: return filter == "pyr7";
    case RowGroup::Prism: return filter == "prism-into-tetra";
  }
  return false;
}

struct BuildResult {
  CatalogFile file;
  bool levelExceeded = false;
};

// Runs the engine and flattens the result.  fundamental < 0 means all atoms;
// the prism-into-prism schemes are global (their fundamental is a prism) and
// are included only for the unfiltered fundamental selection.
inline BuildResult build_catalog(const std::string& shapeFilter,
                                 int fundamental, const SearchConfig& cfg,
                                 std::uint64_t seed = kDefaultSeed) {
  BuildResult out;
  out.file.config = cfg;
  out.file.seed = seed;
  const auto atoms = enumerate_fundamental_tetrahedra(cfg.labelBound);

  const bool wantTetraFam = shapeFilter != "prism-into-prism";
  if (wantTetraFam)
    for (int fi = 0; fi < static_cast<int>(atoms.size()); ++fi) {
      if (fundamental >= 0 && fi != fundamental) continue;
      Workspace w = enumerate_quasicoxeter_tetrahedra(atoms[fi], cfg.maxTiles, fi);
      enumerate_pyramids(w, cfg.maxTiles);
      auto pr = enumerate_prisms_into_tetrahedra(w, cfg);
      out.levelExceeded |= pr.exceeded;

      // Quadrilateral pyramids obtainable from two catalog tetrahedra, for
      // the dotted-line subgrouping.
      std::set<std::string> twoTet;
      {
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
                  twoTet.insert(
                      canonical_record(d, cls->first, cls->second).first);
                },
                3);
          }
      }

      auto groupOf = [&](const CatalogEntry& e) -> std::optional<RowGroup> {
        switch (e.shape) {
          case ShapeKind::Tetrahedron:
            return e.poly.tiles > 1 ? std::optional(RowGroup::Tetra)
                                    : std::nullopt;
          case ShapeKind::Pyramid4:
            return twoTet.count(e.record) ? RowGroup::Pyr4TwoTet
                                          : RowGroup::Pyr4Rest;
          case ShapeKind::Pyramid5: return RowGroup::Pyr5;
          case ShapeKind::Pyramid6: return RowGroup::Pyr6;
          case ShapeKind::Pyramid7: return RowGroup::Pyr7;
          case ShapeKind::TriangularPrism: return RowGroup::Prism;
          default: return std::nullopt;
        }
      };

      // Table order: column by column, dotted subgroups in order, workspace
      // order inside a subgroup.  Serials restart per fundamental and column.
      std::array<int, 3> serial{0, 0, 0};
      for (RowGroup g :
           {RowGroup::Tetra, RowGroup::Pyr4TwoTet, RowGroup::Pyr4Rest,
            RowGroup::Pyr5, RowGroup::Pyr6, RowGroup::Pyr7, RowGroup::Prism})
        for (size_t e = 0; e < w.entries.size(); ++e) {
          const auto ge = groupOf(w.entries[e]);
          if (!ge || *ge != g) continue;
          const int col = row_column(g);
          ++serial[col];
          if (!group_selected(g, shapeFilter)) continue;
          CatalogRow r;
          r.fundamental = fi;
          r.fundLabels = atoms[fi].labels;
          r.group = g;
          r.t = serial[col];
          r.shape = shape_name(w.entries[e].shape);
          r.record = w.entries[e].record;
          r.k = w.entries[e].poly.tiles;
          r.l = w.entries[e].poly.depth;
          r.level = w.entries[e].level;
          r.star = detect_superposition(w, static_cast<int>(e));
          r.left = w.entries[e].prov.left;
          r.right = w.entries[e].prov.right;
          r.faceLeft = w.entries[e].prov.faceLeft;
          r.faceRight = w.entries[e].prov.faceRight;
          out.file.rows.push_back(std::move(r));
        }
    }

  if ((shapeFilter == "all" || shapeFilter == "prism-into-prism") &&
      fundamental < 0)
    for (const auto& s : enumerate_prisms_into_prisms()) {
      SchemeRow r;
      r.baseTiles = s.baseTiles;
      r.layers = s.layers;
      r.fundLabels = s.fund.labels;
      r.record = catdetail::prism_fraction_record(s.target);
      r.cornerParts = s.cornerParts;
      r.edgeSplits = s.edgeSplits;
      out.file.schemes.push_back(std::move(r));
    }
  return out;
}

inline ojson catalog_to_json(const CatalogFile& c) {
  ojson j;
  j["tool"] = c.tool;
  j["config"] = {{"max_tiles", c.config.maxTiles},
                 {"max_level", c.config.maxLevel},
                 {"label_bound", c.config.labelBound}};
  j["seed"] = c.seed;
  j["entries"] = ojson::array();
  for (const auto& r : c.rows)
    j["entries"].push_back(ojson{{"fundamental", r.fundamental},
                                 {"fund_labels", r.fundLabels},
                                 {"group", static_cast<int>(r.group)},
                                 {"t", r.t},
                                 {"shape", r.shape},
                                 {"record", r.record},
                                 {"k", r.k},
                                 {"l", r.l},
                                 {"level", r.level},
                                 {"star", r.star},
                                 {"left", r.left},
                                 {"right", r.right},
                                 {"face_left", r.faceLeft},
                                 {"face_right", r.faceRight}});
  j["schemes"] = ojson::array();
  for (const auto& s : c.schemes)
    j["schemes"].push_back(ojson{{"base_tiles", s.baseTiles},
                                 {"layers", s.layers},
                                 {"fund_labels", s.fundLabels},
                                 {"record", s.record},
                                 {"corner_parts", s.cornerParts},
                                 {"edge_splits", s.edgeSplits}});
  return j;
}

inline std::string serialize_catalog(const CatalogFile& c) {
  ojson j = catalog_to_json(c);
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(catdetail::fnv1a(j.dump(1))));
  j["checksum"] = buf;
  return j.dump(1) + "\n";
}

struct ParsedCatalog {
  CatalogFile file;
  bool checksumOk = false;
};

inline std::optional<ParsedCatalog> parse_catalog(const std::string& text) {
  ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  ParsedCatalog out;
  try {
    CatalogFile& c = out.file;
    c.tool = j.at("tool").get<std::string>();
    c.config.maxTiles = j.at("config").at("max_tiles").get<int>();
    c.config.maxLevel = j.at("config").at("max_level").get<int>();
    c.config.labelBound = j.at("config").at("label_bound").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("entries")) {
      CatalogRow r;
      r.fundamental = e.at("fundamental").get<int>();
      r.fundLabels = e.at("fund_labels").get<std::array<int, 6>>();
      r.group = static_cast<RowGroup>(e.at("group").get<int>());
      r.t = e.at("t").get<int>();
      r.shape = e.at("shape").get<std::string>();
      r.record = e.at("record").get<std::string>();
      r.k = e.at("k").get<int>();
      r.l = e.at("l").get<int>();
      r.level = e.at("level").get<int>();
      r.star = e.at("star").get<bool>();
      r.left = e.at("left").get<int>();
      r.right = e.at("right").get<int>();
      r.faceLeft = e.at("face_left").get<int>();
      r.faceRight = e.at("face_right").get<int>();
      c.rows.push_back(std::move(r));
    }
    for (const auto& e : j.at("schemes")) {
      SchemeRow s;
      s.baseTiles = e.at("base_tiles").get<int>();
      s.layers = e.at("layers").get<int>();
      s.fundLabels = e.at("fund_labels").get<std::array<int, 9>>();
      s.record = e.at("record").get<std::string>();
      s.cornerParts = e.at("corner_parts").get<std::array<int, 3>>();
      s.edgeSplits = e.at("edge_splits").get<std::array<int, 3>>();
      c.schemes.push_back(std::move(s));
    }
    // Recompute the checksum over the checksum-free serialization.
    const std::string claimed = j.value("checksum", std::string{});
    j.erase("checksum");
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                  static_cast<unsigned long long>(catdetail::fnv1a(j.dump(1))));
    out.checksumOk = (claimed == buf);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  return out;
}

inline std::string catalog_to_csv(const CatalogFile& c) {
  std::ostringstream os;
  os << "fundamental,fund_labels,shape,t,record,k,l,level,star,left,right,"
        "face_left,face_right\n";
  auto labels = [](const auto& a) {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i)
      s += (i ? "-" : "") + std::to_string(a[i]);
    return s;
  };
  for (const auto& r : c.rows)
    os << r.fundamental << ',' << labels(r.fundLabels) << ',' << r.shape << ','
       << r.t << ',' << '"' << r.record << '"' << ',' << r.k << ',' << r.l
       << ',' << r.level << ',' << (r.star ? 1 : 0) << ',' << r.left << ','
       << r.right << ',' << r.faceLeft << ',' << r.faceRight << '\n';
  for (const auto& s : c.schemes)
    os << "-1," << labels(s.fundLabels) << ",prism-into-prism,0," << '"'
       << s.record << '"' << ',' << s.baseTiles * s.layers
       << ",-1,-1,0,-1,-1,0,0\n";
  return os.str();
}

// Three-column table, one block per fundamental tetrahedron, with dotted
// separators between the pyramid subgroups and '*' marking superpositions.
inline std::string render_tables(const CatalogFile& c) {
  std::ostringstream os;
  std::vector<int> funds;
  for (const auto& r : c.rows)
    if (funds.empty() || funds.back() != r.fundamental)
      funds.push_back(r.fundamental);

  for (int fi : funds) {
    std::array<int, 6> lab{};
    for (const auto& r : c.rows)
      if (r.fundamental == fi) lab = r.fundLabels;
    os << "F" << fi << " = (";
    for (int i = 0; i < 6; ++i) os << lab[i] << (i < 5 ? "," : ")");
    os << "\n";

    std::array<std::vector<std::string>, 3> col;
    RowGroup prevPyr = RowGroup::Pyr4TwoTet;
    bool pyrSeen = false;
    for (const auto& r : c.rows) {
      if (r.fundamental != fi) continue;
      const int ci = row_column(r.group);
      if (ci == 1) {
        if (pyrSeen && r.group != prevPyr) col[1].push_back(". . . . .");
        prevPyr = r.group;
        pyrSeen = true;
      }
      std::ostringstream line;
      line << r.t << (r.star ? "*" : "") << " " << r.record;
      col[ci].push_back(line.str());
      std::ostringstream prov;
      prov << "   (k=" << r.k << ", l=" << r.l << ", m=" << r.left
           << ", n=" << r.right << ", p=" << r.faceLeft << ", q=" << r.faceRight
           << ")";
      col[ci].push_back(prov.str());
    }
    std::array<size_t, 3> width{};
    const std::array<std::string, 3> title{"tetrahedra", "pyramids", "prisms"};
    for (int ci = 0; ci < 3; ++ci) {
      width[ci] = title[ci].size();
      for (const auto& s : col[ci]) width[ci] = std::max(width[ci], s.size());
    }
    auto pad = [](const std::string& s, size_t w) {
      return s + std::string(w - s.size(), ' ');
    };
    os << pad(title[0], width[0]) << " | " << pad(title[1], width[1]) << " | "
       << title[2] << "\n";
    os << std::string(width[0] + width[1] + title[2].size() + 6, '-') << "\n";
    const size_t rows = std::max({col[0].size(), col[1].size(), col[2].size()});
    for (size_t i = 0; i < rows; ++i) {
      auto cell = [&](int ci) {
        return i < col[ci].size() ? col[ci][i] : std::string{};
      };
      os << pad(cell(0), width[0]) << " | " << pad(cell(1), width[1]) << " | "
         << cell(2) << "\n";
    }
    os << "\n";
  }

  if (!c.schemes.empty()) {
    os << "prisms into prisms\n------------------\n";
    for (size_t i = 0; i < c.schemes.size(); ++i) {
      const auto& s = c.schemes[i];
      os << (i + 1) << " " << s.record << "\n   (k=" << s.baseTiles * s.layers
         << ", base=" << s.baseTiles << ", layers=" << s.layers << ", F=(";
      for (int q = 0; q < 9; ++q) os << s.fundLabels[q] << (q < 8 ? "," : "))");
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace coxdec
