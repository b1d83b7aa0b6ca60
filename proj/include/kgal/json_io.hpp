#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kgal/algebra.hpp"
#include "kgal/classify.hpp"
#include "kgal/cohomology.hpp"
#include "kgal/common.hpp"
#include "kgal/datum.hpp"
#include "kgal/grading.hpp"
#include "kgal/group.hpp"
#include "kgal/obstructions.hpp"
#include "kgal/tower.hpp"
#include "kgal/version.hpp"

// JSON file formats for the external interfaces: groups, subgroups, field
// towers, construction data, built objects, and the report shapes the
// command-line tool emits.  Object and datum files are self-contained
// (they embed their group and tower), and serialization is deterministic:
// keys are emitted in sorted order, so equal values give equal bytes.

namespace kgal {

using Json = nlohmann::json;

namespace jio {

// ----- plumbing -----

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[(size_t)i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write file: " + path);
  out << text;
  if (!out) throw invalid_input("write failed: " + path);
}

// Parse with the error location preserved in the message.
inline Json parse_json(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw invalid_input(where + ": " + e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  return parse_json(read_file(path), path);
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline const Json& member(const Json& j, const char* key, const char* what) {
  if (!j.is_object())
    throw invalid_input(std::string(what) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw invalid_input(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

inline long to_int(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw invalid_input(std::string(what) + ": expected an integer");
  return j.get<long>();
}

inline std::vector<long> int_list(const Json& j, const char* what) {
  if (!j.is_array())
    throw invalid_input(std::string(what) + ": expected an array of integers");
  std::vector<long> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(to_int(e, what));
  return out;
}

// ----- groups and subgroups -----

inline Json group_to_json(const FiniteGroup& G) {
  Json rows = Json::array();
  for (int a = 0; a < G.n; ++a) {
    Json row = Json::array();
    for (int b = 0; b < G.n; ++b) row.push_back(G.mul(a, b));
    rows.push_back(std::move(row));
  }
  return Json{{"order", G.n}, {"table", rows}};
}

inline FiniteGroup group_from_json(const Json& j) {
  long n = to_int(member(j, "order", "group"), "group order");
  if (n < 1 || n > 4096) throw invalid_input("group: order out of range");
  const Json& rows = member(j, "table", "group");
  if (!rows.is_array() || (long)rows.size() != n)
    throw invalid_input("group: table must have one row per element");
  std::vector<int> flat;
  flat.reserve((size_t)n * n);
  for (const auto& row : rows) {
    std::vector<long> r = int_list(row, "group table row");
    if ((long)r.size() != n)
      throw invalid_input("group: table rows must have length order");
    for (long v : r) {
      if (v < 0 || v >= n) throw invalid_input("group: table entry out of range");
      flat.push_back((int)v);
    }
  }
  return group_from_table((int)n, std::move(flat));
}

inline Json subgroup_to_json(const Subgroup& S) {
  return Json{{"elements", S}};
}

// Accepts both the standalone shape {"elements": [...]} and a bare array,
// the form used inside datum files.
inline Subgroup subgroup_from_json(const Json& j, const char* what) {
  const Json& arr = j.is_object() ? member(j, "elements", what) : j;
  std::vector<long> v = int_list(arr, what);
  Subgroup out;
  out.reserve(v.size());
  for (long x : v) {
    if (x < 0) throw invalid_input(std::string(what) + ": negative element");
    out.push_back((int)x);
  }
  return out;
}

// ----- towers -----

inline Json tower_to_json(const FieldTower& K) {
  const TowerImpl& T = K.ref();
  if (T.finite_field)
    return Json{{"type", "finite"}, {"p", T.p}, {"n", T.n}, {"d", T.d}};
  return Json{{"type", "cyclotomic"}, {"m", T.m}, {"H", T.H}};
}

inline FieldTower tower_from_json(const Json& j) {
  const Json& ty = member(j, "type", "tower");
  if (!ty.is_string()) throw invalid_input("tower: type must be a string");
  std::string t = ty.get<std::string>();
  if (t == "cyclotomic") {
    long m = to_int(member(j, "m", "tower"), "tower m");
    std::vector<long> H = int_list(member(j, "H", "tower"), "tower H");
    return cyclotomic_tower(m, H);
  }
  if (t == "finite") {
    long p = to_int(member(j, "p", "tower"), "tower p");
    long n = to_int(member(j, "n", "tower"), "tower n");
    long d = to_int(member(j, "d", "tower"), "tower d");
    return finite_tower(p, n, d);
  }
  throw invalid_input("tower: unknown type \"" + t + "\"");
}

// ----- scalars -----

// A scalar is its coordinate vector in the power basis of K over the prime
// field: exact rational strings in characteristic zero, small integers in
// characteristic p.

inline Json scalar_to_json(const FieldTower& K, const Scalar& s) {
  const TowerImpl& T = K.ref();
  require(s.valid() && (long)s.c.size() == T.D, "scalar does not fit the tower");
  Json out = Json::array();
  if (T.char_p) {
    for (const auto& c : s.c)
      out.push_back(poly::reduce_coeff(c, T.char_p).get_num().get_si());
  } else {
    for (const auto& c : s.c) out.push_back(c.get_str());
  }
  return out;
}

inline Scalar scalar_from_json(const FieldTower& K, const Json& j) {
  const TowerImpl& T = K.ref();
  if (!j.is_array() || (long)j.size() != T.D)
    throw invalid_input("scalar: expected a coordinate vector of length " +
                        std::to_string(T.D));
  Coords c;
  c.reserve((size_t)T.D);
  for (const auto& e : j) {
    if (e.is_number_integer()) {
      c.emplace_back(e.get<long>());
    } else if (e.is_string() && T.char_p == 0) {
      bool ok = true;
      mpq_class q;
      try {
        q = mpq_class(e.get<std::string>(), 10);
      } catch (const std::exception&) {
        ok = false;
      }
      if (!ok || q.get_den() == 0)
        throw invalid_input("scalar: bad rational \"" + e.get<std::string>() +
                            "\"");
      q.canonicalize();
      c.push_back(std::move(q));
    } else {
      throw invalid_input("scalar: entries must be integers or rational strings");
    }
  }
  return Scalar{K.impl.get(), T.red_c(std::move(c))};
}

inline Json scalars_to_json(const FieldTower& K, const std::vector<Scalar>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(scalar_to_json(K, s));
  return out;
}

inline std::vector<Scalar> scalars_from_json(const FieldTower& K, const Json& j,
                                             size_t want, const char* what) {
  if (!j.is_array() || j.size() != want)
    throw invalid_input(std::string(what) + ": expected " +
                        std::to_string(want) + " scalars");
  std::vector<Scalar> out;
  out.reserve(want);
  for (const auto& e : j) out.push_back(scalar_from_json(K, e));
  return out;
}

// ----- exponent tables -----

// Exponent tables carry a modulus "m": an entry e stands for r^e with r
// the canonical primitive m-th root of the tower (generator^(index/m) in
// the cyclotomic case, the matching power of the designated generator in
// the finite case).  Internally all exponents run over the full designated
// torsion group, so loading rescales by the exponent of r.
inline long exponent_scale(const FieldTower& K, long mj, const char* what) {
  const long me = K.root_order();
  if (mj < 1) throw invalid_input(std::string(what) + ": modulus must be positive");
  if (mj == me) return 1;
  const TowerImpl& T = K.ref();
  if (!T.finite_field) {
    if (T.m % mj != 0)
      throw invalid_input(std::string(what) +
                          ": modulus does not divide the cyclotomic index");
    Scalar r = K.one();
    Scalar q = K.generator();
    for (long i = 0; i < T.m / mj; ++i) r = r * q;
    auto e = K.exponent_of(r);
    require(e.has_value(), "modulus root escapes the designated torsion");
    return *e;
  }
  if (me % mj != 0)
    throw invalid_input(std::string(what) +
                        ": modulus does not divide the unit group order");
  return me / mj;
}

inline Json cocycle_to_json(const Cochain& c) {
  require(c.degree == 2, "only degree 2 tables are serialized");
  Json rows = Json::array();
  for (int x = 0; x < c.n; ++x) {
    Json row = Json::array();
    for (int y = 0; y < c.n; ++y) row.push_back(c.at(x, y));
    rows.push_back(std::move(row));
  }
  return Json{{"m", c.mod}, {"table", rows}};
}

inline Cochain cocycle_from_json(const Json& j, const FieldTower& K) {
  long mj = to_int(member(j, "m", "cocycle"), "cocycle m");
  long t = exponent_scale(K, mj, "cocycle");
  const Json& rows = member(j, "table", "cocycle");
  if (!rows.is_array() || rows.empty())
    throw invalid_input("cocycle: table must be a nonempty square matrix");
  int n = (int)rows.size();
  Cochain c = zero_cochain(2, n, K.root_order());
  for (int x = 0; x < n; ++x) {
    std::vector<long> r = int_list(rows[(size_t)x], "cocycle row");
    if ((int)r.size() != n)
      throw invalid_input("cocycle: table must be square");
    for (int y = 0; y < n; ++y)
      c.ref(x, y) = zdetail::pos(zdetail::pos(r[(size_t)y], mj) * t, c.mod);
  }
  return c;
}

inline Json gamma_to_json(const std::vector<long>& gamma, int nS, int nN,
                          long m) {
  require((int)gamma.size() == nS * nN, "gamma table has the wrong size");
  Json rows = Json::array();
  for (int s = 0; s < nS; ++s) {
    Json row = Json::array();
    for (int x = 0; x < nN; ++x) row.push_back(gamma[(size_t)s * nN + x]);
    rows.push_back(std::move(row));
  }
  return Json{{"m", m}, {"table", rows}};
}

inline std::vector<long> gamma_from_json(const Json& j, const FieldTower& K,
                                         int nS, int nN) {
  long mj = j.is_object() && j.contains("m")
                ? to_int(member(j, "m", "gamma"), "gamma m")
                : K.root_order();
  long t = exponent_scale(K, mj, "gamma");
  const Json& rows = member(j, "table", "gamma");
  if (!rows.is_array() || (int)rows.size() != nS)
    throw invalid_input("gamma: table must have one row per element of S");
  std::vector<long> out((size_t)nS * nN, 0);
  for (int s = 0; s < nS; ++s) {
    std::vector<long> r = int_list(rows[(size_t)s], "gamma row");
    if ((int)r.size() != nN)
      throw invalid_input("gamma: rows must have one entry per element of N");
    for (int x = 0; x < nN; ++x)
      out[(size_t)s * nN + x] =
          zdetail::pos(zdetail::pos(r[(size_t)x], mj) * t, K.root_order());
  }
  return out;
}

// ----- data -----

inline Json datum_to_json(const GaloisDatum& d) {
  Json out;
  out["group"] = group_to_json(d.G);
  out["S"] = d.S;
  out["N"] = d.N;
  out["tower"] = tower_to_json(d.K);
  out["iso"] = d.gal_of;
  out["sigma"] = cocycle_to_json(d.sigma);
  if (!d.gamma.empty())
    out["gamma"] = gamma_to_json(d.gamma, (int)d.S.size(), (int)d.N.size(),
                                 d.K.root_order());
  return out;
}

// With allow_partial the gamma table may be absent: the result is the
// partial datum handed to solve_gamma and the obstruction pipeline.
inline GaloisDatum datum_from_json(const Json& j, bool allow_partial = false) {
  GaloisDatum d;
  d.G = group_from_json(member(j, "group", "datum"));
  d.K = tower_from_json(member(j, "tower", "datum"));
  d.S = subgroup_from_json(member(j, "S", "datum"), "datum S");
  d.N = subgroup_from_json(member(j, "N", "datum"), "datum N");
  for (int x : d.S)
    if (x >= d.G.n) throw invalid_input("datum S: element out of range");
  for (int x : d.N)
    if (x >= d.G.n) throw invalid_input("datum N: element out of range");
  std::vector<long> iso = int_list(member(j, "iso", "datum"), "datum iso");
  if (iso.size() != d.S.size())
    throw invalid_input("datum iso: one label per element of S required");
  const int ng = d.K.galois_group().n;
  for (long v : iso) {
    if (v < 0 || v >= ng)
      throw invalid_input("datum iso: label outside the Galois group");
    d.gal_of.push_back((int)v);
  }
  d.sigma = cocycle_from_json(member(j, "sigma", "datum"), d.K);
  if (d.sigma.n != (int)d.N.size())
    throw invalid_input("datum sigma: table size must match N");
  if (!allow_partial || j.contains("gamma"))
    d.gamma = gamma_from_json(member(j, "gamma", "datum"), d.K, (int)d.S.size(),
                              (int)d.N.size());
  return d;
}

// ----- built objects -----

// Object files embed the group, the tower, the unit, and (when present)
// the field presentation, so a file round-trips to a working algebra with
// no side inputs.

inline Json algebra_to_json(const EquivariantAlgebra& A) {
  Json out;
  out["group"] = group_to_json(A.G);
  out["tower"] = tower_to_json(A.K);
  out["dim"] = A.dim;
  Json structure = Json::array();
  for (int i = 0; i < A.dim; ++i) {
    Json row = Json::array();
    for (int k = 0; k < A.dim; ++k) {
      std::vector<Scalar> v = A.zero_vec();
      for (const auto& [r, sc] : A.mult[(size_t)i * A.dim + k]) v[(size_t)r] = sc;
      row.push_back(scalars_to_json(A.K, v));
    }
    structure.push_back(std::move(row));
  }
  out["structure"] = std::move(structure);
  Json action = Json::object();
  for (int g = 0; g < A.G.n; ++g) {
    Json cols = Json::array();
    for (int k = 0; k < A.dim; ++k) {
      std::vector<Scalar> v = A.zero_vec();
      for (const auto& [r, sc] : A.act[(size_t)g][(size_t)k]) v[(size_t)r] = sc;
      cols.push_back(scalars_to_json(A.K, v));
    }
    action[std::to_string(g)] = std::move(cols);
  }
  out["action"] = std::move(action);
  out["unit"] = scalars_to_json(A.K, A.unit);
  if (A.kpres.has_value()) {
    Json emb = Json::array();
    for (const auto& col : A.kpres->embed)
      emb.push_back(scalars_to_json(A.K, col));
    out["field_embedding"] = std::move(emb);
  }
  return out;
}

inline EquivariantAlgebra algebra_from_json(const Json& j) {
  EquivariantAlgebra A;
  A.G = group_from_json(member(j, "group", "object"));
  A.K = tower_from_json(member(j, "tower", "object"));
  long dim = to_int(member(j, "dim", "object"), "object dim");
  if (dim < 1 || dim > 4096) throw invalid_input("object: dim out of range");
  A.dim = (int)dim;
  auto sparse_of = [&](const std::vector<Scalar>& v) {
    SparseVec sv;
    ScalarFieldOps F = A.K.ops();
    for (int r = 0; r < A.dim; ++r)
      if (!F.is_zero(v[(size_t)r])) sv.push_back({r, v[(size_t)r]});
    return sv;
  };
  const Json& structure = member(j, "structure", "object");
  if (!structure.is_array() || (long)structure.size() != dim)
    throw invalid_input("object: structure must have dim rows");
  A.mult.resize((size_t)dim * dim);
  for (int i = 0; i < A.dim; ++i) {
    const Json& row = structure[(size_t)i];
    if (!row.is_array() || (long)row.size() != dim)
      throw invalid_input("object: structure rows must have dim entries");
    for (int k = 0; k < A.dim; ++k)
      A.mult[(size_t)i * A.dim + k] = sparse_of(
          scalars_from_json(A.K, row[(size_t)k], (size_t)dim, "object product"));
  }
  const Json& action = member(j, "action", "object");
  if (!action.is_object())
    throw invalid_input("object: action must map group elements to matrices");
  A.act.resize((size_t)A.G.n);
  for (int g = 0; g < A.G.n; ++g) {
    auto it = action.find(std::to_string(g));
    if (it == action.end())
      throw invalid_input("object: action missing element " + std::to_string(g));
    const Json& cols = *it;
    if (!cols.is_array() || (long)cols.size() != dim)
      throw invalid_input("object: action matrices must have dim columns");
    A.act[(size_t)g].resize((size_t)dim);
    for (int k = 0; k < A.dim; ++k)
      A.act[(size_t)g][(size_t)k] = sparse_of(
          scalars_from_json(A.K, cols[(size_t)k], (size_t)dim, "object action"));
  }
  A.unit = scalars_from_json(A.K, member(j, "unit", "object"), (size_t)dim,
                             "object unit");
  if (j.contains("field_embedding")) {
    const Json& emb = j["field_embedding"];
    const long Kk = A.K.K_over_k();
    if (!emb.is_array() || (long)emb.size() != Kk)
      throw invalid_input("object: field embedding must have one column per "
                          "basis element of the field");
    CenterPresentation p;
    for (const auto& col : emb)
      p.embed.push_back(
          scalars_from_json(A.K, col, (size_t)dim, "object field embedding"));
    A.kpres = std::move(p);
  }
  return A;
}

// ----- reports -----

inline Json galois_report_to_json(const GaloisReport& r) {
  return Json{{"dim_ok", r.dim_ok},
              {"theta_bijective", r.theta_bijective},
              {"can_bijective", r.can_bijective},
              {"fixed_dim", r.fixed_dim},
              {"verdict", r.verdict}};
}

inline Json fast_report_to_json(const FastReport& r) {
  return Json{{"center_ok", r.center_ok},
              {"theta_block_bijective", r.theta_block_bijective},
              {"action_ok", r.action_ok},
              {"verdict", r.verdict}};
}

inline Json validation_report_to_json(const ValidationReport& r) {
  Json items = Json::array();
  for (const auto& it : r.items)
    items.push_back(
        Json{{"check", it.check}, {"ok", it.ok}, {"detail", it.detail}});
  return Json{{"ok", r.ok}, {"items", std::move(items)}};
}

inline Json recovered_to_json(const RecoveredDatum& r) {
  Json out = datum_to_json(r.datum);
  Json units = Json::array();
  for (const auto& u : r.units) units.push_back(scalars_to_json(r.datum.K, u));
  out["units"] = std::move(units);
  return out;
}

inline Json matrix_to_json(const FieldTower& K,
                           const MatrixOf<ScalarFieldOps>& M) {
  Json rows = Json::array();
  for (const auto& row : M) rows.push_back(scalars_to_json(K, row));
  return Json{{"rows", (long)M.size()},
              {"cols", M.empty() ? 0l : (long)M[0].size()},
              {"entries", std::move(rows)}};
}

// The obstruction report names acting elements by their index in the
// parent group.  Each first-stage record carries either a solved slice or
// the unsolvability certificate of its linear system; the second stage
// reports the composition-failure table, its coboundary verdict, and the
// correcting character table when one exists.
inline Json obstruction_report_to_json(const GaloisDatum& d,
                                       const ObstructionReport& rep) {
  DatumFrame f = datum_frame(d);
  const int nS = f.nS(), nN = f.nN();
  Json first = Json::array();
  for (int s = 0; s < nS; ++s) {
    CoboundaryResult r =
        solve_coboundary(f.NV.group, odetail::slice_target(d, f, s));
    Json rec;
    rec["g"] = d.S[(size_t)s];
    rec["solvable"] = r.cert.solvable;
    Json cert;
    if (r.cert.solvable) {
      cert["m"] = f.m;
      cert["eta"] = r.eta->v;
    } else {
      cert["invariant_factors"] = r.cert.invariant_factors;
      cert["bad_row"] = r.cert.bad_row;
    }
    rec["certificate"] = std::move(cert);
    first.push_back(std::move(rec));
  }

  Json second;
  second["applicable"] = rep.second_defined;
  if (rep.second_defined) {
    std::vector<long> d1 = hochschild_d1(d, rep.first.family);
    Json table = Json::array();
    for (int g = 0; g < nS; ++g) {
      Json row = Json::array();
      for (int h = 0; h < nS; ++h) {
        Json vals = Json::array();
        for (int x = 0; x < nN; ++x)
          vals.push_back(d1[((size_t)g * nS + h) * nN + x]);
        row.push_back(std::move(vals));
      }
      table.push_back(std::move(row));
    }
    second["d1_gamma"] = Json{{"m", f.m}, {"table", std::move(table)}};
    second["coboundary"] = rep.second.vanishes;
    if (rep.second.witness_gamma.has_value()) {
      const std::vector<long>& wit = *rep.second.witness_gamma;
      Json theta = Json::array();
      for (int g = 0; g < nS; ++g) {
        Json row = Json::array();
        for (int x = 0; x < nN; ++x)
          row.push_back(zdetail::pos(
              rep.first.family[(size_t)g].v[(size_t)x] - wit[(size_t)g * nN + x],
              f.m));
        theta.push_back(std::move(row));
      }
      second["theta"] = Json{{"m", f.m}, {"table", std::move(theta)}};
    } else {
      second["theta"] = nullptr;
    }
  } else {
    second["d1_gamma"] = nullptr;
    second["coboundary"] = false;
    second["theta"] = nullptr;
  }

  return Json{{"first", std::move(first)},
              {"second", std::move(second)},
              {"completable", rep.completable}};
}

inline Json classify_to_json(const ClassifyResult& res) {
  Json data = Json::array();
  for (const auto& c : res.data) {
    Json rec;
    rec["datum"] = datum_to_json(c.d);
    rec["stamp"] = c.stamp;
    rec["indices"] = Json{{"S", c.s_index},       {"N", c.n_index},
                          {"tower", c.tower_index}, {"iso", c.iso_index},
                          {"sigma", c.sigma_index}, {"gamma", c.gamma_index}};
    data.push_back(std::move(rec));
  }
  Json matrix = Json::array();
  for (const auto& row : res.matrix) {
    Json r = Json::array();
    for (char v : row) r.push_back((int)v);
    matrix.push_back(std::move(r));
  }
  return Json{{"data", std::move(data)},
              {"matrix", std::move(matrix)},
              {"classes", res.class_of},
              {"representatives", res.representatives}};
}

// Common wrapper for every report the tool writes: the command, the tool
// version, and a hash of each input file.
inline Json report_envelope(
    const std::string& command,
    const std::vector<std::pair<std::string, std::string>>& inputs) {
  Json in = Json::object();
  for (const auto& [path, text] : inputs) in[path] = hash_hex(fnv1a64(text));
  return Json{{"command", command},
              {"version", version_string},
              {"inputs", std::move(in)}};
}

}  // namespace jio
}  // namespace kgal
