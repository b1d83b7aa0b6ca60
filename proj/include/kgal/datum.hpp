#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "kgal/algebra.hpp"
#include "kgal/cohomology.hpp"
#include "kgal/common.hpp"
#include "kgal/group.hpp"
#include "kgal/linalg.hpp"
#include "kgal/tower.hpp"
#include "kgal/zmod.hpp"

// The construction datum for a Galois object of the dual group algebra of
// G: a subgroup S, a normal subgroup N of S, a field tower K|k whose Galois
// group is identified with S/N, a non-degenerate 2-cocycle sigma on N, and
// a compatible twisting gamma of the S-action.  All root-of-unity values
// are stored as exponents of the designated generator of mu, mod its order.

namespace kgal {

struct GaloisDatum {
  FieldTower K;
  FiniteGroup G;
  Subgroup S;  // parent indices in G, sorted, identity first
  Subgroup N;  // parent indices in G, subset of S, normal in S

  // Indexed by the local index of s in the subgroup view of S: the Galois
  // group element through which s acts on K.  Constant on N-cosets with
  // kernel exactly N.
  std::vector<int> gal_of;

  // 2-cocycle on the subgroup view of N, exponents mod root_order.
  Cochain sigma;

  // gamma[s * |N| + x] with s local in S, x local in N, exponents mod
  // root_order.  May be empty in a partial datum handed to solve_gamma.
  std::vector<long> gamma;
};

// Local index bookkeeping shared by everything that consumes a datum.
struct DatumFrame {
  SubgroupView SV;   // S as a standalone group, indices into G
  std::vector<int> N_in_S;  // local indices of N inside SV
  SubgroupView NV;   // N as a standalone group, indices into SV.group
  long m = 1;        // root order of the tower

  int nS() const { return SV.group.n; }
  int nN() const { return NV.group.n; }
  // Conjugation action of s (S-local) on x (N-local); -1 if it escapes N.
  int conj_n(int s, int x) const {
    return NV.from_parent[SV.group.conj(s, NV.to_parent[x])];
  }
};

inline DatumFrame datum_frame(const GaloisDatum& d) {
  DatumFrame f;
  f.SV = subgroup_as_group(d.G, d.S);
  f.N_in_S.clear();
  for (int n : d.N) {
    int loc = f.SV.from_parent[n];
    require(loc >= 0, "N is not contained in S");
    f.N_in_S.push_back(loc);
  }
  std::sort(f.N_in_S.begin(), f.N_in_S.end());
  f.NV = subgroup_as_group(f.SV.group, f.N_in_S);
  f.m = d.K.root_order();
  return f;
}

struct ValidationItem {
  std::string check;
  bool ok = false;
  std::string detail;  // witness or explanation on failure
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool ok = true;

  void add(const std::string& check, bool good, const std::string& detail = "") {
    items.push_back({check, good, detail});
    ok = ok && good;
  }
};

namespace ddetail {

inline std::string elt(int g) { return std::to_string(g); }

// Exponent of the action of s (S-local) on the root of unity.
inline long mult_of(const GaloisDatum& d, int s) {
  return d.K.zeta_exponent_of_aut(d.gal_of[(size_t)s]);
}

// The inner values forced on gamma over N x N by sigma:
// gamma(x, y) = sigma(x, y) sigma(xy, x^-1) / sigma(x, x^-1).
inline long inner_gamma(const DatumFrame& f, const Cochain& sigma, int x,
                        int y) {
  const FiniteGroup& n = f.NV.group;
  int xi = n.inv(x);
  return zdetail::pos(
      sigma.at(x, y) + sigma.at(n.mul(x, y), xi) - sigma.at(x, xi), f.m);
}

}  // namespace ddetail

// Structural validation of everything except gamma: subgroups, tower
// degree, characteristic, the Galois labelling, and the cocycle with its
// non-degeneracy (regular class scan cross-checked against the center
// dimension of the twisted group algebra).
inline ValidationReport validate_structure(const GaloisDatum& d) {
  ValidationReport rep;

  bool s_ok = is_subgroup(d.G, d.S);
  rep.add("subgroup-S", s_ok, s_ok ? "" : "S is not a subgroup of G");
  bool n_sub = is_subgroup(d.G, d.N);
  bool n_in_s = true;
  for (int x : d.N)
    if (!std::binary_search(d.S.begin(), d.S.end(), x)) n_in_s = false;
  rep.add("subgroup-N", n_sub && n_in_s,
          n_sub ? (n_in_s ? "" : "N is not contained in S")
                : "N is not a subgroup of G");
  if (!rep.ok) return rep;

  bool normal = is_normal_in(d.G, d.N, d.S);
  rep.add("N-normal-in-S", normal, normal ? "" : "conjugation moves N");
  if (!normal) return rep;

  DatumFrame f = datum_frame(d);

  long p = d.K.characteristic();
  bool char_ok = (p == 0) || ((long)d.N.size() % p != 0);
  rep.add("characteristic", char_ok,
          char_ok ? ""
                  : "characteristic " + std::to_string(p) + " divides |N|");

  bool deg_ok = d.K.K_over_k() * (long)d.N.size() == (long)d.S.size();
  rep.add("tower-degree", deg_ok,
          deg_ok ? ""
                 : "[K:k] = " + std::to_string(d.K.K_over_k()) +
                       " does not equal [S:N] = " +
                       std::to_string(d.S.size() / d.N.size()));
  if (!deg_ok) return rep;

  // gal_of: homomorphism onto Gal with kernel exactly N.
  bool lab_ok = (int)d.gal_of.size() == f.nS();
  std::string lab_why = lab_ok ? "" : "label table size mismatch";
  const FiniteGroup& gal = d.K.galois_group();
  if (lab_ok) {
    for (int s = 0; s < f.nS() && lab_ok; ++s)
      if (d.gal_of[s] < 0 || d.gal_of[s] >= gal.n) {
        lab_ok = false;
        lab_why = "label out of range at s = " + ddetail::elt(s);
      }
  }
  if (lab_ok) {
    for (int s = 0; s < f.nS() && lab_ok; ++s)
      for (int t = 0; t < f.nS() && lab_ok; ++t)
        if (gal.mul(d.gal_of[s], d.gal_of[t]) !=
            d.gal_of[f.SV.group.mul(s, t)]) {
          lab_ok = false;
          lab_why = "not a homomorphism at (" + ddetail::elt(s) + ", " +
                    ddetail::elt(t) + ")";
        }
  }
  if (lab_ok) {
    for (int s = 0; s < f.nS() && lab_ok; ++s) {
      bool in_n = std::binary_search(f.N_in_S.begin(), f.N_in_S.end(), s);
      if ((d.gal_of[s] == 0) != in_n) {
        lab_ok = false;
        lab_why = "kernel differs from N at s = " + ddetail::elt(s);
      }
    }
  }
  if (lab_ok) {
    std::vector<char> hit(gal.n, 0);
    for (int s = 0; s < f.nS(); ++s) hit[d.gal_of[s]] = 1;
    for (int g = 0; g < gal.n; ++g)
      if (!hit[g]) {
        lab_ok = false;
        lab_why = "not surjective onto the Galois group";
      }
  }
  rep.add("galois-labelling", lab_ok, lab_why);

  bool shape_ok = d.sigma.degree == 2 && d.sigma.n == f.nN() &&
                  d.sigma.mod == f.m;
  rep.add("cocycle-shape", shape_ok,
          shape_ok ? "" : "sigma table does not match N and the tower");
  if (!shape_ok || !lab_ok) return rep;

  bool coc = is_two_cocycle(f.NV.group, d.sigma);
  rep.add("cocycle-identity", coc,
          coc ? "" : "sigma fails the 2-cocycle identity");
  if (!coc) return rep;

  bool nd = is_nondegenerate(f.NV.group, d.sigma);
  long cd = center_dimension(d.K, f.NV.group, d.sigma);
  bool nd_ok = nd && cd == 1;
  rep.add("cocycle-nondegenerate", nd_ok,
          nd_ok ? ""
                : "regular scan " + std::string(nd ? "passes" : "fails") +
                      ", center dimension " + std::to_string(cd));
  return rep;
}

// Full validation including the three compatibility conditions on gamma:
// it restricts to the inner values on N, it twists sigma into its
// conjugate, and it composes along the group law of S.
inline ValidationReport validate_datum(const GaloisDatum& d) {
  ValidationReport rep = validate_structure(d);
  if (!rep.ok) return rep;

  DatumFrame f = datum_frame(d);
  const int nS = f.nS(), nN = f.nN();
  const long m = f.m;

  bool size_ok = (int)d.gamma.size() == nS * nN;
  rep.add("gamma-shape", size_ok, size_ok ? "" : "gamma table size mismatch");
  if (!size_ok) return rep;
  auto ga = [&](int s, int x) { return d.gamma[(size_t)s * nN + x]; };

  bool norm_ok = true;
  std::string norm_why;
  for (int s = 0; s < nS && norm_ok; ++s)
    if (zdetail::pos(ga(s, 0), m) != 0) {
      norm_ok = false;
      norm_why = "gamma(s, e) nonzero at s = " + ddetail::elt(s);
    }
  for (int x = 0; x < nN && norm_ok; ++x)
    if (zdetail::pos(ga(0, x), m) != 0) {
      norm_ok = false;
      norm_why = "gamma(e, x) nonzero at x = " + ddetail::elt(x);
    }
  rep.add("gamma-normalized", norm_ok, norm_why);
  if (!norm_ok) return rep;

  bool inner_ok = true;
  std::string inner_why;
  for (int x = 0; x < nN && inner_ok; ++x)
    for (int y = 0; y < nN && inner_ok; ++y) {
      int sx = f.NV.to_parent[x];
      if (zdetail::pos(ga(sx, y) - ddetail::inner_gamma(f, d.sigma, x, y),
                       m) != 0) {
        inner_ok = false;
        inner_why = "gamma is not inner at (x, y) = (" + ddetail::elt(x) +
                    ", " + ddetail::elt(y) + ")";
      }
    }
  rep.add("gamma-inner-on-N", inner_ok, inner_why);

  bool tw_ok = true;
  std::string tw_why;
  for (int s = 0; s < nS && tw_ok; ++s) {
    long a = ddetail::mult_of(d, s);
    for (int x = 0; x < nN && tw_ok; ++x)
      for (int y = 0; y < nN && tw_ok; ++y) {
        int xy = f.NV.group.mul(x, y);
        long lhs = a * d.sigma.at(x, y) + ga(s, xy);
        long rhs = d.sigma.at(f.conj_n(s, x), f.conj_n(s, y)) + ga(s, x) +
                   ga(s, y);
        if (zdetail::pos(lhs - rhs, m) != 0) {
          tw_ok = false;
          tw_why = "twisting fails at (s, x, y) = (" + ddetail::elt(s) + ", " +
                   ddetail::elt(x) + ", " + ddetail::elt(y) + ")";
        }
      }
  }
  rep.add("gamma-twists-cocycle", tw_ok, tw_why);

  bool comp_ok = true;
  std::string comp_why;
  for (int g = 0; g < nS && comp_ok; ++g) {
    long a = ddetail::mult_of(d, g);
    for (int h = 0; h < nS && comp_ok; ++h)
      for (int x = 0; x < nN && comp_ok; ++x) {
        long lhs = ga(f.SV.group.mul(g, h), x);
        long rhs = a * ga(h, x) + ga(g, f.conj_n(h, x));
        if (zdetail::pos(lhs - rhs, m) != 0) {
          comp_ok = false;
          comp_why = "composition fails at (g, h, x) = (" + ddetail::elt(g) +
                     ", " + ddetail::elt(h) + ", " + ddetail::elt(x) + ")";
        }
      }
  }
  rep.add("gamma-composes", comp_ok, comp_why);
  return rep;
}

// The simple building block: the twisted group algebra of N over K with
// the gamma-twisted semilinear S-action.
inline EquivariantAlgebra build_simple(const GaloisDatum& d) {
  DatumFrame f = datum_frame(d);
  return twisted_group_algebra(d.K, f.SV.group, f.N_in_S, d.sigma, d.gamma,
                               d.gal_of);
}

// The Galois object of the datum: the simple block induced up to G.
// Throws on an invalid datum.
inline EquivariantAlgebra build_object(const GaloisDatum& d) {
  ValidationReport rep = validate_datum(d);
  if (!rep.ok) {
    std::string why = "invalid datum:";
    for (const auto& it : rep.items)
      if (!it.ok) why += " [" + it.check + "] " + it.detail;
    throw invalid_input(why);
  }
  EquivariantAlgebra B = build_simple(d);
  return induced_algebra(B, d.G, d.S);
}

// The trivial datum for a group G: S = N = {e} over the rationals.  Its
// object is the dual group algebra itself.
inline GaloisDatum trivial_datum(const FieldTower& K, const FiniteGroup& G) {
  require(K.K_over_k() == 1, "trivial datum needs K = k");
  GaloisDatum d;
  d.K = K;
  d.G = G;
  d.S = {0};
  d.N = {0};
  d.gal_of = {0};
  d.sigma = zero_cochain(2, 1, K.root_order());
  d.gamma = {0};
  return d;
}

struct FastReport {
  bool center_ok = false;        // sigma non-degenerate over K
  bool theta_block_bijective = false;  // theta of the block over K
  bool action_ok = false;        // S acts through the full Galois group
  bool verdict = false;
};

/**
 * Fast verification of the simple block B = K_sigma N: over K the map
 * theta_N : B # kN -> End_K(B) has the closed form
 *
 *   theta(u_y x u_x)(u_z) = zeta^{gamma(x,z) + sigma(y, xzx^-1)} u_{y xzx^-1}
 *
 * so its |N|^2 x |N|^2 matrix over K is assembled directly from the
 * exponent tables, and bijectivity is a rank computation over K.  Combined
 * with a one-dimensional center and an S-action inducing the full Galois
 * group on it, this decides the Galois property of the induced object
 * without touching the dim^2-sized matrices over k.
 */
inline FastReport verify_simple_fast(const GaloisDatum& d) {
  FastReport out;
  ValidationReport rep = validate_structure(d);
  if (!rep.ok) return out;

  DatumFrame f = datum_frame(d);
  const int nN = f.nN();
  require((int)d.gamma.size() == f.nS() * nN, "gamma table size mismatch");
  auto ga = [&](int s, int x) { return d.gamma[(size_t)s * nN + x]; };

  out.center_ok = center_dimension(d.K, f.NV.group, d.sigma) == 1;
  out.action_ok = true;  // labelling checks live in validate_structure

  ScalarFieldOps F = d.K.ops();
  const size_t n2 = (size_t)nN * nN;
  MatrixOf<ScalarFieldOps> M(n2, std::vector<Scalar>(n2, F.zero()));
  for (int y = 0; y < nN; ++y)
    for (int x = 0; x < nN; ++x) {
      size_t col = (size_t)y * nN + x;
      int sx = f.NV.to_parent[x];
      for (int z = 0; z < nN; ++z) {
        int zc = f.conj_n(sx, z);
        int r = f.NV.group.mul(y, zc);
        long e = ga(sx, z) + d.sigma.at(y, zc);
        size_t row = (size_t)r * nN + z;
        M[row][col] = F.add(M[row][col], d.K.root_of_unity(e));
      }
    }
  out.theta_block_bijective = rank_of(F, M, n2) == n2;
  out.verdict = out.center_ok && out.theta_block_bijective && out.action_ok;
  return out;
}

// ---------------------------------------------------------------------------
// Solving for gamma given the rest of the datum.

/**
 * All gamma tables compatible with (S, N, K, labelling, sigma), in
 * lexicographic order.  gamma is determined on N x N by sigma; writing
 * every s in S as x g_i for right coset representatives g_i of N, the
 * composition rule reduces the unknowns to gamma(g_i, y).  The twisting
 * and composition conditions become an affine system over Z/m, solved by
 * Smith reduction; the full solution torsor is materialized.
 */
inline std::vector<std::vector<long>> solve_gamma(
    const GaloisDatum& d, unsigned long long bound = 1u << 20) {
  ValidationReport rep = validate_structure(d);
  if (!rep.ok) {
    std::string why = "invalid partial datum:";
    for (const auto& it : rep.items)
      if (!it.ok) why += " [" + it.check + "] " + it.detail;
    throw invalid_input(why);
  }
  DatumFrame f = datum_frame(d);
  const FiniteGroup& S = f.SV.group;
  const FiniteGroup& N = f.NV.group;
  const int nS = S.n, nN = N.n;
  const long m = f.m;

  std::vector<int> reps = coset_representatives(S, f.N_in_S);
  const int t = (int)reps.size();
  std::vector<int> coset_of(nS, -1), in_n_part(nS, -1);
  for (int i = 0; i < t; ++i)
    for (int x = 0; x < nN; ++x) {
      int s = S.mul(f.NV.to_parent[x], reps[i]);
      coset_of[s] = i;
      in_n_part[s] = x;  // s = x g_i
    }

  // Unknown index for gamma(g_i, y), i >= 1, y != e.
  const int u = (t - 1) * (nN - 1);
  auto uidx = [&](int i, int y) { return (i - 1) * (nN - 1) + (y - 1); };

  // gamma(x g_i, y) = gamma(g_i, y) + inner(x, g_i y g_i^-1) as an affine
  // expression: constant part plus at most one unknown.
  struct Expr {
    long c = 0;
    int var = -1;  // unknown index or -1
  };
  auto expand = [&](int s, int y) -> Expr {
    Expr e;
    if (y == 0) return e;
    int i = coset_of[s];
    int x = in_n_part[s];
    int yc = f.conj_n(reps[i], y);
    require(yc >= 0, "conjugation leaves N");
    e.c = ddetail::inner_gamma(f, d.sigma, x, yc);
    if (i == 0) {
      // s in N: fully determined, add the inner value of (g_0 = e, y) = 0
      // plus nothing.  e.c already holds inner(x, y).
      return e;
    }
    e.var = uidx(i, y);
    return e;
  };

  std::vector<long> a, b;
  int rows = 0;
  auto add_row = [&](std::vector<long>&& row, long rhs) {
    a.insert(a.end(), row.begin(), row.end());
    b.push_back(rhs);
    ++rows;
  };

  // Twisting rows: a_s sigma(x,y) + gamma(s, xy) - gamma(s,x) - gamma(s,y)
  // = sigma(sxs^-1, sys^-1).
  for (int s = 0; s < nS; ++s) {
    long as = ddetail::mult_of(d, s);
    for (int x = 0; x < nN; ++x)
      for (int y = 0; y < nN; ++y) {
        int xy = N.mul(x, y);
        std::vector<long> row(u, 0);
        long rhs = d.sigma.at(f.conj_n(s, x), f.conj_n(s, y)) -
                   as * d.sigma.at(x, y);
        Expr e1 = expand(s, xy), e2 = expand(s, x), e3 = expand(s, y);
        long c = e1.c - e2.c - e3.c;
        if (e1.var >= 0) row[e1.var] += 1;
        if (e2.var >= 0) row[e2.var] -= 1;
        if (e3.var >= 0) row[e3.var] -= 1;
        add_row(std::move(row), zdetail::pos(rhs - c, m));
      }
  }

  // Composition rows: gamma(gh, x) = a_g gamma(h, x) + gamma(g, hxh^-1).
  for (int g = 0; g < nS; ++g) {
    long ag = ddetail::mult_of(d, g);
    for (int h = 0; h < nS; ++h)
      for (int x = 0; x < nN; ++x) {
        std::vector<long> row(u, 0);
        Expr lhs = expand(S.mul(g, h), x);
        Expr r1 = expand(h, x);
        Expr r2 = expand(g, f.conj_n(h, x));
        long c = lhs.c - ag * r1.c - r2.c;
        if (lhs.var >= 0) row[lhs.var] += 1;
        if (r1.var >= 0) row[r1.var] -= ag;
        if (r2.var >= 0) row[r2.var] -= 1;
        add_row(std::move(row), zdetail::pos(-c, m));
      }
  }

  ZmodSolution sol = solve_zmod(a, b, rows, u, m);
  std::vector<std::vector<long>> out;
  if (!sol.solvable) return out;

  for (const auto& assign : enumerate_solutions(sol, bound)) {
    std::vector<long> table((size_t)nS * nN, 0);
    for (int s = 0; s < nS; ++s)
      for (int y = 1; y < nN; ++y) {
        Expr e = expand(s, y);
        long v = e.c + (e.var >= 0 ? assign[e.var] : 0);
        table[(size_t)s * nN + y] = zdetail::pos(v, m);
      }
    GaloisDatum full = d;
    full.gamma = table;
    ValidationReport check = validate_datum(full);
    require(check.ok, "solver produced an invalid gamma");
    out.push_back(std::move(table));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Equivalence of data.

struct EquivalenceWitness {
  int g = 0;       // conjugator in G carrying (S2, N2) onto (S1, N1)
  int omega = 0;   // Galois element aligning the two labellings
  std::vector<long> eta;  // character-twist exponents, indexed by N1
};

// Transport a datum along conjugation by g: S' = g^-1 S g and so on, with
// sigma'(x, y) = sigma(g x g^-1, g y g^-1).
inline GaloisDatum conjugate_datum(const GaloisDatum& d, int g) {
  GaloisDatum out;
  out.K = d.K;
  out.G = d.G;
  out.S = conjugate_subgroup(d.G, d.S, g);
  out.N = conjugate_subgroup(d.G, d.N, g);

  DatumFrame f = datum_frame(d);
  DatumFrame fo;
  fo.SV = subgroup_as_group(out.G, out.S);
  fo.N_in_S.clear();
  for (int n : out.N) fo.N_in_S.push_back(fo.SV.from_parent[n]);
  std::sort(fo.N_in_S.begin(), fo.N_in_S.end());
  fo.NV = subgroup_as_group(fo.SV.group, fo.N_in_S);
  fo.m = d.K.root_order();

  // Parent-level transport g . s' g^-1 back into the original local frames.
  auto lift_s = [&](int s_new) {
    int parent = fo.SV.to_parent[s_new];
    return f.SV.from_parent[d.G.conj(g, parent)];
  };
  auto lift_n = [&](int x_new) {
    int parent_in_s = fo.NV.to_parent[x_new];
    int parent = fo.SV.to_parent[parent_in_s];
    return f.NV.from_parent[f.SV.from_parent[d.G.conj(g, parent)]];
  };

  out.gal_of.resize(fo.nS());
  for (int s = 0; s < fo.nS(); ++s) out.gal_of[s] = d.gal_of[lift_s(s)];

  out.sigma = zero_cochain(2, fo.nN(), f.m);
  for (int x = 0; x < fo.nN(); ++x)
    for (int y = 0; y < fo.nN(); ++y)
      out.sigma.ref(x, y) = d.sigma.at(lift_n(x), lift_n(y));

  if (!d.gamma.empty()) {
    out.gamma.assign((size_t)fo.nS() * fo.nN(), 0);
    for (int s = 0; s < fo.nS(); ++s)
      for (int x = 0; x < fo.nN(); ++x)
        out.gamma[(size_t)s * fo.nN() + x] =
            d.gamma[(size_t)lift_s(s) * f.nN() + lift_n(x)];
  }
  return out;
}

/**
 * Decide whether two data over the same group and tower produce isomorphic
 * Galois objects.  A witness is a conjugator g with g^-1 S2 g = S1 and
 * g^-1 N2 g = N1, a Galois element omega conjugating the labelling of d1
 * into the transported labelling of d2, and a character eta on N with
 *
 *   (d eta)(x, y) = a_omega sigma1(x, y) - sigma2'(x, y)
 *   eta(s x s^-1) - a_s eta(x) = gamma2'(s, x) - a_omega gamma1(s, x)
 *
 * solved as one affine system over Z/m.
 */
inline std::optional<EquivalenceWitness> are_equivalent(const GaloisDatum& d1,
                                                        const GaloisDatum& d2) {
  if (!d1.K.same_tower(d2.K)) return std::nullopt;
  if (!d1.G.same_table(d2.G)) return std::nullopt;
  if (d1.S.size() != d2.S.size() || d1.N.size() != d2.N.size())
    return std::nullopt;

  DatumFrame f1 = datum_frame(d1);
  const FiniteGroup& gal = d1.K.galois_group();
  const int nN = f1.nN(), nS = f1.nS();
  const long m = f1.m;

  for (int g = 0; g < d1.G.n; ++g) {
    if (conjugate_subgroup(d1.G, d2.S, g) != d1.S) continue;
    if (conjugate_subgroup(d1.G, d2.N, g) != d1.N) continue;
    GaloisDatum t2 = conjugate_datum(d2, g);
    DatumFrame f2 = datum_frame(t2);
    require(f2.nS() == nS && f2.nN() == nN, "transport broke the frame");

    for (int omega = 0; omega < gal.n; ++omega) {
      bool lab_match = true;
      for (int s = 0; s < nS && lab_match; ++s)
        if (gal.mul(gal.mul(omega, d1.gal_of[s]), gal.inv(omega)) !=
            t2.gal_of[s])
          lab_match = false;
      if (!lab_match) continue;

      long aw = d1.K.zeta_exponent_of_aut(omega);
      // Unknowns eta(x), x != e.  Rows: coboundary condition on N x N and
      // the gamma matching condition on S x N.
      const int u = nN - 1;
      std::vector<long> a, b;
      int rows = 0;
      for (int x = 1; x < nN; ++x)
        for (int y = 1; y < nN; ++y) {
          std::vector<long> row(u, 0);
          row[x - 1] += 1;
          row[y - 1] += 1;
          int xy = f1.NV.group.mul(x, y);
          if (xy != 0) row[xy - 1] -= 1;
          a.insert(a.end(), row.begin(), row.end());
          b.push_back(zdetail::pos(
              aw * d1.sigma.at(x, y) - t2.sigma.at(x, y), m));
          ++rows;
        }
      for (int s = 0; s < nS; ++s) {
        long as = ddetail::mult_of(d1, s);
        for (int x = 1; x < nN; ++x) {
          std::vector<long> row(u, 0);
          int xc = f1.conj_n(s, x);
          if (xc != 0) row[xc - 1] += 1;
          row[x - 1] -= as;
          a.insert(a.end(), row.begin(), row.end());
          b.push_back(zdetail::pos(
              t2.gamma[(size_t)s * nN + x] - aw * d1.gamma[(size_t)s * nN + x],
              m));
          ++rows;
        }
      }
      ZmodSolution sol = solve_zmod(a, b, rows, u, m);
      if (!sol.solvable) continue;
      EquivalenceWitness w;
      w.g = g;
      w.omega = omega;
      w.eta.assign(nN, 0);
      for (int x = 1; x < nN; ++x) w.eta[x] = sol.particular[x - 1];
      return w;
    }
  }
  return std::nullopt;
}

namespace ddetail {

// Check that the columns timg define an isomorphism of equivariant
// algebras: unit to unit, multiplicative, intertwines every group element,
// and full rank.
inline bool columns_intertwine(const EquivariantAlgebra& A1,
                               const EquivariantAlgebra& A2,
                               const std::vector<std::vector<Scalar>>& timg) {
  const int d = A1.dim;
  if (A2.dim != d || (int)timg.size() != d) return false;
  auto apply = [&](const std::vector<Scalar>& v) {
    auto out = A2.zero_vec();
    for (int p = 0; p < d; ++p) {
      if (is_zero(v[p])) continue;
      for (int q = 0; q < d; ++q) out[q] = out[q] + v[p] * timg[p][q];
    }
    return out;
  };

  if (!adetail::vec_eq(apply(A1.unit), A2.unit)) return false;
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      auto lhs = apply(A1.mult_vec(A1.basis_vec(p), A1.basis_vec(q)));
      auto rhs = A2.mult_vec(timg[p], timg[q]);
      if (!adetail::vec_eq(lhs, rhs)) return false;
    }
  require(A1.G.same_table(A2.G), "intertwiner needs one acting group");
  for (int g = 0; g < A1.G.n; ++g)
    for (int p = 0; p < d; ++p) {
      auto lhs = apply(A1.act_vec(g, A1.basis_vec(p)));
      auto rhs = A2.act_vec(g, timg[p]);
      if (!adetail::vec_eq(lhs, rhs)) return false;
    }
  MatrixOf<ScalarFieldOps> rows(timg.begin(), timg.end());
  return rank_of(A1.K.ops(), rows, (size_t)d) == (size_t)d;
}

}  // namespace ddetail

/**
 * Verify as matrices that translation by g links the object of d with the
 * object of the conjugated datum.  Viewing the induced algebra as the
 * equivariant functions on G with values in the simple block, the map
 * sends f to h |-> f(gh), followed by the index identification of the two
 * blocks.  Returns whether that map is an isomorphism of G-algebras.
 */
inline bool translation_intertwines(const GaloisDatum& d, int g) {
  GaloisDatum d2 = conjugate_datum(d, g);
  EquivariantAlgebra B1 = build_simple(d);
  EquivariantAlgebra A1 = induced_algebra(B1, d.G, d.S);
  EquivariantAlgebra A2 = build_object(d2);

  DatumFrame f1 = datum_frame(d);
  DatumFrame f2 = datum_frame(d2);
  const int Kk = (int)d.K.K_over_k();
  const int dB = B1.dim;

  // Index identification of the blocks along conjugation by g.
  std::vector<int> x2_of_x1(f1.nN(), -1);
  for (int x2 = 0; x2 < f2.nN(); ++x2) {
    int parent = f2.SV.to_parent[f2.NV.to_parent[x2]];
    int x1 = f1.NV.from_parent[f1.SV.from_parent[d.G.conj(g, parent)]];
    require(x1 >= 0, "conjugation does not match the translated group");
    x2_of_x1[x1] = x2;
  }
  auto thix = [&](int r) { return x2_of_x1[r / Kk] * Kk + r % Kk; };

  std::vector<int> reps1 = coset_representatives(d.G, d.S);
  std::vector<int> reps2 = coset_representatives(d.G, d2.S);
  std::vector<int> coset1_of(d.G.n, -1);
  for (int i = 0; i < (int)reps1.size(); ++i)
    for (int s : d.S) coset1_of[d.G.mul(s, reps1[i])] = i;

  std::vector<std::vector<Scalar>> timg(A1.dim, A1.zero_vec());
  for (int j = 0; j < (int)reps2.size(); ++j) {
    int h = d.G.mul(g, reps2[j]);
    int i = coset1_of[h];
    int s1 = f1.SV.from_parent[d.G.mul(h, d.G.inv(reps1[i]))];
    require(s1 >= 0, "translated representative misses its coset twist");
    for (int c = 0; c < dB; ++c)
      for (const auto& [r, sc] : B1.act[s1][c])
        timg[i * dB + c][j * dB + thix(r)] = sc;
  }
  return ddetail::columns_intertwine(A1, A2, timg);
}

/**
 * Verify as matrices that an equivalence witness gives an isomorphism of
 * the simple blocks.  After transporting d2 along the conjugator the map
 * sends beta u_x to omega(beta) zeta^eta(x) u'_x; it must be unital,
 * multiplicative, and intertwine the twisted action of every element of S.
 */
inline bool witness_intertwines(const GaloisDatum& d1, const GaloisDatum& d2,
                                const EquivalenceWitness& w) {
  if (!d1.K.same_tower(d2.K)) return false;
  GaloisDatum t2 = conjugate_datum(d2, w.g);
  if (t2.S != d1.S || t2.N != d1.N) return false;
  t2.K = d1.K;  // one tower instance for all scalar arithmetic
  EquivariantAlgebra B1 = build_simple(d1);
  EquivariantAlgebra B2 = build_simple(t2);

  DatumFrame f = datum_frame(d1);
  const int Kk = (int)d1.K.K_over_k();
  auto kb = d1.K.k_basis();
  require((int)w.eta.size() == f.nN(), "witness character has the wrong size");

  std::vector<std::vector<Scalar>> timg(B1.dim, B1.zero_vec());
  for (int x = 0; x < f.nN(); ++x)
    for (int a = 0; a < Kk; ++a) {
      Scalar z = d1.K.apply_aut(w.omega, kb[a]) *
                 d1.K.root_of_unity(zdetail::pos(w.eta[x], f.m));
      auto coords = d1.K.express_in_k_basis(z);
      for (int c = 0; c < Kk; ++c)
        timg[x * Kk + a][x * Kk + c] = coords[c];
    }
  return ddetail::columns_intertwine(B1, B2, timg);
}

}  // namespace kgal
