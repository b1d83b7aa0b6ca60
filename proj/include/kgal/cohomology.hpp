#pragma once

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

#include "kgal/common.hpp"
#include "kgal/group.hpp"
#include "kgal/tower.hpp"
#include "kgal/zmod.hpp"

// Group cohomology with coefficients in a cyclic torsion group mu of order
// `mod`, written additively: a cochain value e stands for zeta^e where zeta
// is a fixed generator of mu.  All cochains are normalized (zero whenever an
// argument is the identity).  On top of this sits the Hochschild complex of
// the S-bimodule C^1(N, mu) used by the descent obstructions.

namespace kgal {

// Normalized group cochain N^degree -> Z/mod, degree 0..3.
// Storage is row-major: degree 2 stores v[x*n + y], degree 3 v[(x*n+y)*n+z].
struct Cochain {
  int degree = 0;
  int n = 1;      // |N|
  long mod = 1;   // order of mu
  std::vector<long> v;

  long at() const { return v[0]; }
  long at(int x) const { return v[x]; }
  long at(int x, int y) const { return v[x * n + y]; }
  long at(int x, int y, int z) const { return v[(x * n + y) * n + z]; }
  long& ref(int x, int y) { return v[x * n + y]; }

  bool is_zero() const {
    for (long e : v)
      if (zdetail::pos(e, mod) != 0) return false;
    return true;
  }
};

namespace cdetail {

inline size_t table_size(int degree, int n) {
  size_t s = 1;
  for (int i = 0; i < degree; ++i) s *= (size_t)n;
  return s;
}

}  // namespace cdetail

inline Cochain make_cochain(int degree, int n, long mod,
                            std::vector<long> values) {
  require(degree >= 0 && degree <= 3, "cochain degree out of range");
  require(n >= 1 && mod >= 1, "cochain shape invalid");
  require(values.size() == cdetail::table_size(degree, n),
          "cochain table size mismatch");
  Cochain c{degree, n, mod, std::move(values)};
  for (long& e : c.v) e = zdetail::pos(e, mod);
  return c;
}

inline Cochain zero_cochain(int degree, int n, long mod) {
  return make_cochain(degree, n, mod,
                      std::vector<long>(cdetail::table_size(degree, n), 0));
}

// A cochain is normalized when it vanishes as soon as one argument is the
// identity (index 0).
inline bool is_normalized(const Cochain& c) {
  const int n = c.n;
  switch (c.degree) {
    case 0:
      return true;
    case 1:
      return zdetail::pos(c.at(0), c.mod) == 0;
    case 2:
      for (int x = 0; x < n; ++x)
        if (zdetail::pos(c.at(x, 0), c.mod) != 0 ||
            zdetail::pos(c.at(0, x), c.mod) != 0)
          return false;
      return true;
    case 3:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (zdetail::pos(c.at(0, x, y), c.mod) != 0 ||
              zdetail::pos(c.at(x, 0, y), c.mod) != 0 ||
              zdetail::pos(c.at(x, y, 0), c.mod) != 0)
            return false;
      return true;
  }
  return false;
}

inline Cochain cochain_add(const Cochain& a, const Cochain& b) {
  require(a.degree == b.degree && a.n == b.n && a.mod == b.mod,
          "cochain shape mismatch");
  Cochain r = a;
  for (size_t i = 0; i < r.v.size(); ++i)
    r.v[i] = zdetail::pos(r.v[i] + b.v[i], r.mod);
  return r;
}

inline Cochain cochain_sub(const Cochain& a, const Cochain& b) {
  require(a.degree == b.degree && a.n == b.n && a.mod == b.mod,
          "cochain shape mismatch");
  Cochain r = a;
  for (size_t i = 0; i < r.v.size(); ++i)
    r.v[i] = zdetail::pos(r.v[i] - b.v[i], r.mod);
  return r;
}

inline Cochain cochain_scale(long k, const Cochain& a) {
  Cochain r = a;
  for (long& e : r.v) e = zdetail::pos(k * e, r.mod);
  return r;
}

// Differential of the bar complex with trivial action on mu:
//   (d0 c)(x)       = 0
//   (d1 f)(x,y)     = f(y) - f(xy) + f(x)
//   (d2 s)(x,y,z)   = s(y,z) - s(xy,z) + s(x,yz) - s(x,y)
inline Cochain group_delta(const FiniteGroup& N, const Cochain& c) {
  require(c.n == N.n, "cochain does not match group");
  require(c.degree <= 2, "differential only defined up to degree 2 input");
  const int n = N.n;
  const long m = c.mod;
  Cochain r = zero_cochain(c.degree + 1, n, m);
  switch (c.degree) {
    case 0:
      break;
    case 1:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          r.v[x * n + y] =
              zdetail::pos(c.at(y) - c.at(N.mul(x, y)) + c.at(x), m);
      break;
    case 2:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z) {
            long e = c.at(y, z) - c.at(N.mul(x, y), z) +
                     c.at(x, N.mul(y, z)) - c.at(x, y);
            r.v[(x * n + y) * n + z] = zdetail::pos(e, m);
          }
      break;
  }
  return r;
}

inline bool is_two_cocycle(const FiniteGroup& N, const Cochain& s) {
  require(s.degree == 2, "expected a degree 2 cochain");
  return is_normalized(s) && group_delta(N, s).is_zero();
}

inline bool is_character(const FiniteGroup& N, const Cochain& c) {
  require(c.degree == 1, "expected a degree 1 cochain");
  return is_normalized(c) && group_delta(N, c).is_zero();
}

// Alternating form of a 2-cocycle on an abelian group:
// alt(x,y) = s(x,y) - s(y,x).  This is a bicharacter and only depends on
// the cohomology class of s.
inline Cochain alt_form(const FiniteGroup& N, const Cochain& s) {
  require(s.degree == 2, "expected a degree 2 cochain");
  require(N.is_abelian(), "alternating form needs an abelian group");
  Cochain r = zero_cochain(2, N.n, s.mod);
  for (int x = 0; x < N.n; ++x)
    for (int y = 0; y < N.n; ++y)
      r.ref(x, y) = zdetail::pos(s.at(x, y) - s.at(y, x), s.mod);
  return r;
}

// s-regular elements: x such that s(x,t) = s(t,x) for every t centralizing x.
// Regularity is constant on conjugacy classes for a 2-cocycle.
inline std::vector<int> regular_elements(const FiniteGroup& N,
                                         const Cochain& s) {
  require(s.degree == 2 && s.n == N.n, "cochain does not match group");
  std::vector<int> out;
  for (int x = 0; x < N.n; ++x) {
    bool reg = true;
    for (int t = 0; t < N.n && reg; ++t) {
      if (N.mul(x, t) != N.mul(t, x)) continue;
      if (zdetail::pos(s.at(x, t) - s.at(t, x), s.mod) != 0) reg = false;
    }
    if (reg) out.push_back(x);
  }
  return out;
}

// A 2-cocycle is non-degenerate when the identity is the only regular
// element; equivalently the twisted group algebra K_s N has center K.
inline bool is_nondegenerate(const FiniteGroup& N, const Cochain& s) {
  if (!is_two_cocycle(N, s)) return false;
  return regular_elements(N, s) == std::vector<int>{0};
}

// Dimension over K of the center of the twisted group algebra K_s N where
// s takes the value zeta^e for the designated root zeta of the tower.
// An element sum_x alpha_x u_x is central iff for all y, x:
//   s(y,x) alpha_x = s(y x y^-1, y) alpha_{y x y^-1}.
inline long center_dimension(const FieldTower& K, const FiniteGroup& N,
                             const Cochain& s) {
  require(s.degree == 2 && s.n == N.n, "cochain does not match group");
  require(s.mod == K.root_order(), "cocycle modulus does not match tower");
  ScalarFieldOps F = K.ops();
  std::vector<std::vector<Scalar>> rows;
  rows.reserve((size_t)N.n * N.n);
  for (int y = 0; y < N.n; ++y)
    for (int x = 0; x < N.n; ++x) {
      int xc = N.conj(y, x);
      std::vector<Scalar> row(N.n, F.zero());
      row[x] = F.add(row[x], K.root_of_unity(s.at(y, x)));
      row[xc] = F.sub(row[xc], K.root_of_unity(s.at(xc, y)));
      bool all0 = true;
      for (auto& e : row)
        if (!F.is_zero(e)) { all0 = false; break; }
      if (!all0) rows.push_back(std::move(row));
    }
  if (rows.empty()) return N.n;
  return N.n - (long)rank_of(F, rows, (size_t)N.n);
}

// Result of trying to write a degree 2 cochain as d1(eta).
struct CoboundaryResult {
  ZmodSolution cert;            // solver certificate over Z/mod
  std::optional<Cochain> eta;   // normalized degree 1 witness when solvable
};

// Solve d1(eta) = target over Z/mod for normalized eta.  Unknowns are
// eta(x) for x != identity; every pair (x,y) gives the row
//   eta(y) - eta(xy) + eta(x) = target(x,y).
inline CoboundaryResult solve_coboundary(const FiniteGroup& N,
                                         const Cochain& target) {
  require(target.degree == 2 && target.n == N.n,
          "cochain does not match group");
  require(is_normalized(target), "target cochain is not normalized");
  const int n = N.n;
  const long m = target.mod;
  const int u = n - 1;  // unknown index x-1 for x != 0
  std::vector<long> a, b;
  for (int x = 1; x < n; ++x)
    for (int y = 1; y < n; ++y) {
      std::vector<long> row(u, 0);
      row[x - 1] += 1;
      row[y - 1] += 1;
      int xy = N.mul(x, y);
      if (xy != 0) row[xy - 1] -= 1;
      a.insert(a.end(), row.begin(), row.end());
      b.push_back(target.at(x, y));
    }
  CoboundaryResult res;
  res.cert = solve_zmod(a, b, (int)b.size(), u, m);
  if (res.cert.solvable) {
    Cochain eta = zero_cochain(1, n, m);
    for (int x = 1; x < n; ++x) eta.v[x] = res.cert.particular[x - 1];
    res.eta = std::move(eta);
  }
  return res;
}

namespace cdetail {

// Homogeneous cocycle system for Z^2(N, Z/mod) in the normalized gauge:
// unknowns s(x,y) with x,y != identity, one row per triple (x,y,z).
struct CocycleSystem {
  int n = 1;
  long mod = 1;
  int unknowns = 0;
  std::vector<long> a;  // rows-major, rows x unknowns
  int rows = 0;

  int idx(int x, int y) const { return (x - 1) * (n - 1) + (y - 1); }
};

inline CocycleSystem cocycle_system(const FiniteGroup& N, long mod) {
  CocycleSystem sys;
  sys.n = N.n;
  sys.mod = mod;
  sys.unknowns = (N.n - 1) * (N.n - 1);
  const int n = N.n;
  auto add_entry = [&](std::vector<long>& row, int x, int y, long coeff) {
    if (x == 0 || y == 0) return;  // normalized gauge, entry is zero
    row[sys.idx(x, y)] += coeff;
  };
  for (int x = 1; x < n; ++x)
    for (int y = 1; y < n; ++y)
      for (int z = 1; z < n; ++z) {
        std::vector<long> row(sys.unknowns, 0);
        add_entry(row, y, z, 1);
        add_entry(row, N.mul(x, y), z, -1);
        add_entry(row, x, N.mul(y, z), 1);
        add_entry(row, x, y, -1);
        bool all0 = true;
        for (long e : row)
          if (e % mod != 0) { all0 = false; break; }
        if (all0) continue;
        sys.a.insert(sys.a.end(), row.begin(), row.end());
        ++sys.rows;
      }
  return sys;
}

inline Cochain cochain_from_pairs(int n, long mod,
                                  const std::vector<long>& packed) {
  Cochain s = zero_cochain(2, n, mod);
  for (int x = 1; x < n; ++x)
    for (int y = 1; y < n; ++y)
      s.ref(x, y) = zdetail::pos(packed[(x - 1) * (n - 1) + (y - 1)], mod);
  return s;
}

}  // namespace cdetail

// Structure of Z^2(N, Z/mod) as a finite abelian group: generator cochains
// with their orders.  The full cocycle set is the span of the generators.
struct CocycleSpace {
  long mod = 1;
  std::vector<Cochain> gens;
  std::vector<long> orders;   // parallel to gens, each > 1

  // Number of cocycles, or nullopt on overflow.
  std::optional<unsigned long long> count() const {
    unsigned long long c = 1;
    for (long o : orders) {
      if (c > (unsigned long long)-1 / (unsigned long long)o)
        return std::nullopt;
      c *= (unsigned long long)o;
    }
    return c;
  }
};

inline CocycleSpace cocycle_space(const FiniteGroup& N, long mod) {
  CocycleSpace sp;
  sp.mod = mod;
  if (N.n == 1 || mod == 1) return sp;
  auto sys = cdetail::cocycle_system(N, mod);
  std::vector<long> b(sys.rows, 0);
  ZmodSolution sol = solve_zmod(sys.a, b, sys.rows, sys.unknowns, mod);
  require(sol.solvable, "homogeneous system must be solvable");
  for (size_t i = 0; i < sol.gens.size(); ++i) {
    sp.gens.push_back(cdetail::cochain_from_pairs(N.n, mod, sol.gens[i]));
    sp.orders.push_back(sol.orders[i]);
  }
  return sp;
}

// Materialize every 2-cocycle; refuses beyond `bound` of them.
inline std::vector<Cochain> all_cocycles(const FiniteGroup& N, long mod,
                                         unsigned long long bound = 1u << 20) {
  if (N.n == 1 || mod == 1) return {zero_cochain(2, N.n, mod)};
  auto sys = cdetail::cocycle_system(N, mod);
  std::vector<long> b(sys.rows, 0);
  ZmodSolution sol = solve_zmod(sys.a, b, sys.rows, sys.unknowns, mod);
  auto packed = enumerate_solutions(sol, bound);
  std::vector<Cochain> out;
  out.reserve(packed.size());
  for (auto& p : packed)
    out.push_back(cdetail::cochain_from_pairs(N.n, mod, p));
  return out;
}

// All characters N -> mu, i.e. normalized degree 1 cocycles.
inline std::vector<Cochain> character_group(const FiniteGroup& N, long mod,
                                            unsigned long long bound = 1u
                                                                       << 20) {
  if (N.n == 1 || mod == 1) return {zero_cochain(1, N.n, mod)};
  const int n = N.n;
  const int u = n - 1;
  std::vector<long> a, b;
  int rows = 0;
  for (int x = 1; x < n; ++x)
    for (int y = 1; y < n; ++y) {
      std::vector<long> row(u, 0);
      row[x - 1] += 1;
      row[y - 1] += 1;
      int xy = N.mul(x, y);
      if (xy != 0) row[xy - 1] -= 1;
      a.insert(a.end(), row.begin(), row.end());
      b.push_back(0);
      ++rows;
    }
  ZmodSolution sol = solve_zmod(a, b, rows, u, mod);
  auto packed = enumerate_solutions(sol, bound);
  std::vector<Cochain> out;
  out.reserve(packed.size());
  for (auto& p : packed) {
    Cochain c = zero_cochain(1, n, mod);
    for (int x = 1; x < n; ++x) c.v[x] = zdetail::pos(p[x - 1], mod);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const Cochain& l, const Cochain& r) { return l.v < r.v; });
  return out;
}

// One representative per cohomology class in H^2(N, Z/mod).  Built in two
// stages: Smith form of the cocycle system gives coordinates on Z^2, then a
// second Smith form over the coboundary image picks a transversal of the
// quotient.  Deterministic for fixed inputs.
inline std::vector<Cochain> cohomology_transversal(
    const FiniteGroup& N, long mod, unsigned long long bound = 1u << 20) {
  if (N.n == 1 || mod == 1) return {zero_cochain(2, N.n, mod)};
  const int n = N.n;
  auto sys = cdetail::cocycle_system(N, mod);
  std::vector<long> b0(sys.rows, 0);
  ZmodSmith full =
      solve_zmod_full(sys.a, b0, sys.rows, sys.unknowns, mod, false);
  require(full.sol.solvable, "homogeneous system must be solvable");
  const int k = sys.unknowns;

  // Column i of V carries a solution of order o_i = gcd(diag_i, mod); keep
  // the columns with o_i > 1.
  std::vector<int> cols;
  std::vector<long> ord;
  for (int i = 0; i < k; ++i) {
    long o = full.sol.invariant_factors[i];
    if (o > 1) {
      cols.push_back(i);
      ord.push_back(o);
    }
  }
  const int kp = (int)cols.size();
  if (kp == 0) return {zero_cochain(2, n, mod)};

  // Solution coordinates of a cocycle vector s: y = Vinv s has y_i divisible
  // by mod/o_i, and c_i = y_i / (mod/o_i) lives in Z/o_i.
  auto coords_of = [&](const std::vector<long>& svec) {
    std::vector<long> c(kp);
    for (int j = 0; j < kp; ++j) {
      int i = cols[j];
      long y = 0;
      for (int t = 0; t < k; ++t) y += full.Vinv[i][t] * svec[t];
      y = zdetail::pos(y, mod);
      long step = mod / ord[j];
      require(y % step == 0, "vector is not a cocycle");
      c[j] = y / step;  // in Z/ord[j]
    }
    return c;
  };

  // Coboundary generators d1(e_x) for x != identity, in coordinates.
  std::vector<std::vector<long>> cob;
  for (int x = 1; x < n; ++x) {
    Cochain eta = zero_cochain(1, n, mod);
    eta.v[x] = 1;
    Cochain d = group_delta(N, eta);
    std::vector<long> packed((n - 1) * (n - 1));
    for (int p = 1; p < n; ++p)
      for (int q = 1; q < n; ++q)
        packed[(p - 1) * (n - 1) + (q - 1)] = d.at(p, q);
    cob.push_back(coords_of(packed));
  }

  // Transversal of prod Z/ord[j] over the subgroup spanned by cob rows.
  // Work in Z^kp modulo the lattice spanned by the cob rows and ord[j] e_j;
  // that lattice contains mod Z^kp, so Smith over Z/mod applies.  Rows of
  // the lattice are the columns of the matrix handed to the solver.
  const int lat_rows = (int)cob.size() + kp;
  std::vector<long> lat(kp * lat_rows, 0);
  for (int r = 0; r < (int)cob.size(); ++r)
    for (int j = 0; j < kp; ++j) lat[j * lat_rows + r] = cob[r][j];
  for (int j = 0; j < kp; ++j)
    lat[j * lat_rows + (int)cob.size() + j] = ord[j];
  std::vector<long> bz(kp, 0);
  ZmodSmith lat_smith = solve_zmod_full(lat, bz, kp, lat_rows, mod, true);

  // Quotient invariants: gcd(diag_j, mod) for each of the kp rows; class
  // representatives are Uinv * w over the mixed-radix range of invariants.
  std::vector<long> inv(kp, 0);
  for (int j = 0; j < kp; ++j) {
    long d = j < (int)lat_smith.diag.size() ? lat_smith.diag[j] : 0;
    long g = std::gcd(std::labs(d), mod);
    inv[j] = g == 0 ? mod : g;
  }
  unsigned long long total = 1;
  for (long i : inv) {
    require(total <= bound / (unsigned long long)(i > 0 ? i : 1),
            "class transversal exceeds bound");
    total *= (unsigned long long)i;
  }

  std::vector<Cochain> out;
  out.reserve(total);
  std::vector<long> w(kp, 0);
  for (unsigned long long it = 0; it < total; ++it) {
    std::vector<long> x(kp);
    for (int j = 0; j < kp; ++j) {
      long s = 0;
      for (int t = 0; t < kp; ++t) s += lat_smith.Uinv[j][t] * w[t];
      x[j] = zdetail::pos(s, mod);
    }
    // Map coordinates back to a cocycle: sum x_j * gen_j where gen_j is the
    // stage 1 generator of order ord[j].
    std::vector<long> packed(k, 0);
    for (int j = 0; j < kp; ++j) {
      long step = mod / ord[j];
      for (int t = 0; t < k; ++t)
        packed[t] += x[j] * zdetail::pos(full.V[t][cols[j]] * step, mod);
    }
    out.push_back(cdetail::cochain_from_pairs(n, mod, packed));
    for (int j = 0; j < kp; ++j) {
      if (++w[j] < inv[j]) break;
      w[j] = 0;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Cochain& l, const Cochain& r) { return l.v < r.v; });
  return out;
}

// ---------------------------------------------------------------------------
// Hochschild complex of the S-bimodule C^1(N, mu).
//
// Left action twists values through the root of unity: (g . f)(x) = a_g f(x)
// with a_g the multiplier of g on mu.  Right action moves the argument by
// conjugation: (f . g)(x) = f(g x g^-1).  Both are tabulated up front.

struct BimoduleSpec {
  int nS = 1;
  int nN = 1;
  long mod = 1;
  std::vector<long> left_mult;             // a_g per S element, unit mod `mod`
  std::vector<std::vector<int>> right_conj;  // per S element, permutation of N
};

// Check the bimodule axioms: a is multiplicative, conjugation composes
// contravariantly on the right, and the identity acts trivially.
inline bool bimodule_ok(const FiniteGroup& S, const BimoduleSpec& B) {
  if (B.nS != S.n || (int)B.left_mult.size() != S.n ||
      (int)B.right_conj.size() != S.n)
    return false;
  for (int g = 0; g < S.n; ++g)
    if ((int)B.right_conj[g].size() != B.nN) return false;
  if (zdetail::pos(B.left_mult[0] - 1, B.mod) != 0) return false;
  for (int x = 0; x < B.nN; ++x)
    if (B.right_conj[0][x] != x) return false;
  for (int g = 0; g < S.n; ++g)
    for (int h = 0; h < S.n; ++h) {
      int gh = S.mul(g, h);
      if (zdetail::pos(B.left_mult[g] * B.left_mult[h] - B.left_mult[gh],
                       B.mod) != 0)
        return false;
      for (int x = 0; x < B.nN; ++x)
        if (B.right_conj[g][B.right_conj[h][x]] != B.right_conj[gh][x])
          return false;
    }
  return true;
}

// Hochschild cochain S^degree -> C^1(N, mu), normalized in the S arguments
// and in the N argument.  Storage: degree 1 stores v[g*nN + x], degree 2
// v[(g*nS + h)*nN + x], degree 3 v[((g*nS + h)*nS + k)*nN + x].
struct HCochain {
  int degree = 1;
  int nS = 1;
  int nN = 1;
  long mod = 1;
  std::vector<long> v;

  long at(int g, int x) const { return v[g * nN + x]; }
  long at(int g, int h, int x) const { return v[(g * nS + h) * nN + x]; }
  long at(int g, int h, int k, int x) const {
    return v[((g * nS + h) * nS + k) * nN + x];
  }
  long& ref(int g, int x) { return v[g * nN + x]; }
  long& ref(int g, int h, int x) { return v[(g * nS + h) * nN + x]; }

  bool is_zero() const {
    for (long e : v)
      if (zdetail::pos(e, mod) != 0) return false;
    return true;
  }
};

inline HCochain zero_hcochain(int degree, int nS, int nN, long mod) {
  require(degree >= 1 && degree <= 3, "hochschild degree out of range");
  size_t s = (size_t)nN;
  for (int i = 0; i < degree; ++i) s *= (size_t)nS;
  return HCochain{degree, nS, nN, mod, std::vector<long>(s, 0)};
}

inline bool hcochain_normalized(const HCochain& f) {
  const long m = f.mod;
  if (f.degree == 1) {
    for (int x = 0; x < f.nN; ++x)
      if (zdetail::pos(f.at(0, x), m) != 0) return false;
    for (int g = 0; g < f.nS; ++g)
      if (zdetail::pos(f.at(g, 0), m) != 0) return false;
    return true;
  }
  if (f.degree == 2) {
    for (int g = 0; g < f.nS; ++g)
      for (int x = 0; x < f.nN; ++x)
        if (zdetail::pos(f.at(0, g, x), m) != 0 ||
            zdetail::pos(f.at(g, 0, x), m) != 0)
          return false;
    for (int g = 0; g < f.nS; ++g)
      for (int h = 0; h < f.nS; ++h)
        if (zdetail::pos(f.at(g, h, 0), m) != 0) return false;
    return true;
  }
  for (int g = 0; g < f.nS; ++g)
    for (int h = 0; h < f.nS; ++h)
      for (int x = 0; x < f.nN; ++x)
        if (zdetail::pos(f.at(0, g, h, x), m) != 0 ||
            zdetail::pos(f.at(g, 0, h, x), m) != 0 ||
            zdetail::pos(f.at(g, h, 0, x), m) != 0)
          return false;
  for (int g = 0; g < f.nS; ++g)
    for (int h = 0; h < f.nS; ++h)
      for (int k = 0; k < f.nS; ++k)
        if (zdetail::pos(f.at(g, h, k, 0), m) != 0) return false;
  return true;
}

// Hochschild differential:
//   (d1 f)(g,h)   = g.f(h) - f(gh) + f(g).h
//   (d2 f)(g,h,k) = g.f(h,k) - f(gh,k) + f(g,hk) - f(g,h).k
inline HCochain hochschild_delta(const FiniteGroup& S, const BimoduleSpec& B,
                                 const HCochain& f) {
  require(f.nS == S.n && f.nS == B.nS && f.nN == B.nN && f.mod == B.mod,
          "cochain does not match bimodule");
  require(f.degree <= 2, "differential only defined up to degree 2 input");
  const int nS = S.n, nN = B.nN;
  const long m = B.mod;
  HCochain r = zero_hcochain(f.degree + 1, nS, nN, m);
  if (f.degree == 1) {
    for (int g = 0; g < nS; ++g)
      for (int h = 0; h < nS; ++h)
        for (int x = 0; x < nN; ++x) {
          long e = B.left_mult[g] * f.at(h, x) - f.at(S.mul(g, h), x) +
                   f.at(g, B.right_conj[h][x]);
          r.ref(g, h, x) = zdetail::pos(e, m);
        }
  } else {
    for (int g = 0; g < nS; ++g)
      for (int h = 0; h < nS; ++h)
        for (int k = 0; k < nS; ++k)
          for (int x = 0; x < nN; ++x) {
            long e = B.left_mult[g] * f.at(h, k, x) -
                     f.at(S.mul(g, h), k, x) + f.at(g, S.mul(h, k), x) -
                     f.at(g, h, B.right_conj[k][x]);
            r.v[((g * nS + h) * nS + k) * nN + x] = zdetail::pos(e, m);
          }
  }
  return r;
}

}  // namespace kgal
