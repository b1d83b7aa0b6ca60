#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgal/cohomology.hpp"
#include "kgal/common.hpp"
#include "kgal/datum.hpp"
#include "kgal/zmod.hpp"

// Cohomological obstructions to completing a partial datum (everything
// except gamma) to a full one.  The twisting condition prescribes the
// coboundary of each slice gamma(g, -); per-element solvability is the
// first obstruction.  A choice of slices then fails the composition rule
// by a 2-cochain of S with character values, and the second obstruction
// is whether that failure is a differential.

namespace kgal {

// One normalized 1-cochain on N per element of S.
using GammaFamily = std::vector<Cochain>;

struct FirstObstruction {
  bool vanishes = false;
  std::vector<int> bad;  // S-local elements whose slice equation is unsolvable
  GammaFamily family;    // particular slices when solvable, empty otherwise
};

struct SecondObstruction {
  bool vanishes = false;           // theta free over all of S
  bool vanishes_aligned = false;   // slices over N pinned to the inner values
  std::optional<std::vector<long>> witness_gamma;  // full table, aligned case
};

struct ObstructionReport {
  FirstObstruction first;
  bool second_defined = false;
  SecondObstruction second;
  bool completable = false;  // first and the free second both vanish
};

namespace odetail {

// Target coboundary for the slice at g: a_g sigma(x, y) - sigma(gxg^-1, gyg^-1).
inline Cochain slice_target(const GaloisDatum& d, const DatumFrame& f, int g) {
  Cochain t = zero_cochain(2, f.nN(), f.m);
  long a = ddetail::mult_of(d, g);
  for (int x = 0; x < f.nN(); ++x)
    for (int y = 0; y < f.nN(); ++y)
      t.ref(x, y) = zdetail::pos(
          a * d.sigma.at(x, y) - d.sigma.at(f.conj_n(g, x), f.conj_n(g, y)),
          f.m);
  return t;
}

// Slice of the inner values at x in N, as a cochain on N.
inline Cochain inner_slice(const GaloisDatum& d, const DatumFrame& f, int x) {
  Cochain c = zero_cochain(1, f.nN(), f.m);
  for (int y = 0; y < f.nN(); ++y)
    c.v[y] = ddetail::inner_gamma(f, d.sigma, x, y);
  return c;
}

// Failure of the composition rule for a family of slices:
// rhs(g, h)(x) = a_g family[h](x) - family[gh](x) + family[g](hxh^-1).
inline std::vector<long> composition_failure(const GaloisDatum& d,
                                             const DatumFrame& f,
                                             const GammaFamily& fam) {
  const int nS = f.nS(), nN = f.nN();
  std::vector<long> rhs((size_t)nS * nS * nN, 0);
  for (int g = 0; g < nS; ++g) {
    long a = ddetail::mult_of(d, g);
    for (int h = 0; h < nS; ++h) {
      int gh = f.SV.group.mul(g, h);
      for (int x = 0; x < nN; ++x)
        rhs[((size_t)g * nS + h) * nN + x] = zdetail::pos(
            a * fam[h].v[x] - fam[gh].v[x] + fam[g].v[f.conj_n(h, x)], f.m);
    }
  }
  return rhs;
}

}  // namespace odetail

// Per-element solvability of the slice equations, with particular slices.
inline FirstObstruction first_obstruction(const GaloisDatum& d) {
  ValidationReport rep = validate_structure(d);
  if (!rep.ok) {
    std::string why = "invalid partial datum:";
    for (const auto& it : rep.items)
      if (!it.ok) why += " [" + it.check + "] " + it.detail;
    throw invalid_input(why);
  }
  DatumFrame f = datum_frame(d);
  FirstObstruction out;
  out.family.reserve(f.nS());
  for (int g = 0; g < f.nS(); ++g) {
    Cochain t = odetail::slice_target(d, f, g);
    CoboundaryResult r = solve_coboundary(f.NV.group, t);
    if (r.eta.has_value()) {
      out.family.push_back(*r.eta);
    } else {
      out.bad.push_back(g);
      out.family.push_back(zero_cochain(1, f.nN(), f.m));
    }
  }
  out.vanishes = out.bad.empty();
  if (!out.vanishes) out.family.clear();
  return out;
}

/**
 * Second obstruction for a family of slices: decide whether the
 * composition failure is the differential of a map from S into the
 * characters of N.  Unknowns are theta[g](x); character and matching
 * conditions form one affine system over Z/m.  When align_inner is set
 * the slices over N are replaced by the inner values and their thetas are
 * pinned to zero, so a solution assembles directly into a full table.
 */
inline SecondObstruction second_obstruction_for(const GaloisDatum& d,
                                                const GammaFamily& family,
                                                bool align_inner) {
  DatumFrame f = datum_frame(d);
  const int nS = f.nS(), nN = f.nN();
  const long m = f.m;
  require((int)family.size() == nS, "family must have one slice per element");

  GammaFamily fam = family;
  std::vector<char> pinned(nS, 0);
  pinned[0] = 1;  // the identity slice stays zero
  fam[0] = zero_cochain(1, nN, m);
  if (align_inner) {
    for (int x = 0; x < nN; ++x) {
      int s = f.NV.to_parent[x];
      fam[s] = odetail::inner_slice(d, f, x);
      pinned[s] = 1;
      // The inner slice must solve its own slice equation.
      Cochain t = odetail::slice_target(d, f, s);
      Cochain delta = group_delta(f.NV.group, fam[s]);
      require(delta.v == t.v, "inner values do not solve the slice equation");
    }
  }

  std::vector<long> rhs = odetail::composition_failure(d, f, fam);

  // The failure must be character-valued; anything else means the family
  // does not consist of solutions of the slice equations.
  for (int g = 0; g < nS; ++g)
    for (int h = 0; h < nS; ++h)
      for (int x = 0; x < nN; ++x)
        for (int y = 0; y < nN; ++y) {
          long vx = rhs[((size_t)g * nS + h) * nN + x];
          long vy = rhs[((size_t)g * nS + h) * nN + y];
          long vxy = rhs[((size_t)g * nS + h) * nN + f.NV.group.mul(x, y)];
          require(zdetail::pos(vx + vy - vxy, m) == 0,
                  "composition failure is not character-valued");
        }

  // Unknown index for theta[g](x), over free g and x != e.
  std::vector<int> slot(nS, -1);
  int nfree = 0;
  for (int g = 0; g < nS; ++g)
    if (!pinned[g]) slot[g] = nfree++;
  const int u = nfree * (nN - 1);
  auto uidx = [&](int g, int x) { return slot[g] * (nN - 1) + (x - 1); };

  std::vector<long> a, b;
  size_t rows = 0;
  auto add_row = [&](const std::vector<long>& row, long rr) {
    a.insert(a.end(), row.begin(), row.end());
    b.push_back(zdetail::pos(rr, m));
    ++rows;
  };

  // Character rows for each free slot.
  for (int g = 0; g < nS; ++g) {
    if (pinned[g]) continue;
    for (int x = 1; x < nN; ++x)
      for (int y = 1; y < nN; ++y) {
        int xy = f.NV.group.mul(x, y);
        std::vector<long> row(u, 0);
        row[uidx(g, x)] += 1;
        row[uidx(g, y)] += 1;
        if (xy != 0) row[uidx(g, xy)] -= 1;
        add_row(row, 0);
      }
  }
  // Matching rows: a_g theta[h](x) - theta[gh](x) + theta[g](hxh^-1) = rhs.
  for (int g = 0; g < nS; ++g) {
    long ag = ddetail::mult_of(d, g);
    for (int h = 0; h < nS; ++h) {
      int gh = f.SV.group.mul(g, h);
      for (int x = 1; x < nN; ++x) {
        std::vector<long> row(u, 0);
        if (!pinned[h]) row[uidx(h, x)] += ag;
        if (!pinned[gh]) row[uidx(gh, x)] -= 1;
        int xc = f.conj_n(h, x);
        if (!pinned[g] && xc != 0) row[uidx(g, xc)] += 1;
        add_row(row, rhs[((size_t)g * nS + h) * nN + x]);
      }
    }
  }

  ZmodSolution sol = solve_zmod(a, b, rows, (size_t)u, m);
  SecondObstruction out;
  if (align_inner) {
    out.vanishes_aligned = sol.solvable;
    if (sol.solvable) {
      // Corrected slices assemble into a full table.
      std::vector<long> table((size_t)nS * nN, 0);
      for (int g = 0; g < nS; ++g)
        for (int x = 0; x < nN; ++x) {
          long th = 0;
          if (!pinned[g] && x != 0) th = sol.particular[uidx(g, x)];
          table[(size_t)g * nN + x] = zdetail::pos(fam[g].v[x] - th, m);
        }
      GaloisDatum full = d;
      full.gamma = table;
      ValidationReport check = validate_datum(full);
      require(check.ok, "corrected family does not validate");
      out.witness_gamma = std::move(table);
    }
  } else {
    out.vanishes = sol.solvable;
  }
  return out;
}

// First differential of the two-sided complex behind the second
// obstruction: families of maps N -> Z/m indexed by S, with the Galois
// multiplier acting on the left and conjugation on the right.  Indexed
// (g, h) -> x, flat.
inline std::vector<long> hochschild_d1(const GaloisDatum& d,
                                       const GammaFamily& fam) {
  DatumFrame f = datum_frame(d);
  require((int)fam.size() == f.nS(), "family must have one slice per element");
  return odetail::composition_failure(d, f, fam);
}

// Second differential of the same complex, on tables indexed (g, h) -> x.
// Output is indexed (g, h, l) -> x, flat.
inline std::vector<long> hochschild_d2(const GaloisDatum& d,
                                       const std::vector<long>& F) {
  DatumFrame f = datum_frame(d);
  const int nS = f.nS(), nN = f.nN();
  require((int)F.size() == nS * nS * nN, "table has the wrong size");
  std::vector<long> out((size_t)nS * nS * nS * nN, 0);
  for (int g = 0; g < nS; ++g) {
    long a = ddetail::mult_of(d, g);
    for (int h = 0; h < nS; ++h) {
      int gh = f.SV.group.mul(g, h);
      for (int l = 0; l < nS; ++l) {
        int hl = f.SV.group.mul(h, l);
        for (int x = 0; x < nN; ++x) {
          long v = a * F[((size_t)h * nS + l) * nN + x] -
                   F[((size_t)gh * nS + l) * nN + x] +
                   F[((size_t)g * nS + hl) * nN + x] -
                   F[((size_t)g * nS + h) * nN + f.conj_n(l, x)];
          out[(((size_t)g * nS + h) * nS + l) * nN + x] = zdetail::pos(v, f.m);
        }
      }
    }
  }
  return out;
}

// Full pipeline: first obstruction, then both second-stage variants.
inline ObstructionReport obstruction_report(const GaloisDatum& d) {
  ObstructionReport out;
  out.first = first_obstruction(d);
  if (!out.first.vanishes) return out;
  out.second_defined = true;
  SecondObstruction free_run = second_obstruction_for(d, out.first.family, false);
  SecondObstruction aligned = second_obstruction_for(d, out.first.family, true);
  out.second.vanishes = free_run.vanishes;
  out.second.vanishes_aligned = aligned.vanishes_aligned;
  out.second.witness_gamma = aligned.witness_gamma;
  out.completable = out.first.vanishes && out.second.vanishes;
  return out;
}

}  // namespace kgal
