#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "kgal/algebra.hpp"
#include "kgal/common.hpp"
#include "kgal/datum.hpp"
#include "kgal/group.hpp"
#include "kgal/linalg.hpp"
#include "kgal/tower.hpp"

// The translation grading of an equivariant algebra: the degree-g
// component consists of the elements a with a b = (g . b) a for every b.
// On the distinguished block of a built object the components recover the
// twisted group algebra basis, and from them the entire construction
// datum.

namespace kgal {

// Basis of the degree-g component over the scalars, by direct elimination.
// Intended for small objects; the recovery below works blockwise over the
// presented field instead.
inline std::vector<std::vector<Scalar>> grading_component(
    const EquivariantAlgebra& A, int g) {
  ScalarFieldOps F = A.K.ops();
  const int d = A.dim;
  MatrixOf<ScalarFieldOps> rows;
  rows.reserve((size_t)d * d);
  for (int j = 0; j < d; ++j) {
    std::vector<Scalar> gj = A.act_vec(g, A.basis_vec(j));
    // Column i of the two maps a -> a e_j and a -> (g . e_j) a.
    MatrixOf<ScalarFieldOps> cols(d);
    for (int i = 0; i < d; ++i) {
      std::vector<Scalar> v1 = A.mult_vec(A.basis_vec(i), A.basis_vec(j));
      std::vector<Scalar> v2 = A.mult_vec(gj, A.basis_vec(i));
      cols[i].resize(d);
      for (int r = 0; r < d; ++r) cols[i][r] = F.sub(v1[r], v2[r]);
    }
    for (int r = 0; r < d; ++r) {
      std::vector<Scalar> row(d);
      for (int i = 0; i < d; ++i) row[i] = cols[i][r];
      rows.push_back(std::move(row));
    }
  }
  return kernel_basis(F, rows, (size_t)d);
}

struct GradingSummary {
  std::vector<int> support;  // group elements with nonzero component
  std::vector<int> dims;     // parallel to support, dimensions over k
  int total = 0;
};

inline GradingSummary mu_grading(const EquivariantAlgebra& A) {
  GradingSummary out;
  for (int g = 0; g < A.G.n; ++g) {
    int dim = (int)grading_component(A, g).size();
    if (dim > 0) {
      out.support.push_back(g);
      out.dims.push_back(dim);
      out.total += dim;
    }
  }
  return out;
}

struct RecoveredDatum {
  GaloisDatum datum;
  // Chosen generators u_x of the graded components of the distinguished
  // block, as dense coordinate vectors of the input algebra, indexed by
  // the local order of N.  u_e is the block unit.
  std::vector<std::vector<Scalar>> units;
};

/**
 * Recover the construction datum of a built object.  Requires the field
 * presentation stored with the object: its unit idempotent cuts out the
 * distinguished block, whose stabilizer is S; the action on the embedded
 * field yields the Galois labelling, whose kernel is N; the block is
 * graded over N by rank-one components over the field, and the structure
 * constants of their generators give back sigma and gamma.  The result is
 * re-validated before it is returned.
 */
inline RecoveredDatum recover_datum_full(const EquivariantAlgebra& A) {
  require(A.kpres.has_value(),
          "object carries no field presentation; recovery is defined for "
          "built objects");
  const FieldTower& K = A.K;
  ScalarFieldOps F = K.ops();
  const int d = A.dim;
  const long Kk = K.K_over_k();

  std::vector<Scalar> f0 = A.embed_scalar(K.one());

  // S = stabilizer of the distinguished idempotent.
  Subgroup S_parent;
  for (int g = 0; g < A.G.n; ++g)
    if (adetail::vec_eq(A.act_vec(g, f0), f0)) S_parent.push_back(g);
  require(is_subgroup(A.G, S_parent), "idempotent stabilizer is not a subgroup");
  SubgroupView SV = subgroup_as_group(A.G, S_parent);
  const int nS = SV.group.n;

  // The distinguished block f0 A as a standalone algebra over S.
  ReducedBasis<ScalarFieldOps> span_b((size_t)d);
  for (int i = 0; i < d; ++i)
    rb_insert(F, span_b, A.mult_vec(f0, A.basis_vec(i)));
  const int dB = (int)span_b.rank();
  require((size_t)dB * (size_t)(A.G.n / nS) == (size_t)d,
          "block dimension is incompatible with the stabilizer index");
  auto express = [&](const std::vector<Scalar>& v, const char* what) {
    auto w = express_in_basis(F, span_b, v);
    if (!w) throw invalid_input(what);
    return *w;
  };

  EquivariantAlgebra B;
  B.K = K;
  B.G = SV.group;
  B.dim = dB;
  B.mult.resize((size_t)dB * dB);
  for (int c = 0; c < dB; ++c)
    for (int c2 = 0; c2 < dB; ++c2) {
      std::vector<Scalar> w = express(
          A.mult_vec(span_b.rows[c], span_b.rows[c2]),
          "block is not closed under multiplication");
      SparseVec sv;
      for (int r = 0; r < dB; ++r)
        if (!F.is_zero(w[r])) sv.push_back({r, w[r]});
      B.mult[(size_t)c * dB + c2] = std::move(sv);
    }
  B.unit = express(f0, "block unit escapes the block");
  B.act.assign(nS, std::vector<SparseVec>(dB));
  for (int s = 0; s < nS; ++s)
    for (int c = 0; c < dB; ++c) {
      std::vector<Scalar> w = express(
          A.act_vec(S_parent[s], span_b.rows[c]),
          "stabilizer action does not preserve the block");
      SparseVec sv;
      for (int r = 0; r < dB; ++r)
        if (!F.is_zero(w[r])) sv.push_back({r, w[r]});
      B.act[s][c] = std::move(sv);
    }
  CenterPresentation bp;
  bp.embed.resize(Kk);
  for (long a = 0; a < Kk; ++a)
    bp.embed[a] = express(A.kpres->embed[a],
                          "field presentation escapes the block");
  B.kpres = bp;

  // Galois labelling: match the action on the embedded field against the
  // tower automorphisms.
  std::vector<Scalar> kb = K.k_basis();
  const FiniteGroup& gal = K.galois_group();
  std::vector<MatrixOf<ScalarFieldOps>> aut_cols(gal.n);
  for (int g = 0; g < gal.n; ++g) {
    aut_cols[g].resize(Kk);
    for (long a = 0; a < Kk; ++a)
      aut_cols[g][a] = K.express_in_k_basis(K.apply_aut(g, kb[a]));
  }
  // Rows for expressing a block vector in the embedded field basis.
  MatrixOf<ScalarFieldOps> embed_rows(dB, std::vector<Scalar>(Kk, F.zero()));
  for (long a = 0; a < Kk; ++a)
    for (int r = 0; r < dB; ++r) embed_rows[r][a] = bp.embed[a][r];
  std::vector<int> gal_of(nS, -1);
  for (int s = 0; s < nS; ++s) {
    MatrixOf<ScalarFieldOps> got(Kk);
    for (long a = 0; a < Kk; ++a) {
      std::vector<Scalar> img = B.act_vec(s, bp.embed[a]);
      auto coords = solve_linear(F, embed_rows, img, (size_t)Kk);
      require(coords.has_value(),
              "action does not preserve the embedded field");
      got[a] = *coords;
    }
    for (int g = 0; g < gal.n; ++g) {
      bool match = true;
      for (long a = 0; a < Kk && match; ++a)
        for (long b = 0; b < Kk && match; ++b)
          if (!F.eq(got[a][b], aut_cols[g][a][b])) match = false;
      if (match) {
        gal_of[s] = g;
        break;
      }
    }
    require(gal_of[s] >= 0,
            "action on the embedded field is not a tower automorphism");
  }

  std::vector<int> N_local;
  for (int s = 0; s < nS; ++s)
    if (gal_of[s] == 0) N_local.push_back(s);
  require(is_subgroup(SV.group, N_local), "labelling kernel is not a subgroup");
  SubgroupView NV = subgroup_as_group(SV.group, N_local);
  const int nN = NV.group.n;

  // Greedy basis of the block over the embedded field.
  const std::vector<std::vector<Scalar>>& bemb = bp.embed;
  ReducedBasis<ScalarFieldOps> acc((size_t)dB);
  std::vector<int> kbase;                 // chosen coordinate indices
  MatrixOf<ScalarFieldOps> P;             // columns (z, a) as block vectors
  for (int c = 0; c < dB; ++c) {
    std::vector<Scalar> probe = B.basis_vec(c);
    if (express_in_basis(F, acc, probe).has_value()) continue;
    for (long a = 0; a < Kk; ++a) {
      std::vector<Scalar> w = B.mult_vec(bemb[a], B.basis_vec(c));
      require(rb_insert(F, acc, w),
              "block is not free over the embedded field");
      P.push_back(std::move(w));
    }
    kbase.push_back(c);
  }
  require(acc.rank() == (size_t)dB, "field basis does not span the block");
  const int dK = (int)kbase.size();
  require(dK == nN,
          "field rank of the block does not match the labelling kernel");

  // P has columns (z, a); invert to read coordinates over the field.
  MatrixOf<ScalarFieldOps> Pm(dB, std::vector<Scalar>(dB, F.zero()));
  for (int col = 0; col < dB; ++col)
    for (int r = 0; r < dB; ++r) Pm[r][col] = P[col][r];
  auto Pinv_opt = matrix_inverse(F, Pm);
  require(Pinv_opt.has_value(), "field coordinate matrix is singular");
  const MatrixOf<ScalarFieldOps>& Pinv = *Pinv_opt;

  // Coordinates of a block vector over the embedded field.
  auto kcoords = [&](const std::vector<Scalar>& v) {
    std::vector<Scalar> w(dB, F.zero());
    for (int i = 0; i < dB; ++i) {
      if (F.is_zero(v[i])) continue;
      for (int r = 0; r < dB; ++r)
        if (!F.is_zero(Pinv[r][i])) w[r] = F.add(w[r], F.mul(Pinv[r][i], v[i]));
    }
    std::vector<Scalar> out((size_t)dK, F.zero());
    for (int z = 0; z < dK; ++z)
      for (long a = 0; a < Kk; ++a)
        if (!F.is_zero(w[(size_t)z * Kk + a]))
          out[z] = F.add(out[z], F.mul(w[(size_t)z * Kk + a], kb[a]));
    return out;
  };

  // Rank-one graded components over the field, one per element of N.
  std::vector<std::vector<Scalar>> ucoord(nN);  // field coordinates
  std::vector<std::vector<Scalar>> uvec(nN);    // block coordinates
  for (int x = 0; x < nN; ++x) {
    int sx = NV.to_parent[x];
    ReducedBasis<ScalarFieldOps> cond((size_t)dK);
    for (int j = 0; j < dB; ++j) {
      std::vector<Scalar> bj = B.basis_vec(j);
      std::vector<Scalar> abj = B.act_vec(sx, bj);
      // Row block: field coordinates of v_z e_j - (sx . e_j) v_z.
      MatrixOf<ScalarFieldOps> colk(dK);
      for (int z = 0; z < dK; ++z) {
        std::vector<Scalar> v1 = B.mult_vec(B.basis_vec(kbase[z]), bj);
        std::vector<Scalar> v2 = B.mult_vec(abj, B.basis_vec(kbase[z]));
        for (int r = 0; r < dB; ++r) v1[r] = F.sub(v1[r], v2[r]);
        colk[z] = kcoords(v1);
      }
      for (int r = 0; r < dK; ++r) {
        std::vector<Scalar> row((size_t)dK);
        for (int z = 0; z < dK; ++z) row[z] = colk[z][r];
        rb_insert(F, cond, std::move(row));
      }
      if (cond.rank() == (size_t)dK) break;  // kernel already empty
    }
    MatrixOf<ScalarFieldOps> kern = kernel_from_reduced(F, cond);
    require(kern.size() == 1,
            "graded component is not of rank one over the field");
    ucoord[x] = kern[0];
    std::vector<Scalar> v(dB, F.zero());
    for (int z = 0; z < dK; ++z) {
      if (F.is_zero(kern[0][z])) continue;
      std::vector<Scalar> term =
          B.mult_vec(B.embed_scalar(kern[0][z]), B.basis_vec(kbase[z]));
      for (int r = 0; r < dB; ++r) v[r] = F.add(v[r], term[r]);
    }
    uvec[x] = std::move(v);
  }

  // Normalize the identity component to the unit of the block.
  {
    std::vector<Scalar> unit_k = kcoords(B.unit);
    // The unit must be proportional to the computed generator.
    int z0 = -1;
    for (int z = 0; z < dK && z0 < 0; ++z)
      if (!F.is_zero(ucoord[0][z])) z0 = z;
    require(z0 >= 0 && !F.is_zero(unit_k[z0]),
            "unit is not supported on the identity component");
    Scalar lam = F.div(unit_k[z0], ucoord[0][z0]);
    for (int z = 0; z < dK; ++z)
      require(F.eq(unit_k[z], F.mul(lam, ucoord[0][z])),
              "unit does not lie in the identity component");
    ucoord[0] = unit_k;
    uvec[0] = B.unit;
  }

  // Components of distinct degrees must be independent and fill the block.
  {
    ReducedBasis<ScalarFieldOps> indep((size_t)dK);
    for (int x = 0; x < nN; ++x)
      require(rb_insert(F, indep, ucoord[x]),
              "graded components are not independent");
    require(indep.rank() == (size_t)dK, "graded components do not span");
  }

  // lambda with w = lambda * t, exact.
  auto ratio = [&](const std::vector<Scalar>& w, const std::vector<Scalar>& t,
                   const char* what) {
    int z0 = -1;
    for (int z = 0; z < dK && z0 < 0; ++z)
      if (!F.is_zero(t[z])) z0 = z;
    require(z0 >= 0, "degenerate component generator");
    Scalar lam = F.div(w[z0], t[z0]);
    for (int z = 0; z < dK; ++z)
      if (!F.eq(w[z], F.mul(lam, t[z]))) throw invalid_input(what);
    return lam;
  };
  auto exponent = [&](const Scalar& lam, const char* what) {
    auto e = K.exponent_of(lam);
    if (!e) throw invalid_input(what);
    return *e;
  };

  Cochain sigma = zero_cochain(2, nN, K.root_order());
  for (int x = 0; x < nN; ++x)
    for (int y = 0; y < nN; ++y) {
      std::vector<Scalar> w = kcoords(B.mult_vec(uvec[x], uvec[y]));
      int xy = NV.group.mul(x, y);
      Scalar lam = ratio(w, ucoord[xy],
                         "component products do not respect the grading");
      sigma.ref(x, y) = exponent(
          lam, "graded structure constant outside the designated roots of unity");
    }

  std::vector<long> gamma((size_t)nS * nN, 0);
  for (int s = 0; s < nS; ++s)
    for (int x = 0; x < nN; ++x) {
      int xc = NV.from_parent[SV.group.conj(s, NV.to_parent[x])];
      require(xc >= 0, "action does not normalize the graded support");
      std::vector<Scalar> w = kcoords(B.act_vec(s, uvec[x]));
      Scalar lam =
          ratio(w, ucoord[xc], "action does not permute the graded components");
      gamma[(size_t)s * nN + x] = exponent(
          lam, "action twist outside the designated roots of unity");
    }

  GaloisDatum out;
  out.K = K;
  out.G = A.G;
  out.S = S_parent;
  for (int x : N_local) out.N.push_back(SV.to_parent[x]);
  std::sort(out.N.begin(), out.N.end());
  out.gal_of = gal_of;
  out.sigma = sigma;
  out.gamma = gamma;

  ValidationReport rep = validate_datum(out);
  if (!rep.ok) {
    std::string why = "recovered datum fails validation:";
    for (const auto& it : rep.items)
      if (!it.ok) why += " [" + it.check + "] " + it.detail;
    throw invalid_input(why);
  }

  RecoveredDatum full;
  full.datum = std::move(out);
  full.units.resize(nN);
  for (int x = 0; x < nN; ++x) {
    std::vector<Scalar> amb(d, F.zero());
    for (int r = 0; r < dB; ++r) {
      if (F.is_zero(uvec[x][r])) continue;
      for (int t = 0; t < d; ++t)
        amb[t] = F.add(amb[t], F.mul(uvec[x][r], span_b.rows[r][t]));
    }
    full.units[x] = std::move(amb);
  }
  return full;
}

inline GaloisDatum recover_datum(const EquivariantAlgebra& A) {
  return recover_datum_full(A).datum;
}

}  // namespace kgal
