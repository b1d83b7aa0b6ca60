#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kgal/cohomology.hpp"
#include "kgal/common.hpp"
#include "kgal/group.hpp"
#include "kgal/linalg.hpp"
#include "kgal/tower.hpp"

// Finite dimensional k-algebras with an action of a finite group G by
// algebra automorphisms, given by exact structure constants.  The Galois
// property over the dual group algebra of G is decided by the bijectivity
// of two explicit matrices built from the multiplication and the action.

namespace kgal {

// Sparse coordinate vector, entries sorted by index, coefficients nonzero.
using SparseVec = std::vector<std::pair<int, Scalar>>;

// k-algebra map from the top field K into the algebra: embed[a] is the
// image of the a-th k-basis element of K.  The image is central and
// embed(1) is an idempotent cutting out a distinguished simple block.
struct CenterPresentation {
  std::vector<std::vector<Scalar>> embed;
};

struct EquivariantAlgebra {
  FieldTower K;    // coefficient tower; entries lie in the fixed field k
  FiniteGroup G;   // acting group
  int dim = 0;     // dimension over k

  // mult[i*dim + j] lists the nonzero coordinates of e_i e_j.
  std::vector<SparseVec> mult;
  std::vector<Scalar> unit;  // dense coordinates of 1
  // act[g][j] lists the nonzero coordinates of g . e_j.
  std::vector<std::vector<SparseVec>> act;

  std::optional<CenterPresentation> kpres;

  std::vector<Scalar> zero_vec() const {
    return std::vector<Scalar>((size_t)dim, K.zero());
  }

  std::vector<Scalar> basis_vec(int i) const {
    auto v = zero_vec();
    v[i] = K.one();
    return v;
  }

  std::vector<Scalar> mult_vec(const std::vector<Scalar>& a,
                               const std::vector<Scalar>& b) const {
    auto out = zero_vec();
    for (int i = 0; i < dim; ++i) {
      if (is_zero(a[i])) continue;
      for (int j = 0; j < dim; ++j) {
        if (is_zero(b[j])) continue;
        Scalar c = a[i] * b[j];
        for (const auto& [r, s] : mult[(size_t)i * dim + j])
          out[r] = out[r] + c * s;
      }
    }
    return out;
  }

  std::vector<Scalar> act_vec(int g, const std::vector<Scalar>& v) const {
    auto out = zero_vec();
    for (int j = 0; j < dim; ++j) {
      if (is_zero(v[j])) continue;
      for (const auto& [r, s] : act[g][j]) out[r] = out[r] + v[j] * s;
    }
    return out;
  }

  // Image of a field element under the center presentation.
  std::vector<Scalar> embed_scalar(const Scalar& beta) const {
    require(kpres.has_value(), "algebra carries no center presentation");
    auto w = K.express_in_k_basis(beta);
    auto out = zero_vec();
    for (size_t a = 0; a < w.size(); ++a)
      for (int i = 0; i < dim; ++i)
        out[i] = out[i] + w[a] * kpres->embed[a][i];
    return out;
  }
};

namespace adetail {

inline bool vec_eq(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace adetail

// Full consistency check: associativity, two-sided unit, and G acting by
// algebra automorphisms.  Cost grows with dim^3, intended for tests and
// for validating externally supplied algebras of modest size.
inline bool algebra_ok(const EquivariantAlgebra& A) {
  const int d = A.dim;
  if ((int)A.mult.size() != d * d || (int)A.unit.size() != d) return false;
  if ((int)A.act.size() != A.G.n) return false;
  for (int g = 0; g < A.G.n; ++g)
    if ((int)A.act[g].size() != d) return false;

  for (int i = 0; i < d; ++i) {
    auto e = A.basis_vec(i);
    if (!adetail::vec_eq(A.mult_vec(A.unit, e), e)) return false;
    if (!adetail::vec_eq(A.mult_vec(e, A.unit), e)) return false;
  }

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      auto ij = A.mult_vec(A.basis_vec(i), A.basis_vec(j));
      for (int l = 0; l < d; ++l) {
        auto lhs = A.mult_vec(ij, A.basis_vec(l));
        auto rhs = A.mult_vec(
            A.basis_vec(i), A.mult_vec(A.basis_vec(j), A.basis_vec(l)));
        if (!adetail::vec_eq(lhs, rhs)) return false;
      }
    }

  // Identity acts trivially, the action composes, automorphisms fix 1 and
  // respect products.
  for (int j = 0; j < d; ++j) {
    auto e = A.basis_vec(j);
    if (!adetail::vec_eq(A.act_vec(0, e), e)) return false;
  }
  for (int g = 0; g < A.G.n; ++g) {
    if (!adetail::vec_eq(A.act_vec(g, A.unit), A.unit)) return false;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        auto lhs = A.act_vec(g, A.mult_vec(A.basis_vec(i), A.basis_vec(j)));
        auto rhs = A.mult_vec(A.act_vec(g, A.basis_vec(i)),
                              A.act_vec(g, A.basis_vec(j)));
        if (!adetail::vec_eq(lhs, rhs)) return false;
      }
  }
  for (int g = 0; g < A.G.n; ++g)
    for (int h = 0; h < A.G.n; ++h) {
      int gh = A.G.mul(g, h);
      for (int j = 0; j < d; ++j) {
        auto lhs = A.act_vec(g, A.act_vec(h, A.basis_vec(j)));
        auto rhs = A.act_vec(gh, A.basis_vec(j));
        if (!adetail::vec_eq(lhs, rhs)) return false;
      }
    }
  return true;
}

// The dual group algebra k^G with the translation action g . e_h = e_{h g^-1},
// the motivating trivial Galois object.
inline EquivariantAlgebra dual_group_algebra(const FieldTower& K,
                                             const FiniteGroup& G) {
  require(K.K_over_k() == 1,
          "dual group algebra wants a trivial extension K = k");
  EquivariantAlgebra A;
  A.K = K;
  A.G = G;
  A.dim = G.n;
  A.mult.assign((size_t)G.n * G.n, {});
  for (int i = 0; i < G.n; ++i)
    A.mult[(size_t)i * G.n + i] = {{i, K.one()}};
  A.unit.assign(G.n, K.one());
  A.act.assign(G.n, std::vector<SparseVec>(G.n));
  for (int g = 0; g < G.n; ++g)
    for (int h = 0; h < G.n; ++h)
      A.act[g][h] = {{G.mul(h, G.inv(g)), K.one()}};
  CenterPresentation cp;
  cp.embed = {A.basis_vec(0)};
  A.kpres = std::move(cp);
  return A;
}

/**
 * Twisted group algebra B = K_sigma N with the gamma-twisted semilinear
 * S-action.  Basis element x*[K:k] + a is beta_a u_x where beta_0, ... is
 * the designated k-basis of K and u_x the twisted group element:
 *
 *   (beta u_x)(beta' u_y) = beta beta' sigma(x,y) u_{xy}
 *   s . (beta u_x)        = sbar(beta) gamma(s,x) u_{s x s^-1}
 *
 * sigma is an exponent table over the subgroup view of N with modulus equal
 * to the root order of the tower; gamma is a flat |S| x |N| exponent table;
 * gal_of sends each element of S to its Galois group index.
 */
inline EquivariantAlgebra twisted_group_algebra(const FieldTower& K,
                                               const FiniteGroup& S,
                                               const Subgroup& N,
                                               const Cochain& sigma,
                                               const std::vector<long>& gamma,
                                               const std::vector<int>& gal_of) {
  SubgroupView view = subgroup_as_group(S, N);
  const int nN = view.group.n;
  const int Kk = (int)K.K_over_k();
  require(sigma.degree == 2 && sigma.n == nN, "cocycle does not match N");
  require(sigma.mod == K.root_order(), "cocycle modulus does not match tower");
  require((int)gamma.size() == S.n * nN, "gamma table size mismatch");
  require((int)gal_of.size() == S.n, "Galois labelling size mismatch");
  require(Kk * nN == S.n, "tower degree does not match the index of N");
  Subgroup all(S.n);
  for (int i = 0; i < S.n; ++i) all[i] = i;
  require(is_normal_in(S, N, all), "N must be normal in S");

  EquivariantAlgebra B;
  B.K = K;
  B.G = S;
  B.dim = nN * Kk;
  const int d = B.dim;
  auto kb = K.k_basis();
  auto idx = [&](int x, int a) { return x * Kk + a; };

  B.mult.assign((size_t)d * d, {});
  for (int x = 0; x < nN; ++x)
    for (int a = 0; a < Kk; ++a)
      for (int y = 0; y < nN; ++y)
        for (int b = 0; b < Kk; ++b) {
          Scalar z = kb[a] * kb[b] * K.root_of_unity(sigma.at(x, y));
          auto w = K.express_in_k_basis(z);
          int xy = view.group.mul(x, y);
          SparseVec& cell = B.mult[(size_t)idx(x, a) * d + idx(y, b)];
          for (int c = 0; c < Kk; ++c)
            if (!is_zero(w[c])) cell.push_back({idx(xy, c), w[c]});
        }

  B.unit = B.zero_vec();
  B.unit[idx(0, 0)] = K.one();

  B.act.assign(S.n, std::vector<SparseVec>(d));
  for (int s = 0; s < S.n; ++s)
    for (int x = 0; x < nN; ++x) {
      int xs = view.from_parent[S.conj(s, view.to_parent[x])];
      require(xs >= 0, "conjugation leaves N");
      for (int a = 0; a < Kk; ++a) {
        Scalar z = K.apply_aut(gal_of[s], kb[a]) *
                   K.root_of_unity(gamma[(size_t)s * nN + x]);
        auto w = K.express_in_k_basis(z);
        SparseVec& col = B.act[s][idx(x, a)];
        for (int c = 0; c < Kk; ++c)
          if (!is_zero(w[c])) col.push_back({idx(xs, c), w[c]});
      }
    }

  CenterPresentation cp;
  for (int a = 0; a < Kk; ++a) cp.embed.push_back(B.basis_vec(idx(0, a)));
  B.kpres = std::move(cp);
  return B;
}

/**
 * Induction of an S-equivariant algebra B to G: the algebra of functions
 * r : G -> B with r(s g) = s . r(g), pointwise product, translation action
 * (g . r)(x) = r(x g).  Basis element i*dim(B) + c is the function
 * supported on the right coset S g_i with value e_c at the representative
 * g_i; representatives come from coset_representatives with the identity
 * first, so block 0 carries the center presentation of B.
 */
inline EquivariantAlgebra induced_algebra(const EquivariantAlgebra& B,
                                          const FiniteGroup& G,
                                          const Subgroup& S) {
  SubgroupView view = subgroup_as_group(G, S);
  require(B.G.same_table(view.group),
          "algebra group does not match the subgroup view");
  std::vector<int> reps = coset_representatives(G, S);
  const int t = (int)reps.size();
  const int dB = B.dim;
  require(reps[0] == 0, "identity coset must come first");

  std::vector<int> coset_of(G.n, -1);
  for (int i = 0; i < t; ++i)
    for (int s : S) coset_of[G.mul(s, reps[i])] = i;

  EquivariantAlgebra A;
  A.K = B.K;
  A.G = G;
  A.dim = t * dB;
  const int d = A.dim;
  auto idx = [&](int i, int c) { return i * dB + c; };

  A.mult.assign((size_t)d * d, {});
  for (int i = 0; i < t; ++i)
    for (int c = 0; c < dB; ++c)
      for (int c2 = 0; c2 < dB; ++c2) {
        SparseVec& cell = A.mult[(size_t)idx(i, c) * d + idx(i, c2)];
        for (const auto& [r, s] : B.mult[(size_t)c * dB + c2])
          cell.push_back({idx(i, r), s});
      }

  A.unit = A.zero_vec();
  for (int i = 0; i < t; ++i)
    for (int c = 0; c < dB; ++c) A.unit[idx(i, c)] = B.unit[c];

  A.act.assign(G.n, std::vector<SparseVec>(d));
  for (int g = 0; g < G.n; ++g)
    for (int i = 0; i < t; ++i) {
      int j = coset_of[G.mul(reps[i], G.inv(g))];
      int s = view.from_parent[G.mul(G.mul(reps[j], g), G.inv(reps[i]))];
      require(s >= 0, "coset bookkeeping broke");
      for (int c = 0; c < dB; ++c) {
        SparseVec& col = A.act[g][idx(i, c)];
        for (const auto& [r, sc] : B.act[s][c]) col.push_back({idx(j, r), sc});
      }
    }

  if (B.kpres) {
    CenterPresentation cp;
    for (const auto& e : B.kpres->embed) {
      auto v = A.zero_vec();
      for (int c = 0; c < dB; ++c) v[idx(0, c)] = e[c];
      cp.embed.push_back(std::move(v));
    }
    A.kpres = std::move(cp);
  }
  return A;
}

// Matrix of theta : A # kG -> End_k(A), theta(a x g)(b) = a (g . b).
// Rows are End coordinates (r, j) -> r*dim + j (entry r of the image of
// e_j); columns are (i, g) -> i*|G| + g.
inline MatrixOf<ScalarFieldOps> theta_matrix(const EquivariantAlgebra& A) {
  const int d = A.dim, n = A.G.n;
  ScalarFieldOps F = A.K.ops();
  MatrixOf<ScalarFieldOps> M((size_t)d * d,
                             std::vector<Scalar>((size_t)d * n, F.zero()));
  for (int i = 0; i < d; ++i)
    for (int g = 0; g < n; ++g) {
      size_t col = (size_t)i * n + g;
      for (int j = 0; j < d; ++j) {
        auto img = A.mult_vec(A.basis_vec(i),
                              A.act_vec(g, A.basis_vec(j)));
        for (int r = 0; r < d; ++r)
          if (!is_zero(img[r])) M[(size_t)r * d + j][col] = img[r];
      }
    }
  return M;
}

// Matrix of can : A (x) A -> A (x) k^G, a (x) b -> sum_g a (g . b) (x) e_g.
// Rows are (r, g) -> r*|G| + g; columns are (i, j) -> i*dim + j.
inline MatrixOf<ScalarFieldOps> canonical_map_matrix(
    const EquivariantAlgebra& A) {
  const int d = A.dim, n = A.G.n;
  ScalarFieldOps F = A.K.ops();
  MatrixOf<ScalarFieldOps> M((size_t)d * n,
                             std::vector<Scalar>((size_t)d * d, F.zero()));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      size_t col = (size_t)i * d + j;
      for (int g = 0; g < n; ++g) {
        auto img = A.mult_vec(A.basis_vec(i), A.act_vec(g, A.basis_vec(j)));
        for (int r = 0; r < d; ++r)
          if (!is_zero(img[r])) M[(size_t)r * n + g][col] = img[r];
      }
    }
  return M;
}

// Basis of the fixed subalgebra A^G as kernel of the stacked operators
// (g - 1).
inline MatrixOf<ScalarFieldOps> fixed_subalgebra(const EquivariantAlgebra& A) {
  const int d = A.dim;
  ScalarFieldOps F = A.K.ops();
  MatrixOf<ScalarFieldOps> rows;
  for (int g = 1; g < A.G.n; ++g) {
    MatrixOf<ScalarFieldOps> m((size_t)d,
                               std::vector<Scalar>((size_t)d, F.zero()));
    for (int j = 0; j < d; ++j)
      for (const auto& [r, s] : A.act[g][j]) m[r][j] = F.add(m[r][j], s);
    for (int j = 0; j < d; ++j) m[j][j] = F.sub(m[j][j], F.one());
    for (auto& row : m) rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    // trivial group: everything is fixed
    MatrixOf<ScalarFieldOps> id((size_t)d,
                                std::vector<Scalar>((size_t)d, F.zero()));
    for (int j = 0; j < d; ++j) id[j][j] = F.one();
    return id;
  }
  return kernel_basis(F, rows, (size_t)d);
}

struct GaloisReport {
  bool dim_ok = false;
  bool theta_bijective = false;
  bool can_bijective = false;
  long fixed_dim = 0;
  bool verdict = false;
};

// Full Galois verification: dimension |G|, bijectivity of theta and of the
// canonical map, and trivial fixed subalgebra.  Cost is two eliminations of
// size dim^2, so this is for small ambient groups; larger instances go
// through the block-diagonal fast path at the datum level.
inline GaloisReport verify_galois(const EquivariantAlgebra& A) {
  GaloisReport rep;
  const int d = A.dim, n = A.G.n;
  ScalarFieldOps F = A.K.ops();
  rep.dim_ok = (d == n);
  rep.fixed_dim = (long)fixed_subalgebra(A).size();
  {
    auto th = theta_matrix(A);
    size_t rank = rank_of(F, th, (size_t)d * n);
    rep.theta_bijective = ((size_t)d * d == (size_t)d * n) &&
                          rank == (size_t)d * d;
  }
  {
    auto cn = canonical_map_matrix(A);
    size_t rank = rank_of(F, cn, (size_t)d * d);
    rep.can_bijective = ((size_t)d * d == (size_t)d * n) &&
                        rank == (size_t)d * d;
  }
  rep.verdict = rep.dim_ok && rep.theta_bijective && rep.can_bijective &&
                rep.fixed_dim == 1;
  return rep;
}

}  // namespace kgal
