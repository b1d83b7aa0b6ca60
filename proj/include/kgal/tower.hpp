#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kgal/common.hpp"
#include "kgal/group.hpp"
#include "kgal/linalg.hpp"
#include "kgal/polynomial.hpp"

namespace kgal {

// Coefficient arithmetic over the prime field: Q when p = 0, else F_p with
// representatives in [0,p).  Satisfies the linalg field concept.
struct PrimeFieldOps {
    long p = 0;
    using Elem = mpq_class;
    Elem zero() const { return mpq_class(0); }
    Elem one() const { return mpq_class(1); }
    bool is_zero(const Elem& a) const { return p ? poly::reduce_coeff(a, p) == 0 : a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return p ? poly::reduce_coeff(a - b, p) == 0 : a == b; }
    Elem red(const Elem& a) const { return p ? poly::reduce_coeff(a, p) : a; }
    Elem add(const Elem& a, const Elem& b) const { return red(a + b); }
    Elem sub(const Elem& a, const Elem& b) const { return red(a - b); }
    Elem mul(const Elem& a, const Elem& b) const { return red(a * b); }
    Elem neg(const Elem& a) const { return red(-a); }
    Elem div(const Elem& a, const Elem& b) const {
        if (p == 0) return a / b;
        return red(a * poly::inv_coeff(b, p));
    }
};

class TowerImpl;

/**
 * Element of the top field K of a tower, stored as coordinates in the power
 * basis of K over its prime field.  Scalars carry a pointer to their tower;
 * the tower object must outlive them.  A default-constructed Scalar is a
 * placeholder and must not be used in arithmetic.
 */
struct Scalar {
    const TowerImpl* f = nullptr;
    std::vector<mpq_class> c;

    bool valid() const { return f != nullptr; }
};

using Coords = std::vector<mpq_class>;

class TowerImpl {
public:
    // descriptor
    bool finite_field = false;
    long m = 0;                // cyclotomic: order of q
    std::vector<long> H;       // cyclotomic: unit subgroup fixing k
    long p = 0, n = 0, d = 0;  // finite: K = F_{p^n}, k = F_{p^d}

    long D = 0;       // [K : prime field]
    long char_p = 0;  // 0 or p
    long m_eff = 0;   // order of the designated root-of-unity group
    long kq = 0;      // [k : prime field]
    long Kk = 0;      // [K : k]

    PrimeFieldOps base;
    poly::Poly modulus;

    std::vector<Coords> xpow;      // x^t reduced, t < max(2D-1, m or needed)
    std::vector<Coords> zeta_pow;  // m_eff entries
    std::map<Coords, long> zeta_lookup;

    FiniteGroup gal;                            // Gal(K|k), identity = index 0
    std::vector<std::vector<Coords>> aut_mat;   // per element: D columns (images of x^j)
    std::vector<long> a_zeta;                   // exponent of each element on zeta
    std::vector<std::string> gal_labels;

    std::vector<Coords> k_basis_prime;  // basis of k over prime field, first = 1
    std::vector<Coords> k_basis_in_K;   // beta_a, first = 1
    std::vector<std::vector<mpq_class>> express_inv;  // D x D solver for k-basis expression

    std::string id;

    // ----- coordinate arithmetic -----

    Coords zero_c() const { return Coords(static_cast<size_t>(D), 0); }
    Coords one_c() const {
        Coords z = zero_c();
        z[0] = 1;
        return z;
    }
    bool is_zero_c(const Coords& a) const {
        for (const auto& v : a)
            if (!base.is_zero(base.red(v))) return false;
        return true;
    }
    bool eq_c(const Coords& a, const Coords& b) const {
        for (size_t i = 0; i < a.size(); ++i)
            if (!base.eq(a[i], b[i])) return false;
        return true;
    }
    Coords red_c(Coords a) const {
        if (base.p) for (auto& v : a) v = base.red(v);
        return a;
    }
    Coords add_c(const Coords& a, const Coords& b) const {
        Coords out(a);
        for (size_t i = 0; i < out.size(); ++i) out[i] = base.add(out[i], b[i]);
        return out;
    }
    Coords sub_c(const Coords& a, const Coords& b) const {
        Coords out(a);
        for (size_t i = 0; i < out.size(); ++i) out[i] = base.sub(out[i], b[i]);
        return out;
    }
    Coords neg_c(const Coords& a) const {
        Coords out(a);
        for (auto& v : out) v = base.neg(v);
        return out;
    }
    Coords mul_c(const Coords& a, const Coords& b) const {
        // schoolbook product, then reduction through the cached power table
        std::vector<mpq_class> conv(2 * static_cast<size_t>(D) - 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) {
                if (b[j] == 0) continue;
                conv[i + j] += a[i] * b[j];
            }
        }
        Coords out = zero_c();
        for (size_t t = 0; t < conv.size(); ++t) {
            if (conv[t] == 0) continue;
            const Coords& xt = xpow[t];
            for (long i = 0; i < D; ++i)
                if (xt[static_cast<size_t>(i)] != 0)
                    out[static_cast<size_t>(i)] += conv[t] * xt[static_cast<size_t>(i)];
        }
        return red_c(std::move(out));
    }
    Coords inv_c(const Coords& a) const {
        require(!is_zero_c(a), "division by zero scalar");
        // solve (mult-by-a) y = 1 over the prime field
        MatrixOf<PrimeFieldOps> M(static_cast<size_t>(D), Coords(static_cast<size_t>(D), 0));
        for (long j = 0; j < D; ++j) {
            Coords ej = zero_c();
            ej[static_cast<size_t>(j)] = 1;
            Coords col = mul_c(a, ej);
            for (long i = 0; i < D; ++i) M[static_cast<size_t>(i)][static_cast<size_t>(j)] = col[static_cast<size_t>(i)];
        }
        auto sol = solve_linear(base, std::move(M), one_c(), static_cast<size_t>(D));
        require(sol.has_value(), "scalar inversion failed");
        return red_c(std::move(*sol));
    }
    Coords aut_c(int g, const Coords& a) const {
        Coords out = zero_c();
        for (long j = 0; j < D; ++j) {
            if (a[static_cast<size_t>(j)] == 0) continue;
            const Coords& img = aut_mat[static_cast<size_t>(g)][static_cast<size_t>(j)];
            for (long i = 0; i < D; ++i)
                if (img[static_cast<size_t>(i)] != 0)
                    out[static_cast<size_t>(i)] += a[static_cast<size_t>(j)] * img[static_cast<size_t>(i)];
        }
        return red_c(std::move(out));
    }

    std::optional<long> exponent_of_c(const Coords& a) const {
        auto it = zeta_lookup.find(red_c(a));
        if (it == zeta_lookup.end()) return std::nullopt;
        return it->second;
    }

    bool in_k_c(const Coords& a) const {
        for (int g = 1; g < gal.n; ++g)
            if (!eq_c(aut_c(g, a), a)) return false;
        return true;
    }

    // Coefficients of alpha in the designated k-basis of K; each returned
    // coordinate vector lies in k.
    std::vector<Coords> express_c(const Coords& a) const {
        std::vector<mpq_class> y(static_cast<size_t>(D), 0);
        for (long i = 0; i < D; ++i) {
            mpq_class s = 0;
            for (long j = 0; j < D; ++j)
                if (express_inv[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0 && a[static_cast<size_t>(j)] != 0)
                    s += express_inv[static_cast<size_t>(i)][static_cast<size_t>(j)] * a[static_cast<size_t>(j)];
            y[static_cast<size_t>(i)] = base.red(s);
        }
        std::vector<Coords> out;
        for (long i = 0; i < Kk; ++i) {
            Coords ci = zero_c();
            for (long b = 0; b < kq; ++b) {
                const mpq_class& w = y[static_cast<size_t>(i * kq + b)];
                if (w == 0) continue;
                for (long t = 0; t < D; ++t)
                    ci[static_cast<size_t>(t)] += w * k_basis_prime[static_cast<size_t>(b)][static_cast<size_t>(t)];
            }
            out.push_back(red_c(std::move(ci)));
        }
        return out;
    }
};

// linalg field concept over full tower scalars, with a one-slot divisor
// inverse memo (the fraction-free elimination divides by the same pivot many
// times in a row).
struct ScalarFieldOps {
    const TowerImpl* t;
    mutable Coords memo_div, memo_inv;
    mutable bool memo_valid = false;

    using Elem = Scalar;
    explicit ScalarFieldOps(const TowerImpl* impl) : t(impl) {}

    Elem zero() const { return Scalar{t, t->zero_c()}; }
    Elem one() const { return Scalar{t, t->one_c()}; }
    bool is_zero(const Elem& a) const { return t->is_zero_c(a.c); }
    bool eq(const Elem& a, const Elem& b) const { return t->eq_c(a.c, b.c); }
    Elem add(const Elem& a, const Elem& b) const { return Scalar{t, t->add_c(a.c, b.c)}; }
    Elem sub(const Elem& a, const Elem& b) const { return Scalar{t, t->sub_c(a.c, b.c)}; }
    Elem mul(const Elem& a, const Elem& b) const { return Scalar{t, t->mul_c(a.c, b.c)}; }
    Elem neg(const Elem& a) const { return Scalar{t, t->neg_c(a.c)}; }
    Elem div(const Elem& a, const Elem& b) const {
        if (!memo_valid || !t->eq_c(memo_div, b.c)) {
            memo_div = b.c;
            memo_inv = t->inv_c(b.c);
            memo_valid = true;
        }
        return Scalar{t, t->mul_c(a.c, memo_inv)};
    }
};

/**
 * Handle to an immutable field tower k <= K with its distinguished finite
 * multiplicative group mu = <zeta> of order m_eff and the Galois group
 * Gal(K|k) acting on it.
 *
 * Cyclotomic backend: K = Q(q) with q a primitive m-th root of unity, k the
 * fixed field of the unit subgroup H <= (Z/m)^*.  The designated root is
 * zeta = -q for odd m (order 2m) and zeta = q for even m (order m).
 *
 * Finite backend: K = F_{p^n} presented by the smallest primitive
 * polynomial, k = F_{p^d} for d | n, zeta = x generates K^*.
 */
class FieldTower {
public:
    std::shared_ptr<const TowerImpl> impl;

    const TowerImpl& ref() const { return *impl; }
    long degree() const { return impl->D; }
    long characteristic() const { return impl->char_p; }
    long root_order() const { return impl->m_eff; }
    long k_degree_over_prime() const { return impl->kq; }
    long K_over_k() const { return impl->Kk; }
    const FiniteGroup& galois_group() const { return impl->gal; }
    const std::string& id() const { return impl->id; }
    bool same_tower(const FieldTower& o) const { return impl->id == o.impl->id; }

    Scalar zero() const { return {impl.get(), impl->zero_c()}; }
    Scalar one() const { return {impl.get(), impl->one_c()}; }
    Scalar from_int(long v) const {
        Coords c = impl->zero_c();
        c[0] = v;
        return {impl.get(), impl->red_c(std::move(c))};
    }
    Scalar from_rational(const mpq_class& v) const {
        require(impl->char_p == 0, "rational scalars need characteristic zero");
        Coords c = impl->zero_c();
        c[0] = v;
        return {impl.get(), std::move(c)};
    }
    Scalar generator() const { return {impl.get(), impl->xpow[1]}; }
    Scalar zeta() const { return {impl.get(), impl->zeta_pow[1 % impl->m_eff]}; }
    Scalar root_of_unity(long e) const {
        long r = e % impl->m_eff;
        if (r < 0) r += impl->m_eff;
        return {impl.get(), impl->zeta_pow[static_cast<size_t>(r)]};
    }
    std::optional<long> exponent_of(const Scalar& s) const { return impl->exponent_of_c(s.c); }
    Scalar apply_aut(int g, const Scalar& s) const { return {impl.get(), impl->aut_c(g, s.c)}; }
    long zeta_exponent_of_aut(int g) const { return impl->a_zeta[static_cast<size_t>(g)]; }
    bool in_k(const Scalar& s) const { return impl->in_k_c(s.c); }
    std::vector<Scalar> express_in_k_basis(const Scalar& s) const {
        std::vector<Scalar> out;
        for (auto& c : impl->express_c(s.c)) out.push_back({impl.get(), std::move(c)});
        return out;
    }
    std::vector<Scalar> k_basis() const {
        std::vector<Scalar> out;
        for (const auto& c : impl->k_basis_in_K) out.push_back({impl.get(), c});
        return out;
    }
    ScalarFieldOps ops() const { return ScalarFieldOps(impl.get()); }
};

// ----- scalar operators -----

namespace detail {
inline const TowerImpl* join(const Scalar& a, const Scalar& b) {
    require(a.f != nullptr && a.f == b.f, "scalar tower mismatch");
    return a.f;
}
} // namespace detail

inline Scalar operator+(const Scalar& a, const Scalar& b) {
    auto* t = detail::join(a, b);
    return {t, t->add_c(a.c, b.c)};
}
inline Scalar operator-(const Scalar& a, const Scalar& b) {
    auto* t = detail::join(a, b);
    return {t, t->sub_c(a.c, b.c)};
}
inline Scalar operator*(const Scalar& a, const Scalar& b) {
    auto* t = detail::join(a, b);
    return {t, t->mul_c(a.c, b.c)};
}
inline Scalar operator/(const Scalar& a, const Scalar& b) {
    auto* t = detail::join(a, b);
    return {t, t->mul_c(a.c, t->inv_c(b.c))};
}
inline Scalar operator-(const Scalar& a) {
    require(a.f, "invalid scalar");
    return {a.f, a.f->neg_c(a.c)};
}
inline bool operator==(const Scalar& a, const Scalar& b) {
    return detail::join(a, b)->eq_c(a.c, b.c);
}
inline bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
inline bool is_zero(const Scalar& a) {
    require(a.f, "invalid scalar");
    return a.f->is_zero_c(a.c);
}
inline Scalar inverse(const Scalar& a) {
    require(a.f, "invalid scalar");
    return {a.f, a.f->inv_c(a.c)};
}

// ----- construction -----

namespace detail {

inline void build_common(TowerImpl& t, const Coords& zeta1) {
    // automorphism sanity and zeta bookkeeping
    t.zeta_pow.clear();
    t.zeta_lookup.clear();
    require(t.m_eff >= 1, "root group order must be positive");
    Coords cur = t.one_c();
    for (long e = 0; e < t.m_eff; ++e) {
        t.zeta_pow.push_back(cur);
        require(t.zeta_lookup.emplace(cur, e).second, "zeta order too small");
        cur = t.mul_c(cur, zeta1);
    }
    require(t.eq_c(cur, t.one_c()), "zeta order mismatch");
    // a_zeta consistency: each automorphism sends zeta to zeta^{a_zeta}
    for (int g = 0; g < t.gal.n; ++g) {
        Coords img = t.aut_c(g, t.zeta_pow[1 % t.m_eff]);
        long a = t.a_zeta[static_cast<size_t>(g)];
        require(t.eq_c(img, t.zeta_pow[static_cast<size_t>(((a % t.m_eff) + t.m_eff) % t.m_eff)]),
                "automorphism exponent on zeta inconsistent");
    }

    // fixed field basis over the prime field: kernel of stacked (M_g - 1)
    MatrixOf<PrimeFieldOps> rows;
    for (int g = 1; g < t.gal.n; ++g) {
        for (long r = 0; r < t.D; ++r) {
            std::vector<mpq_class> row(static_cast<size_t>(t.D), 0);
            for (long j = 0; j < t.D; ++j) {
                mpq_class v = t.aut_mat[static_cast<size_t>(g)][static_cast<size_t>(j)][static_cast<size_t>(r)];
                if (j == r) v -= 1;
                row[static_cast<size_t>(j)] = t.base.red(v);
            }
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) {
        t.k_basis_prime.clear();
        for (long j = 0; j < t.D; ++j) {
            Coords e = t.zero_c();
            e[static_cast<size_t>(j)] = 1;
            t.k_basis_prime.push_back(std::move(e));
        }
    } else {
        t.k_basis_prime = kernel_basis(t.base, rows, static_cast<size_t>(t.D));
    }
    t.kq = static_cast<long>(t.k_basis_prime.size());
    require(t.kq * t.gal.n == t.D, "fixed field dimension mismatch");
    t.Kk = t.gal.n;
    require(!t.k_basis_prime.empty() && t.eq_c(t.k_basis_prime[0], t.one_c()),
            "fixed field basis must start with 1");

    // greedy k-basis of K from the power basis
    t.k_basis_in_K.clear();
    MatrixOf<PrimeFieldOps> span_rows;
    for (long cand = 0; cand < t.D && static_cast<long>(t.k_basis_in_K.size()) < t.Kk; ++cand) {
        const Coords& beta = t.xpow[static_cast<size_t>(cand)];
        MatrixOf<PrimeFieldOps> trial = span_rows;
        for (long b = 0; b < t.kq; ++b)
            trial.push_back(t.mul_c(beta, t.k_basis_prime[static_cast<size_t>(b)]));
        size_t r = rank_of(t.base, trial, static_cast<size_t>(t.D));
        if (r == trial.size()) {
            span_rows = std::move(trial);
            t.k_basis_in_K.push_back(beta);
        }
    }
    require(static_cast<long>(t.k_basis_in_K.size()) == t.Kk, "k-basis of K incomplete");
    require(t.eq_c(t.k_basis_in_K[0], t.one_c()), "k-basis of K must start with 1");

    // expression solver: invert the change of basis (beta_i * kb_b) -> x^t
    MatrixOf<PrimeFieldOps> E(static_cast<size_t>(t.D), std::vector<mpq_class>(static_cast<size_t>(t.D), 0));
    for (long i = 0; i < t.Kk; ++i)
        for (long b = 0; b < t.kq; ++b) {
            Coords col = t.mul_c(t.k_basis_in_K[static_cast<size_t>(i)], t.k_basis_prime[static_cast<size_t>(b)]);
            for (long r = 0; r < t.D; ++r)
                E[static_cast<size_t>(r)][static_cast<size_t>(i * t.kq + b)] = col[static_cast<size_t>(r)];
        }
    auto inv = matrix_inverse(t.base, E);
    require(inv.has_value(), "k-basis change of basis not invertible");
    t.express_inv = std::move(*inv);
}

} // namespace detail

inline FieldTower cyclotomic_tower(long m, std::vector<long> H) {
    require(m >= 1, "cyclotomic order must be positive");
    std::sort(H.begin(), H.end());
    H.erase(std::unique(H.begin(), H.end()), H.end());
    require(!H.empty() && H[0] == 1, "unit subgroup must contain 1");
    for (long h : H) {
        require(h >= 1 && h <= std::max<long>(m, 1), "unit out of range");
        if (m > 1) require(std::gcd(h, m) == 1 && h < m, "unit not coprime to m");
    }
    if (m <= 2) require(H.size() == 1, "unit subgroup must be {1} for m <= 2");
    for (long a : H)
        for (long b : H) {
            long ab = m > 1 ? (a * b) % m : 1;
            require(std::binary_search(H.begin(), H.end(), ab), "unit set not closed");
        }

    auto t = std::make_shared<TowerImpl>();
    t->finite_field = false;
    t->m = m;
    t->H = H;
    t->char_p = 0;
    t->base = PrimeFieldOps{0};
    t->modulus = poly::cyclotomic(m);
    t->D = poly::degree(t->modulus);

    // power table up to the larger of what products and automorphisms need
    long need = std::max<long>(2 * t->D - 1, m + 1);
    t->xpow.clear();
    poly::Poly cur{1};
    for (long e = 0; e < need; ++e) {
        Coords c(static_cast<size_t>(t->D), 0);
        for (size_t i = 0; i < cur.size(); ++i) c[i] = cur[i];
        t->xpow.push_back(std::move(c));
        cur = poly::mod(poly::mul(cur, poly::Poly{0, 1}, 0), t->modulus, 0);
    }

    // Galois group of K over the fixed field of H
    int ng = static_cast<int>(H.size());
    std::vector<int> table(static_cast<size_t>(ng) * ng);
    for (int i = 0; i < ng; ++i)
        for (int j = 0; j < ng; ++j) {
            long prod = m > 1 ? (H[static_cast<size_t>(i)] * H[static_cast<size_t>(j)]) % m : 1;
            int idx = static_cast<int>(std::lower_bound(H.begin(), H.end(), prod) - H.begin());
            table[static_cast<size_t>(i) * ng + j] = idx;
        }
    t->gal = group_from_table(ng, std::move(table));
    t->aut_mat.clear();
    t->a_zeta.clear();
    t->gal_labels.clear();
    bool odd = (m % 2 == 1);
    t->m_eff = odd ? 2 * m : m;
    for (int i = 0; i < ng; ++i) {
        long a = H[static_cast<size_t>(i)];
        std::vector<Coords> mat;
        for (long j = 0; j < t->D; ++j) mat.push_back(t->xpow[static_cast<size_t>((j * a) % std::max<long>(m, 1))]);
        t->aut_mat.push_back(std::move(mat));
        long atilde = a % t->m_eff;
        if (odd && atilde % 2 == 0) atilde = (atilde + m) % t->m_eff;
        t->a_zeta.push_back(atilde);
        t->gal_labels.push_back("q->q^" + std::to_string(a));
    }

    // designated root: -q for odd m, q for even m
    Coords zeta1 = odd ? t->neg_c(t->xpow[static_cast<size_t>(1 % std::max<long>(m, 1))])
                       : t->xpow[1];
    detail::build_common(*t, zeta1);

    std::string id = "cyclotomic:m=" + std::to_string(m) + ":H=";
    for (size_t i = 0; i < H.size(); ++i) id += (i ? "," : "") + std::to_string(H[i]);
    t->id = id;
    return FieldTower{t};
}

inline FieldTower finite_tower(long p, long n, long d) {
    require(p >= 2, "characteristic must be at least 2");
    for (long q = 2; q * q <= p; ++q) require(p % q != 0, "characteristic must be prime");
    require(n >= 1 && d >= 1 && n % d == 0, "subfield degree must divide n");
    double size = 1;
    for (long i = 0; i < n; ++i) size *= p;
    require(size <= 4097, "finite tower bound is p^n <= 4096");

    auto t = std::make_shared<TowerImpl>();
    t->finite_field = true;
    t->p = p;
    t->n = n;
    t->d = d;
    t->char_p = p;
    t->base = PrimeFieldOps{p};
    t->modulus = poly::primitive_polynomial(p, n);
    t->D = n;

    long need = 2 * t->D - 1;
    t->xpow.clear();
    poly::Poly cur{1};
    for (long e = 0; e < std::max<long>(need, 2); ++e) {
        Coords c(static_cast<size_t>(t->D), 0);
        for (size_t i = 0; i < cur.size(); ++i) c[i] = cur[i];
        t->xpow.push_back(std::move(c));
        cur = poly::mod(poly::mul(cur, poly::Poly{0, 1}, p), t->modulus, p);
    }

    long m_eff = 1;
    for (long i = 0; i < n; ++i) m_eff *= p;
    m_eff -= 1;
    t->m_eff = m_eff;

    int ng = static_cast<int>(n / d);
    t->gal = cyclic_group(ng);
    t->aut_mat.clear();
    t->a_zeta.clear();
    t->gal_labels.clear();
    // frobenius matrix: x^j -> x^{jp}
    std::vector<Coords> frob;
    for (long j = 0; j < t->D; ++j) {
        poly::Poly img = poly::x_pow_mod(mpz_class(j) * p, t->modulus, p);
        Coords c(static_cast<size_t>(t->D), 0);
        for (size_t i = 0; i < img.size(); ++i) c[i] = img[i];
        frob.push_back(std::move(c));
    }
    auto apply_mat = [&](const std::vector<Coords>& M, const Coords& v) {
        Coords out(static_cast<size_t>(t->D), 0);
        for (long j = 0; j < t->D; ++j)
            for (long i = 0; i < t->D; ++i)
                out[static_cast<size_t>(i)] += v[static_cast<size_t>(j)] * M[static_cast<size_t>(j)][static_cast<size_t>(i)];
        for (auto& x : out) x = t->base.red(x);
        return out;
    };
    for (int i = 0; i < ng; ++i) {
        // matrix of Frobenius^(d*i)
        std::vector<Coords> mat;
        for (long j = 0; j < t->D; ++j) {
            Coords v(static_cast<size_t>(t->D), 0);
            v[static_cast<size_t>(j)] = 1;
            for (long rep = 0; rep < static_cast<long>(i) * d; ++rep) v = apply_mat(frob, v);
            mat.push_back(std::move(v));
        }
        t->aut_mat.push_back(std::move(mat));
        long a = 1;
        for (long rep = 0; rep < static_cast<long>(i) * d; ++rep) a = (a * p) % m_eff;
        t->a_zeta.push_back(a);
        t->gal_labels.push_back("frobenius^" + std::to_string(i * d));
    }

    detail::build_common(*t, t->xpow[1]); // x is primitive by construction

    t->id = "finite:p=" + std::to_string(p) + ":n=" + std::to_string(n) + ":d=" + std::to_string(d);
    return FieldTower{t};
}

} // namespace kgal
