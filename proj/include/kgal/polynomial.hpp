#pragma once

#include <gmpxx.h>

#include <vector>

#include "kgal/common.hpp"

namespace kgal::poly {

// Dense polynomials, coefficient index = degree.  A prime modulus p > 0
// means arithmetic in F_p (coefficients kept in [0,p)); p = 0 means Q.
using Poly = std::vector<mpq_class>;

inline mpq_class reduce_coeff(const mpq_class& c, long p) {
    if (p == 0) return c;
    mpz_class num = c.get_num(); // integers only in the mod-p regime
    mpz_class r = num % p;
    if (r < 0) r += p;
    return mpq_class(r);
}

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly mul(const Poly& a, const Poly& b, long p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    if (p) for (auto& c : out) c = reduce_coeff(c, p);
    trim(out);
    return out;
}

inline mpq_class inv_coeff(const mpq_class& c, long p) {
    if (p == 0) return 1 / c;
    // extended euclid on the integer representative
    long a = static_cast<long>(reduce_coeff(c, p).get_num().get_si());
    long t = 0, newt = 1, r = p, newr = a;
    while (newr != 0) {
        long q = r / newr;
        long tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    require(r == 1, "coefficient not invertible mod p");
    if (t < 0) t += p;
    return mpq_class(t);
}

// Division with remainder; the divisor must have invertible leading
// coefficient (always true over a field).
inline void divmod(const Poly& a, const Poly& b, long p, Poly& q, Poly& r) {
    require(!b.empty(), "division by zero polynomial");
    r = a;
    trim(r);
    q.assign(r.size() > b.size() ? r.size() - b.size() + 1 : 1, 0);
    mpq_class lead_inv = inv_coeff(b.back(), p);
    while (r.size() >= b.size() && !r.empty()) {
        size_t shift = r.size() - b.size();
        mpq_class factor = r.back() * lead_inv;
        if (p) factor = reduce_coeff(factor, p);
        q[shift] += factor;
        for (size_t i = 0; i < b.size(); ++i) {
            r[shift + i] -= factor * b[i];
            if (p) r[shift + i] = reduce_coeff(r[shift + i], p);
        }
        trim(r);
    }
    if (p) for (auto& c : q) c = reduce_coeff(c, p);
    trim(q);
}

inline Poly mod(const Poly& a, const Poly& b, long p) {
    Poly q, r;
    divmod(a, b, p, q, r);
    return r;
}

// x^e mod f over F_p (or Q), by square and multiply.
inline Poly x_pow_mod(const mpz_class& e, const Poly& f, long p) {
    Poly result{1};
    Poly base{0, 1};
    base = mod(base, f, p);
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) result = mod(mul(result, base, p), f, p);
        base = mod(mul(base, base, p), f, p);
        k >>= 1;
    }
    return result;
}

// n-th cyclotomic polynomial over Z, by the recursive quotient
// (x^n - 1) / prod_{d | n, d < n} cyclotomic(d).
inline Poly cyclotomic(long n) {
    require(n >= 1, "cyclotomic index must be positive");
    Poly num(static_cast<size_t>(n) + 1, 0);
    num[0] = -1;
    num[static_cast<size_t>(n)] = 1;
    Poly den{1};
    for (long d = 1; d < n; ++d) {
        if (n % d == 0) den = mul(den, cyclotomic(d), 0);
    }
    Poly q, r;
    divmod(num, den, 0, q, r);
    require(r.empty(), "cyclotomic division must be exact");
    return q;
}

inline bool is_irreducible(const Poly& f, long p) {
    int n = degree(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    // trial division by all monic polynomials of degree 1..n/2
    for (int d = 1; 2 * d <= n; ++d) {
        std::vector<long> c(static_cast<size_t>(d), 0);
        while (true) {
            Poly g(static_cast<size_t>(d) + 1, 0);
            for (int i = 0; i < d; ++i) g[static_cast<size_t>(i)] = c[static_cast<size_t>(i)];
            g[static_cast<size_t>(d)] = 1;
            Poly q, r;
            divmod(f, g, p, q, r);
            if (r.empty()) return false;
            int i = 0;
            while (i < d && ++c[static_cast<size_t>(i)] == p) c[static_cast<size_t>(i++)] = 0;
            if (i == d) break;
        }
    }
    return true;
}

inline std::vector<mpz_class> prime_factors(mpz_class n) {
    std::vector<mpz_class> out;
    for (mpz_class d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Smallest (in coefficient-lex order) monic irreducible of degree n over F_p
// whose root x generates the multiplicative group.  Deterministic choice of
// the finite field presentation.
inline Poly primitive_polynomial(long p, long n) {
    mpz_class order;
    mpz_ui_pow_ui(order.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    order -= 1;
    auto factors = prime_factors(order);
    std::vector<long> c(static_cast<size_t>(n), 0);
    while (true) {
        Poly f(static_cast<size_t>(n) + 1, 0);
        for (long i = 0; i < n; ++i) f[static_cast<size_t>(i)] = c[static_cast<size_t>(i)];
        f[static_cast<size_t>(n)] = 1;
        if (c[0] != 0 && is_irreducible(f, p)) { // constant term 0 would make x a zero divisor
            bool primitive = true;
            for (const auto& ell : factors) {
                Poly t = x_pow_mod(order / ell, f, p);
                if (t.size() == 1 && t[0] == 1) { primitive = false; break; }
            }
            if (primitive) {
                Poly t = x_pow_mod(order, f, p);
                require(t.size() == 1 && t[0] == 1, "primitive polynomial order check");
                return f;
            }
        }
        long i = 0;
        while (i < n && ++c[static_cast<size_t>(i)] == p) c[static_cast<size_t>(i++)] = 0;
        require(i < n, "no primitive polynomial found");
    }
}

} // namespace kgal::poly
