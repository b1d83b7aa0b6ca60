#pragma once

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "kgal/common.hpp"

namespace kgal {

/**
 * Affine linear systems over Z/m, solved through an integer Smith reduction.
 *
 * All entries are kept reduced to the symmetric range (-m/2, m/2]; replacing
 * a matrix entry by a representative of the same residue never changes the
 * solution set mod m, so the reduction is free and keeps every intermediate
 * value machine sized.  Column operations are accumulated in V (and its
 * inverse), row operations are applied directly to the right-hand side.
 */
struct ZmodSolution {
    long mod = 0;
    bool solvable = false;
    std::vector<long> particular;            // one solution, entries in [0, mod)
    std::vector<std::vector<long>> gens;     // torsor generators of the solution set
    std::vector<long> orders;                // matching generator orders (> 1)
    std::vector<long> invariant_factors;     // gcd(diagonal, mod), one per unknown
    long bad_row = -1;                       // transformed row witnessing unsolvability

    unsigned long long count() const {
        if (!solvable) return 0;
        unsigned long long c = 1;
        for (long o : orders) {
            require(c <= (1ULL << 62) / static_cast<unsigned long long>(o), "solution count overflow");
            c *= static_cast<unsigned long long>(o);
        }
        return c;
    }
};

namespace zdetail {

inline long sym(long v, long m) {
    long r = v % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

inline long pos(long v, long m) {
    long r = v % m;
    if (r < 0) r += m;
    return r;
}

// extended gcd: returns g, sets x,y with a*x + b*y = g, g >= 0
inline long egcd(long a, long b, long& x, long& y) {
    if (b == 0) {
        x = (a >= 0) ? 1 : -1;
        y = 0;
        return std::abs(a);
    }
    long x1, y1;
    long g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline long modinv(long a, long m) {
    long x, y;
    long g = egcd(pos(a, m), m, x, y);
    require(g == 1, "modular inverse does not exist");
    return pos(x, m);
}

struct Smith {
    size_t rows, cols;
    long mod;
    std::vector<long> a;    // row-major, symmetric residues
    std::vector<long> b;    // transformed rhs
    std::vector<std::vector<long>> V, Vinv;   // column ops
    std::vector<std::vector<long>> U, Uinv;   // row ops (optional)
    bool track_u = false;
    size_t drank = 0; // number of nonzero diagonal entries found

    long& at(size_t i, size_t j) { return a[i * cols + j]; }
    long get(size_t i, size_t j) const { return a[i * cols + j]; }

    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        for (size_t c = 0; c < cols; ++c) std::swap(at(i, c), at(j, c));
        std::swap(b[i], b[j]);
        if (track_u) { std::swap(U[i], U[j]); std::swap(Uinv[i], Uinv[j]); }
    }
    void swap_cols(size_t i, size_t j) {
        if (i == j) return;
        for (size_t r = 0; r < rows; ++r) std::swap(at(r, i), at(r, j));
        for (size_t r = 0; r < cols; ++r) std::swap(V[r][i], V[r][j]); // V picks up the column op
        std::swap(Vinv[i], Vinv[j]);                                   // its inverse is a row op
    }
    // rows i, j <- (p*row_i + q*row_j, r*row_i + s*row_j), ps - qr = +-1
    void row_combine(size_t i, size_t j, long p, long q, long r, long s) {
        for (size_t c = 0; c < cols; ++c) {
            long vi = get(i, c), vj = get(j, c);
            at(i, c) = sym(p * vi + q * vj, mod);
            at(j, c) = sym(r * vi + s * vj, mod);
        }
        long bi = b[i], bj = b[j];
        b[i] = sym(p * bi + q * bj, mod);
        b[j] = sym(r * bi + s * bj, mod);
        if (track_u) {
            for (size_t c = 0; c < rows; ++c) {
                long vi = U[i][c], vj = U[j][c];
                U[i][c] = sym(p * vi + q * vj, mod);
                U[j][c] = sym(r * vi + s * vj, mod);
            }
            // inverse of [[p,q],[r,s]] is [[s,-q],[-r,p]] / det with det = +-1
            long det = p * s - q * r;
            for (size_t rr = 0; rr < rows; ++rr) {
                long ci = Uinv[rr][i], cj = Uinv[rr][j];
                Uinv[rr][i] = sym(det * (s * ci - r * cj), mod);
                Uinv[rr][j] = sym(det * (-q * ci + p * cj), mod);
            }
        }
    }
    void col_combine(size_t i, size_t j, long p, long q, long r, long s) {
        for (size_t rr = 0; rr < rows; ++rr) {
            long vi = get(rr, i), vj = get(rr, j);
            at(rr, i) = sym(p * vi + q * vj, mod);
            at(rr, j) = sym(r * vi + s * vj, mod);
        }
        // columns of V transform like columns of A
        for (size_t rr = 0; rr < cols; ++rr) {
            long vi = V[rr][i], vj = V[rr][j];
            V[rr][i] = sym(p * vi + q * vj, mod);
            V[rr][j] = sym(r * vi + s * vj, mod);
        }
        long det = p * s - q * r;
        for (size_t c = 0; c < cols; ++c) {
            long ri = Vinv[i][c], rj = Vinv[j][c];
            Vinv[i][c] = sym(det * (s * ri - r * rj), mod);
            Vinv[j][c] = sym(det * (-q * ri + p * rj), mod);
        }
    }

    void reduce() {
        size_t t = 0;
        size_t limit = std::min(rows, cols);
        while (t < limit) {
            // locate entry of smallest absolute value in the trailing block
            size_t pi = t, pj = t;
            long best = 0;
            for (size_t i = t; i < rows; ++i)
                for (size_t j = t; j < cols; ++j) {
                    long v = std::abs(get(i, j));
                    if (v != 0 && (best == 0 || v < best)) { best = v; pi = i; pj = j; }
                }
            if (best == 0) break;
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool clean = false;
            int guard = 0;
            while (!clean) {
                require(++guard < 10000, "smith reduction failed to converge");
                clean = true;
                for (size_t i = t + 1; i < rows; ++i) {
                    long p = get(t, t), q = get(i, t);
                    if (q == 0) continue;
                    if (q % p == 0) {
                        row_combine(t, i, 1, 0, -(q / p), 1);
                    } else {
                        long x, y;
                        long g = egcd(p, q, x, y);
                        row_combine(t, i, x, y, -(q / g), p / g);
                        clean = false;
                    }
                }
                for (size_t j = t + 1; j < cols; ++j) {
                    long p = get(t, t), q = get(t, j);
                    if (q == 0) continue;
                    if (q % p == 0) {
                        col_combine(t, j, 1, 0, -(q / p), 1);
                    } else {
                        long x, y;
                        long g = egcd(p, q, x, y);
                        col_combine(t, j, x, y, -(q / g), p / g);
                        clean = false;
                    }
                }
                if (clean) {
                    // divisibility of the trailing block by the pivot
                    long p = get(t, t);
                    for (size_t i = t + 1; i < rows && clean; ++i)
                        for (size_t j = t + 1; j < cols && clean; ++j)
                            if (get(i, j) % p != 0) {
                                row_combine(t, i, 1, 1, 0, 1); // add row i to row t
                                clean = false;
                            }
                }
            }
            if (get(t, t) < 0) row_combine(t, t, -1, 0, 0, -1);
            ++t;
        }
        drank = t;
    }
};

} // namespace zdetail

/**
 * Solve a*x = b over Z/mod.  a is rows x cols row-major.  When track_u is
 * set the returned transforms include U with U*A*V = D (mod), which callers
 * use for quotient transversals.
 */
struct ZmodSmith {
    ZmodSolution sol;
    std::vector<long> diag;                 // raw diagonal, length min(rows, cols)
    std::vector<std::vector<long>> V, Vinv, U, Uinv;
};

inline ZmodSmith solve_zmod_full(const std::vector<long>& a, const std::vector<long>& b,
                                 size_t rows, size_t cols, long mod, bool track_u = false) {
    require(mod >= 1, "modulus must be positive");
    require(a.size() == rows * cols && b.size() == rows, "system shape mismatch");
    ZmodSmith out;
    ZmodSolution& s = out.sol;
    s.mod = mod;
    if (mod == 1) {
        s.solvable = true;
        s.particular.assign(cols, 0);
        s.invariant_factors.assign(cols, 1);
        out.V.assign(cols, std::vector<long>(cols, 0));
        for (size_t i = 0; i < cols; ++i) out.V[i][i] = 0;
        return out;
    }
    zdetail::Smith sm;
    sm.rows = rows;
    sm.cols = cols;
    sm.mod = mod;
    sm.track_u = track_u;
    sm.a.resize(rows * cols);
    for (size_t i = 0; i < rows * cols; ++i) sm.a[i] = zdetail::sym(a[i], mod);
    sm.b.resize(rows);
    for (size_t i = 0; i < rows; ++i) sm.b[i] = zdetail::sym(b[i], mod);
    sm.V.assign(cols, std::vector<long>(cols, 0));
    sm.Vinv.assign(cols, std::vector<long>(cols, 0));
    for (size_t i = 0; i < cols; ++i) sm.V[i][i] = sm.Vinv[i][i] = 1;
    if (track_u) {
        sm.U.assign(rows, std::vector<long>(rows, 0));
        sm.Uinv.assign(rows, std::vector<long>(rows, 0));
        for (size_t i = 0; i < rows; ++i) sm.U[i][i] = sm.Uinv[i][i] = 1;
    }
    sm.reduce();

    for (size_t t = 0; t < std::min(rows, cols); ++t) out.diag.push_back(sm.get(t, t));
    s.invariant_factors.clear();
    for (size_t i = 0; i < cols; ++i) {
        long d = i < out.diag.size() ? out.diag[i] : 0;
        s.invariant_factors.push_back(std::gcd(std::abs(d), mod) == 0 ? mod : std::gcd(std::abs(d), mod));
    }

    // solvability row by row in the transformed system
    s.solvable = true;
    std::vector<long> y(cols, 0);
    for (size_t i = 0; i < rows; ++i) {
        long d = (i < out.diag.size()) ? out.diag[i] : 0;
        long c = zdetail::pos(sm.b[i], mod);
        if (i < cols && d != 0) {
            long g = std::gcd(d, mod);
            if (c % g != 0) { s.solvable = false; s.bad_row = static_cast<long>(i); break; }
            long mg = mod / g;
            y[i] = zdetail::pos((c / g) * zdetail::modinv(d / g, mg), mg);
        } else {
            if (c != 0) { s.solvable = false; s.bad_row = static_cast<long>(i); break; }
        }
    }
    if (s.solvable) {
        s.particular.assign(cols, 0);
        for (size_t r = 0; r < cols; ++r) {
            long acc = 0;
            for (size_t j = 0; j < cols; ++j) acc += sm.V[r][j] * y[j];
            s.particular[r] = zdetail::pos(acc, mod);
        }
        for (size_t i = 0; i < cols; ++i) {
            long g = s.invariant_factors[i];
            if (g <= 1) continue;
            long step = mod / g;
            std::vector<long> gen(cols, 0);
            for (size_t r = 0; r < cols; ++r) gen[r] = zdetail::pos(sm.V[r][i] * step, mod);
            s.gens.push_back(std::move(gen));
            s.orders.push_back(g);
        }
    }
    out.V = std::move(sm.V);
    out.Vinv = std::move(sm.Vinv);
    if (track_u) { out.U = std::move(sm.U); out.Uinv = std::move(sm.Uinv); }
    return out;
}

inline ZmodSolution solve_zmod(const std::vector<long>& a, const std::vector<long>& b,
                               size_t rows, size_t cols, long mod) {
    return solve_zmod_full(a, b, rows, cols, mod).sol;
}

// All solutions, by mixed-radix sweep over the generator torsor.  Deterministic.
inline std::vector<std::vector<long>> enumerate_solutions(const ZmodSolution& s,
                                                          unsigned long long bound = 1ULL << 20) {
    std::vector<std::vector<long>> out;
    if (!s.solvable) return out;
    unsigned long long n = s.count();
    require(n <= bound, "solution set too large to enumerate");
    std::vector<long> t(s.gens.size(), 0);
    while (true) {
        std::vector<long> x = s.particular;
        for (size_t i = 0; i < s.gens.size(); ++i) {
            if (t[i] == 0) continue;
            for (size_t r = 0; r < x.size(); ++r)
                x[r] = zdetail::pos(x[r] + t[i] * s.gens[i][r], s.mod);
        }
        out.push_back(std::move(x));
        size_t i = 0;
        while (i < t.size() && ++t[i] == s.orders[i]) t[i++] = 0;
        if (i == t.size()) break;
    }
    return out;
}

} // namespace kgal
