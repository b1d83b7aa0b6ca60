#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgal/common.hpp"

namespace kgal {

/**
 * Finite group given by its full multiplication table.
 *
 * Elements are the indices 0..n-1 and index 0 is always the identity.
 * The table stores products row-major: table[a*n + b] = a*b.
 */
struct FiniteGroup {
    int n = 0;
    std::vector<int> table;
    std::vector<int> inverse;

    int mul(int a, int b) const { return table[static_cast<size_t>(a) * n + b]; }
    int inv(int a) const { return inverse[a]; }
    int conj(int g, int x) const { return mul(mul(g, x), inv(g)); } // g x g^-1

    int order_of(int a) const {
        int x = a, o = 1;
        while (x != 0) { x = mul(x, a); ++o; }
        return o;
    }

    bool is_abelian() const {
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    bool same_table(const FiniteGroup& o) const { return n == o.n && table == o.table; }
};

// Witness for a rejected multiplication table.
struct TableError {
    std::string reason;          // "shape", "range", "identity", "associativity", "inverse"
    int a = -1, b = -1, c = -1;  // offending indices where applicable
};

inline std::optional<TableError> check_table(int n, const std::vector<int>& table) {
    if (n <= 0 || table.size() != static_cast<size_t>(n) * n)
        return TableError{"shape", -1, -1, -1};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int v = table[static_cast<size_t>(a) * n + b];
            if (v < 0 || v >= n) return TableError{"range", a, b, -1};
        }
    for (int a = 0; a < n; ++a)
        if (table[static_cast<size_t>(0) * n + a] != a || table[static_cast<size_t>(a) * n] != a)
            return TableError{"identity", a, -1, -1};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                int ab = table[static_cast<size_t>(a) * n + b];
                int bc = table[static_cast<size_t>(b) * n + c];
                if (table[static_cast<size_t>(ab) * n + c] != table[static_cast<size_t>(a) * n + bc])
                    return TableError{"associativity", a, b, c};
            }
    for (int a = 0; a < n; ++a) {
        bool found = false;
        for (int b = 0; b < n && !found; ++b)
            if (table[static_cast<size_t>(a) * n + b] == 0 && table[static_cast<size_t>(b) * n + a] == 0)
                found = true;
        if (!found) return TableError{"inverse", a, -1, -1};
    }
    return std::nullopt;
}

inline FiniteGroup group_from_table(int n, std::vector<int> table) {
    if (auto err = check_table(n, table)) {
        std::string msg = "invalid group table: " + err->reason;
        if (err->a >= 0) msg += " at (" + std::to_string(err->a);
        if (err->b >= 0) msg += "," + std::to_string(err->b);
        if (err->c >= 0) msg += "," + std::to_string(err->c);
        if (err->a >= 0) msg += ")";
        throw invalid_input(msg);
    }
    FiniteGroup g;
    g.n = n;
    g.table = std::move(table);
    g.inverse.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (g.table[static_cast<size_t>(a) * n + b] == 0) { g.inverse[a] = b; break; }
    return g;
}

inline FiniteGroup cyclic_group(int n) {
    require(n >= 1, "cyclic group order must be positive");
    std::vector<int> t(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[static_cast<size_t>(a) * n + b] = (a + b) % n;
    return group_from_table(n, std::move(t));
}

// Product indices are a*|B| + b, so the identity stays at 0.
inline FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B) {
    int n = A.n * B.n;
    std::vector<int> t(static_cast<size_t>(n) * n);
    for (int a1 = 0; a1 < A.n; ++a1)
        for (int b1 = 0; b1 < B.n; ++b1)
            for (int a2 = 0; a2 < A.n; ++a2)
                for (int b2 = 0; b2 < B.n; ++b2) {
                    int x = a1 * B.n + b1, y = a2 * B.n + b2;
                    t[static_cast<size_t>(x) * n + y] = A.mul(a1, a2) * B.n + B.mul(b1, b2);
                }
    return group_from_table(n, std::move(t));
}

// ---------------------------------------------------------------------------
// Subgroups.  A subgroup is a sorted list of element indices containing 0.
// ---------------------------------------------------------------------------

using Subgroup = std::vector<int>;

inline bool is_subgroup(const FiniteGroup& G, const Subgroup& S) {
    if (S.empty() || S[0] != 0) return false;
    std::vector<char> in(G.n, 0);
    for (int s : S) {
        if (s < 0 || s >= G.n || in[s]) return false;
        in[s] = 1;
    }
    if (!std::is_sorted(S.begin(), S.end())) return false;
    for (int a : S)
        for (int b : S)
            if (!in[G.mul(a, b)]) return false;
    return true;
}

inline Subgroup subgroup_closure(const FiniteGroup& G, const std::vector<int>& gens) {
    std::vector<char> in(G.n, 0);
    in[0] = 1;
    std::vector<int> frontier{0};
    for (int g : gens) {
        require(g >= 0 && g < G.n, "generator index out of range");
        if (!in[g]) { in[g] = 1; frontier.push_back(g); }
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur;
        for (int x = 0; x < G.n; ++x)
            if (in[x]) cur.push_back(x);
        for (int a : cur)
            for (int b : cur) {
                int p = G.mul(a, b);
                if (!in[p]) { in[p] = 1; grew = true; }
            }
    }
    Subgroup out;
    for (int x = 0; x < G.n; ++x)
        if (in[x]) out.push_back(x);
    return out;
}

// g^-1 S g
inline Subgroup conjugate_subgroup(const FiniteGroup& G, const Subgroup& S, int g) {
    Subgroup out;
    int gi = G.inv(g);
    for (int s : S) out.push_back(G.mul(G.mul(gi, s), g));
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_normal_in(const FiniteGroup& G, const Subgroup& N, const Subgroup& S) {
    std::vector<char> in(G.n, 0);
    for (int x : N) in[x] = 1;
    for (int s : S)
        for (int x : N)
            if (!in[G.conj(s, x)]) return false;
    return true;
}

inline Subgroup centralizer(const FiniteGroup& G, const Subgroup& S, int x) {
    Subgroup out;
    for (int s : S)
        if (G.mul(s, x) == G.mul(x, s)) out.push_back(s);
    return out;
}

// Right coset representatives: one g per coset S*g, identity first, then by
// smallest element index.  Deterministic.
inline std::vector<int> coset_representatives(const FiniteGroup& G, const Subgroup& S) {
    std::vector<char> seen(G.n, 0);
    std::vector<int> reps;
    for (int g = 0; g < G.n; ++g) {
        if (seen[g]) continue;
        reps.push_back(g);
        for (int s : S) seen[G.mul(s, g)] = 1;
    }
    return reps;
}

/**
 * A subgroup re-indexed as a standalone group.  to_parent maps local indices
 * to indices in the parent group; from_parent is the partial inverse (-1
 * outside the subgroup).  Local index 0 is the identity.
 */
struct SubgroupView {
    FiniteGroup group;
    std::vector<int> to_parent;
    std::vector<int> from_parent;
};

inline SubgroupView subgroup_as_group(const FiniteGroup& G, const Subgroup& S) {
    require(is_subgroup(G, S), "not a subgroup");
    SubgroupView v;
    v.to_parent = S;
    v.from_parent.assign(G.n, -1);
    for (size_t i = 0; i < S.size(); ++i) v.from_parent[S[i]] = static_cast<int>(i);
    int m = static_cast<int>(S.size());
    std::vector<int> t(static_cast<size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            t[static_cast<size_t>(a) * m + b] = v.from_parent[G.mul(S[a], S[b])];
    v.group = group_from_table(m, std::move(t));
    return v;
}

/**
 * Quotient S/N for N normal in S (both as index sets of the same parent
 * group).  Quotient element i corresponds to the coset N*rep[i]; proj maps a
 * parent index in S to its coset index.  Identity coset is index 0.
 */
struct QuotientGroup {
    FiniteGroup group;
    std::vector<int> rep;   // coset -> representative (parent index)
    std::vector<int> proj;  // parent index -> coset, -1 outside S
};

inline QuotientGroup quotient_group(const FiniteGroup& G, const Subgroup& S, const Subgroup& N) {
    require(is_subgroup(G, S) && is_subgroup(G, N), "quotient needs subgroups");
    for (int x : N) require(std::binary_search(S.begin(), S.end(), x), "N not contained in S");
    require(is_normal_in(G, N, S), "N not normal in S");
    QuotientGroup q;
    q.proj.assign(G.n, -1);
    for (int s : S) {
        if (q.proj[s] >= 0) continue;
        int c = static_cast<int>(q.rep.size());
        q.rep.push_back(s);
        for (int x : N) q.proj[G.mul(x, s)] = c;
    }
    int m = static_cast<int>(q.rep.size());
    std::vector<int> t(static_cast<size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            t[static_cast<size_t>(a) * m + b] = q.proj[G.mul(q.rep[a], q.rep[b])];
    q.group = group_from_table(m, std::move(t));
    return q;
}

// ---------------------------------------------------------------------------
// Subgroup enumeration.  Closure-based breadth search; bound guards the
// exponential worst case.
// ---------------------------------------------------------------------------

inline std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& G, bool up_to_conjugacy = false) {
    require(G.n <= 64, "subgroup enumeration bound is order 64");
    std::set<uint64_t> seen;
    std::vector<Subgroup> found;
    auto mask_of = [](const Subgroup& S) {
        uint64_t m = 0;
        for (int x : S) m |= uint64_t(1) << x;
        return m;
    };
    std::vector<Subgroup> frontier{Subgroup{0}};
    seen.insert(1);
    found.push_back(Subgroup{0});
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const auto& H : frontier) {
            for (int x = 1; x < G.n; ++x) {
                if (std::binary_search(H.begin(), H.end(), x)) continue;
                std::vector<int> gens = H;
                gens.push_back(x);
                Subgroup C = subgroup_closure(G, gens);
                uint64_t m = mask_of(C);
                if (seen.insert(m).second) {
                    found.push_back(C);
                    next.push_back(C);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(found.begin(), found.end(), [&](const Subgroup& a, const Subgroup& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    if (!up_to_conjugacy) return found;
    // Keep the lexicographically least member of each conjugacy orbit.
    std::vector<Subgroup> reps;
    std::set<uint64_t> covered;
    for (const auto& H : found) {
        if (covered.count(mask_of(H))) continue;
        reps.push_back(H);
        for (int g = 0; g < G.n; ++g) covered.insert(mask_of(conjugate_subgroup(G, H, g)));
    }
    return reps;
}

// ---------------------------------------------------------------------------
// Homomorphisms.
// ---------------------------------------------------------------------------

struct GroupHom {
    std::vector<int> map; // map[a] = image of a, domain indices
};

inline bool is_homomorphism(const FiniteGroup& A, const FiniteGroup& B, const GroupHom& f) {
    if (f.map.size() != static_cast<size_t>(A.n)) return false;
    for (int v : f.map)
        if (v < 0 || v >= B.n) return false;
    if (f.map[0] != 0) return false;
    for (int a = 0; a < A.n; ++a)
        for (int b = 0; b < A.n; ++b)
            if (f.map[A.mul(a, b)] != B.mul(f.map[a], f.map[b])) return false;
    return true;
}

inline bool is_isomorphism(const FiniteGroup& A, const FiniteGroup& B, const GroupHom& f) {
    if (A.n != B.n || !is_homomorphism(A, B, f)) return false;
    std::vector<char> hit(B.n, 0);
    for (int v : f.map) {
        if (hit[v]) return false;
        hit[v] = 1;
    }
    return true;
}

namespace detail {
inline void iso_search(const FiniteGroup& A, const FiniteGroup& B, std::vector<int>& f,
                       std::vector<char>& used, int pos, std::vector<GroupHom>& out) {
    if (pos == A.n) {
        GroupHom h{f};
        if (is_isomorphism(A, B, h)) out.push_back(std::move(h));
        return;
    }
    for (int b = 0; b < B.n; ++b) {
        if (used[b] || B.order_of(b) != A.order_of(pos)) continue;
        f[pos] = b;
        bool ok = true;
        for (int u = 0; u < pos && ok; ++u) {
            int p = A.mul(u, pos), q = A.mul(pos, u);
            if (p <= pos && f[p] != B.mul(f[u], b)) ok = false;
            if (q <= pos && f[q] != B.mul(b, f[u])) ok = false;
        }
        if (ok) {
            used[b] = 1;
            iso_search(A, B, f, used, pos + 1, out);
            used[b] = 0;
        }
    }
    f[pos] = -1;
}
} // namespace detail

// All isomorphisms A -> B in deterministic order.  Intended for small groups
// (Galois groups and quotients of order <= 16 or so).
inline std::vector<GroupHom> enumerate_isomorphisms(const FiniteGroup& A, const FiniteGroup& B) {
    std::vector<GroupHom> out;
    if (A.n != B.n) return out;
    require(A.n <= 24, "isomorphism enumeration bound is order 24");
    std::vector<int> f(A.n, -1);
    f[0] = 0;
    std::vector<char> used(B.n, 0);
    used[0] = 1;
    detail::iso_search(A, B, f, used, 1, out);
    return out;
}

} // namespace kgal
