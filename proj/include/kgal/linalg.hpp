#pragma once

#include <optional>
#include <vector>

#include "kgal/common.hpp"

namespace kgal {

/**
 * Exact elimination over an arbitrary field, templated on an operations
 * object F with:  typename F::Elem, zero(), one(), is_zero(e), eq(a,b),
 * add, sub, mul, div, neg.
 *
 * The elimination is fraction free in the Bareiss sense: rows are updated as
 * (pivot*row - lead*pivot_row) / previous_pivot, which keeps intermediate
 * entries as minors of the input and avoids denominator blowup for rational
 * data.  Pivoting always takes the first nonzero entry, so results are
 * deterministic.
 */
template <class F>
using MatrixOf = std::vector<std::vector<typename F::Elem>>;

template <class F>
struct Echelon {
    MatrixOf<F> rows;            // echelon rows, not normalized
    std::vector<int> pivot_cols; // one per echelon row
    size_t rank = 0;
    size_t cols = 0;
};

template <class F>
Echelon<F> echelon_form(const F& f, MatrixOf<F> a, size_t cols) {
    Echelon<F> e;
    e.cols = cols;
    size_t nr = a.size();
    typename F::Elem prev = f.one();
    size_t row = 0;
    for (size_t col = 0; col < cols && row < nr; ++col) {
        size_t piv = row;
        while (piv < nr && f.is_zero(a[piv][col])) ++piv;
        if (piv == nr) continue;
        std::swap(a[row], a[piv]);
        const typename F::Elem pivot = a[row][col];
        for (size_t i = row + 1; i < nr; ++i) {
            if (f.is_zero(a[i][col])) {
                // Still rescale to keep the fraction-free invariant uniform.
                for (size_t j = col; j < cols; ++j)
                    a[i][j] = f.div(f.mul(pivot, a[i][j]), prev);
                continue;
            }
            const typename F::Elem lead = a[i][col];
            for (size_t j = col; j < cols; ++j)
                a[i][j] = f.div(f.sub(f.mul(pivot, a[i][j]), f.mul(lead, a[row][j])), prev);
        }
        e.pivot_cols.push_back(static_cast<int>(col));
        prev = pivot;
        ++row;
    }
    e.rank = row;
    a.resize(row);
    e.rows = std::move(a);
    return e;
}

template <class F>
size_t rank_of(const F& f, const MatrixOf<F>& a, size_t cols) {
    return echelon_form(f, a, cols).rank;
}

/**
 * Kernel basis of the linear map given by the rows (a vector v is in the
 * kernel when a*v = 0).  One basis vector per free column, ordered by free
 * column index, normalized to have entry 1 at its free column.  This makes
 * the first kernel vector e_j whenever the kernel is spanned by standard
 * basis vectors.
 */
template <class F>
MatrixOf<F> kernel_basis(const F& f, const MatrixOf<F>& a, size_t cols) {
    Echelon<F> e = echelon_form(f, a, cols);
    std::vector<char> is_pivot(cols, 0);
    for (int c : e.pivot_cols) is_pivot[c] = 1;
    MatrixOf<F> basis;
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<typename F::Elem> v(cols, f.zero());
        v[fc] = f.one();
        for (size_t ri = e.rank; ri-- > 0;) {
            size_t pc = static_cast<size_t>(e.pivot_cols[ri]);
            typename F::Elem s = f.zero();
            for (size_t j = pc + 1; j < cols; ++j) {
                if (!f.is_zero(v[j]) && !f.is_zero(e.rows[ri][j]))
                    s = f.add(s, f.mul(e.rows[ri][j], v[j]));
            }
            v[pc] = f.neg(f.div(s, e.rows[ri][pc]));
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// One solution of a*x = b, if any.
template <class F>
std::optional<std::vector<typename F::Elem>> solve_linear(const F& f, MatrixOf<F> a,
                                                          const std::vector<typename F::Elem>& b,
                                                          size_t cols) {
    for (size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
    Echelon<F> e = echelon_form(f, std::move(a), cols + 1);
    for (size_t r = 0; r < e.rank; ++r)
        if (static_cast<size_t>(e.pivot_cols[r]) == cols) return std::nullopt; // inconsistent
    std::vector<typename F::Elem> x(cols, f.zero());
    for (size_t ri = e.rank; ri-- > 0;) {
        size_t pc = static_cast<size_t>(e.pivot_cols[ri]);
        typename F::Elem s = e.rows[ri][cols];
        for (size_t j = pc + 1; j < cols; ++j)
            if (!f.is_zero(x[j])) s = f.sub(s, f.mul(e.rows[ri][j], x[j]));
        x[pc] = f.div(s, e.rows[ri][pc]);
    }
    return x;
}

// Inverse of a square matrix, if invertible.
template <class F>
std::optional<MatrixOf<F>> matrix_inverse(const F& f, const MatrixOf<F>& a) {
    size_t n = a.size();
    MatrixOf<F> aug(n);
    for (size_t i = 0; i < n; ++i) {
        require(a[i].size() == n, "matrix_inverse needs a square matrix");
        aug[i] = a[i];
        for (size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? f.one() : f.zero());
    }
    Echelon<F> e = echelon_form(f, std::move(aug), 2 * n);
    if (e.rank < n || static_cast<size_t>(e.pivot_cols[n - 1]) >= n) return std::nullopt;
    // Back substitution on the augmented block.
    MatrixOf<F> inv(n, std::vector<typename F::Elem>(n, f.zero()));
    for (size_t colb = 0; colb < n; ++colb) {
        std::vector<typename F::Elem> x(n, f.zero());
        for (size_t ri = n; ri-- > 0;) {
            size_t pc = static_cast<size_t>(e.pivot_cols[ri]);
            typename F::Elem s = e.rows[ri][n + colb];
            for (size_t j = pc + 1; j < n; ++j)
                if (!f.is_zero(x[j])) s = f.sub(s, f.mul(e.rows[ri][j], x[j]));
            x[pc] = f.div(s, e.rows[ri][pc]);
        }
        for (size_t r = 0; r < n; ++r) inv[r][colb] = x[r];
    }
    return inv;
}

template <class F>
std::vector<typename F::Elem> mat_vec(const F& f, const MatrixOf<F>& a,
                                      const std::vector<typename F::Elem>& v) {
    std::vector<typename F::Elem> out(a.size(), f.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (!f.is_zero(a[i][j]) && !f.is_zero(v[j]))
                out[i] = f.add(out[i], f.mul(a[i][j], v[j]));
    return out;
}

template <class F>
MatrixOf<F> mat_mul(const F& f, const MatrixOf<F>& a, const MatrixOf<F>& b) {
    size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    MatrixOf<F> out(n, std::vector<typename F::Elem>(m, f.zero()));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (f.is_zero(a[i][l])) continue;
            for (size_t j = 0; j < m; ++j)
                if (!f.is_zero(b[l][j])) out[i][j] = f.add(out[i][j], f.mul(a[i][l], b[l][j]));
        }
    return out;
}

/**
 * Incrementally maintained reduced row basis: rows are pivot-normalized,
 * every pivot column is cleared in all other rows, and rows are kept in
 * increasing pivot-column order.  Supports cheap span tests, coordinate
 * expression, and kernel extraction without re-eliminating from scratch.
 */
template <class F>
struct ReducedBasis {
    MatrixOf<F> rows;
    std::vector<int> pivot_cols;
    size_t cols = 0;

    explicit ReducedBasis(size_t c = 0) : cols(c) {}
    size_t rank() const { return rows.size(); }
};

// Reduce v against the basis in place; returns the pivot column of the
// remainder, or -1 when v lies in the span.
template <class F>
int rb_reduce(const F& f, const ReducedBasis<F>& rb, std::vector<typename F::Elem>& v) {
    for (size_t r = 0; r < rb.rows.size(); ++r) {
        int pc = rb.pivot_cols[r];
        if (f.is_zero(v[pc])) continue;
        typename F::Elem c = v[pc];
        for (size_t j = 0; j < rb.cols; ++j)
            if (!f.is_zero(rb.rows[r][j])) v[j] = f.sub(v[j], f.mul(c, rb.rows[r][j]));
    }
    for (size_t j = 0; j < rb.cols; ++j)
        if (!f.is_zero(v[j])) return (int)j;
    return -1;
}

// Insert v, keeping the reduced invariants; returns whether the rank grew.
template <class F>
bool rb_insert(const F& f, ReducedBasis<F>& rb, std::vector<typename F::Elem> v) {
    require(v.size() == rb.cols, "row length mismatch");
    int pc = rb_reduce(f, rb, v);
    if (pc < 0) return false;
    typename F::Elem inv = f.div(f.one(), v[pc]);
    for (auto& e : v) e = f.mul(e, inv);
    for (size_t r = 0; r < rb.rows.size(); ++r) {
        typename F::Elem c = rb.rows[r][pc];
        if (f.is_zero(c)) continue;
        for (size_t j = 0; j < rb.cols; ++j)
            if (!f.is_zero(v[j])) rb.rows[r][j] = f.sub(rb.rows[r][j], f.mul(c, v[j]));
    }
    size_t pos = 0;
    while (pos < rb.rows.size() && rb.pivot_cols[pos] < pc) ++pos;
    rb.rows.insert(rb.rows.begin() + pos, std::move(v));
    rb.pivot_cols.insert(rb.pivot_cols.begin() + pos, pc);
    return true;
}

// Coordinates of v in the stored rows, or nullopt when v is outside the span.
template <class F>
std::optional<std::vector<typename F::Elem>> express_in_basis(
    const F& f, const ReducedBasis<F>& rb, std::vector<typename F::Elem> v) {
    std::vector<typename F::Elem> w(rb.rows.size(), f.zero());
    for (size_t r = 0; r < rb.rows.size(); ++r) {
        int pc = rb.pivot_cols[r];
        if (f.is_zero(v[pc])) continue;
        w[r] = v[pc];
        for (size_t j = 0; j < rb.cols; ++j)
            if (!f.is_zero(rb.rows[r][j])) v[j] = f.sub(v[j], f.mul(w[r], rb.rows[r][j]));
    }
    for (size_t j = 0; j < rb.cols; ++j)
        if (!f.is_zero(v[j])) return std::nullopt;
    return w;
}

// Kernel of the linear system whose rows were inserted into rb, with the
// same free-column normalization as kernel_basis.
template <class F>
MatrixOf<F> kernel_from_reduced(const F& f, const ReducedBasis<F>& rb) {
    std::vector<char> is_pivot(rb.cols, 0);
    for (int pc : rb.pivot_cols) is_pivot[pc] = 1;
    MatrixOf<F> out;
    for (size_t fc = 0; fc < rb.cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<typename F::Elem> v(rb.cols, f.zero());
        v[fc] = f.one();
        for (size_t r = 0; r < rb.rows.size(); ++r)
            v[rb.pivot_cols[r]] = f.neg(rb.rows[r][fc]);
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace kgal
