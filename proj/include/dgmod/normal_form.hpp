#pragma once

#include <tuple>
#include <vector>

#include "dgmod/matrix.hpp"

namespace dgmod {

namespace detail {

inline Int int_of(const Rat& x) {
    if (rat_den(x) != 1) throw UnsupportedRing("expected integer entry");
    return rat_num(x);
}

// balanced quotient: q minimizing |a - q*b|
inline Int balanced_quot(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    Int half = b > 0 ? b : -b;
    if (2 * (r > 0 ? r : -r) > half) q += (r > 0) == (b > 0) ? 1 : -1;
    return q;
}

using IntMat = std::vector<std::vector<Int>>;

inline IntMat int_mat_of(const Matrix& m) {
    IntMat A(m.rows, std::vector<Int>(m.cols));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) A[i][j] = int_of(m.at(i, j));
    return A;
}

inline IntMat int_identity(int n) {
    IntMat I(n, std::vector<Int>(n, 0));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

inline Matrix mat_of(const RingSpec& ring, const IntMat& A, int cols_hint = 0) {
    int rows = (int)A.size();
    int cols = rows ? (int)A[0].size() : cols_hint;
    Matrix out(ring, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out.at(i, j) = ring.canon(Rat(A[i][j]));
    return out;
}

}  // namespace detail

struct SmithResult {
    Matrix U, D, V;  // U*m*V = D
};

/**
 * Smith normal form over Z.  Returns U, D, V with U*m*V = D, D diagonal with
 * d1 | d2 | ..., all d_i >= 0, and U, V invertible over Z (products of
 * elementary transforms, det = +-1).  Deterministic pivot choice: smallest
 * absolute value, ties broken by row then column index.
 */
inline SmithResult smith_normal_form(const Matrix& m) {
    if (m.ring.kind != RingKind::Integers) throw UnsupportedRing("smith_normal_form requires Z");
    using detail::IntMat;
    int R = m.rows, C = m.cols;
    IntMat A = detail::int_mat_of(m);
    IntMat U = detail::int_identity(R), V = detail::int_identity(C);

    auto row_swap = [&](int i, int k) {
        std::swap(A[i], A[k]);
        std::swap(U[i], U[k]);
    };
    auto col_swap = [&](int j, int k) {
        for (int i = 0; i < R; ++i) std::swap(A[i][j], A[i][k]);
        for (int i = 0; i < C; ++i) std::swap(V[i][j], V[i][k]);
    };
    auto row_addmul = [&](int i, int k, const Int& q) {  // row i -= q*row k
        for (int j = 0; j < C; ++j) A[i][j] -= q * A[k][j];
        for (int j = 0; j < R; ++j) U[i][j] -= q * U[k][j];
    };
    auto col_addmul = [&](int j, int k, const Int& q) {  // col j -= q*col k
        for (int i = 0; i < R; ++i) A[i][j] -= q * A[i][k];
        for (int i = 0; i < C; ++i) V[i][j] -= q * V[i][k];
    };
    auto row_negate = [&](int i) {
        for (int j = 0; j < C; ++j) A[i][j] = -A[i][j];
        for (int j = 0; j < R; ++j) U[i][j] = -U[i][j];
    };

    int t = 0;
    while (t < R && t < C) {
        bool locked = false;
        bool empty = false;
        while (!locked) {
            // re-select the minimal pivot every pass; this keeps entry growth tame
            int pi = -1, pj = -1;
            Int best = 0;
            for (int i = t; i < R; ++i)
                for (int j = t; j < C; ++j) {
                    if (A[i][j] == 0) continue;
                    Int v = A[i][j] > 0 ? A[i][j] : -A[i][j];
                    if (pi < 0 || v < best) { best = v; pi = i; pj = j; }
                }
            if (pi < 0) { empty = true; break; }
            row_swap(t, pi);
            col_swap(t, pj);

            bool dirty = false;
            for (int i = t + 1; i < R; ++i) {
                if (A[i][t] == 0) continue;
                Int q = detail::balanced_quot(A[i][t], A[t][t]);
                row_addmul(i, t, q);
                if (A[i][t] != 0) dirty = true;
            }
            for (int j = t + 1; j < C; ++j) {
                if (A[t][j] == 0) continue;
                Int q = detail::balanced_quot(A[t][j], A[t][t]);
                col_addmul(j, t, q);
                if (A[t][j] != 0) dirty = true;
            }
            if (dirty) continue;
            locked = true;
            for (int i = t + 1; i < R && locked; ++i)
                for (int j = t + 1; j < C && locked; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        row_addmul(t, i, Int(-1));  // row t += row i
                        locked = false;
                    }
        }
        if (empty) break;
        if (A[t][t] < 0) row_negate(t);
        ++t;
    }

    Matrix D(m.ring, R, C);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) D.at(i, j) = Rat(A[i][j]);
    return SmithResult{detail::mat_of(m.ring, U, R), D, detail::mat_of(m.ring, V, C)};
}

/**
 * Row Hermite normal form over Z with zero rows dropped: echelon, positive
 * pivots, entries above a pivot reduced into [0, pivot).  Canonical for the
 * row lattice.
 */
inline Matrix hermite_rows(const Matrix& m) {
    if (m.ring.kind != RingKind::Integers) throw UnsupportedRing("hermite_rows requires Z");
    int R = m.rows, C = m.cols;
    detail::IntMat A = detail::int_mat_of(m);

    int r = 0;
    for (int j = 0; j < C && r < R; ++j) {
        while (true) {
            int pi = -1;
            Int best = 0;
            for (int i = r; i < R; ++i) {
                if (A[i][j] == 0) continue;
                Int v = A[i][j] > 0 ? A[i][j] : -A[i][j];
                if (pi < 0 || v < best) { best = v; pi = i; }
            }
            if (pi < 0) break;
            std::swap(A[r], A[pi]);
            bool all_clear = true;
            for (int i = r + 1; i < R; ++i) {
                if (A[i][j] == 0) continue;
                Int q = detail::balanced_quot(A[i][j], A[r][j]);
                for (int k = 0; k < C; ++k) A[i][k] -= q * A[r][k];
                if (A[i][j] != 0) all_clear = false;
            }
            if (all_clear) break;
        }
        if (r >= R || A[r][j] == 0) continue;
        if (A[r][j] < 0)
            for (int k = 0; k < C; ++k) A[r][k] = -A[r][k];
        for (int i = 0; i < r; ++i) {
            Int q = A[i][j] / A[r][j];
            if (A[i][j] % A[r][j] < 0) q -= 1;  // floor
            if (q != 0)
                for (int k = 0; k < C; ++k) A[i][k] -= q * A[r][k];
        }
        ++r;
    }
    A.resize(r);
    return detail::mat_of(m.ring, A, C);
}

/**
 * Howell form of a matrix over Z/n, computed through the integer Hermite form
 * of [m ; n*I].  Canonical for the row span; zero rows dropped.  Membership in
 * the row span is decidable by echelon reduction (see solve.hpp).
 */
inline Matrix howell_form(const Matrix& m) {
    if (m.ring.kind != RingKind::IntegersMod && m.ring.kind != RingKind::PrimeField)
        throw UnsupportedRing("howell_form requires Z/n");
    const Int n = m.ring.modulus;
    RingSpec zz = RingSpec::Z();
    Matrix lift(zz, m.rows + m.cols, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) lift.at(i, j) = m.at(i, j);  // canonical reps
    for (int j = 0; j < m.cols; ++j) lift.at(m.rows + j, j) = Rat(n);
    Matrix h = hermite_rows(lift);
    std::vector<int> keep;
    Matrix red(m.ring, h.rows, h.cols);
    for (int i = 0; i < h.rows; ++i) {
        bool nz = false;
        for (int j = 0; j < h.cols; ++j) {
            red.at(i, j) = m.ring.canon(h.at(i, j));
            if (red.at(i, j) != 0) nz = true;
        }
        if (nz) keep.push_back(i);
    }
    Matrix out(m.ring, (int)keep.size(), h.cols);
    for (int i = 0; i < (int)keep.size(); ++i)
        for (int j = 0; j < h.cols; ++j) out.at(i, j) = red.at(keep[i], j);
    return out;
}

namespace detail {

// native-arithmetic echelon over F_p for small p
inline Matrix rref_rows_fp(const Matrix& m) {
    const long long p = (long long)m.ring.modulus;
    int R = m.rows, C = m.cols;
    std::vector<long long> a((size_t)R * C);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) {
            Int v = rat_num(m.at(i, j)) % p;
            if (v < 0) v += p;
            a[(size_t)i * C + j] = (long long)v;
        }
    auto inv_mod = [&](long long x) {
        long long r = 1, b = x % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    int r = 0;
    for (int j = 0; j < C && r < R; ++j) {
        int pi = -1;
        for (int i = r; i < R; ++i)
            if (a[(size_t)i * C + j]) { pi = i; break; }
        if (pi < 0) continue;
        if (pi != r)
            for (int k = 0; k < C; ++k) std::swap(a[(size_t)r * C + k], a[(size_t)pi * C + k]);
        long long iv = inv_mod(a[(size_t)r * C + j]);
        for (int k = 0; k < C; ++k) a[(size_t)r * C + k] = a[(size_t)r * C + k] * iv % p;
        for (int i = 0; i < R; ++i) {
            if (i == r) continue;
            long long f = a[(size_t)i * C + j];
            if (!f) continue;
            for (int k = 0; k < C; ++k)
                a[(size_t)i * C + k] = (a[(size_t)i * C + k] + (p - f) * a[(size_t)r * C + k]) % p;
        }
        ++r;
    }
    Matrix out(m.ring, r, C);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < C; ++j) out.at(i, j) = Rat(a[(size_t)i * C + j]);
    return out;
}

}  // namespace detail

/**
 * Reduced row echelon form over a field (F_p or Q), zero rows dropped.
 */
inline Matrix rref_rows(const Matrix& m) {
    if (!m.ring.is_field()) throw UnsupportedRing("rref_rows requires a field");
    if (m.ring.kind == RingKind::PrimeField && m.ring.modulus < (Int(1) << 30))
        return detail::rref_rows_fp(m);
    Matrix A = m;
    A.canonicalize();
    int r = 0;
    for (int j = 0; j < A.cols && r < A.rows; ++j) {
        int pi = -1;
        for (int i = r; i < A.rows; ++i)
            if (!A.ring.is_zero(A.at(i, j))) { pi = i; break; }
        if (pi < 0) continue;
        for (int k = 0; k < A.cols; ++k) std::swap(A.at(r, k), A.at(pi, k));
        Rat inv = A.ring.inv(A.at(r, j));
        for (int k = 0; k < A.cols; ++k) A.at(r, k) = A.ring.mul(A.at(r, k), inv);
        for (int i = 0; i < A.rows; ++i) {
            if (i == r) continue;
            Rat f = A.at(i, j);
            if (A.ring.is_zero(f)) continue;
            for (int k = 0; k < A.cols; ++k)
                A.at(i, k) = A.ring.sub(A.at(i, k), A.ring.mul(f, A.at(r, k)));
        }
        ++r;
    }
    return A.rows_slice(0, r);
}

/**
 * Canonical echelon spanning set of the row span, per ring: Hermite over Z,
 * Howell over Z/n, RREF over fields.
 */
inline Matrix echelon_rows(const Matrix& m) {
    switch (m.ring.kind) {
        case RingKind::Integers: return hermite_rows(m);
        case RingKind::IntegersMod: return howell_form(m);
        case RingKind::PrimeField:
        case RingKind::Rationals: return rref_rows(m);
    }
    throw UnsupportedRing("echelon_rows");
}

/// Canonical spanning set of the column span (columns of the result).
inline Matrix column_span_basis(const Matrix& m) { return echelon_rows(m.transposed()).transposed(); }

}  // namespace dgmod
