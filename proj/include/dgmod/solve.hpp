#pragma once

#include <optional>
#include <vector>

#include "dgmod/normal_form.hpp"

namespace dgmod {

/**
 * Deterministic linear solve m*x = b.  Returns the canonical solution
 * (free parameters set to 0, back-substitution order fixed) or nullopt when
 * the system is inconsistent.  Over Z/n the system is lifted to Z as
 * [m | n*I]; over Z it is solved through the Smith form.
 */
inline std::optional<Matrix> solve(const Matrix& m, const Matrix& b) {
    if (b.rows != m.rows || b.cols != 1) throw ShapeError("solve: rhs shape");
    if (m.ring != b.ring) throw RingMismatch("solve: ring mismatch");
    const RingSpec& ring = m.ring;

    if (ring.is_field()) {
        Matrix aug = m.hstack(b);
        Matrix R = rref_rows(aug);
        // locate pivots
        std::vector<int> pivot_col(R.rows, -1);
        for (int i = 0; i < R.rows; ++i)
            for (int j = 0; j < R.cols; ++j)
                if (!ring.is_zero(R.at(i, j))) { pivot_col[i] = j; break; }
        Matrix x(ring, m.cols, 1);
        for (int i = 0; i < R.rows; ++i) {
            if (pivot_col[i] == m.cols) return std::nullopt;  // 0 = nonzero
            if (pivot_col[i] >= 0 && pivot_col[i] < m.cols) x.at(pivot_col[i], 0) = R.at(i, m.cols);
        }
        return x;
    }

    if (ring.kind == RingKind::Integers) {
        SmithResult s = smith_normal_form(m);
        Matrix c = s.U * b;
        int dlen = std::min(m.rows, m.cols);
        Matrix y(ring, m.cols, 1);
        for (int i = 0; i < m.rows; ++i) {
            Rat ci = c.at(i, 0);
            Rat di = (i < dlen) ? s.D.at(i, i) : Rat(0);
            if (di == 0) {
                if (ci != 0) return std::nullopt;
            } else {
                Int num = rat_num(ci), den = rat_num(di);
                if (num % den != 0) return std::nullopt;
                y.at(i, 0) = Rat(num / den);
            }
        }
        return s.V * y;
    }

    // Z/n: lift to Z with [m | n*I]
    RingSpec zz = RingSpec::Z();
    Matrix lift(zz, m.rows, m.cols + m.rows);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) lift.at(i, j) = m.at(i, j);
        lift.at(i, m.cols + i) = Rat(ring.modulus);
    }
    Matrix bz(zz, b.rows, 1);
    for (int i = 0; i < b.rows; ++i) bz.at(i, 0) = b.at(i, 0);
    auto xz = solve(lift, bz);
    if (!xz) return std::nullopt;
    Matrix x(ring, m.cols, 1);
    for (int j = 0; j < m.cols; ++j) x.at(j, 0) = ring.canon(xz->at(j, 0));
    return x;
}

/// Simultaneous solve m*X = B with one elimination; nullopt if inconsistent.
inline std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& B) {
    if (B.rows != m.rows) throw ShapeError("solve_matrix: rhs shape");
    if (m.ring != B.ring) throw RingMismatch("solve_matrix: ring mismatch");
    const RingSpec& ring = m.ring;
    if (B.cols == 0) return Matrix(ring, m.cols, 0);

    if (ring.is_field()) {
        Matrix aug = m.hstack(B);
        Matrix R = rref_rows(aug);
        std::vector<int> pivot_col(R.rows, -1);
        for (int i = 0; i < R.rows; ++i)
            for (int j = 0; j < R.cols; ++j)
                if (!ring.is_zero(R.at(i, j))) { pivot_col[i] = j; break; }
        Matrix X(ring, m.cols, B.cols);
        for (int i = 0; i < R.rows; ++i) {
            if (pivot_col[i] >= m.cols) return std::nullopt;
            if (pivot_col[i] >= 0)
                for (int j = 0; j < B.cols; ++j) X.at(pivot_col[i], j) = R.at(i, m.cols + j);
        }
        return X;
    }

    if (ring.kind == RingKind::Integers) {
        SmithResult s = smith_normal_form(m);
        Matrix c = s.U * B;
        int dlen = std::min(m.rows, m.cols);
        Matrix y(ring, m.cols, B.cols);
        for (int i = 0; i < m.rows; ++i) {
            Rat di = (i < dlen) ? s.D.at(i, i) : Rat(0);
            for (int j = 0; j < B.cols; ++j) {
                Rat ci = c.at(i, j);
                if (di == 0) {
                    if (ci != 0) return std::nullopt;
                } else {
                    Int num = rat_num(ci), den = rat_num(di);
                    if (num % den != 0) return std::nullopt;
                    y.at(i, j) = Rat(num / den);
                }
            }
        }
        return s.V * y;
    }

    // Z/n: lift to Z with [m | n*I]
    RingSpec zz = RingSpec::Z();
    Matrix lift(zz, m.rows, m.cols + m.rows);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) lift.at(i, j) = m.at(i, j);
        lift.at(i, m.cols + i) = Rat(ring.modulus);
    }
    Matrix Bz(zz, B.rows, B.cols);
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j) Bz.at(i, j) = B.at(i, j);
    auto Xz = solve_matrix(lift, Bz);
    if (!Xz) return std::nullopt;
    Matrix X(ring, m.cols, B.cols);
    for (int i = 0; i < m.cols; ++i)
        for (int j = 0; j < B.cols; ++j) X.at(i, j) = ring.canon(Xz->at(i, j));
    return X;
}

/**
 * Columns span ker(m).  Over Z/n computed by lifting to Z with [m | n*I] and
 * projecting to the first block of coordinates.
 */
inline Matrix kernel(const Matrix& m) {
    const RingSpec& ring = m.ring;
    if (ring.is_field()) {
        Matrix R = rref_rows(m);
        std::vector<int> pivot_of_col(m.cols, -1);
        for (int i = 0; i < R.rows; ++i)
            for (int j = 0; j < R.cols; ++j)
                if (!ring.is_zero(R.at(i, j))) { pivot_of_col[j] = i; break; }
        std::vector<int> free_cols;
        for (int j = 0; j < m.cols; ++j)
            if (pivot_of_col[j] < 0) free_cols.push_back(j);
        Matrix K(ring, m.cols, (int)free_cols.size());
        for (int k = 0; k < (int)free_cols.size(); ++k) {
            int j = free_cols[k];
            K.at(j, k) = 1;
            for (int jj = 0; jj < m.cols; ++jj) {
                int i = pivot_of_col[jj];
                if (i >= 0) K.at(jj, k) = ring.neg(R.at(i, j));
            }
        }
        return K;
    }
    if (ring.kind == RingKind::Integers) {
        SmithResult s = smith_normal_form(m);
        int dlen = std::min(m.rows, m.cols);
        std::vector<int> idx;
        for (int i = 0; i < m.cols; ++i)
            if (i >= dlen || s.D.at(i, i) == 0) idx.push_back(i);
        return s.V.cols_slice(idx);
    }
    // Z/n
    RingSpec zz = RingSpec::Z();
    Matrix lift(zz, m.rows, m.cols + m.rows);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) lift.at(i, j) = m.at(i, j);
        lift.at(i, m.cols + i) = Rat(ring.modulus);
    }
    Matrix kz = kernel(lift);
    Matrix K(ring, m.cols, kz.cols);
    for (int j = 0; j < kz.cols; ++j)
        for (int i = 0; i < m.cols; ++i) K.at(i, j) = ring.canon(kz.at(i, j));
    return column_span_basis(K);
}

/// Is v in the column span of M?
inline bool in_column_span(const Matrix& M, const Matrix& v) { return solve(M, v).has_value(); }

/// Is every column of B in the column span of M?
inline bool columns_in_span(const Matrix& M, const Matrix& B) { return solve_matrix(M, B).has_value(); }

/**
 * Builder for block linear systems whose unknowns are matrices.  Equations
 * have the shape  sum_k  L_k * X_{b_k} * R_k  = RHS, entered one product term
 * at a time.  Solved through the canonical solver, so solutions are
 * deterministic (free parameters 0).
 */
struct LinearSystem {
    RingSpec ring;
    int nvars = 0;
    struct Block { int base, rows, cols; };
    std::vector<Block> blocks;

    struct Term {
        Matrix L;  // may be empty (treated as identity)
        int block;
        Matrix R;  // may be empty (treated as identity)
        Rat coef;
    };
    struct Equation {
        std::vector<Term> terms;
        Matrix rhs;
    };
    std::vector<Equation> eqs;

    explicit LinearSystem(RingSpec r) : ring(r) {}

    int add_block(int rows, int cols) {
        blocks.push_back(Block{nvars, rows, cols});
        nvars += rows * cols;
        return (int)blocks.size() - 1;
    }

    Equation& new_equation(int rows, int cols) {
        eqs.push_back(Equation{{}, Matrix(ring, rows, cols)});
        return eqs.back();
    }

    // adds  coef * L * X_block * R  to the equation (empty L/R = identity)
    static void add_term(Equation& e, Matrix L, int block, Matrix R, Rat coef = Rat(1)) {
        e.terms.push_back(Term{std::move(L), block, std::move(R), coef});
    }

    std::optional<std::vector<Matrix>> solve_blocks() const {
        int total_rows = 0;
        for (auto& e : eqs) total_rows += e.rhs.rows * e.rhs.cols;
        Matrix A(ring, total_rows, nvars);
        Matrix b(ring, total_rows, 1);
        int row0 = 0;
        for (auto& e : eqs) {
            int er = e.rhs.rows, ec = e.rhs.cols;
            for (int i = 0; i < er; ++i)
                for (int j = 0; j < ec; ++j) b.at(row0 + i * ec + j, 0) = e.rhs.at(i, j);
            for (auto& t : e.terms) {
                const Block& blk = blocks[t.block];
                bool idL = (t.L.rows == 0 && t.L.cols == 0);
                bool idR = (t.R.rows == 0 && t.R.cols == 0);
                int Lr = idL ? er : t.L.rows, Lc = idL ? er : t.L.cols;
                int Rr = idR ? ec : t.R.rows, Rc = idR ? ec : t.R.cols;
                if (Lr != er || Rc != ec || Lc != blk.rows || Rr != blk.cols)
                    throw ShapeError("LinearSystem term shape");
                // (L X R)_{ij} = sum_{p,q} L_{ip} X_{pq} R_{qj}
                for (int i = 0; i < er; ++i)
                    for (int p = 0; p < blk.rows; ++p) {
                        Rat lip = idL ? Rat(i == p ? 1 : 0) : t.L.at(i, p);
                        if (lip == 0) continue;
                        for (int q = 0; q < blk.cols; ++q)
                            for (int j = 0; j < ec; ++j) {
                                Rat rqj = idR ? Rat(q == j ? 1 : 0) : t.R.at(q, j);
                                if (rqj == 0) continue;
                                int r = row0 + i * ec + j;
                                int c = blk.base + p * blk.cols + q;
                                A.at(r, c) = ring.add(A.at(r, c), ring.mul(t.coef, ring.mul(lip, rqj)));
                            }
                    }
            }
            row0 += er * ec;
        }
        auto x = solve(A, b);
        if (!x) return std::nullopt;
        std::vector<Matrix> out;
        out.reserve(blocks.size());
        for (auto& blk : blocks) {
            Matrix X(ring, blk.rows, blk.cols);
            for (int i = 0; i < blk.rows; ++i)
                for (int j = 0; j < blk.cols; ++j) X.at(i, j) = x->at(blk.base + i * blk.cols + j, 0);
            out.push_back(std::move(X));
        }
        return out;
    }
};

}  // namespace dgmod
