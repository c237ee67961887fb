#pragma once

#include "dgmod/chain_map.hpp"

namespace dgmod {

/**
 * Basis bookkeeping for X (x) Y.  Degree-n basis elements are triples
 * (i, a, b): a-th generator of X_i tensor b-th generator of Y_{n-i},
 * ordered lexicographically in (i, a, b).
 */
struct TensorLayout {
    const FinComplex* X;
    const FinComplex* Y;

    TensorLayout(const FinComplex& x, const FinComplex& y) : X(&x), Y(&y) {
        if (x.ring != y.ring) throw RingMismatch("tensor ring mismatch");
    }

    int rank(int n) const {
        int r = 0;
        for (int i = X->lo; i <= X->hi; ++i) r += X->rank(i) * Y->rank(n - i);
        return r;
    }

    int pos(int n, int i, int a, int b) const {
        int off = 0;
        for (int k = X->lo; k < i; ++k) off += X->rank(k) * Y->rank(n - k);
        return off + a * Y->rank(n - i) + b;
    }

    struct Item { int i, a, b; };
    std::vector<Item> items(int n) const {
        std::vector<Item> out;
        for (int i = X->lo; i <= X->hi; ++i)
            for (int a = 0; a < X->rank(i); ++a)
                for (int b = 0; b < Y->rank(n - i); ++b) out.push_back(Item{i, a, b});
        return out;
    }

    /// d(x (x) y) = dx (x) y + (-1)^{deg x} x (x) dy
    FinComplex build() const {
        FinComplex T(X->ring);
        int lo = X->lo + Y->lo, hi = X->hi + Y->hi;
        if (X->is_zero_complex() || Y->is_zero_complex()) return T;
        for (int n = lo; n <= hi; ++n) {
            int r = rank(n);
            if (r > 0) T.set_rank(n, r);
        }
        for (int n = lo; n <= hi; ++n) {
            if (T.rank(n) == 0 || T.rank(n - 1) == 0) continue;
            Matrix d(X->ring, T.rank(n - 1), T.rank(n));
            auto its = items(n);
            for (int col = 0; col < (int)its.size(); ++col) {
                auto [i, a, b] = its[col];
                Matrix dX = X->diff(i);
                for (int c = 0; c < X->rank(i - 1); ++c) {
                    if (dX.at(c, a) == 0) continue;
                    d.at(pos(n - 1, i - 1, c, b), col) += dX.at(c, a);
                }
                Matrix dY = Y->diff(n - i);
                Rat sign((i % 2 == 0) ? 1 : -1);
                for (int c = 0; c < Y->rank(n - i - 1); ++c) {
                    if (dY.at(c, b) == 0) continue;
                    d.at(pos(n - 1, i, a, c), col) += sign * dY.at(c, b);
                }
            }
            T.set_diff(n, d);
        }
        return T;
    }
};

inline FinComplex tensor(const FinComplex& X, const FinComplex& Y) { return TensorLayout(X, Y).build(); }

/// f (x) g on tensor complexes (Koszul sign: (f(x)g)(x(x)y) = (-1)^{|g||x|} f(x)(x)g(y))
inline ChainMap tensor_map(const ChainMap& f, const ChainMap& g) {
    FinComplex S = tensor(f.source, g.source);
    FinComplex T = tensor(f.target, g.target);
    TensorLayout ls(f.source, g.source), lt(f.target, g.target);
    ChainMap h(S, T);
    for (int n = S.lo; n <= S.hi; ++n) {
        if (S.rank(n) == 0 || T.rank(n) == 0) continue;
        Matrix m(S.ring, T.rank(n), S.rank(n));
        auto its = ls.items(n);
        for (int col = 0; col < (int)its.size(); ++col) {
            auto [i, a, b] = its[col];
            Matrix fm = f.mat(i), gm = g.mat(n - i);
            for (int c = 0; c < fm.rows; ++c) {
                if (fm.at(c, a) == 0) continue;
                for (int e = 0; e < gm.rows; ++e) {
                    if (gm.at(e, b) == 0) continue;
                    m.at(lt.pos(n, i, c, e), col) += fm.at(c, a) * gm.at(e, b);
                }
            }
        }
        m.canonicalize();
        h.set_mat(n, m);
    }
    return h;
}

/// n-fold suspension  Sigma^k X = X (x) S^k
inline FinComplex suspension(const FinComplex& X, int k) { return tensor(X, sphere(X.ring, k)); }

/**
 * Basis bookkeeping for Hom(X, Y): degree-n basis elements (i, a, c) stand
 * for the matrix unit X_i -> Y_{i+n}, x_a -> y_c, ordered lexicographically
 * in (i, a, c).  Differential (df)(x) = d(f(x)) - (-1)^n f(d(x)).
 */
struct HomLayout {
    const FinComplex* X;
    const FinComplex* Y;

    HomLayout(const FinComplex& x, const FinComplex& y) : X(&x), Y(&y) {
        if (x.ring != y.ring) throw RingMismatch("hom ring mismatch");
    }

    int lo() const { return Y->lo - X->hi; }
    int hi() const { return Y->hi - X->lo; }

    int rank(int n) const {
        int r = 0;
        for (int i = X->lo; i <= X->hi; ++i) r += X->rank(i) * Y->rank(i + n);
        return r;
    }
    int pos(int n, int i, int a, int c) const {
        int off = 0;
        for (int k = X->lo; k < i; ++k) off += X->rank(k) * Y->rank(k + n);
        return off + a * Y->rank(i + n) + c;
    }
    struct Item { int i, a, c; };
    std::vector<Item> items(int n) const {
        std::vector<Item> out;
        for (int i = X->lo; i <= X->hi; ++i)
            for (int a = 0; a < X->rank(i); ++a)
                for (int c = 0; c < Y->rank(i + n); ++c) out.push_back(Item{i, a, c});
        return out;
    }

    FinComplex build() const {
        FinComplex H(X->ring);
        if (X->is_zero_complex() || Y->is_zero_complex()) return H;
        for (int n = lo(); n <= hi(); ++n) {
            int r = rank(n);
            if (r > 0) H.set_rank(n, r);
        }
        for (int n = lo(); n <= hi() + 1; ++n) {
            if (H.rank(n) == 0 || H.rank(n - 1) == 0) continue;
            Matrix d(X->ring, H.rank(n - 1), H.rank(n));
            auto its = items(n);
            Rat sign((n % 2 == 0) ? -1 : 1);  // -(-1)^n
            for (int col = 0; col < (int)its.size(); ++col) {
                auto [i, a, c] = its[col];
                Matrix dY = Y->diff(i + n);
                for (int e = 0; e < Y->rank(i + n - 1); ++e) {
                    if (dY.at(e, c) == 0) continue;
                    d.at(pos(n - 1, i, a, e), col) += dY.at(e, c);
                }
                Matrix dX = X->diff(i + 1);
                for (int b = 0; b < X->rank(i + 1); ++b) {
                    if (dX.at(a, b) == 0) continue;
                    d.at(pos(n - 1, i + 1, b, c), col) += sign * dX.at(a, b);
                }
            }
            d.canonicalize();
            H.set_diff(n, d);
        }
        return H;
    }
};

inline FinComplex hom_complex(const FinComplex& X, const FinComplex& Y) { return HomLayout(X, Y).build(); }

}  // namespace dgmod
