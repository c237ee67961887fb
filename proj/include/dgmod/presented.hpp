#pragma once

#include "dgmod/homology.hpp"

namespace dgmod {

/**
 * Chain complex of finitely presented modules: degree n is
 * R^{gens(n)} / span(rels(n)), with the differential given on generators
 * (well-defined: d rels inside the relation span, d d inside the relation
 * span).  A FinComplex is the special case with no relations.
 */
struct PresentedComplex {
    RingSpec ring;
    int lo = 0, hi = -1;
    std::map<int, int> gens;
    std::map<int, Matrix> rels;
    std::map<int, Matrix> diffs;

    PresentedComplex() = default;
    explicit PresentedComplex(RingSpec r) : ring(r) {}

    int gen_count(int n) const {
        auto it = gens.find(n);
        return it == gens.end() ? 0 : it->second;
    }
    Matrix rel(int n) const {
        auto it = rels.find(n);
        if (it != rels.end()) return it->second;
        return Matrix(ring, gen_count(n), 0);
    }
    Matrix diff(int n) const {
        auto it = diffs.find(n);
        if (it != diffs.end()) return it->second;
        return Matrix(ring, gen_count(n - 1), gen_count(n));
    }

    void set_gens(int n, int g) {
        if (g == 0) { gens.erase(n); return; }
        gens[n] = g;
        if (hi < lo) { lo = hi = n; }
        else { lo = std::min(lo, n); hi = std::max(hi, n); }
    }
    void set_rel(int n, Matrix r) {
        if (r.rows != gen_count(n)) throw ShapeError("presented rel shape");
        if (r.cols == 0) { rels.erase(n); return; }
        r.canonicalize();
        rels[n] = std::move(r);
    }
    void set_diff(int n, Matrix d) {
        if (d.rows != gen_count(n - 1) || d.cols != gen_count(n)) throw ShapeError("presented diff shape");
        if (d.is_zero()) { diffs.erase(n); return; }
        d.canonicalize();
        diffs[n] = std::move(d);
    }

    static PresentedComplex from_fincomplex(const FinComplex& X) {
        PresentedComplex P(X.ring);
        for (auto& [n, r] : X.ranks) P.set_gens(n, r);
        for (auto& [n, d] : X.diffs) P.set_diff(n, d);
        return P;
    }

    /// one cyclic module R/(c) concentrated in one degree
    static PresentedComplex cyclic_at(RingSpec ring, int degree, const Rat& c) {
        PresentedComplex P(ring);
        P.set_gens(degree, 1);
        Matrix r(ring, 1, 1);
        r.set(0, 0, c);
        P.set_rel(degree, r);
        return P;
    }

    bool valid() const {
        for (int n = lo; n <= hi + 1; ++n) {
            // d(rels) inside the relation span
            Matrix dr = diff(n) * rel(n);
            for (int j = 0; j < dr.cols; ++j)
                if (!in_column_span(rel(n - 1), dr.col(j))) return false;
            Matrix dd = diff(n - 1) * diff(n);
            for (int j = 0; j < dd.cols; ++j)
                if (!in_column_span(rel(n - 2), dd.col(j))) return false;
        }
        return true;
    }

    /// presentation of the degree-n module itself
    ModulePresentation module_at(int n) const { return ModulePresentation(ring, gen_count(n), rel(n)); }

    bool relation_free() const { return rels.empty(); }

    /// reinterpret as a free complex; requires no relations
    FinComplex as_fincomplex() const {
        if (!relation_free()) throw DgmodError("as_fincomplex: presented complex has relations");
        FinComplex X(ring);
        for (auto& [n, g] : gens) X.set_rank(n, g);
        for (auto& [n, d] : diffs) X.set_diff(n, d);
        return X;
    }

    /// cycles spanning {x : d x in span rels(n-1)} (includes the relations)
    Matrix cycle_span(int n) const {
        Matrix K = kernel(diff(n).hstack(rel(n - 1)));
        return K.rows_slice(0, gen_count(n));
    }
    /// boundaries plus relations
    Matrix boundary_span(int n) const { return diff(n + 1).hstack(rel(n)); }

    HomologyAt homology_at(int n) const {
        Matrix Z = column_span_basis(cycle_span(n));
        Matrix B = column_span_basis(boundary_span(n));
        return HomologyAt{Z, B, subquotient(Z, B)};
    }

    GradedHomology homology() const {
        GradedHomology H;
        for (int n = lo; n <= hi; ++n)
            if (gen_count(n) > 0) H.by_degree[n] = homology_at(n).pres;
        return H;
    }
};

/// degreewise map of presented complexes, given on generators
struct PresentedChainMap {
    PresentedComplex source, target;
    std::map<int, Matrix> mats;

    Matrix mat(int n) const {
        auto it = mats.find(n);
        if (it != mats.end()) return it->second;
        return Matrix(source.ring, target.gen_count(n), source.gen_count(n));
    }
    void set_mat(int n, Matrix m) {
        if (m.rows != target.gen_count(n) || m.cols != source.gen_count(n))
            throw ShapeError("presented map shape");
        if (m.is_zero()) { mats.erase(n); return; }
        m.canonicalize();
        mats[n] = std::move(m);
    }

    /// well-defined (f rels inside rels) and chain (d f - f d inside rels)
    bool valid() const {
        int a = std::min(source.lo, target.lo), b = std::max(source.hi, target.hi);
        for (int n = a; n <= b; ++n) {
            Matrix fr = mat(n) * source.rel(n);
            for (int j = 0; j < fr.cols; ++j)
                if (!in_column_span(target.rel(n), fr.col(j))) return false;
            Matrix comm = target.diff(n) * mat(n) - mat(n - 1) * source.diff(n);
            for (int j = 0; j < comm.cols; ++j)
                if (!in_column_span(target.rel(n - 1), comm.col(j))) return false;
        }
        return true;
    }
};

/// induced map on homology: coordinates of f(cycles) in the target cycle span
inline Matrix induced_on_homology_presented(const PresentedChainMap& f, const HomologyAt& hs,
                                            const HomologyAt& ht, int n) {
    Matrix img = f.mat(n) * hs.cycles;
    auto C = solve_matrix(ht.cycles, img);
    if (!C) throw DgmodError("presented induced map: image not in cycle span");
    return *C;
}

inline bool is_quasi_iso_presented(const PresentedChainMap& f) {
    int a = std::min(f.source.lo, f.target.lo), b = std::max(f.source.hi, f.target.hi);
    for (int n = a; n <= b; ++n) {
        HomologyAt hs = f.source.homology_at(n), ht = f.target.homology_at(n);
        if (hs.pres.is_trivial() && ht.pres.is_trivial()) continue;
        if (!hs.pres.same_iso_class(ht.pres)) return false;
        Matrix C = induced_on_homology_presented(f, hs, ht, n);
        if (!induced_map_is_iso(C, hs.pres, ht.pres)) return false;
    }
    return true;
}

/**
 * N (x)_R X for a presented complex N and a free complex X, with the
 * standard Koszul-signed differential.  Generators follow the (i, a, b)
 * lexicographic tensor layout; relations are rel(N_i) (x) basis(X_j).
 */
inline PresentedComplex tensor_presented_free(const PresentedComplex& N, const FinComplex& X) {
    if (N.ring != X.ring) throw RingMismatch("tensor_presented_free ring mismatch");
    PresentedComplex T(N.ring);
    int lo = N.lo + X.lo, hi = N.hi + X.hi;
    if (N.hi < N.lo || X.is_zero_complex()) return T;
    auto rank = [&](int n) {
        int r = 0;
        for (int i = N.lo; i <= N.hi; ++i) r += N.gen_count(i) * X.rank(n - i);
        return r;
    };
    auto pos = [&](int n, int i, int a, int b) {
        int off = 0;
        for (int k = N.lo; k < i; ++k) off += N.gen_count(k) * X.rank(n - k);
        return off + a * X.rank(n - i) + b;
    };
    for (int n = lo; n <= hi; ++n) {
        int r = rank(n);
        if (r > 0) T.set_gens(n, r);
    }
    for (int n = lo; n <= hi; ++n) {
        if (T.gen_count(n) == 0) continue;
        // relations
        int nrel = 0;
        for (int i = N.lo; i <= N.hi; ++i) nrel += N.rel(i).cols * X.rank(n - i);
        if (nrel > 0) {
            Matrix R(N.ring, T.gen_count(n), nrel);
            int col = 0;
            for (int i = N.lo; i <= N.hi; ++i) {
                Matrix ri = N.rel(i);
                for (int j = 0; j < ri.cols; ++j)
                    for (int b = 0; b < X.rank(n - i); ++b) {
                        for (int a = 0; a < N.gen_count(i); ++a)
                            if (ri.at(a, j) != 0) R.at(pos(n, i, a, b), col) = ri.at(a, j);
                        ++col;
                    }
            }
            T.set_rel(n, R);
        }
        if (T.gen_count(n - 1) == 0) continue;
        Matrix d(N.ring, T.gen_count(n - 1), T.gen_count(n));
        for (int i = N.lo; i <= N.hi; ++i) {
            Matrix dN = N.diff(i);
            Matrix dX = X.diff(n - i);
            Rat sign(i % 2 == 0 ? 1 : -1);
            for (int a = 0; a < N.gen_count(i); ++a)
                for (int b = 0; b < X.rank(n - i); ++b) {
                    int col = pos(n, i, a, b);
                    for (int c = 0; c < N.gen_count(i - 1); ++c)
                        if (dN.at(c, a) != 0) d.at(pos(n - 1, i - 1, c, b), col) += dN.at(c, a);
                    for (int e = 0; e < X.rank(n - i - 1); ++e)
                        if (dX.at(e, b) != 0) d.at(pos(n - 1, i, a, e), col) += sign * dX.at(e, b);
                }
        }
        d.canonicalize();
        T.set_diff(n, d);
    }
    return T;
}

}  // namespace dgmod
