#pragma once

#include "dgmod/tensor_hom.hpp"

namespace dgmod {

/// cycles, boundaries, and the canonical presentation of H_n
struct HomologyAt {
    Matrix cycles;      // columns span Z_n = ker d_n
    Matrix boundaries;  // columns span B_n = im d_{n+1}
    ModulePresentation pres;  // generators = columns of `cycles`
};

inline HomologyAt homology_at(const FinComplex& X, int n) {
    Matrix Z = kernel(X.diff(n));
    Matrix B = column_span_basis(X.diff(n + 1));
    return HomologyAt{Z, B, subquotient(Z, B)};
}

/// per-degree canonical presentations of H_*(X)
struct GradedHomology {
    std::map<int, ModulePresentation> by_degree;

    ModulePresentation at(int n, RingSpec ring) const {
        auto it = by_degree.find(n);
        if (it != by_degree.end()) return it->second;
        return ModulePresentation::zero(ring);
    }

    bool all_trivial() const {
        for (auto& [n, p] : by_degree)
            if (!p.is_trivial()) return false;
        return true;
    }

    bool same_iso_class(const GradedHomology& o) const {
        for (auto& [n, p] : by_degree) {
            auto it = o.by_degree.find(n);
            if (it == o.by_degree.end()) { if (!p.is_trivial()) return false; }
            else if (!p.same_iso_class(it->second)) return false;
        }
        for (auto& [n, p] : o.by_degree)
            if (by_degree.find(n) == by_degree.end() && !p.is_trivial()) return false;
        return true;
    }
};

inline GradedHomology homology(const FinComplex& X) {
    GradedHomology H;
    for (int n = X.lo; n <= X.hi; ++n)
        if (X.rank(n) > 0) H.by_degree[n] = homology_at(X, n).pres;
    return H;
}

/**
 * Matrix of H_n(f) with respect to the cycle generators of homology_at on
 * both sides.
 */
inline Matrix induced_on_homology(const ChainMap& f, const HomologyAt& hs, const HomologyAt& ht, int n) {
    Matrix img = f.mat(n) * hs.cycles;
    auto C = solve_matrix(ht.cycles, img);
    if (!C) throw DgmodError("induced_on_homology: image not made of cycles");
    return *C;
}

/**
 * Is the induced map iso?  Surjectivity: coker(C, relations of target)
 * trivial.  Injectivity: preimages of target relations land in source
 * relations.
 */
inline bool induced_map_is_iso(const Matrix& C, const ModulePresentation& src, const ModulePresentation& tgt) {
    Matrix tgt_rel = tgt.relations;
    ModulePresentation coker(C.ring, tgt.generators, C.hstack(tgt_rel));
    if (!coker.is_trivial()) return false;
    Matrix K = kernel(C.hstack(tgt_rel)).rows_slice(0, C.cols);
    for (int j = 0; j < K.cols; ++j)
        if (!in_column_span(src.relations, K.col(j))) return false;
    return true;
}

/// quasi-isomorphism on a degree window only
inline bool is_quasi_iso_window(const ChainMap& f, int wlo, int whi) {
    for (int n = wlo; n <= whi; ++n) {
        HomologyAt hs = homology_at(f.source, n), ht = homology_at(f.target, n);
        if (hs.pres.is_trivial() && ht.pres.is_trivial()) continue;
        if (!hs.pres.same_iso_class(ht.pres)) return false;
        Matrix C = induced_on_homology(f, hs, ht, n);
        if (!induced_map_is_iso(C, hs.pres, ht.pres)) return false;
    }
    return true;
}

/// quasi-isomorphism test: H_n(f) iso in every degree
inline bool is_quasi_iso(const ChainMap& f) {
    int lo = std::min(f.source.lo, f.target.lo), hi = std::max(f.source.hi, f.target.hi);
    for (int n = lo; n <= hi; ++n) {
        HomologyAt hs = homology_at(f.source, n), ht = homology_at(f.target, n);
        if (hs.pres.is_trivial() && ht.pres.is_trivial()) continue;
        if (!hs.pres.same_iso_class(ht.pres)) return false;
        Matrix C = induced_on_homology(f, hs, ht, n);
        if (!induced_map_is_iso(C, hs.pres, ht.pres)) return false;
    }
    return true;
}

}  // namespace dgmod
