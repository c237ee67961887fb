#pragma once

#include "dgmod/dg_algebra.hpp"
#include "dgmod/homology.hpp"

namespace dgmod {

/**
 * Ordinary triple Massey product <x, y, z> for homology classes with
 * x y = 0 = y z: bounding chains u, v with d u = x y and d v = y z give the
 * representative u z - (-1)^{|x|} x v; the indeterminacy is generated by
 * x . H_{|y|+|z|+1} and H_{|x|+|y|+1} . z.
 */
struct MasseyResult {
    bool defined = false;
    int degree = 0;                   // |x|+|y|+|z|+1
    Matrix representative;            // cycle column in A
    Matrix rep_class;                 // coordinates in the homology generators
    std::vector<Matrix> indeterminacy;  // class columns
    ModulePresentation homology;      // H at the target degree

    /// is the given class column inside the coset's indeterminacy span?
    bool coset_contains(const Matrix& cls) const {
        Matrix diff = rep_class - cls;
        Matrix span(homology.ring, homology.generators,
                    (int)indeterminacy.size() + homology.relations.cols);
        for (int j = 0; j < (int)indeterminacy.size(); ++j)
            for (int i = 0; i < homology.generators; ++i) span.at(i, j) = indeterminacy[j].at(i, 0);
        for (int j = 0; j < homology.relations.cols; ++j)
            for (int i = 0; i < homology.generators; ++i)
                span.at(i, (int)indeterminacy.size() + j) = homology.relations.at(i, j);
        return in_column_span(span, diff);
    }
    bool contains_zero() const {
        return coset_contains(Matrix(homology.ring, homology.generators, 1));
    }
};

inline MasseyResult triple_massey(const AlgebraPtr& A, int dx, const Matrix& x, int dy, const Matrix& y,
                                  int dz, const Matrix& z) {
    RingSpec ring = A->ring();
    const FinComplex& C = A->carrier;
    MasseyResult out;
    out.degree = dx + dy + dz + 1;
    if (!(C.diff(dx) * x).is_zero() || !(C.diff(dy) * y).is_zero() || !(C.diff(dz) * z).is_zero())
        throw PreconditionFailed("triple_massey: inputs must be cycles");

    Matrix xy = A->product(dx, x, dy, y);
    Matrix yz = A->product(dy, y, dz, z);
    auto u = solve(C.diff(dx + dy + 1), xy);
    auto v = solve(C.diff(dy + dz + 1), yz);
    if (!u || !v) return out;  // a product fails to bound: undefined
    out.defined = true;

    // w = u z - (-1)^{|x|} x v
    Matrix uz = A->product(dx + dy + 1, *u, dz, z);
    Matrix xv = A->product(dx, x, dy + dz + 1, *v);
    Matrix w = uz - xv.scaled(Rat(dx % 2 ? -1 : 1));
    w.canonicalize();
    if (!(C.diff(out.degree) * w).is_zero()) throw DgmodError("triple_massey: representative is not a cycle");
    out.representative = w;

    HomologyAt h = homology_at(C, out.degree);
    out.homology = h.pres;
    auto coords = solve(h.cycles, w);
    if (!coords) throw DgmodError("triple_massey: representative class missing");
    out.rep_class = *coords;

    // indeterminacy: x . H_{dy+dz+1} + H_{dx+dy+1} . z
    HomologyAt hr = homology_at(C, dy + dz + 1);
    for (int j = 0; j < hr.cycles.cols; ++j) {
        Matrix cls = A->product(dx, x, dy + dz + 1, hr.cycles.col(j));
        auto cc = solve(h.cycles, cls);
        if (cc && !cc->is_zero()) out.indeterminacy.push_back(*cc);
    }
    HomologyAt hl = homology_at(C, dx + dy + 1);
    for (int j = 0; j < hl.cycles.cols; ++j) {
        Matrix cls = A->product(dx + dy + 1, hl.cycles.col(j), dz, z);
        auto cc = solve(h.cycles, cls);
        if (cc && !cc->is_zero()) out.indeterminacy.push_back(*cc);
    }
    return out;
}

/**
 * Exhaustive stability check of the Massey coset: every choice of bounding
 * chains (the canonical one perturbed by cycles) lands in the same coset.
 * Only usable when the perturbation spaces are small.
 */
inline bool massey_coset_stable(const AlgebraPtr& A, int dx, const Matrix& x, int dy, const Matrix& y,
                                int dz, const Matrix& z, const MasseyResult& base) {
    RingSpec ring = A->ring();
    const FinComplex& C = A->carrier;
    Matrix xy = A->product(dx, x, dy, y);
    Matrix yz = A->product(dy, y, dz, z);
    Matrix u0 = *solve(C.diff(dx + dy + 1), xy);
    Matrix v0 = *solve(C.diff(dy + dz + 1), yz);
    Matrix Ku = kernel(C.diff(dx + dy + 1));
    Matrix Kv = kernel(C.diff(dy + dz + 1));
    if (!ring.is_finite()) return true;  // enumeration only over finite rings
    Int n = ring.modulus;
    std::vector<Int> cu(Ku.cols, 0), cv(Kv.cols, 0);
    auto enumerate = [&](auto&& self, int idx) -> bool {
        if (idx == Ku.cols + Kv.cols) {
            Matrix u = u0;
            for (int j = 0; j < Ku.cols; ++j) u = u + Ku.col(j).scaled(Rat(cu[j]));
            Matrix v = v0;
            for (int j = 0; j < Kv.cols; ++j) v = v + Kv.col(j).scaled(Rat(cv[j]));
            Matrix w = A->product(dx + dy + 1, u, dz, z) -
                       A->product(dx, x, dy + dz + 1, v).scaled(Rat(dx % 2 ? -1 : 1));
            w.canonicalize();
            HomologyAt h = homology_at(C, dx + dy + dz + 1);
            auto cls = solve(h.cycles, w);
            if (!cls) return false;
            return base.coset_contains(*cls);
        }
        Int& slot = idx < Ku.cols ? cu[idx] : cv[idx - Ku.cols];
        for (Int t = 0; t < n; ++t) {
            slot = t;
            if (!self(self, idx + 1)) return false;
        }
        slot = 0;
        return true;
    };
    return enumerate(enumerate, 0);
}

}  // namespace dgmod
