#pragma once

#include "dgmod/module_ops.hpp"
#include "dgmod/spectral.hpp"

namespace dgmod {

/**
 * Right-half-plane bicomplex: vertical d0 : (p,q) -> (p,q-1), horizontal
 * d1 : (p,q) -> (p-1,q) already carrying the (-1)^q sign, so that
 * d0 d0 = 0, d1 d1 = 0 and d0 d1 + d1 d0 = 0.
 */
struct Bicomplex {
    RingSpec ring;
    int pmax = -1;
    std::map<std::pair<int, int>, int> ranks;
    std::map<std::pair<int, int>, Matrix> vert;   // (p,q) -> (p,q-1)
    std::map<std::pair<int, int>, Matrix> horiz;  // (p,q) -> (p-1,q)

    int rank(int p, int q) const {
        auto it = ranks.find({p, q});
        return it == ranks.end() ? 0 : it->second;
    }
    Matrix d0(int p, int q) const {
        auto it = vert.find({p, q});
        if (it != vert.end()) return it->second;
        return Matrix(ring, rank(p, q - 1), rank(p, q));
    }
    Matrix d1(int p, int q) const {
        auto it = horiz.find({p, q});
        if (it != horiz.end()) return it->second;
        return Matrix(ring, rank(p - 1, q), rank(p, q));
    }

    bool valid() const {
        for (auto& [pq, r] : ranks) {
            auto [p, q] = pq;
            if (!(d0(p, q - 1) * d0(p, q)).is_zero()) return false;
            if (!(d1(p - 1, q) * d1(p, q)).is_zero()) return false;
            Matrix anti = d0(p - 1, q) * d1(p, q) + d1(p, q - 1) * d0(p, q);
            if (!anti.is_zero()) return false;
        }
        return true;
    }
};

/// total complex with the homological filtration by p
inline FilteredComplex total_complex(const Bicomplex& B) {
    FilteredComplex F;
    FinComplex T(B.ring);
    std::map<int, std::vector<std::pair<int, int>>> blocks;  // degree -> list of (p, q)
    for (auto& [pq, r] : B.ranks) {
        if (r > 0) blocks[pq.first + pq.second].push_back(pq);
    }
    for (auto& [n, bl] : blocks) {
        std::sort(bl.begin(), bl.end());
        int total = 0;
        for (auto& pq : bl) total += B.ranks.at(pq);
        T.set_rank(n, total);
    }
    auto offset = [&](int n, int p, int q) {
        int off = 0;
        for (auto& pq : blocks.at(n)) {
            if (pq == std::make_pair(p, q)) return off;
            off += B.ranks.at(pq);
        }
        throw ShapeError("total_complex: block not found");
    };
    for (auto& [n, bl] : blocks) {
        if (T.rank(n - 1) == 0 || T.rank(n) == 0) continue;
        Matrix d(B.ring, T.rank(n - 1), T.rank(n));
        for (auto& [p, q] : bl) {
            Matrix v = B.d0(p, q);
            if (v.rows > 0) {
                int ro = offset(n - 1, p, q - 1), co = offset(n, p, q);
                for (int i = 0; i < v.rows; ++i)
                    for (int j = 0; j < v.cols; ++j) d.at(ro + i, co + j) = v.at(i, j);
            }
            Matrix h = B.d1(p, q);
            if (h.rows > 0) {
                int ro = offset(n - 1, p - 1, q), co = offset(n, p, q);
                for (int i = 0; i < h.rows; ++i)
                    for (int j = 0; j < h.cols; ++j) d.at(ro + i, co + j) = h.at(i, j);
            }
        }
        T.set_diff(n, d);
    }
    F.total = T;
    for (auto& [n, bl] : blocks) {
        std::vector<int> lv;
        for (auto& [p, q] : bl)
            for (int i = 0; i < B.ranks.at({p, q}); ++i) lv.push_back(p);
        F.set_levels(n, lv);
    }
    return F;
}

/**
 * s-projective cover of the subcomplex spanned inside a free ambient
 * complex: Q is s-free (spheres on homology generators plus disks on
 * boundary generators) and values gives the s-epimorphism Q -> sub on the
 * chosen generators, as columns in ambient coordinates.
 */
struct CoverStep {
    FinComplex Q;
    std::map<int, Matrix> values;          // ambient.rank(n) x Q.rank(n)
    std::map<int, std::array<int, 2>> zb;  // per degree: (cycle generators, boundary-lift generators)
};

inline CoverStep s_projective_cover(const FinComplex& ambient, const std::map<int, Matrix>& spans) {
    RingSpec ring = ambient.ring;
    auto span_at = [&](int n) {
        auto it = spans.find(n);
        if (it != spans.end()) return it->second;
        return Matrix(ring, ambient.rank(n), 0);
    };
    CoverStep out;
    out.Q = FinComplex(ring);
    std::map<int, Matrix> bnd_basis;  // canonical basis of B_n(sub)
    std::map<int, Matrix> cyc_basis;  // canonical basis of Z_n(sub)
    for (int n = ambient.lo; n <= ambient.hi + 1; ++n) {
        Matrix S = span_at(n);
        Matrix Zcoords = kernel(ambient.diff(n) * S);
        cyc_basis[n] = column_span_basis(S * Zcoords);
        bnd_basis[n - 1] = column_span_basis(ambient.diff(n) * S);
    }
    // degree-n generators: spheres on B_n(sub) and Z_n(sub) columns, disks
    // whose tops lift the B_{n-1}(sub) columns; the differential is zero on
    // the sphere part and matches disk tops with their boundary generators,
    // so Q is s-free on the nose
    auto bcols = [&](int n) { return bnd_basis.count(n) ? bnd_basis[n].cols : 0; };
    auto zcols = [&](int n) { return cyc_basis.count(n) ? cyc_basis[n].cols : 0; };
    for (int n = ambient.lo; n <= ambient.hi + 1; ++n) {
        int bz = bcols(n) + zcols(n);
        int lift = bcols(n - 1);
        out.zb[n] = {bz, lift};
        if (bz + lift == 0) continue;
        out.Q.set_rank(n, bz + lift);
        Matrix V(ring, ambient.rank(n), bz + lift);
        for (int j = 0; j < bcols(n); ++j)
            for (int i = 0; i < ambient.rank(n); ++i) V.at(i, j) = bnd_basis[n].at(i, j);
        for (int j = 0; j < zcols(n); ++j)
            for (int i = 0; i < ambient.rank(n); ++i) V.at(i, bcols(n) + j) = cyc_basis[n].at(i, j);
        // disk tops: solve d (S u) = b inside the subcomplex
        Matrix S = span_at(n);
        Matrix dS = ambient.diff(n) * S;
        for (int j = 0; j < lift; ++j) {
            auto u = solve(dS, bnd_basis[n - 1].col(j));
            if (!u) throw DgmodError("s_projective_cover: boundary has no preimage in the subcomplex");
            Matrix lcol = S * *u;
            for (int i = 0; i < ambient.rank(n); ++i) V.at(i, bz + j) = ring.canon(lcol.at(i, 0));
        }
        out.values[n] = V;
    }
    for (int n = out.Q.lo; n <= out.Q.hi + 1; ++n) {
        if (out.Q.rank(n) == 0 || out.Q.rank(n - 1) == 0) continue;
        auto [bz, lift] = out.zb[n];
        Matrix d(ring, out.Q.rank(n - 1), out.Q.rank(n));
        for (int j = 0; j < lift; ++j) d.at(j, bz + j) = 1;  // disk top -> B-generator below
        out.Q.set_diff(n, d);
    }
    return out;
}

/**
 * Moore projective resolution of a DG A-module: columns A (x) Q_p with
 * s-projective Q_p, built from canonical covers of the successive kernels.
 * With A = R (the trivial algebra) this is the Cartan-Eilenberg resolution.
 */
struct MooreResolution {
    AlgebraPtr A;
    DGModule M;
    std::vector<FinComplex> Q;                   // generator complexes per column
    std::vector<DGModule> columns;               // free_module(A, Q_p)
    std::vector<std::map<int, Matrix>> eps;      // carrier-level: col_p -> previous carrier (or M)
    int pmax = -1;

    const FinComplex& column_carrier(int p) const { return columns[p].carrier; }
};

inline MooreResolution moore_resolution(const DGModule& M, int pmax) {
    MooreResolution out;
    out.A = M.algebra;
    out.M = M;
    out.pmax = pmax;
    DGModule amb = M;
    std::map<int, Matrix> spans;  // current kernel spans inside amb.carrier
    for (int n = M.carrier.lo; n <= M.carrier.hi; ++n)
        if (M.carrier.rank(n) > 0) spans[n] = Matrix::identity(M.ring(), M.carrier.rank(n));
    for (int p = 0; p <= pmax; ++p) {
        CoverStep cov = s_projective_cover(amb.carrier, spans);
        if (cov.Q.is_zero_complex()) break;
        DGModule col = free_module(out.A, cov.Q);
        // eps: (A (x) Q)_n -> amb_n,  a (x) q -> a . value(q)
        TensorLayout lay(out.A->carrier, cov.Q);
        std::map<int, Matrix> E;
        for (int n = col.carrier.lo; n <= col.carrier.hi; ++n) {
            if (col.carrier.rank(n) == 0) continue;
            Matrix En(M.ring(), amb.carrier.rank(n), col.carrier.rank(n));
            auto items = lay.items(n);
            for (int pos = 0; pos < (int)items.size(); ++pos) {
                auto [i, a, qb] = items[pos];
                int qdeg = n - i;
                Matrix ea(M.ring(), out.A->carrier.rank(i), 1);
                ea.at(a, 0) = 1;
                Matrix val = cov.values.count(qdeg)
                                 ? cov.values[qdeg].col(qb)
                                 : Matrix(M.ring(), amb.carrier.rank(qdeg), 1);
                Matrix img = amb.act(i, ea, qdeg, val);
                for (int r = 0; r < img.rows; ++r) En.at(r, pos) = img.at(r, 0);
            }
            E[n] = En;
        }
        out.Q.push_back(cov.Q);
        out.columns.push_back(col);
        out.eps.push_back(E);
        // next kernel spans
        std::map<int, Matrix> next;
        for (int n = col.carrier.lo; n <= col.carrier.hi; ++n) {
            if (col.carrier.rank(n) == 0) continue;
            Matrix En = E.count(n) ? E[n] : Matrix(M.ring(), amb.carrier.rank(n), col.carrier.rank(n));
            next[n] = kernel(En);
        }
        spans = std::move(next);
        amb = col;
    }
    return out;
}

inline MooreResolution ce_resolution(const FinComplex& M, int pmax) {
    AlgebraPtr R = trivial_algebra(M.ring);
    DGModule Mm;
    Mm.algebra = R;
    Mm.side = Side::Left;
    Mm.carrier = M;
    return moore_resolution(Mm, pmax);
}

/// bicomplex view: d0 = column differentials, d1 = (-1)^q eps
inline Bicomplex to_bicomplex(const MooreResolution& R) {
    Bicomplex B;
    B.ring = R.M.ring();
    B.pmax = (int)R.columns.size() - 1;
    for (int p = 0; p < (int)R.columns.size(); ++p) {
        const FinComplex& C = R.column_carrier(p);
        for (int q = C.lo; q <= C.hi; ++q) {
            if (C.rank(q) == 0) continue;
            B.ranks[{p, q}] = C.rank(q);
            if (C.rank(q - 1) > 0) B.vert[{p, q}] = C.diff(q);
            if (p >= 1 && R.column_carrier(p - 1).rank(q) > 0) {
                Matrix h = R.eps[p].count(q) ? R.eps[p].at(q)
                                             : Matrix(B.ring, R.column_carrier(p - 1).rank(q), C.rank(q));
                B.horiz[{p, q}] = h.scaled(Rat(q % 2 ? -1 : 1));
            }
        }
    }
    return B;
}

/// the augmentation eps_0 as a chain map from the p = 0 column to M
inline ChainMap augmentation_map(const MooreResolution& R) {
    ChainMap f(R.column_carrier(0), R.M.carrier);
    for (auto& [n, m] : R.eps[0]) f.set_mat(n, m);
    f.check_commutes();
    return f;
}

/**
 * s-projective cover of a finitely presented complex (used as the first step
 * when resolving a non-free target, e.g. Z/2 over Z); values are columns of
 * generator coordinates, boundary/cycle data taken modulo the relations.
 */
inline CoverStep s_projective_cover_presented(const PresentedComplex& amb) {
    RingSpec ring = amb.ring;
    CoverStep out;
    out.Q = FinComplex(ring);
    std::map<int, Matrix> bnd_basis, cyc_basis;
    for (int n = amb.lo; n <= amb.hi + 1; ++n) {
        cyc_basis[n] = column_span_basis(amb.cycle_span(n));
        bnd_basis[n - 1] = column_span_basis(amb.diff(n).hstack(amb.rel(n - 1)));
    }
    auto bcols = [&](int n) { return bnd_basis.count(n) ? bnd_basis[n].cols : 0; };
    auto zcols = [&](int n) { return cyc_basis.count(n) ? cyc_basis[n].cols : 0; };
    for (int n = amb.lo; n <= amb.hi + 1; ++n) {
        int bz = bcols(n) + zcols(n);
        int lift = bcols(n - 1);
        out.zb[n] = {bz, lift};
        if (bz + lift == 0) continue;
        out.Q.set_rank(n, bz + lift);
        Matrix V(ring, amb.gen_count(n), bz + lift);
        for (int j = 0; j < bcols(n); ++j)
            for (int i = 0; i < amb.gen_count(n); ++i) V.at(i, j) = bnd_basis[n].at(i, j);
        for (int j = 0; j < zcols(n); ++j)
            for (int i = 0; i < amb.gen_count(n); ++i) V.at(i, bcols(n) + j) = cyc_basis[n].at(i, j);
        Matrix aug = amb.diff(n).hstack(amb.rel(n - 1));
        for (int j = 0; j < lift; ++j) {
            auto u = solve(aug, bnd_basis[n - 1].col(j));
            if (!u) throw DgmodError("presented cover: boundary has no preimage");
            for (int i = 0; i < amb.gen_count(n); ++i) V.at(i, bz + j) = ring.canon(u->at(i, 0));
        }
        out.values[n] = V;
    }
    for (int n = out.Q.lo; n <= out.Q.hi + 1; ++n) {
        if (out.Q.rank(n) == 0 || out.Q.rank(n - 1) == 0) continue;
        auto [bz, lift] = out.zb[n];
        Matrix d(ring, out.Q.rank(n - 1), out.Q.rank(n));
        for (int j = 0; j < lift; ++j) d.at(j, bz + j) = 1;
        out.Q.set_diff(n, d);
    }
    return out;
}

/**
 * Projective resolution of a finitely presented complex over R: the first
 * column covers the presented target, later columns resolve the successive
 * kernels with the free-complex engine.
 */
struct PresentedResolution {
    PresentedComplex M;
    std::vector<FinComplex> columns;
    std::vector<std::map<int, Matrix>> eps;  // eps[0] -> M generators; eps[p] -> column p-1
};

inline PresentedResolution ce_resolution_presented(const PresentedComplex& M, int pmax) {
    PresentedResolution out;
    out.M = M;
    CoverStep cov = s_projective_cover_presented(M);
    if (cov.Q.is_zero_complex()) return out;
    out.columns.push_back(cov.Q);
    out.eps.push_back(cov.values);
    // kernel of eps_0 modulo the relations of M
    std::map<int, Matrix> spans;
    for (int n = cov.Q.lo; n <= cov.Q.hi; ++n) {
        if (cov.Q.rank(n) == 0) continue;
        Matrix V = cov.values.count(n) ? cov.values[n] : Matrix(M.ring, M.gen_count(n), cov.Q.rank(n));
        spans[n] = kernel(V.hstack(M.rel(n))).rows_slice(0, cov.Q.rank(n));
    }
    for (int p = 1; p <= pmax; ++p) {
        const FinComplex& amb = out.columns.back();
        CoverStep c = s_projective_cover(amb, spans);
        if (c.Q.is_zero_complex()) break;
        out.columns.push_back(c.Q);
        out.eps.push_back(c.values);
        std::map<int, Matrix> next;
        for (int n = c.Q.lo; n <= c.Q.hi; ++n) {
            if (c.Q.rank(n) == 0) continue;
            Matrix V = c.values.count(n) ? c.values[n] : Matrix(M.ring, amb.rank(n), c.Q.rank(n));
            next[n] = kernel(V);
        }
        spans = std::move(next);
    }
    return out;
}

/// s-epimorphism check: surjective on elements and on cycles
inline bool is_s_epi(const FinComplex& src, const FinComplex& tgt, const std::map<int, Matrix>& f) {
    for (int n = tgt.lo; n <= tgt.hi; ++n) {
        if (tgt.rank(n) == 0) continue;
        Matrix fn = f.count(n) ? f.at(n) : Matrix(tgt.ring, tgt.rank(n), src.rank(n));
        if (!matrix_is_epi(fn)) return false;
        Matrix Zs = kernel(src.diff(n));
        Matrix Zt = kernel(tgt.diff(n));
        // every target cycle must be hit by a source cycle
        Matrix img = fn * Zs;
        for (int j = 0; j < Zt.cols; ++j)
            if (!in_column_span(img, Zt.col(j))) return false;
    }
    return true;
}

}  // namespace dgmod
