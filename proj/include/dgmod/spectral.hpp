#pragma once

#include "dgmod/presented.hpp"

namespace dgmod {

/**
 * Increasing filtration of a finite complex, recorded as a filtration level
 * per basis element; the differential must not raise the level.
 */
struct FilteredComplex {
    FinComplex total;
    std::map<int, std::vector<int>> filt;  // degree -> level of each basis element
    int fmin = 0, fmax = -1;

    int level(int n, int idx) const { return filt.at(n)[idx]; }

    void set_levels(int n, std::vector<int> lv) {
        if ((int)lv.size() != total.rank(n)) throw ShapeError("filtration level count");
        for (int v : lv) {
            if (fmax < fmin) { fmin = fmax = v; }
            fmin = std::min(fmin, v);
            fmax = std::max(fmax, v);
        }
        filt[n] = std::move(lv);
    }

    /// inclusion matrix of the coordinate subspace F_p at degree n
    Matrix include_upto(int n, int p) const {
        std::vector<int> idx;
        auto it = filt.find(n);
        if (it != filt.end())
            for (int i = 0; i < (int)it->second.size(); ++i)
                if (it->second[i] <= p) idx.push_back(i);
        Matrix inc(total.ring, total.rank(n), (int)idx.size());
        for (int j = 0; j < (int)idx.size(); ++j) inc.at(idx[j], j) = 1;
        return inc;
    }

    /// projection onto the coordinates of level > p at degree n
    Matrix project_above(int n, int p) const {
        std::vector<int> idx;
        auto it = filt.find(n);
        if (it != filt.end())
            for (int i = 0; i < (int)it->second.size(); ++i)
                if (it->second[i] > p) idx.push_back(i);
        Matrix pr(total.ring, (int)idx.size(), total.rank(n));
        for (int j = 0; j < (int)idx.size(); ++j) pr.at(j, idx[j]) = 1;
        return pr;
    }

    bool valid() const {
        if (!total.valid()) return false;
        for (int n = total.lo; n <= total.hi; ++n) {
            if (total.rank(n) == 0) continue;
            if (!filt.count(n)) return false;
            // d(F_p) inside F_p for every p
            Matrix d = total.diff(n);
            for (int j = 0; j < total.rank(n); ++j) {
                int p = level(n, j);
                for (int i = 0; i < total.rank(n - 1); ++i)
                    if (d.at(i, j) != 0 && level(n - 1, i) > p) return false;
            }
        }
        return true;
    }

    /// span (ambient coordinates) of Z^r_{p,q} = {x in F_p : d x in F_{p-r}}
    Matrix zr_span(int r, int p, int q) const {
        int n = p + q;
        Matrix inc = include_upto(n, p);
        if (inc.cols == 0) return Matrix(total.ring, total.rank(n), 0);
        Matrix constraint = project_above(n - 1, p - r) * (total.diff(n) * inc);
        Matrix K = kernel(constraint);
        return column_span_basis(inc * K);
    }
};

struct SpectralPage {
    int r = 0;
    std::map<std::pair<int, int>, ModulePresentation> modules;
    std::map<std::pair<int, int>, Matrix> reps;  // generator representatives, ambient coords
    std::map<std::pair<int, int>, Matrix> dr;    // on generators, E^r_{p,q} -> E^r_{p-r,q+r-1}

    const ModulePresentation* at(int p, int q) const {
        auto it = modules.find({p, q});
        return it == modules.end() ? nullptr : &it->second;
    }
    bool trivial_at(int p, int q) const {
        auto m = at(p, q);
        return !m || m->is_trivial();
    }
};

/**
 * Pages E^0..E^rmax of the spectral sequence of a filtered complex, by the
 * standard span formulas E^r = Z^r / (Z^{r-1}_{p-1,q+1} + d Z^{r-1}_{p+r-1,q-r+2}).
 */
inline std::vector<SpectralPage> spectral_sequence(const FilteredComplex& F, int rmax) {
    std::vector<SpectralPage> pages;
    const FinComplex& C = F.total;
    for (int r = 0; r <= rmax; ++r) {
        SpectralPage page;
        page.r = r;
        for (int p = F.fmin; p <= F.fmax; ++p)
            for (int n = C.lo; n <= C.hi; ++n) {
                int q = n - p;
                if (C.rank(n) == 0) continue;
                Matrix Z = F.zr_span(r, p, q);
                Matrix Zin = (r >= 1) ? F.zr_span(r - 1, p - 1, q + 1) : F.include_upto(n, p - 1);
                Matrix dZ;
                if (r >= 1) {
                    Matrix Zup = F.zr_span(r - 1, p + r - 1, q - r + 2);
                    dZ = C.diff(n + 1) * Zup;
                } else {
                    dZ = Matrix(C.ring, C.rank(n), 0);
                }
                Matrix B = column_span_basis(Zin.hstack(dZ));
                ModulePresentation pres = subquotient(Z, B);
                if (Z.cols == 0) continue;
                page.modules[{p, q}] = pres;
                page.reps[{p, q}] = Z;
            }
        // differentials d^r: induced by d on representatives
        for (auto& [pq, pres] : page.modules) {
            auto [p, q] = pq;
            auto itT = page.modules.find({p - r, q + r - 1});
            const Matrix& Z = page.reps[pq];
            Matrix img = C.diff(p + q) * Z;
            if (itT == page.modules.end()) {
                if (!img.is_zero()) throw DgmodError("spectral: d^r image misses its target block");
                continue;
            }
            auto coords = solve_matrix(page.reps[{p - r, q + r - 1}], img);
            if (!coords) throw DgmodError("spectral: d^r image not in Z^r of the target");
            page.dr[pq] = *coords;
        }
        pages.push_back(std::move(page));
    }
    return pages;
}

/// homology of page r at (p,q) (as a presentation) for the E^{r+1} = H(E^r) check
inline ModulePresentation page_homology_at(const SpectralPage& page, int p, int q, RingSpec ring) {
    // three-term presented complex  E^r_{p+r,q-r+1} -> E^r_{p,q} -> E^r_{p-r,q+r-1}
    const ModulePresentation* mid = page.at(p, q);
    if (!mid) return ModulePresentation::zero(ring);
    PresentedComplex T(mid->ring);
    const ModulePresentation* up = page.at(p + page.r, q - page.r + 1);
    const ModulePresentation* dn = page.at(p - page.r, q + page.r - 1);
    T.set_gens(0, mid->generators);
    T.set_rel(0, mid->relations);
    if (up) {
        T.set_gens(1, up->generators);
        T.set_rel(1, up->relations);
        auto it = page.dr.find({p + page.r, q - page.r + 1});
        if (it != page.dr.end()) T.set_diff(1, it->second);
    }
    if (dn) {
        T.set_gens(-1, dn->generators);
        T.set_rel(-1, dn->relations);
        auto it = page.dr.find({p, q});
        if (it != page.dr.end()) T.set_diff(0, it->second);
    }
    return T.homology_at(0).pres;
}

struct ConvergenceReport {
    bool converged = true;
    std::vector<std::string> mismatches;
};

/**
 * Compares the stabilized page with the associated graded of H(total):
 * gr_p H_n = (Z cap F_p + B) / (Z cap F_{p-1} + B).
 */
inline ConvergenceReport convergence_report(const FilteredComplex& F, const SpectralPage& stable) {
    ConvergenceReport rep;
    const FinComplex& C = F.total;
    for (int n = C.lo; n <= C.hi; ++n) {
        if (C.rank(n) == 0) continue;
        Matrix Zfull = kernel(C.diff(n));
        Matrix Bfull = column_span_basis(C.diff(n + 1));
        for (int p = F.fmin; p <= F.fmax; ++p) {
            // Z cap F_p: kernel of d restricted to F_p
            Matrix incp = F.include_upto(n, p);
            Matrix Zp = incp * kernel(C.diff(n) * incp);
            Matrix incq = F.include_upto(n, p - 1);
            Matrix Zq = incq * kernel(C.diff(n) * incq);
            Matrix num = column_span_basis(Zp.hstack(Bfull));
            Matrix den = column_span_basis(Zq.hstack(Bfull));
            ModulePresentation gr = subquotient(num, den);
            const ModulePresentation* e = stable.at(p, n - p);
            bool match = e ? gr.same_iso_class(*e) : gr.is_trivial();
            if (!match) {
                rep.converged = false;
                rep.mismatches.push_back("gr_" + std::to_string(p) + " H_" + std::to_string(n));
            }
        }
    }
    return rep;
}

}  // namespace dgmod
