#pragma once

#include <algorithm>

#include "dgmod/split_module.hpp"

namespace dgmod {

/**
 * The homology of a DGA as a graded ring presented on the canonical cycle
 * generators: per degree the homology presentation, and the products of
 * generator classes expanded in the target generators.
 */
struct GradedRing {
    AlgebraPtr A;
    std::map<int, HomologyAt> H;
    std::map<std::array<int, 4>, Matrix> mul;  // (i,a,j,b) -> coords in H_{i+j} generators
    int lo = 0, hi = -1;

    RingSpec ring() const { return A->ring(); }
    int gens(int i) const {
        auto it = H.find(i);
        return it == H.end() ? 0 : it->second.pres.generators;
    }
    Matrix rel(int i) const {
        auto it = H.find(i);
        if (it == H.end()) return Matrix(ring(), 0, 0);
        return it->second.pres.relations;
    }
    Matrix product(int i, int a, int j, int b) const {
        auto it = mul.find({i, a, j, b});
        if (it != mul.end()) return it->second;
        return Matrix(ring(), gens(i + j), 1);
    }
    /// presentation of HM in a degree, zero outside the window
    ModulePresentation pres(int i) const {
        auto it = H.find(i);
        return it == H.end() ? ModulePresentation::zero(ring()) : it->second.pres;
    }
};

inline GradedRing homology_ring(const AlgebraPtr& A) {
    GradedRing R;
    R.A = A;
    const FinComplex& C = A->carrier;
    R.lo = C.lo;
    R.hi = C.hi;
    for (int i = C.lo; i <= C.hi; ++i)
        if (C.rank(i) > 0) R.H[i] = homology_at(C, i);
    for (int i = C.lo; i <= C.hi; ++i)
        for (int j = C.lo; j <= C.hi; ++j) {
            if (i + j > C.hi || R.gens(i) == 0 || R.gens(j) == 0 || R.gens(i + j) == 0) continue;
            for (int a = 0; a < R.gens(i); ++a)
                for (int b = 0; b < R.gens(j); ++b) {
                    Matrix prod = A->product(i, R.H[i].cycles.col(a), j, R.H[j].cycles.col(b));
                    auto coords = solve(R.H[i + j].cycles, prod);
                    if (!coords) throw DgmodError("homology_ring: product of cycles not a cycle");
                    if (!coords->is_zero()) R.mul[{i, a, j, b}] = *coords;
                }
        }
    return R;
}

/**
 * Graded module over a graded ring, presented degreewise on canonical
 * generators with the generator-level action of ring generators.
 */
struct GradedModule {
    std::shared_ptr<const GradedRing> R;
    Side side = Side::Left;
    std::map<int, ModulePresentation> comp;
    std::map<int, Matrix> reps;  // cycle representatives of the generators (for provenance)
    std::map<std::array<int, 4>, Matrix> action;  // (i, a, j, m) -> coords in comp[i+j]

    int gens(int j) const {
        auto it = comp.find(j);
        return it == comp.end() ? 0 : it->second.generators;
    }
    Matrix rel(int j) const {
        auto it = comp.find(j);
        if (it == comp.end()) return Matrix(R->ring(), 0, 0);
        return it->second.relations;
    }
    Matrix act(int i, int a, int j, int m) const {
        auto it = action.find({i, a, j, m});
        if (it != action.end()) return it->second;
        return Matrix(R->ring(), gens(i + j), 1);
    }
};

/// HM of a DG A-module as a graded HA-module
inline GradedModule homology_module(const std::shared_ptr<const GradedRing>& R, const DGModule& M) {
    GradedModule out;
    out.R = R;
    out.side = M.side;
    const FinComplex& C = M.carrier;
    std::map<int, HomologyAt> H;
    for (int j = C.lo; j <= C.hi; ++j) {
        if (C.rank(j) == 0) continue;
        H[j] = homology_at(C, j);
        out.comp[j] = H[j].pres;
        out.reps[j] = H[j].cycles;
    }
    for (int i = R->lo; i <= R->hi; ++i) {
        if (R->gens(i) == 0) continue;
        for (int j = C.lo; j <= C.hi; ++j) {
            if (out.gens(j) == 0 || out.gens(i + j) == 0) continue;
            for (int a = 0; a < R->gens(i); ++a) {
                Matrix za = R->H.at(i).cycles.col(a);
                for (int m = 0; m < out.gens(j); ++m) {
                    Matrix img = M.act(i, za, j, H[j].cycles.col(m));
                    auto coords = solve(H[i + j].cycles, img);
                    if (!coords) throw DgmodError("homology_module: action left the cycles");
                    if (!coords->is_zero()) out.action[{i, a, j, m}] = *coords;
                }
            }
        }
    }
    return out;
}

/// the ground ring R as a graded HA-module through the augmentation
inline GradedModule trivial_graded_module(const std::shared_ptr<const GradedRing>& R, Side side) {
    if (!R->A->aug) throw DgmodError("trivial_graded_module needs an augmentation");
    GradedModule out;
    out.R = R;
    out.side = side;
    out.comp[0] = ModulePresentation::free_module(R->ring(), 1);
    out.reps[0] = Matrix::identity(R->ring(), 1);
    // class of a degree-0 homology generator acts by its augmentation value
    if (R->gens(0) > 0) {
        for (int a = 0; a < R->gens(0); ++a) {
            Rat v = R->A->augment(R->H.at(0).cycles.col(a));
            if (v != 0) {
                Matrix c(R->ring(), 1, 1);
                c.at(0, 0) = v;
                out.action[{0, a, 0, 0}] = c;
            }
        }
    }
    return out;
}

/**
 * Free graded module on generators of given internal degrees, its component
 * layout, and maps between free graded modules by ring coefficients.
 */
struct FreeGraded {
    std::shared_ptr<const GradedRing> R;
    std::vector<int> gen_deg;

    struct Item { int k, a; };  // module generator k, ring generator a of HA_{n - deg k}
    std::vector<Item> items(int n) const {
        std::vector<Item> out;
        for (int k = 0; k < (int)gen_deg.size(); ++k)
            for (int a = 0; a < R->gens(n - gen_deg[k]); ++a) out.push_back({k, a});
        return out;
    }
    int dim(int n) const {
        int d = 0;
        for (int k = 0; k < (int)gen_deg.size(); ++k) d += R->gens(n - gen_deg[k]);
        return d;
    }
    int pos(int n, int k, int a) const {
        int off = 0;
        for (int t = 0; t < k; ++t) off += R->gens(n - gen_deg[t]);
        return off + a;
    }
    /// presentation of the degree-n component
    ModulePresentation component(int n) const {
        int g = dim(n);
        std::vector<Matrix> rels;
        int total = 0;
        for (int k = 0; k < (int)gen_deg.size(); ++k) total += R->rel(n - gen_deg[k]).cols;
        Matrix rel(R->ring(), g, total);
        int col = 0;
        for (int k = 0; k < (int)gen_deg.size(); ++k) {
            Matrix rk = R->rel(n - gen_deg[k]);
            for (int j = 0; j < rk.cols; ++j) {
                for (int a = 0; a < rk.rows; ++a) rel.at(pos(n, k, a), col) = rk.at(a, j);
                ++col;
            }
        }
        return ModulePresentation(R->ring(), g, rel);
    }
};

/// map of free graded modules: generator k of F maps to sum of ring-coords on generators of G
struct FreeGradedMap {
    FreeGraded F, G;  // F -> G
    // entries[(k, k')] = column over HA_{deg_k - deg_k'} generators
    std::map<std::pair<int, int>, Matrix> entries;

    /// matrix of the component map at internal degree n
    Matrix component(int n) const {
        Matrix m(F.R->ring(), G.dim(n), F.dim(n));
        const GradedRing& R = *F.R;
        for (int k = 0; k < (int)F.gen_deg.size(); ++k) {
            int dk = F.gen_deg[k];
            for (int kp = 0; kp < (int)G.gen_deg.size(); ++kp) {
                auto it = entries.find({k, kp});
                if (it == entries.end()) continue;
                int gap = dk - G.gen_deg[kp];
                // basis (k, a) with a over HA_{n-dk}: image = (h_a * entry) e_{k'}
                for (int a = 0; a < R.gens(n - dk); ++a) {
                    // multiply h_a by each generator coordinate of the entry
                    for (int b = 0; b < R.gens(gap); ++b) {
                        Rat cb = it->second.at(b, 0);
                        if (cb == 0) continue;
                        Matrix prod = R.product(n - dk, a, gap, b);
                        for (int t = 0; t < prod.rows; ++t)
                            m.at(G.pos(n, kp, t), F.pos(n, k, a)) =
                                F.R->ring().add(m.at(G.pos(n, kp, t), F.pos(n, k, a)),
                                                F.R->ring().mul(cb, prod.at(t, 0)));
                    }
                }
            }
        }
        return m;
    }
};

/**
 * Free graded resolution of a graded module over HA through homological
 * degree pmax, valid for internal degrees up to deg_hi.  Columns are free
 * graded modules; maps are generator-level ring coefficients; the
 * augmentation sends column-0 generators to module generators.
 */
struct GradedResolution {
    std::shared_ptr<const GradedRing> R;
    GradedModule M;
    std::vector<FreeGraded> columns;
    std::vector<FreeGradedMap> maps;  // maps[p]: columns[p] -> columns[p-1], p >= 1
    std::vector<std::pair<int, Matrix>> aug_cols;  // per column-0 generator: (degree, coords in M gens)
    int deg_hi = 0;

    /// component of the augmentation at internal degree n
    Matrix aug_component(int n) const {
        const FreeGraded& C0 = columns[0];
        Matrix m(R->ring(), M.gens(n), C0.dim(n));
        for (int k = 0; k < (int)C0.gen_deg.size(); ++k) {
            int dk = C0.gen_deg[k];
            for (int a = 0; a < R->gens(n - dk); ++a) {
                // image = h_a . (aug of e_k)
                const Matrix& tgt = aug_cols[k].second;  // coords in M.gens(dk)
                for (int m0 = 0; m0 < tgt.rows; ++m0) {
                    Rat c = tgt.at(m0, 0);
                    if (c == 0) continue;
                    Matrix act = M.act(n - dk, a, dk, m0);
                    for (int t = 0; t < act.rows; ++t)
                        m.at(t, C0.pos(n, k, a)) = R->ring().add(m.at(t, C0.pos(n, k, a)),
                                                                 R->ring().mul(c, act.at(t, 0)));
                }
            }
        }
        return m;
    }
};

namespace detail {

// generated-submodule span at degree n: columns (in ambient generator coords)
// of all ring multiples of the chosen generators
struct SubmoduleTracker {
    // chosen generators: (degree, column in ambient coords at that degree)
    std::vector<std::pair<int, Matrix>> gens;
};

}  // namespace detail

/**
 * Free resolution by canonical generator selection: at each degree
 * (ascending) the generators of the target not yet reached by ring multiples
 * of the chosen ones become new free-module generators.
 */
inline GradedResolution graded_free_resolution(const GradedModule& M, int pmax, int deg_lo, int deg_hi) {
    GradedResolution out;
    out.R = M.R;
    out.M = M;
    out.deg_hi = deg_hi;
    const GradedRing& R = *M.R;
    RingSpec ring = R.ring();

    // --- column 0: cover M ---
    FreeGraded C0{M.R, {}};
    for (int n = deg_lo; n <= deg_hi; ++n) {
        if (M.gens(n) == 0) continue;
        for (int g = 0; g < M.gens(n); ++g) {
            // span at degree n of ring multiples of existing generators + relations
            std::vector<Matrix> cols;
            for (int k = 0; k < (int)C0.gen_deg.size(); ++k) {
                int dk = C0.gen_deg[k];
                for (int a = 0; a < R.gens(n - dk); ++a) {
                    // h_a . e_k target coords
                    const Matrix& tgt = out.aug_cols[k].second;
                    Matrix img(ring, M.gens(n), 1);
                    for (int m0 = 0; m0 < tgt.rows; ++m0) {
                        if (tgt.at(m0, 0) == 0) continue;
                        Matrix act = M.act(n - dk, a, dk, m0);
                        for (int t = 0; t < act.rows; ++t)
                            img.at(t, 0) += tgt.at(m0, 0) * act.at(t, 0);
                    }
                    img.canonicalize();
                    cols.push_back(img);
                }
            }
            Matrix span(ring, M.gens(n), (int)cols.size() + M.rel(n).cols);
            for (int j = 0; j < (int)cols.size(); ++j)
                for (int i = 0; i < M.gens(n); ++i) span.at(i, j) = cols[j].at(i, 0);
            Matrix rl = M.rel(n);
            for (int j = 0; j < rl.cols; ++j)
                for (int i = 0; i < M.gens(n); ++i) span.at(i, (int)cols.size() + j) = rl.at(i, j);
            Matrix e(ring, M.gens(n), 1);
            e.at(g, 0) = 1;
            if (!in_column_span(span, e)) {
                C0.gen_deg.push_back(n);
                out.aug_cols.push_back({n, e});
            }
        }
    }
    out.columns.push_back(C0);

    // --- successive kernels ---
    // the kernel of a FreeGraded map into a presented target, per degree, as
    // spanning columns; then cover it by new free generators
    auto cover_kernel = [&](const FreeGraded& C, auto component_of,
                            auto rel_of) -> std::pair<FreeGraded, FreeGradedMap> {
        // kernel spans per degree
        std::map<int, Matrix> ker;
        for (int n = deg_lo; n <= deg_hi; ++n) {
            if (C.dim(n) == 0) continue;
            Matrix cm = component_of(n);
            Matrix rl = rel_of(n);
            Matrix K = kernel(cm.hstack(rl)).rows_slice(0, C.dim(n));
            // include the component relations of C (zero elements)
            ker[n] = column_span_basis(K.hstack(C.component(n).relations));
        }
        FreeGraded Cn{M.R, {}};
        FreeGradedMap d{Cn, C, {}};
        std::vector<std::pair<int, Matrix>> gen_cols;  // images in C coords
        for (int n = deg_lo; n <= deg_hi; ++n) {
            if (!ker.count(n)) continue;
            for (int g = 0; g < ker[n].cols; ++g) {
                Matrix target = ker[n].col(g);
                // span of ring multiples of chosen kernel generators at degree n
                std::vector<Matrix> cols;
                for (int k = 0; k < (int)Cn.gen_deg.size(); ++k) {
                    int dk = Cn.gen_deg[k];
                    for (int a = 0; a < R.gens(n - dk); ++a) {
                        const Matrix& tgt = gen_cols[k].second;  // in C coords at degree dk
                        // h_a . tgt inside the free module C
                        Matrix img(ring, C.dim(n), 1);
                        for (int kp = 0; kp < (int)C.gen_deg.size(); ++kp) {
                            for (int b = 0; b < R.gens(dk - C.gen_deg[kp]); ++b) {
                                Rat cb = tgt.at(C.pos(dk, kp, b), 0);
                                if (cb == 0) continue;
                                Matrix prod = R.product(n - dk, a, dk - C.gen_deg[kp], b);
                                for (int t = 0; t < prod.rows; ++t)
                                    img.at(C.pos(n, kp, t), 0) += cb * prod.at(t, 0);
                            }
                        }
                        img.canonicalize();
                        cols.push_back(img);
                    }
                }
                Matrix crel = C.component(n).relations;
                Matrix span(ring, C.dim(n), (int)cols.size() + crel.cols);
                for (int j = 0; j < (int)cols.size(); ++j)
                    for (int i = 0; i < C.dim(n); ++i) span.at(i, j) = cols[j].at(i, 0);
                for (int j = 0; j < crel.cols; ++j)
                    for (int i = 0; i < C.dim(n); ++i) span.at(i, (int)cols.size() + j) = crel.at(i, j);
                if (!in_column_span(span, target)) {
                    Cn.gen_deg.push_back(n);
                    gen_cols.push_back({n, target});
                }
            }
        }
        d.F = Cn;
        d.G = C;
        // entries: decompose each generator image over the generators of C
        for (int k = 0; k < (int)Cn.gen_deg.size(); ++k) {
            int dk = Cn.gen_deg[k];
            const Matrix& img = gen_cols[k].second;
            for (int kp = 0; kp < (int)C.gen_deg.size(); ++kp) {
                int gap = dk - C.gen_deg[kp];
                if (R.gens(gap) == 0) continue;
                Matrix coords(ring, R.gens(gap), 1);
                bool nz = false;
                for (int b = 0; b < R.gens(gap); ++b) {
                    coords.at(b, 0) = img.at(C.pos(dk, kp, b), 0);
                    if (coords.at(b, 0) != 0) nz = true;
                }
                if (nz) d.entries[{k, kp}] = coords;
            }
        }
        return {Cn, d};
    };

    for (int p = 1; p <= pmax; ++p) {
        const FreeGraded& C = out.columns.back();
        std::pair<FreeGraded, FreeGradedMap> step;
        if (p == 1) {
            step = cover_kernel(
                C, [&](int n) { return out.aug_component(n); }, [&](int n) { return M.rel(n); });
        } else {
            const FreeGradedMap& dprev = out.maps.back();
            const FreeGraded& G = out.columns[out.columns.size() - 2];
            step = cover_kernel(
                C, [&](int n) { return dprev.component(n); },
                [&](int n) { return G.component(n).relations; });
        }
        if (step.first.gen_deg.empty()) break;
        out.columns.push_back(step.first);
        out.maps.push_back(step.second);
    }
    return out;
}

/**
 * Classical bigraded Tor over HA: resolve M freely and tensor with the right
 * module N; Tor_{p,q} is the homology of the induced presented complexes in
 * the p direction at internal degree q.  N (x)_{HA} (free on e_k) is N
 * shifted by the generator degrees.
 */
struct BigradedTable {
    std::map<std::pair<int, int>, ModulePresentation> entries;  // (p, q)

    ModulePresentation at(int p, int q, RingSpec ring) const {
        auto it = entries.find({p, q});
        return it == entries.end() ? ModulePresentation::zero(ring) : it->second;
    }

    /// per total degree: accumulated free rank and sorted torsion multiset
    std::map<int, std::pair<int, std::vector<Int>>> totals() const {
        std::map<int, std::pair<int, std::vector<Int>>> out;
        for (auto& [pq, pres] : entries) {
            auto& slot = out[pq.first + pq.second];
            slot.first += pres.free_rank;
            for (auto& t : pres.torsion) slot.second.push_back(t);
        }
        for (auto& [n, slot] : out) std::sort(slot.second.begin(), slot.second.end());
        return out;
    }
};

inline BigradedTable classical_tor(const GradedModule& N, const GradedResolution& res, int pmax_valid) {
    const GradedRing& R = *res.R;
    RingSpec ring = R.ring();
    // tensor component: N (x) column p at internal degree q:
    //   generators (k, m) with m a generator of N_{q - deg_k}
    auto tdim = [&](const FreeGraded& C, int q) {
        int d = 0;
        for (int k = 0; k < (int)C.gen_deg.size(); ++k) d += N.gens(q - C.gen_deg[k]);
        return d;
    };
    auto tpos = [&](const FreeGraded& C, int q, int k, int m) {
        int off = 0;
        for (int t = 0; t < k; ++t) off += N.gens(q - C.gen_deg[t]);
        return off + m;
    };
    auto trel = [&](const FreeGraded& C, int q) {
        int g = tdim(C, q), total = 0;
        for (int k = 0; k < (int)C.gen_deg.size(); ++k) total += N.rel(q - C.gen_deg[k]).cols;
        Matrix rel(ring, g, total);
        int col = 0;
        for (int k = 0; k < (int)C.gen_deg.size(); ++k) {
            Matrix rk = N.rel(q - C.gen_deg[k]);
            for (int j = 0; j < rk.cols; ++j) {
                for (int a = 0; a < rk.rows; ++a) rel.at(tpos(C, q, k, a), col) = rk.at(a, j);
                ++col;
            }
        }
        return rel;
    };
    // induced map N (x) C_p -> N (x) C_{p-1}: (k, m) -> sum over entries (k,k')
    // of m . h_b with the ring coefficient
    auto tmap = [&](const FreeGradedMap& d, int q) {
        Matrix mtx(ring, tdim(d.G, q), tdim(d.F, q));
        for (int k = 0; k < (int)d.F.gen_deg.size(); ++k) {
            int dk = d.F.gen_deg[k];
            for (int m = 0; m < N.gens(q - dk); ++m)
                for (int kp = 0; kp < (int)d.G.gen_deg.size(); ++kp) {
                    auto it = d.entries.find({k, kp});
                    if (it == d.entries.end()) continue;
                    int gap = dk - d.G.gen_deg[kp];
                    for (int b = 0; b < R.gens(gap); ++b) {
                        Rat cb = it->second.at(b, 0);
                        if (cb == 0) continue;
                        // right action: m . h_b in N_{q - dk + gap}
                        Matrix act = N.act(gap, b, q - dk, m);
                        for (int t = 0; t < act.rows; ++t)
                            mtx.at(tpos(d.G, q, kp, t), tpos(d.F, q, k, m)) =
                                ring.add(mtx.at(tpos(d.G, q, kp, t), tpos(d.F, q, k, m)),
                                         ring.mul(cb, act.at(t, 0)));
                    }
                }
        }
        return mtx;
    };

    BigradedTable out;
    int qlo = 0, qhi = res.deg_hi;
    for (auto& [j, c] : N.comp) qlo = std::min(qlo, j);
    for (int q = qlo; q <= qhi; ++q) {
        // presented complex in the p direction
        PresentedComplex P(ring);
        for (int p = 0; p < (int)res.columns.size(); ++p) {
            int g = tdim(res.columns[p], q);
            if (g == 0) continue;
            P.set_gens(p, g);
            Matrix rl = trel(res.columns[p], q);
            if (rl.cols > 0) P.set_rel(p, rl);
        }
        for (int p = 1; p < (int)res.columns.size(); ++p) {
            if (P.gen_count(p) == 0 || P.gen_count(p - 1) == 0) continue;
            P.set_diff(p, tmap(res.maps[p - 1], q));
        }
        for (int p = 0; p <= std::min(pmax_valid, (int)res.columns.size() - 1); ++p) {
            if (P.gen_count(p) == 0) {
                continue;
            }
            ModulePresentation h = P.homology_at(p).pres;
            if (!h.is_trivial()) out.entries[{p, q}] = h;
        }
    }
    return out;
}

}  // namespace dgmod
