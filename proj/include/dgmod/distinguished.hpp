#pragma once

#include "dgmod/graded_ring.hpp"

namespace dgmod {

/// canonical free HA-resolution of HM, the input data for lifting
inline GradedResolution derive_hares(const std::shared_ptr<const GradedRing>& HA, const DGModule& M,
                                     int pmax, int deg_lo, int deg_hi) {
    GradedModule HM = homology_module(HA, M);
    return graded_free_resolution(HM, pmax, deg_lo, deg_hi);
}

/// d d = 0 and exactness of a graded resolution, through column pmax and the
/// stated internal degrees (used to validate externally supplied data)
inline bool verify_graded_resolution(const GradedResolution& res, int pmax, int deg_lo, int deg_hi) {
    RingSpec ring = res.R->ring();
    for (int q = deg_lo; q <= deg_hi; ++q) {
        PresentedComplex P(ring);
        // degree -1: the module itself
        if (res.M.gens(q) > 0) {
            P.set_gens(-1, res.M.gens(q));
            Matrix rl = res.M.rel(q);
            if (rl.cols > 0) P.set_rel(-1, rl);
        }
        for (int p = 0; p < (int)res.columns.size(); ++p) {
            ModulePresentation c = res.columns[p].component(q);
            if (c.generators == 0) continue;
            P.set_gens(p, c.generators);
            if (c.relations.cols > 0) P.set_rel(p, c.relations);
        }
        if (P.gen_count(0) > 0 && P.gen_count(-1) > 0) P.set_diff(0, res.aug_component(q));
        for (int p = 1; p < (int)res.columns.size(); ++p)
            if (P.gen_count(p) > 0 && P.gen_count(p - 1) > 0)
                P.set_diff(p, res.maps[p - 1].component(q));
        if (!P.valid()) return false;
        for (int p = -1; p <= std::min(pmax, (int)res.columns.size() - 2); ++p)
            if (!P.homology_at(p).pres.is_trivial()) return false;
    }
    return true;
}

/**
 * Lifts a free HA-resolution of HM to a distinguished resolution of M:
 * d^1 realizes the resolution differentials on cycle representatives, the
 * higher d^r and alpha are produced degree by degree by the canonical solver
 * from the identities sum d^i d^j = 0.  Infeasible steps (only possible when
 * the input data is not exact or the window is too small) raise
 * WindowTooSmall.
 */
inline ResolutionMap distinguished_resolution(const DGModule& M, const GradedResolution& hares) {
    const GradedRing& HA = *hares.R;
    AlgebraPtr A = M.algebra;
    RingSpec ring = M.ring();

    ResolutionMap rm;
    rm.M = M;
    SplitModule& X = rm.X;
    X.A = A;
    X.claim = FiltrationClaim::QSplit;

    // generators: column p, generator k of internal degree d_k -> (p, d_k, idx)
    std::vector<std::vector<std::pair<int, int>>> gen_at;  // per column: (q, idx within (p,q))
    for (int p = 0; p < (int)hares.columns.size(); ++p) {
        gen_at.push_back({});
        for (int k = 0; k < (int)hares.columns[p].gen_deg.size(); ++k) {
            int q = hares.columns[p].gen_deg[k];
            int idx = X.bar_rank(p, q);
            X.barx[{p, q}] = idx + 1;
            gen_at[p].push_back({q, idx});
        }
    }

    // d^1 from the resolution maps, on cycle representatives
    for (int p = 1; p < (int)hares.columns.size(); ++p) {
        const FreeGradedMap& dp = hares.maps[p - 1];
        for (int k = 0; k < (int)hares.columns[p].gen_deg.size(); ++k) {
            auto [q, idx] = gen_at[p][k];
            std::vector<SplitModule::Entry> ent;
            for (int kp = 0; kp < (int)hares.columns[p - 1].gen_deg.size(); ++kp) {
                auto it = dp.entries.find({k, kp});
                if (it == dp.entries.end()) continue;
                int gap = q - hares.columns[p - 1].gen_deg[kp];
                auto [q2, idx2] = gen_at[p - 1][kp];
                for (int b = 0; b < HA.gens(gap); ++b) {
                    Rat cb = it->second.at(b, 0);
                    if (cb == 0) continue;
                    Matrix z = HA.H.at(gap).cycles.col(b);
                    for (int t = 0; t < z.rows; ++t)
                        if (z.at(t, 0) != 0) ent.push_back({gap, t, p - 1, q2, idx2, ring.mul(cb, z.at(t, 0))});
                }
            }
            if (!ent.empty()) X.comps[1][{p, q, idx}] = ent;
        }
    }

    // block layout of (A (x) Xbar) at a fixed filtration and total degree
    auto block_items = [&](int p, int total) {
        std::vector<std::array<int, 4>> out;  // (q, x, adeg, aidx)
        for (auto& [pq, cnt] : X.barx) {
            if (pq.first != p) continue;
            int i = total - p - pq.second;
            if (A->carrier.rank(i) == 0) continue;
            for (int x = 0; x < cnt; ++x)
                for (int a = 0; a < A->carrier.rank(i); ++a) out.push_back({pq.second, x, i, a});
        }
        return out;
    };
    auto block_pos = [&](const std::vector<std::array<int, 4>>& items, int q, int x, int adeg, int aidx) {
        for (int t = 0; t < (int)items.size(); ++t)
            if (items[t] == std::array<int, 4>{q, x, adeg, aidx}) return t;
        throw ShapeError("distinguished: block position missing");
    };
    // d^0 on a block (cell-like: only the algebra differential)
    auto block_d0 = [&](int p, int total) {
        auto src = block_items(p, total);
        auto tgt = block_items(p, total - 1);
        Matrix m(ring, (int)tgt.size(), (int)src.size());
        for (int col = 0; col < (int)src.size(); ++col) {
            auto [q, x, i, a] = src[col];
            Matrix dA = A->carrier.diff(i);
            for (int t = 0; t < A->carrier.rank(i - 1); ++t)
                if (dA.at(t, a) != 0) m.at(block_pos(tgt, q, x, i - 1, t), col) = dA.at(t, a);
        }
        return m;
    };
    // evaluate d^r on a sparse element of A (x) Xbar (extension rule)
    auto apply_dr = [&](int r, const detail::SplitElem& e) { return detail::apply_component(X, r, e); };

    int pcols = (int)hares.columns.size();
    // higher components d^r, r = 2..p, by induction on p then r
    for (int p = 2; p < pcols; ++p) {
        for (int r = 2; r <= p; ++r) {
            for (int k = 0; k < (int)hares.columns[p].gen_deg.size(); ++k) {
                auto [q, idx] = gen_at[p][k];
                // rhs = - sum_{i=1}^{r-1} d^i (d^{r-i} x)
                detail::SplitElem gen;
                detail::add_elem(gen, 0, A->unit_index, p, q, idx, Rat(1), ring);
                detail::SplitElem rhs;
                for (int i = 1; i <= r - 1; ++i) {
                    auto dji = apply_dr(i, apply_dr(r - i, gen));
                    for (auto& [kk, c] : dji) detail::add_elem(rhs, kk[0], kk[1], kk[2], kk[3], kk[4], ring.neg(c), ring);
                }
                // solve d^0 u = rhs in the block (p - r, total p + q - 1)
                int total = p + q - 1;
                auto tgt_items = block_items(p - r, total);
                if (tgt_items.empty()) {
                    if (!rhs.empty()) throw WindowTooSmall("distinguished: obstruction block missing");
                    continue;
                }
                Matrix rhsv(ring, (int)block_items(p - r, total - 1).size(), 1);
                auto low = block_items(p - r, total - 1);
                for (auto& [kk, c] : rhs) {
                    auto [adeg, aidx, p2, q2, x2] = kk;
                    if (p2 != p - r) throw DgmodError("distinguished: rhs in the wrong filtration");
                    rhsv.at(block_pos(low, q2, x2, adeg, aidx), 0) = c;
                }
                Matrix D0 = block_d0(p - r, total);
                auto u = solve(D0, rhsv);
                if (!u) throw WindowTooSmall("distinguished: inductive solve infeasible");
                std::vector<SplitModule::Entry> ent;
                for (int t = 0; t < u->rows; ++t) {
                    if (u->at(t, 0) == 0) continue;
                    auto [q2, x2, adeg, aidx] = tgt_items[t];
                    ent.push_back({adeg, aidx, p - r, q2, x2, u->at(t, 0)});
                }
                if (!ent.empty()) X.comps[r][{p, q, idx}] = ent;
            }
        }
    }

    // alpha: column-0 generators get cycle representatives of the augmentation
    // classes; higher columns solve d_M(alpha x) = sum_j (id (x) alpha)(d^j x)
    std::map<std::array<int, 3>, Matrix> alpha_gen;  // (p, q, idx) -> column in M
    for (int k = 0; k < (int)hares.columns[0].gen_deg.size(); ++k) {
        auto [q, idx] = gen_at[0][k];
        auto [deg, coords] = hares.aug_cols[k];
        Matrix rep(ring, M.carrier.rank(deg), 1);
        const Matrix& reps = hares.M.reps.at(deg);
        for (int m0 = 0; m0 < coords.rows; ++m0) {
            if (coords.at(m0, 0) == 0) continue;
            for (int t = 0; t < reps.rows; ++t) rep.at(t, 0) += coords.at(m0, 0) * reps.at(t, m0);
        }
        rep.canonicalize();
        alpha_gen[{0, q, idx}] = rep;
    }
    auto alpha_of_elem = [&](const detail::SplitElem& e, int target_deg) {
        Matrix out(ring, M.carrier.rank(target_deg), 1);
        for (auto& [kk, c] : e) {
            auto [adeg, aidx, p2, q2, x2] = kk;
            auto it = alpha_gen.find({p2, q2, x2});
            if (it == alpha_gen.end()) continue;
            Matrix ea(ring, A->carrier.rank(adeg), 1);
            ea.at(aidx, 0) = 1;
            Matrix img = M.act(adeg, ea, p2 + q2, it->second);
            for (int t = 0; t < img.rows; ++t) out.at(t, 0) += c * img.at(t, 0);
        }
        out.canonicalize();
        return out;
    };
    for (int p = 1; p < pcols; ++p)
        for (int k = 0; k < (int)hares.columns[p].gen_deg.size(); ++k) {
            auto [q, idx] = gen_at[p][k];
            detail::SplitElem gen;
            detail::add_elem(gen, 0, A->unit_index, p, q, idx, Rat(1), ring);
            Matrix rhs(ring, M.carrier.rank(p + q - 1), 1);
            for (int j = 1; j <= p; ++j) {
                detail::SplitElem dj = apply_dr(j, gen);
                Matrix part = alpha_of_elem(dj, p + q - 1);
                rhs = rhs + part;
            }
            auto u = solve(M.carrier.diff(p + q), rhs);
            if (!u) throw WindowTooSmall("distinguished: alpha solve infeasible");
            alpha_gen[{p, q, idx}] = *u;
        }

    // assemble alpha on the carrier (A-linear extension)
    SplitRealization re = realize(X);
    SplitLayout lay{&X};
    ChainMap alpha(re.filtered.total, M.carrier);
    for (int n = re.filtered.total.lo; n <= re.filtered.total.hi; ++n) {
        if (re.filtered.total.rank(n) == 0 || M.carrier.rank(n) == 0) continue;
        Matrix m(ring, M.carrier.rank(n), re.filtered.total.rank(n));
        auto its = lay.items(n);
        for (int col = 0; col < (int)its.size(); ++col) {
            auto [p, q, x, i, a] = its[col];
            auto it = alpha_gen.find({p, q, x});
            if (it == alpha_gen.end()) continue;
            Matrix ea(ring, A->carrier.rank(i), 1);
            ea.at(a, 0) = 1;
            Matrix img = M.act(i, ea, p + q, it->second);
            for (int t = 0; t < img.rows; ++t) m.at(t, col) = img.at(t, 0);
        }
        alpha.set_mat(n, m);
    }
    rm.alpha = alpha;
    return rm;
}

/**
 * Comparison of resolutions (the filtered map (K, k, t)): finds a filtered
 * chain map g : X^alpha -> X'^alpha' restricting to Upsilon k on filtration
 * -1; returns K (filtration-preserving chain map of the X-carriers) and the
 * homotopy t with d t + t d = alpha' K - k alpha, both verified by assembly.
 */
struct ResolutionComparison {
    ChainMap K;   // X carrier -> X' carrier
    Homotopy t;   // X carrier -> M' carrier, degree +1
};

inline ResolutionComparison compare_resolutions(const ResolutionMap& rm, const ResolutionMap& rm2,
                                                const ChainMap& k) {
    FilteredComplex Y = split_extension(rm);
    FilteredComplex Y2 = split_extension(rm2);
    RingSpec ring = rm.M.ring();
    const FinComplex& Mc = rm.M.carrier;
    const FinComplex& M2c = rm2.M.carrier;
    FinComplex UM = up_shift(Mc), UM2 = up_shift(M2c);
    const FinComplex& C = Y.total;
    const FinComplex& C2 = Y2.total;

    LinearSystem sys(ring);
    std::map<int, int> blk;
    for (int n = std::min(C.lo, C2.lo); n <= std::max(C.hi, C2.hi); ++n)
        if (C.rank(n) > 0 && C2.rank(n) > 0) blk[n] = sys.add_block(C2.rank(n), C.rank(n));
    for (int n = std::min(C.lo, C2.lo) - 1; n <= std::max(C.hi, C2.hi) + 1; ++n) {
        // chain condition d' G = G d
        if (C.rank(n) > 0 && C2.rank(n - 1) > 0) {
            auto& eq = sys.new_equation(C2.rank(n - 1), C.rank(n));
            if (blk.count(n)) LinearSystem::add_term(eq, C2.diff(n), blk[n], Matrix());
            if (blk.count(n - 1)) LinearSystem::add_term(eq, Matrix(), blk[n - 1], C.diff(n), Rat(-1));
        }
        if (!blk.count(n)) continue;
        // pinned entries: the Upsilon-M columns carry Upsilon k into the
        // Upsilon-M' rows and 0 into the X' rows; filtration-raising entries
        // vanish; each pin is one scalar equation
        Matrix km = k.mat(n + 1);  // (Upsilon k)_n = k_{n+1}
        for (int j = 0; j < C.rank(n); ++j) {
            int src_level = Y.level(n, j);
            for (int i = 0; i < C2.rank(n); ++i) {
                int tgt_level = Y2.level(n, i);
                bool in_um_col = j < UM.rank(n);
                bool pinned = in_um_col || (tgt_level > src_level);
                if (!pinned) continue;
                auto& e1 = sys.new_equation(1, 1);
                if (in_um_col && i < UM2.rank(n)) e1.rhs.at(0, 0) = km.at(i, j);
                Matrix L(ring, 1, C2.rank(n)), R(ring, C.rank(n), 1);
                L.at(0, i) = 1;
                R.at(j, 0) = 1;
                LinearSystem::add_term(e1, L, blk[n], R);
            }
        }
    }
    auto sol = sys.solve_blocks();
    if (!sol) throw WindowTooSmall("compare_resolutions: no filtered map in the window");
    std::map<int, Matrix> G;
    int t = 0;
    for (auto& [n, b] : blk) G[n] = (*sol)[t++];

    // extract K and the homotopy
    SplitRealization reX = realize(rm.X);
    SplitRealization reX2 = realize(rm2.X);
    ResolutionComparison out{ChainMap(reX.filtered.total, reX2.filtered.total),
                             Homotopy(reX.filtered.total, M2c)};
    for (auto& [n, g] : G) {
        int um = UM.rank(n), um2 = UM2.rank(n);
        if (reX.filtered.total.rank(n) == 0) continue;
        if (reX2.filtered.total.rank(n) > 0) {
            Matrix K(ring, reX2.filtered.total.rank(n), reX.filtered.total.rank(n));
            for (int i = 0; i < K.rows; ++i)
                for (int j = 0; j < K.cols; ++j) K.at(i, j) = g.at(um2 + i, um + j);
            out.K.set_mat(n, K);
        }
        if (um2 > 0) {
            Matrix T(ring, M2c.rank(n + 1), reX.filtered.total.rank(n));
            for (int i = 0; i < T.rows; ++i)
                for (int j = 0; j < T.cols; ++j) T.at(i, j) = g.at(i, um + j);
            out.t.set_mat(n, T);
        }
    }
    return out;
}

/// d t + t d = alpha' K - k alpha, checked exactly
inline bool verify_comparison(const ResolutionMap& rm, const ResolutionMap& rm2, const ChainMap& k,
                              const ResolutionComparison& cmp) {
    if (!cmp.K.commutes()) return false;
    ChainMap lhs = cmp.t.boundary();
    ChainMap rhs = rm2.alpha.compose(cmp.K) - k.compose(rm.alpha);
    return lhs == rhs;
}

}  // namespace dgmod
