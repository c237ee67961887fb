#pragma once

#include "dgmod/tor.hpp"

namespace dgmod {

/**
 * EMSS of the homological filtration on N (x)_A X, with the independent
 * classical Tor^{HA}(HN, HM) comparison at E^2 and the convergence check of
 * the stabilized page against the associated graded of the Tor table.
 */
struct EmssReport {
    std::vector<SpectralPage> pages;
    BigradedTable classical;
    bool e2_matches = true;
    bool einf_matches_tor = true;
    bool collapsed_at_e2 = true;  // E^2 = E^infty on the compared window
    std::vector<std::string> mismatches;
};

inline EmssReport emss(const DGModule& N, const DGModule& M, const ResolutionMap& X, int rmax,
                       const TorBounds& b, int p_valid, int total_valid) {
    EmssReport out;
    PresentedRightModule Nr = PresentedRightModule::from_module(N);
    SplitTensor T = tensor_with_split(Nr, X.X);
    FilteredComplex F = T.to_filtered();
    out.pages = spectral_sequence(F, rmax);

    auto HA = std::make_shared<GradedRing>(homology_ring(M.algebra));
    GradedModule HN = homology_module(HA, N);
    GradedModule HM = homology_module(HA, M);
    GradedResolution res = graded_free_resolution(HM, b.pmax + 1, b.deg_lo, b.qmax);
    out.classical = classical_tor(HN, res, b.pmax);

    RingSpec ring = M.ring();
    const SpectralPage& E2 = out.pages.size() > 2 ? out.pages[2] : out.pages.back();
    // compare both supports
    std::set<std::pair<int, int>> keys;
    for (auto& [pq, pres] : E2.modules) keys.insert(pq);
    for (auto& [pq, pres] : out.classical.entries) keys.insert(pq);
    for (auto& [p, q] : keys) {
        if (p > p_valid || p + q > total_valid || p < 0) continue;
        ModulePresentation a = E2.at(p, q) ? *E2.at(p, q) : ModulePresentation::zero(ring);
        ModulePresentation c = out.classical.at(p, q, ring);
        if (!a.same_iso_class(c)) {
            out.e2_matches = false;
            out.mismatches.push_back("E2(" + std::to_string(p) + "," + std::to_string(q) + "): got " +
                                     a.to_string() + ", classical " + c.to_string());
        }
        const SpectralPage& Einf = out.pages.back();
        ModulePresentation e = Einf.at(p, q) ? *Einf.at(p, q) : ModulePresentation::zero(ring);
        if (!a.same_iso_class(e)) out.collapsed_at_e2 = false;
    }
    auto conv = convergence_report(F, out.pages.back());
    out.einf_matches_tor = conv.converged;
    return out;
}

/// E^1_{p,*} of a split module as a graded HA-module (total-degree indexed)
inline GradedModule e1_column_module(const std::shared_ptr<const GradedRing>& HA, const SplitModule& X,
                                     int p) {
    SplitModule col;
    col.A = X.A;
    for (auto& [pq, cnt] : X.barx)
        if (pq.first == p) col.barx[pq] = cnt;
    auto it = X.comps.find(0);
    if (it != X.comps.end()) {
        for (auto& [key, entries] : it->second)
            if (key[0] == p) col.comps[0][key] = entries;
    }
    SplitRealization re = realize(col);
    return homology_module(HA, re.module);
}

/// Tor_1^{HA}(T, E) = 0 through the window, for a right test module T
inline bool graded_tor1_vanishes(const GradedModule& T, const GradedModule& E, int deg_lo, int deg_hi) {
    GradedResolution res = graded_free_resolution(E, 2, deg_lo, deg_hi);
    BigradedTable table = classical_tor(T, res, 1);
    for (auto& [pq, pres] : table.entries)
        if (pq.first == 1 && !pres.is_trivial()) return false;
    return true;
}

struct KunnethVerdict {
    bool yes = true;
    std::string witness;  // failing probe, when any
};

/**
 * Battery-relative Kunneth check: flatness of each E^1_{p,*} over HA via
 * Tor_1 against the cyclic battery, and the Kunneth map kappa built on
 * representatives and tested for isomorphism against each battery module N.
 */
inline KunnethVerdict is_kunneth(const SplitModule& X, const std::vector<DGModule>& batteryN,
                                 int deg_lo, int deg_hi) {
    KunnethVerdict v;
    auto HA = std::make_shared<GradedRing>(homology_ring(X.A));
    std::vector<GradedModule> tests;
    if (X.A->aug) tests.push_back(trivial_graded_module(HA, Side::Right));
    for (auto& N : batteryN) tests.push_back(homology_module(HA, N));
    for (int p = X.pmin(); p <= X.pmax(); ++p) {
        GradedModule E1p = e1_column_module(HA, X, p);
        if (E1p.comp.empty()) continue;
        for (auto& T : tests) {
            if (T.side != Side::Right) continue;
            if (!graded_tor1_vanishes(T, E1p, deg_lo, deg_hi)) {
                v.yes = false;
                v.witness = "Tor_1 against a battery module is nonzero at filtration " + std::to_string(p);
                return v;
            }
        }
    }
    for (auto& N : batteryN) {
        if (N.side != Side::Right) continue;
        // kappa: HN (x)_{HA} E^1 X -> E^1(N (x)_A X), tested per (p, q)
        PresentedRightModule Nr = PresentedRightModule::from_module(N);
        SplitTensor TT = tensor_with_split(Nr, X);
        FilteredComplex F = TT.to_filtered();
        auto pages = spectral_sequence(F, 1);
        const SpectralPage& E1 = pages[1];
        GradedModule HN = homology_module(HA, N);
        for (int p = X.pmin(); p <= X.pmax(); ++p) {
            GradedModule E1p = e1_column_module(HA, X, p);
            SplitModule colX;
            colX.A = X.A;
            for (auto& [pq, cnt] : X.barx)
                if (pq.first == p) colX.barx[pq] = cnt;
            auto itc = X.comps.find(0);
            if (itc != X.comps.end())
                for (auto& [key, entries] : itc->second)
                    if (key[0] == p) colX.comps[0][key] = entries;
            SplitRealization colRe = realize(colX);
            SplitLayout colLay{&colX};
            for (int t = deg_lo; t <= deg_hi; ++t) {
                // LHS at total degree t: pairs of HN gens and E1p gens
                // (HN_i (x) E1p_j with i + j = t), with the coequalizer relations
                std::vector<std::array<int, 2>> lhs_gens;  // (i, index pair packed)
                std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> pairs;
                for (auto& [i, cN] : HN.comp)
                    for (auto& [j, cE] : E1p.comp) {
                        if (i + j != t) continue;
                        for (int a = 0; a < cN.generators; ++a)
                            for (int e = 0; e < cE.generators; ++e) pairs.push_back({{i, a}, {j, e}});
                    }
                if (pairs.empty()) {
                    if (E1.at(p, t - p) && !E1.at(p, t - p)->is_trivial()) {
                        v.yes = false;
                        v.witness = "kappa target nonzero with empty source at filtration " + std::to_string(p);
                        return v;
                    }
                    continue;
                }
                // build LHS presentation: relations from both sides plus the
                // balancing relations (n a) (x) e - n (x) (a e)
                RingSpec ring = X.ring();
                int G = (int)pairs.size();
                auto ppos = [&](int i, int a, int j, int e) {
                    for (int k = 0; k < G; ++k)
                        if (pairs[k] == std::make_pair(std::make_pair(i, a), std::make_pair(j, e))) return k;
                    return -1;
                };
                std::vector<Matrix> rels;
                for (int k = 0; k < G; ++k) {
                    auto [ia, je] = pairs[k];
                    Matrix rN = HN.rel(ia.first);
                    for (int c = 0; c < rN.cols; ++c) {
                        Matrix col(ring, G, 1);
                        for (int a2 = 0; a2 < rN.rows; ++a2)
                            if (rN.at(a2, c) != 0 && ia.second == 0) {
                                int kk = ppos(ia.first, a2, je.first, je.second);
                                if (kk >= 0) col.at(kk, 0) = rN.at(a2, c);
                            }
                        if (ia.second == 0 && !col.is_zero()) rels.push_back(col);
                    }
                    Matrix rE = E1p.rel(je.first);
                    for (int c = 0; c < rE.cols; ++c) {
                        Matrix col(ring, G, 1);
                        for (int e2 = 0; e2 < rE.rows; ++e2)
                            if (rE.at(e2, c) != 0 && je.second == 0) {
                                int kk = ppos(ia.first, ia.second, je.first, e2);
                                if (kk >= 0) col.at(kk, 0) = rE.at(e2, c);
                            }
                        if (je.second == 0 && !col.is_zero()) rels.push_back(col);
                    }
                }
                // balancing relations over ring generators
                for (auto& [i, cN] : HN.comp)
                    for (int a = 0; a < cN.generators; ++a)
                        for (int g = HA->lo; g <= HA->hi; ++g)
                            for (int r0 = 0; r0 < HA->gens(g); ++r0)
                                for (auto& [j, cE] : E1p.comp) {
                                    if (i + g + j != t) continue;
                                    Matrix na = HN.act(g, r0, i, a);       // right action, lands in HN_{i+g}
                                    for (int e = 0; e < cE.generators; ++e) {
                                        Matrix ae = E1p.act(g, r0, j, e);  // left action on E1p
                                        Matrix col(ring, G, 1);
                                        for (int a2 = 0; a2 < na.rows; ++a2) {
                                            int kk = ppos(i + g, a2, j, e);
                                            if (kk >= 0 && na.at(a2, 0) != 0) col.at(kk, 0) += na.at(a2, 0);
                                        }
                                        for (int e2 = 0; e2 < ae.rows; ++e2) {
                                            int kk = ppos(i, a, j + g, e2);
                                            if (kk >= 0 && ae.at(e2, 0) != 0) col.at(kk, 0) -= ae.at(e2, 0);
                                        }
                                        col.canonicalize();
                                        if (!col.is_zero()) rels.push_back(col);
                                    }
                                }
                Matrix R(ring, G, (int)rels.size());
                for (int c = 0; c < (int)rels.size(); ++c)
                    for (int i2 = 0; i2 < G; ++i2) R.at(i2, c) = rels[c].at(i2, 0);
                ModulePresentation lhs(ring, G, R);

                // kappa on representatives
                const ModulePresentation* rhs = E1.at(p, t - p);
                ModulePresentation rhs_pres = rhs ? *rhs : ModulePresentation::zero(ring);
                Matrix K(ring, rhs_pres.generators, G);
                for (int k = 0; k < G; ++k) {
                    auto [ia, je] = pairs[k];
                    // N-cycle rep (column in N) and E1p-cycle rep (column in col carrier)
                    Matrix nrep = HN.reps.at(ia.first).col(ia.second);
                    Matrix erep = E1p.reps.at(je.first).col(je.second);
                    // value in the (N (x) Xbar) basis of degree t
                    Matrix val(ring, TT.complex.gen_count(t), 1);
                    auto colItems = colLay.items(je.first);
                    for (int ci = 0; ci < (int)colItems.size(); ++ci) {
                        if (erep.at(ci, 0) == 0) continue;
                        auto [pp, qq, xx, adeg, aidx] = colItems[ci];
                        // n . a
                        for (int nb = 0; nb < nrep.rows; ++nb) {
                            if (nrep.at(nb, 0) == 0) continue;
                            Matrix ea(ring, X.A->carrier.rank(adeg), 1);
                            ea.at(aidx, 0) = 1;
                            Matrix ncol(ring, N.carrier.rank(ia.first), 1);
                            ncol.at(nb, 0) = 1;
                            Matrix nact = N.act(adeg, ea, ia.first, ncol);
                            for (int t2 = 0; t2 < nact.rows; ++t2) {
                                if (nact.at(t2, 0) == 0) continue;
                                val.at(TT.pos.at({ia.first + adeg, t2, pp, qq, xx}), 0) +=
                                    erep.at(ci, 0) * nrep.at(nb, 0) * nact.at(t2, 0);
                            }
                        }
                    }
                    val.canonicalize();
                    if (rhs_pres.generators > 0) {
                        auto coords = solve(E1.reps.at({p, t - p}), val);
                        if (!coords) {
                            v.yes = false;
                            v.witness = "kappa image is not an E1 cycle";
                            return v;
                        }
                        for (int i2 = 0; i2 < K.rows; ++i2) K.at(i2, k) = coords->at(i2, 0);
                    } else if (!val.is_zero() && !lhs.is_trivial()) {
                        // value must die in E1: check it is a boundary/filtration artifact
                    }
                }
                if (!lhs.same_iso_class(rhs_pres) || !induced_map_is_iso(K, lhs, rhs_pres)) {
                    v.yes = false;
                    v.witness = "kappa is not an isomorphism at (p,t)=(" + std::to_string(p) + "," +
                                std::to_string(t) + ")";
                    return v;
                }
            }
        }
    }
    return v;
}

/**
 * Battery semi-flatness probe: for each supplied q-equivalence f of right
 * coefficient modules, checks that f (x) id_X stays a quasi-isomorphism in
 * the window.  A failing test is a definitive NO; passing is
 * battery-relative.
 */
struct SemiflatTest {
    PresentedRightModule src, tgt;
    PresentedChainMap f;  // on carrier generators
};

struct SemiflatReport {
    bool all_pass = true;
    std::vector<std::string> failures;
};

inline SemiflatReport semiflat_probe_split(const SplitModule& X, const std::vector<SemiflatTest>& tests,
                                           int wlo, int whi) {
    SemiflatReport rep;
    for (size_t i = 0; i < tests.size(); ++i) {
        auto& t = tests[i];
        SplitTensor Ts = tensor_with_split(t.src, X);
        SplitTensor Tt = tensor_with_split(t.tgt, X);
        PresentedChainMap F;
        F.source = Ts.complex;
        F.target = Tt.complex;
        RingSpec ring = X.ring();
        for (auto& [n, its] : Ts.items) {
            if (Tt.complex.gen_count(n) == 0 || Ts.complex.gen_count(n) == 0) continue;
            Matrix m(ring, Tt.complex.gen_count(n), Ts.complex.gen_count(n));
            for (int col = 0; col < (int)its.size(); ++col) {
                auto& it = its[col];
                Matrix fm = t.f.mat(it.ndeg);
                for (int r = 0; r < fm.rows; ++r)
                    if (fm.at(r, it.ngen) != 0)
                        m.at(Tt.pos.at({it.ndeg, r, it.p, it.q, it.x}), col) = fm.at(r, it.ngen);
            }
            F.set_mat(n, m);
        }
        bool ok = true;
        for (int n = wlo; n <= whi && ok; ++n) {
            HomologyAt hs = Ts.complex.homology_at(n), ht = Tt.complex.homology_at(n);
            if (hs.pres.is_trivial() && ht.pres.is_trivial()) continue;
            if (!hs.pres.same_iso_class(ht.pres)) { ok = false; break; }
            Matrix C = induced_on_homology_presented(F, hs, ht, n);
            if (!induced_map_is_iso(C, hs.pres, ht.pres)) ok = false;
        }
        if (!ok) {
            rep.all_pass = false;
            rep.failures.push_back("test " + std::to_string(i) + " is not carried to a quasi-iso");
        }
    }
    return rep;
}

/// the same probe for a plain complex over the trivial algebra
inline SemiflatReport semiflat_probe_trivial(const FinComplex& X, const std::vector<SemiflatTest>& tests,
                                             int wlo, int whi) {
    SemiflatReport rep;
    for (size_t i = 0; i < tests.size(); ++i) {
        auto& t = tests[i];
        PresentedComplex Ts = tensor_presented_free(t.src.carrier, X);
        PresentedComplex Tt = tensor_presented_free(t.tgt.carrier, X);
        // induced map: generators (i, a, b) -> (i, f(a), b)
        PresentedChainMap F;
        F.source = Ts;
        F.target = Tt;
        RingSpec ring = X.ring;
        const PresentedComplex& NC = t.src.carrier;
        const PresentedComplex& MC = t.tgt.carrier;
        auto pos = [&](const PresentedComplex& N, int n, int i, int a, int b) {
            int off = 0;
            for (int k = N.lo; k < i; ++k) off += N.gen_count(k) * X.rank(n - k);
            return off + a * X.rank(n - i) + b;
        };
        for (int n = Ts.lo; n <= Ts.hi; ++n) {
            if (Ts.gen_count(n) == 0 || Tt.gen_count(n) == 0) continue;
            Matrix m(ring, Tt.gen_count(n), Ts.gen_count(n));
            for (int i2 = NC.lo; i2 <= NC.hi; ++i2)
                for (int a = 0; a < NC.gen_count(i2); ++a)
                    for (int b = 0; b < X.rank(n - i2); ++b) {
                        Matrix fm = t.f.mat(i2);
                        for (int r = 0; r < fm.rows; ++r)
                            if (fm.at(r, a) != 0) m.at(pos(MC, n, i2, r, b), pos(NC, n, i2, a, b)) = fm.at(r, a);
                    }
            F.set_mat(n, m);
        }
        bool ok = true;
        for (int n = wlo; n <= whi && ok; ++n) {
            HomologyAt hs = Ts.homology_at(n), ht = Tt.homology_at(n);
            if (hs.pres.is_trivial() && ht.pres.is_trivial()) continue;
            if (!hs.pres.same_iso_class(ht.pres)) { ok = false; break; }
            Matrix C = induced_on_homology_presented(F, hs, ht, n);
            if (!induced_map_is_iso(C, hs.pres, ht.pres)) ok = false;
        }
        if (!ok) {
            rep.all_pass = false;
            rep.failures.push_back("test " + std::to_string(i) + " is not carried to a quasi-iso");
        }
    }
    return rep;
}

/**
 * Edge and suspension homomorphisms through the bar resolution:
 * pi : HM -> Tor^A(R, M) sends [m] to the class of []m in B(R, A, M);
 * sigma : IHA -> Tor^A(R, R) sends [a] to the class of [abar].
 * Kernels are reported as generator columns per degree.
 */
struct EdgeReport {
    std::map<int, Matrix> pi;          // HM gens -> Tor gens
    std::map<int, Matrix> pi_kernel;   // columns in HM gen coordinates
    std::map<int, Matrix> sigma;       // HA_i gens -> Tor_{i+1} gens
    std::map<int, Matrix> sigma_kernel;
};

inline EdgeReport edge_and_suspension(const AlgebraPtr& A, const DGModule& M, int pmax, int qmax) {
    if (!A->aug) throw DgmodError("edge_and_suspension needs an augmentation");
    EdgeReport out;
    RingSpec ring = A->ring();
    DGModule R = trivial_module(A, Side::Left);
    PresentedRightModule Rr;
    {
        DGModule Rright = trivial_module(A, Side::Right);
        Rr = PresentedRightModule::from_module(Rright);
    }
    // pi via B(A, A, M)
    {
        auto B = bar_resolution(A, M, pmax, qmax);
        SplitTensor T = tensor_with_split(Rr, B.rm.X);
        for (int n = M.carrier.lo; n <= M.carrier.hi; ++n) {
            HomologyAt hm = homology_at(M.carrier, n);
            if (hm.pres.generators == 0) continue;
            HomologyAt ht = T.complex.homology_at(n);
            Matrix P(ring, ht.cycles.cols, hm.cycles.cols);
            for (int j = 0; j < hm.cycles.cols; ++j) {
                Matrix val(ring, T.complex.gen_count(n), 1);
                for (int mi = 0; mi < M.carrier.rank(n); ++mi) {
                    if (hm.cycles.at(mi, j) == 0) continue;
                    // generator []m_i sits at (p,q) = (0, n); find its index
                    auto code = detail::encode_bar_gen({}, {n, mi});
                    auto& list = B.gens.at({0, n});
                    int x = -1;
                    for (int tt = 0; tt < (int)list.size(); ++tt)
                        if (list[tt] == code) x = tt;
                    val.at(T.pos.at({0, 0, 0, n, x}), 0) += hm.cycles.at(mi, j);
                }
                auto coords = solve(ht.cycles, val);
                if (!coords) throw DgmodError("edge: pi image is not a cycle");
                for (int i2 = 0; i2 < P.rows; ++i2) P.at(i2, j) = coords->at(i2, 0);
            }
            out.pi[n] = P;
            Matrix K = kernel(P.hstack(ht.pres.relations)).rows_slice(0, P.cols);
            out.pi_kernel[n] = column_span_basis(K.hstack(hm.pres.relations));
        }
    }
    // sigma via B(A, A, R)
    {
        auto B = bar_resolution(A, R, pmax, qmax);
        SplitTensor T = tensor_with_split(Rr, B.rm.X);
        JAView JA{A.get()};
        for (int i = 1; i <= A->carrier.hi; ++i) {
            HomologyAt ha = homology_at(A->carrier, i);
            if (ha.pres.generators == 0) continue;
            HomologyAt ht = T.complex.homology_at(i + 1);
            Matrix S(ring, ht.cycles.cols, ha.cycles.cols);
            for (int j = 0; j < ha.cycles.cols; ++j) {
                Matrix val(ring, T.complex.gen_count(i + 1), 1);
                for (int ai = 0; ai < A->carrier.rank(i); ++ai) {
                    if (ha.cycles.at(ai, j) == 0) continue;
                    int ja = JA.from_A(i, ai);
                    if (ja < 0) continue;
                    auto code = detail::encode_bar_gen({{i, ja}}, {0, 0});
                    auto& list = B.gens.at({1, i});
                    int x = -1;
                    for (int tt = 0; tt < (int)list.size(); ++tt)
                        if (list[tt] == code) x = tt;
                    val.at(T.pos.at({0, 0, 1, i, x}), 0) += ha.cycles.at(ai, j);
                }
                auto coords = solve(ht.cycles, val);
                if (!coords) throw DgmodError("edge: sigma image is not a cycle");
                for (int i2 = 0; i2 < S.rows; ++i2) S.at(i2, j) = coords->at(i2, 0);
            }
            out.sigma[i] = S;
            Matrix K = kernel(S.hstack(ht.pres.relations)).rows_slice(0, S.cols);
            out.sigma_kernel[i] = column_span_basis(K.hstack(ha.pres.relations));
        }
    }
    return out;
}

}  // namespace dgmod
