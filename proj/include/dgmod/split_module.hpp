#pragma once

#include "dgmod/bicomplex.hpp"

namespace dgmod {

enum class FiltrationClaim { None, QSplit, RSplit };

/**
 * Split DG A-module: X = sum_p A (x) Xbar_{p,*} with differential
 * d = sum_r d^r, d^r : Xbar_{p,q} -> (A (x) Xbar)_{p-r, q+r-1}, extended by
 * d^0(a x) = da x + (-1)^{|a|} a d^0 x and d^r(a x) = (-1)^{|a|} a d^r x.
 * A generator at bidegree (p, q) lives in total degree p + q.
 */
struct SplitModule {
    AlgebraPtr A;
    std::map<std::pair<int, int>, int> barx;  // (p, q) -> generator count

    struct Entry {
        int adeg, aidx;  // algebra basis element
        int p2, q2, xidx;  // target generator
        Rat coeff;
    };
    // comps[r][(p, q, src)] -> entries in (A (x) Xbar)_{p-r, q+r-1}
    std::map<int, std::map<std::array<int, 3>, std::vector<Entry>>> comps;
    FiltrationClaim claim = FiltrationClaim::None;

    RingSpec ring() const { return A->ring(); }

    int bar_rank(int p, int q) const {
        auto it = barx.find({p, q});
        return it == barx.end() ? 0 : it->second;
    }
    int pmin() const {
        int m = 0;
        for (auto& [pq, r] : barx) m = std::min(m, pq.first);
        return m;
    }
    int pmax() const {
        int m = 0;
        for (auto& [pq, r] : barx) m = std::max(m, pq.first);
        return m;
    }

    const std::vector<Entry>* component(int r, int p, int q, int x) const {
        auto itr = comps.find(r);
        if (itr == comps.end()) return nullptr;
        auto it = itr->second.find({p, q, x});
        return it == itr->second.end() ? nullptr : &it->second;
    }
};

/**
 * Carrier basis bookkeeping for a split module: at total degree n the basis
 * elements are (p, q, x, i, a) with i + p + q = n, ordered lexicographically.
 */
struct SplitLayout {
    const SplitModule* X;

    struct Item { int p, q, x, adeg, aidx; };

    std::vector<Item> items(int n) const {
        std::vector<Item> out;
        const FinComplex& AC = X->A->carrier;
        for (auto& [pq, cnt] : X->barx) {
            auto [p, q] = pq;
            int i = n - p - q;
            if (AC.rank(i) == 0) continue;
            for (int x = 0; x < cnt; ++x)
                for (int a = 0; a < AC.rank(i); ++a) out.push_back(Item{p, q, x, i, a});
        }
        return out;
    }
    int rank(int n) const {
        int r = 0;
        const FinComplex& AC = X->A->carrier;
        for (auto& [pq, cnt] : X->barx) r += cnt * AC.rank(n - pq.first - pq.second);
        return r;
    }
    int pos(int n, int p, int q, int x, int aidx) const {
        const FinComplex& AC = X->A->carrier;
        int off = 0;
        for (auto& [pq, cnt] : X->barx) {
            int i = n - pq.first - pq.second;
            if (AC.rank(i) == 0) continue;
            if (pq == std::make_pair(p, q)) return off + x * AC.rank(i) + aidx;
            off += cnt * AC.rank(i);
        }
        throw ShapeError("SplitLayout: bidegree not present");
    }
};

/**
 * Realize the split module as a filtered complex (levels = p) together with
 * its left A-module structure.
 */
struct SplitRealization {
    FilteredComplex filtered;
    DGModule module;
    SplitLayout layout;
};

inline SplitRealization realize(const SplitModule& X) {
    SplitRealization out;
    out.layout.X = &X;
    const DGAlgebra& A = *X.A;
    const FinComplex& AC = A.carrier;
    RingSpec ring = X.ring();
    FinComplex C(ring);
    int tlo = 0, thi = 0;
    {
        bool first = true;
        for (auto& [pq, cnt] : X.barx) {
            int lo = pq.first + pq.second + AC.lo, hi = pq.first + pq.second + AC.hi;
            if (first) { tlo = lo; thi = hi; first = false; }
            tlo = std::min(tlo, lo);
            thi = std::max(thi, hi);
        }
        if (first) { out.filtered.total = C; out.module.algebra = X.A; out.module.carrier = C; return out; }
    }
    for (int n = tlo; n <= thi; ++n) {
        int r = out.layout.rank(n);
        if (r > 0) C.set_rank(n, r);
    }
    // differential
    for (int n = tlo; n <= thi; ++n) {
        if (C.rank(n) == 0 || C.rank(n - 1) == 0) continue;
        Matrix d(ring, C.rank(n - 1), C.rank(n));
        auto its = out.layout.items(n);
        for (int col = 0; col < (int)its.size(); ++col) {
            auto [p, q, x, i, a] = its[col];
            // dA(a) (x) x
            Matrix dA = AC.diff(i);
            for (int c = 0; c < AC.rank(i - 1); ++c)
                if (dA.at(c, a) != 0) d.at(out.layout.pos(n - 1, p, q, x, c), col) += dA.at(c, a);
            // (-1)^{deg a} a . d^r(x)
            Rat sgn(i % 2 == 0 ? 1 : -1);
            for (auto& [r, table] : X.comps) {
                auto it = table.find({p, q, x});
                if (it == table.end()) continue;
                for (auto& e : it->second) {
                    Matrix prod = A.basis_product(i, a, e.adeg, e.aidx);
                    for (int t = 0; t < prod.rows; ++t) {
                        if (prod.at(t, 0) == 0) continue;
                        d.at(out.layout.pos(n - 1, e.p2, e.q2, e.xidx, t), col) +=
                            sgn * e.coeff * prod.at(t, 0);
                    }
                }
            }
        }
        d.canonicalize();
        C.set_diff(n, d);
    }
    out.filtered.total = C;
    for (int n = C.lo; n <= C.hi; ++n) {
        if (C.rank(n) == 0) continue;
        std::vector<int> lv;
        for (auto& it : out.layout.items(n)) lv.push_back(it.p);
        out.filtered.set_levels(n, lv);
    }
    // module structure: b . (a (x) x) = (b a) (x) x
    out.module.algebra = X.A;
    out.module.side = Side::Left;
    out.module.carrier = C;
    for (int bi = AC.lo; bi <= AC.hi; ++bi)
        for (int b = 0; b < AC.rank(bi); ++b) {
            if (A.is_unit(bi, b)) continue;
            for (int n = C.lo; n <= C.hi; ++n) {
                if (C.rank(bi + n) == 0) continue;
                auto its = out.layout.items(n);
                for (int pos = 0; pos < (int)its.size(); ++pos) {
                    auto [p, q, x, i, a] = its[pos];
                    Matrix prod = A.basis_product(bi, b, i, a);
                    Combo outc;
                    for (int t = 0; t < prod.rows; ++t)
                        if (prod.at(t, 0) != 0)
                            outc.push_back({out.layout.pos(bi + n, p, q, x, t), prod.at(t, 0)});
                    if (!outc.empty()) out.module.action[{bi, b, n, pos}] = outc;
                }
            }
        }
    return out;
}

struct SplitValidation {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

// element of A (x) Xbar as sparse (adeg, aidx, p, q, xidx) -> coeff
using SplitElem = std::map<std::array<int, 5>, Rat>;

inline void add_elem(SplitElem& e, int adeg, int aidx, int p, int q, int x, const Rat& c, RingSpec ring) {
    auto key = std::array<int, 5>{adeg, aidx, p, q, x};
    auto it = e.find(key);
    Rat v = ring.canon((it == e.end() ? Rat(0) : it->second) + c);
    if (v == 0) {
        if (it != e.end()) e.erase(it);
    } else {
        e[key] = v;
    }
}

// apply d^r to a sparse element, using the (diff2) extension rules
inline SplitElem apply_component(const SplitModule& X, int r, const SplitElem& e) {
    SplitElem out;
    const DGAlgebra& A = *X.A;
    RingSpec ring = X.ring();
    for (auto& [key, c] : e) {
        auto [adeg, aidx, p, q, x] = key;
        if (r == 0) {
            // d(a) (x) x part
            Matrix dA = A.carrier.diff(adeg);
            for (int t = 0; t < A.carrier.rank(adeg - 1); ++t)
                if (dA.at(t, aidx) != 0) add_elem(out, adeg - 1, t, p, q, x, c * dA.at(t, aidx), ring);
        }
        auto comp = X.component(r, p, q, x);
        if (!comp) continue;
        Rat sgn(adeg % 2 == 0 ? 1 : -1);
        for (auto& en : *comp) {
            Matrix prod = A.basis_product(adeg, aidx, en.adeg, en.aidx);
            for (int t = 0; t < prod.rows; ++t)
                if (prod.at(t, 0) != 0)
                    add_elem(out, adeg + en.adeg, t, en.p2, en.q2, en.xidx, c * sgn * en.coeff * prod.at(t, 0),
                             ring);
        }
    }
    return out;
}

}  // namespace detail

/// multicomplex identities sum_{i+j=r} d^i d^j = 0 on every generator
inline SplitValidation validate_split(const SplitModule& X) {
    SplitValidation rep;
    int rmaxc = 0;
    for (auto& [r, t] : X.comps) rmaxc = std::max(rmaxc, r);
    for (auto& [pq, cnt] : X.barx) {
        auto [p, q] = pq;
        for (int x = 0; x < cnt; ++x) {
            detail::SplitElem gen;
            detail::add_elem(gen, 0, X.A->unit_index, p, q, x, Rat(1), X.ring());
            for (int r = 0; r <= 2 * rmaxc + 1; ++r) {
                detail::SplitElem acc;
                for (int j = 0; j <= r; ++j) {
                    detail::SplitElem dj = detail::apply_component(X, j, gen);
                    detail::SplitElem dij = detail::apply_component(X, r - j, dj);
                    for (auto& [k, c] : dij) detail::add_elem(acc, k[0], k[1], k[2], k[3], k[4], c, X.ring());
                }
                if (!acc.empty())
                    rep.violations.push_back("sum d^i d^j != 0 at r=" + std::to_string(r) + ", (p,q)=(" +
                                             std::to_string(p) + "," + std::to_string(q) + "), gen " +
                                             std::to_string(x));
            }
        }
    }
    return rep;
}

enum class SplitClass { General, CellLike, Distinguished };

/// cell-like iff d^0 vanishes on generators; distinguished iff additionally
/// the generators are R-free (always true in this encoding)
inline SplitClass classify(const SplitModule& X) {
    auto it = X.comps.find(0);
    bool cell = true;
    if (it != X.comps.end())
        for (auto& [k, entries] : it->second)
            for (auto& e : entries)
                if (e.coeff != 0) cell = false;
    if (!cell) return SplitClass::General;
    return SplitClass::Distinguished;
}

struct FiltrationReport {
    bool r_split = false;
    bool q_split = false;
    bool cellular = false;
    std::string classification = "neither";
};

/**
 * Verifies the claimed splitting witnesses of the canonical filtration:
 * the filtration quotients are A (x) Xbar_p by construction, so r-split
 * holds once the multicomplex identities do; q-split additionally needs the
 * d^0 component to stay on the generators (unit coefficients), making each
 * Xbar_p an honest DG R-complex.
 */
inline FiltrationReport check_filtration(const SplitModule& X) {
    FiltrationReport rep;
    if (!validate_split(X).ok()) return rep;
    rep.r_split = true;
    bool q = true, cell = true;
    auto it = X.comps.find(0);
    if (it != X.comps.end())
        for (auto& [k, entries] : it->second)
            for (auto& e : entries) {
                if (e.coeff == 0) continue;
                cell = false;
                if (!(e.adeg == 0 && e.aidx == X.A->unit_index)) q = false;
            }
    rep.q_split = q;
    rep.cellular = cell;
    switch (X.claim) {
        case FiltrationClaim::QSplit:
            rep.classification = rep.q_split ? "q-split" : "neither";
            break;
        case FiltrationClaim::RSplit:
            rep.classification = rep.r_split ? "r-split" : "neither";
            break;
        case FiltrationClaim::None:
            rep.classification = rep.q_split ? "q-split" : (rep.r_split ? "r-split" : "neither");
            break;
    }
    return rep;
}

/**
 * Resolution data: a split module X with a map alpha : X -> M of DG
 * A-modules, realized on carriers.
 */
struct ResolutionMap {
    SplitModule X;
    DGModule M;
    ChainMap alpha;  // realize(X).carrier -> M.carrier
};

/**
 * The split extension X^alpha: carrier (Upsilon M) + X with
 * d(w, x) = (dw + beta(x), dx), beta = shift of alpha; filtration -1 on the
 * Upsilon M part and p on the X part.
 */
inline FilteredComplex split_extension(const ResolutionMap& rm) {
    const FinComplex& Mc = rm.M.carrier;
    FinComplex UM = up_shift(Mc);
    SplitRealization re = realize(rm.X);
    const FinComplex& Xc = re.filtered.total;
    RingSpec ring = Mc.ring;
    FinComplex Y(ring);
    int lo = std::min(UM.lo, Xc.lo), hi = std::max(UM.hi, Xc.hi);
    for (int n = lo; n <= hi; ++n) {
        int r = UM.rank(n) + Xc.rank(n);
        if (r > 0) Y.set_rank(n, r);
    }
    for (int n = lo; n <= hi; ++n) {
        if (Y.rank(n) == 0 || Y.rank(n - 1) == 0) continue;
        Matrix d(ring, Y.rank(n - 1), Y.rank(n));
        Matrix dU = UM.diff(n);
        for (int i = 0; i < dU.rows; ++i)
            for (int j = 0; j < dU.cols; ++j) d.at(i, j) = dU.at(i, j);
        // beta: X_n -> (Upsilon M)_{n-1} = M_n is alpha at degree n
        Matrix beta = rm.alpha.mat(n);
        for (int i = 0; i < beta.rows; ++i)
            for (int j = 0; j < beta.cols; ++j) d.at(i, UM.rank(n) + j) = beta.at(i, j);
        Matrix dX = Xc.diff(n);
        for (int i = 0; i < dX.rows; ++i)
            for (int j = 0; j < dX.cols; ++j) d.at(UM.rank(n - 1) + i, UM.rank(n) + j) = dX.at(i, j);
        Y.set_diff(n, d);
    }
    FilteredComplex F;
    F.total = Y;
    for (int n = Y.lo; n <= Y.hi; ++n) {
        if (Y.rank(n) == 0) continue;
        std::vector<int> lv(UM.rank(n), -1);
        if (Xc.rank(n) > 0)
            for (int v : re.filtered.filt.at(n)) lv.push_back(v);
        F.set_levels(n, lv);
    }
    return F;
}

/**
 * alpha is a resolution iff the E^1 sequence of X^alpha is exact, i.e. the
 * E^2 page vanishes; checked through filtration pmax_valid (truncation-safe
 * columns) on all internal degrees present.
 */
inline bool is_resolution(const ResolutionMap& rm, int pmax_valid, int total_deg_valid = 1 << 28) {
    FilteredComplex F = split_extension(rm);
    if (!F.valid()) return false;
    auto pages = spectral_sequence(F, 2);
    const SpectralPage& E2 = pages[2];
    for (auto& [pq, pres] : E2.modules) {
        auto [p, q] = pq;
        if (p > pmax_valid || p + q > total_deg_valid) continue;
        if (!pres.is_trivial()) return false;
    }
    return true;
}

/// split module of a Moore resolution: d^0 from the Q differentials, d^1 the
/// signed augmentations
inline SplitModule to_split_module(const MooreResolution& R) {
    SplitModule X;
    X.A = R.A;
    X.claim = FiltrationClaim::QSplit;
    for (int p = 0; p < (int)R.Q.size(); ++p) {
        const FinComplex& Q = R.Q[p];
        for (int j = Q.lo; j <= Q.hi; ++j)
            if (Q.rank(j) > 0) X.barx[{p, j}] = Q.rank(j);
        TensorLayout lay(R.A->carrier, Q);
        for (int j = Q.lo; j <= Q.hi; ++j) {
            if (Q.rank(j) == 0) continue;
            Matrix dQ = Q.diff(j);
            std::vector<TensorLayout::Item> items;
            if (p >= 1) items = TensorLayout(R.A->carrier, R.Q[p - 1]).items(j);
            for (int x = 0; x < Q.rank(j); ++x) {
                std::vector<SplitModule::Entry> d0;
                for (int t = 0; t < Q.rank(j - 1); ++t)
                    if (dQ.at(t, x) != 0)
                        d0.push_back({0, R.A->unit_index, p, j - 1, t, dQ.at(t, x)});
                if (!d0.empty()) X.comps[0][{p, j, x}] = d0;
                if (p >= 1 && R.eps[p].count(j)) {
                    // eps_p(1 (x) x) in (A (x) Q_{p-1})_j, sign (-1)^j
                    int gpos = lay.pos(j, 0, R.A->unit_index, x);
                    const Matrix& E = R.eps[p].at(j);
                    Rat sgn(j % 2 == 0 ? 1 : -1);
                    std::vector<SplitModule::Entry> d1;
                    for (int row = 0; row < E.rows; ++row) {
                        if (E.at(row, gpos) == 0) continue;
                        auto [i2, a2, x2] = items[row];
                        d1.push_back({i2, a2, p - 1, j - i2, x2, sgn * E.at(row, gpos)});
                    }
                    if (!d1.empty()) X.comps[1][{p, j, x}] = d1;
                }
            }
        }
    }
    return X;
}

/// resolution map of a Moore resolution: total complex with the augmentation
inline ResolutionMap moore_resolution_map(const MooreResolution& R) {
    ResolutionMap rm;
    rm.X = to_split_module(R);
    rm.M = R.M;
    SplitRealization re = realize(rm.X);
    ChainMap alpha(re.filtered.total, R.M.carrier);
    // the augmentation kills filtration >= 1 and applies eps_0 on filtration 0
    SplitLayout lay{&rm.X};
    TensorLayout tlay(R.A->carrier, R.Q[0]);
    for (int n = re.filtered.total.lo; n <= re.filtered.total.hi; ++n) {
        if (re.filtered.total.rank(n) == 0 || R.M.carrier.rank(n) == 0) continue;
        Matrix m(rm.X.ring(), R.M.carrier.rank(n), re.filtered.total.rank(n));
        auto its = lay.items(n);
        const Matrix* E0 = R.eps[0].count(n) ? &R.eps[0].at(n) : nullptr;
        for (int col = 0; col < (int)its.size(); ++col) {
            auto [p, q, x, i, a] = its[col];
            if (p != 0 || !E0) continue;
            int src = tlay.pos(n, i, a, x);
            for (int r = 0; r < m.rows; ++r) m.at(r, col) = E0->at(r, src);
        }
        alpha.set_mat(n, m);
    }
    rm.alpha = alpha;
    return rm;
}

}  // namespace dgmod
