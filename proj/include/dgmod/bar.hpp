#pragma once

#include "dgmod/split_module.hpp"

namespace dgmod {

/// the quotient JA = A/R: basis of A with the unit removed
struct JAView {
    const DGAlgebra* A;

    int rank(int i) const { return A->carrier.rank(i) - (i == 0 ? 1 : 0); }
    int to_A(int i, int idx) const {
        if (i != 0) return idx;
        return idx < A->unit_index ? idx : idx + 1;
    }
    int from_A(int i, int idx) const {  // -1 for the unit coordinate
        if (i != 0) return idx;
        if (idx == A->unit_index) return -1;
        return idx < A->unit_index ? idx : idx - 1;
    }
};

/**
 * Normalized two-sided bar construction B(A, A, M) as a split module:
 * Xbar_{p,*} = (JA)^{(x)p} (x) M with the simplicial faces as d^1 and the
 * internal differential as d^0.  Comes with the r-cofibrant approximation
 * witnesses: the chain section iota of eps and the standard contracting
 * homotopy s with d s + s d = id - iota eps.
 */
struct BarResolution {
    ResolutionMap rm;
    ChainMap iota;   // M -> B carrier, chain section of eps (= rm.alpha)
    Homotopy s;      // on the B carrier
    // generator bookkeeping: per (p,q) the list of generators; a generator is
    // p slot pairs (deg, JA index) followed by (deg, M index)
    std::map<std::pair<int, int>, std::vector<std::vector<int>>> gens;
};

namespace detail {

inline std::vector<int> encode_bar_gen(const std::vector<std::pair<int, int>>& slots, std::pair<int, int> m) {
    std::vector<int> v;
    for (auto& [d, i] : slots) {
        v.push_back(d);
        v.push_back(i);
    }
    v.push_back(m.first);
    v.push_back(m.second);
    return v;
}

}  // namespace detail

inline BarResolution bar_resolution(const AlgebraPtr& A, const DGModule& M, int pmax, int qmax) {
    if (M.algebra.get() != A.get()) throw AlgebraMismatch("bar_resolution: module not over A");
    if (M.side != Side::Left) throw AlgebraMismatch("bar_resolution expects a left module");
    RingSpec ring = A->ring();
    JAView JA{A.get()};
    const FinComplex& AC = A->carrier;
    const FinComplex& MC = M.carrier;

    BarResolution out;
    SplitModule& X = out.rm.X;
    X.A = A;
    X.claim = FiltrationClaim::RSplit;

    // enumerate generators per filtration p
    std::map<std::pair<int, int>, std::vector<std::vector<int>>>& gens = out.gens;
    std::map<std::vector<int>, std::pair<std::pair<int, int>, int>> lookup;  // code -> ((p,q), index)
    {
        std::vector<std::vector<std::pair<int, int>>> tuples = {{}};
        for (int p = 0; p <= pmax; ++p) {
            for (auto& slots : tuples) {
                int sdeg = 0;
                for (auto& [d, i] : slots) sdeg += d;
                for (int md = MC.lo; md <= MC.hi; ++md) {
                    if (sdeg + md > qmax) continue;
                    for (int mi = 0; mi < MC.rank(md); ++mi) {
                        auto code = detail::encode_bar_gen(slots, {md, mi});
                        auto key = std::make_pair(p, sdeg + md);
                        lookup[code] = {key, (int)gens[key].size()};
                        gens[key].push_back(code);
                    }
                }
            }
            // extend tuples by one slot, pruning internal degrees beyond qmax
            std::vector<std::vector<std::pair<int, int>>> next;
            for (auto& slots : tuples) {
                int sdeg = 0;
                for (auto& [d, i] : slots) sdeg += d;
                for (int d = AC.lo; d <= AC.hi; ++d) {
                    if (sdeg + d + MC.lo > qmax) continue;
                    for (int i = 0; i < JA.rank(d); ++i) {
                        auto s = slots;
                        s.push_back({d, i});
                        next.push_back(std::move(s));
                    }
                }
            }
            tuples = std::move(next);
        }
    }
    for (auto& [pq, v] : gens)
        if (!v.empty()) X.barx[pq] = (int)v.size();

    auto decode = [&](const std::vector<int>& code, std::vector<std::pair<int, int>>& slots,
                      std::pair<int, int>& m) {
        slots.clear();
        for (size_t k = 0; k + 2 < code.size(); k += 2) slots.push_back({code[k], code[k + 1]});
        m = {code[code.size() - 2], code[code.size() - 1]};
    };

    // differential components on generators
    for (auto& [pq, list] : gens) {
        auto [p, q] = pq;
        for (int gi = 0; gi < (int)list.size(); ++gi) {
            std::vector<std::pair<int, int>> slots;
            std::pair<int, int> m;
            decode(list[gi], slots, m);
            std::vector<SplitModule::Entry> d0, d1;
            // prefix degrees S_k = sum_{j<=k} (deg a_j + 1)
            std::vector<int> S(p + 1, 0);
            for (int k = 1; k <= p; ++k) S[k] = S[k - 1] + slots[k - 1].first + 1;
            auto sgn = [](int e) { return Rat(e % 2 ? -1 : 1); };

            // internal: slot derivatives with sign -(-1)^{S_{i-1}}, then d_M with (-1)^{S_p}
            for (int i = 1; i <= p; ++i) {
                auto [ad, ai] = slots[i - 1];
                Matrix dA = AC.diff(ad);
                int aA = JA.to_A(ad, ai);
                for (int t = 0; t < AC.rank(ad - 1); ++t) {
                    if (dA.at(t, aA) == 0) continue;
                    int tj = JA.from_A(ad - 1, t);
                    if (tj < 0) continue;  // unit coordinate dies in JA
                    auto ns = slots;
                    ns[i - 1] = {ad - 1, tj};
                    auto code = detail::encode_bar_gen(ns, m);
                    auto& [tpq, tidx] = lookup.at(code);
                    d0.push_back({0, A->unit_index, tpq.first, tpq.second, tidx,
                                  ring.mul(ring.neg(sgn(S[i - 1])), dA.at(t, aA))});
                }
            }
            {
                Matrix dM = MC.diff(m.first);
                for (int t = 0; t < MC.rank(m.first - 1); ++t) {
                    if (dM.at(t, m.second) == 0) continue;
                    auto code = detail::encode_bar_gen(slots, {m.first - 1, t});
                    auto& [tpq, tidx] = lookup.at(code);
                    d0.push_back({0, A->unit_index, tpq.first, tpq.second, tidx,
                                  ring.mul(sgn(S[p]), dM.at(t, m.second))});
                }
            }
            if (p >= 1) {
                // face 0: a_1 becomes the algebra coefficient, sign +1
                {
                    auto [ad, ai] = slots[0];
                    std::vector<std::pair<int, int>> rest(slots.begin() + 1, slots.end());
                    auto code = detail::encode_bar_gen(rest, m);
                    auto& [tpq, tidx] = lookup.at(code);
                    d1.push_back({ad, JA.to_A(ad, ai), tpq.first, tpq.second, tidx, Rat(1)});
                }
                // inner faces i = 1..p-1: merge slots i, i+1, sign (-1)^{S_i}
                for (int i = 1; i <= p - 1; ++i) {
                    auto [d1deg, i1] = slots[i - 1];
                    auto [d2deg, i2] = slots[i];
                    Matrix prod = A->basis_product(d1deg, JA.to_A(d1deg, i1), d2deg, JA.to_A(d2deg, i2));
                    for (int t = 0; t < prod.rows; ++t) {
                        if (prod.at(t, 0) == 0) continue;
                        int tj = JA.from_A(d1deg + d2deg, t);
                        if (tj < 0) continue;
                        std::vector<std::pair<int, int>> ns;
                        for (int k = 0; k < i - 1; ++k) ns.push_back(slots[k]);
                        ns.push_back({d1deg + d2deg, tj});
                        for (int k = i + 1; k < p; ++k) ns.push_back(slots[k]);
                        auto code = detail::encode_bar_gen(ns, m);
                        auto& [tpq, tidx] = lookup.at(code);
                        d1.push_back({0, A->unit_index, tpq.first, tpq.second, tidx,
                                      ring.mul(sgn(S[i]), prod.at(t, 0))});
                    }
                }
                // last face: act on m, sign -(-1)^{S_{p-1}}
                {
                    auto [ad, ai] = slots[p - 1];
                    Matrix act = M.basis_action(ad, JA.to_A(ad, ai), m.first, m.second);
                    for (int t = 0; t < act.rows; ++t) {
                        if (act.at(t, 0) == 0) continue;
                        std::vector<std::pair<int, int>> ns(slots.begin(), slots.end() - 1);
                        auto code = detail::encode_bar_gen(ns, {ad + m.first, t});
                        auto& [tpq, tidx] = lookup.at(code);
                        d1.push_back({0, A->unit_index, tpq.first, tpq.second, tidx,
                                      ring.mul(sgn(S[p - 1] + 1), act.at(t, 0))});
                    }
                }
            }
            if (!d0.empty()) X.comps[0][{p, q, gi}] = d0;
            if (!d1.empty()) X.comps[1][{p, q, gi}] = d1;
        }
    }

    // realization, augmentation eps: filtration 0 is A (x) M, eps = action
    SplitRealization re = realize(X);
    out.rm.M = M;
    ChainMap eps(re.filtered.total, MC);
    SplitLayout lay{&X};
    for (int n = re.filtered.total.lo; n <= re.filtered.total.hi; ++n) {
        if (re.filtered.total.rank(n) == 0 || MC.rank(n) == 0) continue;
        Matrix e(ring, MC.rank(n), re.filtered.total.rank(n));
        auto its = lay.items(n);
        for (int col = 0; col < (int)its.size(); ++col) {
            auto [p, q, x, i, a] = its[col];
            if (p != 0) continue;
            auto& code = gens.at({0, q})[x];
            Matrix act = M.basis_action(i, a, code[0], code[1]);
            for (int r = 0; r < act.rows; ++r) e.at(r, col) = act.at(r, 0);
        }
        eps.set_mat(n, e);
    }
    out.rm.alpha = eps;

    // iota: m -> 1 (x) []m
    out.iota = ChainMap(MC, re.filtered.total);
    for (int n = MC.lo; n <= MC.hi; ++n) {
        if (MC.rank(n) == 0 || re.filtered.total.rank(n) == 0) continue;
        Matrix im(ring, re.filtered.total.rank(n), MC.rank(n));
        for (int mi = 0; mi < MC.rank(n); ++mi) {
            auto code = detail::encode_bar_gen({}, {n, mi});
            auto& [tpq, tidx] = lookup.at(code);
            im.at(lay.pos(n, 0, tpq.second, tidx, A->unit_index), mi) = 1;
        }
        out.iota.set_mat(n, im);
    }

    // contracting homotopy s(a[a_1|...|a_p]m) = [abar|a_1|...|a_p]m
    out.s = Homotopy(re.filtered.total, re.filtered.total);
    for (int n = re.filtered.total.lo; n <= re.filtered.total.hi; ++n) {
        if (re.filtered.total.rank(n) == 0 || re.filtered.total.rank(n + 1) == 0) continue;
        Matrix sm(ring, re.filtered.total.rank(n + 1), re.filtered.total.rank(n));
        auto its = lay.items(n);
        for (int col = 0; col < (int)its.size(); ++col) {
            auto [p, q, x, i, a] = its[col];
            if (p + 1 > pmax || q + i > qmax) continue;  // falls off the truncation
            int ja = JA.from_A(i, a);
            if (ja < 0) continue;  // unit slot is normalized away
            auto& code = gens.at({p, q})[x];
            std::vector<std::pair<int, int>> slots;
            std::pair<int, int> m;
            slots.clear();
            for (size_t k = 0; k + 2 < code.size(); k += 2) slots.push_back({code[k], code[k + 1]});
            m = {code[code.size() - 2], code[code.size() - 1]};
            std::vector<std::pair<int, int>> ns;
            ns.push_back({i, ja});
            for (auto& sl : slots) ns.push_back(sl);
            auto ncode = detail::encode_bar_gen(ns, m);
            auto& [tpq, tidx] = lookup.at(ncode);
            sm.at(lay.pos(n + 1, tpq.first, tpq.second, tidx, A->unit_index), col) = 1;
        }
        out.s.set_mat(n, sm);
    }
    return out;
}

/// verifies eps iota = id and d s + s d = id - iota eps (away from the truncation edge)
inline bool verify_bar_witnesses(const BarResolution& B, int safe_hi) {
    const ChainMap& eps = B.rm.alpha;
    if (!(eps.compose(B.iota) == ChainMap::identity(B.rm.M.carrier))) return false;
    ChainMap boundary = B.s.boundary();
    ChainMap expect = ChainMap::identity(eps.source) - B.iota.compose(eps);
    for (int n = eps.source.lo; n <= std::min(eps.source.hi, safe_hi); ++n)
        if (boundary.mat(n) != expect.mat(n)) return false;
    return true;
}

}  // namespace dgmod
