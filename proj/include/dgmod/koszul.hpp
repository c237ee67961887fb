#pragma once

#include <functional>

#include "dgmod/distinguished.hpp"

namespace dgmod {

/**
 * Koszul resolution K(A) = A (x) E{y_i} of R for a DGA with cup1 and
 * augmentation whose homology is polynomial on the classes of the given
 * cycles.  d(y_S) = sum over partitions S = U + V of sigma(U,V) a_U (x) y_V
 * with a_S = a_i u1 a_T; the l(U) = 1 signs follow the Koszul convention
 * dictated by E^1 K(A) = K(HA) and the remaining signs are solved from
 * dd = 0 (SignDerivationFailed when no assignment works).
 */
struct KoszulResult {
    ResolutionMap rm;
    std::map<std::pair<unsigned, unsigned>, Rat> signs;  // (U, V) -> sigma
    std::map<unsigned, std::pair<int, Matrix>> aU;       // subset -> (degree, cycle column)
};

inline KoszulResult koszul_resolution(const AlgebraPtr& A,
                                      const std::vector<std::pair<int, Matrix>>& cycles, int pmax,
                                      int check_hi) {
    RingSpec ring = A->ring();
    int n = (int)cycles.size();
    if (n > pmax) throw PreconditionFailed("koszul: generator count exceeds pmax");
    if (!A->aug) throw PreconditionFailed("koszul: augmentation required");
    if (!A->cup1) throw NoCup1("koszul: cup1 table required");
    if (!validate_cup1(*A).ok()) throw PreconditionFailed("koszul: cup1 identities fail");
    for (auto& [d, z] : cycles)
        if (!(A->carrier.diff(d) * z).is_zero()) throw PreconditionFailed("koszul: representative is not a cycle");

    // HA polynomial on the classes: bigraded rank comparison through check_hi
    {
        auto HA = homology_ring(A);
        std::vector<int> degs;
        for (auto& [d, z] : cycles) degs.push_back(d);
        std::map<int, int> polyrank;
        // count monomials x_i1...x_ik with i1 <= ... <= ik per degree
        std::function<void(int, int)> rec = [&](int from, int deg) {
            polyrank[deg] += 1;
            for (int j = from; j < n; ++j)
                if (deg + degs[j] <= check_hi) rec(j, deg + degs[j]);
        };
        rec(0, 0);
        for (int d = 0; d <= check_hi; ++d) {
            ModulePresentation h = HA.pres(d);
            int hrank = h.free_rank + (int)h.torsion.size();
            if (ring.is_field() ? (h.free_rank != polyrank[d]) : (hrank != polyrank[d]))
                throw PreconditionFailed("koszul: HA is not polynomial on the given classes through degree " +
                                         std::to_string(check_hi));
        }
    }

    KoszulResult out;
    SplitModule& X = out.rm.X;
    X.A = A;
    X.claim = FiltrationClaim::QSplit;

    auto subset_deg = [&](unsigned S) {
        int d = 0;
        for (int i = 0; i < n; ++i)
            if (S & (1u << i)) d += cycles[i].first;
        return d;
    };
    auto subset_len = [&](unsigned S) {
        int l = 0;
        for (int i = 0; i < n; ++i)
            if (S & (1u << i)) ++l;
        return l;
    };
    // generator indexing: one generator per subset at (l(S), deg S); subsets
    // of equal bidegree ordered by their binary code
    std::map<unsigned, int> gen_idx;
    for (unsigned S = 0; S < (1u << n); ++S) {
        int p = subset_len(S), q = subset_deg(S);
        gen_idx[S] = X.bar_rank(p, q);
        X.barx[{p, q}] = gen_idx[S] + 1;
    }

    // a_U by recursion a_{i,T} = a_i u1 a_T (i minimal)
    auto& aU = out.aU;
    for (int i = 0; i < n; ++i) aU[1u << i] = cycles[i];
    for (int len = 2; len <= n; ++len)
        for (unsigned S = 1; S < (1u << n); ++S) {
            if (subset_len(S) != len) continue;
            int i = 0;
            while (!(S & (1u << i))) ++i;
            unsigned T = S & ~(1u << i);
            auto [dt, zt] = aU.at(T);
            int di = cycles[i].first;
            if (!zt.is_zero() && !A->cup1_in_window(di, dt))
                throw WindowTooSmall("koszul: cup1 product leaves the window");
            Matrix z = A->cup1_product(di, cycles[i].second, dt, zt);
            aU[S] = {di + dt + 1, z};
        }

    // l(U) = 1 signs: sigma({i}, S-i) = (-1)^{(deg y_i) * sum_{j in S, j < i} deg y_j}
    auto one_sign = [&](int i, unsigned S) {
        int yi = cycles[i].first + 1;
        int before = 0;
        for (int j = 0; j < i; ++j)
            if (S & (1u << j)) before += cycles[j].first + 1;
        return Rat((yi * before) % 2 ? -1 : 1);
    };

    // build components in increasing subset length, solving higher signs
    auto set_components = [&](unsigned S, const std::map<unsigned, Rat>& sigma) {
        int p = subset_len(S), q = subset_deg(S);
        std::map<int, std::vector<SplitModule::Entry>> by_r;
        for (unsigned U = 1; U < (1u << n); ++U) {
            if ((U & S) != U || U == 0) continue;
            unsigned V = S & ~U;
            auto it = sigma.find(U);
            if (it == sigma.end() || it->second == 0) continue;
            auto [du, zu] = aU.at(U);
            if (zu.rows == 0 || zu.is_zero()) continue;
            int r = subset_len(U);
            for (int t = 0; t < zu.rows; ++t) {
                if (zu.at(t, 0) == 0) continue;
                by_r[r].push_back({du, t, subset_len(V), subset_deg(V), gen_idx.at(V),
                                   ring.mul(it->second, zu.at(t, 0))});
            }
        }
        for (auto& [r, ent] : by_r) X.comps[r][{p, q, gen_idx.at(S)}] = ent;
    };

    // generator identity check: sum_{i+j=r} d^i d^j (y_S) = 0 for all r
    auto identities_hold = [&](unsigned S) {
        int p = subset_len(S), q = subset_deg(S);
        detail::SplitElem gen;
        detail::add_elem(gen, 0, A->unit_index, p, q, gen_idx.at(S), Rat(1), ring);
        for (int r = 0; r <= 2 * p + 1; ++r) {
            detail::SplitElem acc;
            for (int j = 0; j <= r; ++j) {
                auto dij = detail::apply_component(X, r - j, detail::apply_component(X, j, gen));
                for (auto& [k, c] : dij) detail::add_elem(acc, k[0], k[1], k[2], k[3], k[4], c, ring);
            }
            if (!acc.empty()) return false;
        }
        return true;
    };

    for (int len = 1; len <= n; ++len)
        for (unsigned S = 1; S < (1u << n); ++S) {
            if (subset_len(S) != len) continue;
            std::map<unsigned, Rat> sigma;
            std::vector<unsigned> open;  // subsets whose sign must be solved
            for (unsigned U = 1; U < (1u << n); ++U) {
                if ((U & S) != U) continue;
                if (subset_len(U) == 1) {
                    int i = 0;
                    while (!(U & (1u << i))) ++i;
                    sigma[U] = one_sign(i, S);
                    out.signs[{U, S & ~U}] = sigma[U];
                } else {
                    auto [du, zu] = aU.at(U);
                    if (zu.rows == 0 || zu.is_zero()) {
                        sigma[U] = 1;  // irrelevant
                        out.signs[{U, S & ~U}] = 1;
                    } else {
                        open.push_back(U);
                    }
                }
            }
            bool found = false;
            for (unsigned mask = 0; mask < (1u << open.size()) && !found; ++mask) {
                for (size_t t = 0; t < open.size(); ++t) sigma[open[t]] = (mask & (1u << t)) ? -1 : 1;
                set_components(S, sigma);
                if (identities_hold(S)) {
                    found = true;
                    for (size_t t = 0; t < open.size(); ++t) out.signs[{open[t], S & ~open[t]}] = sigma[open[t]];
                }
            }
            if (!found && !open.empty()) throw SignDerivationFailed("koszul: no sign assignment satisfies dd = 0");
            if (open.empty()) {
                set_components(S, sigma);
                if (!identities_hold(S)) throw SignDerivationFailed("koszul: dd != 0 with forced signs");
            }
        }

    // alpha: y_empty -> 1 in R, everything else to 0
    out.rm.M = trivial_module(A, Side::Left);
    SplitRealization re = realize(X);
    SplitLayout lay{&X};
    ChainMap alpha(re.filtered.total, out.rm.M.carrier);
    for (int nn = re.filtered.total.lo; nn <= re.filtered.total.hi; ++nn) {
        if (re.filtered.total.rank(nn) == 0 || out.rm.M.carrier.rank(nn) == 0) continue;
        Matrix m(ring, out.rm.M.carrier.rank(nn), re.filtered.total.rank(nn));
        auto its = lay.items(nn);
        for (int col = 0; col < (int)its.size(); ++col) {
            auto [p, q, x, i, a] = its[col];
            if (p != 0 || q != 0) continue;
            // a (x) y_empty -> aug(a)
            if (i == 0) {
                Matrix ea(ring, A->carrier.rank(0), 1);
                ea.at(a, 0) = 1;
                m.at(0, col) = A->augment(ea);
            }
        }
        alpha.set_mat(nn, m);
    }
    out.rm.alpha = alpha;
    return out;
}

/**
 * Generator-level check that E^1 K(A) = K(HA): the length-1 component of
 * d(y_S) represents exactly sum_i sigma({i}, S-i) [a_i] y_{S-i} in homology.
 */
inline bool koszul_e1_matches(const KoszulResult& K, const GradedRing& HA,
                              const std::vector<std::pair<int, Matrix>>& cycles) {
    const SplitModule& X = K.rm.X;
    RingSpec ring = X.ring();
    int n = 0;
    while (K.aU.count(1u << n)) ++n;
    auto subset_len = [&](unsigned S) {
        int l = 0;
        for (int i = 0; i < n; ++i)
            if (S & (1u << i)) ++l;
        return l;
    };
    auto subset_deg = [&](unsigned S) {
        int d = 0;
        for (int i = 0; i < n; ++i)
            if (S & (1u << i)) d += cycles[i].first;
        return d;
    };
    for (unsigned S = 1; S < (1u << n); ++S) {
        int p = subset_len(S), q = subset_deg(S);
        // collect the r=1 entries grouped by target generator
        std::map<std::pair<int, unsigned>, Matrix> got;  // (deg, V) -> cycle column
        // reconstruct V code from (p2, q2, idx): invert gen ordering
        std::map<std::array<int, 3>, unsigned> code_of;
        {
            std::map<std::pair<int, int>, int> counter;
            for (unsigned T = 0; T < (1u << n); ++T) {
                int pp = subset_len(T), qq = subset_deg(T);
                code_of[{pp, qq, counter[{pp, qq}]}] = T;
                counter[{pp, qq}] += 1;
            }
        }
        // gen index of S within (p,q)
        int sidx = -1;
        {
            std::map<std::pair<int, int>, int> counter;
            for (unsigned T = 0; T < (1u << n); ++T) {
                int pp = subset_len(T), qq = subset_deg(T);
                if (T == S) sidx = counter[{pp, qq}];
                counter[{pp, qq}] += 1;
            }
        }
        auto comp = X.component(1, p, q, sidx);
        if (comp)
            for (auto& e : *comp) {
                unsigned V = code_of.at({e.p2, e.q2, e.xidx});
                auto& slot = got.try_emplace(std::make_pair(e.adeg, V), Matrix(ring, X.A->carrier.rank(e.adeg), 1))
                                 .first->second;
                slot.at(e.aidx, 0) = ring.add(slot.at(e.aidx, 0), e.coeff);
            }
        // expected: for each i in S, sigma * a_i at V = S - i
        for (int i = 0; i < n; ++i) {
            if (!(S & (1u << i))) continue;
            unsigned V = S & ~(1u << i);
            Rat sg = K.signs.at({1u << i, V});
            Matrix expect = cycles[i].second.scaled(sg);
            auto it = got.find({cycles[i].first, V});
            Matrix actual = (it == got.end()) ? Matrix(ring, expect.rows, 1) : it->second;
            // classes must agree: difference is a boundary
            Matrix diff = actual - expect;
            if (!diff.is_zero()) {
                Matrix B = column_span_basis(X.A->carrier.diff(cycles[i].first + 1));
                if (!in_column_span(B, diff)) return false;
            }
            (void)HA;
        }
    }
    return true;
}

}  // namespace dgmod
