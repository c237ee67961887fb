#pragma once

// corpus DG algebras used across the test suites: exterior and truncated
// polynomial algebras, acyclic disk factors, the two hand-built F2 algebras
// (a nonzero triple product and a noncommutative cup1 carrier), and the
// rank-2 integral DGA with nonzero differential.

#include <algorithm>
#include <numeric>
#include <set>

#include "dgmod/module_ops.hpp"

namespace corpus {

using namespace dgmod;

/// exterior algebra on generators of the given degrees (squares vanish,
/// Koszul-sign commutation); basis indexed by subsets in binary order
inline AlgebraPtr exterior_algebra(RingSpec ring, const std::vector<int>& degs) {
    int n = (int)degs.size();
    auto A = std::make_shared<DGAlgebra>();
    std::map<int, std::vector<unsigned>> by_deg;  // degree -> subsets
    std::map<unsigned, std::pair<int, int>> where;
    for (unsigned s = 0; s < (1u << n); ++s) {
        int d = 0;
        for (int i = 0; i < n; ++i)
            if (s & (1u << i)) d += degs[i];
        by_deg[d].push_back(s);
    }
    FinComplex C(ring);
    for (auto& [d, subs] : by_deg) {
        std::sort(subs.begin(), subs.end());
        C.set_rank(d, (int)subs.size());
        for (int i = 0; i < (int)subs.size(); ++i) where[subs[i]] = {d, i};
    }
    A->carrier = C;
    A->unit_index = where.at(0u).second;
    // product y_S y_T: zero unless disjoint; sign from moving each generator
    // of T left past the higher generators of S
    for (unsigned s = 1; s < (1u << n); ++s)
        for (unsigned t = 1; t < (1u << n); ++t) {
            if (s & t) continue;
            int sign = 1;
            for (int i = 0; i < n; ++i) {
                if (!(t & (1u << i))) continue;
                for (int j = i + 1; j < n; ++j)
                    if (s & (1u << j)) sign *= (degs[i] % 2 && degs[j] % 2) ? -1 : 1;
            }
            auto [ds, is] = where.at(s);
            auto [dt, it] = where.at(t);
            auto [du, iu] = where.at(s | t);
            (void)du;
            A->mul4[{ds, is, dt, it}] = Combo{{iu, ring.canon(Rat(sign))}};
        }
    A->aug = std::vector<Rat>(C.rank(0), Rat(0));
    (*A->aug)[A->unit_index] = 1;
    return A;
}

/// monomial data for the truncated polynomial algebra
struct PolyBasis {
    std::vector<int> gen_degs;
    int hi;
    std::map<int, std::vector<std::vector<int>>> monos;  // degree -> exponent vectors
    std::map<std::vector<int>, std::pair<int, int>> where;

    int total_deg(const std::vector<int>& e) const {
        int d = 0;
        for (size_t i = 0; i < e.size(); ++i) d += e[i] * gen_degs[i];
        return d;
    }
};

inline PolyBasis poly_basis(const std::vector<int>& gen_degs, int hi) {
    PolyBasis B{gen_degs, hi, {}, {}};
    std::vector<std::vector<int>> frontier = {std::vector<int>(gen_degs.size(), 0)};
    std::set<std::vector<int>> seen(frontier.begin(), frontier.end());
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (auto& e : frontier) {
            B.monos[B.total_deg(e)].push_back(e);
            for (size_t i = 0; i < gen_degs.size(); ++i) {
                auto f = e;
                f[i] += 1;
                if (B.total_deg(f) <= hi && !seen.count(f)) {
                    seen.insert(f);
                    next.push_back(f);
                }
            }
        }
        frontier = std::move(next);
    }
    for (auto& [d, ms] : B.monos) {
        std::sort(ms.begin(), ms.end());
        for (int i = 0; i < (int)ms.size(); ++i) B.where[ms[i]] = {d, i};
    }
    return B;
}

/**
 * Truncated polynomial algebra R[x_1..x_k]/(degrees > hi), zero differential.
 * Over F2 with all generators in degree 1 an optional cup1 is installed:
 * m u1 x_j = deg(m) m x_j^2 extended by zero on longer second arguments; this
 * satisfies both cup1 identities (derivation in the first argument).
 */
inline AlgebraPtr truncated_polynomial(RingSpec ring, const std::vector<int>& gen_degs, int hi,
                                       bool with_cup1 = false) {
    auto A = std::make_shared<DGAlgebra>();
    PolyBasis B = poly_basis(gen_degs, hi);
    FinComplex C(ring);
    for (auto& [d, ms] : B.monos) C.set_rank(d, (int)ms.size());
    A->carrier = C;
    A->unit_index = B.where.at(std::vector<int>(gen_degs.size(), 0)).second;
    for (auto& [m1, w1] : B.where)
        for (auto& [m2, w2] : B.where) {
            if (w1.first == 0 || w2.first == 0) continue;  // unit implicit
            std::vector<int> sum(m1.size());
            for (size_t i = 0; i < m1.size(); ++i) sum[i] = m1[i] + m2[i];
            auto it = B.where.find(sum);
            if (it == B.where.end()) continue;  // lands above the truncation
            A->mul4[{w1.first, w1.second, w2.first, w2.second}] = Combo{{it->second.second, Rat(1)}};
        }
    A->aug = std::vector<Rat>(C.rank(0), Rat(0));
    (*A->aug)[A->unit_index] = 1;
    if (with_cup1) {
        if (ring != RingSpec::Fp(2)) throw DgmodError("corpus cup1 is an F2 construction");
        for (auto& d : gen_degs)
            if (d != 1) throw DgmodError("corpus cup1 needs degree-1 generators");
        auto table = std::map<std::array<int, 4>, Combo>{};
        for (auto& [m, w] : B.where) {
            int degm = 0;
            for (int e : m) degm += e;
            if (degm % 2 == 0) continue;
            for (size_t j = 0; j < gen_degs.size(); ++j) {
                std::vector<int> tgt = m;
                tgt[j] += 2;
                auto it = B.where.find(tgt);
                if (it == B.where.end()) continue;
                std::vector<int> xj(gen_degs.size(), 0);
                xj[j] = 1;
                auto wx = B.where.at(xj);
                table[{w.first, w.second, wx.first, wx.second}] = Combo{{it->second.second, Rat(1)}};
            }
        }
        A->cup1 = table;
    }
    return A;
}

/// acyclic two-cell algebra 1, s (deg k), t (deg k+1), d t = s, all products of s, t zero
inline AlgebraPtr disk_algebra(RingSpec ring, int k) {
    auto A = std::make_shared<DGAlgebra>();
    FinComplex C(ring);
    C.set_rank(0, 1);
    C.set_rank(k, C.rank(k) + 1);
    C.set_rank(k + 1, 1);
    A->carrier = C;
    A->unit_index = 0;
    int s_idx = (k == 0) ? 1 : 0;
    Matrix d(ring, C.rank(k), 1);
    d.at(s_idx, 0) = 1;
    A->carrier.set_diff(k + 1, d);
    A->aug = std::vector<Rat>(C.rank(0), Rat(0));
    (*A->aug)[A->unit_index] = 1;
    return A;
}

/// graded tensor product of DGAs with Koszul signs
inline AlgebraPtr tensor_dga(const AlgebraPtr& A, const AlgebraPtr& B) {
    if (A->ring() != B->ring()) throw RingMismatch("tensor_dga ring mismatch");
    RingSpec ring = A->ring();
    auto T = std::make_shared<DGAlgebra>();
    TensorLayout lay(A->carrier, B->carrier);
    T->carrier = lay.build();
    T->unit_index = lay.pos(0, 0, A->unit_index, B->unit_index);
    const FinComplex& AC = A->carrier;
    const FinComplex& BC = B->carrier;
    for (int i1 = AC.lo; i1 <= AC.hi; ++i1)
        for (int a1 = 0; a1 < AC.rank(i1); ++a1)
            for (int j1 = BC.lo; j1 <= BC.hi; ++j1)
                for (int b1 = 0; b1 < BC.rank(j1); ++b1)
                    for (int i2 = AC.lo; i2 <= AC.hi; ++i2)
                        for (int a2 = 0; a2 < AC.rank(i2); ++a2)
                            for (int j2 = BC.lo; j2 <= BC.hi; ++j2)
                                for (int b2 = 0; b2 < BC.rank(j2); ++b2) {
                                    int n = i1 + j1 + i2 + j2;
                                    if (n > T->carrier.hi) continue;
                                    bool u1 = (i1 == 0 && j1 == 0) && lay.pos(0, 0, a1, b1) == T->unit_index;
                                    bool u2 = (i2 == 0 && j2 == 0) && lay.pos(0, 0, a2, b2) == T->unit_index;
                                    if (u1 || u2) continue;
                                    Matrix pa = A->basis_product(i1, a1, i2, a2);
                                    Matrix pb = B->basis_product(j1, b1, j2, b2);
                                    Rat sign((j1 * i2) % 2 == 0 ? 1 : -1);
                                    Combo out;
                                    for (int ra = 0; ra < pa.rows; ++ra) {
                                        if (pa.at(ra, 0) == 0) continue;
                                        for (int rb = 0; rb < pb.rows; ++rb) {
                                            if (pb.at(rb, 0) == 0) continue;
                                            out.push_back({lay.pos(n, i1 + i2, ra, rb),
                                                           ring.mul(sign, ring.mul(pa.at(ra, 0), pb.at(rb, 0)))});
                                        }
                                    }
                                    if (!out.empty())
                                        T->mul4[{i1 + j1, lay.pos(i1 + j1, i1, a1, b1), i2 + j2,
                                                 lay.pos(i2 + j2, i2, a2, b2)}] = out;
                                }
    if (A->aug && B->aug) {
        std::vector<Rat> aug(T->carrier.rank(0), Rat(0));
        auto items = lay.items(0);
        for (int pos = 0; pos < (int)items.size(); ++pos) {
            auto [i, a, b] = items[pos];
            if (i == 0) aug[pos] = ring.mul((*A->aug)[a], (*B->aug)[b]);
        }
        T->aug = aug;
    }
    return T;
}

/// F2 algebra 1, a1, b2, c3, e4 with a^2 = b, a c = e, d c = b: the triple
/// product <a,a,a> = [e] is nonzero
inline AlgebraPtr massey_algebra_f2() {
    RingSpec F2 = RingSpec::Fp(2);
    auto A = std::make_shared<DGAlgebra>();
    FinComplex C(F2);
    for (int n = 0; n <= 4; ++n) C.set_rank(n, 1);
    C.set_diff(3, Matrix::from_rows(F2, {{1}}));  // d c = b
    A->carrier = C;
    A->unit_index = 0;
    A->mul4[{1, 0, 1, 0}] = Combo{{0, Rat(1)}};  // a a = b
    A->mul4[{1, 0, 3, 0}] = Combo{{0, Rat(1)}};  // a c = e
    A->aug = std::vector<Rat>{Rat(1)};
    return A;
}

/// F2 algebra 1; p, q (deg 1); r (deg 2); z (deg 3) with p q = r, d z = r and
/// the nontrivial cup1 p u1 q = q u1 p = z
inline AlgebraPtr cup1_noncommutative_f2() {
    RingSpec F2 = RingSpec::Fp(2);
    auto A = std::make_shared<DGAlgebra>();
    FinComplex C(F2);
    C.set_rank(0, 1);
    C.set_rank(1, 2);
    C.set_rank(2, 1);
    C.set_rank(3, 1);
    C.set_diff(3, Matrix::from_rows(F2, {{1}}));  // d z = r
    A->carrier = C;
    A->unit_index = 0;
    A->mul4[{1, 0, 1, 1}] = Combo{{0, Rat(1)}};  // p q = r
    std::map<std::array<int, 4>, Combo> cup;
    cup[{1, 0, 1, 1}] = Combo{{0, Rat(1)}};  // p u1 q = z
    cup[{1, 1, 1, 0}] = Combo{{0, Rat(1)}};  // q u1 p = z
    A->cup1 = cup;
    A->aug = std::vector<Rat>{Rat(1)};
    return A;
}

/// rank-2 DGA over Z: 1 in degree 0, e in degree 1, d e = 2, e^2 = 0
inline AlgebraPtr z_rank2_dga() {
    RingSpec Z = RingSpec::Z();
    auto A = std::make_shared<DGAlgebra>();
    FinComplex C(Z);
    C.set_rank(0, 1);
    C.set_rank(1, 1);
    C.set_diff(1, Matrix::from_rows(Z, {{2}}));
    A->carrier = C;
    A->unit_index = 0;
    return A;
}

}  // namespace corpus
