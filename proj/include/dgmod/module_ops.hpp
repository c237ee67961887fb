#pragma once

#include "dgmod/dg_algebra.hpp"
#include "dgmod/presented.hpp"

namespace dgmod {

inline void check_same_algebra(const DGModule& N, const DGModule& M) {
    if (N.algebra.get() != M.algebra.get()) throw AlgebraMismatch("modules over different algebras");
}

enum class TensorRoute { Coequalizer, RelativelyFree };

struct TensorOverA {
    PresentedComplex complex;
    TensorRoute route;
    // set on the relatively-free route: N (x) gens as an honest free complex
    std::optional<FinComplex> free_form;
};

/**
 * N (x)_A M as the degreewise cokernel of N (x) A (x) M -> N (x) M,
 * n (x) a (x) m  ->  (n a) (x) m - n (x) (a m).  When M is structurally
 * A (x) X with generator complex X, the isomorphism N (x)_A M = N (x) X is
 * used instead and the result is an honest free complex.
 */
inline TensorOverA tensor_over_A(const DGModule& N, const DGModule& M) {
    check_same_algebra(N, M);
    if (N.side != Side::Right || M.side != Side::Left)
        throw AlgebraMismatch("tensor_over_A expects a right and a left module");
    const DGAlgebra& A = *N.algebra;
    RingSpec ring = N.ring();

    if (M.free_generators) {
        // d(n (x) x) = dn (x) x + (-1)^{|n|} n . d_M(1 (x) x)
        const FinComplex& X = *M.free_generators;
        const FinComplex& NC = N.carrier;
        TensorLayout lay(NC, X);
        TensorLayout mlay(A.carrier, X);
        FinComplex T(ring);
        for (int n = NC.lo + X.lo; n <= NC.hi + X.hi; ++n) {
            int r = lay.rank(n);
            if (r > 0) T.set_rank(n, r);
        }
        for (int n = T.lo; n <= T.hi; ++n) {
            if (T.rank(n) == 0 || T.rank(n - 1) == 0) continue;
            Matrix d(ring, T.rank(n - 1), T.rank(n));
            auto items = lay.items(n);
            for (int col = 0; col < (int)items.size(); ++col) {
                auto [i, na, xb] = items[col];  // n in N_i, x generator in X_{n-i}
                int xdeg = n - i;
                Matrix dN = NC.diff(i);
                for (int c = 0; c < NC.rank(i - 1); ++c)
                    if (dN.at(c, na) != 0) d.at(lay.pos(n - 1, i - 1, c, xb), col) += dN.at(c, na);
                // d_M of the generator 1 (x) x, then the right action of its A-part on n
                int gpos = mlay.pos(xdeg, 0, A.unit_index, xb);
                Matrix dgen = M.carrier.diff(xdeg);  // column gpos lives in M_{xdeg-1} = (A (x) X)_{xdeg-1}
                Rat sign(i % 2 == 0 ? 1 : -1);
                for (int row = 0; row < dgen.rows; ++row) {
                    if (dgen.at(row, gpos) == 0) continue;
                    // decode row as (adeg, aidx, x'_idx)
                    int rem = row, adeg = A.carrier.lo, aidx = 0, xidx = 0;
                    for (int k = A.carrier.lo; k <= A.carrier.hi; ++k) {
                        int blk = A.carrier.rank(k) * X.rank(xdeg - 1 - k);
                        if (rem < blk) {
                            adeg = k;
                            aidx = rem / X.rank(xdeg - 1 - k);
                            xidx = rem % X.rank(xdeg - 1 - k);
                            break;
                        }
                        rem -= blk;
                    }
                    // n . a in N_{i+adeg}
                    Matrix ncol(ring, NC.rank(i), 1);
                    ncol.at(na, 0) = 1;
                    Matrix ea(ring, A.carrier.rank(adeg), 1);
                    ea.at(aidx, 0) = 1;
                    Matrix nact = N.act(adeg, ea, i, ncol);
                    for (int t = 0; t < nact.rows; ++t) {
                        if (nact.at(t, 0) == 0) continue;
                        d.at(lay.pos(n - 1, i + adeg, t, xidx), col) +=
                            sign * dgen.at(row, gpos) * nact.at(t, 0);
                    }
                }
            }
            d.canonicalize();
            T.set_diff(n, d);
        }
        TensorOverA out;
        out.route = TensorRoute::RelativelyFree;
        out.free_form = T;
        out.complex = PresentedComplex::from_fincomplex(T);
        return out;
    }

    // generic coequalizer
    FinComplex T = tensor(N.carrier, M.carrier);
    TensorLayout lay(N.carrier, M.carrier);
    PresentedComplex P(ring);
    for (auto& [n, r] : T.ranks) P.set_gens(n, r);
    for (auto& [n, d] : T.diffs) P.set_diff(n, d);
    const FinComplex& AC = A.carrier;
    for (int n = T.lo; n <= T.hi; ++n) {
        std::vector<Matrix> cols;
        for (int i = N.carrier.lo; i <= N.carrier.hi; ++i)
            for (int j = AC.lo; j <= AC.hi; ++j) {
                int k = n - i - j;
                if (M.carrier.rank(k) == 0 || N.carrier.rank(i) == 0 || AC.rank(j) == 0) continue;
                for (int na = 0; na < N.carrier.rank(i); ++na)
                    for (int ab = 0; ab < AC.rank(j); ++ab) {
                        if (A.is_unit(j, ab)) continue;
                        for (int mc = 0; mc < M.carrier.rank(k); ++mc) {
                            Matrix col(ring, T.rank(n), 1);
                            Matrix ncol(ring, N.carrier.rank(i), 1);
                            ncol.at(na, 0) = 1;
                            Matrix ea(ring, AC.rank(j), 1);
                            ea.at(ab, 0) = 1;
                            Matrix mcol(ring, M.carrier.rank(k), 1);
                            mcol.at(mc, 0) = 1;
                            Matrix nact = N.act(j, ea, i, ncol);  // (n a) in N_{i+j}
                            for (int t = 0; t < nact.rows; ++t)
                                if (nact.at(t, 0) != 0) col.at(lay.pos(n, i + j, t, mc), 0) += nact.at(t, 0);
                            Matrix mact = M.act(j, ea, k, mcol);  // (a m) in M_{j+k}
                            for (int t = 0; t < mact.rows; ++t)
                                if (mact.at(t, 0) != 0) col.at(lay.pos(n, i, na, t), 0) -= mact.at(t, 0);
                            col.canonicalize();
                            if (!col.is_zero()) cols.push_back(col);
                        }
                    }
            }
        if (!cols.empty()) {
            Matrix R(ring, T.rank(n), (int)cols.size());
            for (int j = 0; j < (int)cols.size(); ++j)
                for (int i = 0; i < T.rank(n); ++i) R.at(i, j) = cols[j].at(i, 0);
            P.set_rel(n, R);
        }
    }
    TensorOverA out;
    out.route = TensorRoute::Coequalizer;
    out.complex = std::move(P);
    return out;
}

/**
 * Hom_A(M, N) as a presented complex: degree n is the submodule of
 * Hom(M, N)_n cut out by the equivariance constraints
 * f(a x) = (-1)^{n deg a} a f(x), presented on a canonical spanning set of
 * the solution space.
 */
inline PresentedComplex hom_over_A(const DGModule& M, const DGModule& N) {
    check_same_algebra(M, N);
    if (M.side != Side::Left || N.side != Side::Left)
        throw AlgebraMismatch("hom_over_A expects two left modules");
    const DGAlgebra& A = *M.algebra;
    RingSpec ring = M.ring();
    HomLayout lay(M.carrier, N.carrier);
    FinComplex H = lay.build();
    const FinComplex& AC = A.carrier;

    PresentedComplex P(ring);
    std::map<int, Matrix> span;  // degree -> columns (in Hom coordinates) spanning the A-linear part
    for (int n = H.lo; n <= H.hi; ++n) {
        if (H.rank(n) == 0) continue;
        // constraints: for each algebra basis (p, a), M basis (j, m), target row (N basis at p+j+n):
        //   f(a x) - (-1)^{n p} a f(x) = 0
        std::vector<Matrix> rows;
        for (int p = AC.lo; p <= AC.hi; ++p)
            for (int a = 0; a < AC.rank(p); ++a) {
                if (A.is_unit(p, a)) continue;
                for (int j = M.carrier.lo; j <= M.carrier.hi; ++j) {
                    int tdeg = p + j + n;
                    if (N.carrier.rank(tdeg) == 0 && M.carrier.rank(p + j) == 0) continue;
                    for (int m = 0; m < M.carrier.rank(j); ++m) {
                        Matrix amx = M.basis_action(p, a, j, m);  // in M_{p+j}
                        Matrix constraint(ring, N.carrier.rank(tdeg), H.rank(n));
                        // f(a x): sum over M_{p+j} basis of amx-coeff * f-unit at (p+j, t, row)
                        for (int t = 0; t < amx.rows; ++t) {
                            if (amx.at(t, 0) == 0) continue;
                            for (int row = 0; row < N.carrier.rank(tdeg); ++row)
                                constraint.at(row, lay.pos(n, p + j, t, row)) += amx.at(t, 0);
                        }
                        // -(-1)^{n p} a f(x): f(x) in N_{j+n}, then act
                        Rat sign((n * p) % 2 == 0 ? -1 : 1);
                        Matrix actm = N.action_matrix(p, a, j + n);  // N_{j+n} -> N_{p+j+n}
                        for (int c = 0; c < N.carrier.rank(j + n); ++c)
                            for (int row = 0; row < N.carrier.rank(tdeg); ++row)
                                if (actm.at(row, c) != 0)
                                    constraint.at(row, lay.pos(n, j, m, c)) += sign * actm.at(row, c);
                        constraint.canonicalize();
                        if (!constraint.is_zero()) rows.push_back(constraint);
                    }
                }
            }
        Matrix C(ring, 0, H.rank(n));
        for (auto& r : rows) C = C.vstack(r);
        Matrix K = kernel(C);
        span[n] = K;
        if (K.cols > 0) {
            P.set_gens(n, K.cols);
            Matrix rel = kernel(K);
            if (rel.cols > 0) P.set_rel(n, rel);
        }
    }
    for (int n = H.lo; n <= H.hi; ++n) {
        if (P.gen_count(n) == 0 || P.gen_count(n - 1) == 0) continue;
        Matrix img = H.diff(n) * span[n];
        auto coords = solve_matrix(span[n - 1], img);
        if (!coords) throw DgmodError("hom_over_A: differential leaves the A-linear subcomplex");
        P.set_diff(n, *coords);
    }
    return P;
}

/// M (x) K for a DG R-complex K: the tensor carrier with a acting on the M factor
inline DGModule module_tensor_complex(const DGModule& M, const FinComplex& K) {
    if (M.ring() != K.ring) throw RingMismatch("module_tensor_complex ring mismatch");
    DGModule T;
    T.algebra = M.algebra;
    T.side = M.side;
    T.carrier = tensor(M.carrier, K);
    TensorLayout lay(M.carrier, K);
    const FinComplex& AC = M.algebra->carrier;
    for (int i = AC.lo; i <= AC.hi; ++i)
        for (int a = 0; a < AC.rank(i); ++a) {
            if (M.algebra->is_unit(i, a)) continue;
            for (int n = T.carrier.lo; n <= T.carrier.hi; ++n) {
                if (T.carrier.rank(i + n) == 0) continue;
                auto items = lay.items(n);
                for (int pos = 0; pos < (int)items.size(); ++pos) {
                    auto [j, m, kb] = items[pos];
                    Matrix act = M.basis_action(i, a, j, m);
                    // right modules pick up the Koszul sign moving a past k
                    Rat sign(1);
                    if (M.side == Side::Right && ((n - j) * i) % 2 != 0) sign = -1;
                    Combo out;
                    for (int r = 0; r < act.rows; ++r)
                        if (act.at(r, 0) != 0)
                            out.push_back({lay.pos(i + n, i + j, r, kb), M.ring().mul(sign, act.at(r, 0))});
                    if (!out.empty()) T.action[{i, a, n, pos}] = out;
                }
            }
        }
    return T;
}

enum class RelProjVerdict { Yes, Unknown };

/**
 * Sufficient-condition check that P is relatively projective: structurally
 * free modules answer Yes immediately; otherwise the solver searches for a
 * graded A-linear section of the action map A (x) UP ->> P inside the window.
 */
inline RelProjVerdict check_relatively_projective(const DGModule& P) {
    if (P.free_generators) return RelProjVerdict::Yes;
    const DGAlgebra& A = *P.algebra;
    RingSpec ring = P.ring();
    const FinComplex& PC = P.carrier;
    TensorLayout lay(A.carrier, PC);
    // unknown sigma_n : P_n -> (A (x) UP)_n; constraints:
    //   eps sigma = id   and   sigma(a x) = a sigma(x) on basis pairs
    LinearSystem sys(ring);
    std::map<int, int> blk;
    for (int n = PC.lo; n <= PC.hi; ++n)
        if (PC.rank(n) > 0 && lay.rank(n) > 0) blk[n] = sys.add_block(lay.rank(n), PC.rank(n));

    // eps: (A (x) UP)_n -> P_n, a (x) x -> a.x
    auto eps_matrix = [&](int n) {
        Matrix e(ring, PC.rank(n), lay.rank(n));
        auto items = lay.items(n);
        for (int col = 0; col < (int)items.size(); ++col) {
            auto [i, a, x] = items[col];
            Matrix act = P.basis_action(i, a, n - i, x);
            for (int r = 0; r < act.rows; ++r) e.at(r, col) = act.at(r, 0);
        }
        return e;
    };
    for (int n = PC.lo; n <= PC.hi; ++n) {
        if (PC.rank(n) == 0) continue;
        auto& eq = sys.new_equation(PC.rank(n), PC.rank(n));
        for (int i = 0; i < PC.rank(n); ++i) eq.rhs.at(i, i) = 1;
        if (blk.count(n)) LinearSystem::add_term(eq, eps_matrix(n), blk[n], Matrix());
    }
    const FinComplex& AC = A.carrier;
    for (int p = AC.lo; p <= AC.hi; ++p)
        for (int a = 0; a < AC.rank(p); ++a) {
            if (A.is_unit(p, a)) continue;
            for (int n = PC.lo; n <= PC.hi; ++n) {
                if (PC.rank(n) == 0 || lay.rank(n + p) == 0) continue;
                // sigma(a x) - a sigma(x) = 0 in (A (x) UP)_{n+p}
                auto& eq = sys.new_equation(lay.rank(n + p), PC.rank(n));
                if (blk.count(n + p) && PC.rank(n + p) > 0) {
                    // sigma_{n+p} applied to the action a . x
                    Matrix sel(ring, lay.rank(n + p), lay.rank(n + p));
                    for (int i = 0; i < lay.rank(n + p); ++i) sel.at(i, i) = 1;
                    LinearSystem::add_term(eq, sel, blk[n + p], P.action_matrix(p, a, n));
                }
                if (blk.count(n)) {
                    // left multiplication by (p, a) on A (x) UP
                    Matrix lm(ring, lay.rank(n + p), lay.rank(n));
                    auto items = lay.items(n);
                    for (int col = 0; col < (int)items.size(); ++col) {
                        auto [i, b, x] = items[col];
                        Matrix prod = A.basis_product(p, a, i, b);
                        for (int r = 0; r < prod.rows; ++r)
                            if (prod.at(r, 0) != 0) lm.at(lay.pos(n + p, p + i, r, x), col) = prod.at(r, 0);
                    }
                    LinearSystem::add_term(eq, lm, blk[n], Matrix(), Rat(-1));
                }
            }
        }
    return sys.solve_blocks().has_value() ? RelProjVerdict::Yes : RelProjVerdict::Unknown;
}

}  // namespace dgmod
