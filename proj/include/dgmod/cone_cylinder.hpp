#pragma once

#include "dgmod/homology.hpp"

namespace dgmod {

/**
 * Mapping cone: C(f)_n = Y_n + X_{n-1}, d(y, x) = (dy + f(x), -dx).
 * Y-basis first.
 */
inline FinComplex cone(const ChainMap& f) {
    const FinComplex& X = f.source;
    const FinComplex& Y = f.target;
    FinComplex C(X.ring);
    int lo = std::min(Y.lo, X.lo + 1), hi = std::max(Y.hi, X.hi + 1);
    for (int n = lo; n <= hi; ++n) {
        int r = Y.rank(n) + X.rank(n - 1);
        if (r > 0) C.set_rank(n, r);
    }
    for (int n = lo; n <= hi; ++n) {
        if (C.rank(n) == 0 || C.rank(n - 1) == 0) continue;
        Matrix d(X.ring, C.rank(n - 1), C.rank(n));
        Matrix dY = Y.diff(n), fm = f.mat(n - 1), dX = X.diff(n - 1);
        for (int i = 0; i < dY.rows; ++i)
            for (int j = 0; j < dY.cols; ++j) d.at(i, j) = dY.at(i, j);
        for (int i = 0; i < fm.rows; ++i)
            for (int j = 0; j < fm.cols; ++j) d.at(i, Y.rank(n) + j) = fm.at(i, j);
        for (int i = 0; i < dX.rows; ++i)
            for (int j = 0; j < dX.cols; ++j) d.at(Y.rank(n - 1) + i, Y.rank(n) + j) = X.ring.neg(dX.at(i, j));
        C.set_diff(n, d);
    }
    return C;
}

/**
 * Mapping cylinder Mf = Y u_f (X (x) I), with basis per degree ordered
 * (Y_n | X_n as x(x)[1] | X_{n-1} as x(x)[I]).  Returns the factorization
 * f = r o j together with the inclusion i: Y -> Mf and the homotopy s with
 * d s + s d = i o r - id.
 */
struct CylinderResult {
    FinComplex Mf;
    ChainMap j;   // X -> Mf
    ChainMap r;   // Mf -> Y,  r o j = f,  r o i = id
    ChainMap i;   // Y -> Mf
    Homotopy s;   // d s + s d = i o r - id
};

inline CylinderResult cylinder(const ChainMap& f) {
    const FinComplex& X = f.source;
    const FinComplex& Y = f.target;
    const RingSpec ring = X.ring;
    FinComplex M(ring);
    int lo = std::min({Y.lo, X.lo, X.lo + 1}), hi = std::max({Y.hi, X.hi, X.hi + 1});
    auto yr = [&](int n) { return Y.rank(n); };
    auto x1r = [&](int n) { return X.rank(n); };
    auto xir = [&](int n) { return X.rank(n - 1); };
    for (int n = lo; n <= hi; ++n) {
        int r = yr(n) + x1r(n) + xir(n);
        if (r > 0) M.set_rank(n, r);
    }
    for (int n = lo; n <= hi; ++n) {
        if (M.rank(n) == 0 || M.rank(n - 1) == 0) continue;
        Matrix d(ring, M.rank(n - 1), M.rank(n));
        Matrix dY = Y.diff(n), dX = X.diff(n), dXm = X.diff(n - 1), fm = f.mat(n - 1);
        int oy = 0, ox1 = yr(n), oxi = yr(n) + x1r(n);
        int ty = 0, tx1 = yr(n - 1), txi = yr(n - 1) + x1r(n - 1);
        for (int i = 0; i < dY.rows; ++i)
            for (int j = 0; j < dY.cols; ++j) d.at(ty + i, oy + j) = dY.at(i, j);
        for (int i = 0; i < dX.rows; ++i)
            for (int j = 0; j < dX.cols; ++j) d.at(tx1 + i, ox1 + j) = dX.at(i, j);
        // d(x (x) [I]) = (-1)^{n-1} f(x) - (-1)^{n-1} x(x)[1] + dx (x) [I]
        Rat sgn(((n - 1) % 2 == 0) ? 1 : -1);
        for (int i = 0; i < fm.rows; ++i)
            for (int j = 0; j < fm.cols; ++j) d.at(ty + i, oxi + j) = ring.mul(sgn, fm.at(i, j));
        for (int j = 0; j < xir(n); ++j) d.at(tx1 + j, oxi + j) = ring.neg(sgn);
        for (int i = 0; i < dXm.rows; ++i)
            for (int j = 0; j < dXm.cols; ++j) d.at(txi + i, oxi + j) = dXm.at(i, j);
        M.set_diff(n, d);
    }

    CylinderResult out{M, ChainMap(X, M), ChainMap(M, Y), ChainMap(Y, M), Homotopy(M, M)};
    for (int n = lo; n <= hi; ++n) {
        int oy = 0, ox1 = yr(n), oxi = yr(n) + x1r(n);
        if (X.rank(n) > 0 && M.rank(n) > 0) {
            Matrix jm(ring, M.rank(n), X.rank(n));
            for (int a = 0; a < X.rank(n); ++a) jm.at(ox1 + a, a) = 1;
            out.j.set_mat(n, jm);
        }
        if (M.rank(n) > 0 && Y.rank(n) > 0) {
            Matrix rm(ring, Y.rank(n), M.rank(n));
            for (int a = 0; a < Y.rank(n); ++a) rm.at(a, oy + a) = 1;
            Matrix fn = f.mat(n);
            for (int i = 0; i < fn.rows; ++i)
                for (int j = 0; j < fn.cols; ++j) rm.at(i, ox1 + j) = fn.at(i, j);
            out.r.set_mat(n, rm);
        }
        if (Y.rank(n) > 0 && M.rank(n) > 0) {
            Matrix im(ring, M.rank(n), Y.rank(n));
            for (int a = 0; a < Y.rank(n); ++a) im.at(oy + a, a) = 1;
            out.i.set_mat(n, im);
        }
        // s(x (x) [1]) = (-1)^{deg x} x (x) [I]
        if (M.rank(n) > 0 && M.rank(n + 1) > 0 && X.rank(n) > 0) {
            Matrix sm(ring, M.rank(n + 1), M.rank(n));
            int oxi_up = yr(n + 1) + x1r(n + 1);
            Rat sgn((n % 2 == 0) ? 1 : -1);
            for (int a = 0; a < X.rank(n); ++a) sm.at(oxi_up + a, ox1 + a) = sgn;
            out.s.set_mat(n, sm);
        }
        (void)oxi;
    }
    return out;
}

/**
 * Mapping cocylinder Nf = X x_f Y^I with coordinates (x, g1, gI) per degree
 * ordered (X_n | Y_n | Y_{n+1});  d(x, g1, gI) = (dx, dg1, dgI - (-1)^n (fx - g1)).
 * Returns f = rho o nu, the projection pi: Nf -> X with pi o nu = id, the
 * homotopy t with d t + t d = nu o pi - id, and the graded section sigma of
 * rho (a module splitting, not a chain map).
 */
struct CocylinderResult {
    FinComplex Nf;
    ChainMap nu;    // X -> Nf
    ChainMap rho;   // Nf -> Y,  rho o nu = f
    ChainMap pi;    // Nf -> X
    Homotopy t;     // d t + t d = nu o pi - id
    std::map<int, Matrix> rho_section;  // graded section of rho
};

inline CocylinderResult cocylinder(const ChainMap& f) {
    const FinComplex& X = f.source;
    const FinComplex& Y = f.target;
    const RingSpec ring = X.ring;
    FinComplex N(ring);
    int lo = std::min({X.lo, Y.lo, Y.lo - 1}), hi = std::max({X.hi, Y.hi, Y.hi - 1});
    auto xr = [&](int n) { return X.rank(n); };
    auto y1r = [&](int n) { return Y.rank(n); };
    auto yir = [&](int n) { return Y.rank(n + 1); };
    for (int n = lo; n <= hi; ++n) {
        int r = xr(n) + y1r(n) + yir(n);
        if (r > 0) N.set_rank(n, r);
    }
    for (int n = lo; n <= hi; ++n) {
        if (N.rank(n) == 0 || N.rank(n - 1) == 0) continue;
        Matrix d(ring, N.rank(n - 1), N.rank(n));
        int ox = 0, o1 = xr(n), oi = xr(n) + y1r(n);
        int tx = 0, t1 = xr(n - 1), ti = xr(n - 1) + y1r(n - 1);
        Matrix dX = X.diff(n), dY1 = Y.diff(n), dYi = Y.diff(n + 1), fn = f.mat(n);
        for (int i = 0; i < dX.rows; ++i)
            for (int j = 0; j < dX.cols; ++j) d.at(tx + i, ox + j) = dX.at(i, j);
        for (int i = 0; i < dY1.rows; ++i)
            for (int j = 0; j < dY1.cols; ++j) d.at(t1 + i, o1 + j) = dY1.at(i, j);
        Rat sgn((n % 2 == 0) ? 1 : -1);
        // gI component of d: d gI - (-1)^n f x + (-1)^n g1
        for (int i = 0; i < dYi.rows; ++i)
            for (int j = 0; j < dYi.cols; ++j) d.at(ti + i, oi + j) = dYi.at(i, j);
        for (int i = 0; i < fn.rows; ++i)
            for (int j = 0; j < fn.cols; ++j) d.at(ti + i, ox + j) = ring.mul(ring.neg(sgn), fn.at(i, j));
        for (int a = 0; a < y1r(n); ++a) d.at(ti + a, o1 + a) = sgn;
        N.set_diff(n, d);
    }

    CocylinderResult out{N, ChainMap(X, N), ChainMap(N, Y), ChainMap(N, X), Homotopy(N, N), {}};
    for (int n = lo; n <= hi; ++n) {
        int ox = 0, o1 = xr(n), oi = xr(n) + y1r(n);
        if (X.rank(n) > 0 && N.rank(n) > 0) {
            Matrix nm(ring, N.rank(n), X.rank(n));
            Matrix fn = f.mat(n);
            for (int a = 0; a < X.rank(n); ++a) nm.at(ox + a, a) = 1;
            for (int i = 0; i < fn.rows; ++i)
                for (int j = 0; j < fn.cols; ++j) nm.at(o1 + i, j) = fn.at(i, j);
            out.nu.set_mat(n, nm);
        }
        if (N.rank(n) > 0 && Y.rank(n) > 0) {
            Matrix rm(ring, Y.rank(n), N.rank(n));
            for (int a = 0; a < Y.rank(n); ++a) rm.at(a, o1 + a) = 1;
            out.rho.set_mat(n, rm);
            Matrix sec(ring, N.rank(n), Y.rank(n));
            for (int a = 0; a < Y.rank(n); ++a) sec.at(o1 + a, a) = 1;
            out.rho_section[n] = sec;
        }
        if (N.rank(n) > 0 && X.rank(n) > 0) {
            Matrix pm(ring, X.rank(n), N.rank(n));
            for (int a = 0; a < X.rank(n); ++a) pm.at(a, ox + a) = 1;
            out.pi.set_mat(n, pm);
        }
        // t(x, g1, gI) = (0, (-1)^n gI, 0)
        if (N.rank(n) > 0 && N.rank(n + 1) > 0 && yir(n) > 0) {
            Matrix tm(ring, N.rank(n + 1), N.rank(n));
            int o1_up = xr(n + 1);
            Rat sgn((n % 2 == 0) ? 1 : -1);
            for (int a = 0; a < yir(n); ++a) tm.at(o1_up + a, oi + a) = sgn;
            out.t.set_mat(n, tm);
        }
    }
    return out;
}

}  // namespace dgmod
