#pragma once

#include <map>
#include <vector>

#include "dgmod/presentation.hpp"

namespace dgmod {

/**
 * Finite-support chain complex of free R-modules.  rank(n) = 0 outside
 * [lo, hi]; diff(n) is the matrix of d_n : X_n -> X_{n-1}, of shape
 * rank(n-1) x rank(n).
 */
struct FinComplex {
    RingSpec ring;
    int lo = 0, hi = -1;  // empty window when hi < lo
    std::map<int, int> ranks;
    std::map<int, Matrix> diffs;

    FinComplex() = default;
    explicit FinComplex(RingSpec r) : ring(r) {}

    int rank(int n) const {
        auto it = ranks.find(n);
        return it == ranks.end() ? 0 : it->second;
    }

    void set_rank(int n, int r) {
        if (r < 0) throw ShapeError("negative rank");
        if (r == 0) { ranks.erase(n); return; }
        ranks[n] = r;
        if (hi < lo) { lo = hi = n; }
        else { lo = std::min(lo, n); hi = std::max(hi, n); }
    }

    Matrix diff(int n) const {
        auto it = diffs.find(n);
        if (it != diffs.end()) return it->second;
        return Matrix(ring, rank(n - 1), rank(n));
    }

    void set_diff(int n, Matrix d) {
        if (d.rows != rank(n - 1) || d.cols != rank(n)) throw ShapeError("diff shape");
        if (d.is_zero()) { diffs.erase(n); return; }
        d.canonicalize();
        diffs[n] = std::move(d);
    }

    bool is_zero_complex() const { return ranks.empty(); }

    /// d o d = 0 in every degree
    bool valid() const {
        for (int n = lo; n <= hi + 1; ++n)
            if (!(diff(n - 1) * diff(n)).is_zero()) return false;
        return true;
    }

    void check_valid() const {
        if (!valid()) throw DgmodError("d o d != 0");
    }

    bool operator==(const FinComplex& o) const {
        if (ring != o.ring || ranks != o.ranks) return false;
        int a = std::min(lo, o.lo), b = std::max(hi, o.hi);
        for (int n = a; n <= b + 1; ++n)
            if (diff(n) != o.diff(n)) return false;
        return true;
    }
};

/// S^n_R: rank 1 in degree n, zero differential.
inline FinComplex sphere(RingSpec ring, int n) {
    FinComplex X(ring);
    X.set_rank(n, 1);
    return X;
}

/// D^n_R: rank 1 in degrees n and n-1, identity differential.
inline FinComplex disk(RingSpec ring, int n) {
    FinComplex X(ring);
    X.set_rank(n, 1);
    X.set_rank(n - 1, 1);
    X.set_diff(n, Matrix::identity(ring, 1));
    return X;
}

/// I: basis [0],[1] in degree 0, [I] in degree 1, d([I]) = [0] - [1].
inline FinComplex interval(RingSpec ring) {
    FinComplex X(ring);
    X.set_rank(0, 2);
    X.set_rank(1, 1);
    Matrix d(ring, 2, 1);
    d.set(0, 0, Rat(1));
    d.set(1, 0, Rat(-1));
    X.set_diff(1, d);
    return X;
}

/// degreewise direct sum, X-basis first
inline FinComplex direct_sum_complex(const FinComplex& X, const FinComplex& Y) {
    if (X.ring != Y.ring) throw RingMismatch("direct sum ring mismatch");
    FinComplex Z(X.ring);
    int lo = std::min(X.lo, Y.lo), hi = std::max(X.hi, Y.hi);
    for (int n = lo; n <= hi; ++n) Z.set_rank(n, X.rank(n) + Y.rank(n));
    for (int n = lo; n <= hi + 1; ++n) {
        if (Z.rank(n) == 0 || Z.rank(n - 1) == 0) continue;
        Matrix d = direct_sum(X.diff(n), Y.diff(n));
        Z.set_diff(n, d);
    }
    return Z;
}

/**
 * The signed shift Upsilon: (UM)_n = M_{n+1}, d(m~) = -d(m)~.
 */
inline FinComplex up_shift(const FinComplex& M) {
    FinComplex X(M.ring);
    for (auto& [n, r] : M.ranks) X.set_rank(n - 1, r);
    for (int n = X.lo; n <= X.hi + 1; ++n) {
        if (X.rank(n) == 0 || X.rank(n - 1) == 0) continue;
        X.set_diff(n, -M.diff(n + 1));
    }
    return X;
}

/// inverse of up_shift
inline FinComplex down_shift(const FinComplex& M) {
    FinComplex X(M.ring);
    for (auto& [n, r] : M.ranks) X.set_rank(n + 1, r);
    for (int n = X.lo; n <= X.hi + 1; ++n) {
        if (X.rank(n) == 0 || X.rank(n - 1) == 0) continue;
        X.set_diff(n, -M.diff(n - 1));
    }
    return X;
}

}  // namespace dgmod
