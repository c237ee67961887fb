#pragma once

#include "dgmod/complex.hpp"

namespace dgmod {

/**
 * Degreewise map of complexes.  mats[n] has shape target.rank(n) x
 * source.rank(n); missing degrees are zero.  commutes() checks f d = d f.
 */
struct ChainMap {
    FinComplex source, target;
    std::map<int, Matrix> mats;

    ChainMap() = default;
    ChainMap(FinComplex src, FinComplex tgt) : source(std::move(src)), target(std::move(tgt)) {
        if (source.ring != target.ring) throw RingMismatch("chain map ring mismatch");
    }

    Matrix mat(int n) const {
        auto it = mats.find(n);
        if (it != mats.end()) return it->second;
        return Matrix(source.ring, target.rank(n), source.rank(n));
    }

    void set_mat(int n, Matrix m) {
        if (m.rows != target.rank(n) || m.cols != source.rank(n)) throw ShapeError("chain map mat shape");
        if (m.is_zero()) { mats.erase(n); return; }
        m.canonicalize();
        mats[n] = std::move(m);
    }

    static ChainMap identity(const FinComplex& X) {
        ChainMap f(X, X);
        for (auto& [n, r] : X.ranks) f.set_mat(n, Matrix::identity(X.ring, r));
        return f;
    }
    static ChainMap zero(const FinComplex& X, const FinComplex& Y) { return ChainMap(X, Y); }

    bool commutes() const {
        int lo = std::min(source.lo, target.lo), hi = std::max(source.hi, target.hi);
        for (int n = lo; n <= hi + 1; ++n)
            if (mat(n - 1) * source.diff(n) != target.diff(n) * mat(n)) return false;
        return true;
    }

    void check_commutes() const {
        if (!commutes()) throw DgmodError("not a chain map: f d != d f");
    }

    /// composition this o g
    ChainMap compose(const ChainMap& g) const {
        if (!(g.target == source)) throw ShapeError("compose: middle complexes differ");
        ChainMap h(g.source, target);
        int lo = std::min(g.source.lo, target.lo), hi = std::max(g.source.hi, target.hi);
        for (int n = lo; n <= hi; ++n) {
            if (target.rank(n) == 0 || g.source.rank(n) == 0) continue;
            h.set_mat(n, mat(n) * g.mat(n));
        }
        return h;
    }

    ChainMap operator+(const ChainMap& o) const {
        ChainMap h(source, target);
        int lo = std::min(source.lo, target.lo), hi = std::max(source.hi, target.hi);
        for (int n = lo; n <= hi; ++n)
            if (target.rank(n) > 0 && source.rank(n) > 0) h.set_mat(n, mat(n) + o.mat(n));
        return h;
    }
    ChainMap operator-(const ChainMap& o) const {
        ChainMap h(source, target);
        int lo = std::min(source.lo, target.lo), hi = std::max(source.hi, target.hi);
        for (int n = lo; n <= hi; ++n)
            if (target.rank(n) > 0 && source.rank(n) > 0) h.set_mat(n, mat(n) - o.mat(n));
        return h;
    }

    bool is_zero_map() const {
        for (auto& [n, m] : mats)
            if (!m.is_zero()) return false;
        return true;
    }

    bool operator==(const ChainMap& o) const {
        if (!(source == o.source) || !(target == o.target)) return false;
        int lo = std::min(source.lo, target.lo), hi = std::max(source.hi, target.hi);
        for (int n = lo; n <= hi; ++n)
            if (mat(n) != o.mat(n)) return false;
        return true;
    }
};

/**
 * Degree +1 graded map; the producing operation supplies its meaning
 * (typically d s + s d = f - g).
 */
struct Homotopy {
    FinComplex source, target;
    std::map<int, Matrix> mats;  // mats[n]: target.rank(n+1) x source.rank(n)

    Homotopy() = default;
    Homotopy(FinComplex src, FinComplex tgt) : source(std::move(src)), target(std::move(tgt)) {}

    Matrix mat(int n) const {
        auto it = mats.find(n);
        if (it != mats.end()) return it->second;
        return Matrix(source.ring, target.rank(n + 1), source.rank(n));
    }
    void set_mat(int n, Matrix m) {
        if (m.rows != target.rank(n + 1) || m.cols != source.rank(n)) throw ShapeError("homotopy mat shape");
        if (m.is_zero()) { mats.erase(n); return; }
        m.canonicalize();
        mats[n] = std::move(m);
    }

    /// the chain map d s + s d
    ChainMap boundary() const {
        ChainMap h(source, target);
        int lo = std::min(source.lo, target.lo) - 1, hi = std::max(source.hi, target.hi) + 1;
        for (int n = lo; n <= hi; ++n) {
            if (target.rank(n) == 0 || source.rank(n) == 0) continue;
            Matrix v = target.diff(n + 1) * mat(n) + mat(n - 1) * source.diff(n);
            h.set_mat(n, v);
        }
        return h;
    }
};

/// verifies d s + s d = f - g exactly
inline bool witnesses_homotopy(const Homotopy& s, const ChainMap& f, const ChainMap& g) {
    return s.boundary() == f - g;
}

}  // namespace dgmod
