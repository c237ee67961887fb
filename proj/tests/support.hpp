#pragma once

// shared generators for randomized tests: complexes assembled from spheres
// and disks with a random change of basis, and chain maps assembled from
// elementary blocks conjugated by the same changes.

#include <random>

#include "dgmod/contractible.hpp"

namespace testsupport {

using namespace dgmod;

struct BasisChange {
    // per degree: invertible P and its inverse
    std::map<int, Matrix> P, Pinv;
};

inline Matrix random_unimodular(std::mt19937_64& rng, RingSpec ring, int n) {
    Matrix P = Matrix::identity(ring, n);
    if (n == 0) return P;
    std::uniform_int_distribution<int> pick(0, n - 1), coef(-2, 2), ops(n, 2 * n);
    int k = ops(rng);
    for (int t = 0; t < k; ++t) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        Rat c(coef(rng));
        for (int col = 0; col < n; ++col) P.at(i, col) = ring.add(P.at(i, col), ring.mul(c, P.at(j, col)));
    }
    return P;
}

inline Matrix invert_unimodular(const Matrix& P) {
    auto X = solve_matrix(P, Matrix::identity(P.ring, P.rows));
    if (!X) throw DgmodError("random basis change not invertible");
    return *X;
}

/// direct sum of random spheres and disks in [lo, hi], then a random basis change
struct RandomComplex {
    FinComplex X;
    std::vector<std::pair<int, int>> cells;  // (kind 0=sphere deg n, 1=disk top n)
    BasisChange bc;
};

inline RandomComplex random_complex(std::mt19937_64& rng, RingSpec ring, int lo, int hi, int ncells) {
    RandomComplex out;
    FinComplex base(ring);
    std::uniform_int_distribution<int> kind(0, 1), deg(lo, hi);
    for (int c = 0; c < ncells; ++c) {
        int k = kind(rng), n = deg(rng);
        if (k == 1 && n == lo) k = 0;  // keep disks inside the window
        out.cells.push_back({k, n});
        base = direct_sum_complex(base, k == 0 ? sphere(ring, n) : disk(ring, n));
    }
    for (int n = base.lo - 1; n <= base.hi + 1; ++n) {
        int r = base.rank(n);
        Matrix P = random_unimodular(rng, ring, r);
        out.bc.P[n] = P;
        out.bc.Pinv[n] = invert_unimodular(P);
    }
    FinComplex X(ring);
    for (auto& [n, r] : base.ranks) X.set_rank(n, r);
    for (int n = X.lo; n <= X.hi + 1; ++n) {
        if (X.rank(n) == 0 || X.rank(n - 1) == 0) continue;
        X.set_diff(n, out.bc.P.at(n - 1) * base.diff(n) * out.bc.Pinv.at(n));
    }
    out.X = X;
    return out;
}

/**
 * Random chain map between two random cell sums: elementary blocks
 * sphere(n)->sphere(n), disk(n)->disk(n), disk(n)->sphere(n),
 * sphere(n)->disk(n+1) with random coefficients, conjugated by the basis
 * changes on both sides.
 */
inline ChainMap random_chain_map(std::mt19937_64& rng, const RandomComplex& src, const RandomComplex& tgt) {
    RingSpec ring = src.X.ring;
    std::uniform_int_distribution<int> coef(-3, 3);
    // block offsets in the unconjugated bases
    auto offsets = [&](const RandomComplex& rc) {
        std::map<int, int> used;
        std::vector<std::map<int, int>> cell_off;  // per cell: degree -> offset
        for (auto& [k, n] : rc.cells) {
            std::map<int, int> off;
            off[n] = used[n];
            used[n] += 1;
            if (k == 1) {
                off[n - 1] = used[n - 1];
                used[n - 1] += 1;
            }
            cell_off.push_back(off);
        }
        return cell_off;
    };
    auto soff = offsets(src), toff = offsets(tgt);
    std::map<int, Matrix> f0;
    auto ensure = [&](int n) {
        if (!f0.count(n)) f0.emplace(n, Matrix(ring, tgt.X.rank(n), src.X.rank(n)));
    };
    for (size_t a = 0; a < src.cells.size(); ++a)
        for (size_t b = 0; b < tgt.cells.size(); ++b) {
            auto [ks, ns] = src.cells[a];
            auto [kt, nt] = tgt.cells[b];
            Rat c(coef(rng));
            if (c == 0) continue;
            if (ks == 0 && kt == 0 && ns == nt) {  // sphere -> sphere
                ensure(ns);
                f0.at(ns).at(toff[b][nt], soff[a][ns]) = c;
            } else if (ks == 1 && kt == 1 && ns == nt) {  // disk -> disk
                ensure(ns);
                ensure(ns - 1);
                f0.at(ns).at(toff[b][nt], soff[a][ns]) = c;
                f0.at(ns - 1).at(toff[b][nt - 1], soff[a][ns - 1]) = c;
            } else if (ks == 1 && kt == 0 && ns == nt) {  // disk top -> sphere
                ensure(ns);
                f0.at(ns).at(toff[b][nt], soff[a][ns]) = c;
            } else if (ks == 0 && kt == 1 && nt == ns + 1) {  // sphere -> disk bottom
                ensure(ns);
                f0.at(ns).at(toff[b][nt - 1], soff[a][ns]) = c;
            }
        }
    ChainMap f(src.X, tgt.X);
    for (auto& [n, m] : f0) {
        if (tgt.X.rank(n) == 0 || src.X.rank(n) == 0) continue;
        f.set_mat(n, tgt.bc.P.at(n) * m * src.bc.Pinv.at(n));
    }
    f.check_commutes();
    return f;
}

}  // namespace testsupport
