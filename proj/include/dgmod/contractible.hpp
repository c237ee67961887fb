#pragma once

#include "dgmod/cone_cylinder.hpp"
#include "dgmod/solve.hpp"

namespace dgmod {

enum class ContractKind {
    Contractible,
    HomologyObstruction,  // H_n != 0 at `degree`
    LocalInfeasible,      // the one-degree system d s_n + s_{n-1} d = id is infeasible at `degree`
    GlobalInfeasible      // no local certificate found but the global system is infeasible
};

struct ContractibilityResult {
    ContractKind kind = ContractKind::Contractible;
    int degree = 0;
    std::optional<Homotopy> s;

    bool contractible() const { return kind == ContractKind::Contractible; }
};

namespace detail {

// feasibility of  d_{n+1} s_n + s_{n-1} d_n = id_n  alone
inline bool one_degree_feasible(const FinComplex& X, int n) {
    if (X.rank(n) == 0) return true;
    LinearSystem sys(X.ring);
    int bn = sys.add_block(X.rank(n + 1), X.rank(n));
    int bm = sys.add_block(X.rank(n), X.rank(n - 1));
    auto& eq = sys.new_equation(X.rank(n), X.rank(n));
    for (int i = 0; i < X.rank(n); ++i) eq.rhs.at(i, i) = 1;
    if (X.rank(n + 1) > 0) LinearSystem::add_term(eq, X.diff(n + 1), bn, Matrix());
    if (X.rank(n - 1) > 0) LinearSystem::add_term(eq, Matrix(), bm, X.diff(n));
    return sys.solve_blocks().has_value();
}

// one global solve over the window, unknowns s_j for j in [slo, shi]
inline std::optional<Homotopy> global_solve(const FinComplex& X, int wlo, int whi, int slo, int shi) {
    LinearSystem sys(X.ring);
    std::map<int, int> block;
    for (int j = slo; j <= shi; ++j)
        if (X.rank(j) > 0 && X.rank(j + 1) > 0) block[j] = sys.add_block(X.rank(j + 1), X.rank(j));
    for (int n = wlo; n <= whi; ++n) {
        if (X.rank(n) == 0) continue;
        auto& eq = sys.new_equation(X.rank(n), X.rank(n));
        for (int i = 0; i < X.rank(n); ++i) eq.rhs.at(i, i) = 1;
        if (block.count(n)) LinearSystem::add_term(eq, X.diff(n + 1), block[n], Matrix());
        if (block.count(n - 1)) LinearSystem::add_term(eq, Matrix(), block[n - 1], X.diff(n));
    }
    auto sol = sys.solve_blocks();
    if (!sol) return std::nullopt;
    Homotopy s(X, X);
    int k = 0;
    for (auto& [j, _] : block) s.set_mat(j, (*sol)[k++]);
    return s;
}

}  // namespace detail

/**
 * Decide contractibility of X restricted to a degree window: seeks s with
 * d s + s d = id at every degree in [wlo, whi] (unknowns s_{wlo-1}..s_{whi}).
 * The homology obstruction is checked first; otherwise the solver builds s
 * degree by degree, with an infeasibility certificate at the smallest
 * obstructed degree.
 */
inline ContractibilityResult contracting_homotopy_window(const FinComplex& X, int wlo, int whi) {
    ContractibilityResult out;
    for (int n = wlo; n <= whi; ++n) {
        if (X.rank(n) == 0) continue;
        if (!homology_at(X, n).pres.is_trivial()) {
            out.kind = ContractKind::HomologyObstruction;
            out.degree = n;
            return out;
        }
    }
    // greedy construction: joint solve of the first equation, then forward
    Homotopy s(X, X);
    bool started = false, failed = false;
    for (int n = wlo; n <= whi && !failed; ++n) {
        if (X.rank(n) == 0) continue;
        Matrix rhs = Matrix::identity(X.ring, X.rank(n)) - s.mat(n - 1) * X.diff(n);
        if (!started) {
            // solve d s_n + s_{n-1} d = id jointly in (s_n, s_{n-1})
            LinearSystem sys(X.ring);
            int bn = sys.add_block(X.rank(n + 1), X.rank(n));
            int bm = sys.add_block(X.rank(n), X.rank(n - 1));
            auto& eq = sys.new_equation(X.rank(n), X.rank(n));
            for (int i = 0; i < X.rank(n); ++i) eq.rhs.at(i, i) = 1;
            if (X.rank(n + 1) > 0) LinearSystem::add_term(eq, X.diff(n + 1), bn, Matrix());
            if (X.rank(n - 1) > 0) LinearSystem::add_term(eq, Matrix(), bm, X.diff(n));
            auto sol = sys.solve_blocks();
            if (!sol) { failed = true; break; }
            if (X.rank(n + 1) > 0) s.set_mat(n, (*sol)[0]);
            if (X.rank(n - 1) > 0) s.set_mat(n - 1, (*sol)[1]);
            started = true;
        } else {
            auto sn = solve_matrix(X.diff(n + 1), rhs);
            if (!sn) { failed = true; break; }
            if (X.rank(n + 1) > 0) s.set_mat(n, *sn);
        }
    }
    if (!failed) {
        out.kind = ContractKind::Contractible;
        out.s = std::move(s);
        return out;
    }
    for (int n = wlo; n <= whi; ++n) {
        if (X.rank(n) == 0) continue;
        if (!detail::one_degree_feasible(X, n)) {
            out.kind = ContractKind::LocalInfeasible;
            out.degree = n;
            return out;
        }
    }
    auto g = detail::global_solve(X, wlo, whi, wlo - 1, whi);
    if (g) {
        out.kind = ContractKind::Contractible;
        out.s = std::move(*g);
        return out;
    }
    out.kind = ContractKind::GlobalInfeasible;
    out.degree = wlo;
    return out;
}

/**
 * Decide contractibility of the whole finite complex: d s + s d = id in all
 * degrees, with s supported inside the window.
 */
inline ContractibilityResult contracting_homotopy(const FinComplex& X) {
    ContractibilityResult out;
    int elo = 0, ehi = -1;
    for (auto& [n, r] : X.ranks)
        if (r > 0) {
            if (ehi < elo && ehi < n) { elo = ehi = n; }
            elo = std::min(elo, n);
            ehi = std::max(ehi, n);
        }
    if (ehi < elo) {
        out.s = Homotopy(X, X);
        return out;
    }
    for (int n = elo; n <= ehi; ++n) {
        if (X.rank(n) == 0) continue;
        if (!homology_at(X, n).pres.is_trivial()) {
            out.kind = ContractKind::HomologyObstruction;
            out.degree = n;
            return out;
        }
    }
    // greedy up to ehi-2, then a joint step for the top two equations
    Homotopy s(X, X);
    bool failed = false;
    for (int n = elo; n <= ehi - 2 && !failed; ++n) {
        if (X.rank(n) == 0) continue;
        Matrix rhs = Matrix::identity(X.ring, X.rank(n)) - s.mat(n - 1) * X.diff(n);
        auto sn = solve_matrix(X.diff(n + 1), rhs);
        if (!sn) { failed = true; break; }
        if (X.rank(n + 1) > 0) s.set_mat(n, *sn);
    }
    if (!failed) {
        int top = ehi;
        // joint: d s_{top-1} = id - s_{top-2} d  at top-1,  s_{top-1} d = id at top
        LinearSystem sys(X.ring);
        int blk = sys.add_block(X.rank(top), X.rank(top - 1));
        if (X.rank(top - 1) > 0) {
            auto& eq1 = sys.new_equation(X.rank(top - 1), X.rank(top - 1));
            eq1.rhs = Matrix::identity(X.ring, X.rank(top - 1)) - s.mat(top - 2) * X.diff(top - 1);
            LinearSystem::add_term(eq1, X.diff(top), blk, Matrix());
        }
        if (X.rank(top) > 0) {
            auto& eq2 = sys.new_equation(X.rank(top), X.rank(top));
            for (int i = 0; i < X.rank(top); ++i) eq2.rhs.at(i, i) = 1;
            LinearSystem::add_term(eq2, Matrix(), blk, X.diff(top));
        }
        auto sol = sys.solve_blocks();
        if (sol) {
            if (X.rank(top) > 0 && X.rank(top - 1) > 0) s.set_mat(top - 1, (*sol)[0]);
            out.s = std::move(s);
            return out;
        }
        failed = true;
    }
    for (int k = elo; k <= ehi; ++k) {
        if (X.rank(k) == 0) continue;
        if (!detail::one_degree_feasible(X, k)) {
            out.kind = ContractKind::LocalInfeasible;
            out.degree = k;
            return out;
        }
    }
    auto g = detail::global_solve(X, elo, ehi, elo, ehi - 1);
    if (g) {
        out.kind = ContractKind::Contractible;
        out.s = std::move(*g);
        return out;
    }
    out.kind = ContractKind::GlobalInfeasible;
    out.degree = elo;
    return out;
}

/// verifies d s + s d = id on [wlo, whi]
inline bool homotopy_is_contraction(const FinComplex& X, const Homotopy& s, int wlo, int whi) {
    ChainMap b = s.boundary();
    for (int n = wlo; n <= whi; ++n) {
        if (X.rank(n) == 0) continue;
        if (b.mat(n) != Matrix::identity(X.ring, X.rank(n))) return false;
    }
    return true;
}

struct HEquivalenceVerdict {
    bool yes = false;
    ContractibilityResult cone_result;
};

/**
 * f is an h-equivalence iff cone(f) is contractible; the verdict carries the
 * cone certificate either way.
 */
inline HEquivalenceVerdict is_h_equivalence(const ChainMap& f) {
    HEquivalenceVerdict v;
    v.cone_result = contracting_homotopy(cone(f));
    v.yes = v.cone_result.contractible();
    return v;
}

}  // namespace dgmod
