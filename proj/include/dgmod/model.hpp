#pragma once

#include "dgmod/contractible.hpp"

namespace dgmod {

/// surjectivity via trivial cokernel presentation
inline bool matrix_is_epi(const Matrix& p) { return cokernel_presentation(p.rows, p).is_trivial(); }

/// q-fibration: degreewise epimorphism
inline bool is_q_fibration(const ChainMap& p) {
    int lo = std::min(p.source.lo, p.target.lo), hi = std::max(p.source.hi, p.target.hi);
    for (int n = lo; n <= hi; ++n) {
        if (p.target.rank(n) == 0) continue;
        if (!matrix_is_epi(p.mat(n))) return false;
    }
    return true;
}

struct RFibrationVerdict {
    bool yes = false;
    int fail_degree = 0;
    std::map<int, Matrix> sections;  // graded module sections s_n, p_n s_n = id
};

/**
 * r-fibration: degreewise split epimorphism, with the section witness.  On
 * free chain modules a section exists exactly when p_n is onto; the witness
 * is the canonical preimage selection.
 */
inline RFibrationVerdict is_r_fibration(const ChainMap& p) {
    RFibrationVerdict v;
    int lo = std::min(p.source.lo, p.target.lo), hi = std::max(p.source.hi, p.target.hi);
    for (int n = lo; n <= hi; ++n) {
        if (p.target.rank(n) == 0) continue;
        auto s = solve_matrix(p.mat(n), Matrix::identity(p.source.ring, p.target.rank(n)));
        if (!s) {
            v.fail_degree = n;
            return v;
        }
        v.sections[n] = *s;
    }
    v.yes = true;
    return v;
}

/**
 * Split-epi test onto a finitely presented module: does p : R^a ->> R^g/span(T)
 * (p given as a g x a matrix of generator coordinates) admit a module
 * section?  Solves S*T = 0 and p*S = I + T*K.  This is where Z/4 ->> Z/2
 * fails to split while staying a surjection.
 */
inline bool presented_epi_splits(const Matrix& p, const Matrix& T) {
    if (p.rows != T.rows) throw ShapeError("presented_epi_splits: generator count mismatch");
    LinearSystem sys(p.ring);
    int S = sys.add_block(p.cols, p.rows);
    int K = sys.add_block(T.cols, p.rows);
    auto& eq1 = sys.new_equation(p.rows, p.rows);
    for (int i = 0; i < p.rows; ++i) eq1.rhs.at(i, i) = 1;
    LinearSystem::add_term(eq1, p, S, Matrix());
    if (T.cols > 0) LinearSystem::add_term(eq1, T, K, Matrix(), Rat(-1));
    if (T.cols > 0) {
        auto& eq2 = sys.new_equation(p.cols, T.cols);
        LinearSystem::add_term(eq2, Matrix(), S, T);
    }
    return sys.solve_blocks().has_value();
}

/**
 * Enriched RLP against J_R = {0 -> D^n}: equivalent to being an r-fibration
 * (the square module for 0 -> D^n is B_n and epsilon is p_n itself).
 */
inline RFibrationVerdict enriched_lift_JR(const ChainMap& p) { return is_r_fibration(p); }

/**
 * Enriched RLP against I_R = {S^{n-1} -> D^n}: per-degree module sections
 * eta_n of (p_n, d) : E_n -> B_n x_{Z_{n-1}B} Z_{n-1}E.  On success the
 * witnesses of the r-acyclic r-fibration structure are assembled from eta:
 * the DG section sigma_n(b) = eta_n(b, eta_{n-1}(d b)) and the contracting
 * homotopy s_n(c) = eta_{n+1}(0, c - eta_n(0, d c)) on ker p.
 */
struct IRWitness {
    std::map<int, Matrix> pullback_gens;  // columns (b ; z) spanning B_n x_{Z B} Z E
    std::map<int, Matrix> eta;            // values of eta on those generators
    ChainMap sigma;                       // DG section of p
    std::map<int, Matrix> ker_basis;      // columns span ker p_n
    std::map<int, Matrix> contraction;    // s_n in kernel-basis coordinates
};

struct IRVerdict {
    bool yes = false;
    int fail_degree = 0;
    std::optional<IRWitness> witness;
};

inline IRVerdict enriched_lift_IR(const ChainMap& p) {
    IRVerdict out;
    const FinComplex& E = p.source;
    const FinComplex& B = p.target;
    RingSpec ring = E.ring;
    int lo = std::min(E.lo, B.lo), hi = std::max(E.hi, B.hi) + 1;

    IRWitness w;
    for (int n = lo; n <= hi; ++n) {
        Matrix ZE = kernel(E.diff(n - 1));                    // cycles of E in degree n-1
        Matrix dB = B.diff(n);                                // B_n -> B_{n-1}
        Matrix pk = p.mat(n - 1) * ZE;                        // R^k -> B_{n-1}
        Matrix big = dB.hstack(-pk);                          // (b, u) with d b = p K u
        Matrix G0 = kernel(big);
        int nb = B.rank(n), k = ZE.cols;
        // generators (b ; z) with z = K u
        Matrix gens(ring, nb + E.rank(n - 1), G0.cols);
        for (int j = 0; j < G0.cols; ++j) {
            for (int i = 0; i < nb; ++i) gens.at(i, j) = G0.at(i, j);
            for (int i = 0; i < E.rank(n - 1); ++i) {
                Rat acc(0);
                for (int u = 0; u < k; ++u) acc += ZE.at(i, u) * G0.at(nb + u, j);
                gens.at(nb + i, j) = ring.canon(acc);
            }
        }
        if (gens.cols == 0) {
            w.pullback_gens[n] = gens;
            w.eta[n] = Matrix(ring, E.rank(n), 0);
            continue;
        }
        Matrix rel = kernel(gens);
        LinearSystem sys(ring);
        int Hb = sys.add_block(E.rank(n), gens.cols);
        {
            auto& eq = sys.new_equation(nb, gens.cols);  // p H = b-rows
            eq.rhs = gens.rows_slice(0, nb);
            LinearSystem::add_term(eq, p.mat(n), Hb, Matrix());
        }
        {
            auto& eq = sys.new_equation(E.rank(n - 1), gens.cols);  // d H = z-rows
            eq.rhs = gens.rows_slice(nb, nb + E.rank(n - 1));
            LinearSystem::add_term(eq, E.diff(n), Hb, Matrix());
        }
        if (rel.cols > 0) {
            auto& eq = sys.new_equation(E.rank(n), rel.cols);  // well-definedness
            LinearSystem::add_term(eq, Matrix(), Hb, rel);
        }
        auto sol = sys.solve_blocks();
        if (!sol) {
            out.fail_degree = n;
            return out;
        }
        w.pullback_gens[n] = gens;
        w.eta[n] = (*sol)[0];
    }

    // eta evaluated at a concrete pullback element (b ; z)
    auto eval_eta = [&](int n, const Matrix& bz) -> Matrix {
        auto itG = w.pullback_gens.find(n);
        if (itG == w.pullback_gens.end() || itG->second.cols == 0) return Matrix(ring, E.rank(n), 1);
        auto u = solve(itG->second, bz);
        if (!u) throw DgmodError("enriched_lift_IR: pullback element not in span");
        return w.eta.at(n) * *u;
    };
    auto eta_cycle = [&](int n, const Matrix& z) {  // eta restricted to Z_n B x {0}
        Matrix el(ring, B.rank(n) + E.rank(n - 1), 1);
        for (int i = 0; i < B.rank(n); ++i) el.at(i, 0) = z.at(i, 0);
        return eval_eta(n, el);
    };

    // sigma_n(b) = eta_n(b, eta~_{n-1}(d b))
    w.sigma = ChainMap(B, E);
    for (int n = lo; n <= hi - 1; ++n) {
        if (B.rank(n) == 0) continue;
        Matrix sm(ring, E.rank(n), B.rank(n));
        for (int j = 0; j < B.rank(n); ++j) {
            Matrix b(ring, B.rank(n), 1);
            b.at(j, 0) = 1;
            Matrix db = B.diff(n) * b;
            Matrix zpart = eta_cycle(n - 1, db);
            Matrix el(ring, B.rank(n) + E.rank(n - 1), 1);
            for (int i = 0; i < B.rank(n); ++i) el.at(i, 0) = b.at(i, 0);
            for (int i = 0; i < E.rank(n - 1); ++i) el.at(B.rank(n) + i, 0) = zpart.at(i, 0);
            Matrix val = eval_eta(n, el);
            for (int i = 0; i < E.rank(n); ++i) sm.at(i, j) = val.at(i, 0);
        }
        sm.canonicalize();
        if (E.rank(n) > 0) w.sigma.set_mat(n, sm);
    }

    // contracting homotopy of ker p: s_n(c) = eta_{n+1}(0, c - eta_n(0, d c))
    for (int n = lo - 1; n <= hi; ++n) w.ker_basis[n] = kernel(p.mat(n));
    for (int n = lo - 1; n <= hi - 1; ++n) {
        const Matrix& C = w.ker_basis[n];
        const Matrix& Cup = w.ker_basis[n + 1];
        Matrix sn(ring, Cup.cols, C.cols);
        for (int j = 0; j < C.cols; ++j) {
            Matrix c = C.col(j);
            Matrix dc = E.diff(n) * c;
            Matrix el0(ring, B.rank(n) + E.rank(n - 1), 1);
            for (int i = 0; i < E.rank(n - 1); ++i) el0.at(B.rank(n) + i, 0) = dc.at(i, 0);
            Matrix ec = eval_eta(n, el0);
            Matrix z = c - ec;
            Matrix el1(ring, B.rank(n + 1) + E.rank(n), 1);
            for (int i = 0; i < E.rank(n); ++i) el1.at(B.rank(n + 1) + i, 0) = z.at(i, 0);
            Matrix val = eval_eta(n + 1, el1);
            auto coords = solve(Cup, val);
            if (!coords) throw DgmodError("enriched_lift_IR: contraction left the kernel");
            for (int i = 0; i < Cup.cols; ++i) sn.at(i, j) = coords->at(i, 0);
        }
        w.contraction[n] = sn;
    }

    out.yes = true;
    out.witness = std::move(w);
    return out;
}

/// verifies p sigma = id, sigma a chain map, and ds + sd = id on ker p
inline bool verify_ir_witness(const ChainMap& p, const IRWitness& w) {
    const FinComplex& E = p.source;
    const FinComplex& B = p.target;
    if (!(p.compose(w.sigma) == ChainMap::identity(B))) return false;
    if (!w.sigma.commutes()) return false;
    int lo = std::min(E.lo, B.lo), hi = std::max(E.hi, B.hi);
    for (int n = lo; n <= hi; ++n) {
        auto itC = w.ker_basis.find(n);
        if (itC == w.ker_basis.end() || itC->second.cols == 0) continue;
        const Matrix& C = itC->second;
        auto s_at = [&](int m) -> Matrix {
            auto it = w.contraction.find(m);
            int rows = w.ker_basis.count(m + 1) ? w.ker_basis.at(m + 1).cols : 0;
            int cols = w.ker_basis.count(m) ? w.ker_basis.at(m).cols : 0;
            if (it == w.contraction.end()) return Matrix(E.ring, rows, cols);
            return it->second;
        };
        // d s + s d = id on kernel generators
        for (int j = 0; j < C.cols; ++j) {
            Matrix c = C.col(j);
            Matrix ds = w.ker_basis.count(n + 1) ? Matrix(E.diff(n + 1) * (w.ker_basis.at(n + 1) * s_at(n).col(j)))
                                                 : Matrix(E.ring, E.rank(n), 1);
            Matrix dc = E.diff(n) * c;
            auto dc_coords = solve(w.ker_basis.at(n - 1), dc);
            if (!dc_coords) return false;
            Matrix sd = w.ker_basis.count(n) ? Matrix(w.ker_basis.at(n) * (s_at(n - 1) * *dc_coords))
                                             : Matrix(E.ring, E.rank(n), 1);
            Matrix lhs = ds + sd;
            lhs.canonicalize();
            if (lhs != c) return false;
        }
    }
    return true;
}

/**
 * Factorization of a map with its verification witnesses.  Every produced
 * factorization recomposes exactly: right o left = original.
 */
struct Factorization {
    ChainMap left;
    ChainMap right;
    std::map<int, Matrix> left_retraction;  // graded r_n with r_n o left_n = id
    std::map<int, Matrix> right_section;    // graded s_n with right_n o s_n = id
    std::optional<ChainMap> middle_to_target_inverse;  // chain map i with right o i = id
    std::optional<Homotopy> middle_homotopy;           // d s + s d = i o right - id
};

/**
 * One-step enriched Garner factorization over J_R: X -> X + (disks over the
 * generators of Y) -> Y.  The left map is a split monomorphism with a chain
 * retraction; the right map is an r-fibration with the tautological section.
 */
inline Factorization factor_onestep_J(const ChainMap& f) {
    const FinComplex& X = f.source;
    const FinComplex& Y = f.target;
    RingSpec ring = X.ring;
    FinComplex D(ring);  // one D^n per basis element of Y_n; degree-n block: tops of Y_n, bottoms of Y_{n+1}
    int ylo = Y.lo, yhi = Y.hi;
    for (int n = ylo - 1; n <= yhi; ++n) {
        int r = Y.rank(n) + Y.rank(n + 1);
        if (r > 0) D.set_rank(n, r);
    }
    for (int n = D.lo; n <= D.hi + 1; ++n) {
        if (D.rank(n) == 0 || D.rank(n - 1) == 0) continue;
        Matrix d(ring, D.rank(n - 1), D.rank(n));
        // top of D^n (index j < Y.rank(n)) maps to its bottom, offset Y.rank(n-1) in degree n-1
        for (int j = 0; j < Y.rank(n); ++j) d.at(Y.rank(n - 1) + j, j) = 1;
        D.set_diff(n, d);
    }
    FinComplex M = direct_sum_complex(X, D);

    Factorization out{ChainMap(X, M), ChainMap(M, Y), {}, {}, std::nullopt, std::nullopt};
    for (int n = M.lo; n <= M.hi; ++n) {
        if (X.rank(n) > 0 && M.rank(n) > 0) {
            Matrix l(ring, M.rank(n), X.rank(n));
            for (int a = 0; a < X.rank(n); ++a) l.at(a, a) = 1;
            out.left.set_mat(n, l);
            Matrix r(ring, X.rank(n), M.rank(n));
            for (int a = 0; a < X.rank(n); ++a) r.at(a, a) = 1;
            out.left_retraction[n] = r;
        }
        if (M.rank(n) == 0 || Y.rank(n) == 0) continue;
        Matrix rm(ring, Y.rank(n), M.rank(n));
        Matrix fm = f.mat(n);
        for (int i = 0; i < fm.rows; ++i)
            for (int j = 0; j < fm.cols; ++j) rm.at(i, j) = fm.at(i, j);
        int off = X.rank(n);
        for (int j = 0; j < Y.rank(n); ++j) rm.at(j, off + j) = 1;  // top_y -> y
        Matrix dY = Y.diff(n + 1);
        for (int i = 0; i < Y.rank(n); ++i)
            for (int j = 0; j < Y.rank(n + 1); ++j) rm.at(i, off + Y.rank(n) + j) = dY.at(i, j);  // bottom_y -> dy
        out.right.set_mat(n, rm);
        Matrix sec(ring, M.rank(n), Y.rank(n));
        for (int j = 0; j < Y.rank(n); ++j) sec.at(off + j, j) = 1;
        out.right_section[n] = sec;
    }
    return out;
}

/// f = r o j through the mapping cylinder; witnesses from the explicit homotopy
inline Factorization factor_cylinder(const ChainMap& f) {
    auto cyl = cylinder(f);
    Factorization out{cyl.j, cyl.r, {}, {}, cyl.i, cyl.s};
    RingSpec ring = f.source.ring;
    for (int n = cyl.Mf.lo; n <= cyl.Mf.hi; ++n) {
        if (f.source.rank(n) == 0) continue;
        // graded retraction: the x (x) [1] coordinate
        Matrix r(ring, f.source.rank(n), cyl.Mf.rank(n));
        int off = f.target.rank(n);
        for (int a = 0; a < f.source.rank(n); ++a) r.at(a, off + a) = 1;
        out.left_retraction[n] = r;
    }
    return out;
}

/// f = rho o nu through the mapping cocylinder; rho has a graded section
inline Factorization factor_cocylinder(const ChainMap& f) {
    auto coc = cocylinder(f);
    Factorization out{coc.nu, coc.rho, {}, coc.rho_section, std::nullopt, std::nullopt};
    // nu is an h-equivalence: pi o nu = id and d t + t d = nu o pi - id;
    // store pi as a graded retraction of nu and t as the homotopy
    RingSpec ring = f.source.ring;
    for (int n = coc.Nf.lo; n <= coc.Nf.hi; ++n) {
        if (f.source.rank(n) == 0) continue;
        out.left_retraction[n] = coc.pi.mat(n);
    }
    out.middle_homotopy = coc.t;
    (void)ring;
    return out;
}

/// recomposition and witness check shared by the factorizations
inline bool verify_factorization(const ChainMap& f, const Factorization& F) {
    if (!(F.right.compose(F.left) == f)) return false;
    if (!F.left.commutes() || !F.right.commutes()) return false;
    for (auto& [n, r] : F.left_retraction) {
        if (F.left.source.rank(n) == 0) continue;
        Matrix prod = r * F.left.mat(n);
        if (prod != Matrix::identity(f.source.ring, F.left.source.rank(n))) return false;
    }
    for (auto& [n, s] : F.right_section) {
        if (F.right.target.rank(n) == 0) continue;
        Matrix prod = F.right.mat(n) * s;
        if (prod != Matrix::identity(f.source.ring, F.right.target.rank(n))) return false;
    }
    if (F.middle_to_target_inverse) {
        if (!(F.right.compose(*F.middle_to_target_inverse) == ChainMap::identity(F.right.target))) return false;
        if (F.middle_homotopy) {
            ChainMap ir = F.middle_to_target_inverse->compose(F.right);
            if (!(F.middle_homotopy->boundary() == ir - ChainMap::identity(F.left.target))) return false;
        }
    }
    return true;
}

/**
 * Commuting square for a lifting problem: p o top = bottom o i.
 */
struct LiftSquare {
    ChainMap i;       // W -> X
    ChainMap p;       // E -> B
    ChainMap top;     // W -> E
    ChainMap bottom;  // X -> B

    void check() const {
        if (!(p.compose(top) == bottom.compose(i))) throw PreconditionFailed("lift square does not commute");
    }
};

enum class LiftStructure { None, Q, R, H };

/**
 * Seeks a lift lambda with lambda i = top, p lambda = bottom, built
 * degreewise by the canonical solver.  With a named structure the fibration
 * predicate of p is re-verified, and one of i, p must be an equivalence of
 * the appropriate flavor; failures raise PreconditionFailed.  With
 * LiftStructure::None the solver simply attempts the system.
 */
inline std::optional<ChainMap> solve_lift(const LiftSquare& sq, LiftStructure structure) {
    sq.check();
    if (structure == LiftStructure::Q) {
        if (!is_q_fibration(sq.p)) throw PreconditionFailed("p is not a q-fibration");
        if (!is_quasi_iso(sq.p) && !is_quasi_iso(sq.i))
            throw PreconditionFailed("neither i nor p is a q-equivalence");
    } else if (structure == LiftStructure::R || structure == LiftStructure::H) {
        if (!is_r_fibration(sq.p).yes) throw PreconditionFailed("p is not an r-fibration");
        if (!is_h_equivalence(sq.p).yes && !is_h_equivalence(sq.i).yes)
            throw PreconditionFailed("neither i nor p is an h-equivalence");
    }
    const FinComplex& X = sq.i.target;
    const FinComplex& E = sq.p.source;
    RingSpec ring = X.ring;
    LinearSystem sys(ring);
    std::map<int, int> blk;
    int lo = std::min({X.lo, E.lo, sq.i.source.lo, sq.p.target.lo});
    int hi = std::max({X.hi, E.hi, sq.i.source.hi, sq.p.target.hi});
    for (int n = lo; n <= hi; ++n)
        if (X.rank(n) > 0 && E.rank(n) > 0) blk[n] = sys.add_block(E.rank(n), X.rank(n));
    for (int n = lo; n <= hi; ++n) {
        if (sq.i.source.rank(n) > 0 && E.rank(n) > 0) {
            auto& eq = sys.new_equation(E.rank(n), sq.i.source.rank(n));  // lambda i = top
            eq.rhs = sq.top.mat(n);
            if (blk.count(n)) LinearSystem::add_term(eq, Matrix(), blk[n], sq.i.mat(n));
        }
        if (X.rank(n) > 0 && sq.p.target.rank(n) > 0) {
            auto& eq = sys.new_equation(sq.p.target.rank(n), X.rank(n));  // p lambda = bottom
            eq.rhs = sq.bottom.mat(n);
            if (blk.count(n)) LinearSystem::add_term(eq, sq.p.mat(n), blk[n], Matrix());
        }
        if (X.rank(n) > 0 && E.rank(n - 1) > 0) {
            auto& eq = sys.new_equation(E.rank(n - 1), X.rank(n));  // d lambda = lambda d
            if (blk.count(n)) LinearSystem::add_term(eq, E.diff(n), blk[n], Matrix());
            if (blk.count(n - 1)) LinearSystem::add_term(eq, Matrix(), blk[n - 1], X.diff(n), Rat(-1));
        }
    }
    auto sol = sys.solve_blocks();
    if (!sol) return std::nullopt;
    ChainMap lam(X, E);
    int k = 0;
    for (auto& [n, b] : blk) lam.set_mat(n, (*sol)[k++]);
    return lam;
}

/**
 * Normalization of a degreewise split short exact sequence 0 -> X -> Y -> Z -> 0
 * in which i or g is an h-equivalence: an isomorphism Y = X + Z under X and
 * over Z (the X-contractible and Z-contractible cases deform the graded
 * splitting to a DG one through the contracting homotopy).
 */
struct SplitNormalization {
    FinComplex XplusZ;
    ChainMap to_sum;    // Y -> X + Z
    ChainMap from_sum;  // X + Z -> Y
};

inline SplitNormalization normalize_split_exact(const ChainMap& i, const ChainMap& g) {
    const FinComplex& X = i.source;
    const FinComplex& Y = i.target;
    const FinComplex& Z = g.target;
    RingSpec ring = X.ring;
    if (!(g.source == Y)) throw PreconditionFailed("normalize: g not composable with i");
    i.check_commutes();
    g.check_commutes();
    if (!g.compose(i).is_zero_map()) throw PreconditionFailed("normalize: g i != 0");
    int lo = std::min({X.lo, Y.lo, Z.lo}), hi = std::max({X.hi, Y.hi, Z.hi});

    // graded retraction r of i and section t of g, exactness checks
    std::map<int, Matrix> r, t;
    for (int n = lo; n <= hi; ++n) {
        if (X.rank(n) > 0) {
            if (kernel(i.mat(n)).cols != 0) throw PreconditionFailed("normalize: i not mono");
            auto rn = solve_matrix(i.mat(n).transposed(), Matrix::identity(ring, X.rank(n)));
            // r i = id  <=>  i^T r^T = id
            if (!rn) throw PreconditionFailed("normalize: not degreewise split");
            r[n] = rn->transposed();
        } else {
            r[n] = Matrix(ring, 0, Y.rank(n));
        }
        if (Z.rank(n) > 0) {
            auto tn = solve_matrix(g.mat(n), Matrix::identity(ring, Z.rank(n)));
            if (!tn) throw PreconditionFailed("normalize: g not epi");
            t[n] = *tn;
        } else {
            t[n] = Matrix(ring, Y.rank(n), 0);
        }
        Matrix kg = kernel(g.mat(n));
        if (!columns_in_span(i.mat(n), kg)) throw PreconditionFailed("normalize: ker g != im i");
    }
    // adjust: t' = (1 - i r) t so that r t' = 0
    for (int n = lo; n <= hi; ++n) {
        if (Y.rank(n) == 0 || Z.rank(n) == 0) continue;
        Matrix corr = i.mat(n) * (r[n] * t[n]);
        t[n] = t[n] - corr;
    }
    // beta = r d t'
    auto beta = [&](int n) {  // Z_n -> X_{n-1}
        if (X.rank(n - 1) == 0 || Z.rank(n) == 0) return Matrix(ring, X.rank(n - 1), Z.rank(n));
        return Matrix(r[n - 1] * (Y.diff(n) * t[n]));
    };

    auto cx = contracting_homotopy(X);
    std::map<int, Matrix> gamma;  // Z_n -> X_n with d gamma - gamma d = beta
    if (cx.contractible()) {
        for (int n = lo; n <= hi; ++n) {
            if (X.rank(n) == 0 || Z.rank(n) == 0) continue;
            gamma[n] = cx.s->mat(n - 1) * beta(n);
        }
    } else {
        auto cz = contracting_homotopy(Z);
        if (!cz.contractible())
            throw PreconditionFailed("normalize: neither i nor g is an h-equivalence");
        for (int n = lo; n <= hi; ++n) {
            if (X.rank(n) == 0 || Z.rank(n) == 0) continue;
            gamma[n] = -(beta(n + 1) * cz.s->mat(n));
        }
    }

    SplitNormalization out;
    out.XplusZ = direct_sum_complex(X, Z);
    out.to_sum = ChainMap(Y, out.XplusZ);
    out.from_sum = ChainMap(out.XplusZ, Y);
    for (int n = lo; n <= hi; ++n) {
        if (out.XplusZ.rank(n) == 0 || Y.rank(n) == 0) continue;
        Matrix gm = gamma.count(n) ? gamma[n] : Matrix(ring, X.rank(n), Z.rank(n));
        // to_sum: y -> (r y + gamma g y, g y)
        Matrix top = X.rank(n) > 0 ? Matrix(r[n] + gm * g.mat(n)) : Matrix(ring, 0, Y.rank(n));
        Matrix up(ring, out.XplusZ.rank(n), Y.rank(n));
        for (int a = 0; a < top.rows; ++a)
            for (int b = 0; b < top.cols; ++b) up.at(a, b) = top.at(a, b);
        Matrix gmn = g.mat(n);
        for (int a = 0; a < gmn.rows; ++a)
            for (int b = 0; b < gmn.cols; ++b) up.at(X.rank(n) + a, b) = gmn.at(a, b);
        out.to_sum.set_mat(n, up);
        // from_sum: (x, z) -> i x + (t' - i gamma) z
        Matrix dn(ring, Y.rank(n), out.XplusZ.rank(n));
        Matrix im = i.mat(n);
        for (int a = 0; a < im.rows; ++a)
            for (int b = 0; b < im.cols; ++b) dn.at(a, b) = im.at(a, b);
        Matrix tz = t[n] - i.mat(n) * gm;
        for (int a = 0; a < tz.rows; ++a)
            for (int b = 0; b < tz.cols; ++b) dn.at(a, X.rank(n) + b) = tz.at(a, b);
        out.from_sum.set_mat(n, dn);
    }
    out.to_sum.check_commutes();
    out.from_sum.check_commutes();
    if (!(out.to_sum.compose(out.from_sum) == ChainMap::identity(out.XplusZ)) ||
        !(out.from_sum.compose(out.to_sum) == ChainMap::identity(Y)))
        throw DgmodError("normalize: constructed map is not an isomorphism");
    return out;
}

}  // namespace dgmod
