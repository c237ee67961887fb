#pragma once

#include <array>
#include <memory>
#include <sstream>

#include "dgmod/model.hpp"

namespace dgmod {

/// sparse element of a fixed degree: (basis index, coefficient) pairs
using Combo = std::vector<std::pair<int, Rat>>;

inline Matrix combo_to_col(RingSpec ring, int rank, const Combo& c) {
    Matrix v(ring, rank, 1);
    for (auto& [idx, coef] : c) {
        if (idx < 0 || idx >= rank) throw ShapeError("combo index out of range");
        v.at(idx, 0) = ring.add(v.at(idx, 0), coef);
    }
    return v;
}

inline Combo col_to_combo(const Matrix& v) {
    Combo c;
    for (int i = 0; i < v.rows; ++i)
        if (v.at(i, 0) != 0) c.push_back({i, v.at(i, 0)});
    return c;
}

/**
 * DG R-algebra on a finite-window free carrier.  The multiplication table is
 * sparse over basis pairs; entries with either factor equal to the unit are
 * implicit.  Products landing above the window are undefined (closed-window
 * discipline): operations that need them throw WindowTooSmall, and validation
 * rejects stored entries whose target lies outside the window.
 */
struct DGAlgebra {
    FinComplex carrier;
    int unit_index = 0;  // degree-0 basis element
    std::map<std::array<int, 4>, Combo> mul4;  // (i, a, j, b) -> combo in degree i+j
    std::optional<std::map<std::array<int, 4>, Combo>> cup1;  // (i, a, j, b) -> combo in degree i+j+1
    std::optional<std::vector<Rat>> aug;  // functional on the degree-0 basis

    RingSpec ring() const { return carrier.ring; }

    bool product_in_window(int i, int j) const { return i + j <= carrier.hi; }
    bool cup1_in_window(int i, int j) const { return i + j + 1 <= carrier.hi; }

    bool is_unit(int i, int a) const { return i == 0 && a == unit_index; }

    /// basis product a_i,a * a_j,b as a column in A_{i+j}; unit rule implicit;
    /// products landing in rank-0 degrees (e.g. above a truncation) are zero
    Matrix basis_product(int i, int a, int j, int b) const {
        int tr = carrier.rank(i + j);
        if (is_unit(i, a)) {
            Matrix v(ring(), tr, 1);
            if (tr > 0) v.at(b, 0) = 1;
            return v;
        }
        if (is_unit(j, b)) {
            Matrix v(ring(), tr, 1);
            if (tr > 0) v.at(a, 0) = 1;
            return v;
        }
        auto it = mul4.find({i, a, j, b});
        if (it == mul4.end()) return Matrix(ring(), tr, 1);
        if (!product_in_window(i, j)) throw WindowTooSmall("stored product outside the algebra window");
        return combo_to_col(ring(), tr, it->second);
    }

    /// cup1 product as a column in A_{i+j+1}
    Matrix basis_cup1(int i, int a, int j, int b) const {
        if (!cup1) throw NoCup1("algebra has no cup1 table");
        int tr = carrier.rank(i + j + 1);
        auto it = cup1->find({i, a, j, b});
        if (it == cup1->end()) return Matrix(ring(), tr, 1);
        if (!cup1_in_window(i, j)) throw WindowTooSmall("stored cup1 entry outside the algebra window");
        return combo_to_col(ring(), tr, it->second);
    }

    /// matrix of left multiplication by the basis element (i, a): A_j -> A_{i+j}
    Matrix left_mult(int i, int a, int j) const {
        Matrix m(ring(), carrier.rank(i + j), carrier.rank(j));
        for (int b = 0; b < carrier.rank(j); ++b) {
            Matrix col = basis_product(i, a, j, b);
            for (int r = 0; r < col.rows; ++r) m.at(r, b) = col.at(r, 0);
        }
        return m;
    }

    /// product of homogeneous column vectors x in A_i, y in A_j
    Matrix product(int i, const Matrix& x, int j, const Matrix& y) const {
        Matrix out(ring(), carrier.rank(i + j), 1);
        for (int a = 0; a < x.rows; ++a) {
            if (x.at(a, 0) == 0) continue;
            for (int b = 0; b < y.rows; ++b) {
                if (y.at(b, 0) == 0) continue;
                Matrix col = basis_product(i, a, j, b);
                for (int r = 0; r < col.rows; ++r)
                    out.at(r, 0) += x.at(a, 0) * y.at(b, 0) * col.at(r, 0);
            }
        }
        out.canonicalize();
        return out;
    }

    Matrix cup1_product(int i, const Matrix& x, int j, const Matrix& y) const {
        Matrix out(ring(), carrier.rank(i + j + 1), 1);
        for (int a = 0; a < x.rows; ++a) {
            if (x.at(a, 0) == 0) continue;
            for (int b = 0; b < y.rows; ++b) {
                if (y.at(b, 0) == 0) continue;
                Matrix col = basis_cup1(i, a, j, b);
                for (int r = 0; r < col.rows; ++r)
                    out.at(r, 0) += x.at(a, 0) * y.at(b, 0) * col.at(r, 0);
            }
        }
        out.canonicalize();
        return out;
    }

    Matrix unit_column() const {
        Matrix v(ring(), carrier.rank(0), 1);
        v.at(unit_index, 0) = 1;
        return v;
    }

    Rat augment(const Matrix& deg0) const {
        if (!aug) throw DgmodError("algebra has no augmentation");
        Rat acc(0);
        for (int a = 0; a < deg0.rows; ++a) acc += (*aug)[a] * deg0.at(a, 0);
        return ring().canon(acc);
    }
};

using AlgebraPtr = std::shared_ptr<const DGAlgebra>;

struct ValidationReport {
    std::vector<std::string> violations;
    int checked = 0;
    bool ok() const { return violations.empty(); }
};

/// all DGA axioms on in-window basis tuples; failures carry basis indices
inline ValidationReport validate_dga(const DGAlgebra& A) {
    ValidationReport rep;
    const FinComplex& C = A.carrier;
    RingSpec ring = A.ring();
    auto note = [&](const std::string& s) { rep.violations.push_back(s); };

    if (C.rank(0) == 0 || A.unit_index < 0 || A.unit_index >= C.rank(0)) {
        note("unit index out of range");
        return rep;
    }
    if (!C.valid()) note("carrier differential fails d o d = 0");
    // unit is a cycle
    if (!(C.diff(0) * A.unit_column()).is_zero()) note("unit is not a cycle");

    // table entries stay inside the window
    for (auto& [k, v] : A.mul4) {
        auto [i, a, j, b] = k;
        if (i + j > C.hi) note("mul entry (" + std::to_string(i) + "," + std::to_string(a) + ")x(" +
                               std::to_string(j) + "," + std::to_string(b) + ") lands outside the window");
    }

    // Leibniz on all in-window basis pairs
    for (int i = C.lo; i <= C.hi; ++i)
        for (int a = 0; a < C.rank(i); ++a)
            for (int j = C.lo; j <= C.hi; ++j) {
                if (!A.product_in_window(i, j)) continue;
                for (int b = 0; b < C.rank(j); ++b) {
                    ++rep.checked;
                    Matrix ab = A.basis_product(i, a, j, b);
                    Matrix lhs = C.diff(i + j) * ab;
                    Matrix ea(ring, C.rank(i), 1), eb(ring, C.rank(j), 1);
                    ea.at(a, 0) = 1;
                    eb.at(b, 0) = 1;
                    Matrix rhs = A.product(i - 1, C.diff(i) * ea, j, eb) +
                                 A.product(i, ea, j - 1, C.diff(j) * eb).scaled(Rat(i % 2 ? -1 : 1));
                    rhs.canonicalize();
                    if (lhs != rhs)
                        note("Leibniz fails at (" + std::to_string(i) + "," + std::to_string(a) + ")x(" +
                             std::to_string(j) + "," + std::to_string(b) + ")");
                }
            }

    // associativity on in-window triples
    for (int i = C.lo; i <= C.hi; ++i)
        for (int a = 0; a < C.rank(i); ++a)
            for (int j = C.lo; j <= C.hi; ++j)
                for (int b = 0; b < C.rank(j); ++b) {
                    if (!A.product_in_window(i, j)) continue;
                    for (int k = C.lo; k <= C.hi; ++k) {
                        if (i + j + k > C.hi || !A.product_in_window(j, k)) continue;
                        for (int c = 0; c < C.rank(k); ++c) {
                            ++rep.checked;
                            Matrix ea(ring, C.rank(i), 1), eb(ring, C.rank(j), 1), ec(ring, C.rank(k), 1);
                            ea.at(a, 0) = 1;
                            eb.at(b, 0) = 1;
                            ec.at(c, 0) = 1;
                            Matrix l = A.product(i + j, A.product(i, ea, j, eb), k, ec);
                            Matrix r = A.product(i, ea, j + k, A.product(j, eb, k, ec));
                            if (l != r)
                                note("associativity fails at (" + std::to_string(i) + "," + std::to_string(a) +
                                     ")(" + std::to_string(j) + "," + std::to_string(b) + ")(" +
                                     std::to_string(k) + "," + std::to_string(c) + ")");
                        }
                    }
                }

    if (A.aug) {
        if ((int)A.aug->size() != C.rank(0)) note("augmentation size mismatch");
        else {
            if (A.augment(A.unit_column()) != 1) note("augmentation does not send the unit to 1");
            if (C.rank(1) > 0) {
                for (int a = 0; a < C.rank(1); ++a) {
                    Matrix e(ring, C.rank(1), 1);
                    e.at(a, 0) = 1;
                    if (A.augment(C.diff(1) * e) != 0) note("augmentation is not a chain map at degree-1 index " + std::to_string(a));
                }
            }
            for (int i = C.lo; i <= C.hi; ++i)
                for (int a = 0; a < C.rank(i); ++a)
                    for (int j = C.lo; j <= C.hi; ++j) {
                        if (i + j != 0 || !A.product_in_window(i, j)) continue;
                        for (int b = 0; b < C.rank(j); ++b) {
                            Matrix ea(ring, C.rank(i), 1), eb(ring, C.rank(j), 1);
                            ea.at(a, 0) = 1;
                            eb.at(b, 0) = 1;
                            Rat lhs = A.augment(A.basis_product(i, a, j, b));
                            Rat rhs = (i == 0 && j == 0) ? ring.mul(A.augment(ea), A.augment(eb)) : Rat(0);
                            if (lhs != rhs)
                                note("augmentation not multiplicative at (" + std::to_string(i) + "," +
                                     std::to_string(a) + ")x(" + std::to_string(j) + "," + std::to_string(b) + ")");
                        }
                    }
        }
    }
    return rep;
}

enum class Side { Left, Right };

/**
 * DG A-module on a free finite-window carrier.  For Side::Left the table
 * entry (i, a, j, m) is a_{i,a} . x_{j,m}; for Side::Right it is
 * x_{j,m} . a_{i,a}.  Entries with the unit are implicit.
 */
struct DGModule {
    AlgebraPtr algebra;
    Side side = Side::Left;
    FinComplex carrier;
    std::map<std::array<int, 4>, Combo> action;
    // set when the module was built as A (x) gens (relatively free)
    std::optional<FinComplex> free_generators;

    RingSpec ring() const { return carrier.ring; }

    bool action_in_window(int i, int j) const { return i + j <= carrier.hi; }

    Matrix basis_action(int i, int a, int j, int m) const {
        int tr = carrier.rank(i + j);
        if (algebra->is_unit(i, a)) {
            Matrix v(ring(), tr, 1);
            if (tr > 0) v.at(m, 0) = 1;
            return v;
        }
        auto it = action.find({i, a, j, m});
        if (it == action.end()) return Matrix(ring(), tr, 1);
        if (!action_in_window(i, j)) throw WindowTooSmall("stored action outside the module window");
        return combo_to_col(ring(), tr, it->second);
    }

    /// matrix of the action of algebra basis element (i, a): M_j -> M_{i+j}
    Matrix action_matrix(int i, int a, int j) const {
        Matrix out(ring(), carrier.rank(i + j), carrier.rank(j));
        for (int m = 0; m < carrier.rank(j); ++m) {
            Matrix col = basis_action(i, a, j, m);
            for (int r = 0; r < col.rows; ++r) out.at(r, m) = col.at(r, 0);
        }
        return out;
    }

    /// action of a homogeneous algebra column on a homogeneous module column
    Matrix act(int i, const Matrix& a, int j, const Matrix& x) const {
        Matrix out(ring(), carrier.rank(i + j), 1);
        for (int p = 0; p < a.rows; ++p) {
            if (a.at(p, 0) == 0) continue;
            for (int q = 0; q < x.rows; ++q) {
                if (x.at(q, 0) == 0) continue;
                Matrix col = basis_action(i, p, j, q);
                for (int r = 0; r < col.rows; ++r) out.at(r, 0) += a.at(p, 0) * x.at(q, 0) * col.at(r, 0);
            }
        }
        out.canonicalize();
        return out;
    }
};

/// module axioms on in-window basis tuples
inline ValidationReport validate_module(const DGModule& M) {
    ValidationReport rep;
    const DGAlgebra& A = *M.algebra;
    const FinComplex& AC = A.carrier;
    const FinComplex& MC = M.carrier;
    RingSpec ring = M.ring();
    auto note = [&](const std::string& s) { rep.violations.push_back(s); };
    if (AC.ring != MC.ring) {
        note("module ring differs from algebra ring");
        return rep;
    }
    if (!MC.valid()) note("carrier differential fails d o d = 0");

    for (auto& [k, v] : M.action) {
        auto [i, a, j, m] = k;
        if (i + j > MC.hi) note("action entry lands outside the module window");
    }

    // Leibniz: left  d(a x) = d(a) x + (-1)^i a d(x)
    //          right d(x a) = d(x) a + (-1)^j x d(a)
    for (int i = AC.lo; i <= AC.hi; ++i)
        for (int a = 0; a < AC.rank(i); ++a)
            for (int j = MC.lo; j <= MC.hi; ++j) {
                if (!M.action_in_window(i, j)) continue;
                for (int m = 0; m < MC.rank(j); ++m) {
                    ++rep.checked;
                    Matrix ax = M.basis_action(i, a, j, m);
                    Matrix lhs = MC.diff(i + j) * ax;
                    Matrix ea(ring, AC.rank(i), 1), em(ring, MC.rank(j), 1);
                    ea.at(a, 0) = 1;
                    em.at(m, 0) = 1;
                    Matrix rhs(ring, MC.rank(i + j - 1), 1);
                    if (M.side == Side::Left) {
                        rhs = M.act(i - 1, AC.diff(i) * ea, j, em) +
                              M.act(i, ea, j - 1, MC.diff(j) * em).scaled(Rat(i % 2 ? -1 : 1));
                    } else {
                        rhs = M.act(i, ea, j - 1, MC.diff(j) * em) +
                              M.act(i - 1, AC.diff(i) * ea, j, em).scaled(Rat(j % 2 ? -1 : 1));
                    }
                    rhs.canonicalize();
                    if (lhs != rhs)
                        note("module Leibniz fails at algebra (" + std::to_string(i) + "," + std::to_string(a) +
                             "), module (" + std::to_string(j) + "," + std::to_string(m) + ")");
                }
            }

    // associativity a(bm) = (ab)m, resp. (mb)a = m(ba)
    for (int i = AC.lo; i <= AC.hi; ++i)
        for (int a = 0; a < AC.rank(i); ++a)
            for (int j = AC.lo; j <= AC.hi; ++j) {
                if (!A.product_in_window(i, j)) continue;
                for (int b = 0; b < AC.rank(j); ++b)
                    for (int k = MC.lo; k <= MC.hi; ++k) {
                        if (i + j + k > MC.hi || !M.action_in_window(j, k) || !M.action_in_window(i, j + k)) continue;
                        for (int m = 0; m < MC.rank(k); ++m) {
                            ++rep.checked;
                            Matrix ea(ring, AC.rank(i), 1), eb(ring, AC.rank(j), 1), em(ring, MC.rank(k), 1);
                            ea.at(a, 0) = 1;
                            eb.at(b, 0) = 1;
                            em.at(m, 0) = 1;
                            Matrix l, r;
                            if (M.side == Side::Left) {
                                l = M.act(i, ea, j + k, M.act(j, eb, k, em));
                                r = M.act(i + j, A.product(i, ea, j, eb), k, em);
                            } else {
                                // (m b) a = m (b a):   basis_action(i,a) applied after (j,b)
                                l = M.act(i, ea, j + k, M.act(j, eb, k, em));
                                r = M.act(j + i, A.product(j, eb, i, ea), k, em);
                            }
                            if (l != r)
                                note("module associativity fails at (" + std::to_string(i) + "," + std::to_string(a) +
                                     "),(" + std::to_string(j) + "," + std::to_string(b) + "),(" +
                                     std::to_string(k) + "," + std::to_string(m) + ")");
                        }
                    }
            }
    return rep;
}

struct Cup1Certificate {
    int checked_pairs = 0;
    int checked_triples = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/**
 * Checks the two cup1 identities on all in-window basis pairs and triples:
 *   d(a u1 b) = ab - (-1)^{pq} ba - d(a) u1 b - (-1)^p a u1 d(b)
 *   (ab) u1 c = (-1)^p a (b u1 c) + (-1)^{qr} (a u1 c) b
 */
inline Cup1Certificate validate_cup1(const DGAlgebra& A) {
    if (!A.cup1) throw NoCup1("validate_cup1: no cup1 table");
    Cup1Certificate cert;
    const FinComplex& C = A.carrier;
    RingSpec ring = A.ring();
    auto sgn = [](int e) { return Rat(e % 2 ? -1 : 1); };

    for (int p = C.lo; p <= C.hi; ++p)
        for (int a = 0; a < C.rank(p); ++a)
            for (int q = C.lo; q <= C.hi; ++q) {
                if (!A.cup1_in_window(p, q)) continue;
                for (int b = 0; b < C.rank(q); ++b) {
                    ++cert.checked_pairs;
                    Matrix ea(ring, C.rank(p), 1), eb(ring, C.rank(q), 1);
                    ea.at(a, 0) = 1;
                    eb.at(b, 0) = 1;
                    Matrix lhs = C.diff(p + q + 1) * A.basis_cup1(p, a, q, b);
                    Matrix rhs = A.product(p, ea, q, eb) - A.product(q, eb, p, ea).scaled(sgn(p * q)) -
                                 A.cup1_product(p - 1, C.diff(p) * ea, q, eb) -
                                 A.cup1_product(p, ea, q - 1, C.diff(q) * eb).scaled(sgn(p));
                    rhs.canonicalize();
                    if (lhs != rhs)
                        cert.violations.push_back("cup1 differential identity fails at (" + std::to_string(p) + "," +
                                                  std::to_string(a) + ")x(" + std::to_string(q) + "," +
                                                  std::to_string(b) + ")");
                }
            }

    for (int p = C.lo; p <= C.hi; ++p)
        for (int a = 0; a < C.rank(p); ++a)
            for (int q = C.lo; q <= C.hi; ++q) {
                if (!A.product_in_window(p, q)) continue;
                for (int b = 0; b < C.rank(q); ++b)
                    for (int r = C.lo; r <= C.hi; ++r) {
                        if (p + q + r + 1 > C.hi || !A.cup1_in_window(q, r) || !A.cup1_in_window(p, r)) continue;
                        for (int c = 0; c < C.rank(r); ++c) {
                            ++cert.checked_triples;
                            Matrix ea(ring, C.rank(p), 1), eb(ring, C.rank(q), 1), ec(ring, C.rank(r), 1);
                            ea.at(a, 0) = 1;
                            eb.at(b, 0) = 1;
                            ec.at(c, 0) = 1;
                            Matrix lhs = A.cup1_product(p + q, A.product(p, ea, q, eb), r, ec);
                            Matrix rhs = A.product(p, ea, q + r + 1, A.cup1_product(q, eb, r, ec)).scaled(sgn(p)) +
                                         A.product(p + r + 1, A.cup1_product(p, ea, r, ec), q, eb).scaled(sgn(q * r));
                            rhs.canonicalize();
                            if (lhs != rhs)
                                cert.violations.push_back("Hirsch formula fails at (" + std::to_string(p) + "," +
                                                          std::to_string(a) + "),(" + std::to_string(q) + "," +
                                                          std::to_string(b) + "),(" + std::to_string(r) + "," +
                                                          std::to_string(c) + ")");
                        }
                    }
            }
    return cert;
}

/**
 * Extension of scalars F X = A (x) X with the left-multiplication action.
 * Basis layout is the TensorLayout of (A.carrier, X).
 */
inline DGModule free_module(const AlgebraPtr& A, const FinComplex& X) {
    if (A->ring() != X.ring) throw RingMismatch("free_module ring mismatch");
    DGModule M;
    M.algebra = A;
    M.side = Side::Left;
    M.carrier = tensor(A->carrier, X);
    M.free_generators = X;
    TensorLayout lay(A->carrier, X);
    const FinComplex& AC = A->carrier;
    // action of basis (i, a) on basis (k, c, x) at module degree j = k + deg(x):
    // a.(c (x) x) = (a c) (x) x
    for (int i = AC.lo; i <= AC.hi; ++i)
        for (int a = 0; a < AC.rank(i); ++a) {
            if (A->is_unit(i, a)) continue;
            for (int j = M.carrier.lo; j <= M.carrier.hi; ++j) {
                if (i + j > M.carrier.hi) continue;
                auto items = lay.items(j);
                for (int pos = 0; pos < (int)items.size(); ++pos) {
                    auto [k, c, xb] = items[pos];
                    Matrix prod = A->basis_product(i, a, k, c);
                    Combo out;
                    for (int r = 0; r < prod.rows; ++r) {
                        if (prod.at(r, 0) == 0) continue;
                        out.push_back({lay.pos(i + j, i + k, r, xb), prod.at(r, 0)});
                    }
                    if (!out.empty()) M.action[{i, a, j, pos}] = out;
                }
            }
        }
    return M;
}

/// R viewed as a trivial DG algebra concentrated in degree 0
inline AlgebraPtr trivial_algebra(RingSpec ring) {
    auto A = std::make_shared<DGAlgebra>();
    A->carrier = sphere(ring, 0);
    A->unit_index = 0;
    A->aug = std::vector<Rat>{Rat(1)};
    return A;
}

/// the trivial module R (or any complex with the augmentation action)
inline DGModule trivial_module(const AlgebraPtr& A, Side side) {
    if (!A->aug) throw DgmodError("trivial_module needs an augmentation");
    DGModule M;
    M.algebra = A;
    M.side = side;
    M.carrier = sphere(A->ring(), 0);
    const FinComplex& AC = A->carrier;
    for (int a = 0; a < AC.rank(0); ++a) {
        if (A->is_unit(0, a)) continue;
        Rat v = (*A->aug)[a];
        if (v != 0) M.action[{0, a, 0, 0}] = Combo{{0, v}};
    }
    return M;
}

/// a complex with the A-action through the augmentation (a.m = aug(a) m)
inline DGModule module_via_augmentation(const AlgebraPtr& A, const FinComplex& X, Side side) {
    if (!A->aug) throw DgmodError("module_via_augmentation needs an augmentation");
    DGModule M;
    M.algebra = A;
    M.side = side;
    M.carrier = X;
    const FinComplex& AC = A->carrier;
    for (int a = 0; a < AC.rank(0); ++a) {
        if (A->is_unit(0, a)) continue;
        Rat v = (*A->aug)[a];
        if (v == 0) continue;
        for (int j = X.lo; j <= X.hi; ++j)
            for (int m = 0; m < X.rank(j); ++m) M.action[{0, a, j, m}] = Combo{{m, v}};
    }
    return M;
}

}  // namespace dgmod
