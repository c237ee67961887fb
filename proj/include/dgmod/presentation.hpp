#pragma once

#include <vector>

#include "dgmod/solve.hpp"

namespace dgmod {

/**
 * Finitely presented module R^g / (column span of relations), carried in
 * canonical form: invariant factors (dividing chain, each > 1) plus free
 * rank.  Over Z/n every summand is cyclic of order dividing n and free_rank
 * is 0 (a "free" Z/n summand shows up as the factor n).
 */
struct ModulePresentation {
    RingSpec ring;
    int generators = 0;
    Matrix relations;  // generators x k

    std::vector<Int> torsion;  // invariant factors > 1, ascending dividing chain
    int free_rank = 0;

    ModulePresentation() = default;
    ModulePresentation(RingSpec r, int gens, Matrix rels)
        : ring(r), generators(gens), relations(std::move(rels)) {
        if (relations.rows != generators) throw ShapeError("presentation: relations.rows != generators");
        canonicalize();
    }

    static ModulePresentation free_module(RingSpec r, int rank) {
        return ModulePresentation(r, rank, Matrix(r, rank, 0));
    }
    static ModulePresentation zero(RingSpec r) { return free_module(r, 0); }
    /// cyclic module R/(c)
    static ModulePresentation cyclic(RingSpec r, const Rat& c) {
        Matrix rel(r, 1, 1);
        rel.set(0, 0, c);
        return ModulePresentation(r, 1, rel);
    }

    bool is_trivial() const { return torsion.empty() && free_rank == 0; }

    bool same_iso_class(const ModulePresentation& o) const {
        return ring == o.ring && torsion == o.torsion && free_rank == o.free_rank;
    }

    /// |M| for finite modules; throws if infinite.
    Int cardinality() const {
        if (free_rank > 0 && !ring.is_finite()) throw DgmodError("infinite module");
        Int card = 1;
        for (auto& t : torsion) card *= t;
        if (ring.is_finite())
            for (int i = 0; i < free_rank; ++i) card *= ring.modulus;
        return card;
    }

    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < torsion.size(); ++i)
            s += (i ? " + " : "") + (ring.kind == RingKind::Rationals ? "?" : "Z/" + torsion[i].str());
        if (free_rank > 0) {
            if (!s.empty()) s += " + ";
            std::string base = ring.is_field() ? ring.to_string() : (ring.kind == RingKind::Integers ? "Z" : ring.to_string());
            s += base + (free_rank > 1 ? "^" + std::to_string(free_rank) : "");
        }
        return s.empty() ? "0" : s;
    }

private:
    void canonicalize() {
        torsion.clear();
        free_rank = 0;
        if (generators == 0) return;
        switch (ring.kind) {
            case RingKind::Rationals:
            case RingKind::PrimeField: {
                Matrix R = rref_rows(relations.transposed());
                free_rank = generators - R.rows;
                return;
            }
            case RingKind::Integers: {
                SmithResult s = smith_normal_form(relations);
                int dlen = std::min(relations.rows, relations.cols);
                int nz = 0;
                for (int i = 0; i < dlen; ++i) {
                    Rat d = s.D.at(i, i);
                    if (d == 0) continue;
                    ++nz;
                    if (d != 1) torsion.push_back(rat_num(d));
                }
                free_rank = generators - nz;
                return;
            }
            case RingKind::IntegersMod: {
                RingSpec zz = RingSpec::Z();
                Matrix rel(zz, generators, relations.cols + generators);
                for (int i = 0; i < generators; ++i) {
                    for (int j = 0; j < relations.cols; ++j) rel.at(i, j) = relations.at(i, j);
                    rel.at(i, relations.cols + i) = Rat(ring.modulus);
                }
                SmithResult s = smith_normal_form(rel);
                for (int i = 0; i < generators; ++i) {
                    Rat d = s.D.at(i, i);
                    if (d != 0 && d != 1) torsion.push_back(rat_num(d));
                }
                return;
            }
        }
    }
};

/**
 * Presentation of (column span of z) / (column span of b).  Precondition:
 * span(b) is contained in span(z); violations raise NotASubmodule.
 * Generators of the result correspond to the columns of z.
 */
inline ModulePresentation subquotient(const Matrix& z, const Matrix& b) {
    if (z.ring != b.ring) throw RingMismatch("subquotient: ring mismatch");
    if (z.rows != b.rows) throw ShapeError("subquotient: ambient rank mismatch");
    if (!solve_matrix(z, b).has_value()) throw NotASubmodule("subquotient: span(b) not inside span(z)");
    Matrix K = kernel(z.hstack(b));
    Matrix rel = K.rows_slice(0, z.cols);
    return ModulePresentation(z.ring, z.cols, rel);
}

/// Presentation of R^ambient / span(columns of rels).
inline ModulePresentation cokernel_presentation(int ambient, const Matrix& rels) {
    return ModulePresentation(rels.ring, ambient, rels);
}

}  // namespace dgmod
