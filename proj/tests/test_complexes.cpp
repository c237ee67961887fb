#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace dgmod;
using testsupport::random_complex;
using testsupport::random_chain_map;

namespace {

// degreewise free complex with rank 1 in [lo, hi] and every differential
// equal to the scalar c (the Remark-1.8 shape when c = 2 over Z/4)
FinComplex scalar_chain(RingSpec ring, int lo, int hi, long long c) {
    FinComplex X(ring);
    for (int n = lo; n <= hi; ++n) X.set_rank(n, 1);
    for (int n = lo + 1; n <= hi; ++n) X.set_diff(n, Matrix::from_rows(ring, {{c}}));
    X.check_valid();
    return X;
}

ModulePresentation z_mod(RingSpec ring, long long m) { return ModulePresentation::cyclic(ring, Rat(m)); }

}  // namespace

TEST_CASE("spheres, disks, interval") {
    RingSpec Z = RingSpec::Z();
    {
        FinComplex S = sphere(Z, 0);
        CHECK(S.valid());
        GradedHomology H = homology(S);
        CHECK(H.at(0, Z).free_rank == 1);
        CHECK(H.at(1, Z).is_trivial());
    }
    {
        FinComplex D = disk(Z, 3);
        CHECK(D.valid());
        CHECK(homology(D).all_trivial());
    }
    {
        FinComplex I = interval(Z);
        CHECK(I.valid());
        GradedHomology H = homology(I);
        // oracle: ker d_0 = Z^2, im d_1 = span(1,-1), quotient free of rank 1
        CHECK(H.at(0, Z).free_rank == 1);
        CHECK(H.at(0, Z).torsion.empty());
        CHECK(H.at(1, Z).is_trivial());
    }
}

TEST_CASE("tensor: unit, d o d = 0, Z/2 homology") {
    RingSpec Z = RingSpec::Z();
    std::mt19937_64 rng(42);
    for (int t = 0; t < 10; ++t) {
        FinComplex X = random_complex(rng, Z, -1, 3, 4).X;
        FinComplex T = tensor(X, sphere(Z, 0));
        CHECK(T == X);  // degreewise identical including differentials
        CHECK(T.valid());
    }
    {
        FinComplex T = tensor(disk(Z, 1), disk(Z, 1));
        CHECK(T.valid());
    }
    {
        FinComplex P = scalar_chain(Z, 0, 1, 2);  // Z --2--> Z in degrees 1,0
        FinComplex T = tensor(P, P);
        CHECK(T.valid());
        GradedHomology H = homology(T);
        CHECK(H.at(0, Z).same_iso_class(z_mod(Z, 2)));
        CHECK(H.at(1, Z).same_iso_class(z_mod(Z, 2)));
        CHECK(H.at(2, Z).is_trivial());
    }
}

TEST_CASE("homology: pinned examples") {
    RingSpec Z = RingSpec::Z();
    CHECK(homology(disk(Z, 5)).all_trivial());
    {
        FinComplex X = scalar_chain(Z, 0, 1, 2);
        GradedHomology H = homology(X);
        CHECK(H.at(0, Z).same_iso_class(z_mod(Z, 2)));
        CHECK(H.at(1, Z).is_trivial());
    }
    {
        RingSpec R4 = RingSpec::Zmod(4);
        FinComplex X = scalar_chain(R4, 0, 6, 2);
        GradedHomology H = homology(X);
        for (int n = 1; n <= 5; ++n) CHECK(H.at(n, R4).is_trivial());
        CHECK(H.at(0, R4).same_iso_class(z_mod(R4, 2)));
        CHECK(H.at(6, R4).same_iso_class(z_mod(R4, 2)));
    }
}

TEST_CASE("suspension and the signed shift") {
    RingSpec Z = RingSpec::Z();
    CHECK(suspension(sphere(Z, 0), 3) == sphere(Z, 3));
    std::mt19937_64 rng(7);
    for (int t = 0; t < 8; ++t) {
        FinComplex X = random_complex(rng, Z, 0, 3, 4).X;
        CHECK(down_shift(up_shift(X)) == X);
        CHECK(up_shift(X).valid());
    }
    {
        RingSpec R4 = RingSpec::Zmod(4);
        FinComplex X = scalar_chain(R4, 0, 6, 2);
        FinComplex U = up_shift(X);
        GradedHomology HX = homology(X), HU = homology(U);
        for (int n = -1; n <= 6; ++n)
            CHECK(HU.at(n, R4).same_iso_class(HX.at(n + 1, R4)));
    }
}

TEST_CASE("cone, cylinder, cocylinder") {
    RingSpec Z = RingSpec::Z();
    {
        FinComplex C = cone(ChainMap::identity(sphere(Z, 0)));
        CHECK(C == disk(Z, 1));
    }
    std::mt19937_64 rng(11);
    for (int t = 0; t < 12; ++t) {
        auto A = random_complex(rng, Z, 0, 3, 3);
        auto B = random_complex(rng, Z, 0, 3, 3);
        ChainMap f = random_chain_map(rng, A, B);
        CHECK(cone(f).valid());

        auto cyl = cylinder(f);
        CHECK(cyl.Mf.valid());
        cyl.j.check_commutes();
        cyl.r.check_commutes();
        cyl.i.check_commutes();
        CHECK(cyl.r.compose(cyl.j) == f);
        CHECK(cyl.r.compose(cyl.i) == ChainMap::identity(B.X));
        CHECK(cyl.s.boundary() == cyl.i.compose(cyl.r) - ChainMap::identity(cyl.Mf));

        auto coc = cocylinder(f);
        CHECK(coc.Nf.valid());
        coc.nu.check_commutes();
        coc.rho.check_commutes();
        coc.pi.check_commutes();
        CHECK(coc.rho.compose(coc.nu) == f);
        CHECK(coc.pi.compose(coc.nu) == ChainMap::identity(A.X));
        CHECK(coc.t.boundary() == coc.nu.compose(coc.pi) - ChainMap::identity(coc.Nf));
        for (int n = coc.Nf.lo; n <= coc.Nf.hi; ++n) {
            if (B.X.rank(n) == 0) continue;
            Matrix sec = coc.rho_section.at(n);
            CHECK(coc.rho.mat(n) * sec == Matrix::identity(Z, B.X.rank(n)));
        }
    }
    {
        // cocylinder of 0 -> Y: rho is a degreewise split epi
        FinComplex Y = scalar_chain(RingSpec::Zmod(4), 0, 2, 2);
        ChainMap z = ChainMap::zero(FinComplex(Y.ring), Y);
        auto coc = cocylinder(z);
        for (int n = 0; n <= 2; ++n)
            CHECK(coc.rho.mat(n) * coc.rho_section.at(n) == Matrix::identity(Y.ring, 1));
    }
    {
        // cylinder(id): r o j = id and j o r ~ id
        FinComplex X = scalar_chain(RingSpec::Zmod(4), 0, 2, 2);
        auto cyl = cylinder(ChainMap::identity(X));
        CHECK(cyl.r.compose(cyl.j) == ChainMap::identity(X));
        auto v = is_h_equivalence(cyl.r);
        CHECK(v.yes);
        CHECK(cyl.s.boundary() == cyl.i.compose(cyl.r) - ChainMap::identity(cyl.Mf));
    }
}

TEST_CASE("contracting homotopy: disks, Z/4 window, homology shortcut") {
    RingSpec Z = RingSpec::Z();
    {
        auto r = contracting_homotopy(disk(Z, 4));
        REQUIRE(r.contractible());
        CHECK(homotopy_is_contraction(disk(Z, 4), *r.s, 3, 4));
    }
    {
        RingSpec R4 = RingSpec::Zmod(4);
        FinComplex X = scalar_chain(R4, 0, 8, 2);
        auto r = contracting_homotopy_window(X, 1, 7);
        CHECK(r.kind == ContractKind::LocalInfeasible);
        CHECK(r.degree == 1);  // 2(s_n + s_{n-1}) = 1 is infeasible mod 4
        auto full = contracting_homotopy(X);
        CHECK(full.kind == ContractKind::HomologyObstruction);
        CHECK(full.degree == 0);
    }
    {
        auto r = contracting_homotopy(sphere(Z, 0));
        CHECK(r.kind == ContractKind::HomologyObstruction);
        CHECK(r.degree == 0);
    }
    std::mt19937_64 rng(13);
    for (int t = 0; t < 10; ++t) {
        // sums of disks after base change are contractible
        RingSpec R4 = RingSpec::Zmod(4);
        FinComplex D(R4);
        auto rc = random_complex(rng, R4, 0, 4, 3);
        FinComplex base(R4);
        for (auto [k, n] : rc.cells) base = direct_sum_complex(base, disk(R4, n + 1));
        auto r = contracting_homotopy(base);
        REQUIRE(r.contractible());
        CHECK(homotopy_is_contraction(base, *r.s, base.lo, base.hi));
        CHECK(homology(base).all_trivial());
    }
}

TEST_CASE("contractible implies acyclic; the Z/4 complex pins the converse failure") {
    RingSpec R4 = RingSpec::Zmod(4);
    FinComplex X = scalar_chain(R4, 0, 8, 2);
    GradedHomology H = homology(X);
    for (int n = 1; n <= 7; ++n) CHECK(H.at(n, R4).is_trivial());
    CHECK(contracting_homotopy_window(X, 1, 7).kind == ContractKind::LocalInfeasible);
}

TEST_CASE("quasi-iso and h-equivalence") {
    RingSpec Z = RingSpec::Z();
    std::mt19937_64 rng(17);
    for (int t = 0; t < 6; ++t) {
        FinComplex X = random_complex(rng, Z, 0, 3, 4).X;
        ChainMap id = ChainMap::identity(X);
        CHECK(is_quasi_iso(id));
        CHECK(is_h_equivalence(id).yes);
    }
    {
        // disk(1) -> sphere(0): the only chain map is zero (f_0 d_1 = 0
        // forces f_0 = 0); not a quasi-iso since H_0 is 0 vs Z
        FinComplex D = disk(Z, 1), S = sphere(Z, 0);
        ChainMap f = ChainMap::zero(D, S);
        f.check_commutes();
        CHECK(!is_quasi_iso(f));
        CHECK(!is_h_equivalence(f).yes);
    }
    std::mt19937_64 rng2(23);
    for (int t = 0; t < 10; ++t) {
        auto A = random_complex(rng2, Z, 0, 3, 3);
        auto B = random_complex(rng2, Z, 0, 3, 3);
        ChainMap f = random_chain_map(rng2, A, B);
        auto v = is_h_equivalence(f);
        if (v.yes) CHECK(is_quasi_iso(f));  // W_h inside W_q
    }
    {
        // strict inclusion W_h < W_q witnessed by the Z/4 complex (interior)
        RingSpec R4 = RingSpec::Zmod(4);
        FinComplex X = scalar_chain(R4, 0, 8, 2);
        GradedHomology H = homology(X);
        for (int n = 1; n <= 7; ++n) CHECK(H.at(n, R4).is_trivial());  // 0 -> X interior quasi-iso
        CHECK(contracting_homotopy_window(X, 1, 7).kind != ContractKind::Contractible);
    }
}

TEST_CASE("hom complex and rank-level adjunction") {
    RingSpec F2 = RingSpec::Fp(2);
    std::mt19937_64 rng(29);
    for (int t = 0; t < 6; ++t) {
        FinComplex X = random_complex(rng, F2, 0, 2, 2).X;
        FinComplex K = random_complex(rng, F2, 0, 2, 2).X;
        FinComplex Y = random_complex(rng, F2, 0, 2, 2).X;
        CHECK(hom_complex(X, Y).valid());
        FinComplex L = hom_complex(tensor(X, K), Y);
        FinComplex R = hom_complex(K, hom_complex(X, Y));
        for (int n = std::min(L.lo, R.lo); n <= std::max(L.hi, R.hi); ++n)
            CHECK(L.rank(n) == R.rank(n));
    }
}

TEST_CASE("find_chain_homotopy equivalences around the cylinder") {
    RingSpec Z = RingSpec::Zmod(4);
    FinComplex X = scalar_chain(Z, 0, 2, 2);
    auto cyl = cylinder(ChainMap::identity(X));
    // j o r ~ id as well (j and i are homotopic sections)
    ChainMap jr = cyl.j.compose(cyl.r);
    ChainMap idm = ChainMap::identity(cyl.Mf);
    ChainMap dlt = jr - idm;
    // solve d h + h d = jr - id
    LinearSystem sys(Z);
    std::map<int, int> blocks;
    for (int n = cyl.Mf.lo; n <= cyl.Mf.hi; ++n)
        if (cyl.Mf.rank(n) > 0 && cyl.Mf.rank(n + 1) > 0) blocks[n] = sys.add_block(cyl.Mf.rank(n + 1), cyl.Mf.rank(n));
    for (int n = cyl.Mf.lo; n <= cyl.Mf.hi; ++n) {
        if (cyl.Mf.rank(n) == 0) continue;
        auto& eq = sys.new_equation(cyl.Mf.rank(n), cyl.Mf.rank(n));
        eq.rhs = dlt.mat(n);
        if (blocks.count(n)) LinearSystem::add_term(eq, cyl.Mf.diff(n + 1), blocks[n], Matrix());
        if (blocks.count(n - 1)) LinearSystem::add_term(eq, Matrix(), blocks[n - 1], cyl.Mf.diff(n));
    }
    auto sol = sys.solve_blocks();
    REQUIRE(sol.has_value());
    Homotopy h(cyl.Mf, cyl.Mf);
    int k = 0;
    for (auto& [n, b] : blocks) h.set_mat(n, (*sol)[k++]);
    CHECK(witnesses_homotopy(h, jr, idm));
}
