#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dgmod/split_module.hpp"
#include "corpus.hpp"

using namespace dgmod;

namespace {

FinComplex scalar_chain(RingSpec ring, int lo, int hi, long long c) {
    FinComplex X(ring);
    for (int n = lo; n <= hi; ++n) X.set_rank(n, 1);
    for (int n = lo + 1; n <= hi; ++n) X.set_diff(n, Matrix::from_rows(ring, {{c}}));
    X.check_valid();
    return X;
}

}  // namespace

TEST_CASE("spectral sequence basics") {
    RingSpec Z = RingSpec::Z();
    {
        // trivial one-step filtration: E^0 is the complex, E^1 its homology
        FinComplex X = scalar_chain(Z, 0, 1, 2);
        FilteredComplex F;
        F.total = X;
        F.set_levels(0, {0});
        F.set_levels(1, {0});
        REQUIRE(F.valid());
        auto pages = spectral_sequence(F, 2);
        CHECK(pages[0].at(0, 0) != nullptr);
        CHECK(pages[1].at(0, 0)->same_iso_class(ModulePresentation::cyclic(Z, Rat(2))));
        CHECK(pages[1].trivial_at(0, 1));
        // collapse: E^2 = E^1
        CHECK(pages[2].at(0, 0)->same_iso_class(*pages[1].at(0, 0)));
        auto conv = convergence_report(F, pages[2]);
        CHECK(conv.converged);
    }
}

TEST_CASE("ce resolution of spheres and free chains") {
    RingSpec Z = RingSpec::Z();
    {
        auto R = ce_resolution(sphere(Z, 0), 4);
        CHECK(R.columns.size() == 1);  // S^0 is already s-projective
        CHECK(augmentation_map(R).commutes());
        CHECK(is_quasi_iso(augmentation_map(R)));
    }
    {
        FinComplex M = scalar_chain(Z, 0, 1, 2);
        auto R = ce_resolution(M, 4);
        Bicomplex B = to_bicomplex(R);
        CHECK(B.valid());
        // columns are s-projective over Z and the augmentation is an s-epi
        CHECK(is_s_epi(R.column_carrier(0), M, R.eps[0]));
        FilteredComplex T = total_complex(B);
        CHECK(T.valid());
        auto rm = moore_resolution_map(R);
        rm.alpha.check_commutes();
        CHECK(validate_split(rm.X).ok());
        CHECK(is_resolution(rm, (int)R.columns.size() - 2));
    }
    {
        // Remark 1.8 truncation over Z/4: columns free, eps an s-epi
        RingSpec R4 = RingSpec::Zmod(4);
        FinComplex M = scalar_chain(R4, 0, 6, 2);
        auto R = ce_resolution(M, 3);
        CHECK(to_bicomplex(R).valid());
        CHECK(is_s_epi(R.column_carrier(0), M, R.eps[0]));
        auto rm = moore_resolution_map(R);
        rm.alpha.check_commutes();
        CHECK(validate_split(rm.X).ok());
        CHECK(is_resolution(rm, (int)R.columns.size() - 2));
    }
}

TEST_CASE("ce resolution of a presented target: the classical Z/2 resolution") {
    RingSpec Z = RingSpec::Z();
    PresentedComplex M = PresentedComplex::cyclic_at(Z, 0, Rat(2));
    auto R = ce_resolution_presented(M, 6);
    REQUIRE(!R.columns.empty());
    // exactness: H(TP) = Z/2 in degree 0 only (through the valid window)
    Bicomplex B;
    B.ring = Z;
    for (int p = 0; p < (int)R.columns.size(); ++p) {
        const FinComplex& C = R.columns[p];
        for (int q = C.lo; q <= C.hi; ++q) {
            if (C.rank(q) == 0) continue;
            B.ranks[{p, q}] = C.rank(q);
            if (C.rank(q - 1) > 0) B.vert[{p, q}] = C.diff(q);
            if (p >= 1 && R.columns[p - 1].rank(q) > 0 && R.eps[p].count(q))
                B.horiz[{p, q}] = R.eps[p].at(q).scaled(Rat(q % 2 ? -1 : 1));
        }
    }
    CHECK(B.valid());
    FilteredComplex T = total_complex(B);
    CHECK(T.valid());
    GradedHomology H = homology(T.total);
    CHECK(H.at(0, Z).same_iso_class(ModulePresentation::cyclic(Z, Rat(2))));
    for (int n = 1; n <= (int)R.columns.size() - 2; ++n) CHECK(H.at(n, Z).is_trivial());
}

TEST_CASE("moore resolution over E[y]: the divided-power column pattern") {
    RingSpec F2 = RingSpec::Fp(2);
    auto A = corpus::exterior_algebra(F2, {1});
    DGModule M = trivial_module(A, Side::Left);
    auto R = moore_resolution(M, 5);
    REQUIRE((int)R.columns.size() == 6);
    for (int p = 0; p < 6; ++p) {
        // Q_p is one-dimensional, concentrated in internal degree p
        CHECK(R.Q[p].rank(p) == 1);
        int total = 0;
        for (int n = R.Q[p].lo; n <= R.Q[p].hi; ++n) total += R.Q[p].rank(n);
        CHECK(total == 1);
    }
    Bicomplex B = to_bicomplex(R);
    CHECK(B.valid());
    auto rm = moore_resolution_map(R);
    rm.alpha.check_commutes();
    CHECK(validate_split(rm.X).ok());
    CHECK(classify(rm.X) == SplitClass::Distinguished);  // zero differential on generators here
    CHECK(is_resolution(rm, 4));
    CHECK(check_filtration(rm.X).q_split);
    CHECK(check_filtration(rm.X).classification == "q-split");
}

TEST_CASE("moore resolution with A = R reduces to ce") {
    RingSpec Z = RingSpec::Z();
    FinComplex M = scalar_chain(Z, 0, 1, 2);
    auto ce = ce_resolution(M, 3);
    AlgebraPtr R = trivial_algebra(Z);
    DGModule Mm;
    Mm.algebra = R;
    Mm.side = Side::Left;
    Mm.carrier = M;
    auto mo = moore_resolution(Mm, 3);
    REQUIRE(ce.columns.size() == mo.columns.size());
    for (size_t p = 0; p < ce.columns.size(); ++p) {
        for (int n = -2; n <= 4; ++n) CHECK(ce.column_carrier(p).rank(n) == mo.column_carrier(p).rank(n));
    }
}

TEST_CASE("moore resolution over the rank-2 integral DGA") {
    auto A = corpus::z_rank2_dga();
    // M = A as a module over itself
    DGModule M = free_module(A, sphere(RingSpec::Z(), 0));
    auto R = moore_resolution(M, 3);
    REQUIRE(!R.columns.empty());
    CHECK(to_bicomplex(R).valid());
    auto rm = moore_resolution_map(R);
    rm.alpha.check_commutes();
    CHECK(validate_split(rm.X).ok());
    CHECK(is_resolution(rm, (int)R.columns.size() - 2));
}

TEST_CASE("split extension E^1 edge: X^alpha ends in H(M)") {
    // alpha = 0 from an empty-ish X gives E^1_{-1,q} = H_q(M)
    RingSpec Z = RingSpec::Z();
    auto A = trivial_algebra(Z);
    DGModule M;
    M.algebra = A;
    M.side = Side::Left;
    M.carrier = scalar_chain(Z, 0, 1, 2);
    ResolutionMap rm;
    rm.X.A = A;
    rm.M = M;
    SplitRealization re = realize(rm.X);
    rm.alpha = ChainMap(re.filtered.total, M.carrier);
    FilteredComplex F = split_extension(rm);
    REQUIRE(F.valid());
    auto pages = spectral_sequence(F, 1);
    // E^1_{-1, q} X^alpha = H_q(M): the only block at filtration -1,
    // degree n of X^alpha corresponds to H_{n+1}(M)
    CHECK(pages[1].at(-1, 0) != nullptr);
    CHECK(pages[1].at(-1, 0)->same_iso_class(ModulePresentation::cyclic(Z, Rat(2))));
}

TEST_CASE("page property: E^{r+1} is the homology of E^r") {
    RingSpec F2 = RingSpec::Fp(2);
    auto A = corpus::exterior_algebra(F2, {1});
    DGModule M = trivial_module(A, Side::Left);
    auto R = moore_resolution(M, 4);
    FilteredComplex T = total_complex(to_bicomplex(R));
    auto pages = spectral_sequence(T, 3);
    for (int r = 0; r + 1 <= 3; ++r)
        for (auto& [pq, pres] : pages[r + 1].modules) {
            auto [p, q] = pq;
            ModulePresentation h = page_homology_at(pages[r], p, q, F2);
            CHECK(h.same_iso_class(pres));
        }
}

#include "dgmod/bar.hpp"

TEST_CASE("bar construction: split validity, witnesses, classification") {
    RingSpec F2 = RingSpec::Fp(2);
    {
        // A = R: B(R,R,M) = M in filtration 0
        RingSpec Z = RingSpec::Z();
        auto R = trivial_algebra(Z);
        DGModule M;
        M.algebra = R;
        M.side = Side::Left;
        M.carrier = scalar_chain(Z, 0, 1, 2);
        auto B = bar_resolution(R, M, 4, 8);
        CHECK(validate_split(B.rm.X).ok());
        int total_gens = 0;
        for (auto& [pq, c] : B.rm.X.barx) {
            CHECK(pq.first == 0);
            total_gens += c;
        }
        CHECK(total_gens == 2);
        CHECK(verify_bar_witnesses(B, 8));
    }
    {
        auto A = corpus::exterior_algebra(F2, {1});
        DGModule M = trivial_module(A, Side::Left);
        auto B = bar_resolution(A, M, 6, 8);
        CHECK(validate_split(B.rm.X).ok());
        CHECK(classify(B.rm.X) == SplitClass::Distinguished);  // d_A = 0 here, so even cell-like
        for (int p = 0; p <= 6; ++p) CHECK(B.rm.X.bar_rank(p, p) == 1);  // (JA)^{(x)p} rank 1
        B.rm.alpha.check_commutes();
        CHECK(verify_bar_witnesses(B, 6));
        CHECK(check_filtration(B.rm.X).r_split);
        CHECK(check_filtration(B.rm.X).classification == "r-split");
        CHECK(is_resolution(B.rm, 5));
    }
    {
        // nonzero differential on A: the bar output is general, not cell-like
        auto P = corpus::truncated_polynomial(F2, {2}, 6);
        auto D = corpus::disk_algebra(F2, 1);
        auto A = corpus::tensor_dga(P, D);
        DGModule M = trivial_module(A, Side::Left);
        auto B = bar_resolution(A, M, 3, 6);
        CHECK(validate_split(B.rm.X).ok());
        CHECK(classify(B.rm.X) == SplitClass::General);
        B.rm.alpha.check_commutes();
        CHECK(verify_bar_witnesses(B, 3));
        CHECK(check_filtration(B.rm.X).r_split);
    }
    {
        // signs matter over Z: exterior generator in odd degree
        auto A = corpus::exterior_algebra(RingSpec::Z(), {1});
        DGModule M = trivial_module(A, Side::Left);
        auto B = bar_resolution(A, M, 5, 6);
        CHECK(validate_split(B.rm.X).ok());
        B.rm.alpha.check_commutes();
        CHECK(verify_bar_witnesses(B, 5));
        CHECK(is_resolution(B.rm, 4));
    }
    {
        // rank-2 integral DGA with nonzero differential
        auto A = corpus::z_rank2_dga();
        DGModule M = free_module(A, sphere(RingSpec::Z(), 0));
        auto B = bar_resolution(A, M, 4, 6);
        CHECK(validate_split(B.rm.X).ok());
        B.rm.alpha.check_commutes();
        CHECK(verify_bar_witnesses(B, 4));
    }
}

#include "dgmod/koszul.hpp"

TEST_CASE("distinguished resolution lifts the derived HA resolution") {
    RingSpec F2 = RingSpec::Fp(2);
    {
        // A with zero differential, M = A: X = A in filtration 0
        auto A = corpus::exterior_algebra(F2, {1});
        DGModule M = free_module(A, sphere(F2, 0));
        auto HA = std::make_shared<GradedRing>(homology_ring(A));
        auto hares = derive_hares(HA, M, 4, 0, 2);
        CHECK(verify_graded_resolution(hares, 2, 0, 1));
        auto rm = distinguished_resolution(M, hares);
        CHECK(validate_split(rm.X).ok());
        CHECK(classify(rm.X) == SplitClass::Distinguished);
        rm.alpha.check_commutes();
        CHECK(rm.X.pmax() == 0);
        CHECK(is_resolution(rm, 3));
        CHECK(is_quasi_iso(rm.alpha));
    }
    {
        // A = E[y] over F2, M = F2: recovers the one-generator-per-column pattern
        auto A = corpus::exterior_algebra(F2, {1});
        DGModule M = trivial_module(A, Side::Left);
        auto HA = std::make_shared<GradedRing>(homology_ring(A));
        auto hares = derive_hares(HA, M, 6, 0, 8);
        auto rm = distinguished_resolution(M, hares);
        CHECK(validate_split(rm.X).ok());
        CHECK(classify(rm.X) == SplitClass::Distinguished);
        rm.alpha.check_commutes();
        for (int p = 0; p <= 6; ++p) CHECK(rm.X.bar_rank(p, p) == 1);
        CHECK(is_resolution(rm, 5));
    }
    {
        // A with nonzero differential and HA = F2[x]-like in one generator:
        // F2[x] (x) disk algebra
        auto P = corpus::truncated_polynomial(F2, {2}, 8);
        auto D = corpus::disk_algebra(F2, 1);
        auto A = corpus::tensor_dga(P, D);
        DGModule M = trivial_module(A, Side::Left);
        auto HA = std::make_shared<GradedRing>(homology_ring(A));
        auto hares = derive_hares(HA, M, 3, 0, 7);
        auto rm = distinguished_resolution(M, hares);
        CHECK(validate_split(rm.X).ok());
        rm.alpha.check_commutes();
        CHECK(is_resolution(rm, 2, 7));
        CHECK(is_quasi_iso_window(rm.alpha, 0, 2));
    }
}

TEST_CASE("comparison of resolutions: identity and cross-construction") {
    RingSpec F2 = RingSpec::Fp(2);
    auto A = corpus::exterior_algebra(F2, {1});
    DGModule M = trivial_module(A, Side::Left);
    auto HA = std::make_shared<GradedRing>(homology_ring(A));
    auto hares = derive_hares(HA, M, 4, 0, 6);
    auto rm = distinguished_resolution(M, hares);
    {
        auto cmp = compare_resolutions(rm, rm, ChainMap::identity(M.carrier));
        CHECK(verify_comparison(rm, rm, ChainMap::identity(M.carrier), cmp));
    }
    {
        // against the bar resolution of the same module
        auto B = bar_resolution(A, M, 6, 8);
        auto cmp = compare_resolutions(rm, B.rm, ChainMap::identity(M.carrier));
        CHECK(verify_comparison(rm, B.rm, ChainMap::identity(M.carrier), cmp));
        // H(K) is an isomorphism in the window
        CHECK(is_quasi_iso_window(cmp.K, 0, 4));
    }
}

TEST_CASE("koszul resolution") {
    RingSpec F2 = RingSpec::Fp(2);
    {
        // one generator, zero-differential polynomial HA
        auto A = corpus::truncated_polynomial(F2, {2}, 8);
        auto Acup = std::make_shared<DGAlgebra>(*A);
        Acup->cup1 = std::map<std::array<int, 4>, Combo>{};
        std::vector<std::pair<int, Matrix>> cycles = {{2, Matrix::identity(F2, 1)}};
        auto K = koszul_resolution(Acup, cycles, 3, 7);
        CHECK(validate_split(K.rm.X).ok());
        CHECK(classify(K.rm.X) == SplitClass::Distinguished);
        K.rm.alpha.check_commutes();
        CHECK(is_resolution(K.rm, 1, 7));
        CHECK(is_quasi_iso_window(K.rm.alpha, 0, 6));
        auto HA = homology_ring(Acup);
        CHECK(koszul_e1_matches(K, HA, cycles));
    }
    {
        // two generators over Z, signs matter
        RingSpec Z = RingSpec::Z();
        auto A = corpus::truncated_polynomial(Z, {2, 2}, 8);
        auto Acup = std::make_shared<DGAlgebra>(*A);
        Acup->cup1 = std::map<std::array<int, 4>, Combo>{};
        Matrix x1(Z, 2, 1), x2(Z, 2, 1);
        x1.at(0, 0) = 1;
        x2.at(1, 0) = 1;
        std::vector<std::pair<int, Matrix>> cycles = {{2, x1}, {2, x2}};
        auto K = koszul_resolution(Acup, cycles, 3, 7);
        CHECK(validate_split(K.rm.X).ok());
        K.rm.alpha.check_commutes();
        CHECK(is_resolution(K.rm, 1, 7));
        CHECK(is_quasi_iso_window(K.rm.alpha, 0, 6));
        // d(y1 y2) has exactly the two l(U) = 1 terms with opposite signs
        CHECK(K.signs.at({1u, 2u}) == Rat(1));
        CHECK(K.signs.at({2u, 1u}) == Rat(-1));
    }
    {
        // three generators with nontrivial cup1 over F2
        auto A = corpus::truncated_polynomial(F2, {1, 1, 1}, 7, true);
        Matrix x1(F2, 3, 1), x2(F2, 3, 1), x3(F2, 3, 1);
        x1.at(0, 0) = 1;
        x2.at(1, 0) = 1;
        x3.at(2, 0) = 1;
        std::vector<std::pair<int, Matrix>> cycles = {{1, x1}, {1, x2}, {1, x3}};
        auto K = koszul_resolution(A, cycles, 3, 6);
        CHECK(validate_split(K.rm.X).ok());
        K.rm.alpha.check_commutes();
        CHECK(is_resolution(K.rm, 2, 6));
        // the cup1 really contributes: some a_U with l(U) = 2 is nonzero
        bool has_len2 = false;
        for (auto& [U, dz] : K.aU) {
            int len = __builtin_popcount(U);
            if (len == 2 && !dz.second.is_zero()) has_len2 = true;
        }
        CHECK(has_len2);
        auto HA = homology_ring(A);
        CHECK(koszul_e1_matches(K, HA, cycles));
    }
}
