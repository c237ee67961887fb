#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "dgmod/presentation.hpp"

using namespace dgmod;

namespace {

// test-only determinant (fraction-free expansion via rational elimination)
Rat det(const Matrix& m) {
    REQUIRE(m.rows == m.cols);
    Matrix A = m;
    Rat d = 1;
    for (int j = 0; j < A.cols; ++j) {
        int pi = -1;
        for (int i = j; i < A.rows; ++i)
            if (A.at(i, j) != 0) { pi = i; break; }
        if (pi < 0) return Rat(0);
        if (pi != j) {
            for (int k = 0; k < A.cols; ++k) std::swap(A.at(j, k), A.at(pi, k));
            d = -d;
        }
        d *= A.at(j, j);
        Rat inv = Rat(1) / A.at(j, j);
        for (int i = j + 1; i < A.rows; ++i) {
            Rat f = A.at(i, j) * inv;
            for (int k = j; k < A.cols; ++k) A.at(i, k) -= f * A.at(j, k);
        }
    }
    return d;
}

Matrix random_int_matrix(std::mt19937_64& rng, RingSpec ring, int rows, int cols, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    Matrix m(ring, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.set(i, j, Rat(dist(rng)));
    return m;
}

// enumerate the column span of m over Z/n by brute force
std::set<std::vector<Int>> enumerate_column_span(const Matrix& m) {
    const Int n = m.ring.modulus;
    std::set<std::vector<Int>> span;
    std::vector<Int> coef(m.cols, 0);
    while (true) {
        std::vector<Int> v(m.rows, 0);
        for (int j = 0; j < m.cols; ++j)
            for (int i = 0; i < m.rows; ++i) v[i] = (v[i] + coef[j] * rat_num(m.at(i, j))) % n;
        span.insert(v);
        int k = 0;
        while (k < m.cols && ++coef[k] == n) coef[k++] = 0;
        if (k == m.cols) break;
    }
    return span;
}

}  // namespace

TEST_CASE("smith normal form: pinned examples") {
    RingSpec Z = RingSpec::Z();
    {
        Matrix m = Matrix::from_rows(Z, {{2, 0}, {0, 3}});
        auto s = smith_normal_form(m);
        CHECK(s.D == Matrix::from_rows(Z, {{1, 0}, {0, 6}}));
        CHECK(s.U * m * s.V == s.D);
    }
    {
        Matrix m(Z, 0, 0);
        auto s = smith_normal_form(m);
        CHECK(s.D.rows == 0);
        CHECK(s.D.cols == 0);
    }
    {
        Matrix m = Matrix::from_rows(Z, {{2}});
        auto s = smith_normal_form(m);
        CHECK(s.D == Matrix::from_rows(Z, {{2}}));
    }
    CHECK_THROWS_AS(smith_normal_form(Matrix(RingSpec::Zmod(4), 1, 1)), UnsupportedRing);
}

TEST_CASE("smith normal form: random property check") {
    RingSpec Z = RingSpec::Z();
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<int> shape(0, 8);
    for (int trial = 0; trial < 200; ++trial) {
        int r = shape(rng), c = shape(rng);
        Matrix m = random_int_matrix(rng, Z, r, c, -9, 9);
        auto s = smith_normal_form(m);
        CHECK(s.U * m * s.V == s.D);
        if (r > 0) {
            Rat du = det(s.U);
            CHECK((du == 1 || du == -1));
        }
        if (c > 0) {
            Rat dv = det(s.V);
            CHECK((dv == 1 || dv == -1));
        }
        int dlen = std::min(r, c);
        for (int i = 0; i < dlen; ++i) {
            for (int j = 0; j < dlen; ++j)
                if (i != j) CHECK(s.D.at(i, j) == 0);
            CHECK(s.D.at(i, i) >= 0);
        }
        for (int i = 0; i + 1 < dlen; ++i) {
            Int a = rat_num(s.D.at(i, i)), b = rat_num(s.D.at(i + 1, i + 1));
            if (a == 0) CHECK(b == 0);
            else CHECK(b % a == 0);
        }
    }
}

TEST_CASE("howell form over Z/4") {
    RingSpec R4 = RingSpec::Zmod(4);
    {
        Matrix m = Matrix::from_rows(R4, {{2}});
        CHECK(howell_form(m) == Matrix::from_rows(R4, {{2}}));
    }
    {
        // enumerated oracle: span of {(2a, 2a+2b)} over Z/4 has order 4
        Matrix m = Matrix::from_rows(R4, {{2, 2}, {0, 2}});
        Matrix h = howell_form(m);
        auto span_in = enumerate_column_span(m.transposed());
        auto span_out = enumerate_column_span(h.transposed());
        CHECK(span_in.size() == 4);
        CHECK(span_in == span_out);
    }
    {
        // a span of order 8, same oracle
        Matrix m = Matrix::from_rows(R4, {{1, 2}, {0, 2}});
        Matrix h = howell_form(m);
        auto span_in = enumerate_column_span(m.transposed());
        auto span_out = enumerate_column_span(h.transposed());
        CHECK(span_in.size() == 8);
        CHECK(span_in == span_out);
    }
    {
        Matrix m(R4, 2, 3);
        Matrix h = howell_form(m);
        CHECK(h.is_zero());
    }
    CHECK_THROWS_AS(howell_form(Matrix(RingSpec::Z(), 1, 1)), UnsupportedRing);
}

TEST_CASE("howell form is canonical for the row span") {
    RingSpec R4 = RingSpec::Zmod(4);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        Matrix m = random_int_matrix(rng, R4, 3, 2, 0, 3);
        Matrix h = howell_form(m);
        CHECK(enumerate_column_span(m.transposed()) == enumerate_column_span(h.transposed()));
        // canonical: Howell of the Howell form is itself
        CHECK(howell_form(h) == h);
    }
}

TEST_CASE("solve: pinned examples") {
    {
        RingSpec R4 = RingSpec::Zmod(4);
        Matrix m = Matrix::from_rows(R4, {{2}});
        Matrix b = Matrix::from_rows(R4, {{1}});
        CHECK(!solve(m, b).has_value());
        // oracle: enumerate x in Z/4
        for (Int x = 0; x < 4; ++x) CHECK((2 * x) % 4 != 1);
    }
    {
        RingSpec Z = RingSpec::Z();
        auto x = solve(Matrix::from_rows(Z, {{1}}), Matrix::from_rows(Z, {{7}}));
        REQUIRE(x.has_value());
        CHECK(x->at(0, 0) == 7);
    }
    {
        RingSpec Z = RingSpec::Z();
        auto x = solve(Matrix::from_rows(Z, {{0}}), Matrix::from_rows(Z, {{0}}));
        REQUIRE(x.has_value());
        CHECK(x->at(0, 0) == 0);  // canonical free-parameter choice
    }
    {
        RingSpec Z = RingSpec::Z();
        Matrix m = Matrix::from_rows(Z, {{2}});
        CHECK(!solve(m, Matrix::from_rows(Z, {{3}})).has_value());
        CHECK_THROWS_AS(solve(m, Matrix(Z, 2, 1)), ShapeError);
    }
}

TEST_CASE("solve: random verification and exhaustive no-solution certificates") {
    std::mt19937_64 rng(99);
    std::vector<RingSpec> rings = {RingSpec::Z(), RingSpec::Zmod(4), RingSpec::Zmod(6),
                                   RingSpec::Fp(5), RingSpec::Q()};
    std::uniform_int_distribution<int> shape(1, 5);
    for (auto ring : rings) {
        for (int trial = 0; trial < 40; ++trial) {
            int r = shape(rng), c = shape(rng);
            Matrix m = random_int_matrix(rng, ring, r, c, -4, 4);
            Matrix b = random_int_matrix(rng, ring, r, 1, -4, 4);
            auto x = solve(m, b);
            if (x) {
                CHECK(m * *x == b);
            } else if (ring.kind == RingKind::IntegersMod && c <= 5) {
                // exhaustive search confirms infeasibility
                Int n = ring.modulus;
                std::vector<Int> coef(c, 0);
                bool found = false;
                while (!found) {
                    bool ok = true;
                    for (int i = 0; i < r && ok; ++i) {
                        Int acc = 0;
                        for (int j = 0; j < c; ++j) acc += coef[j] * rat_num(m.at(i, j));
                        if ((acc - rat_num(b.at(i, 0))) % n != 0) ok = false;
                    }
                    if (ok) found = true;
                    int k = 0;
                    while (k < c && ++coef[k] == n) coef[k++] = 0;
                    if (k == c) break;
                }
                CHECK(!found);
            }
        }
    }
}

TEST_CASE("kernel: pinned examples") {
    {
        RingSpec R4 = RingSpec::Zmod(4);
        Matrix K = kernel(Matrix::from_rows(R4, {{2}}));
        // kernel of multiplication by 2 on Z/4 is generated by 2
        REQUIRE(K.cols == 1);
        CHECK(K.at(0, 0) == 2);
    }
    {
        Matrix K = kernel(Matrix::identity(RingSpec::Q(), 3));
        CHECK(K.cols == 0);
    }
    {
        RingSpec Z = RingSpec::Z();
        Matrix K = kernel(Matrix(Z, 1, 2));  // zero map Z^2 -> Z
        CHECK(K.cols == 2);
    }
}

TEST_CASE("kernel: random verification and exhaustive coverage over Z/n") {
    std::mt19937_64 rng(123);
    std::vector<RingSpec> rings = {RingSpec::Z(), RingSpec::Zmod(4), RingSpec::Zmod(8),
                                   RingSpec::Fp(2), RingSpec::Q()};
    std::uniform_int_distribution<int> shape(1, 4);
    for (auto ring : rings) {
        for (int trial = 0; trial < 30; ++trial) {
            int r = shape(rng), c = shape(rng);
            Matrix m = random_int_matrix(rng, ring, r, c, -3, 3);
            Matrix K = kernel(m);
            CHECK((m * K).is_zero());
            if (ring.kind == RingKind::IntegersMod && c <= 4) {
                // every exhaustively found kernel element lies in span(K)
                Int n = ring.modulus;
                std::vector<Int> coef(c, 0);
                while (true) {
                    bool in_ker = true;
                    for (int i = 0; i < r && in_ker; ++i) {
                        Int acc = 0;
                        for (int j = 0; j < c; ++j) acc += coef[j] * rat_num(m.at(i, j));
                        if (acc % n != 0) in_ker = false;
                    }
                    if (in_ker) {
                        Matrix v(ring, c, 1);
                        for (int j = 0; j < c; ++j) v.set(j, 0, Rat(coef[j]));
                        CHECK(in_column_span(K, v));
                    }
                    int k = 0;
                    while (k < c && ++coef[k] == n) coef[k++] = 0;
                    if (k == c) break;
                }
            }
        }
    }
}

TEST_CASE("subquotient: pinned examples") {
    RingSpec Z = RingSpec::Z();
    {
        Matrix z = Matrix::identity(Z, 1);
        Matrix b = Matrix::from_rows(Z, {{2}});
        auto p = subquotient(z, b);
        CHECK(p.torsion == std::vector<Int>{2});
        CHECK(p.free_rank == 0);
    }
    {
        Matrix z = Matrix::from_rows(Z, {{3, 0}, {0, 2}});
        auto p = subquotient(z, z);
        CHECK(p.is_trivial());
    }
    {
        RingSpec R4 = RingSpec::Zmod(4);
        Matrix z = Matrix::from_rows(R4, {{2}});
        auto p = subquotient(z, z);
        CHECK(p.is_trivial());
        CHECK(p.cardinality() == 1);
    }
    {
        Matrix z = Matrix::from_rows(Z, {{2}});
        Matrix b = Matrix::from_rows(Z, {{3}});
        CHECK_THROWS_AS(subquotient(z, b), NotASubmodule);
    }
}

TEST_CASE("invariant factors match cardinality counting over Z/4") {
    RingSpec R4 = RingSpec::Zmod(4);
    // all presentations with <= 3 generators and <= 2 relation columns,
    // sampled exhaustively for 1 generator and randomly above
    for (Int a = 0; a < 4; ++a) {
        Matrix rel(R4, 1, 1);
        rel.set(0, 0, Rat(a));
        ModulePresentation p(R4, 1, rel);
        auto span = enumerate_column_span(rel);
        CHECK(p.cardinality() == Int(4) / Int(span.size()));
    }
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 80; ++trial) {
        std::uniform_int_distribution<int> gd(1, 3), cd(0, 3);
        int g = gd(rng), c = cd(rng);
        Matrix rel = random_int_matrix(rng, R4, g, c, 0, 3);
        ModulePresentation p(R4, g, rel);
        Int ambient = 1;
        for (int i = 0; i < g; ++i) ambient *= 4;
        if (c == 0) {
            CHECK(p.cardinality() == ambient);
        } else {
            auto span = enumerate_column_span(rel);
            CHECK(p.cardinality() == ambient / Int(span.size()));
        }
    }
}

TEST_CASE("hermite form is canonical") {
    RingSpec Z = RingSpec::Z();
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 40; ++trial) {
        Matrix m = random_int_matrix(rng, Z, 4, 3, -5, 5);
        Matrix h = hermite_rows(m);
        CHECK(hermite_rows(h) == h);
        // row span preserved: each row of m solvable over h and vice versa
        CHECK(columns_in_span(h.transposed(), m.transposed()));
        CHECK(columns_in_span(m.transposed(), h.transposed()));
    }
}
