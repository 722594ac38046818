#include "spine3/lattice.hpp"
#include "spine3/qmatrix.hpp"

#include <doctest.h>

#include <random>

using namespace spine3;

TEST_CASE("rref ranks and nullspace") {
    QMatrix m = QMatrix::from_rows({
        {1, 2, 3},
        {2, 4, 6},
        {1, 0, 1},
    });
    CHECK(m.rank() == 2);
    auto ns = m.nullspace();
    REQUIRE(ns.size() == 1);
    // every kernel vector annihilates every row
    for (std::size_t r = 0; r < m.rows(); ++r)
        CHECK(dot(m.row(r), ns[0]) == 0);
}

TEST_CASE("solve picks the free-variables-zero representative") {
    QMatrix m = QMatrix::from_rows({{1, 1, 0}, {0, 0, 1}});
    auto x = m.solve({Rational(3), Rational(5)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 3);
    CHECK((*x)[1] == 0); // free variable pinned to zero
    CHECK((*x)[2] == 5);

    QMatrix bad = QMatrix::from_rows({{1, 1}, {1, 1}});
    CHECK_FALSE(bad.solve({Rational(0), Rational(1)}).has_value());
}

TEST_CASE("row space membership") {
    QMatrix m = QMatrix::from_rows({{1, 0, 1}, {0, 1, 1}});
    CHECK(m.row_space_contains({Rational(2), Rational(3), Rational(5)}));
    CHECK_FALSE(m.row_space_contains({Rational(1), Rational(0), Rational(0)}));
}

TEST_CASE("nullspace + rowspace dimensions add up on random matrices") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t rows = 1 + static_cast<std::size_t>(trial % 5);
        std::size_t cols = 1 + static_cast<std::size_t>((trial * 7) % 6);
        QMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m.at(i, j) = d(rng);
        CHECK(m.nullspace().size() + m.rank() == cols);
        CHECK(m.rowspace_basis().size() == m.rank());
    }
}

TEST_CASE("integer solve: solvable and unsolvable systems") {
    // 2x + 4y = 6 has integer solutions
    auto s = solve_integer({{2, 4}}, {Integer(6)});
    REQUIRE(s.has_value());
    CHECK(2 * (*s)[0] + 4 * (*s)[1] == 6);

    // 2x + 4y = 3 does not
    CHECK_FALSE(solve_integer({{2, 4}}, {Integer(3)}).has_value());

    // inconsistent overdetermined system
    CHECK_FALSE(solve_integer({{1, 0}, {1, 0}}, {Integer(0), Integer(1)}).has_value());

    // square unimodular-ish
    auto t = solve_integer({{1, 2}, {3, 5}}, {Integer(1), Integer(2)});
    REQUIRE(t.has_value());
    CHECK((*t)[0] + 2 * (*t)[1] == 1);
    CHECK(3 * (*t)[0] + 5 * (*t)[1] == 2);
}

TEST_CASE("integer solve: randomized consistency against constructed solutions") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t m = 1 + static_cast<std::size_t>(trial % 4);
        std::size_t n = 1 + static_cast<std::size_t>((trial * 3) % 5);
        ZMat a(m, ZVec(n));
        ZVec x0(n);
        for (auto& xi : x0)
            xi = d(rng);
        ZVec b(m, Integer(0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] = d(rng);
                b[i] += a[i][j] * x0[j];
            }
        auto s = solve_integer(a, b);
        REQUIRE(s.has_value()); // b was built from an integer point
        for (std::size_t i = 0; i < m; ++i) {
            Integer acc(0);
            for (std::size_t j = 0; j < n; ++j)
                acc += a[i][j] * (*s)[j];
            CHECK(acc == b[i]);
        }
    }
}
