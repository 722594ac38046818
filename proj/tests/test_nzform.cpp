#include "spine3/nzform.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace spine3;
using namespace spine3::testing;

TEST_CASE("w vanishes across tets and is antisymmetric") {
    auto b = build_fixture("fig8.json");
    const int nq = b.tri.num_quads();
    for (int a = 0; a < nq; ++a)
        for (int c = 0; c < nq; ++c) {
            CHECK(b.nz.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] +
                      b.nz.w[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] ==
                  0);
            if (a / 3 != c / 3)
                CHECK(b.nz.w[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] == 0);
        }
}

TEST_CASE("each w row has exactly one +1 and one -1") {
    auto b = build_fixture("fig8.json");
    for (const auto& row : b.nz.w) {
        int plus = 0, minus = 0, zero = 0;
        for (int v : row) {
            if (v == 1)
                ++plus;
            else if (v == -1)
                ++minus;
            else
                ++zero;
        }
        CHECK(plus == 1);
        CHECK(minus == 1);
        CHECK(zero == static_cast<int>(row.size()) - 2);
    }
}

TEST_CASE("identity suite passes on the fixtures") {
    for (const char* name : {"fig8.json", "s3_2tet.json", "p1.json"}) {
        auto b = build_fixture(name);
        IdentityReport rep = pairing_identities(b.tri, b.inc, b.nz);
        CHECK(rep.all_ok());
        CHECK(rep.violations.empty());
    }
}

TEST_CASE("composition values spot checks") {
    auto b = build_fixture("fig8.json");
    const int nq = b.tri.num_quads();
    auto comp = [&](int q1, int q2) {
        long s = 0;
        for (int q = 0; q < nq; ++q)
            s += static_cast<long>(b.nz.w[static_cast<std::size_t>(q1)][static_cast<std::size_t>(q)]) *
                 b.nz.w[static_cast<std::size_t>(q)][static_cast<std::size_t>(q2)];
        return s;
    };
    CHECK(comp(0, 0) == -2); // same quad
    CHECK(comp(0, 1) == 1);  // distinct quads in one tet
    CHECK(comp(0, 3) == 0);  // quads of different tets
}

TEST_CASE("chain analysis: exactness and isotropy") {
    for (const char* name : {"fig8.json", "s3_2tet.json", "p1.json"}) {
        auto b = build_fixture(name);
        ExactnessReport ex = chain_analysis(b.tri, b.inc, b.nz);
        CHECK(ex.BA_zero);
        CHECK(ex.im_A_eq_ker_B);
        CHECK(ex.B_surjective);
        CHECK(ex.B_star_injective);
        CHECK(ex.AstarBstar_zero);
        CHECK(ex.ker_Astar_eq_im_Bstar);
        CHECK(ex.isotropic);
        CHECK(ex.rank_A + ex.dim_ker_A == ex.dim_Z);
        CHECK(ex.dim_Z == 2 * b.tri.num_tets());
    }
}

TEST_CASE("fig8 rank(B) equals |V| = 1") {
    auto b = build_fixture("fig8.json");
    ExactnessReport ex = chain_analysis(b.tri, b.inc, b.nz);
    CHECK(ex.rank_B == 1);
    // both edges are loops at the single vertex, so B = (2, 2)
    ChainMaps cm = build_chain_maps(b.tri, b.inc, b.nz);
    CHECK(cm.B.at(0, 0) == 2);
    CHECK(cm.B.at(0, 1) == 2);
}

TEST_CASE("pairing is antisymmetric as a bilinear form") {
    auto b = build_fixture("s3_2tet.json");
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(-6, 6);
    const std::size_t nq = static_cast<std::size_t>(b.tri.num_quads());
    for (int trial = 0; trial < 10; ++trial) {
        QVec x(nq), y(nq);
        for (std::size_t i = 0; i < nq; ++i) {
            x[i] = d(rng);
            y[i] = d(rng);
        }
        CHECK(b.nz.pairing(x, y) == -b.nz.pairing(y, x));
    }
}

TEST_CASE("identity suite on randomized specs") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 10; ++trial) {
        auto tri = build_triangulation(random_spec(rng, 4));
        auto inc = build_incidence(tri);
        auto nz = build_forms(tri, inc);
        CHECK(pairing_identities(tri, inc, nz).all_ok());
        CHECK(chain_analysis(tri, inc, nz).all_ok());
    }
}

TEST_CASE("W rows are tangential angle structures") {
    // each u_e has zero tet sums and satisfies the edge equations
    for (const char* name : {"fig8.json", "s3_2tet.json", "p1.json"}) {
        auto b = build_fixture(name);
        for (int e = 0; e < b.tri.edge_count; ++e) {
            QVec u = edge_tas_vector(b.nz, e);
            for (int t = 0; t < b.tri.num_tets(); ++t)
                CHECK(u[static_cast<std::size_t>(3 * t)] +
                          u[static_cast<std::size_t>(3 * t + 1)] +
                          u[static_cast<std::size_t>(3 * t + 2)] ==
                      0);
            for (int ep = 0; ep < b.tri.edge_count; ++ep) {
                Rational s(0);
                for (int q = 0; q < b.tri.num_quads(); ++q)
                    s += Rational(b.inc.i[static_cast<std::size_t>(ep)][static_cast<std::size_t>(q)]) *
                         u[static_cast<std::size_t>(q)];
                CHECK(s == 0);
            }
        }
    }
}
