#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "tumsim/sparse.hpp"
#include "tumsim/errors.hpp"

using namespace tumsim;
using Catch::Approx;

TEST_CASE("finalize sums duplicates", "[sparse]") {
    TripletBuffer b(1, 1);
    b.add(0, 0, 1.0);
    b.add(0, 0, 2.0);
    SparseMatrix m = finalize(b);
    REQUIRE(m.nnz() == 1);
    REQUIRE(m.values[0] == Approx(3.0));
}

TEST_CASE("finalize of an empty buffer", "[sparse]") {
    TripletBuffer b(4, 4);
    SparseMatrix m = finalize(b);
    REQUIRE(m.nnz() == 0);
    REQUIRE(m.row_offsets == std::vector<int>{0, 0, 0, 0, 0});
}

TEST_CASE("finalize dense pattern of the identity", "[sparse]") {
    TripletBuffer b(2, 2);
    b.add(1, 1, 1.0);
    b.add(0, 0, 1.0);
    SparseMatrix m = finalize(b);
    REQUIRE(m.row_offsets == std::vector<int>{0, 1, 2});
    REQUIRE(m.col_indices == std::vector<int>{0, 1});
    REQUIRE(m.values == std::vector<double>{1.0, 1.0});
}

TEST_CASE("finalize is order independent", "[sparse]") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> idx(0, 9);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<TripletBuffer::Entry> entries;
    for (int i = 0; i < 300; ++i) entries.push_back({idx(rng), idx(rng), val(rng)});

    TripletBuffer a(10, 10), b(10, 10);
    a.entries = entries;
    std::shuffle(entries.begin(), entries.end(), rng);
    b.entries = entries;

    SparseMatrix ma = finalize(a), mb = finalize(b);
    REQUIRE(ma.col_indices == mb.col_indices);
    REQUIRE(ma.row_offsets == mb.row_offsets);
    REQUIRE(ma.values == mb.values);  // bitwise
}

TEST_CASE("triplet out of bounds", "[sparse]") {
    TripletBuffer b(2, 2);
    REQUIRE_THROWS_AS(b.add(2, 0, 1.0), SolverError);
}

TEST_CASE("direct solve identity and a 2x2 system", "[sparse]") {
    SECTION("identity") {
        TripletBuffer b(3, 3);
        for (int i = 0; i < 3; ++i) b.add(i, i, 1.0);
        auto x = direct_solve(finalize(b), {1.0, -2.0, 5.0});
        REQUIRE(x == std::vector<double>{1.0, -2.0, 5.0});
    }
    SECTION("hand-eliminated 2x2") {
        TripletBuffer b(2, 2);
        b.add(0, 0, 2.0);
        b.add(0, 1, 1.0);
        b.add(1, 0, 1.0);
        b.add(1, 1, 3.0);
        auto x = direct_solve(finalize(b), {3.0, 4.0});
        REQUIRE(x[0] == Approx(1.0).epsilon(1e-12));
        REQUIRE(x[1] == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("singular matrix raises", "[sparse]") {
    TripletBuffer b(2, 2);
    b.add(0, 0, 1.0);
    b.add(0, 1, 1.0);
    b.add(1, 0, 1.0);
    b.add(1, 1, 1.0);
    REQUIRE_THROWS_AS(direct_solve(finalize(b), {1.0, 2.0}), SolverError);
}

TEST_CASE("residual bound on random well-conditioned systems", "[sparse]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 40;
        TripletBuffer b(n, n);
        for (int i = 0; i < n; ++i) {
            b.add(i, i, 8.0 + val(rng));
            for (int k = 0; k < 4; ++k) {
                int j = (int)(rng() % n);
                if (j != i) b.add(i, j, val(rng));
            }
        }
        SparseMatrix A = finalize(b);
        std::vector<double> rhs(n);
        for (double& v : rhs) v = val(rng);
        auto x = direct_solve(A, rhs);
        auto Ax = A.multiply(x);
        double rn = 0.0, bn = 0.0;
        for (int i = 0; i < n; ++i) {
            rn += (Ax[i] - rhs[i]) * (Ax[i] - rhs[i]);
            bn += rhs[i] * rhs[i];
        }
        REQUIRE(std::sqrt(rn) <= 1e-10 * std::sqrt(bn));
    }
}
