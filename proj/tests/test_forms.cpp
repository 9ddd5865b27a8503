#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conglab/forms.hpp"
#include "oracles.hpp"

using namespace conglab;
using namespace conglab::forms;
using qseries::equal_on_common_window;

TEST_CASE("dimension formula") {
    CHECK(dim_mk(0) == 1);
    CHECK(dim_mk(2) == 0);
    CHECK(dim_mk(4) == 1);
    CHECK(dim_mk(12) == 2);
    CHECK(dim_mk(14) == 1);
    CHECK(dim_mk(26) == 2);
    CHECK(dim_mk(24) == 3);
    CHECK(dim_mk(3) == 0);
    CHECK(dim_mk(-4) == 0);
}

TEST_CASE("eisenstein series coefficients") {
    auto e4 = eisenstein(4, 30);
    auto e6 = eisenstein(6, 30);
    CHECK(e4.coeff(0) == 1);
    CHECK(e4.coeff(1) == 240);
    CHECK(e6.coeff(2) == -16632); // -504 * sigma_5(2)
    for (i64 n = 1; n < 30; ++n) {
        CHECK(e4.coeff(n) == 240 * oracles::sigma(3, n));
        CHECK(e6.coeff(n) == -504 * oracles::sigma(5, n));
    }
}

TEST_CASE("delta from the pentagonal pipeline matches the sparse-product oracle") {
    const int P = 60;
    auto d = delta(P);
    auto tau = oracles::tau_by_sparse_products(P);
    CHECK(d.coeff(0) == 0);
    CHECK(d.coeff(1) == 1);
    CHECK(d.coeff(2) == -24);
    CHECK(d.coeff(3) == 252);
    for (i64 n = 1; n < P; ++n) CHECK(d.coeff(n) == tau[static_cast<size_t>(n)]);
}

TEST_CASE("delta equals (E4^3 - E6^2)/1728 exactly") {
    const i64 P = 1000;
    auto d = delta(P);
    auto e4 = eisenstein(4, P);
    auto e6 = eisenstein(6, P);
    auto e43 = qseries::mul(qseries::mul(e4, e4), e4);
    auto e62 = qseries::mul(e6, e6);
    auto num = qseries::sub(e43, e62);
    for (i64 n = 0; n < num.precision(); ++n) {
        mpz_class q = num.coeff(n);
        CHECK(q % 1728 == 0);
        CHECK(q / 1728 == d.coeff(n));
    }
}

TEST_CASE("delta mod ell pipeline agrees with exact reduction") {
    const i64 P = 500;
    auto exact = delta(P);
    for (u64 ell : {3ull, 5ull, 7ull, 11ull, 13ull})
        CHECK(equal_on_common_window(qseries::reduce_mod(exact, ell), delta_mod(ell, P)));
}

TEST_CASE("partition recurrence against enumeration and the eta pipeline") {
    auto p1000 = partition_mod(1000, 30);
    auto dp = oracles::partitions_by_enumeration(30);
    for (int n = 0; n <= 30; ++n) CHECK(p1000[static_cast<size_t>(n)] == mpz_class(dp[static_cast<size_t>(n)] % 1000));
    std::vector<u64> first10 = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30};
    for (int n = 0; n < 10; ++n) CHECK(p1000[static_cast<size_t>(n)] == first10[static_cast<size_t>(n)]);

    CHECK(partition_mod(5, 4)[4] == 0);   // p(4) = 5
    CHECK(partition_mod(11, 6)[6] == 0);  // p(6) = 11

    // agreement with invert(eta) after the grid shift, n <= 1000
    const int NMAX = 1000;
    auto pm = partition_mod(13, NMAX);
    auto etainv = qseries::reduce_mod(eta_power(-1, 24 * NMAX + 1), 13);
    for (int n = 0; n <= NMAX; ++n) CHECK(pm[static_cast<size_t>(n)] == etainv.coeff(24 * n - 1));

    // exact values stay exact
    auto pe = partition_exact(50);
    CHECK(pe[50] == mpz_class("204226"));
}

TEST_CASE("level-one bases are echelonized with the expected pivots") {
    {
        auto b = level_one_basis(0, 7, 10);
        CHECK(b.dim == 1);
        CHECK(b.basis[0].coeff(0) == 1);
        for (i64 n = 1; n < 10; ++n) CHECK(b.basis[0].coeff(n) == 0);
    }
    {
        auto b = level_one_basis(12, 7, 24);
        CHECK(b.dim == 2);
        CHECK(b.basis[0].coeff(0) == 1);
        CHECK(b.basis[0].coeff(1) == 0);
        CHECK(b.basis[1].coeff(0) == 0);
        CHECK(b.basis[1].coeff(1) == 1);
        // second element is the reduction of the cusp form: tau mod 7
        auto d = delta_mod(7, 24);
        CHECK(equal_on_common_window(b.basis[1], d));
    }
    {
        auto b = level_one_basis(26, 5, 30);
        CHECK(b.dim == 2);
    }
    CHECK_THROWS_AS(level_one_basis(12, 3, 24), DomainError);
    CHECK_THROWS_AS(level_one_basis(12, 7, 2), PrecisionError);
}

TEST_CASE("re-echelonizing a combination is idempotent") {
    auto b = level_one_basis(16, 11, 40);
    // f = 3 b0 + 5 b1 recovers coordinates from pivots
    auto f = qseries::add(qseries::scale(b.basis[0], u64{3}), qseries::scale(b.basis[1], u64{5}));
    CHECK(f.coeff(0) == 3);
    CHECK(f.coeff(1) == 5);
    // and the residual after subtracting the combination vanishes
    auto res = qseries::sub(qseries::sub(f, qseries::scale(b.basis[0], u64{3})), qseries::scale(b.basis[1], u64{5}));
    CHECK(res.is_identically_zero_on_window());
}

TEST_CASE("full-rank coefficient witnesses avoid p") {
    {
        auto b = level_one_basis(12, 11, 40);
        auto s = coefficient_full_rank_witness(b, 2);
        REQUIRE(s.size() == 2);
        for (i64 n : s) CHECK(n % 2 == 1);
    }
    {
        auto b = level_one_basis(16, 7, 40);
        auto s = coefficient_full_rank_witness(b, 3);
        REQUIRE(s.size() == 2);
        for (i64 n : s) CHECK(n % 3 != 0);
    }
    {
        // Weight 0 has only the constant: no index coprime to p carries a
        // nonzero coefficient, so the search must surface an error.
        auto b = level_one_basis(0, 7, 20);
        CHECK_THROWS_AS(coefficient_full_rank_witness(b, 2), DomainError);
    }
    {
        // Same obstruction whenever the reduction contains the constant
        // series, i.e. whenever k = 0 (mod ell-1): E6 = 1 mod 7 puts 1 into
        // M_12 mod 7, E4 = 1 mod 5 puts 1 into M_16 mod 5, E10 = 1 mod 11
        // into M_20 mod 11.  The failure is surfaced, never papered over.
        CHECK_THROWS_AS(coefficient_full_rank_witness(level_one_basis(12, 7, 40), 2), DomainError);
        CHECK_THROWS_AS(coefficient_full_rank_witness(level_one_basis(16, 5, 40), 3), DomainError);
        CHECK_THROWS_AS(coefficient_full_rank_witness(level_one_basis(20, 11, 60), 3), DomainError);
    }
    {
        // witness matrices over weights without the constant obstruction
        for (int k : {12, 16, 18, 22, 26}) {
            if (k % 10 == 0) continue;
            auto b = level_one_basis(k, 11, 60);
            auto s = coefficient_full_rank_witness(b, 3);
            CHECK(static_cast<int>(s.size()) == b.dim);
            for (i64 n : s) CHECK(n % 3 != 0);
        }
    }
}
