#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conglab/algebra.hpp"
#include "conglab/fpoly.hpp"
#include "oracles.hpp"

using namespace conglab;
using namespace conglab::algebra;

TEST_CASE("primality and factorization") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(2411));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561)); // Carmichael
    CHECK(is_prime(7758337633ull));

    auto f = factorize(2 * 2 * 3 * 5 * 5 * 97);
    Factorization expect = {{2, 2}, {3, 1}, {5, 2}, {97, 1}};
    CHECK(f == expect);
    CHECK(factorize(1).empty());
    auto big = factorize(1000003ull * 1000033ull);
    CHECK(big.size() == 2);
    CHECK(big[0].first == 1000003ull);
}

TEST_CASE("kronecker symbol") {
    CHECK(kronecker(1, 5) == 1);
    CHECK(kronecker(1, 0) == 1);
    CHECK(kronecker(2, 7) == 1);
    CHECK(kronecker(5, 13) == -1);
    // against exhaustive squares for odd primes
    for (u64 ell : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull}) {
        auto sq = oracles::squares_mod(ell);
        for (u64 a = 1; a < ell; ++a) {
            int expect = sq.count(a) ? 1 : -1;
            CHECK(kronecker(static_cast<long long>(a), static_cast<long long>(ell)) == expect);
        }
        CHECK(kronecker(static_cast<long long>(ell), static_cast<long long>(ell)) == 0);
    }
    // multiplicativity in the top argument
    for (long long a = -20; a <= 20; ++a)
        for (long long b = -20; b <= 20; ++b) CHECK(kronecker(a, 15) * kronecker(b, 15) == kronecker(a * b, 15));
}

TEST_CASE("residue arithmetic and inverses") {
    Residue a(10, 7);
    CHECK(a.value() == 3);
    CHECK((a * a.inverse()).value() == 1);
    CHECK_THROWS_AS(Residue(1, 9), DomainError);  // not prime
    CHECK_THROWS_AS(Residue(1, 2), DomainError);  // not odd
    CHECK_THROWS_AS(Residue(0, 7).inverse(), DomainError);
}

TEST_CASE("multiplicative order matches enumeration") {
    CHECK(mult_order(Residue(1, 7)) == 1);
    CHECK(mult_order(Residue(2, 5)) == 4);
    CHECK(mult_order(Residue(4, 11)) == 5);
    for (u64 ell : {5ull, 11ull, 13ull, 101ull})
        for (u64 x = 1; x < ell; ++x) CHECK(mult_order(Residue::raw(x, ell)) == oracles::order_by_enumeration(x, ell));
    CHECK_THROWS_WITH(mult_order(Residue(0, 5)), "not a unit");
}

TEST_CASE("square roots: deterministic Tonelli-Shanks") {
    CHECK(sqrt_mod(Residue(0, 11))->value() == 0);
    auto r = sqrt_mod(Residue(3, 11));
    REQUIRE(r.has_value());
    CHECK((*r * *r).value() == 3);
    CHECK(r->value() == 5);
    CHECK_FALSE(sqrt_mod(Residue(7, 11)).has_value());
    // existence iff kronecker is 0 or 1, and exactly (ell-1)/2 nonzero squares
    for (u64 ell : {5ull, 13ull, 17ull, 97ull}) {
        size_t count = 0;
        for (u64 a = 0; a < ell; ++a) {
            auto s = sqrt_mod(Residue::raw(a, ell));
            bool is_sq = kronecker(static_cast<long long>(a), static_cast<long long>(ell)) >= 0;
            CHECK(s.has_value() == is_sq);
            if (s && a) {
                ++count;
                CHECK(mul_mod(s->value(), s->value(), ell) == a);
            }
        }
        CHECK(count == (ell - 1) / 2);
    }
}

TEST_CASE("polynomial factorization over F_ell") {
    using namespace fpoly;
    // (x-1)(x-2)^2 mod 7
    Poly f = mul(mul(Poly{6, 1}, Poly{5, 1}, 7), Poly{5, 1}, 7);
    auto factors = factor(f, 7);
    REQUIRE(factors.size() == 2);
    CHECK(factors[0].first == Poly{5, 1});
    CHECK(factors[0].second == 2);
    CHECK(factors[1].first == Poly{6, 1});
    CHECK(factors[1].second == 1);

    CHECK(is_irreducible(Poly{1, 1, 1}, 5));       // x^2+x+1 mod 5
    CHECK_FALSE(is_irreducible(Poly{4, 0, 1}, 5)); // x^2-1
    CHECK(cyclotomic_value(1, 13) == 12);
    CHECK(cyclotomic_value(2, 13) == 14);
    CHECK(cyclotomic_value(6, 5) == 21);  // x^2 - x + 1 at 5
    CHECK(cyclotomic_value(12, 7) == 2353); // 7^4 - 7^2 + 1
}

TEST_CASE("extension fields satisfy the field axioms") {
    std::mt19937 rng(12345);
    for (auto [ell, d] : std::vector<std::pair<u64, std::uint32_t>>{{3, 4}, {5, 2}, {7, 3}, {13, 10}, {11, 12}}) {
        auto ctx = FqContext::make(ell, d);
        auto random_elem = [&]() {
            std::vector<u64> c(d);
            for (auto& v : c) v = rng() % ell;
            return ExtElement(ctx, std::move(c));
        };
        for (int trial = 0; trial < 25; ++trial) {
            ExtElement a = random_elem(), b = random_elem(), c = random_elem();
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
            if (!a.is_zero()) {
                CHECK(a * a.inverse() == ExtElement::from_scalar(ctx, 1));
                // unit group order annihilates
                algebra::u128 q = 1;
                for (std::uint32_t i = 0; i < d; ++i) q *= ell;
                CHECK(a.pow(q - 1) == ExtElement::from_scalar(ctx, 1));
                u64 ord = mult_order(a);
                // ord divides ell^d - 1
                CHECK(static_cast<u64>((q - 1) % ord) == 0);
            }
        }
    }
}

TEST_CASE("cyclotomic residue fields realize the expected roots of unity") {
    {
        auto F = cyclotomic_field_with_root(7, 2);
        CHECK(F.ctx->degree == 1);
        CHECK(F.zeta.scalar_value() == 6); // -1 mod 7
    }
    {
        auto F = cyclotomic_field_with_root(3, 5);
        CHECK(F.ctx->degree == 4); // order of 3 mod 5 is 4
        CHECK(mult_order(F.zeta) == 5);
        ExtElement z5 = F.zeta.pow(algebra::u128(5));
        CHECK(z5 == ExtElement::from_scalar(F.ctx, 1));
    }
    {
        auto F = cyclotomic_field_with_root(13, 11);
        CHECK(F.ctx->degree == 10);
        CHECK(mult_order(F.zeta) == 11);
    }
    CHECK_THROWS_WITH(cyclotomic_field_with_root(5, 10), "ramified modulus");

    // Root-of-unity sums: sum over h of zeta^(h b) = 0 unless M | b.
    for (auto [ell, M] : std::vector<std::pair<u64, u64>>{{3, 5}, {7, 4}, {5, 12}, {11, 8}}) {
        auto F = cyclotomic_field_with_root(ell, M);
        CHECK(mult_order(F.zeta) == M);
        for (u64 b = 0; b <= M; ++b) {
            ExtElement acc = ExtElement::zero(F.ctx);
            for (u64 h = 0; h < M; ++h) acc = acc + F.zeta.pow(static_cast<algebra::u128>(h * b));
            if (b % M == 0)
                CHECK(acc == ExtElement::from_scalar(F.ctx, M % ell));
            else
                CHECK(acc.is_zero());
        }
        // zeta^j != 1 for 0 < j < M
        for (u64 j = 1; j < M; ++j) CHECK_FALSE(F.zeta.pow(algebra::u128(j)) == ExtElement::from_scalar(F.ctx, 1));
    }
}

TEST_CASE("order of ell mod M") {
    CHECK(order_of_mod(3, 5) == 4);
    CHECK(order_of_mod(13, 11) == 10);
    CHECK(order_of_mod(7, 1) == 1);
    CHECK_THROWS_AS(order_of_mod(3, 6), DomainError);
}
