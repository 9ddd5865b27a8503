#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conglab/p1rep.hpp"
#include "oracles.hpp"

using namespace conglab;
using namespace conglab::p1rep;
using algebra::ExtElement;

TEST_CASE("enumeration counts match the product formula and the orbit oracle") {
    CHECK(P1Space::make(1)->size() == 1);
    CHECK(P1Space::make(7)->size() == 8);
    CHECK(P1Space::make(12)->size() == 24);
    for (u64 M = 1; M <= 60; ++M) {
        auto sp = P1Space::make(M);
        CHECK(sp->size() == oracles::p1_size_formula(M));
        CHECK(sp->size() == oracles::p1_orbit_count(M));
    }
}

TEST_CASE("normalization is a total section of the unit action") {
    std::mt19937 rng(21);
    for (u64 M : {4ull, 7ull, 12ull, 45ull, 8ull}) {
        auto sp = P1Space::make(M);
        for (int trial = 0; trial < 200; ++trial) {
            i64 c = static_cast<i64>(rng() % M), d = static_cast<i64>(rng() % M);
            if (std::gcd(std::gcd(static_cast<u64>(c), static_cast<u64>(d)), M) != 1) continue;
            P1Point pt = sp->normalize(c, d);
            // the representative is in the enumeration
            CHECK_NOTHROW(sp->index_of(c, d));
            // unit multiples normalize identically
            for (u64 u = 1; u < M; ++u) {
                if (std::gcd(u, M) != 1) continue;
                P1Point pu = sp->normalize(static_cast<i64>(u) * c, static_cast<i64>(u) * d);
                CHECK(pt == pu);
            }
        }
        CHECK_THROWS_AS(sp->normalize(0, static_cast<i64>(M) == 2 ? 0 : 2 * static_cast<i64>(M)), DomainError);
    }
}

TEST_CASE("the action is a group action through S and T words") {
    std::mt19937 rng(5);
    const u64 M = 12, ell = 5;
    auto sp = P1Space::make(M);
    auto F = algebra::cyclotomic_field_with_root(ell, M);
    auto v = tm_vector(sp, F, 1);

    CHECK(act(v, Mat2{1, 0, 0, 1}).data == v.data);
    // S^2 = -I acts trivially on the projective line
    auto s2 = act(act(v, gen_S()), gen_S());
    CHECK(s2.data == v.data);

    // random S/T words: act(act(v,g),h) = act(v, g*h)
    auto mat_mul = [&](const Mat2& a, const Mat2& b) {
        return Mat2{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                    a[2] * b[1] + a[3] * b[3]};
    };
    auto mod_mat = [&](Mat2 a) {
        for (auto& x : a) x = static_cast<i64>(algebra::reduce_signed(x, M));
        return a;
    };
    for (int trial = 0; trial < 30; ++trial) {
        Mat2 g{1, 0, 0, 1}, h{1, 0, 0, 1};
        for (int i = 0; i < 6; ++i) {
            g = mod_mat(mat_mul(g, (rng() & 1) ? gen_S() : gen_T()));
            h = mod_mat(mat_mul(h, (rng() & 1) ? gen_S() : gen_T()));
        }
        auto lhs = act(act(v, g), h);
        auto rhs = act(v, mod_mat(mat_mul(g, h)));
        CHECK(lhs.data == rhs.data);
    }

    // T-orbit of (1:0) mod 5 has size 5
    auto sp5 = P1Space::make(5);
    std::set<std::uint32_t> orbit;
    i64 c = 1, d = 0;
    for (int i = 0; i < 5; ++i) {
        orbit.insert(sp5->index_of(c, d));
        // apply T on the right: (c, d) T = (c, c + d)
        d = c + d;
    }
    CHECK(orbit.size() == 5);
}

TEST_CASE("tm vectors") {
    // beta = 0: indicator of the (1:h) row with coefficient 1
    {
        auto sp = P1Space::make(5);
        auto F = algebra::cyclotomic_field_with_root(3, 5);
        auto v = tm_vector(sp, F, 0);
        for (u64 h = 0; h < 5; ++h) CHECK(v.coefficient(sp->index_of(1, static_cast<i64>(h))) == ExtElement::from_scalar(F.ctx, 1));
        CHECK(v.coefficient(sp->index_of(0, 1)).is_zero());
    }
    // p prime, p not dividing beta: coordinate sum vanishes (augmentation kernel)
    {
        auto sp = P1Space::make(5);
        auto F = algebra::cyclotomic_field_with_root(3, 5);
        auto v = tm_vector(sp, F, 1);
        ExtElement sum = ExtElement::zero(F.ctx);
        size_t nonzero = 0;
        std::set<std::vector<u64>> values;
        for (size_t i = 0; i < sp->size(); ++i) {
            sum = sum + v.coefficient(i);
            if (!v.coefficient(i).is_zero()) {
                ++nonzero;
                values.insert(v.coefficient(i).coeffs());
            }
        }
        CHECK(sum.is_zero());
        CHECK(nonzero == 5);
        CHECK(values.size() == 5); // pairwise distinct powers of zeta in F_81
    }
}

TEST_CASE("submodule generation: Steinberg dimension law") {
    // seed = invariant vector -> dimension 1
    {
        auto sp = P1Space::make(7);
        auto F = algebra::cyclotomic_field_with_root(5, 7);
        auto W = generate_submodule({invariant_vector(sp, F.ctx)});
        CHECK(W.dim() == 1);
    }
    // small grid of (p, ell): dim p for p not dividing beta, p+1 for beta = 0
    for (u64 p : {2ull, 3ull, 5ull, 7ull}) {
        for (u64 ell : {3ull, 5ull, 7ull}) {
            if (ell == p) continue;
            auto sp = P1Space::make(p);
            auto F = algebra::cyclotomic_field_with_root(ell, p);
            CHECK(generate_submodule({tm_vector(sp, F, 1)}).dim() == p);
            CHECK(generate_submodule({tm_vector(sp, F, 0)}).dim() == p + 1);
        }
    }
}

TEST_CASE("steinberg subspace and the invariant vector") {
    // dim = p and v lies inside iff ell | p + 1
    for (auto [p, ell, inside] : std::vector<std::tuple<u64, u64, bool>>{{5, 3, true}, {5, 7, false}, {11, 3, true}, {7, 5, false}}) {
        auto W = steinberg_subspace(p, ell);
        CHECK(W.dim() == p);
        auto v = invariant_vector(W.space, W.field);
        CHECK(membership(v, W) == inside);
        CHECK(inside == ((p + 1) % ell == 0));
    }
    // the vector sum over (1:h) minus p (0:1) lies in the kernel of the sum
    {
        const u64 p = 7, ell = 5;
        auto W = steinberg_subspace(p, ell);
        auto v = P1Vector::zero(W.space, W.field);
        const auto deg = W.field->degree;
        for (u64 h = 0; h < p; ++h) v.data[W.space->index_of(1, static_cast<i64>(h)) * deg] = 1;
        v.data[W.space->index_of(0, 1) * deg] = algebra::reduce_signed(-static_cast<i64>(p), ell);
        CHECK(membership(v, W));
    }
}

TEST_CASE("membership captures the shift structure at 2-powers") {
    // M = 4: tm(4, beta + 2) lies in the module generated by tm(4, beta), odd beta
    for (u64 ell : {3ull, 5ull, 7ull}) {
        auto sp = P1Space::make(4);
        auto F = algebra::cyclotomic_field_with_root(ell, 4);
        for (i64 beta : {1, 3}) {
            auto W = generate_submodule({tm_vector(sp, F, beta)});
            CHECK(membership(tm_vector(sp, F, beta), W));
            CHECK(membership(tm_vector(sp, F, beta + 2), W));
        }
    }
    // M = 8: all three shifts beta+2, beta+4, beta+6 are members
    for (u64 ell : {3ull, 5ull}) {
        auto sp = P1Space::make(8);
        auto F = algebra::cyclotomic_field_with_root(ell, 8);
        for (i64 beta : {1, 3, 5, 7}) {
            auto W = generate_submodule({tm_vector(sp, F, beta)});
            for (i64 shift : {2, 4, 6}) CHECK(membership(tm_vector(sp, F, beta + shift), W));
        }
    }
}

TEST_CASE("crt split: sizes, index maps, and the tensor law") {
    {
        auto split = crt_split(15);
        CHECK(split.space->size() == 24);
        CHECK(split.local_spaces[0]->size() == 4);
        CHECK(split.local_spaces[1]->size() == 6);
        // round trip through local indices
        for (std::uint32_t i = 0; i < split.space->size(); ++i) {
            std::vector<std::uint32_t> locals = {split.to_local[0][i], split.to_local[1][i]};
            CHECK(split.from_local(locals) == i);
        }
    }
    // prime power: identity split
    {
        auto split = crt_split(8);
        CHECK(split.prime_powers.size() == 1);
        for (std::uint32_t i = 0; i < split.space->size(); ++i) CHECK(split.to_local[0][i] == i);
    }
    // tensor law for tm vectors: coefficients factor as products of the
    // local tm vectors with beta_p = beta * 1_p, using the local roots
    // zeta^(M/M_p) inside the global field.
    {
        const u64 M = 15, ell = 7;
        auto split = crt_split(M);
        auto F = algebra::cyclotomic_field_with_root(ell, M);
        const i64 beta = 7;
        auto v = tm_vector(split.space, F, beta);
        // 1_p: congruent to 1 mod M_p, divisible by M/M_p
        std::vector<u64> one_p;
        for (u64 q : split.prime_powers) {
            u64 rest = M / q;
            u64 x = rest * algebra::inv_mod(rest % q, q);
            one_p.push_back(x);
        }
        for (std::uint32_t i = 0; i < split.space->size(); ++i) {
            ExtElement expect = ExtElement::from_scalar(F.ctx, 1);
            for (size_t f = 0; f < split.prime_powers.size(); ++f) {
                const u64 q = split.prime_powers[f];
                const P1Point& lp = split.local_spaces[f]->points()[split.to_local[f][i]];
                if (lp.c == 1 % q || (q > 1 && lp.c == 1)) {
                    // local (1:h): factor zeta^(-h * beta * 1_p) with exponent mod M
                    u64 h = lp.d;
                    u64 e = algebra::mul_mod(algebra::mul_mod(h % M, algebra::reduce_signed(beta, M), M), one_p[f] % M, M);
                    expect = expect * F.zeta.pow(static_cast<algebra::u128>((M - e) % M));
                } else {
                    expect = ExtElement::zero(F.ctx);
                    break;
                }
            }
            CHECK(v.coefficient(i) == expect);
        }
    }
}

TEST_CASE("lifting along reduction") {
    // identity lift
    {
        auto sp = P1Space::make(6);
        auto F = algebra::cyclotomic_field_with_root(5, 6);
        auto v = tm_vector(sp, F, 1);
        auto lifted = lift_vector(v, sp, F.ctx);
        CHECK(lifted.data == v.data);
    }
    // lift of the invariant vector is the invariant vector (fiber-constant)
    {
        auto sp2 = P1Space::make(2);
        auto sp8 = P1Space::make(8);
        auto F2 = algebra::cyclotomic_field_with_root(3, 2);
        auto F8 = algebra::cyclotomic_field_with_root(3, 8);
        auto v = invariant_vector(sp2, F2.ctx);
        auto lifted = lift_vector(v, sp8, F8.ctx);
        auto expect = invariant_vector(sp8, F8.ctx);
        CHECK(lifted.data == expect.data);
        // equivariance under random words in S and T
        std::mt19937 rng(17);
        for (int trial = 0; trial < 20; ++trial) {
            Mat2 g{1, 0, 0, 1};
            auto mat_mul = [&](const Mat2& a, const Mat2& b) {
                return Mat2{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                            a[2] * b[1] + a[3] * b[3]};
            };
            for (int i = 0; i < 5; ++i) g = mat_mul(g, (rng() & 1) ? gen_S() : gen_T());
            for (auto& x : g) x = static_cast<i64>(algebra::reduce_signed(x, 8));
            // act then lift = lift then act (action commutes through reduction)
            auto w = tm_vector(sp2, F2.ctx->degree == 1 ? algebra::cyclotomic_field_with_root(3, 2) : F2, 1);
            Mat2 g2 = g;
            for (auto& x : g2) x = static_cast<i64>(algebra::reduce_signed(x, 2));
            auto lhs = lift_vector(act(w, g2), sp8, F8.ctx);
            auto rhs = act(lift_vector(w, sp8, F8.ctx), g);
            CHECK(lhs.data == rhs.data);
        }
    }
}

TEST_CASE("gap-structure law on the projective line") {
    // every tm(p, beta') with p not dividing beta' lies in the module
    // generated by any one of them
    for (auto [p, ell] : std::vector<std::pair<u64, u64>>{{3, 5}, {5, 3}, {7, 11}, {5, 11}}) {
        auto sp = P1Space::make(p);
        auto F = algebra::cyclotomic_field_with_root(ell, p);
        auto W = generate_submodule({tm_vector(sp, F, 1)});
        for (u64 b = 1; b < p; ++b) CHECK(membership(tm_vector(sp, F, static_cast<i64>(b)), W));
        CHECK_FALSE(membership(tm_vector(sp, F, 0), W));
    }
}
