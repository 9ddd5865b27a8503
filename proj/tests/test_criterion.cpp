#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "conglab/criterion.hpp"
#include "conglab/engine.hpp"
#include "oracles.hpp"

using namespace conglab;
using namespace conglab::criterion;
using algebra::Residue;
using qseries::ModSeries;

TEST_CASE("L-polynomial analysis: the three factorization cases") {
    // Repeated: ell=7, lambda=4, c=4 (disc = 0) -> period 7, exponents {6, 13}
    {
        auto a = analyze_lpoly(Residue(4, 7), Residue(4, 7));
        CHECK(a.kind == LPolyAnalysis::Kind::Repeated);
        CHECK(a.period == 7);
        CHECK(a.first_exponents(2) == std::vector<u64>{6, 13});
    }
    // Split: ell=11, lambda=1, c=5 -> ratio of order 5, exponents {4, 9}
    {
        auto a = analyze_lpoly(Residue(1, 11), Residue(5, 11));
        CHECK(a.kind == LPolyAnalysis::Kind::Split);
        CHECK(a.period == 5);
        CHECK(a.first_exponents(2) == std::vector<u64>{4, 9});
        CHECK(algebra::mul_mod(a.alpha, a.beta, 11) == 5);
        CHECK(algebra::add_mod(a.alpha, a.beta, 11) == 1);
    }
    // lambda=0 -> alpha = -beta, period 2, exponents odd
    {
        auto a = analyze_lpoly(Residue(0, 5), Residue(3, 5));
        CHECK(a.period == 2);
        CHECK(a.first_exponents(3) == std::vector<u64>{1, 3, 5});
    }
    // Irreducible: ell=11, lambda=9, c=7 (disc = 9 - 28 = 7, a nonsquare)
    {
        auto a = analyze_lpoly(Residue(9, 11), Residue(2, 11));
        // disc = 81 - 8 = 73 = 7 mod 11, nonsquare -> irreducible
        CHECK(a.kind == LPolyAnalysis::Kind::Irreducible);
        CHECK(a.period == 4); // the table's 2^3, 2^7 column at ell=11
        CHECK((a.period <= 12 && (11 + 1) % a.period == 0));
    }
    CHECK_THROWS_WITH(analyze_lpoly(Residue(1, 7), Residue(0, 7)), "ramified Hecke datum");
}

TEST_CASE("root ratio order law by direct exponentiation") {
    std::mt19937 rng(11);
    for (u64 ell : {5ull, 7ull, 11ull, 13ull}) {
        for (int trial = 0; trial < 40; ++trial) {
            u64 lambda = rng() % ell;
            u64 c = 1 + rng() % (ell - 1);
            auto a = analyze_lpoly(Residue::raw(lambda, ell), Residue::raw(c, ell));
            if (a.kind == LPolyAnalysis::Kind::Repeated) continue;
            // alpha^(m+1) = beta^(m+1) iff period | m+1, for m <= 3*period
            if (a.kind == LPolyAnalysis::Kind::Split) {
                Residue alpha = Residue::raw(a.alpha, ell), beta = Residue::raw(a.beta, ell);
                for (u64 m = 1; m <= 3 * a.period; ++m)
                    CHECK((alpha.pow(m + 1) == beta.pow(m + 1)) == ((m + 1) % a.period == 0));
            } else {
                auto ctx = algebra::FqContext::make_with_modulus(
                    ell, {c, algebra::sub_mod(0, lambda, ell), 1});
                auto alpha = algebra::ExtElement::generator_class(ctx);
                auto beta = algebra::ExtElement::from_scalar(ctx, lambda) - alpha;
                for (u64 m = 1; m <= 3 * a.period; ++m)
                    CHECK((alpha.pow(algebra::u128(m + 1)) == beta.pow(algebra::u128(m + 1))) ==
                          ((m + 1) % a.period == 0));
            }
        }
    }
}

TEST_CASE("the maximal-congruence table for the discriminant form") {
    auto table = delta_table({3, 5, 7, 11}, {2, 3, 5, 7, 11}, 2, 2000);
    auto cell = [&](u64 ell, u64 p) {
        size_t i = 0, j = 0;
        while (table.ells[i] != ell) ++i;
        while (table.primes[j] != p) ++j;
        return table.cells[i][j];
    };
    // row ell = 3
    CHECK(cell(3, 2).exponents == std::vector<u64>{1, 3});
    CHECK(cell(3, 3).diagonal);
    CHECK(cell(3, 3).full_progression);
    CHECK(cell(3, 5).exponents == std::vector<u64>{1, 3});
    CHECK(cell(3, 7).exponents == std::vector<u64>{2, 5});
    CHECK(cell(3, 11).exponents == std::vector<u64>{1, 3});
    // row ell = 5
    CHECK(cell(5, 2).exponents == std::vector<u64>{3, 7});
    CHECK(cell(5, 3).exponents == std::vector<u64>{3, 7});
    CHECK(cell(5, 5).full_progression);
    CHECK(cell(5, 7).exponents == std::vector<u64>{3, 7});
    CHECK(cell(5, 11).exponents == std::vector<u64>{4, 9});
    // row ell = 7
    CHECK(cell(7, 2).exponents == std::vector<u64>{6, 13});
    CHECK(cell(7, 3).exponents == std::vector<u64>{1, 3});
    CHECK(cell(7, 5).exponents == std::vector<u64>{1, 3});
    CHECK(cell(7, 7).full_progression);
    CHECK(cell(7, 11).exponents == std::vector<u64>{6, 13});
    // row ell = 11
    CHECK(cell(11, 2).exponents == std::vector<u64>{3, 7});
    CHECK(cell(11, 3).exponents == std::vector<u64>{10, 21});
    CHECK(cell(11, 5).exponents == std::vector<u64>{4, 9});
    CHECK(cell(11, 7).exponents == std::vector<u64>{9, 19});
    CHECK_FALSE(cell(11, 11).full_progression); // tau(11) = 1 mod 11: empty cell
}

TEST_CASE("impossibility predicate") {
    CHECK(impossibility(2, 5, 12, 1, 2));        // gcd(20,3)=1 and 2^11 = 3 nonsquare mod 5
    CHECK_FALSE(impossibility(3, 5, 12, 1, 2));  // gcd(20,4) != 1
    CHECK_THROWS_AS(impossibility(1, 5, 12, 1, 2), DomainError);
    // consistency with the certified table row ell=5, p=2: {3, 7, 11, ...}
    auto a = analyze_lpoly(Residue(1, 5), Residue(3, 5));
    for (u64 m = 2; m <= 40; ++m) {
        if (impossibility(m, 5, 12, 1, 2)) CHECK_FALSE(a.admits_exponent(m));
    }
}

TEST_CASE("eigendecomposition of level-one forms") {
    // Delta mod 7 at p = 2: a single component with eigenvalue 4
    {
        auto d = forms::delta_mod(7, 80);
        auto comps = eigen_decompose(d, 2, 12, 7);
        REQUIRE(comps.size() == 1);
        CHECK(comps[0].eigenvalue.is_scalar());
        CHECK(comps[0].eigenvalue.scalar_value() == 4);
        CHECK(component_satisfies_eigen_equation(comps[0], 2, 12));
    }
    // zero form decomposes into nothing
    {
        auto z = ModSeries::zero(qseries::ModDomain{7}, 1, 40);
        CHECK(eigen_decompose(z, 2, 12, 7).empty());
    }
    // a 2-dimensional space: components sum to the input, each satisfies its
    // eigen-equation, eigenvalues are the Eisenstein and cusp values
    {
        const u64 ell = 13;
        auto b = forms::level_one_basis(16, ell, 120);
        auto f = qseries::add(b.basis[0], b.basis[1]);
        auto comps = eigen_decompose(f, 2, 16, ell);
        REQUIRE(comps.size() == 2);
        for (const auto& c : comps) CHECK(component_satisfies_eigen_equation(c, 2, 16));
        CHECK(components_sum_to(comps, f));
    }
    // not-in-span is surfaced
    {
        auto e4 = forms::eisenstein_mod(4, 7, 60);
        CHECK_THROWS_WITH(eigen_decompose(e4, 2, 12, 7), "not in span");
    }
}

TEST_CASE("conjugate eigencomponents over quadratic extensions") {
    // T_2 on the weight-24 cusp space has characteristic discriminant
    // 2^6 3^2 144169; 144169 is a nonsquare mod 23 and mod 29, so the cusp
    // eigenvalues live in F_{ell^2} and the components carry extension
    // coefficients that pair up to a rational sum.
    for (u64 ell : {23ull, 29ull}) {
        auto b = forms::level_one_basis(24, ell, 400);
        ModSeries f = b.basis[0];
        for (int i = 1; i < b.dim; ++i) f = qseries::add(f, b.basis[static_cast<size_t>(i)]);
        auto comps = eigen_decompose(f, 2, 24, ell);
        REQUIRE(comps.size() == 3);
        size_t quadratic = 0;
        for (const auto& comp : comps) {
            CHECK(component_satisfies_eigen_equation(comp, 2, 24));
            if (comp.field->degree == 2) ++quadratic;
        }
        CHECK(quadratic == 2);
        CHECK(components_sum_to(comps, f));
        // the extension analyses report periods dividing ell^2 - 1 or the
        // norm-one order ell^2 + ... (split vs irreducible over F_{ell^2})
        auto res = certify_claim(f, 24, 2, 3);
        const auto& ev = std::get<EvidenceHecke>(res.certificate.evidence);
        REQUIRE(ev.components.size() == 3);
        for (const auto& cc : ev.components) {
            if (cc.analysis.lambda_rational) continue;
            const u64 q = ell * ell;
            const bool divides = (q - 1) % cc.analysis.period == 0 || (q + 1) % cc.analysis.period == 0;
            CHECK(divides);
        }
    }
}

TEST_CASE("certify_claim on the discriminant form") {
    // ell=3, p=5, m=1: tau(5) = 4830 = 0 mod 3 -> period 2 -> certified
    {
        auto d = forms::delta_mod(3, 60);
        auto r = certify_claim(d, 12, 5, 1);
        CHECK(r.certified);
        const auto& ev = std::get<EvidenceHecke>(r.certificate.evidence);
        REQUIRE(ev.components.size() == 1);
        CHECK(ev.components[0].analysis.period == 2);
    }
    // ell=11, p=2, m=3: certified through the irreducible case, period 4
    {
        auto d = forms::delta_mod(11, 60);
        auto r = certify_claim(d, 12, 2, 3);
        CHECK(r.certified);
        const auto& ev = std::get<EvidenceHecke>(r.certificate.evidence);
        bool found_irreducible = false;
        for (const auto& c : ev.components)
            if (c.analysis.kind == LPolyAnalysis::Kind::Irreducible) {
                found_irreducible = true;
                CHECK(c.analysis.period == 4);
            }
        CHECK(found_irreducible);
    }
    // ell=7, p=2, m=5 is refused: 5 != 6 mod 7
    {
        auto d = forms::delta_mod(7, 60);
        auto r = certify_claim(d, 12, 2, 5);
        CHECK_FALSE(r.certified);
    }
    // claims with beta narrow to a single progression
    {
        auto d = forms::delta_mod(5, 7 * 7 * 7 * 7 * 200);
        auto r = certify_claim(d, 12, 7, 3, 2);
        CHECK(r.certified);
        REQUIRE(std::holds_alternative<Progression>(r.certificate.claim));
        auto prog = std::get<Progression>(r.certificate.claim);
        CHECK(prog.modulus == 2401);
        CHECK(prog.residue == 686);
        // numeric re-check of the certified progression
        i64 bad = -1;
        CHECK(engine::claim_holds(d, r.certificate.claim, d.precision() - 1, &bad));
    }
}

TEST_CASE("prime searches") {
    const u64 ell = 7;
    auto d = forms::delta_mod(ell, 600);
    auto tau = oracles::tau_by_sparse_products(520);
    auto treneer = prime_search(d, 12, SearchMode::Treneer, 500);
    // every hit has p = -1 mod 7 and tau(p) = 0 mod 7, and every such prime is hit
    std::set<u64> hits;
    for (const auto& [p, r] : treneer) {
        hits.insert(p);
        CHECK(p % ell == ell - 1);
        CHECK(mpz_class(tau[p] % 7) == 0);
        CHECK(r.certified);
    }
    for (u64 p = 2; p <= 500; ++p) {
        if (!algebra::is_prime(p) || p % ell != ell - 1) continue;
        mpz_class t = tau[p] % 7;
        if (t < 0) t += 7;
        if (t == 0) CHECK(hits.count(p) == 1);
    }
    // serre mode: the repeated case is forced (lambda = 2, c = 1)
    auto serre = prime_search(d, 12, SearchMode::Serre, 500);
    for (const auto& [p, r] : serre) {
        CHECK(p % ell == 1);
        const auto& ev = std::get<EvidenceHecke>(r.certificate.evidence);
        CHECK(ev.components[0].analysis.kind == LPolyAnalysis::Kind::Repeated);
        // reported gap exponent ell - 1 satisfies ell | m + 1
        CHECK(std::holds_alternative<GapProgression>(r.certificate.claim));
        CHECK((ell) % ev.components[0].analysis.period == 0);
    }
}

TEST_CASE("u_ell preimages and filtration") {
    const u64 ell = 5;
    // s = 0 returns the input
    {
        auto d = forms::delta_mod(ell, 100);
        auto [h, k] = u_ell_preimage(d, 12, 0);
        CHECK(k == 12);
        CHECK(qseries::equal_on_common_window(h, d));
    }
    // round trip on the weight-12 basis
    {
        auto basis = forms::level_one_basis(12, ell, 80);
        for (const auto& g : basis.basis) {
            auto [h, k] = u_ell_preimage(g, 12, 1, 200);
            auto uh = qseries::u_operator(h, ell);
            CHECK(qseries::equal_on_common_window(uh, g.truncated(std::min(uh.precision(), g.precision()))));
            CHECK(k % 4 == 0); // weights stay in the class mod ell-1
        }
    }
    // filtration of Delta mod 5 is 12; E4 Delta mod 7 has filtration 16
    {
        auto d = forms::delta_mod(5, 80);
        CHECK(filtration(d, 12) == 12);
        auto e4d = qseries::mul(forms::eisenstein_mod(4, 7, 80), forms::delta_mod(7, 80));
        CHECK(filtration(e4d, 16) == 16);
        // multiplying by E_{ell-1} raises the weight but not the filtration
        auto e4 = forms::eisenstein_mod(4, 5, 80); // E4 = E_{ell-1} for ell = 5
        auto raised = qseries::mul(e4, d);
        CHECK(filtration(raised, 16) == 12);
    }
    CHECK_THROWS_AS(filtration(ModSeries::zero(qseries::ModDomain{5}, 1, 40), 12), DomainError);
}
