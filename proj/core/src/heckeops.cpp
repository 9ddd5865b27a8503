#include "conglab/heckeops.hpp"

#include <algorithm>

namespace conglab::hecke {

using algebra::add_mod;
using algebra::mul_mod;
using algebra::pow_mod;
using algebra::reduce_signed;
using algebra::sub_mod;

u64 HeckeContext::multiplier_mod(u64 p, u64 ell) const {
    if (level % p == 0) throw DomainError("p divides the level");
    int cp = chi.eval(static_cast<long long>(p));
    u64 c = mul_mod(reduce_signed(cp, ell), pow_mod(p % ell, static_cast<u64>(k - 1), ell), ell);
    return c;
}

ModSeries hecke_tp(const ModSeries& f, u64 p, const HeckeContext& ctx) {
    if (f.denom() != 1) throw DomainError("hecke_tp requires integer exponents");
    const u64 ell = f.domain().m;
    const u64 c = ctx.multiplier_mod(p, ell);
    const i64 pi = static_cast<i64>(p);
    if (f.precision() < pi) throw PrecisionError("insufficient precision");
    const i64 val = qseries::detail_q::ceil_div(f.valuation(), pi);
    const i64 prec = qseries::detail_q::floor_div(f.precision(), pi);
    if (prec < val) throw PrecisionError("insufficient precision");
    std::vector<u64> out(static_cast<size_t>(prec - val), 0);
    for (i64 n = val; n < prec; ++n) {
        u64 v = f.coeff(n * pi);
        if (n % pi == 0) v = add_mod(v, mul_mod(c, f.coeff(n / pi), ell), ell);
        out[static_cast<size_t>(n - val)] = v;
    }
    return ModSeries(f.domain(), 1, val, prec, std::move(out));
}

IdentityCheckResult composite_identity_check(const ModSeries& f, u64 p, u64 m, int k, i64 bound) {
    if (f.denom() != 1) throw DomainError("identity check requires integer exponents");
    const u64 ell = f.domain().m;
    // Mp = p^(m+1): the hypothesis behind gap exponent m is the congruence on
    // the full progressions p^(m+1) Z + p^m b, so the operator uses p^(m+1).
    i64 Mp = 1;
    for (u64 i = 0; i <= m; ++i) {
        if (Mp > static_cast<i64>(INT64_MAX / p)) throw DomainError("prime power overflow");
        Mp *= static_cast<i64>(p);
    }
    const u64 pk1 = pow_mod(p % ell, static_cast<u64>(k - 1), ell);
    if (bound < 1) throw DomainError("bound must be positive");
    if (Mp > (f.precision() - 1) / bound) throw PrecisionError("insufficient precision");

    const i64 pi = static_cast<i64>(p);
    for (i64 n = 1; n <= bound; ++n) {
        int vn = 0;
        for (i64 t = n; t % pi == 0; t /= pi) ++vn;

        u64 total = mul_mod((p + 1) % ell, f.coeff(Mp * n), ell);

        // sum over a = p^i dividing gcd(Mp, n): a^(k-1) c(f; (n/a)(Mp/a))
        u64 s2 = 0;
        {
            i64 a = 1;
            const int imax = std::min<int>(static_cast<int>(m) + 1, vn);
            for (int i = 0; i <= imax; ++i, a *= pi) {
                u64 term = mul_mod(pow_mod(static_cast<u64>(a) % ell, static_cast<u64>(k - 1), ell),
                                   f.coeff((n / a) * (Mp / a)), ell);
                s2 = add_mod(s2, term, ell);
            }
        }
        total = sub_mod(total, mul_mod(p % ell, s2, ell), ell);

        // Third summand only when p^2 | Mp, i.e. gap exponent m >= 1:
        // sum over a = p^i dividing gcd(Mp/p^2, n): a^(k-1) c(f; (n/a)(Mp/(p^2 a)))
        if (m >= 1) {
            u64 s3 = 0;
            i64 a = 1;
            const int imax = std::min<int>(static_cast<int>(m) - 1, vn);
            for (int i = 0; i <= imax; ++i, a *= pi) {
                u64 term = mul_mod(pow_mod(static_cast<u64>(a) % ell, static_cast<u64>(k - 1), ell),
                                   f.coeff((n / a) * (Mp / (pi * pi * a))), ell);
                s3 = add_mod(s3, term, ell);
            }
            total = add_mod(total, mul_mod(pk1, s3, ell), ell);
        }
        if (total != 0) return {false, n};
    }
    return {true, -1};
}

ModSeries theta_kill(const ModSeries& g, i64 beta) {
    if (g.denom() != 1) throw DomainError("theta_kill requires integer exponents");
    const u64 ell = g.domain().m;
    if (reduce_signed(beta, ell) == 0) throw DomainError("beta must be prime to ell");
    const int kb = algebra::kronecker(beta, static_cast<long long>(ell));
    std::vector<u64> out(g.raw().size());
    for (i64 n = g.valuation(); n < g.precision(); ++n) {
        const int kn = algebra::kronecker(n, static_cast<long long>(ell));
        // factor = 1 - (beta|ell)(n|ell)
        u64 factor = reduce_signed(1 - kb * kn, ell);
        out[static_cast<size_t>(n - g.valuation())] = mul_mod(g.coeff(n), factor, ell);
    }
    return ModSeries(g.domain(), 1, g.valuation(), g.precision(), std::move(out));
}

ModSeries theta_zero_kill(const ModSeries& g) { return qseries::theta(g); }

ModSeries theta_iterated(const ModSeries& g, u64 times) {
    if (g.denom() != 1) throw DomainError("theta requires integer exponents");
    const u64 ell = g.domain().m;
    std::vector<u64> out(g.raw().size());
    for (i64 n = g.valuation(); n < g.precision(); ++n)
        out[static_cast<size_t>(n - g.valuation())] = mul_mod(g.coeff(n), pow_mod(reduce_signed(n, ell), times, ell), ell);
    return ModSeries(g.domain(), 1, g.valuation(), g.precision(), std::move(out));
}

} // namespace conglab::hecke
