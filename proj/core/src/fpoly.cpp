#include "conglab/fpoly.hpp"

#include <algorithm>

namespace conglab::fpoly {

using algebra::add_mod;
using algebra::inv_mod;
using algebra::mul_mod;
using algebra::sub_mod;

Poly trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

Poly add(const Poly& a, const Poly& b, u64 ell) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        out[i] = add_mod(x, y, ell);
    }
    return trim(std::move(out));
}

Poly sub(const Poly& a, const Poly& b, u64 ell) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        out[i] = sub_mod(x, y, ell);
    }
    return trim(std::move(out));
}

Poly mul(const Poly& a, const Poly& b, u64 ell) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (!b[j]) continue;
            out[i + j] = add_mod(out[i + j], mul_mod(a[i], b[j], ell), ell);
        }
    }
    return trim(std::move(out));
}

Poly scalar_mul(const Poly& a, u64 s, u64 ell) {
    s %= ell;
    Poly out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = mul_mod(a[i], s, ell);
    return trim(std::move(out));
}

Poly monic(const Poly& a, u64 ell) {
    if (a.empty()) throw DomainError("monic of zero polynomial");
    return scalar_mul(a, inv_mod(a.back(), ell), ell);
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b, u64 ell) {
    Poly rem = trim(a);
    Poly bb = trim(b);
    if (bb.empty()) throw DomainError("polynomial division by zero");
    const int db = degree(bb);
    if (degree(rem) < db) return {{}, std::move(rem)};
    Poly quot(static_cast<size_t>(degree(rem) - db) + 1, 0);
    const u64 lead_inv = inv_mod(bb.back(), ell);
    for (int k = degree(rem); k >= db; --k) {
        u64 cur = rem[static_cast<size_t>(k)];
        if (!cur) continue;
        u64 q = mul_mod(cur, lead_inv, ell);
        quot[static_cast<size_t>(k - db)] = q;
        for (int j = 0; j <= db; ++j) {
            size_t idx = static_cast<size_t>(k - db + j);
            rem[idx] = sub_mod(rem[idx], mul_mod(q, bb[static_cast<size_t>(j)], ell), ell);
        }
    }
    return {trim(std::move(quot)), trim(std::move(rem))};
}

Poly mod(const Poly& a, const Poly& b, u64 ell) { return divrem(a, b, ell).second; }

Poly gcd(Poly a, Poly b, u64 ell) {
    a = trim(std::move(a));
    b = trim(std::move(b));
    while (!b.empty()) {
        Poly r = mod(a, b, ell);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    return monic(a, ell);
}

Poly derivative(const Poly& a, u64 ell) {
    if (a.size() <= 1) return {};
    Poly out(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) out[i - 1] = mul_mod(a[i], i % ell, ell);
    return trim(std::move(out));
}

u64 eval(const Poly& a, u64 x, u64 ell) {
    u64 acc = 0;
    for (size_t i = a.size(); i-- > 0;) acc = add_mod(mul_mod(acc, x, ell), a[i], ell);
    return acc;
}

Poly pow_mod(const Poly& base, algebra::u128 e, const Poly& f, u64 ell) {
    Poly acc = {1 % ell};
    Poly b = mod(base, f, ell);
    while (e) {
        if (e & 1) acc = mod(mul(acc, b, ell), f, ell);
        b = mod(mul(b, b, ell), f, ell);
        e >>= 1;
    }
    return acc;
}

bool is_irreducible(const Poly& f, u64 ell) {
    const int d = degree(f);
    if (d < 1) return false;
    if (d == 1) return true;
    const Poly x = {0, 1};
    algebra::u128 q = 1;
    for (int i = 0; i < d; ++i) q *= ell;
    if (trim(sub(pow_mod(x, q, f, ell), x, ell)) != Poly{}) return false;
    for (const auto& [p, e] : algebra::factorize(static_cast<u64>(d))) {
        (void)e;
        algebra::u128 qe = 1;
        for (u64 i = 0; i < static_cast<u64>(d) / p; ++i) qe *= ell;
        Poly g = gcd(sub(pow_mod(x, qe, f, ell), x, ell), f, ell);
        if (degree(g) > 0) return false;
    }
    return true;
}

Poly least_irreducible(u64 ell, std::uint32_t deg) {
    if (deg == 1) return {0, 1}; // x itself
    algebra::u128 limit = 1;
    for (std::uint32_t i = 0; i < deg; ++i) {
        limit *= ell;
        if (limit > (static_cast<algebra::u128>(1) << 100)) throw DomainError("field too large");
    }
    for (algebra::u128 counter = 0; counter < limit; ++counter) {
        Poly f(deg + 1, 0);
        f[deg] = 1;
        algebra::u128 c = counter;
        for (std::uint32_t j = 0; j < deg; ++j) {
            f[j] = static_cast<u64>(c % ell);
            c /= ell;
        }
        if (is_irreducible(f, ell)) return f;
    }
    throw DomainError("no irreducible polynomial found");
}

namespace {

// Exact long division over Z; the divisor must divide evenly (cyclotomic use).
std::vector<long long> divide_exact_z(std::vector<long long> num, const std::vector<long long>& den) {
    while (!num.empty() && num.back() == 0) num.pop_back();
    if (num.size() < den.size()) throw DomainError("cyclotomic recursion failed");
    std::vector<long long> quot(num.size() - den.size() + 1, 0);
    const int dd = static_cast<int>(den.size()) - 1;
    for (int k = static_cast<int>(num.size()) - 1; k >= dd; --k) {
        long long lead = num[static_cast<size_t>(k)];
        if (lead == 0) continue;
        long long q = lead / den.back();
        quot[static_cast<size_t>(k - dd)] = q;
        for (int j = 0; j <= dd; ++j) num[static_cast<size_t>(k - dd + j)] -= q * den[static_cast<size_t>(j)];
    }
    for (long long v : num)
        if (v != 0) throw DomainError("cyclotomic recursion failed");
    return quot;
}

std::vector<long long> cyclo_coeffs(u64 e) {
    std::vector<long long> num(e + 1, 0);
    num[0] = -1;
    num[e] = 1;
    for (u64 d = 1; d < e; ++d) {
        if (e % d) continue;
        num = divide_exact_z(std::move(num), cyclo_coeffs(d));
    }
    while (!num.empty() && num.back() == 0) num.pop_back();
    return num;
}

} // namespace

Poly cyclotomic_mod(u64 M, u64 ell) {
    auto z = cyclo_coeffs(M);
    Poly out(z.size());
    for (size_t i = 0; i < z.size(); ++i) out[i] = algebra::reduce_signed(z[i], ell);
    return trim(std::move(out));
}

u64 cyclotomic_value(u64 e, u64 x) {
    auto z = cyclo_coeffs(e);
    // Horner with exact sign tracking in 128 bits.
    algebra::u128 mag = 0;
    bool neg = false;
    for (size_t i = z.size(); i-- > 0;) {
        algebra::u128 next = mag * x;
        if (x != 0 && next / x != mag) throw DomainError("cyclotomic value exceeds the supported range");
        long long c = z[i];
        algebra::u128 cm = static_cast<algebra::u128>(c < 0 ? -c : c);
        bool cneg = c < 0;
        if (neg == cneg) {
            next += cm;
        } else if (next >= cm) {
            next -= cm;
        } else {
            next = cm - next;
            neg = cneg;
        }
        mag = next;
    }
    if (neg && mag != 0) throw DomainError("cyclotomic value negative");
    if (mag > UINT64_MAX) throw DomainError("cyclotomic value exceeds 64 bits");
    return static_cast<u64>(mag);
}

std::vector<std::pair<Poly, int>> factor(const Poly& f_in, u64 ell) {
    std::vector<std::pair<Poly, int>> out;
    Poly f = trim(f_in);
    if (degree(f) < 1) return out;
    f = monic(f, ell);
    for (int d = 1; degree(f) >= d; ++d) {
        algebra::u128 count = 1;
        for (int i = 0; i < d; ++i) {
            count *= ell;
            if (count > 4000000) throw DomainError("factor enumeration too large");
        }
        for (algebra::u128 counter = 0; counter < count && degree(f) >= d; ++counter) {
            Poly cand(static_cast<size_t>(d) + 1, 0);
            cand[static_cast<size_t>(d)] = 1;
            algebra::u128 c = counter;
            for (int j = 0; j < d; ++j) {
                cand[static_cast<size_t>(j)] = static_cast<u64>(c % ell);
                c /= ell;
            }
            if (d > 1 && !is_irreducible(cand, ell)) continue;
            int mult = 0;
            while (true) {
                auto [q, r] = divrem(f, cand, ell);
                if (!r.empty() || q.empty()) break;
                f = std::move(q);
                ++mult;
            }
            if (mult) out.emplace_back(std::move(cand), mult);
        }
    }
    if (degree(f) > 0) throw DomainError("factorization incomplete");
    return out;
}

} // namespace conglab::fpoly
