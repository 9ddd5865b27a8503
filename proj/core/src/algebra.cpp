#include "conglab/algebra.hpp"

#include <algorithm>
#include <cstring>

#include "conglab/fpoly.hpp"

namespace conglab::algebra {

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

u64 pow_mod(u64 base, u128 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

u64 inv_mod(u64 a, u64 m) {
    a %= m;
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a);
    while (nr != 0) {
        i64 q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw DomainError("not a unit");
    if (t < 0) t += static_cast<i64>(m);
    return static_cast<u64>(t);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a % n, d, n);
        if (x <= 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

namespace {

u64 brent_rho(u64 n) {
    // Fixed increment schedule keeps the whole pipeline reproducible.
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 q = 1;
        int power = 1, lam = 1;
        auto f = [&](u64 v) { return add_mod(mul_mod(v, v, n), c, n); };
        while (d == 1) {
            if (power == lam) {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = f(y);
            ++lam;
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            q = mul_mod(q, diff, n);
            if (lam % 64 == 0) {
                d = gcd_u64(q, n);
                if (d != 1) break;
            }
        }
        if (d == 1) d = gcd_u64(q, n);
        if (d != 1 && d != n) return d;
        // d == n or cycle without factor: retry with the next increment.
    }
}

void factor_rec(u64 n, Factorization& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        for (auto& [p, e] : out) {
            if (p == n) {
                ++e;
                return;
            }
        }
        out.emplace_back(n, 1);
        return;
    }
    u64 d = brent_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

Factorization factorize(u64 n) {
    Factorization out;
    if (n <= 1) return out;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull, 41ull, 43ull, 47ull}) {
        while (n % p == 0) {
            if (!out.empty() && out.back().first == p)
                out.back().second++;
            else
                out.emplace_back(p, 1);
            n /= p;
        }
    }
    factor_rec(n, out);
    std::sort(out.begin(), out.end());
    return out;
}

int kronecker(long long a, long long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    int k = 1;
    if (v & 1) {
        long long am8 = ((a % 8) + 8) % 8;
        if (am8 == 3 || am8 == 5) k = -1;
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        v = 0;
        while ((a & 1) == 0) {
            a >>= 1;
            ++v;
        }
        if (v & 1) {
            long long nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) k = -k;
        }
        if ((a % 4) == 3 && (n % 4) == 3) k = -k;
        long long r = a;
        a = n % r;
        n = r;
    }
    return n == 1 ? k : 0;
}

u64 mult_order_mod(u64 x, u64 m, const Factorization& order_multiple) {
    // The multiple may overflow u64 as a product, so work prime by prime:
    // for each prime q, power x by every other factor and find the least
    // exponent of q that kills the remainder.
    u64 order = 1;
    for (const auto& [q, a] : order_multiple) {
        u64 y = x % m;
        for (const auto& [q2, a2] : order_multiple) {
            if (q2 == q) continue;
            for (int i = 0; i < a2; ++i) y = pow_mod(y, q2, m);
        }
        int need = 0;
        while (y != 1 % m) {
            y = pow_mod(y, q, m);
            ++need;
            if (need > a) throw DomainError("element order does not divide the given multiple");
        }
        for (int i = 0; i < need; ++i) order *= q;
    }
    return order;
}

// ---------------------------------------------------------------------------
// Residue
// ---------------------------------------------------------------------------

Residue::Residue(i64 value, u64 ell) {
    if (ell < 3 || (ell & 1) == 0 || !is_prime(ell)) throw DomainError("modulus must be an odd prime");
    ell_ = ell;
    value_ = reduce_signed(value, ell);
}

Residue Residue::raw(u64 value, u64 ell) {
    Residue r;
    r.value_ = value % ell;
    r.ell_ = ell;
    return r;
}

u64 Residue::check(const Residue& self) const {
    if (ell_ != self.ell_) throw DomainError("residue modulus mismatch");
    return value_;
}

Residue Residue::inverse() const {
    if (value_ == 0) throw DomainError("not a unit");
    return raw(inv_mod(value_, ell_), ell_);
}

std::optional<Residue> sqrt_mod(const Residue& a) {
    const u64 ell = a.modulus();
    if (a.value() == 0) return Residue::raw(0, ell);
    if (kronecker(static_cast<long long>(a.value()), static_cast<long long>(ell)) != 1) return std::nullopt;
    // Tonelli-Shanks with the least non-residue as seed.
    u64 q = ell - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (kronecker(static_cast<long long>(z), static_cast<long long>(ell)) != -1) ++z;
    u64 m = static_cast<u64>(s);
    u64 c = pow_mod(z, q, ell);
    u64 t = pow_mod(a.value(), q, ell);
    u64 r = pow_mod(a.value(), (q + 1) / 2, ell);
    while (t != 1) {
        u64 t2 = t;
        u64 i = 0;
        while (t2 != 1) {
            t2 = mul_mod(t2, t2, ell);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, ell);
        m = i;
        c = mul_mod(b, b, ell);
        t = mul_mod(t, c, ell);
        r = mul_mod(r, b, ell);
    }
    if (2 * r > ell) { /* keep the representative as computed: deterministic */
    }
    return Residue::raw(r, ell);
}

u64 mult_order(const Residue& x) {
    if (x.value() == 0) throw DomainError("not a unit");
    return mult_order_mod(x.value(), x.modulus(), factorize(x.modulus() - 1));
}

// ---------------------------------------------------------------------------
// FqContext / ExtElement
// ---------------------------------------------------------------------------

void FqContext::add(const u64* a, const u64* b, u64* out) const {
    for (std::uint32_t i = 0; i < degree; ++i) out[i] = add_mod(a[i], b[i], ell);
}

void FqContext::sub(const u64* a, const u64* b, u64* out) const {
    for (std::uint32_t i = 0; i < degree; ++i) out[i] = sub_mod(a[i], b[i], ell);
}

void FqContext::scalar_mul(const u64* a, u64 s, u64* out) const {
    for (std::uint32_t i = 0; i < degree; ++i) out[i] = mul_mod(a[i], s, ell);
}

void FqContext::addmul(const u64* a, u64 s, u64* acc) const {
    for (std::uint32_t i = 0; i < degree; ++i) acc[i] = add_mod(acc[i], mul_mod(a[i], s, ell), ell);
}

bool FqContext::is_zero(const u64* a) const {
    for (std::uint32_t i = 0; i < degree; ++i)
        if (a[i]) return false;
    return true;
}

void FqContext::set_scalar(u64 s, u64* out) const {
    std::memset(out, 0, sizeof(u64) * degree);
    out[0] = s % ell;
}

void FqContext::mul(const u64* a, const u64* b, u64* out) const {
    const std::uint32_t d = degree;
    if (d == 1) {
        out[0] = mul_mod(a[0] % ell, b[0] % ell, ell);
        return;
    }
    std::vector<u64> tmp(2 * d - 1, 0);
    for (std::uint32_t i = 0; i < d; ++i) {
        if (!a[i]) continue;
        for (std::uint32_t j = 0; j < d; ++j) {
            if (!b[j]) continue;
            tmp[i + j] = add_mod(tmp[i + j], mul_mod(a[i], b[j], ell), ell);
        }
    }
    // Reduce by the monic modulus.
    for (std::uint32_t k = 2 * d - 2; k >= d; --k) {
        u64 lead = tmp[k];
        if (lead) {
            tmp[k] = 0;
            for (std::uint32_t j = 0; j < d; ++j) {
                tmp[k - d + j] = sub_mod(tmp[k - d + j], mul_mod(lead, modulus[j], ell), ell);
            }
        }
        if (k == d) break;
    }
    std::memcpy(out, tmp.data(), sizeof(u64) * d);
}

void FqContext::inv(const u64* a, u64* out) const {
    if (is_zero(a)) throw DomainError("not a unit");
    fpoly::Poly p(a, a + degree);
    p = fpoly::trim(std::move(p));
    // Extended Euclid on (p, modulus).
    fpoly::Poly r0 = modulus, r1 = p;
    fpoly::Poly t0, t1 = {1};
    while (!fpoly::is_zero(r1)) {
        auto [q, r2] = fpoly::divrem(r0, r1, ell);
        fpoly::Poly t2 = fpoly::sub(t0, fpoly::mul(q, t1, ell), ell);
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    // r0 = gcd, nonzero scalar since the modulus is irreducible.
    if (fpoly::degree(r0) != 0) throw DomainError("not a unit");
    u64 s = inv_mod(r0[0], ell);
    std::memset(out, 0, sizeof(u64) * degree);
    for (size_t i = 0; i < t0.size(); ++i) out[i] = mul_mod(t0[i], s, ell);
}

void FqContext::pow(const u64* a, u128 e, u64* out) const {
    std::vector<u64> base(a, a + degree), acc(degree, 0);
    acc[0] = 1 % ell;
    std::vector<u64> tmp(degree);
    while (e) {
        if (e & 1) {
            mul(acc.data(), base.data(), tmp.data());
            acc = tmp;
        }
        mul(base.data(), base.data(), tmp.data());
        base = tmp;
        e >>= 1;
    }
    std::memcpy(out, acc.data(), sizeof(u64) * degree);
}

namespace {

Factorization unit_group_order_factors(u64 ell, std::uint32_t degree) {
    // ell^degree - 1 = prod_{e | degree} Phi_e(ell); each cyclotomic value
    // fits u64 for the supported parameter range and factors deterministically.
    Factorization acc;
    for (u64 e = 1; e <= degree; ++e) {
        if (degree % e) continue;
        u64 val = fpoly::cyclotomic_value(e, ell);
        for (const auto& [p, k] : factorize(val)) {
            bool found = false;
            for (auto& [pp, kk] : acc) {
                if (pp == p) {
                    kk += k;
                    found = true;
                    break;
                }
            }
            if (!found) acc.emplace_back(p, k);
        }
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

std::shared_ptr<const FqContext> finish_context(u64 ell, std::vector<u64> modulus) {
    auto ctx = std::make_shared<FqContext>();
    ctx->ell = ell;
    ctx->degree = static_cast<std::uint32_t>(modulus.size() - 1);
    ctx->modulus = std::move(modulus);
    ctx->unit_order = unit_group_order_factors(ell, ctx->degree);
    return ctx;
}

} // namespace

std::shared_ptr<const FqContext> FqContext::make(u64 ell, std::uint32_t degree) {
    if (!is_prime(ell)) throw DomainError("field characteristic must be prime");
    if (degree == 0 || degree > 64) throw DomainError("unsupported extension degree");
    return finish_context(ell, fpoly::least_irreducible(ell, degree));
}

std::shared_ptr<const FqContext> FqContext::make_with_modulus(u64 ell, std::vector<u64> modulus) {
    if (!is_prime(ell)) throw DomainError("field characteristic must be prime");
    if (modulus.size() < 2 || modulus.back() != 1) throw DomainError("modulus must be monic of degree >= 1");
    if (!fpoly::is_irreducible(modulus, ell)) throw DomainError("modulus must be irreducible");
    return finish_context(ell, std::move(modulus));
}

ExtElement::ExtElement(std::shared_ptr<const FqContext> ctx, std::vector<u64> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    if (!ctx_ || c_.size() != ctx_->degree) throw DomainError("coefficient length must equal the field degree");
    for (auto& v : c_) v %= ctx_->ell;
}

ExtElement ExtElement::zero(std::shared_ptr<const FqContext> ctx) {
    std::vector<u64> c(ctx->degree, 0);
    return ExtElement(std::move(ctx), std::move(c));
}

ExtElement ExtElement::from_scalar(std::shared_ptr<const FqContext> ctx, u64 s) {
    std::vector<u64> c(ctx->degree, 0);
    c[0] = s % ctx->ell;
    return ExtElement(std::move(ctx), std::move(c));
}

ExtElement ExtElement::generator_class(std::shared_ptr<const FqContext> ctx) {
    if (ctx->degree == 1) {
        // x is congruent to -modulus[0].
        u64 v = ctx->modulus[0] ? ctx->ell - ctx->modulus[0] : 0;
        return from_scalar(std::move(ctx), v);
    }
    std::vector<u64> c(ctx->degree, 0);
    c[1] = 1;
    return ExtElement(std::move(ctx), std::move(c));
}

bool ExtElement::is_zero() const { return ctx_->is_zero(c_.data()); }

bool ExtElement::is_scalar() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return false;
    return true;
}

u64 ExtElement::scalar_value() const {
    if (!is_scalar()) throw DomainError("element is not in the prime field");
    return c_[0];
}

void ExtElement::check_same(const ExtElement& o) const {
    if (!ctx_ || !o.ctx_ || !ctx_->same(*o.ctx_)) throw DomainError("field context mismatch");
}

ExtElement ExtElement::operator+(const ExtElement& o) const {
    check_same(o);
    std::vector<u64> out(ctx_->degree);
    ctx_->add(c_.data(), o.c_.data(), out.data());
    return ExtElement(ctx_, std::move(out));
}

ExtElement ExtElement::operator-(const ExtElement& o) const {
    check_same(o);
    std::vector<u64> out(ctx_->degree);
    ctx_->sub(c_.data(), o.c_.data(), out.data());
    return ExtElement(ctx_, std::move(out));
}

ExtElement ExtElement::operator*(const ExtElement& o) const {
    check_same(o);
    std::vector<u64> out(ctx_->degree);
    ctx_->mul(c_.data(), o.c_.data(), out.data());
    return ExtElement(ctx_, std::move(out));
}

ExtElement ExtElement::operator-() const {
    std::vector<u64> out(ctx_->degree);
    for (std::uint32_t i = 0; i < ctx_->degree; ++i) out[i] = c_[i] ? ctx_->ell - c_[i] : 0;
    return ExtElement(ctx_, std::move(out));
}

bool ExtElement::operator==(const ExtElement& o) const { return ctx_ && o.ctx_ && ctx_->same(*o.ctx_) && c_ == o.c_; }

ExtElement ExtElement::inverse() const {
    std::vector<u64> out(ctx_->degree);
    ctx_->inv(c_.data(), out.data());
    return ExtElement(ctx_, std::move(out));
}

ExtElement ExtElement::pow(u128 e) const {
    std::vector<u64> out(ctx_->degree);
    ctx_->pow(c_.data(), e, out.data());
    return ExtElement(ctx_, std::move(out));
}

ExtElement ExtElement::frobenius() const { return pow(static_cast<u128>(ctx_->ell)); }

u64 mult_order(const ExtElement& x) {
    if (x.is_zero()) throw DomainError("not a unit");
    const auto& ctx = *x.context();
    u64 order = 1;
    for (const auto& [q, a] : ctx.unit_order) {
        ExtElement y = x;
        for (const auto& [q2, a2] : ctx.unit_order) {
            if (q2 == q) continue;
            for (int i = 0; i < a2; ++i) y = y.pow(q2);
        }
        int need = 0;
        while (!(y.is_scalar() && y.scalar_value() == 1 % ctx.ell)) {
            y = y.pow(q);
            ++need;
            if (need > a) throw DomainError("order computation failed");
        }
        for (int i = 0; i < need; ++i) {
            if (order > UINT64_MAX / q) throw DomainError("order exceeds 64 bits");
            order *= q;
        }
    }
    return order;
}

u64 order_of_mod(u64 ell, u64 M) {
    if (M == 1) return 1;
    if (gcd_u64(ell % M, M) != 1) throw DomainError("ramified modulus");
    u64 x = ell % M, acc = x % M, d = 1;
    while (acc != 1 % M) {
        acc = mul_mod(acc, x, M);
        ++d;
        if (d > M) throw DomainError("order computation failed");
    }
    return d;
}

CyclotomicField cyclotomic_field_with_root(u64 ell, u64 M) {
    if (!is_prime(ell)) throw DomainError("field characteristic must be prime");
    if (M == 0) throw DomainError("modulus must be positive");
    if (M > 1 && ell % M != 0 && gcd_u64(ell % M, M) != 1) throw DomainError("ramified modulus");
    if (M > 1 && ell % M == 0) throw DomainError("ramified modulus");
    if (M > 1 && gcd_u64(ell % M, M) != 1) throw DomainError("ramified modulus");

    if (M <= 2) {
        auto ctx = FqContext::make_with_modulus(ell, M == 1 ? std::vector<u64>{ell - 1, 1} : std::vector<u64>{1, 1});
        // x - 1 for M = 1 (zeta = 1); x + 1 for M = 2 (zeta = -1).
        CyclotomicField out{ctx, ExtElement::generator_class(ctx), M};
        return out;
    }

    const u64 d = order_of_mod(ell, M);
    if (d > 64) throw DomainError("unsupported extension degree");
    // Helper field in which to locate the primitive M-th roots of unity.
    auto helper = FqContext::make(ell, static_cast<std::uint32_t>(d));

    // Group order ell^d - 1 as an __int128 (guarded by d <= 64 and practical ell).
    u128 group = 1;
    for (u64 i = 0; i < d; ++i) {
        if (group > (static_cast<u128>(1) << 120) / ell) throw DomainError("field too large");
        group *= ell;
    }
    group -= 1;
    const u128 cofactor = group / M;

    const auto m_factors = factorize(M);
    ExtElement z = ExtElement::zero(helper);
    bool found = false;
    // Enumerate field elements deterministically: the counter's base-ell
    // digits are the coefficients, least degree first.
    for (u64 counter = 1; counter < 1000000; ++counter) {
        std::vector<u64> coeffs(d, 0);
        u64 c = counter;
        for (u64 j = 0; j < d && c; ++j) {
            coeffs[j] = c % ell;
            c /= ell;
        }
        if (c) throw DomainError("no element of the requested order found");
        ExtElement u(helper, std::move(coeffs));
        if (u.is_zero()) continue;
        ExtElement cand = u.pow(cofactor);
        if (cand.is_scalar() && cand.scalar_value() == 1 % ell) continue;
        bool exact = true;
        for (const auto& [q, a] : m_factors) {
            (void)a;
            ExtElement t = cand.pow(static_cast<u128>(M / q));
            if (t.is_scalar() && t.scalar_value() == 1 % ell) {
                exact = false;
                break;
            }
        }
        if (exact) {
            z = cand;
            found = true;
            break;
        }
    }
    if (!found) throw DomainError("no element of the requested order found");

    // Minimal polynomials of z^j over F_ell, one per Frobenius orbit of
    // (Z/M)^x; the lexicographically least is the canonical modulus.
    std::vector<char> seen(M, 0);
    fpoly::Poly best;
    for (u64 j = 1; j < M; ++j) {
        if (gcd_u64(j, M) != 1 || seen[j]) continue;
        // Mark the Frobenius orbit of j.
        u64 t = j;
        do {
            seen[t] = 1;
            t = mul_mod(t, ell % M, M);
        } while (t != j);

        ExtElement root = z.pow(static_cast<u128>(j));
        // minpoly = prod_i (x - root^(ell^i)); coefficients land in F_ell.
        std::vector<ExtElement> poly = {ExtElement::from_scalar(helper, 1)};
        ExtElement conj = root;
        for (u64 i = 0; i < d; ++i) {
            std::vector<ExtElement> next(poly.size() + 1, ExtElement::zero(helper));
            for (size_t s = 0; s < poly.size(); ++s) {
                next[s + 1] = next[s + 1] + poly[s];
                next[s] = next[s] - poly[s] * conj;
            }
            poly = std::move(next);
            conj = conj.frobenius();
        }
        fpoly::Poly candidate(poly.size());
        for (size_t s = 0; s < poly.size(); ++s) {
            if (!poly[s].is_scalar()) throw DomainError("minimal polynomial is not rational");
            candidate[s] = poly[s].scalar_value();
        }
        if (best.empty()) {
            best = candidate;
        } else {
            // Compare coefficient tuples from the top degree down.
            for (size_t s = candidate.size(); s-- > 0;) {
                if (candidate[s] != best[s]) {
                    if (candidate[s] < best[s]) best = candidate;
                    break;
                }
            }
        }
    }

    auto ctx = FqContext::make_with_modulus(ell, best);
    ExtElement zeta = ExtElement::generator_class(ctx);
    if (mult_order(zeta) != M) throw DomainError("cyclotomic construction failed");
    return CyclotomicField{ctx, zeta, M};
}

} // namespace conglab::algebra
