#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "conglab/errors.hpp"

namespace conglab::algebra {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Word-size modular arithmetic and elementary number theory.
// ---------------------------------------------------------------------------

inline u64 add_mod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    if (s >= m || s < a) s -= m;
    return s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m);
u64 pow_mod(u64 base, u128 exp, u64 m);

/// Reduce an arbitrary signed integer into [0, m).
inline u64 reduce_signed(i64 x, u64 m) {
    i64 r = x % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

u64 gcd_u64(u64 a, u64 b);
/// Inverse of a modulo m; throws DomainError("not a unit") when gcd(a,m) != 1.
u64 inv_mod(u64 a, u64 m);

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(u64 n);

/// Deterministic factorization: trial division plus Brent's rho with a fixed
/// increment schedule.  Result sorted by prime.
using Factorization = std::vector<std::pair<u64, int>>;
Factorization factorize(u64 n);

/// Kronecker symbol (t|n), defined for all integers.
int kronecker(long long t, long long n);

/// Order of x in (Z/m)^x given the factorization of a multiple of the order.
u64 mult_order_mod(u64 x, u64 m, const Factorization& order_multiple);

// ---------------------------------------------------------------------------
// Residue: an element of Z/ell for an odd prime ell.
// ---------------------------------------------------------------------------

class Residue {
public:
    Residue() = default;
    /// Checks that ell is an odd prime.
    Residue(i64 value, u64 ell);

    u64 value() const { return value_; }
    u64 modulus() const { return ell_; }
    bool is_zero() const { return value_ == 0; }

    Residue operator+(const Residue& o) const { return raw(add_mod(value_, o.check(*this), ell_), ell_); }
    Residue operator-(const Residue& o) const { return raw(sub_mod(value_, o.check(*this), ell_), ell_); }
    Residue operator*(const Residue& o) const { return raw(mul_mod(value_, o.check(*this), ell_), ell_); }
    Residue operator-() const { return raw(value_ ? ell_ - value_ : 0, ell_); }
    bool operator==(const Residue& o) const { return ell_ == o.ell_ && value_ == o.value_; }
    bool operator!=(const Residue& o) const { return !(*this == o); }

    Residue inverse() const;
    Residue pow(u64 e) const { return raw(pow_mod(value_, e, ell_), ell_); }

    /// Construct without primality re-check (value already reduced).
    static Residue raw(u64 value, u64 ell);

private:
    u64 check(const Residue& other) const;
    u64 value_ = 0;
    u64 ell_ = 3;
};

/// Deterministic Tonelli-Shanks seeded with the least quadratic non-residue.
/// Empty when `a` is not a square.
std::optional<Residue> sqrt_mod(const Residue& a);

/// Least e >= 1 with x^e = 1; throws on zero input.
u64 mult_order(const Residue& x);

// ---------------------------------------------------------------------------
// F_{ell^d} as F_ell[x]/(modulus).
// ---------------------------------------------------------------------------

struct FqContext {
    u64 ell = 0;
    std::uint32_t degree = 0;
    std::vector<u64> modulus; // monic, ascending coefficients, size degree+1

    /// Factorization of ell^degree - 1 (the unit group order), kept in
    /// factored form since the product may overflow 64 bits.
    Factorization unit_order;

    // Kernel operations on coefficient arrays of length `degree`.
    void add(const u64* a, const u64* b, u64* out) const;
    void sub(const u64* a, const u64* b, u64* out) const;
    void mul(const u64* a, const u64* b, u64* out) const;
    void scalar_mul(const u64* a, u64 s, u64* out) const;
    void addmul(const u64* a, u64 s, u64* acc) const; // acc += s*a
    bool is_zero(const u64* a) const;
    void set_scalar(u64 s, u64* out) const;
    void inv(const u64* a, u64* out) const; // throws "not a unit" on zero
    void pow(const u64* a, u128 e, u64* out) const;

    bool same(const FqContext& o) const { return ell == o.ell && degree == o.degree && modulus == o.modulus; }

    /// F_{ell^d} with the lexicographically least monic irreducible modulus.
    static std::shared_ptr<const FqContext> make(u64 ell, std::uint32_t degree);
    /// Context with a caller-supplied monic irreducible modulus.
    static std::shared_ptr<const FqContext> make_with_modulus(u64 ell, std::vector<u64> modulus);
};

class ExtElement {
public:
    ExtElement() = default;
    ExtElement(std::shared_ptr<const FqContext> ctx, std::vector<u64> coeffs);

    static ExtElement zero(std::shared_ptr<const FqContext> ctx);
    static ExtElement from_scalar(std::shared_ptr<const FqContext> ctx, u64 s);
    /// The residue class of the variable x.
    static ExtElement generator_class(std::shared_ptr<const FqContext> ctx);

    const std::shared_ptr<const FqContext>& context() const { return ctx_; }
    const std::vector<u64>& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_scalar() const;
    u64 scalar_value() const; // requires is_scalar()

    ExtElement operator+(const ExtElement& o) const;
    ExtElement operator-(const ExtElement& o) const;
    ExtElement operator*(const ExtElement& o) const;
    ExtElement operator-() const;
    bool operator==(const ExtElement& o) const;
    bool operator!=(const ExtElement& o) const { return !(*this == o); }

    ExtElement inverse() const;
    ExtElement pow(u128 e) const;
    ExtElement frobenius() const; // x -> x^ell

private:
    void check_same(const ExtElement& o) const;
    std::shared_ptr<const FqContext> ctx_;
    std::vector<u64> c_;
};

/// Least e >= 1 with x^e = 1 in F_{ell^d}; divides ell^d - 1.
u64 mult_order(const ExtElement& x);

struct CyclotomicField {
    std::shared_ptr<const FqContext> ctx;
    ExtElement zeta; // multiplicative order exactly M
    u64 M = 1;
};

/// Realizes the M-th root of unity in a residue field: the context modulus is
/// the lexicographically least monic irreducible factor of the M-th
/// cyclotomic polynomial over Z/ell, and zeta is the class of the variable.
/// Throws DomainError("ramified modulus") unless gcd(ell, M) = 1.
CyclotomicField cyclotomic_field_with_root(u64 ell, u64 M);

/// Multiplicative order of ell modulo M (requires gcd(ell, M) = 1).
u64 order_of_mod(u64 ell, u64 M);

} // namespace conglab::algebra
