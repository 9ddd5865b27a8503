#pragma once

#include <cstdint>
#include <vector>

#include "conglab/algebra.hpp"

// Dense univariate polynomials over F_ell, coefficients ascending.  The zero
// polynomial is the empty vector; everything else is kept trimmed.

namespace conglab::fpoly {

using u64 = algebra::u64;
using Poly = std::vector<u64>;

Poly trim(Poly p);
inline bool is_zero(const Poly& p) { return p.empty(); }
inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly add(const Poly& a, const Poly& b, u64 ell);
Poly sub(const Poly& a, const Poly& b, u64 ell);
Poly mul(const Poly& a, const Poly& b, u64 ell);
Poly scalar_mul(const Poly& a, u64 s, u64 ell);
/// Make leading coefficient 1 (input nonzero).
Poly monic(const Poly& a, u64 ell);
/// Division with remainder by a nonzero divisor.
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b, u64 ell);
Poly mod(const Poly& a, const Poly& b, u64 ell);
Poly gcd(Poly a, Poly b, u64 ell); // monic
Poly derivative(const Poly& a, u64 ell);
u64 eval(const Poly& a, u64 x, u64 ell);
/// base^e mod (f) where f is the reduction modulus.
Poly pow_mod(const Poly& base, algebra::u128 e, const Poly& f, u64 ell);

bool is_irreducible(const Poly& f, u64 ell);

/// Lexicographically least monic irreducible polynomial of given degree,
/// comparing coefficient tuples from the highest degree downwards.
Poly least_irreducible(u64 ell, std::uint32_t deg);

/// M-th cyclotomic polynomial reduced mod ell.
Poly cyclotomic_mod(u64 M, u64 ell);

/// Value Phi_e(x) of the e-th cyclotomic polynomial at an integer, exact.
/// Throws DomainError when the value does not fit in 64 bits.
u64 cyclotomic_value(u64 e, u64 x);

/// Monic irreducible factors with multiplicity, sorted lexicographically
/// (degree first).  Deterministic: factors are found by enumerating monic
/// irreducibles in lex order and trial-dividing, so inputs must have small
/// ell^degree for any non-linear factor; a guard throws otherwise.
std::vector<std::pair<Poly, int>> factor(const Poly& f, u64 ell);

} // namespace conglab::fpoly
