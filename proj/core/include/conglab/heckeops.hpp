#pragma once

#include "conglab/qseries.hpp"

namespace conglab::hecke {

using qseries::ModSeries;
using u64 = algebra::u64;
using i64 = algebra::i64;

struct HeckeContext {
    int k = 12;
    qseries::Character chi{};
    u64 level = 1;

    /// chi(p) p^(k-1) reduced mod ell; throws when p divides the level.
    u64 multiplier_mod(u64 p, u64 ell) const;
};

/// Classical T_p in the arithmetic normalization:
/// c(out; n) = c(f; p n) + chi(p) p^(k-1) c(f; n/p), the second term only when p | n.
ModSeries hecke_tp(const ModSeries& f, u64 p, const HeckeContext& ctx);

struct IdentityCheckResult {
    bool pass = true;
    i64 first_failure = -1;
};

/// Coefficient identity behind the composite Hecke-like operator at level 1
/// with trivial character.  `m` is the gap exponent: the hypothesis is a
/// congruence on the progressions p^(m+1) Z + p^m b, so the operator is built
/// from Mp = p^(m+1):
///   (p+1) c(f; Mp n)
///     - p * sum_{a | gcd(Mp, n)} a^(k-1) c(f; n Mp / a^2)
///     + p^(k-1) * sum_{a | gcd(Mp/p^2, n)} a^(k-1) c(f; n Mp / (p^2 a^2))  = 0 (mod ell),
/// the third term suppressed when p^2 does not divide Mp.
IdentityCheckResult composite_identity_check(const ModSeries& f, u64 p, u64 m, int k, i64 bound);

/// g - (beta|ell) Theta^((ell-1)/2) g: kills the coefficients on every
/// progression ell Z + beta' with (beta'|ell) = (beta|ell).
ModSeries theta_kill(const ModSeries& g, i64 beta);

/// Theta g; its image under U_ell vanishes identically mod ell.
ModSeries theta_zero_kill(const ModSeries& g);

/// Theta applied `times` times in one pass (multiplier n^times mod ell).
ModSeries theta_iterated(const ModSeries& g, u64 times);

} // namespace conglab::hecke
