#pragma once

#include <map>
#include <optional>

#include "conglab/certificates.hpp"

namespace conglab::engine {

using qseries::ModSeries;

struct ScanParams {
    u64 max_modulus = 64;
    i64 bound = 100000;
    u64 support_min = 25;
    /// Structural support of the series (e.g. 24Z + 23 for series brought to
    /// the integer grid from the 1/24 lattice).  Indices off the lattice are
    /// structural zeros and do not count towards the support threshold.
    std::optional<Progression> support_lattice;
};

/// All maximal progressions (M <= max_modulus, beta) on which every tested
/// coefficient vanishes, with at least support_min indices tested and the
/// form nonzero somewhere below the bound.  Maximality is relative to the
/// divisor lattice: a progression is dropped when a proper divisor modulus
/// already carries the congruence.  Witnesses record a nonzero index in each
/// immediately larger progression.
std::vector<CongruenceCertificate> scan(const ModSeries& f, const ScanParams& params);

/// Does the claim hold on the data up to `bound`?  Writes the least failing
/// index when it does not.
bool claim_holds(const ModSeries& f, const Claim& claim, i64 bound, i64* first_fail = nullptr);

/// Gap rule: from a congruence on M Z + beta and a prime p | M prime to
/// ell * level, derive the gap congruence on (M/p) n + Mp beta', p not
/// dividing n, with Mp beta' = beta (mod Mp#).
CongruenceCertificate rule_gap(const CongruenceCertificate& parent, u64 p);

/// Square-free shrink: M' = gcd(M, Msf * level * beta), with Msf the largest
/// square-free divisor of M (rule "B.2"); the weaker variant replaces Msf by
/// gcd(8, M) * prod of odd primes (rule "P3.2-sf").
CongruenceCertificate rule_shrink(const CongruenceCertificate& parent, u64 level, bool squareclass_variant = false);

/// Prime removal: when Mp | beta, or p^2 does not divide M, the congruence
/// descends to Mp# Z + beta.
CongruenceCertificate rule_remove_prime(const CongruenceCertificate& parent, u64 p);

/// Claims (M, beta') for every beta' in the square class of beta modulo M
/// compatible with beta mod level.
std::vector<CongruenceCertificate> square_class_closure(const CongruenceCertificate& parent, u64 level);

struct FactorComponent {
    u64 prime = 2;
    u64 prime_power = 2; // M_p
    u64 residue = 0;     // beta mod M_p
};

struct ClaimTree {
    Progression root;
    std::vector<FactorComponent> components;
};

/// Prime-by-prime decomposition of a progression claim.
ClaimTree factor_claim(const CongruenceCertificate& cert);
Progression recombine(const ClaimTree& tree);

/// Criterion predictions for table agreement: period d per prime p; a scanned
/// gap-shaped claim p^(m+1) Z + p^m u must satisfy d | m + 1.
using PredictionMap = std::map<u64, u64>;

struct ValidationReport {
    struct Discrepancy {
        size_t certificate_index = 0;
        std::string reason;
        i64 witness = -1;
    };
    std::vector<Discrepancy> items;
    size_t checked = 0;
    bool ok() const { return items.empty(); }
};

/// Re-verify every certificate against the coefficient data (best effort
/// within the available precision); optionally check scanned claims against
/// criterion predictions.
ValidationReport cross_validate(const std::vector<CongruenceCertificate>& certs, const ModSeries& data,
                                const std::optional<PredictionMap>& predictions = std::nullopt);

/// Raw-grid progression translated into eta-grid coordinates: solutions n of
/// denom * n - 1 = beta (mod M), when the progression meets the eta support.
std::optional<Progression> eta_grid_progression(const Progression& raw, u64 denom = 24);

} // namespace conglab::engine
