#pragma once

#include <optional>

#include "conglab/certificates.hpp"
#include "conglab/forms.hpp"
#include "conglab/heckeops.hpp"

namespace conglab::criterion {

using qseries::ModSeries;

/// Classify 1 - lambda X + c X^2 mod ell by its discriminant and compute the
/// order of the root ratio.  Throws DomainError("ramified Hecke datum") when
/// c = 0.
LPolyAnalysis analyze_lpoly(const algebra::Residue& lambda, const algebra::Residue& c);

/// Same analysis for an eigenvalue in an extension field (the quadratic in X
/// is solved over F_{ell^e} or its quadratic extension).
LPolyAnalysis analyze_lpoly_ext(const algebra::ExtElement& lambda, u64 c_val, u64 p);

/// One cell of the maximal-congruence table.
struct DeltaTableCell {
    bool diagonal = false;         // p == ell column
    bool full_progression = false; // diagonal: does ell Z carry a congruence
    std::vector<u64> exponents;    // off-diagonal: first few admissible m
};

struct DeltaTable {
    std::vector<u64> ells;
    std::vector<u64> primes;
    std::vector<std::vector<DeltaTableCell>> cells; // [ell index][prime index]
};

/// Maximal progressions for the discriminant cusp form: off-diagonal cells
/// via the L-polynomial analysis with lambda = tau(p), diagonal cells by a
/// direct scan of c(Delta; ell n) up to verify_bound.
DeltaTable delta_table(const std::vector<u64>& ells, const std::vector<u64>& primes, size_t count_per_cell,
                       i64 verify_bound);

/// True when gcd(ell(ell-1), m+1) = 1 and chi(p) p^(k-1) is a non-square mod
/// ell: any form with the gap congruence on p^m(Z \ pZ) vanishes mod ell.
bool impossibility(u64 m, u64 ell, int k, int chi_p_val, u64 p);

/// A generalized Hecke eigencomponent mod ell with coefficients in F_{ell^e}.
struct EigenComponent {
    algebra::ExtElement eigenvalue;
    std::shared_ptr<const algebra::FqContext> field;
    i64 valuation = 0;
    i64 precision = 0;
    std::vector<u64> coeffs; // flat, (precision - valuation) * degree
    size_t multiplicity = 1;

    algebra::ExtElement coeff(i64 n) const;
    bool is_zero() const;
};

/// Decompose a level-one form into generalized T_p eigencomponents.  Verifies
/// that the minimal polynomial is squarefree ("semisimplicity failure"
/// otherwise) and that f lies in the span of the basis ("not in span").
std::vector<EigenComponent> eigen_decompose(const ModSeries& f, u64 p, int k, u64 ell);

/// Check the eigen-equation of a component on its window (given weight k).
bool component_satisfies_eigen_equation(const EigenComponent& comp, u64 p, int k);

/// Do the components sum to f on the common window?  Conjugate components
/// share a field context and their sum must already be rational.
bool components_sum_to(const std::vector<EigenComponent>& comps, const ModSeries& f);

/// Does the component vanish on the claim set within its window?
bool component_satisfies_claim(const EigenComponent& comp, const Claim& claim);

struct CertifyResult {
    bool certified = false;
    CongruenceCertificate certificate;
};

/// Certify the gap claim c(f; p^m n) = 0 mod ell for all p-coprime n: each
/// eigencomponent's exponent set must contain m.  For ell < 5 (no basis) the
/// form must already be a normalized eigenform.  A beta prime to p narrows the
/// recorded claim to the single progression p^(m+1) Z + p^m beta.
CertifyResult certify_claim(const ModSeries& f, int k, u64 p, u64 m, u64 beta = 0, bool assume_eigenform = false);

/// Solve U_ell^steps h = g over candidate weights k' = k_g (mod ell-1),
/// scanning upward; deterministic (least weight, free variables zero).
/// Returns h and its weight.  When out_window > 0 the returned series is
/// rebuilt so that U^steps h is known on at least that window.
std::pair<ModSeries, int> u_ell_preimage(const ModSeries& g, int k_g, int steps, int weight_cap = 4000,
                                         i64 out_window = 0);

/// Least k' = k_start (mod ell-1), k' <= k_start, with f in the mod-ell span
/// of the weight-k' basis.
int filtration(const ModSeries& f, int k_start);

enum class SearchMode { Treneer, Serre };

/// Treneer mode: primes p = -1 (mod ell) with lambda_p = 0 (gap exponent 1).
/// Serre mode: primes p = 1 (mod ell) with lambda_p = 2 and p^(k-1) = 1
/// (gap exponent ell-1).  The form must be a normalized eigenform.
std::vector<std::pair<u64, CertifyResult>> prime_search(const ModSeries& f, int k, SearchMode mode, u64 p_max);

} // namespace conglab::criterion
