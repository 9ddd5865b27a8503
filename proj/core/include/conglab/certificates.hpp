#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "conglab/qseries.hpp"

// Certificate records shared by the criterion and engine modules.

namespace conglab {

using u64 = algebra::u64;
using i64 = algebra::i64;

/// Arithmetic progression M Z + beta.
struct Progression {
    u64 modulus = 1;
    u64 residue = 0;
    bool operator==(const Progression& o) const { return modulus == o.modulus && residue == o.residue; }
};

/// {S n + o : n in Z, p does not divide n}.
struct GapProgression {
    u64 stride = 1;
    u64 offset = 0;
    u64 gap_prime = 2;
    bool operator==(const GapProgression& o) const {
        return stride == o.stride && offset == o.offset && gap_prime == o.gap_prime;
    }
};

using Claim = std::variant<Progression, GapProgression>;

/// Factorization data of 1 - lambda X + c X^2 mod ell and the order of the
/// root ratio.  The admissible gap exponents are {m >= 1 : period | m + 1}.
struct LPolyAnalysis {
    enum class Kind { Repeated, Split, Irreducible };

    u64 p = 2;
    u64 ell = 3;
    bool lambda_rational = true;
    u64 lambda = 0;                    // rational eigenvalue
    std::string lambda_repr;           // printable eigenvalue (extensions included)
    u64 c = 1;                         // chi(p) p^(k-1) mod ell
    Kind kind = Kind::Repeated;
    u64 period = 1;                    // d
    u64 alpha = 0, beta = 0;           // split case roots in F_ell
    std::array<u64, 2> alpha_ext{0, 0}; // irreducible case: alpha in F_ell[x]/(x^2 - lambda x + c)

    bool admits_exponent(u64 m) const { return (m + 1) % period == 0; }
    std::vector<u64> first_exponents(size_t count) const {
        std::vector<u64> out;
        for (u64 m = period - 1; out.size() < count; m += period)
            if (m >= 1) out.push_back(m);
        return out;
    }
};

struct ComponentCertificate {
    LPolyAnalysis analysis;
    size_t multiplicity = 1;
    bool exponent_ok = false;
};

struct CongruenceCertificate;

struct EvidenceVerified {
    i64 bound = 0;
    u64 support = 0;
};

struct EvidenceHecke {
    std::vector<ComponentCertificate> components;
    bool certified = false;
};

struct EvidenceDerived {
    std::string rule;
    std::shared_ptr<const CongruenceCertificate> parent;
};

using Evidence = std::variant<EvidenceVerified, EvidenceHecke, EvidenceDerived>;

struct MaximalityWitness {
    Progression covering;
    i64 index = 0; // coefficient index with a nonzero value
};

struct CongruenceCertificate {
    qseries::FormDescriptor form;
    u64 ell = 3;
    Claim claim;
    Evidence evidence;
    std::vector<MaximalityWitness> witnesses;
};

/// Does the claim contain the integer n?
bool claim_contains(const Claim& c, i64 n);

std::string claim_to_string(const Claim& c);

} // namespace conglab
