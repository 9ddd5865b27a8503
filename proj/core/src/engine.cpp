#include "conglab/engine.hpp"

#include <algorithm>
#include <numeric>

namespace conglab {

bool claim_contains(const Claim& c, i64 n) {
    if (std::holds_alternative<Progression>(c)) {
        const auto& p = std::get<Progression>(c);
        return algebra::reduce_signed(n, p.modulus) == p.residue;
    }
    const auto& g = std::get<GapProgression>(c);
    const i64 s = static_cast<i64>(g.stride);
    i64 t = n - static_cast<i64>(g.offset);
    if (t % s != 0) return false;
    i64 q = t / s;
    return q % static_cast<i64>(g.gap_prime) != 0;
}

std::string claim_to_string(const Claim& c) {
    if (std::holds_alternative<Progression>(c)) {
        const auto& p = std::get<Progression>(c);
        return std::to_string(p.modulus) + "Z+" + std::to_string(p.residue);
    }
    const auto& g = std::get<GapProgression>(c);
    return std::to_string(g.stride) + "(Z\\" + std::to_string(g.gap_prime) + "Z)+" + std::to_string(g.offset);
}

} // namespace conglab

namespace conglab::engine {

bool claim_holds(const ModSeries& f, const Claim& claim, i64 bound, i64* first_fail) {
    const i64 hi = std::min<i64>(bound + 1, f.precision());
    for (i64 n = f.valuation(); n < hi; ++n) {
        if (!claim_contains(claim, n)) continue;
        if (f.coeff(n) != 0) {
            if (first_fail) *first_fail = n;
            return false;
        }
    }
    return true;
}

namespace {

/// Number of indices in [lo, hi] lying on M Z + beta and on the support
/// lattice (when given): a CRT intersection count.
u64 tested_count(i64 lo, i64 hi, u64 M, u64 beta, const std::optional<Progression>& lattice) {
    u64 step = M;
    i64 first;
    if (lattice) {
        const u64 L = lattice->modulus;
        const u64 g = std::gcd(M, L);
        const u64 diff = algebra::reduce_signed(static_cast<i64>(lattice->residue) - static_cast<i64>(beta), g);
        if (diff != 0) return 0; // progressions never meet
        step = M / g * L;
        // Solve n = beta (M), n = r (L) by stepping through the smaller class.
        i64 n = lo + algebra::reduce_signed(static_cast<i64>(beta) - lo, M);
        while (n <= hi && algebra::reduce_signed(n, L) != lattice->residue) n += static_cast<i64>(M);
        if (n > hi) return 0;
        first = n;
    } else {
        first = lo + algebra::reduce_signed(static_cast<i64>(beta) - lo, M);
        if (first > hi) return 0;
    }
    return static_cast<u64>((hi - first) / static_cast<i64>(step)) + 1;
}

} // namespace

std::vector<CongruenceCertificate> scan(const ModSeries& f, const ScanParams& params) {
    if (f.denom() != 1) throw DomainError("scan requires the integer grid");
    if (f.precision() <= params.bound) throw PrecisionError("insufficient precision");
    const i64 lo = f.valuation();
    const i64 hi = params.bound;

    bool any_nonzero = false;
    for (i64 n = lo; n <= hi && !any_nonzero; ++n) any_nonzero = f.coeff(n) != 0;

    // pass[M] = bitmap over beta of surviving progressions.
    std::vector<std::vector<char>> pass(params.max_modulus + 1);
    std::vector<std::vector<i64>> fail_witness(params.max_modulus + 1);
    for (u64 M = 1; M <= params.max_modulus; ++M) {
        pass[M].assign(M, 1);
        fail_witness[M].assign(M, -1);
        for (i64 n = lo; n <= hi; ++n) {
            if (f.coeff(n) == 0) continue;
            const u64 beta = algebra::reduce_signed(n, M);
            if (pass[M][beta]) {
                pass[M][beta] = 0;
                fail_witness[M][beta] = n;
            }
        }
        if (!any_nonzero) std::fill(pass[M].begin(), pass[M].end(), 0); // zero form: vacuous
        // Support threshold: structural zeros do not count as evidence.
        for (u64 beta = 0; beta < M; ++beta) {
            if (!pass[M][beta]) continue;
            if (tested_count(lo, hi, M, beta, params.support_lattice) < params.support_min) pass[M][beta] = 0;
        }
    }

    std::vector<CongruenceCertificate> out;
    for (u64 M = 1; M <= params.max_modulus; ++M) {
        for (u64 beta = 0; beta < M; ++beta) {
            if (!pass[M][beta]) continue;
            // Maximal iff no proper divisor modulus carries the congruence.
            bool maximal = true;
            for (u64 d = 1; d < M && maximal; ++d)
                if (M % d == 0 && pass[d][beta % d]) maximal = false;
            if (!maximal) continue;

            CongruenceCertificate cert;
            cert.form = f.descriptor();
            cert.ell = f.domain().m;
            cert.claim = Progression{M, beta};
            cert.evidence = EvidenceVerified{hi, tested_count(lo, hi, M, beta, params.support_lattice)};
            // Witnesses on the immediately larger progressions M/q.
            for (const auto& [q, e] : algebra::factorize(M)) {
                (void)e;
                const u64 Mq = M / q;
                if (Mq == 0) continue;
                const i64 w = Mq >= 1 && fail_witness[Mq].size() > beta % Mq ? fail_witness[Mq][beta % Mq] : -1;
                if (w >= 0) cert.witnesses.push_back({Progression{Mq, beta % Mq}, w});
            }
            out.push_back(std::move(cert));
        }
    }
    return out;
}

namespace {

struct ClaimParts {
    u64 M;
    u64 beta;
};

ClaimParts progression_of(const CongruenceCertificate& cert) {
    if (!std::holds_alternative<Progression>(cert.claim)) throw DomainError("rule requires a progression claim");
    const auto& p = std::get<Progression>(cert.claim);
    return {p.modulus, p.residue};
}

u64 p_part(u64 M, u64 p) {
    u64 mp = 1;
    while (M % p == 0) {
        mp *= p;
        M /= p;
    }
    return mp;
}

u64 radical(u64 M) {
    u64 r = 1;
    for (const auto& [p, e] : algebra::factorize(M)) {
        (void)e;
        r *= p;
    }
    return r;
}

std::shared_ptr<const CongruenceCertificate> share(const CongruenceCertificate& c) {
    return std::make_shared<const CongruenceCertificate>(c);
}

} // namespace

CongruenceCertificate rule_gap(const CongruenceCertificate& parent, u64 p) {
    auto [M, beta] = progression_of(parent);
    if (M % p != 0) throw DomainError("p must divide the modulus");
    if (p == parent.ell || parent.form.level % p == 0) throw DomainError("p must be prime to ell and the level");
    const u64 Mp = p_part(M, p);
    const u64 Mps = M / Mp; // Mp#
    // offset = Mp * beta' with Mp beta' = beta (mod Mp#).
    u64 offset = 0;
    if (Mps > 1) {
        const u64 bp = algebra::mul_mod(beta % Mps, algebra::inv_mod(Mp % Mps, Mps), Mps);
        offset = Mp * bp;
    }
    CongruenceCertificate out;
    out.form = parent.form;
    out.ell = parent.ell;
    out.claim = GapProgression{M / p, offset, p};
    out.evidence = EvidenceDerived{"B.1", share(parent)};
    return out;
}

CongruenceCertificate rule_shrink(const CongruenceCertificate& parent, u64 level, bool squareclass_variant) {
    auto [M, beta] = progression_of(parent);
    u64 msf;
    if (!squareclass_variant) {
        msf = radical(M);
    } else {
        msf = std::gcd<u64>(8, M);
        for (const auto& [p, e] : algebra::factorize(M)) {
            (void)e;
            if (p != 2) msf *= p;
        }
    }
    // gcd with Msf * level * beta; beta = 0 keeps M (gcd(M, 0) = M).
    u64 prod_mod = 0;
    {
        // Compute gcd(M, msf * level * beta) without overflow: gcd is
        // determined by gcd(M, x mod M) together with x == 0.
        unsigned __int128 x = static_cast<unsigned __int128>(msf) * level * beta;
        if (x == 0)
            prod_mod = 0;
        else {
            u64 g = static_cast<u64>(x % M);
            prod_mod = g == 0 ? M : std::gcd(M, g);
        }
    }
    const u64 Mprime = prod_mod == 0 ? M : prod_mod;
    CongruenceCertificate out;
    out.form = parent.form;
    out.ell = parent.ell;
    out.claim = Progression{Mprime, beta % Mprime};
    out.evidence = EvidenceDerived{squareclass_variant ? "P3.2-sf" : "B.2", share(parent)};
    return out;
}

CongruenceCertificate rule_remove_prime(const CongruenceCertificate& parent, u64 p) {
    auto [M, beta] = progression_of(parent);
    if (M % p != 0) throw DomainError("p must divide the modulus");
    if (p == parent.ell || parent.form.level % p == 0) throw DomainError("p must be prime to ell and the level");
    const u64 Mp = p_part(M, p);
    const bool hyp = (beta % Mp == 0) || (M % (p * p) != 0);
    if (!hyp) throw DomainError("removal hypothesis violated");
    const u64 Mps = M / Mp;
    CongruenceCertificate out;
    out.form = parent.form;
    out.ell = parent.ell;
    out.claim = Progression{Mps, Mps == 0 ? 0 : beta % Mps};
    out.evidence = EvidenceDerived{"B.3", share(parent)};
    return out;
}

std::vector<CongruenceCertificate> square_class_closure(const CongruenceCertificate& parent, u64 level) {
    auto [M, beta] = progression_of(parent);
    if (std::gcd(M, level) != 1) throw DomainError("modulus must be prime to the level");
    std::vector<char> seen(M, 0);
    std::vector<CongruenceCertificate> out;
    for (u64 u = 1; u < M || (M == 1 && u == 1); ++u) {
        if (M > 1 && std::gcd(u, M) != 1) continue;
        const u64 b2 = algebra::mul_mod(algebra::mul_mod(u, u, M == 0 ? 1 : M), beta % (M == 0 ? 1 : M), M == 0 ? 1 : M);
        if (M > 1 && seen[b2]) continue;
        if (M > 1) seen[b2] = 1;
        if (level > 1 && b2 % std::gcd<u64>(level, M) != beta % std::gcd<u64>(level, M)) continue;
        CongruenceCertificate c;
        c.form = parent.form;
        c.ell = parent.ell;
        c.claim = Progression{M, M == 1 ? 0 : b2};
        c.evidence = EvidenceDerived{"P3.2", share(parent)};
        out.push_back(std::move(c));
        if (M == 1) break;
    }
    std::sort(out.begin(), out.end(), [](const CongruenceCertificate& a, const CongruenceCertificate& b) {
        return std::get<Progression>(a.claim).residue < std::get<Progression>(b.claim).residue;
    });
    return out;
}

ClaimTree factor_claim(const CongruenceCertificate& cert) {
    auto [M, beta] = progression_of(cert);
    ClaimTree tree;
    tree.root = Progression{M, beta};
    for (const auto& [p, e] : algebra::factorize(M)) {
        u64 q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        tree.components.push_back({p, q, beta % q});
    }
    return tree;
}

Progression recombine(const ClaimTree& tree) {
    u64 M = 1, beta = 0;
    for (const auto& comp : tree.components) {
        if (M == 1) {
            M = comp.prime_power;
            beta = comp.residue;
        } else {
            // CRT combine.
            const u64 m2 = comp.prime_power;
            const u64 inv = algebra::inv_mod(M % m2, m2);
            const u64 diff = algebra::sub_mod(comp.residue % m2, beta % m2, m2);
            beta = beta + M * algebra::mul_mod(diff, inv, m2);
            M *= m2;
        }
    }
    return Progression{M, M == 1 ? 0 : beta % M};
}

ValidationReport cross_validate(const std::vector<CongruenceCertificate>& certs, const ModSeries& data,
                                const std::optional<PredictionMap>& predictions) {
    ValidationReport report;
    for (size_t i = 0; i < certs.size(); ++i) {
        const auto& cert = certs[i];
        ++report.checked;
        if (cert.ell != data.domain().m) {
            report.items.push_back({i, "modulus mismatch with data", -1});
            continue;
        }
        // Determine the checkable bound.
        i64 bound = data.precision() - 1;
        if (std::holds_alternative<EvidenceVerified>(cert.evidence))
            bound = std::min<i64>(bound, std::get<EvidenceVerified>(cert.evidence).bound);
        i64 witness = -1;
        if (!claim_holds(data, cert.claim, bound, &witness)) {
            report.items.push_back({i, "claimed congruence fails on the data", witness});
            continue;
        }
        // Hecke-certified claims must actually be certified.
        if (std::holds_alternative<EvidenceHecke>(cert.evidence) && !std::get<EvidenceHecke>(cert.evidence).certified) {
            report.items.push_back({i, "certificate carries an uncertified analysis", -1});
            continue;
        }
        // Table agreement for scanned gap-shaped claims on prime powers.
        if (predictions && std::holds_alternative<EvidenceVerified>(cert.evidence) &&
            std::holds_alternative<Progression>(cert.claim)) {
            const auto& prog = std::get<Progression>(cert.claim);
            auto factors = algebra::factorize(prog.modulus);
            if (factors.size() == 1 && factors[0].first != cert.ell) {
                const u64 p = factors[0].first;
                const int e = factors[0].second;
                // beta with v_p(beta) = e-1 corresponds to gap exponent e-1.
                u64 bp = prog.residue;
                int v = 0;
                while (bp && bp % p == 0) {
                    bp /= p;
                    ++v;
                }
                if (prog.residue != 0 && v == e - 1 && e >= 2) {
                    auto it = predictions->find(p);
                    if (it != predictions->end() && static_cast<u64>(e) % it->second != 0) {
                        report.items.push_back({i, "scanned congruence not predicted by the criterion", -1});
                        continue;
                    }
                }
            }
        }
    }
    return report;
}

std::optional<Progression> eta_grid_progression(const Progression& raw, u64 denom) {
    // Solve denom * n = beta + 1 (mod M).
    const u64 M = raw.modulus;
    const u64 g = std::gcd(denom, M);
    if ((raw.residue + 1) % g != 0) return std::nullopt;
    const u64 M2 = M / g;
    if (M2 == 1) return Progression{1, 0};
    const u64 rhs = ((raw.residue + 1) / g) % M2;
    const u64 inv = algebra::inv_mod((denom / g) % M2, M2);
    return Progression{M2, algebra::mul_mod(rhs, inv, M2)};
}

} // namespace conglab::engine
