#include "conglab/forms.hpp"

#include <algorithm>

namespace conglab::forms {

using qseries::FormDescriptor;
using qseries::IntDomain;
using qseries::ModDomain;

int dim_mk(int k) {
    if (k < 0 || k % 2) return 0;
    if (k % 12 == 2) return k / 12;
    return k / 12 + 1;
}

namespace {

// Generalized pentagonal exponents j(3j-1)/2 with signs, below `bound`.
struct PentTerm {
    i64 exp;
    int sign;
};

std::vector<PentTerm> pentagonal_exponents(i64 bound) {
    std::vector<PentTerm> out;
    for (i64 j = 1;; ++j) {
        i64 g1 = j * (3 * j - 1) / 2;
        i64 g2 = j * (3 * j + 1) / 2;
        int sign = (j % 2) ? -1 : 1;
        if (g1 < bound) out.push_back({g1, sign});
        if (g2 < bound) out.push_back({g2, sign});
        if (g1 >= bound && g2 >= bound) break;
    }
    std::sort(out.begin(), out.end(), [](const PentTerm& a, const PentTerm& b) { return a.exp < b.exp; });
    return out;
}

template <class D>
qseries::QExpansion<D> pentagonal_impl(D dom, i64 precision) {
    if (precision < 1) throw PrecisionError("insufficient precision");
    std::vector<typename D::Value> c(static_cast<size_t>(precision), D::zero());
    c[0] = qseries::detail_q::dom_from_int(dom, 1);
    for (const auto& t : pentagonal_exponents(precision)) c[static_cast<size_t>(t.exp)] = qseries::detail_q::dom_from_int(dom, t.sign);
    return qseries::QExpansion<D>(std::move(dom), 1, 0, precision, std::move(c));
}

template <class D>
qseries::QExpansion<D> eisenstein_impl(D dom, int k, i64 precision) {
    if (k != 4 && k != 6) throw DomainError("only E4 and E6 are generated");
    if (precision < 1) throw PrecisionError("insufficient precision");
    const int power = k == 4 ? 3 : 5;
    const i64 scalar = k == 4 ? 240 : -504;
    std::vector<typename D::Value> sig(static_cast<size_t>(precision), D::zero());
    // sigma_{k-1} by divisor sieve.
    for (i64 d = 1; d < precision; ++d) {
        typename D::Value dk = qseries::detail_q::dom_from_int(dom, d);
        typename D::Value dpow = dk;
        for (int i = 1; i < power; ++i) dpow = dom.mul(dpow, dk);
        for (i64 m = d; m < precision; m += d) sig[static_cast<size_t>(m)] = dom.add(sig[static_cast<size_t>(m)], dpow);
    }
    typename D::Value s = qseries::detail_q::dom_from_int(dom, scalar);
    for (i64 n = 1; n < precision; ++n) sig[static_cast<size_t>(n)] = dom.mul(sig[static_cast<size_t>(n)], s);
    sig[0] = qseries::detail_q::dom_from_int(dom, 1);
    qseries::QExpansion<D> out(std::move(dom), 1, 0, precision, std::move(sig));
    FormDescriptor d;
    d.recipe = k == 4 ? "e4" : "e6";
    d.twice_weight = 2 * k;
    out.set_descriptor(d);
    return out;
}

// (1-q^n)-product to the 24th power: four squarings and one final product.
template <class D>
qseries::QExpansion<D> delta_impl(D dom, i64 precision) {
    if (precision < 2) throw PrecisionError("insufficient precision");
    auto pent = pentagonal_impl(dom, precision);
    auto p2 = qseries::mul(pent, pent);
    auto p4 = qseries::mul(p2, p2);
    auto p8 = qseries::mul(p4, p4);
    auto p16 = qseries::mul(p8, p8);
    auto p24 = qseries::mul(p16, p8);
    auto out = p24.shifted(1).truncated(precision);
    FormDescriptor d;
    d.recipe = "delta";
    d.twice_weight = 24;
    out.set_descriptor(d);
    return out;
}

} // namespace

IntSeries pentagonal_series(i64 precision) { return pentagonal_impl(IntDomain{}, precision); }
ModSeries pentagonal_series_mod(u64 modulus, i64 precision) { return pentagonal_impl(ModDomain{modulus}, precision); }

IntSeries eisenstein(int k, i64 precision) { return eisenstein_impl(IntDomain{}, k, precision); }
ModSeries eisenstein_mod(int k, u64 ell, i64 precision) { return eisenstein_impl(ModDomain{ell}, k, precision); }

IntSeries delta(i64 precision) { return delta_impl(IntDomain{}, precision); }
ModSeries delta_mod(u64 ell, i64 precision) { return delta_impl(ModDomain{ell}, precision); }

IntSeries eta_power(int r, i64 precision_numer) {
    if (precision_numer <= r) throw PrecisionError("insufficient precision");
    // eta^r = q^(r/24) * P(q)^r with P the pentagonal product.
    const i64 int_prec = (precision_numer - r) / 24 + 1;
    IntSeries p = pentagonal_series(int_prec);
    IntSeries acc = IntSeries::one(IntDomain{}, 1, int_prec);
    IntSeries base = r >= 0 ? p : qseries::invert(p);
    int e = r >= 0 ? r : -r;
    while (e) {
        if (e & 1) acc = qseries::mul(acc, base);
        base = qseries::mul(base, base);
        e >>= 1;
    }
    acc = acc.truncated(int_prec);
    // Spread onto the 1/24 grid: coefficient at numerator r + 24*j.
    const i64 val = r;
    std::vector<mpz_class> c(static_cast<size_t>(precision_numer - val), mpz_class(0));
    for (i64 j = 0; j < acc.precision(); ++j) {
        i64 numer = r + 24 * j;
        if (numer >= precision_numer) break;
        c[static_cast<size_t>(numer - val)] = acc.coeff(j);
    }
    IntSeries out(IntDomain{}, 24, val, precision_numer, std::move(c));
    FormDescriptor d;
    d.recipe = "eta^" + std::to_string(r);
    d.twice_weight = r;
    out.set_descriptor(d);
    return out;
}

std::vector<u64> partition_mod(u64 modulus, i64 n_max) {
    if (modulus < 2) throw DomainError("modulus must be at least 2");
    if (n_max < 0) throw DomainError("n_max must be nonnegative");
    std::vector<u64> p(static_cast<size_t>(n_max) + 1, 0);
    p[0] = 1 % modulus;
    std::vector<PentTerm> terms = pentagonal_exponents(n_max + 1);
    for (i64 n = 1; n <= n_max; ++n) {
        u64 acc = 0;
        for (const auto& t : terms) {
            if (t.exp > n) break;
            u64 v = p[static_cast<size_t>(n - t.exp)];
            // p(n) = sum (-1)^(j+1) p(n - g_j): the stored sign is (-1)^j.
            acc = t.sign < 0 ? algebra::add_mod(acc, v, modulus) : algebra::sub_mod(acc, v, modulus);
        }
        p[static_cast<size_t>(n)] = acc;
    }
    return p;
}

std::vector<mpz_class> partition_exact(i64 n_max) {
    std::vector<mpz_class> p(static_cast<size_t>(n_max) + 1);
    p[0] = 1;
    std::vector<PentTerm> terms = pentagonal_exponents(n_max + 1);
    for (i64 n = 1; n <= n_max; ++n) {
        mpz_class acc = 0;
        for (const auto& t : terms) {
            if (t.exp > n) break;
            if (t.sign < 0)
                acc += p[static_cast<size_t>(n - t.exp)];
            else
                acc -= p[static_cast<size_t>(n - t.exp)];
        }
        p[static_cast<size_t>(n)] = acc;
    }
    return p;
}

LevelOneBasis level_one_basis(int k, u64 ell, i64 precision) {
    if (ell < 5 || !algebra::is_prime(ell)) throw DomainError("basis construction needs a prime ell >= 5");
    if (k < 0 || k % 2) throw DomainError("weight must be even and nonnegative");
    const int D = dim_mk(k);
    if (precision < 2 * D) throw PrecisionError("insufficient precision");

    LevelOneBasis out;
    out.k = k;
    out.ell = ell;
    out.dim = D;
    out.precision = precision;
    if (D == 0) return out;

    // Monomials E4^a E6^b with 4a + 6b = k; there are exactly dim of them.
    std::vector<std::pair<int, int>> monos;
    for (int b = 0; 6 * b <= k; ++b) {
        if ((k - 6 * b) % 4) continue;
        monos.emplace_back((k - 6 * b) / 4, b);
    }
    if (static_cast<int>(monos.size()) != D) throw DomainError("degenerate basis");

    int amax = 0, bmax = 0;
    for (auto [a, b] : monos) {
        amax = std::max(amax, a);
        bmax = std::max(bmax, b);
    }
    std::vector<ModSeries> e4pow, e6pow;
    e4pow.reserve(amax + 1);
    e6pow.reserve(bmax + 1);
    e4pow.push_back(ModSeries::one(ModDomain{ell}, 1, precision));
    e6pow.push_back(ModSeries::one(ModDomain{ell}, 1, precision));
    if (amax > 0) {
        ModSeries e4 = eisenstein_mod(4, ell, precision);
        for (int a = 1; a <= amax; ++a) e4pow.push_back(qseries::mul(e4pow.back(), e4).truncated(precision));
    }
    if (bmax > 0) {
        ModSeries e6 = eisenstein_mod(6, ell, precision);
        for (int b = 1; b <= bmax; ++b) e6pow.push_back(qseries::mul(e6pow.back(), e6).truncated(precision));
    }

    std::vector<std::vector<u64>> rows;
    for (auto [a, b] : monos) rows.push_back(qseries::mul(e4pow[a], e6pow[b]).truncated(precision).raw());

    // Reduced row echelon form over F_ell.
    const size_t W = static_cast<size_t>(precision);
    size_t pivot_col = 0;
    std::vector<size_t> pivots;
    for (size_t r = 0; r < rows.size() && pivot_col < W; ++pivot_col) {
        size_t sel = r;
        while (sel < rows.size() && rows[sel][pivot_col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        u64 inv = algebra::inv_mod(rows[r][pivot_col], ell);
        for (size_t j = pivot_col; j < W; ++j) rows[r][j] = algebra::mul_mod(rows[r][j], inv, ell);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][pivot_col] == 0) continue;
            u64 f = rows[i][pivot_col];
            for (size_t j = pivot_col; j < W; ++j)
                rows[i][j] = algebra::sub_mod(rows[i][j], algebra::mul_mod(f, rows[r][j], ell), ell);
        }
        pivots.push_back(pivot_col);
        ++r;
    }
    if (static_cast<int>(pivots.size()) != D) throw DomainError("degenerate basis");
    for (int i = 0; i < D; ++i)
        if (pivots[static_cast<size_t>(i)] != static_cast<size_t>(i)) throw DomainError("degenerate basis");

    for (int i = 0; i < D; ++i) out.basis.emplace_back(ModDomain{ell}, 1, 0, precision, std::move(rows[static_cast<size_t>(i)]));
    out.provenance = std::move(monos);
    return out;
}

std::vector<i64> coefficient_full_rank_witness(const LevelOneBasis& basis, u64 p) {
    if (basis.ell == p) throw DomainError("p must differ from ell");
    const int D = basis.dim;
    if (D == 0) return {};
    const u64 ell = basis.ell;
    // Greedy column selection with incremental elimination.
    std::vector<std::vector<u64>> ech; // echelon of selected columns (length-D vectors)
    std::vector<size_t> piv;
    std::vector<i64> chosen;
    for (i64 n = 1; n < basis.precision && static_cast<int>(chosen.size()) < D; ++n) {
        if (n % static_cast<i64>(p) == 0) continue;
        std::vector<u64> col(static_cast<size_t>(D));
        for (int i = 0; i < D; ++i) col[static_cast<size_t>(i)] = basis.basis[static_cast<size_t>(i)].coeff(n);
        // Reduce against rows already selected.
        for (size_t r = 0; r < ech.size(); ++r) {
            u64 f = col[piv[r]];
            if (!f) continue;
            for (int i = 0; i < D; ++i)
                col[static_cast<size_t>(i)] = algebra::sub_mod(col[static_cast<size_t>(i)], algebra::mul_mod(f, ech[r][static_cast<size_t>(i)], ell), ell);
        }
        size_t pv = 0;
        while (pv < col.size() && col[pv] == 0) ++pv;
        if (pv == col.size()) continue;
        u64 inv = algebra::inv_mod(col[pv], ell);
        for (auto& v : col) v = algebra::mul_mod(v, inv, ell);
        ech.push_back(std::move(col));
        piv.push_back(pv);
        chosen.push_back(n);
    }
    if (static_cast<int>(chosen.size()) != D)
        throw DomainError("no full-rank witness within the precision window");
    return chosen;
}

} // namespace conglab::forms
