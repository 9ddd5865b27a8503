#include "conglab/criterion.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <numeric>
#include <sstream>

#include "conglab/fpoly.hpp"

namespace conglab::criterion {

using algebra::add_mod;
using algebra::ExtElement;
using algebra::FqContext;
using algebra::inv_mod;
using algebra::mul_mod;
using algebra::pow_mod;
using algebra::reduce_signed;
using algebra::Residue;
using algebra::sub_mod;

namespace {

std::string ext_repr(const ExtElement& x) {
    std::ostringstream os;
    const auto& c = x.coeffs();
    os << "[";
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << "]";
    return os.str();
}

// Order of an element of norm dividing q^2-1 in the quadratic extension
// F_q[w]/(w^2 - disc), elements stored as (a, b) = a + b w over F_q.
struct QuadExt {
    std::shared_ptr<const FqContext> base;
    std::vector<u64> disc; // nonsquare in the base field

    using Elem = std::pair<std::vector<u64>, std::vector<u64>>;

    Elem mul(const Elem& x, const Elem& y) const {
        const auto d = base->degree;
        std::vector<u64> t1(d), t2(d), t3(d), a(d), b(d);
        base->mul(x.first.data(), y.first.data(), t1.data());  // ac
        base->mul(x.second.data(), y.second.data(), t2.data()); // bd
        base->mul(t2.data(), disc.data(), t3.data());            // bd*disc
        base->add(t1.data(), t3.data(), a.data());
        base->mul(x.first.data(), y.second.data(), t1.data());  // ad
        base->mul(x.second.data(), y.first.data(), t2.data());  // bc
        base->add(t1.data(), t2.data(), b.data());
        return {a, b};
    }
    Elem one() const {
        const auto d = base->degree;
        std::vector<u64> a(d, 0), b(d, 0);
        base->set_scalar(1, a.data());
        return {a, b};
    }
    bool is_one(const Elem& x) const {
        const auto d = base->degree;
        std::vector<u64> a(d, 0);
        base->set_scalar(1, a.data());
        return x.first == a && base->is_zero(x.second.data());
    }
    Elem pow(Elem x, u64 e) const {
        Elem acc = one();
        while (e) {
            if (e & 1) acc = mul(acc, x);
            x = mul(x, x);
            e >>= 1;
        }
        return acc;
    }
};

u64 order_via_factors(const std::function<bool(u64)>& power_is_one, u64 order_multiple) {
    // Strip primes from the multiple while the power stays 1.
    u64 order = order_multiple;
    for (const auto& [q, a] : algebra::factorize(order_multiple)) {
        (void)a;
        while (order % q == 0 && power_is_one(order / q)) order /= q;
    }
    return order;
}

// Deterministic square root in F_q via Tonelli-Shanks with the least
// non-residue (element counter order); empty when not a square.
std::optional<ExtElement> fq_sqrt(const ExtElement& a) {
    const auto& ctx = a.context();
    const u64 ell = ctx->ell;
    algebra::u128 q = 1;
    for (std::uint32_t i = 0; i < ctx->degree; ++i) q *= ell;
    if (a.is_zero()) return ExtElement::zero(ctx);
    const algebra::u128 half = (q - 1) / 2;
    ExtElement euler = a.pow(half);
    if (!(euler.is_scalar() && euler.scalar_value() == 1)) return std::nullopt;

    algebra::u128 qq = q - 1;
    int s = 0;
    while ((qq & 1) == 0) {
        qq >>= 1;
        ++s;
    }
    // Least non-residue by the deterministic element counter.
    ExtElement z = ExtElement::zero(ctx);
    for (u64 counter = 1;; ++counter) {
        std::vector<u64> coeffs(ctx->degree, 0);
        u64 c = counter;
        for (std::uint32_t j = 0; j < ctx->degree && c; ++j) {
            coeffs[j] = c % ell;
            c /= ell;
        }
        if (c) throw DomainError("no quadratic non-residue found");
        ExtElement cand(ctx, std::move(coeffs));
        if (cand.is_zero()) continue;
        ExtElement e2 = cand.pow(half);
        if (e2.is_scalar() && e2.scalar_value() == 1) continue;
        z = cand;
        break;
    }
    ExtElement m_c = z.pow(qq);
    ExtElement t = a.pow(qq);
    ExtElement r = a.pow((qq + 1) / 2);
    int m = s;
    while (!(t.is_scalar() && t.scalar_value() == 1)) {
        ExtElement t2 = t;
        int i = 0;
        while (!(t2.is_scalar() && t2.scalar_value() == 1)) {
            t2 = t2 * t2;
            ++i;
        }
        ExtElement b = m_c;
        for (int j = 0; j + i + 1 < m; ++j) b = b * b;
        m = i;
        m_c = b * b;
        t = t * m_c;
        r = r * b;
    }
    return r;
}

} // namespace

LPolyAnalysis analyze_lpoly(const Residue& lambda, const Residue& c) {
    const u64 ell = lambda.modulus();
    if (c.modulus() != ell) throw DomainError("residue modulus mismatch");
    if (c.is_zero()) throw DomainError("ramified Hecke datum");

    LPolyAnalysis out;
    out.ell = ell;
    out.lambda = lambda.value();
    out.lambda_repr = std::to_string(lambda.value());
    out.c = c.value();

    Residue disc = lambda * lambda - Residue::raw(4, ell) * c;
    if (disc.is_zero()) {
        out.kind = LPolyAnalysis::Kind::Repeated;
        out.period = ell;
        u64 half = inv_mod(2, ell);
        out.alpha = out.beta = mul_mod(lambda.value(), half, ell);
        return out;
    }
    auto root = sqrt_mod(disc);
    if (root) {
        out.kind = LPolyAnalysis::Kind::Split;
        u64 half = inv_mod(2, ell);
        out.alpha = mul_mod(add_mod(lambda.value(), root->value(), ell), half, ell);
        out.beta = mul_mod(sub_mod(lambda.value(), root->value(), ell), half, ell);
        Residue ratio = Residue::raw(out.alpha, ell) * Residue::raw(out.beta, ell).inverse();
        out.period = algebra::mult_order(ratio);
        return out;
    }
    // Irreducible: alpha is the class of X in F_ell[x]/(x^2 - lambda x + c).
    out.kind = LPolyAnalysis::Kind::Irreducible;
    std::vector<u64> modulus = {c.value(), sub_mod(0, lambda.value(), ell), 1};
    auto ctx = FqContext::make_with_modulus(ell, std::move(modulus));
    ExtElement alpha = ExtElement::generator_class(ctx);
    ExtElement beta = ExtElement::from_scalar(ctx, lambda.value()) - alpha;
    ExtElement ratio = alpha * beta.inverse();
    out.period = algebra::mult_order(ratio);
    out.alpha_ext = {alpha.coeffs()[0], alpha.coeffs()[1]};
    return out;
}

LPolyAnalysis analyze_lpoly_ext(const ExtElement& lambda, u64 c_val, u64 p) {
    const auto& ctx = lambda.context();
    const u64 ell = ctx->ell;
    if (lambda.is_scalar()) {
        auto out = analyze_lpoly(Residue::raw(lambda.scalar_value(), ell), Residue::raw(c_val % ell, ell));
        out.p = p;
        return out;
    }
    if (c_val % ell == 0) throw DomainError("ramified Hecke datum");

    LPolyAnalysis out;
    out.p = p;
    out.ell = ell;
    out.lambda_rational = false;
    out.lambda_repr = ext_repr(lambda);
    out.c = c_val % ell;

    ExtElement c = ExtElement::from_scalar(ctx, c_val % ell);
    ExtElement disc = lambda * lambda - ExtElement::from_scalar(ctx, 4) * c;
    if (disc.is_zero()) {
        out.kind = LPolyAnalysis::Kind::Repeated;
        out.period = ell;
        return out;
    }
    auto root = fq_sqrt(disc);
    const u64 half = inv_mod(2, ell);
    if (root) {
        out.kind = LPolyAnalysis::Kind::Split;
        ExtElement alpha = (lambda + *root) * ExtElement::from_scalar(ctx, half);
        ExtElement beta = (lambda - *root) * ExtElement::from_scalar(ctx, half);
        out.period = algebra::mult_order(alpha * beta.inverse());
        return out;
    }
    // Quadratic extension of F_q by w with w^2 = disc; the ratio
    // alpha/beta = (lambda + w)^2 / (4c) has norm 1, so its order divides q+1.
    out.kind = LPolyAnalysis::Kind::Irreducible;
    algebra::u128 q128 = 1;
    for (std::uint32_t i = 0; i < ctx->degree; ++i) q128 *= ell;
    if (q128 > UINT64_MAX - 1) throw DomainError("field too large");
    const u64 q = static_cast<u64>(q128);

    QuadExt ext{ctx, disc.coeffs()};
    QuadExt::Elem lam_w{lambda.coeffs(), std::vector<u64>(ctx->degree, 0)};
    lam_w.second[0] = 1; // lambda + w
    QuadExt::Elem num = ext.mul(lam_w, lam_w);
    ExtElement inv4c = (ExtElement::from_scalar(ctx, 4) * c).inverse();
    // ratio = num * inv4c (scalar in the base field)
    QuadExt::Elem ratio;
    ratio.first.resize(ctx->degree);
    ratio.second.resize(ctx->degree);
    ctx->mul(num.first.data(), inv4c.coeffs().data(), ratio.first.data());
    ctx->mul(num.second.data(), inv4c.coeffs().data(), ratio.second.data());

    out.period = order_via_factors([&](u64 e) { return ext.is_one(ext.pow(ratio, e)); }, q + 1);
    return out;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial via Hessenberg reduction over F_ell.
// ---------------------------------------------------------------------------

namespace {

fpoly::Poly charpoly(std::vector<std::vector<u64>> A, u64 ell) {
    const size_t n = A.size();
    if (n == 0) return {1};
    // Reduce to upper Hessenberg form by similarity transformations.
    for (size_t c = 0; c + 2 < n; ++c) {
        size_t piv = c + 1;
        while (piv < n && A[piv][c] == 0) ++piv;
        if (piv == n) continue;
        if (piv != c + 1) {
            std::swap(A[piv], A[c + 1]);
            for (size_t r = 0; r < n; ++r) std::swap(A[r][piv], A[r][c + 1]);
        }
        const u64 inv = inv_mod(A[c + 1][c], ell);
        for (size_t r = c + 2; r < n; ++r) {
            if (A[r][c] == 0) continue;
            const u64 f = mul_mod(A[r][c], inv, ell);
            for (size_t j = 0; j < n; ++j) A[r][j] = sub_mod(A[r][j], mul_mod(f, A[c + 1][j], ell), ell);
            for (size_t i = 0; i < n; ++i) A[i][c + 1] = add_mod(A[i][c + 1], mul_mod(f, A[i][r], ell), ell);
        }
    }
    // p_i = (x - H[i-1][i-1]) p_{i-1} - sum_j H[i-1-j][i-1] (prod subdiag) p_{i-1-j}.
    std::vector<fpoly::Poly> p(n + 1);
    p[0] = {1};
    for (size_t i = 1; i <= n; ++i) {
        fpoly::Poly xi = fpoly::sub(fpoly::mul({0, 1}, p[i - 1], ell), fpoly::scalar_mul(p[i - 1], A[i - 1][i - 1], ell), ell);
        u64 prod = 1;
        for (size_t j = 1; j < i; ++j) {
            prod = mul_mod(prod, A[i - j][i - j - 1], ell);
            if (!prod) break;
            u64 coef = mul_mod(A[i - 1 - j][i - 1], prod, ell);
            if (coef) xi = fpoly::sub(xi, fpoly::scalar_mul(p[i - 1 - j], coef, ell), ell);
        }
        p[i] = std::move(xi);
    }
    return p[n];
}

std::vector<std::vector<u64>> mat_mul(const std::vector<std::vector<u64>>& A, const std::vector<std::vector<u64>>& B, u64 ell) {
    const size_t n = A.size();
    std::vector<std::vector<u64>> C(n, std::vector<u64>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (!A[i][k]) continue;
            for (size_t j = 0; j < n; ++j) C[i][j] = add_mod(C[i][j], mul_mod(A[i][k], B[k][j], ell), ell);
        }
    return C;
}

std::vector<std::vector<u64>> mat_poly(const fpoly::Poly& g, const std::vector<std::vector<u64>>& A, u64 ell) {
    const size_t n = A.size();
    std::vector<std::vector<u64>> acc(n, std::vector<u64>(n, 0));
    // Horner: acc = g(A)
    for (size_t t = g.size(); t-- > 0;) {
        acc = mat_mul(acc, A, ell);
        for (size_t i = 0; i < n; ++i) acc[i][i] = add_mod(acc[i][i], g[t], ell);
    }
    return acc;
}

bool mat_is_zero(const std::vector<std::vector<u64>>& A) {
    for (const auto& row : A)
        for (u64 v : row)
            if (v) return false;
    return true;
}

std::vector<u64> mat_vec(const std::vector<std::vector<u64>>& A, const std::vector<u64>& x, u64 ell) {
    const size_t n = A.size();
    std::vector<u64> y(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) y[i] = add_mod(y[i], mul_mod(A[i][j], x[j], ell), ell);
    return y;
}

struct BasisData {
    forms::LevelOneBasis basis;
    std::vector<std::vector<u64>> tp; // matrix of hecke_tp on the echelon basis
};

BasisData hecke_matrix(int k, u64 ell, u64 p, i64 precision) {
    BasisData out;
    out.basis = forms::level_one_basis(k, ell, precision);
    const int D = out.basis.dim;
    out.tp.assign(static_cast<size_t>(D), std::vector<u64>(static_cast<size_t>(D), 0));
    hecke::HeckeContext ctx{k, {}, 1};
    for (int i = 0; i < D; ++i) {
        ModSeries im = hecke::hecke_tp(out.basis.basis[static_cast<size_t>(i)], p, ctx);
        // Coordinates from the pivot columns; verify the residual vanishes.
        std::vector<u64> coord(static_cast<size_t>(D));
        for (int j = 0; j < D; ++j) coord[static_cast<size_t>(j)] = im.coeff(j);
        for (i64 n = 0; n < im.precision(); ++n) {
            u64 expect = 0;
            for (int j = 0; j < D; ++j)
                expect = add_mod(expect, mul_mod(coord[static_cast<size_t>(j)], out.basis.basis[static_cast<size_t>(j)].coeff(n), ell), ell);
            if (expect != im.coeff(n)) throw DomainError("hecke image leaves the space");
        }
        for (int j = 0; j < D; ++j) out.tp[static_cast<size_t>(j)][static_cast<size_t>(i)] = coord[static_cast<size_t>(j)];
    }
    return out;
}

} // namespace

ExtElement EigenComponent::coeff(i64 n) const {
    if (n >= precision) throw PrecisionError("insufficient precision");
    if (n < valuation) return ExtElement::zero(field);
    const auto deg = field->degree;
    std::vector<u64> c(coeffs.begin() + static_cast<std::ptrdiff_t>((n - valuation) * deg),
                       coeffs.begin() + static_cast<std::ptrdiff_t>((n - valuation + 1) * deg));
    return ExtElement(field, std::move(c));
}

bool EigenComponent::is_zero() const {
    for (u64 v : coeffs)
        if (v) return false;
    return true;
}

std::vector<EigenComponent> eigen_decompose(const ModSeries& f, u64 p, int k, u64 ell) {
    if (f.domain().m != ell) throw DomainError("series modulus mismatch");
    if (ell < 5) throw DomainError("eigendecomposition needs ell >= 5");
    if (ell % p == 0) throw DomainError("p must be prime to ell");
    if (f.is_identically_zero_on_window()) return {};

    const int D = forms::dim_mk(k);
    if (D == 0) throw DomainError("not in span");
    const i64 prec_b = std::max<i64>(f.precision(), static_cast<i64>(p) * (D + 8));
    BasisData bd = hecke_matrix(k, ell, p, prec_b);

    // Coordinates of f (echelon pivots at 0..D-1) and span verification.
    std::vector<u64> x(static_cast<size_t>(D));
    for (int j = 0; j < D; ++j) x[static_cast<size_t>(j)] = f.coeff(j);
    const i64 win = std::min<i64>(f.precision(), bd.basis.precision);
    for (i64 n = 0; n < win; ++n) {
        u64 expect = 0;
        for (int j = 0; j < D; ++j)
            expect = add_mod(expect, mul_mod(x[static_cast<size_t>(j)], bd.basis.basis[static_cast<size_t>(j)].coeff(n), ell), ell);
        if (expect != f.coeff(n)) throw DomainError("not in span");
    }

    fpoly::Poly chi = charpoly(bd.tp, ell);
    auto factors = fpoly::factor(chi, ell);

    // Semisimplicity: the radical of the characteristic polynomial must
    // annihilate the operator.
    fpoly::Poly radical = {1};
    for (const auto& [g, e] : factors) {
        (void)e;
        radical = fpoly::mul(radical, g, ell);
    }
    if (!mat_is_zero(mat_poly(radical, bd.tp, ell))) {
        throw DomainError("semisimplicity failure");
    }

    std::vector<EigenComponent> out;
    for (const auto& [g, mult] : factors) {
        // Primary projector: u * (radical/g) with u = (radical/g)^{-1} mod g.
        auto [h, rems] = fpoly::divrem(radical, g, ell);
        if (!rems.empty()) throw DomainError("internal factor error");
        // Extended Euclid for u: u*h = 1 mod g.
        fpoly::Poly r0 = g, r1 = fpoly::mod(h, g, ell);
        fpoly::Poly t0, t1 = {1};
        while (!fpoly::is_zero(r1)) {
            auto [q, r2] = fpoly::divrem(r0, r1, ell);
            fpoly::Poly t2 = fpoly::sub(t0, fpoly::mul(q, t1, ell), ell);
            r0 = std::move(r1);
            r1 = std::move(r2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (fpoly::degree(r0) != 0) throw DomainError("internal projector error");
        fpoly::Poly u = fpoly::scalar_mul(t0, inv_mod(r0[0], ell), ell);
        fpoly::Poly proj = fpoly::mul(u, h, ell); // u*(radical/g), applied to coordinates
        std::vector<u64> xi = mat_vec(mat_poly(proj, bd.tp, ell), x, ell);

        bool xi_zero = true;
        for (u64 v : xi)
            if (v) xi_zero = false;
        if (xi_zero) continue;

        // Split the primary block over F_ell[x]/(g): the roots are the
        // Frobenius orbit of the class of x.
        auto ctx = FqContext::make_with_modulus(ell, g);
        const std::uint32_t e = ctx->degree;
        std::vector<ExtElement> roots;
        ExtElement theta = ExtElement::generator_class(ctx);
        for (std::uint32_t j = 0; j < e; ++j) {
            roots.push_back(theta);
            theta = theta.frobenius();
        }

        const i64 comp_win = win;
        for (std::uint32_t j = 0; j < e; ++j) {
            // y_j = prod_{t != j} (A - theta_t) xi / prod_{t != j} (theta_j - theta_t)
            std::vector<ExtElement> y;
            y.reserve(xi.size());
            for (u64 v : xi) y.push_back(ExtElement::from_scalar(ctx, v));
            ExtElement denom = ExtElement::from_scalar(ctx, 1);
            for (std::uint32_t t = 0; t < e; ++t) {
                if (t == j) continue;
                // y = A y - theta_t y
                std::vector<ExtElement> ny;
                ny.reserve(y.size());
                for (size_t r = 0; r < y.size(); ++r) {
                    ExtElement acc = ExtElement::zero(ctx);
                    for (size_t cidx = 0; cidx < y.size(); ++cidx) {
                        if (!bd.tp[r][cidx]) continue;
                        acc = acc + ExtElement::from_scalar(ctx, bd.tp[r][cidx]) * y[cidx];
                    }
                    ny.push_back(acc - roots[t] * y[r]);
                }
                y = std::move(ny);
                denom = denom * (roots[j] - roots[t]);
            }
            ExtElement dinv = denom.inverse();
            for (auto& v : y) v = v * dinv;

            EigenComponent comp;
            comp.eigenvalue = roots[j];
            comp.field = ctx;
            comp.valuation = 0;
            comp.precision = comp_win;
            comp.multiplicity = static_cast<size_t>(mult);
            comp.coeffs.assign(static_cast<size_t>(comp_win) * e, 0);
            // coefficients: sum_t y[t] * basis_t
            std::vector<u64> tmp(e);
            for (int t = 0; t < D; ++t) {
                if (y[static_cast<size_t>(t)].is_zero()) continue;
                const auto& yc = y[static_cast<size_t>(t)].coeffs();
                for (i64 n = 0; n < comp_win; ++n) {
                    u64 b = bd.basis.basis[static_cast<size_t>(t)].coeff(n);
                    if (!b) continue;
                    ctx->scalar_mul(yc.data(), b, tmp.data());
                    ctx->add(comp.coeffs.data() + static_cast<size_t>(n) * e, tmp.data(),
                             comp.coeffs.data() + static_cast<size_t>(n) * e);
                }
            }
            if (!comp.is_zero()) out.push_back(std::move(comp));
        }
    }
    return out;
}

bool component_satisfies_eigen_equation(const EigenComponent& comp, u64 p, int k) {
    const u64 ell = comp.field->ell;
    const u64 mult = mul_mod(1, pow_mod(p % ell, static_cast<u64>(k - 1), ell), ell);
    const i64 pi = static_cast<i64>(p);
    const i64 lim = comp.precision / pi;
    for (i64 n = comp.valuation; n < lim; ++n) {
        ExtElement lhs = comp.coeff(n * pi);
        if (n % pi == 0) lhs = lhs + ExtElement::from_scalar(comp.field, mult) * comp.coeff(n / pi);
        ExtElement rhs = comp.eigenvalue * comp.coeff(n);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

bool components_sum_to(const std::vector<EigenComponent>& comps, const ModSeries& f) {
    const u64 ell = f.domain().m;
    i64 win = f.precision();
    for (const auto& c : comps) win = std::min(win, c.precision);
    // Group components by field context; within a group the sum must be a
    // scalar (conjugates pair up), and the scalars add across groups.
    std::vector<std::vector<const EigenComponent*>> groups;
    for (const auto& c : comps) {
        bool placed = false;
        for (auto& g : groups)
            if (g[0]->field->same(*c.field)) {
                g.push_back(&c);
                placed = true;
                break;
            }
        if (!placed) groups.push_back({&c});
    }
    for (i64 n = 0; n < win; ++n) {
        u64 total = 0;
        for (const auto& g : groups) {
            ExtElement s = g[0]->coeff(n);
            for (size_t i = 1; i < g.size(); ++i) s = s + g[i]->coeff(n);
            if (!s.is_scalar()) return false;
            total = add_mod(total, s.scalar_value(), ell);
        }
        if (total != f.coeff(n)) return false;
    }
    return true;
}

bool component_satisfies_claim(const EigenComponent& comp, const Claim& claim) {
    for (i64 n = comp.valuation; n < comp.precision; ++n) {
        if (!claim_contains(claim, n)) continue;
        if (!comp.coeff(n).is_zero()) return false;
    }
    return true;
}

CertifyResult certify_claim(const ModSeries& f, int k, u64 p, u64 m, u64 beta, bool assume_eigenform) {
    const u64 ell = f.domain().m;
    if (!algebra::is_prime(ell) || ell < 3) throw DomainError("ell must be an odd prime");
    if (!algebra::is_prime(p) || p == ell) throw DomainError("p must be a prime different from ell");
    if (m < 1) throw DomainError("gap exponent must be positive");
    if (beta % p == 0 && beta != 0) throw DomainError("beta must be prime to p");

    CertifyResult res;
    res.certificate.form = f.descriptor();
    res.certificate.ell = ell;
    u64 pm = 1;
    for (u64 i = 0; i < m; ++i) pm *= p;
    if (beta == 0) {
        res.certificate.claim = GapProgression{pm, 0, p};
    } else {
        res.certificate.claim = Progression{pm * p, pm * (beta % p)};
    }

    EvidenceHecke ev;
    const u64 c_val = pow_mod(p % ell, static_cast<u64>(k - 1), ell);

    if (assume_eigenform || ell < 5) {
        // Normalized eigenform path: lambda = c(f; p) / c(f; 1).
        u64 c1 = f.coeff(1);
        if (c1 == 0) throw DomainError("eigenform must have a unit coefficient at q");
        u64 lambda = mul_mod(f.coeff(static_cast<i64>(p)), inv_mod(c1, ell), ell);
        // Verify the eigen-equation on the window.
        hecke::HeckeContext hctx{k, {}, 1};
        ModSeries tf = hecke::hecke_tp(f, p, hctx);
        for (i64 n = tf.valuation(); n < tf.precision(); ++n)
            if (tf.coeff(n) != mul_mod(lambda, f.coeff(n), ell)) throw DomainError("not an eigenform");
        auto an = analyze_lpoly(Residue::raw(lambda, ell), Residue::raw(c_val, ell));
        an.p = p;
        ComponentCertificate cc{an, 1, an.admits_exponent(m)};
        ev.components.push_back(cc);
    } else {
        auto comps = eigen_decompose(f, p, k, ell);
        for (const auto& comp : comps) {
            auto an = analyze_lpoly_ext(comp.eigenvalue, c_val, p);
            ComponentCertificate cc{an, comp.multiplicity, an.admits_exponent(m)};
            ev.components.push_back(cc);
        }
    }
    ev.certified = !ev.components.empty();
    for (const auto& cc : ev.components) ev.certified = ev.certified && cc.exponent_ok;
    res.certified = ev.certified;
    res.certificate.evidence = std::move(ev);
    return res;
}

DeltaTable delta_table(const std::vector<u64>& ells, const std::vector<u64>& primes, size_t count_per_cell,
                       i64 verify_bound) {
    DeltaTable table;
    table.ells = ells;
    table.primes = primes;
    u64 pmax = 2;
    for (u64 p : primes) pmax = std::max(pmax, p);
    for (u64 ell : ells) {
        if (!algebra::is_prime(ell) || ell < 3) throw DomainError("ell must be an odd prime");
        const i64 prec = std::max<i64>(verify_bound + 1, static_cast<i64>(pmax) + 2);
        ModSeries dl = forms::delta_mod(ell, prec);
        std::vector<DeltaTableCell> row;
        for (u64 p : primes) {
            DeltaTableCell cell;
            if (p == ell) {
                cell.diagonal = true;
                cell.full_progression = true;
                for (i64 n = 1; n * static_cast<i64>(ell) < verify_bound; ++n) {
                    if (dl.coeff(n * static_cast<i64>(ell)) != 0) {
                        cell.full_progression = false;
                        break;
                    }
                }
            } else {
                u64 lambda = dl.coeff(static_cast<i64>(p));
                u64 c = pow_mod(p % ell, u64{11}, ell);
                auto an = analyze_lpoly(Residue::raw(lambda, ell), Residue::raw(c, ell));
                cell.exponents = an.first_exponents(count_per_cell);
            }
            row.push_back(std::move(cell));
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

bool impossibility(u64 m, u64 ell, int k, int chi_p_val, u64 p) {
    if (m < 2) throw DomainError("impossibility requires m >= 2");
    if (std::gcd(ell * (ell - 1), m + 1) != 1) return false;
    u64 c = mul_mod(reduce_signed(chi_p_val, ell), pow_mod(p % ell, static_cast<u64>(k - 1), ell), ell);
    return algebra::kronecker(static_cast<long long>(c), static_cast<long long>(ell)) == -1;
}

// ---------------------------------------------------------------------------
// U_ell preimages and filtration.
// ---------------------------------------------------------------------------

namespace {

// Solve sum_i x_i cols[i] = rhs over F_ell on `rows` equations; returns the
// particular solution with free variables zero, or empty.
std::optional<std::vector<u64>> solve_system(std::vector<std::vector<u64>> cols, std::vector<u64> rhs, u64 ell) {
    const size_t nvar = cols.size();
    const size_t rows = rhs.size();
    std::vector<size_t> pivot_of_var(nvar, static_cast<size_t>(-1));
    size_t rank = 0;
    for (size_t v = 0; v < nvar && rank < rows; ++v) {
        size_t sel = rank;
        while (sel < rows && cols[v][sel] == 0) ++sel;
        if (sel == rows) continue;
        for (size_t w = 0; w < nvar; ++w) std::swap(cols[w][sel], cols[w][rank]);
        std::swap(rhs[sel], rhs[rank]);
        const u64 inv = inv_mod(cols[v][rank], ell);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const u64 f = mul_mod(cols[v][r], inv, ell);
            if (!f) continue;
            for (size_t w = v; w < nvar; ++w)
                if (cols[w][rank]) cols[w][r] = sub_mod(cols[w][r], mul_mod(f, cols[w][rank], ell), ell);
            rhs[r] = sub_mod(rhs[r], mul_mod(f, rhs[rank], ell), ell);
        }
        const u64 s = inv;
        for (size_t w = v; w < nvar; ++w) cols[w][rank] = mul_mod(cols[w][rank], s, ell);
        rhs[rank] = mul_mod(rhs[rank], s, ell);
        pivot_of_var[v] = rank;
        ++rank;
    }
    for (size_t r = rank; r < rows; ++r)
        if (rhs[r] != 0) return std::nullopt;
    std::vector<u64> x(nvar, 0);
    for (size_t v = 0; v < nvar; ++v)
        if (pivot_of_var[v] != static_cast<size_t>(-1)) x[v] = rhs[pivot_of_var[v]];
    return x;
}

} // namespace

std::pair<ModSeries, int> u_ell_preimage(const ModSeries& g, int k_g, int steps, int weight_cap, i64 out_window) {
    const u64 ell = g.domain().m;
    if (!algebra::is_prime(ell) || ell < 5) throw DomainError("preimage search needs a prime ell >= 5");
    if (steps < 0) throw DomainError("steps must be nonnegative");
    if (steps == 0) return {g, k_g};

    i64 ell_pow = 1;
    for (int s = 0; s < steps; ++s) ell_pow *= static_cast<i64>(ell);

    const int step = static_cast<int>(ell - 1);
    int k0 = k_g % step;
    if (k0 % 2) k0 += step; // weights are even; ell odd makes step even

    for (int kp = k0; kp <= weight_cap; kp += step) {
        const int D = forms::dim_mk(kp);
        if (D == 0) continue;
        i64 wt = std::min<i64>(g.precision(), D + 40);
        if (wt < D + 4) throw PrecisionError("insufficient precision");
        forms::LevelOneBasis basis = forms::level_one_basis(kp, ell, ell_pow * wt);

        std::vector<std::vector<u64>> cols;
        for (int i = 0; i < D; ++i) {
            ModSeries u = basis.basis[static_cast<size_t>(i)];
            for (int s = 0; s < steps; ++s) u = qseries::u_operator(u, ell);
            std::vector<u64> col(static_cast<size_t>(wt));
            for (i64 n = 0; n < wt; ++n) col[static_cast<size_t>(n)] = u.coeff(n);
            cols.push_back(std::move(col));
        }
        std::vector<u64> rhs(static_cast<size_t>(wt));
        for (i64 n = 0; n < wt; ++n) rhs[static_cast<size_t>(n)] = g.coeff(n);

        auto sol = solve_system(cols, rhs, ell);
        if (!sol) continue;

        // Rebuild at the requested output window (the solve window always
        // exceeds the Sturm bound of the weight, so the identity is rigid).
        if (out_window > wt) basis = forms::level_one_basis(kp, ell, ell_pow * out_window);
        ModSeries h = ModSeries::zero(qseries::ModDomain{ell}, 1, basis.precision);
        for (int i = 0; i < D; ++i) {
            if (!(*sol)[static_cast<size_t>(i)]) continue;
            h = qseries::add(h, qseries::scale(basis.basis[static_cast<size_t>(i)], (*sol)[static_cast<size_t>(i)]));
        }
        // Re-verify on the widest window available before accepting.
        ModSeries uh = h;
        for (int s = 0; s < steps; ++s) uh = qseries::u_operator(uh, ell);
        const i64 check = std::min<i64>(uh.precision(), g.precision());
        bool ok = true;
        for (i64 n = 0; n < check && ok; ++n) ok = uh.coeff(n) == g.coeff(n);
        if (!ok) continue;
        return {h, kp};
    }
    throw Error("no preimage below weight cap " + std::to_string(weight_cap));
}

int filtration(const ModSeries& f, int k_start) {
    const u64 ell = f.domain().m;
    if (!algebra::is_prime(ell) || ell < 5) throw DomainError("filtration needs a prime ell >= 5");
    if (f.is_identically_zero_on_window()) throw DomainError("filtration of the zero form");

    const int step = static_cast<int>(ell - 1);
    const i64 wt = std::min<i64>(f.precision(), 2 * forms::dim_mk(k_start) + 40);

    auto member_of = [&](int kp) {
        const int D = forms::dim_mk(kp);
        if (D == 0) return false;
        forms::LevelOneBasis basis = forms::level_one_basis(kp, ell, wt);
        std::vector<std::vector<u64>> cols;
        for (int i = 0; i < D; ++i) {
            std::vector<u64> col(static_cast<size_t>(wt));
            for (i64 n = 0; n < wt; ++n) col[static_cast<size_t>(n)] = basis.basis[static_cast<size_t>(i)].coeff(n);
            cols.push_back(std::move(col));
        }
        std::vector<u64> rhs(static_cast<size_t>(wt));
        for (i64 n = 0; n < wt; ++n) rhs[static_cast<size_t>(n)] = f.coeff(n);
        return solve_system(cols, rhs, ell).has_value();
    };

    if (!member_of(k_start)) throw DomainError("not in span");
    int k = k_start;
    while (k - step >= 0 && member_of(k - step)) k -= step;
    return k;
}

std::vector<std::pair<u64, CertifyResult>> prime_search(const ModSeries& f, int k, SearchMode mode, u64 p_max) {
    const u64 ell = f.domain().m;
    std::vector<std::pair<u64, CertifyResult>> out;
    if (f.precision() <= static_cast<i64>(p_max)) throw PrecisionError("insufficient precision");
    const u64 c1 = f.coeff(1);
    if (c1 == 0) throw DomainError("eigenform must have a unit coefficient at q");
    const u64 c1inv = inv_mod(c1, ell);
    for (u64 p = 2; p <= p_max; ++p) {
        if (!algebra::is_prime(p) || p == ell) continue;
        const u64 lambda = mul_mod(f.coeff(static_cast<i64>(p)), c1inv, ell);
        const u64 cp = pow_mod(p % ell, static_cast<u64>(k - 1), ell);
        if (mode == SearchMode::Treneer) {
            if (p % ell != ell - 1 || lambda != 0) continue;
            out.emplace_back(p, certify_claim(f, k, p, 1, 0, true));
        } else {
            if (p % ell != 1 || lambda != 2 % ell || cp != 1) continue;
            out.emplace_back(p, certify_claim(f, k, p, ell - 1, 0, true));
        }
    }
    return out;
}

} // namespace conglab::criterion
