#include "conglab/p1rep.hpp"

#include <algorithm>
#include <cstring>

namespace conglab::p1rep {

using algebra::ExtElement;
using algebra::FqContext;
using algebra::gcd_u64;
using algebra::inv_mod;
using algebra::mul_mod;
using algebra::reduce_signed;

namespace {

constexpr size_t kMaxPoints = 200000;

u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
    // x = r1 mod m1, x = r2 mod m2 with coprime moduli.
    u64 m1_inv = inv_mod(m1 % m2, m2);
    u64 diff = algebra::sub_mod(r2 % m2, r1 % m2, m2);
    u64 t = mul_mod(diff, m1_inv, m2);
    return r1 + m1 * t;
}

} // namespace

std::shared_ptr<const P1Space> P1Space::make(u64 M) {
    if (M < 1) throw DomainError("modulus must be positive");
    auto sp = std::make_shared<P1Space>();
    sp->M_ = M;
    sp->factors_ = algebra::factorize(M);

    // Local representative lists per prime power: (1:h) for all h, and (c:1)
    // for p | c; CRT-combine componentwise.
    std::vector<std::vector<P1Point>> locals;
    std::vector<u64> moduli;
    size_t total = 1;
    for (const auto& [p, e] : sp->factors_) {
        u64 q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        moduli.push_back(q);
        std::vector<P1Point> pts;
        for (u64 h = 0; h < q; ++h) pts.push_back({1 % q, h});
        for (u64 c = 0; c < q; c += p) pts.push_back({c, 1});
        total *= pts.size();
        if (total > kMaxPoints) throw DomainError("projective line too large");
        locals.push_back(std::move(pts));
    }
    if (M == 1) {
        sp->points_ = {P1Point{0, 0}};
        sp->index_[0] = 0;
        return sp;
    }

    std::vector<size_t> idx(locals.size(), 0);
    std::vector<P1Point> pts;
    pts.reserve(total);
    while (true) {
        u64 c = 0, d = 0, m = 1;
        for (size_t i = 0; i < locals.size(); ++i) {
            const P1Point& lp = locals[i][idx[i]];
            if (i == 0) {
                c = lp.c;
                d = lp.d;
                m = moduli[i];
            } else {
                c = crt_pair(c, m, lp.c, moduli[i]);
                d = crt_pair(d, m, lp.d, moduli[i]);
                m *= moduli[i];
            }
        }
        pts.push_back({c, d});
        size_t level = 0;
        while (level < idx.size()) {
            if (++idx[level] < locals[level].size()) break;
            idx[level] = 0;
            ++level;
        }
        if (level == idx.size()) break;
    }
    std::sort(pts.begin(), pts.end());
    sp->points_ = std::move(pts);
    sp->index_.reserve(sp->points_.size() * 2);
    for (std::uint32_t i = 0; i < sp->points_.size(); ++i)
        sp->index_[sp->points_[i].c * M + sp->points_[i].d] = i;
    return sp;
}

P1Point P1Space::normalize(i64 c_in, i64 d_in) const {
    const u64 M = M_;
    if (M == 1) return {0, 0};
    u64 c = reduce_signed(c_in, M), d = reduce_signed(d_in, M);
    if (gcd_u64(gcd_u64(c, d), M) != 1) throw DomainError("pair is not unimodular");
    // Find the unit u (mod M) making (uc, ud) canonical at every prime power.
    u64 u = 0, m = 1;
    for (const auto& [p, e] : factors_) {
        u64 q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        u64 cq = c % q, dq = d % q;
        u64 uq;
        if (cq % p != 0)
            uq = inv_mod(cq, q); // -> (1 : d/c)
        else
            uq = inv_mod(dq, q); // -> (c/d : 1)
        if (m == 1) {
            u = uq;
            m = q;
        } else {
            u = crt_pair(u, m, uq, q);
            m *= q;
        }
    }
    return {mul_mod(u, c, M), mul_mod(u, d, M)};
}

std::uint32_t P1Space::index_of(i64 c, i64 d) const {
    P1Point p = normalize(c, d);
    auto it = index_.find(p.c * M_ + p.d);
    if (it == index_.end()) throw DomainError("point not enumerated");
    return it->second;
}

ExtElement P1Vector::coefficient(size_t point_index) const {
    const auto deg = field->degree;
    std::vector<u64> c(data.begin() + static_cast<std::ptrdiff_t>(point_index * deg),
                       data.begin() + static_cast<std::ptrdiff_t>((point_index + 1) * deg));
    return ExtElement(field, std::move(c));
}

bool P1Vector::is_zero() const {
    for (u64 v : data)
        if (v) return false;
    return true;
}

P1Vector P1Vector::zero(std::shared_ptr<const P1Space> space, std::shared_ptr<const FqContext> field) {
    P1Vector v;
    v.data.assign(space->size() * field->degree, 0);
    v.space = std::move(space);
    v.field = std::move(field);
    return v;
}

P1Vector tm_vector(std::shared_ptr<const P1Space> space, const algebra::CyclotomicField& F, i64 beta) {
    const u64 M = space->modulus();
    if (F.M != M) throw DomainError("cyclotomic field does not match the modulus");
    P1Vector v = P1Vector::zero(space, F.ctx);
    const auto deg = F.ctx->degree;
    const u64 b = reduce_signed(beta, M);
    // zeta^(-h beta) at (1:h).
    ExtElement zpow = algebra::ExtElement::from_scalar(F.ctx, 1);
    ExtElement zstep = F.zeta.pow(static_cast<algebra::u128>(M - b == M ? 0 : M - b)); // zeta^(-beta)
    if (b == 0) zstep = algebra::ExtElement::from_scalar(F.ctx, 1);
    for (u64 h = 0; h < M; ++h) {
        auto idx = space->index_of(1, static_cast<i64>(h));
        std::memcpy(v.data.data() + static_cast<size_t>(idx) * deg, zpow.coeffs().data(), sizeof(u64) * deg);
        zpow = zpow * zstep;
    }
    return v;
}

P1Vector tm_vector(u64 M, i64 beta, u64 ell) {
    auto space = P1Space::make(M);
    auto F = algebra::cyclotomic_field_with_root(ell, M);
    return tm_vector(space, F, beta);
}

P1Vector act(const P1Vector& v, const Mat2& g) {
    const auto& space = *v.space;
    const u64 M = space.modulus();
    const i64 det = g[0] * g[3] - g[1] * g[2];
    if (reduce_signed(det, M) != 1 % M) throw DomainError("matrix is not unimodular mod M");
    const auto deg = v.field->degree;
    P1Vector out = P1Vector::zero(v.space, v.field);
    for (size_t i = 0; i < space.size(); ++i) {
        const P1Point& pt = space.points()[i];
        // Row vector action: (c, d) g = (c a + d c', c b + d d').
        i64 c = static_cast<i64>(pt.c), d = static_cast<i64>(pt.d);
        i64 nc = c * g[0] + d * g[2];
        i64 nd = c * g[1] + d * g[3];
        auto j = space.index_of(nc, nd);
        std::memcpy(out.data.data() + static_cast<size_t>(j) * deg, v.data.data() + i * deg, sizeof(u64) * deg);
    }
    return out;
}

namespace {

void check_compatible(const P1Vector& a, const P1Vector& b) {
    if (a.space->modulus() != b.space->modulus() || !a.field->same(*b.field)) throw DomainError("context mismatch");
}

// Reduce v against the echelon rows in place; returns pivot index or npos.
size_t reduce_against(const Submodule& W, std::vector<u64>& data) {
    const auto& ctx = *W.field;
    const auto deg = ctx.degree;
    std::vector<u64> coef(deg), tmp(deg);
    for (size_t r = 0; r < W.rows.size(); ++r) {
        const u64* lead = data.data() + static_cast<size_t>(W.pivots[r]) * deg;
        if (ctx.is_zero(lead)) continue;
        std::memcpy(coef.data(), lead, sizeof(u64) * deg);
        // data -= coef * row  (row has a 1 at its pivot)
        const auto& row = W.rows[r];
        for (size_t pt = 0; pt < row.size() / deg; ++pt) {
            const u64* rv = row.data() + pt * deg;
            if (ctx.is_zero(rv)) continue;
            ctx.mul(rv, coef.data(), tmp.data());
            ctx.sub(data.data() + pt * deg, tmp.data(), data.data() + pt * deg);
        }
    }
    const size_t npoints = data.size() / deg;
    for (size_t pt = 0; pt < npoints; ++pt)
        if (!ctx.is_zero(data.data() + pt * deg)) return pt;
    return static_cast<size_t>(-1);
}

// Insert a reduced nonzero vector, keeping reduced echelon form.
void insert_row(Submodule& W, std::vector<u64> data, size_t pivot) {
    const auto& ctx = *W.field;
    const auto deg = ctx.degree;
    // Normalize to pivot coefficient 1.
    std::vector<u64> inv(deg), tmp(deg);
    ctx.inv(data.data() + pivot * deg, inv.data());
    const size_t npoints = data.size() / deg;
    for (size_t pt = 0; pt < npoints; ++pt) {
        if (ctx.is_zero(data.data() + pt * deg)) continue;
        ctx.mul(data.data() + pt * deg, inv.data(), tmp.data());
        std::memcpy(data.data() + pt * deg, tmp.data(), sizeof(u64) * deg);
    }
    // Eliminate the new pivot from existing rows.
    std::vector<u64> coef(deg);
    for (size_t r = 0; r < W.rows.size(); ++r) {
        u64* lead = W.rows[r].data() + pivot * deg;
        if (ctx.is_zero(lead)) continue;
        std::memcpy(coef.data(), lead, sizeof(u64) * deg);
        for (size_t pt = 0; pt < npoints; ++pt) {
            const u64* nv = data.data() + pt * deg;
            if (ctx.is_zero(nv)) continue;
            ctx.mul(nv, coef.data(), tmp.data());
            ctx.sub(W.rows[r].data() + pt * deg, tmp.data(), W.rows[r].data() + pt * deg);
        }
    }
    // Insert keeping pivots sorted.
    size_t pos = 0;
    while (pos < W.pivots.size() && W.pivots[pos] < pivot) ++pos;
    W.rows.insert(W.rows.begin() + static_cast<std::ptrdiff_t>(pos), std::move(data));
    W.pivots.insert(W.pivots.begin() + static_cast<std::ptrdiff_t>(pos), static_cast<std::uint32_t>(pivot));
}

} // namespace

Submodule generate_submodule(const std::vector<P1Vector>& seeds) {
    if (seeds.empty()) throw DomainError("at least one seed vector required");
    for (size_t i = 1; i < seeds.size(); ++i) check_compatible(seeds[0], seeds[i]);

    Submodule W;
    W.space = seeds[0].space;
    W.field = seeds[0].field;

    std::vector<std::vector<u64>> queue;
    for (const auto& s : seeds) queue.push_back(s.data);

    const Mat2 S = gen_S(), T = gen_T();
    while (!queue.empty()) {
        std::vector<u64> v = std::move(queue.back());
        queue.pop_back();
        size_t pivot = reduce_against(W, v);
        if (pivot == static_cast<size_t>(-1)) continue;
        insert_row(W, std::move(v), pivot);
        // Push the images of the newly inserted row under the generators.
        P1Vector pv;
        pv.space = W.space;
        pv.field = W.field;
        pv.data = W.rows[std::find(W.pivots.begin(), W.pivots.end(), pivot) - W.pivots.begin()];
        queue.push_back(act(pv, S).data);
        queue.push_back(act(pv, T).data);
        if (W.dim() == W.space->size()) break; // full module
    }

    // Closure check: the span must be stable under both generators.
    for (const auto& row : W.rows) {
        P1Vector pv;
        pv.space = W.space;
        pv.field = W.field;
        pv.data = row;
        for (const auto& g : {S, T}) {
            std::vector<u64> img = act(pv, g).data;
            if (reduce_against(W, img) != static_cast<size_t>(-1)) throw DomainError("closure verification failed");
        }
    }
    return W;
}

bool membership(const P1Vector& v, const Submodule& W) {
    if (v.space->modulus() != W.space->modulus() || !v.field->same(*W.field)) throw DomainError("context mismatch");
    std::vector<u64> data = v.data;
    return reduce_against(W, data) == static_cast<size_t>(-1);
}

P1Vector invariant_vector(std::shared_ptr<const P1Space> space, std::shared_ptr<const FqContext> field) {
    P1Vector v = P1Vector::zero(std::move(space), std::move(field));
    const auto deg = v.field->degree;
    for (size_t i = 0; i < v.space->size(); ++i) v.data[i * deg] = 1;
    return v;
}

Submodule steinberg_subspace(u64 p, u64 ell) {
    if (!algebra::is_prime(p)) throw DomainError("Steinberg subspace needs a prime modulus");
    if (p == ell) throw DomainError("ell must differ from p");
    auto space = P1Space::make(p);
    auto F = algebra::cyclotomic_field_with_root(ell, p);
    Submodule W;
    W.space = space;
    W.field = F.ctx;
    const auto deg = F.ctx->degree;
    const size_t n = space->size(); // p + 1
    // Augmentation kernel in reduced echelon form: e_i - e_{n-1}, i < n-1.
    for (size_t i = 0; i + 1 < n; ++i) {
        std::vector<u64> row(n * deg, 0);
        row[i * deg] = 1;
        // -1 at the last point
        row[(n - 1) * deg] = F.ctx->ell - 1;
        W.rows.push_back(std::move(row));
        W.pivots.push_back(static_cast<std::uint32_t>(i));
    }
    return W;
}

CrtSplit crt_split(u64 M) {
    CrtSplit out;
    out.M = M;
    out.space = P1Space::make(M);
    for (const auto& [p, e] : algebra::factorize(M)) {
        u64 q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        out.prime_powers.push_back(q);
        out.local_spaces.push_back(P1Space::make(q));
    }
    out.to_local.resize(out.prime_powers.size());
    for (size_t f = 0; f < out.prime_powers.size(); ++f) {
        out.to_local[f].resize(out.space->size());
        for (std::uint32_t i = 0; i < out.space->size(); ++i) {
            const P1Point& pt = out.space->points()[i];
            out.to_local[f][i] = out.local_spaces[f]->index_of(static_cast<i64>(pt.c), static_cast<i64>(pt.d));
        }
    }
    return out;
}

std::uint32_t CrtSplit::from_local(const std::vector<std::uint32_t>& locals) const {
    if (locals.size() != prime_powers.size()) throw DomainError("wrong number of local indices");
    u64 c = 0, d = 0, m = 1;
    for (size_t f = 0; f < locals.size(); ++f) {
        const P1Point& lp = local_spaces[f]->points()[locals[f]];
        if (f == 0) {
            c = lp.c;
            d = lp.d;
            m = prime_powers[f];
        } else {
            c = crt_pair(c, m, lp.c, prime_powers[f]);
            d = crt_pair(d, m, lp.d, prime_powers[f]);
            m *= prime_powers[f];
        }
    }
    return space->index_of(static_cast<i64>(c), static_cast<i64>(d));
}

P1Vector lift_vector(const P1Vector& v, std::shared_ptr<const P1Space> target,
                     std::shared_ptr<const FqContext> target_field) {
    const u64 Mp = v.space->modulus();
    const u64 M = target->modulus();
    if (M % Mp != 0) throw DomainError("target modulus must be a multiple");
    if (v.field->ell != target_field->ell) throw DomainError("context mismatch");
    const bool same_field = v.field->same(*target_field);
    if (!same_field && v.field->degree != 1) throw DomainError("lift requires prime-field coefficients or equal fields");

    P1Vector out = P1Vector::zero(target, target_field);
    const auto deg = target_field->degree;
    for (size_t j = 0; j < target->size(); ++j) {
        const P1Point& pt = target->points()[j];
        auto i = v.space->index_of(static_cast<i64>(pt.c % Mp), static_cast<i64>(pt.d % Mp));
        if (same_field) {
            std::memcpy(out.data.data() + j * deg, v.data.data() + static_cast<size_t>(i) * v.field->degree,
                        sizeof(u64) * deg);
        } else {
            out.data[j * deg] = v.data[static_cast<size_t>(i)]; // scalar embedding
        }
    }
    return out;
}

} // namespace conglab::p1rep
