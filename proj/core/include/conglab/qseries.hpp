#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "conglab/algebra.hpp"
#include "conglab/errors.hpp"

namespace conglab::qseries {

using u64 = algebra::u64;
using i64 = algebra::i64;

// ---------------------------------------------------------------------------
// Characters: the trivial character and Kronecker symbols, optionally with a
// support condition modulo m (values vanish on gcd(n, m) > 1).
// ---------------------------------------------------------------------------

struct Character {
    long long kron_t = 1;
    u64 modulus = 1;

    int eval(long long n) const {
        if (modulus > 1 && algebra::gcd_u64(algebra::reduce_signed(n, modulus), modulus) != 1) return 0;
        return algebra::kronecker(kron_t, n);
    }
    bool is_trivial() const { return kron_t == 1 && modulus == 1; }
    bool operator==(const Character& o) const { return kron_t == o.kron_t && modulus == o.modulus; }
};

struct FormDescriptor {
    std::string recipe;     // generator recipe, e.g. "delta", "eta^-1"
    int twice_weight = 0;   // weights may be half-integral
    u64 level = 1;
    Character character{};

    bool empty() const { return recipe.empty(); }
};

// ---------------------------------------------------------------------------
// Coefficient domains.
// ---------------------------------------------------------------------------

struct IntDomain {
    using Value = mpz_class;

    static Value zero() { return Value(0); }
    static Value from_int(i64 v) { return Value(static_cast<long>(v)); }
    static bool is_zero(const Value& v) { return sgn(v) == 0; }
    static bool is_unit(const Value& v) { return v == 1 || v == -1; }
    static Value add(const Value& a, const Value& b) { return a + b; }
    static Value sub(const Value& a, const Value& b) { return a - b; }
    static Value mul(const Value& a, const Value& b) { return a * b; }
    static Value neg(const Value& a) { return -a; }
    static Value inv(const Value& a) {
        if (!is_unit(a)) throw DomainError("not a unit");
        return a;
    }
    bool operator==(const IntDomain&) const { return true; }

    std::vector<Value> convolve(const std::vector<Value>& a, const std::vector<Value>& b, size_t out_len) const;
    std::string name() const { return "int"; }
};

struct ModDomain {
    u64 m = 2; // any modulus >= 2; primality is required only where the math needs it

    using Value = u64;

    static Value zero() { return 0; }
    Value from_int(i64 v) const { return algebra::reduce_signed(v, m); }
    static bool is_zero(const Value& v) { return v == 0; }
    bool is_unit(const Value& v) const { return v != 0 && algebra::gcd_u64(v, m) == 1; }
    Value add(Value a, Value b) const { return algebra::add_mod(a, b, m); }
    Value sub(Value a, Value b) const { return algebra::sub_mod(a, b, m); }
    Value mul(Value a, Value b) const { return algebra::mul_mod(a, b, m); }
    Value neg(Value a) const { return a ? m - a : 0; }
    Value inv(Value a) const { return algebra::inv_mod(a, m); }
    bool operator==(const ModDomain& o) const { return m == o.m; }

    std::vector<Value> convolve(const std::vector<Value>& a, const std::vector<Value>& b, size_t out_len) const;
    std::string name() const { return "mod"; }
};

// ---------------------------------------------------------------------------
// QExpansion: truncated Puiseux series.  Exponents lie in (1/denom) Z; the
// coefficient of q^(n/denom) is stored at index n - valuation and is known
// for valuation <= n < precision.  Reading at or beyond `precision` is a hard
// error; below the valuation the coefficient is zero by construction.
// ---------------------------------------------------------------------------

template <class D>
class QExpansion {
public:
    using Domain = D;
    using Value = typename D::Value;

    QExpansion() = default;
    QExpansion(D dom, i64 denom, i64 valuation, i64 precision, std::vector<Value> coeffs, FormDescriptor desc = {})
        : dom_(std::move(dom)), denom_(denom), val_(valuation), prec_(precision), c_(std::move(coeffs)), desc_(std::move(desc)) {
        if (denom_ < 1) throw DomainError("denominator must be positive");
        if (prec_ < val_) throw DomainError("precision below valuation");
        if (static_cast<i64>(c_.size()) != prec_ - val_) throw DomainError("coefficient count does not match the window");
    }

    static QExpansion zero(D dom, i64 denom, i64 precision) {
        return QExpansion(std::move(dom), denom, 0, std::max<i64>(precision, 0), std::vector<Value>(static_cast<size_t>(std::max<i64>(precision, 0)), D::zero()));
    }
    static QExpansion one(D dom, i64 denom, i64 precision) {
        auto s = zero(dom, denom, precision);
        if (precision > 0) s.c_[0] = make_value(s.dom_, 1);
        return s;
    }

    const D& domain() const { return dom_; }
    i64 denom() const { return denom_; }
    i64 valuation() const { return val_; }
    i64 precision() const { return prec_; }
    i64 window_length() const { return prec_ - val_; }
    const std::vector<Value>& raw() const { return c_; }
    std::vector<Value>& raw() { return c_; }
    const FormDescriptor& descriptor() const { return desc_; }
    void set_descriptor(FormDescriptor d) { desc_ = std::move(d); }

    /// Coefficient of q^(numer/denom); zero below the valuation, hard error
    /// at or beyond the precision bound.
    const Value& coeff(i64 numer) const {
        if (numer >= prec_) throw PrecisionError("insufficient precision");
        if (numer < val_) return zero_value();
        return c_[static_cast<size_t>(numer - val_)];
    }
    Value& at(i64 numer) {
        if (numer < val_ || numer >= prec_) throw PrecisionError("insufficient precision");
        return c_[static_cast<size_t>(numer - val_)];
    }

    bool is_identically_zero_on_window() const {
        for (const auto& v : c_)
            if (!D::is_zero(v)) return false;
        return true;
    }

    QExpansion truncated(i64 new_prec) const {
        if (new_prec > prec_) throw PrecisionError("insufficient precision");
        if (new_prec < val_) new_prec = val_;
        std::vector<Value> c(c_.begin(), c_.begin() + static_cast<size_t>(new_prec - val_));
        return QExpansion(dom_, denom_, val_, new_prec, std::move(c), desc_);
    }

    /// Multiply by q^(shift/denom).
    QExpansion shifted(i64 shift) const {
        QExpansion out = *this;
        out.val_ += shift;
        out.prec_ += shift;
        return out;
    }

    static const Value& zero_value() {
        static const Value z = D::zero();
        return z;
    }

private:
    static Value make_value(const D& dom, i64 v) {
        if constexpr (std::is_same_v<D, IntDomain>)
            return D::from_int(v);
        else
            return dom.from_int(v);
    }

    D dom_{};
    i64 denom_ = 1;
    i64 val_ = 0;
    i64 prec_ = 0;
    std::vector<Value> c_;
    FormDescriptor desc_{};
};

using IntSeries = QExpansion<IntDomain>;
using ModSeries = QExpansion<ModDomain>;

namespace detail_q {

template <class D>
typename D::Value dom_from_int(const D& dom, i64 v) {
    if constexpr (std::is_same_v<D, IntDomain>)
        return D::from_int(v);
    else
        return dom.from_int(v);
}

inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b, r = a % b;
    return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}
inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

template <class D>
void check_domains(const QExpansion<D>& f, const QExpansion<D>& g) {
    if (!(f.domain() == g.domain())) throw DomainError("coefficient domain mismatch");
}

/// Rescale exponents to the common denominator L (numerators multiply by L/N).
template <class D>
QExpansion<D> with_denom(const QExpansion<D>& f, i64 L) {
    if (L == f.denom()) return f;
    if (L % f.denom() != 0) throw DomainError("incompatible denominators");
    const i64 s = L / f.denom();
    const i64 val = f.valuation() * s;
    const i64 prec = (f.precision() - 1) * s + 1;
    std::vector<typename D::Value> c(static_cast<size_t>(prec - val), D::zero());
    for (i64 n = f.valuation(); n < f.precision(); ++n) c[static_cast<size_t>((n - f.valuation()) * s)] = f.coeff(n);
    return QExpansion<D>(f.domain(), L, val, prec, std::move(c), f.descriptor());
}

} // namespace detail_q

// --- arithmetic -------------------------------------------------------------

template <class D>
QExpansion<D> add(const QExpansion<D>& f, const QExpansion<D>& g) {
    detail_q::check_domains(f, g);
    i64 L = std::lcm(f.denom(), g.denom());
    auto a = detail_q::with_denom(f, L);
    auto b = detail_q::with_denom(g, L);
    const i64 val = std::min(a.valuation(), b.valuation());
    const i64 prec = std::min(a.precision(), b.precision());
    if (prec < val) throw PrecisionError("insufficient precision");
    std::vector<typename D::Value> c(static_cast<size_t>(prec - val), D::zero());
    const D& dom = f.domain();
    for (i64 n = val; n < prec; ++n) c[static_cast<size_t>(n - val)] = dom.add(a.coeff(n), b.coeff(n));
    return QExpansion<D>(dom, L, val, prec, std::move(c));
}

template <class D>
QExpansion<D> scale(const QExpansion<D>& f, const typename D::Value& s) {
    std::vector<typename D::Value> c = f.raw();
    for (auto& v : c) v = f.domain().mul(v, s);
    return QExpansion<D>(f.domain(), f.denom(), f.valuation(), f.precision(), std::move(c));
}

template <class D>
QExpansion<D> sub(const QExpansion<D>& f, const QExpansion<D>& g) {
    return add(f, scale(g, detail_q::dom_from_int(f.domain(), -1)));
}

/// Cauchy product.  Valuations add; the output window is the exact range on
/// which every contributing coefficient is known.
template <class D>
QExpansion<D> mul(const QExpansion<D>& f, const QExpansion<D>& g) {
    detail_q::check_domains(f, g);
    i64 L = std::lcm(f.denom(), g.denom());
    auto a = detail_q::with_denom(f, L);
    auto b = detail_q::with_denom(g, L);
    const i64 val = a.valuation() + b.valuation();
    const i64 prec = std::min(a.precision() + b.valuation(), b.precision() + a.valuation());
    if (prec <= val) throw PrecisionError("insufficient precision");
    auto c = f.domain().convolve(a.raw(), b.raw(), static_cast<size_t>(prec - val));
    return QExpansion<D>(f.domain(), L, val, prec, std::move(c));
}

/// Power-series inverse via Newton iteration on the unit part.
template <class D>
QExpansion<D> invert(const QExpansion<D>& f) {
    const i64 len = f.window_length();
    if (len <= 0) throw PrecisionError("insufficient precision");
    const D& dom = f.domain();
    const auto& a = f.raw();
    if (!dom.is_unit(a[0])) throw DomainError("leading coefficient is not a unit");

    std::vector<typename D::Value> g = {dom.inv(a[0])};
    while (static_cast<i64>(g.size()) < len) {
        const size_t nl = std::min<size_t>(g.size() * 2, static_cast<size_t>(len));
        std::vector<typename D::Value> a_lo(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(std::min<size_t>(nl, a.size())));
        auto t = dom.convolve(a_lo, g, nl); // f*g, correct to nl terms
        // g_new = g*(2 - f*g)
        for (auto& v : t) v = dom.neg(v);
        t[0] = dom.add(t[0], detail_q::dom_from_int(dom, 2));
        g = dom.convolve(g, t, nl);
    }
    return QExpansion<D>(dom, f.denom(), -f.valuation(), f.precision() - 2 * f.valuation(), std::move(g));
}

/// Theta operator: coefficient at n becomes n * c(n).  Integer grid only.
template <class D>
QExpansion<D> theta(const QExpansion<D>& f) {
    if (f.denom() != 1) throw DomainError("theta requires integer exponents");
    std::vector<typename D::Value> c(f.raw().size());
    for (i64 n = f.valuation(); n < f.precision(); ++n)
        c[static_cast<size_t>(n - f.valuation())] = f.domain().mul(f.coeff(n), detail_q::dom_from_int(f.domain(), n));
    return QExpansion<D>(f.domain(), 1, f.valuation(), f.precision(), std::move(c));
}

/// Keep exactly the coefficients with n = beta (mod M).
template <class D>
QExpansion<D> sieve(const QExpansion<D>& f, u64 M, u64 beta) {
    if (f.denom() != 1) throw DomainError("sieve requires integer exponents");
    if (M == 0 || beta >= M) throw DomainError("sieve residue out of range");
    std::vector<typename D::Value> c(f.raw().size(), D::zero());
    for (i64 n = f.valuation(); n < f.precision(); ++n)
        if (algebra::reduce_signed(n, M) == beta) c[static_cast<size_t>(n - f.valuation())] = f.coeff(n);
    return QExpansion<D>(f.domain(), 1, f.valuation(), f.precision(), std::move(c));
}

/// U_M: c(out; n) = c(f; M n).  Output precision floor(P/M).
template <class D>
QExpansion<D> u_operator(const QExpansion<D>& f, u64 M) {
    if (f.denom() != 1) throw DomainError("u_operator requires integer exponents");
    if (M == 0) throw DomainError("invalid index");
    const i64 Mi = static_cast<i64>(M);
    if (f.precision() < Mi) throw PrecisionError("insufficient precision");
    const i64 val = detail_q::ceil_div(f.valuation(), Mi);
    const i64 prec = detail_q::floor_div(f.precision(), Mi);
    if (prec < val) throw PrecisionError("insufficient precision");
    std::vector<typename D::Value> c(static_cast<size_t>(prec - val));
    for (i64 n = val; n < prec; ++n) c[static_cast<size_t>(n - val)] = f.coeff(n * Mi);
    return QExpansion<D>(f.domain(), 1, val, prec, std::move(c));
}

/// V_M: c(out; M n) = c(f; n).
template <class D>
QExpansion<D> v_operator(const QExpansion<D>& f, u64 M) {
    if (f.denom() != 1) throw DomainError("v_operator requires integer exponents");
    if (M == 0) throw DomainError("invalid index");
    const i64 Mi = static_cast<i64>(M);
    const i64 val = f.valuation() * Mi;
    const i64 prec = (f.precision() - 1) * Mi + 1;
    std::vector<typename D::Value> c(static_cast<size_t>(prec - val), D::zero());
    for (i64 n = f.valuation(); n < f.precision(); ++n) c[static_cast<size_t>((n - f.valuation()) * Mi)] = f.coeff(n);
    return QExpansion<D>(f.domain(), 1, val, prec, std::move(c));
}

/// Twist by a character: c(out; n) = chi(n) c(f; n).
template <class D>
QExpansion<D> twist(const QExpansion<D>& f, const Character& chi) {
    if (f.denom() != 1) throw DomainError("twist requires integer exponents");
    std::vector<typename D::Value> c(f.raw().size());
    for (i64 n = f.valuation(); n < f.precision(); ++n) {
        int v = chi.eval(n);
        c[static_cast<size_t>(n - f.valuation())] = v == 0 ? D::zero() : f.domain().mul(f.coeff(n), detail_q::dom_from_int(f.domain(), v));
    }
    return QExpansion<D>(f.domain(), 1, f.valuation(), f.precision(), std::move(c));
}

/// Entrywise reduction of an exact series into Z/m.
ModSeries reduce_mod(const IntSeries& f, u64 m);

/// Reinterpret exponents n/denom as integers n (multiply exponents by denom).
template <class D>
QExpansion<D> to_integer_grid(const QExpansion<D>& f) {
    return QExpansion<D>(f.domain(), 1, f.valuation(), f.precision(), f.raw(), f.descriptor());
}

template <class D>
bool equal_on_common_window(const QExpansion<D>& f, const QExpansion<D>& g) {
    if (f.denom() != g.denom() || !(f.domain() == g.domain())) return false;
    const i64 lo = std::min(f.valuation(), g.valuation());
    const i64 hi = std::min(f.precision(), g.precision());
    for (i64 n = lo; n < hi; ++n)
        if (!(f.coeff(n) == g.coeff(n))) return false;
    return true;
}

} // namespace conglab::qseries
