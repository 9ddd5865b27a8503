#include "ntt.hpp"

#include <algorithm>
#include <stdexcept>

#include "conglab/errors.hpp"

namespace conglab::detail {

namespace {

using u128 = unsigned __int128;

constexpr u64 P1 = 998244353;  // 119 * 2^23 + 1, generator 3
constexpr u64 P2 = 469762049;  // 7 * 2^26 + 1, generator 3
constexpr u64 P3 = 167772161;  // 5 * 2^25 + 1, generator 3

u64 pw(u64 b, u64 e, u64 p) {
    u64 r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = static_cast<u64>(u128(r) * b % p);
        b = static_cast<u64>(u128(b) * b % p);
        e >>= 1;
    }
    return r;
}

void ntt(std::vector<u64>& a, bool inverse, u64 p) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 w = pw(3, (p - 1) / len, p);
        if (inverse) w = pw(w, p - 2, p);
        for (std::size_t i = 0; i < n; i += len) {
            u64 wn = 1;
            for (std::size_t j = 0; j < len / 2; ++j) {
                u64 u = a[i + j];
                u64 v = static_cast<u64>(u128(a[i + j + len / 2]) * wn % p);
                a[i + j] = u + v < p ? u + v : u + v - p;
                a[i + j + len / 2] = u >= v ? u - v : u + p - v;
                wn = static_cast<u64>(u128(wn) * w % p);
            }
        }
    }
    if (inverse) {
        u64 ninv = pw(n % p, p - 2, p);
        for (auto& x : a) x = static_cast<u64>(u128(x) * ninv % p);
    }
}

std::vector<u64> convolve_prime(const std::vector<u64>& a, const std::vector<u64>& b, std::size_t out_len, u64 p) {
    std::size_t need = std::min(out_len, a.size() + b.size() - 1);
    std::size_t n = 1;
    while (n < a.size() + b.size() - 1) n <<= 1;
    if ((p - 1) % n != 0) throw PrecisionError("series too long for transform-based multiplication");
    std::vector<u64> fa(n, 0), fb(n, 0);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i] % p;
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i] % p;
    ntt(fa, false, p);
    ntt(fb, false, p);
    for (std::size_t i = 0; i < n; ++i) fa[i] = static_cast<u64>(u128(fa[i]) * fb[i] % p);
    ntt(fa, true, p);
    fa.resize(need);
    return fa;
}

} // namespace

std::vector<u64> convolve_mod(const std::vector<u64>& a, const std::vector<u64>& b, u64 m, std::size_t out_len) {
    if (a.empty() || b.empty() || out_len == 0) return std::vector<u64>(out_len, 0);
    const std::size_t full = a.size() + b.size() - 1;
    const std::size_t need = std::min(out_len, full);

    const std::size_t small = std::min(a.size(), b.size());
    if (small <= 48 || need <= 1024) {
        std::vector<u64> out(out_len, 0);
        const std::vector<u64>& s = a.size() <= b.size() ? a : b;
        const std::vector<u64>& l = a.size() <= b.size() ? b : a;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!s[i] || i >= need) continue;
            const u64 si = s[i];
            const std::size_t jmax = std::min(l.size(), need - i);
            for (std::size_t j = 0; j < jmax; ++j) {
                if (!l[j]) continue;
                out[i + j] = (out[i + j] + static_cast<u64>(u128(si) * l[j] % m)) % m;
            }
        }
        return out;
    }

    // Exact CRT reconstruction bound: every convolution coefficient is at
    // most (m-1)^2 * min(len).
    const u128 bound = u128(m - 1) * (m - 1) * small;
    std::size_t n = 1;
    while (n < full) n <<= 1;
    std::vector<u64> out(out_len, 0);
    // Prefer a single transform prime whose two-power order covers n.
    for (u64 p : {P1, P3, P2}) {
        if ((p - 1) % n != 0 || bound >= p) continue;
        auto c = convolve_prime(a, b, need, p);
        for (std::size_t i = 0; i < need; ++i) out[i] = c[i] % m;
        return out;
    }
    // Two-prime reconstruction; both support lengths up to 2^25.
    if ((P3 - 1) % n != 0 || (P2 - 1) % n != 0) throw PrecisionError("series too long for transform-based multiplication");
    if (bound >= u128(P3) * P2) throw PrecisionError("coefficient bound exceeds transform capacity");
    auto c1 = convolve_prime(a, b, need, P3);
    auto c2 = convolve_prime(a, b, need, P2);
    // CRT: x = c1 + P3 * t, t = (c2 - c1) / P3 mod P2.
    const u64 p3_inv_p2 = pw(P3 % P2, P2 - 2, P2);
    for (std::size_t i = 0; i < need; ++i) {
        u64 d = c2[i] >= c1[i] % P2 ? c2[i] - c1[i] % P2 : c2[i] + P2 - c1[i] % P2;
        u64 t = static_cast<u64>(u128(d) * p3_inv_p2 % P2);
        u128 x = u128(P3) * t + c1[i];
        out[i] = static_cast<u64>(x % m);
    }
    return out;
}

} // namespace conglab::detail
