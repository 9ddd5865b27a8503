#include "conglab/qseries.hpp"

#include "ntt.hpp"

namespace conglab::qseries {

std::vector<mpz_class> IntDomain::convolve(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b, size_t out_len) const {
    std::vector<mpz_class> out(out_len, mpz_class(0));
    if (a.empty() || b.empty()) return out;
    mpz_class tmp;
    for (size_t i = 0; i < a.size() && i < out_len; ++i) {
        if (sgn(a[i]) == 0) continue;
        const size_t jmax = std::min(b.size(), out_len - i);
        for (size_t j = 0; j < jmax; ++j) {
            if (sgn(b[j]) == 0) continue;
            mpz_mul(tmp.get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
            mpz_add(out[i + j].get_mpz_t(), out[i + j].get_mpz_t(), tmp.get_mpz_t());
        }
    }
    return out;
}

std::vector<u64> ModDomain::convolve(const std::vector<u64>& a, const std::vector<u64>& b, size_t out_len) const {
    return detail::convolve_mod(a, b, m, out_len);
}

ModSeries reduce_mod(const IntSeries& f, u64 m) {
    if (m < 2) throw DomainError("modulus must be at least 2");
    std::vector<u64> c(f.raw().size());
    mpz_class tmp;
    for (size_t i = 0; i < c.size(); ++i) {
        mpz_mod_ui(tmp.get_mpz_t(), f.raw()[i].get_mpz_t(), static_cast<unsigned long>(m));
        c[i] = mpz_get_ui(tmp.get_mpz_t());
    }
    return ModSeries(ModDomain{m}, f.denom(), f.valuation(), f.precision(), std::move(c), f.descriptor());
}

} // namespace conglab::qseries
