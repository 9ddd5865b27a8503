#pragma once

#include <cstdint>
#include <vector>

// Internal convolution kernels for series over Z/m.  Not installed.

namespace conglab::detail {

using u64 = std::uint64_t;

/// Linear convolution of a and b reduced mod m, truncated to out_len terms.
/// Dispatches between the schoolbook product and number-theoretic transforms
/// depending on size; exact for any m >= 2.
std::vector<u64> convolve_mod(const std::vector<u64>& a, const std::vector<u64>& b, u64 m, std::size_t out_len);

} // namespace conglab::detail
