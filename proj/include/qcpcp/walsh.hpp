#pragma once

// Walsh-Hadamard transform and autocorrelation of functions on F_2^n,
// tabulated over the 2^n points in natural (integer) order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qcpcp {

/// In place: t[a] <- sum_x t[x] (-1)^{popcount(a & x)}. Size must be a power of two.
void fwht(std::span<std::int64_t> t);

/// counts[d] = sum_x f(x) f(x ^ d), via the transform.
std::vector<std::int64_t> autocorrelation(std::span<const std::uint8_t> f);

/// Same quantity by the quadratic-time definition.
std::vector<std::int64_t> autocorrelation_direct(std::span<const std::uint8_t> f);

}  // namespace qcpcp
