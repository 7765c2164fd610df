#include "qcpcp/walsh.hpp"

#include <bit>
#include <stdexcept>

namespace qcpcp {

void fwht(std::span<std::int64_t> t) {
  const std::size_t n = t.size();
  if (!std::has_single_bit(n)) throw std::invalid_argument("fwht: size must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1)
    for (std::size_t i = 0; i < n; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int64_t a = t[j], b = t[j + h];
        t[j] = a + b;
        t[j + h] = a - b;
      }
}

std::vector<std::int64_t> autocorrelation(std::span<const std::uint8_t> f) {
  const std::size_t n = f.size();
  std::vector<std::int64_t> t(f.begin(), f.end());
  fwht(t);
  for (auto& x : t) x *= x;
  fwht(t);
  // H (H f)^2 = n * autocorrelation
  for (auto& x : t) x /= static_cast<std::int64_t>(n);
  return t;
}

std::vector<std::int64_t> autocorrelation_direct(std::span<const std::uint8_t> f) {
  const std::size_t n = f.size();
  if (!std::has_single_bit(n)) throw std::invalid_argument("autocorrelation: size must be a power of two");
  std::vector<std::int64_t> out(n, 0);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t x = 0; x < n; ++x) out[d] += f[x] & f[x ^ d];
  return out;
}

}  // namespace qcpcp
