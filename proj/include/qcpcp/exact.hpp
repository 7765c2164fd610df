#pragma once

// Exact arithmetic used for every expectation in the library. Fourier
// coefficients and per-(u,v,w) sums are dyadic; averages over vertex
// triples are not (|U| and degrees are arbitrary), so aggregated values are
// general rationals.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <string>

namespace qcpcp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt bigint_from_i128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  BigInt out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-out) : out;
}

inline BigInt bigint_from_u128(unsigned __int128 u) {
  BigInt out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return out;
}

/// 2^e as an exact rational (e may be negative).
inline Rational pow2(int e) {
  BigInt one = 1;
  if (e >= 0) return Rational(BigInt(one << e));
  return Rational(one, BigInt(one << (-e)));
}

/// numer / 2^exp.
inline Rational dyadic(const BigInt& numer, int exp) { return Rational(numer) * pow2(-exp); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const BigInt& v) { return v.str(); }
inline std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Exact test of x <= 2^{-(k/2 + 1)} for integer k >= 0 (the right-hand
/// side is irrational for odd k, so compare squares when x > 0).
inline bool le_pow2_neg_half_k_plus_one(const Rational& x, int k) {
  if (x <= 0) return true;
  return x * x <= pow2(-(k + 2));
}

/// Floating view of 2^{-(k/2 + 1)}.
inline double pow2_neg_half_k_plus_one(int k) { return std::exp2(-(k / 2.0 + 1.0)); }

}  // namespace qcpcp
