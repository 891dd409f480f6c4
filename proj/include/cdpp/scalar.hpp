#pragma once

#include <complex>
#include <cstdint>

#include "cdpp/rational.hpp"

namespace cdpp {

using Complex = std::complex<double>;

/// Arithmetic backend: complex floats evaluated at roots of unity, or exact
/// big rationals evaluated at integer nodes.
enum class Backend { Float, Exact };

inline const char* backend_name(Backend b) {
  return b == Backend::Float ? "float" : "exact";
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Complex> {
  using real_type = double;
  static constexpr bool is_exact = false;
  static Complex from_long(long long v) {
    return Complex(static_cast<double>(v), 0.0);
  }
  static double magnitude(const Complex& z) { return std::abs(z); }
};

template <>
struct scalar_traits<Rational> {
  using real_type = Rational;
  static constexpr bool is_exact = true;
  static Rational from_long(long long v) {
    return Rational(Integer(static_cast<long>(v)));
  }
  static double magnitude(const Rational& q) {
    return std::abs(q.get_d());
  }
};

template <class S>
using real_of_t = typename scalar_traits<S>::real_type;

/// base^e by binary exponentiation; negative e inverts (base must be nonzero).
template <class S>
S scalar_pow(const S& base, long long e) {
  if constexpr (scalar_traits<S>::is_exact) {
    return rational_pow(base, static_cast<long>(e));
  } else {
    bool invert = e < 0;
    unsigned long long k =
        invert ? static_cast<unsigned long long>(-(e + 1)) + 1ull
               : static_cast<unsigned long long>(e);
    S acc(1.0, 0.0);
    S b = base;
    while (k) {
      if (k & 1ull) acc *= b;
      b *= b;
      k >>= 1;
    }
    return invert ? S(1.0, 0.0) / acc : acc;
  }
}

/// SplitMix64 step; used to derive independent per-draw seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace cdpp
