#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace cdpp {

using Rational = mpq_class;
using Integer = mpz_class;

/// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) { return mpq_class(x); }

inline double to_double(const Rational& q) { return q.get_d(); }

/// "p/q" or "p" (always in lowest terms).
inline std::string to_fraction_string(const Rational& q) { return q.get_str(); }

/// Parses "p/q", plain integers and decimal literals ("-1.25") exactly.
std::optional<Rational> parse_rational(const std::string& text);

/// b^e with e possibly negative (b must be nonzero then).
Rational rational_pow(const Rational& base, long e);

Integer integer_pow(long base, long e);

/// Exact square root when the argument is the square of a rational.
std::optional<Rational> rational_sqrt_exact(const Rational& x);

}  // namespace cdpp
