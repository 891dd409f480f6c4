#include "cdpp/rational.hpp"

#include <cctype>

namespace cdpp {

std::optional<Rational> parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return std::nullopt;

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) return std::nullopt;
    if (q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return q;
  }

  auto dot = s.find('.');
  if (dot == std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) return std::nullopt;
    q.canonicalize();
    return q;
  }

  // Decimal literal: sign, integer part, fractional part.
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::size_t frac_len = s.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+") return std::nullopt;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    char c = digits[i];
    if (i == 0 && (c == '-' || c == '+')) continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  mpz_class num;
  if (num.set_str(digits, 10) != 0) return std::nullopt;
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

Rational rational_pow(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  bool invert = e < 0;
  unsigned long k = invert ? static_cast<unsigned long>(-(e + 1)) + 1ul
                           : static_cast<unsigned long>(e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), k);
  Rational r(num, den);
  if (invert) {
    r = Rational(1) / r;
  }
  r.canonicalize();
  return r;
}

Integer integer_pow(long base, long e) {
  Integer r;
  mpz_class b(base);
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

std::optional<Rational> rational_sqrt_exact(const Rational& x) {
  if (x < 0) return std::nullopt;
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

}  // namespace cdpp
