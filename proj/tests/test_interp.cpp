#include <doctest.h>

#include "cdpp/interp.hpp"
#include "test_util.hpp"

using namespace cdpp;
using namespace cdpp::interp;

TEST_CASE("univariate recovery of (1+z)^2 on both backends") {
  auto fc = [](const Complex& z) { return (Complex(1, 0) + z) * (Complex(1, 0) + z); };
  auto rc = recover_univariate(fc, 2);
  REQUIRE(rc.coeffs.size() == 3);
  CHECK(rc.coeffs[0].real() == doctest::Approx(1.0));
  CHECK(rc.coeffs[1].real() == doctest::Approx(2.0));
  CHECK(rc.coeffs[2].real() == doctest::Approx(1.0));

  auto fq = [](const Rational& z) -> Rational { return (1 + z) * (1 + z); };
  auto rq = recover_univariate(fq, 2);
  CHECK(rq.coeffs[0] == 1);
  CHECK(rq.coeffs[1] == 2);
  CHECK(rq.coeffs[2] == 1);
}

TEST_CASE("degree-zero recovery") {
  auto f = [](const Rational&) { return Rational(1); };
  auto r = recover_univariate(f, 0);
  REQUIRE(r.coeffs.size() == 1);
  CHECK(r.coeffs[0] == 1);
}

TEST_CASE("cost-substituted oracle for the identity kernel") {
  // h(z) = (1+z)(1+z^2) = 1 + z + z^2 + z^3
  auto f = [](const Rational& z) -> Rational { return (1 + z) * (1 + z * z); };
  auto r = recover_univariate(f, 3);
  for (int d = 0; d <= 3; ++d) CHECK(r.coeffs[static_cast<std::size_t>(d)] == 1);
}

TEST_CASE("round-trip recovers random coefficients") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 1 + static_cast<int>(rng() % 40);
    std::vector<Rational> coeffs;
    for (int i = 0; i <= d; ++i)
      coeffs.emplace_back(static_cast<long>(rng() % 41) - 20);
    auto fq = [&](const Rational& z) {
      Rational acc(0);
      for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
      return acc;
    };
    auto rq = recover_univariate(fq, d);
    CHECK(rq.coeffs == coeffs);

    auto fc = [&](const Complex& z) {
      Complex acc(0, 0);
      for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * z + Complex(coeffs[i].get_d(), 0.0);
      return acc;
    };
    auto rc = recover_univariate(fc, d);
    for (int i = 0; i <= d; ++i)
      CHECK(std::abs(rc.coeffs[static_cast<std::size_t>(i)].real() -
                     coeffs[static_cast<std::size_t>(i)].get_d()) < 1e-9 *
                std::max(1.0, std::abs(coeffs[static_cast<std::size_t>(i)].get_d())));
  }
}

TEST_CASE("sum of recovered coefficients equals the value at one") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    int d = 1 + static_cast<int>(rng() % 30);
    std::vector<double> coeffs;
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int i = 0; i <= d; ++i) coeffs.push_back(uni(rng));
    auto fc = [&](const Complex& z) {
      Complex acc(0, 0);
      for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * z + Complex(coeffs[i], 0.0);
      return acc;
    };
    auto rc = recover_univariate(fc, d);
    double sum = 0.0;
    for (const auto& c : rc.coeffs) sum += c.real();
    double at_one = fc(Complex(1, 0)).real();
    CHECK(std::abs(sum - at_one) <= 1e-9 * std::max(1.0, std::abs(at_one)));
  }
}

TEST_CASE("backends agree on integer-valued problems") {
  std::mt19937_64 rng(13);
  for (int d : {4, 17, 64, 128}) {
    std::vector<long> coeffs;
    for (int i = 0; i <= d; ++i)
      coeffs.push_back(static_cast<long>(rng() % 1000));
    auto fq = [&](const Rational& z) {
      Rational acc(0);
      for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
      return acc;
    };
    auto fc = [&](const Complex& z) {
      Complex acc(0, 0);
      for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * z + Complex(static_cast<double>(coeffs[i]), 0.0);
      return acc;
    };
    auto rq = recover_univariate(fq, d);
    auto rc = recover_univariate(fc, d);
    for (int i = 0; i <= d; ++i) {
      double want = rq.coeffs[static_cast<std::size_t>(i)].get_d();
      double got = rc.coeffs[static_cast<std::size_t>(i)].real();
      CHECK(std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("degree bound violations raise DegreeExceeded") {
  auto fq = [](const Rational& z) -> Rational { return z * z * z; };
  CHECK_THROWS_AS(recover_univariate(fq, 2), Error);
  auto fc = [](const Complex& z) { return z * z * z * z * z; };
  CHECK_THROWS_AS(recover_univariate(fc, 3), Error);
}

TEST_CASE("multivariate recovery of small products") {
  auto f12 = [](std::span<const Complex> y) { return y[0] * y[1]; };
  std::vector<int> bounds{1, 1};
  auto t = recover_multivariate(f12, bounds);
  REQUIRE(t.dims == std::vector<int>{2, 2});
  std::vector<int> idx{1, 1};
  CHECK(t.at(idx).real() == doctest::Approx(1.0));
  idx = {0, 0};
  CHECK(t.at(idx).real() == doctest::Approx(0.0).epsilon(1e-12));

  auto fprod = [](std::span<const Rational> y) -> Rational {
    return (1 + y[0]) * (1 + y[1]);
  };
  auto tq = recover_multivariate(fprod, bounds);
  for (const auto& e : tq.entries) CHECK(e == 1);
}

TEST_CASE("multivariate grid budget raises GridTooLarge") {
  RecoverOptions opts;
  opts.grid_budget = 8;
  auto f = [](std::span<const Complex>) { return Complex(0, 0); };
  std::vector<int> bounds{3, 3};
  CHECK_THROWS_AS(recover_multivariate(f, bounds, opts), Error);
}

TEST_CASE("integer rounding guards resolution") {
  CHECK(round_to_integer(41.9999999) == 42);
  CHECK_THROWS_AS(round_to_integer(41.5), Error);
  CHECK(round_to_integer(Rational(7)) == 7);
  CHECK_THROWS_AS(round_to_integer(Rational(1, 2)), Error);
}
