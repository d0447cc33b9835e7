#include <doctest.h>

#include <cmath>
#include <random>

#include "szego/symbols.hpp"

using namespace szego;
using doctest::Approx;

TEST_CASE("fourier series evaluation on pinned coefficient sets") {
  const CoeffSeq constant = CoeffSeq::from_offsets({{0, 1.0}});
  CHECK(eval_fourier_series(constant, 0.3).real() == Approx(1.0));
  CHECK(eval_fourier_series(constant, -2.0).imag() == Approx(0.0));

  const CoeffSeq cosine = CoeffSeq::from_offsets({{1, 1.0}, {-1, 1.0}});
  CHECK(eval_fourier_series(cosine, 0.0).real() == Approx(2.0));
  CHECK(eval_fourier_series(cosine, 0.7).real() == Approx(2.0 * std::cos(0.7)));
  CHECK(std::abs(eval_fourier_series(cosine, 0.7).imag()) < 1e-14);

  const CoeffSeq shift = CoeffSeq::from_offsets({{1, 1.0}});
  const Complex at_quarter = eval_fourier_series(shift, kPi / 2.0);
  CHECK(at_quarter.real() == Approx(0.0).epsilon(1e-12));
  CHECK(at_quarter.imag() == Approx(1.0));
}

TEST_CASE("two evaluation paths agree and respect the coefficient-sum bound") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int band = static_cast<int>(rng() % 4);
    std::vector<Complex> entries(static_cast<std::size_t>(2 * band + 1));
    for (Complex& z : entries) z = Complex(unif(rng), unif(rng));
    const CoeffSeq coeffs(band, entries);
    const double t = kPi * unif(rng);
    Complex direct(0.0, 0.0);
    for (int k = -band; k <= band; ++k)
      direct += coeffs.coeff(k) * Complex(std::cos(k * t), std::sin(k * t));
    const Complex fast = eval_fourier_series(coeffs, t);
    CHECK(std::abs(fast - direct) < 1e-12);
    CHECK(std::abs(fast) <= coeffs.wiener_norm() + 1e-12);
  }
}

TEST_CASE("coefficient norms") {
  CHECK(wiener_norm(CoeffSeq::from_offsets({{1, 1.0}, {-1, 1.0}})) == Approx(2.0));
  CHECK(wiener_norm(CoeffSeq::from_offsets({{0, Complex(3.0, -4.0)}})) == Approx(5.0));
}

TEST_CASE("symbol values on pinned examples") {
  const DiagonalSymbol linear(
      1, {ScalarField::constant(1.0), ScalarField::poly({0.0, 1.0}), ScalarField::constant(1.0)},
      true);
  CHECK(symbol_value(linear, 0.5, 0.0).real() == Approx(2.5));

  const DiagonalSymbol hopping(
      1, {ScalarField::constant(1.0), ScalarField::constant(0.0), ScalarField::constant(1.0)}, true);
  CHECK(symbol_value(hopping, 0.25, kPi).real() == Approx(-2.0));

  const DiagonalSymbol stepped(
      1,
      {ScalarField::constant(1.0), ScalarField::step({0.5}, {0.0, 1.0}), ScalarField::constant(1.0)},
      true);
  CHECK(symbol_value(stepped, 0.75, kPi / 2.0).real() == Approx(1.0).epsilon(1e-12));
  // the step takes the right-hand value at its breakpoint
  CHECK(stepped.coeff(0, 0.5).real() == Approx(1.0));
  CHECK(stepped.coeff(0, std::nextafter(0.5, 0.0)).real() == Approx(0.0));
}

TEST_CASE("hermitian-paired symbols evaluate to real numbers") {
  const DiagonalSymbol sym(
      2,
      {ScalarField::constant(Complex(0.25, -0.5)), ScalarField::poly({0.5, 0.25}),
       ScalarField::poly({0.0, 1.0}), ScalarField::poly({0.5, 0.25}),
       ScalarField::constant(Complex(0.25, 0.5))},
      true);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double s = unif(rng);
    const double t = kPi * (2.0 * unif(rng) - 1.0);
    CHECK(std::abs(sym.value(s, t).imag()) < 1e-12);
  }
}

TEST_CASE("hermitian pairing violations are rejected at construction") {
  CHECK_THROWS_AS(
      DiagonalSymbol(1,
                     {ScalarField::constant(0.5), ScalarField::constant(0.0),
                      ScalarField::constant(1.0)},
                     true),
      std::invalid_argument);
}

TEST_CASE("trapezoid coefficient extraction is exact on trigonometric polynomials") {
  const auto cosine = [](double, double t) { return Complex(2.0 * std::cos(t), 0.0); };
  const CoeffSeq c1 = fourier_coeffs_of_symbol(cosine, 0.3, 1, 16);
  CHECK(std::abs(c1.coeff(1) - Complex(1.0, 0.0)) < 1e-13);
  CHECK(std::abs(c1.coeff(-1) - Complex(1.0, 0.0)) < 1e-13);
  CHECK(std::abs(c1.coeff(0)) < 1e-13);

  const auto plain = [](double s, double) { return Complex(s, 0.0); };
  const CoeffSeq c2 = fourier_coeffs_of_symbol(plain, 0.7, 1, 16);
  CHECK(std::abs(c2.coeff(0) - Complex(0.7, 0.0)) < 1e-13);
  CHECK(std::abs(c2.coeff(1)) < 1e-13);

  const auto wave = [](double, double t) { return std::polar(1.0, 2.0 * t); };
  const CoeffSeq c3 = fourier_coeffs_of_symbol(wave, 0.0, 3, 32);
  for (int k = -3; k <= 3; ++k) {
    const Complex want = k == 2 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    CHECK(std::abs(c3.coeff(k) - want) < 1e-12);
  }

  CHECK_THROWS_AS(fourier_coeffs_of_symbol(wave, 0.0, 3, 15), std::invalid_argument);
}

TEST_CASE("extraction inverts evaluation on random banded coefficients") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int band = 1 + static_cast<int>(rng() % 3);
    std::vector<Complex> entries(static_cast<std::size_t>(2 * band + 1));
    for (Complex& z : entries) z = Complex(unif(rng), unif(rng));
    const CoeffSeq coeffs(band, entries);
    const auto series = [&](double, double t) { return eval_fourier_series(coeffs, t); };
    const CoeffSeq back = fourier_coeffs_of_symbol(series, 0.0, band, 4 * band + 4);
    for (int k = -band; k <= band; ++k) CHECK(std::abs(back.coeff(k) - coeffs.coeff(k)) < 1e-12);
  }
}

TEST_CASE("grid sup-norm sum covers declared breakpoints") {
  const DiagonalSymbol linear(
      1, {ScalarField::constant(1.0), ScalarField::poly({0.0, 1.0}), ScalarField::constant(1.0)},
      true);
  CHECK(sup_norm_sum(linear, 101) == Approx(3.0));

  // the plateau value at the break must be picked up exactly
  const DiagonalSymbol spike(
      0, {ScalarField::step({0.25, 0.75}, {0.0, 2.0, 0.0})}, false);
  CHECK(sup_norm_sum(spike, 3) == Approx(2.0));
  CHECK_THROWS_AS(sup_norm_sum(spike, 1), std::invalid_argument);
}

TEST_CASE("scalar field backends") {
  const ScalarField grid = ScalarField::grid({Complex(0.0, 0.0), Complex(1.0, 0.0)});
  CHECK(grid(0.25).real() == Approx(0.25));
  const ScalarField wave = ScalarField::cosine(2.0, kPi, 0.0);
  CHECK(wave(1.0).real() == Approx(-2.0));
  CHECK_THROWS_AS(ScalarField::step({0.5, 0.25}, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField::step({1.5}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(ScalarField::grid({Complex(1.0, 0.0)}), std::invalid_argument);
}
