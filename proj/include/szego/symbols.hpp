#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

namespace szego {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Finite-support two-sided coefficient sequence z_{-k0},...,z_{k0}.
// Offsets outside the band are implicitly zero.
class CoeffSeq {
 public:
  CoeffSeq(int band, std::vector<Complex> entries);

  // Band is inferred as the largest |k| present in the map.
  static CoeffSeq from_offsets(const std::map<int, Complex>& nonzero);

  int band() const { return band_; }
  Complex coeff(int k) const;
  const std::vector<Complex>& entries() const { return entries_; }

  double wiener_norm() const;
  bool hermitian_pair(double tol = 1e-12) const;

 private:
  int band_;
  std::vector<Complex> entries_;  // offset k lives at index k + band_
};

// F(z,t) = sum_k z_k e^{ikt}; identical to the trigonometric polynomial
// P(z,t) for a finite band.
Complex eval_fourier_series(const CoeffSeq& coeffs, double t);

double wiener_norm(const CoeffSeq& coeffs);

// One diagonal profile [0,1] -> C.  The supported backends are a fixed
// expression set: constants, polynomials in s, cosines, step tables and
// uniform-grid linear interpolation.
class ScalarField {
 public:
  enum class Kind { Const, Poly, Cos, Step, Grid };

  static ScalarField constant(Complex value);
  static ScalarField poly(std::vector<Complex> coeffs);
  static ScalarField cosine(Complex amplitude, double freq, double phase = 0.0);
  // Piecewise constant: values[i] on [breaks[i-1], breaks[i]), left-closed at
  // each break; breaks must be strictly increasing inside (0,1).
  static ScalarField step(std::vector<double> breaks, std::vector<Complex> values);
  // Linear interpolation through values at the uniform nodes i/(m-1).
  static ScalarField grid(std::vector<Complex> values);

  Complex operator()(double s) const;
  Kind kind() const { return kind_; }
  const std::vector<double>& breakpoints() const { return breaks_; }

 private:
  ScalarField() = default;
  Kind kind_ = Kind::Const;
  std::vector<Complex> values_;
  std::vector<double> breaks_;
  double freq_ = 0.0;
  double phase_ = 0.0;
};

// A banded symbol a(s,t) = sum_{|k|<=band} f_k(s) e^{ikt} given by one
// ScalarField per diagonal.  When hermitian_pair is set the construction
// checks f_{-k}(s) = conj(f_k(s)) on a sample grid and rejects violations.
class DiagonalSymbol {
 public:
  DiagonalSymbol(int band, std::vector<ScalarField> funcs, bool hermitian_pair);

  int band() const { return band_; }
  bool hermitian() const { return hermitian_; }
  const ScalarField& func(int k) const;

  Complex coeff(int k, double s) const;
  Complex value(double s, double t) const;

  // Union of declared step breakpoints across all diagonals.
  std::vector<double> breakpoints() const;

 private:
  int band_;
  std::vector<ScalarField> funcs_;  // offset k at index k + band_
  bool hermitian_;
};

Complex symbol_value(const DiagonalSymbol& sym, double s, double t);

// Trapezoid-rule Fourier coefficients of a(s,.) on a uniform periodic grid.
// Exact for trigonometric polynomials resolved by the grid; requires
// nodes >= 4*band + 4.
CoeffSeq fourier_coeffs_of_symbol(const std::function<Complex(double, double)>& a,
                                  double s, int band, int nodes);

// Grid approximation of sum_k sup_s |f_k(s)|.  Declared step breakpoints are
// always included, which makes the value exact for the step backend.
double sup_norm_sum(const DiagonalSymbol& sym, int grid = 1025);

}  // namespace szego
