#pragma once

#include <utility>

#include "szego/symbols.hpp"

namespace szego {

// Test functions for spectral averages: polynomials, Gaussian bumps and
// logistic steps (smoothed indicator probes).
struct TestFunction {
  enum class Kind { Poly, Bump, Sigmoid };

  Kind kind = Kind::Poly;
  std::vector<double> coeffs;  // Poly: ascending-degree coefficients
  double center = 0.0;
  double width = 1.0;
  double height = 1.0;

  double operator()(double x) const;
  Complex eval_complex(Complex z) const;  // Poly only
  bool polynomial() const { return kind == Kind::Poly; }
  int degree() const;

  static TestFunction power(int m);
  static TestFunction polynomial(std::vector<double> coeffs);
  static TestFunction bump(double center, double width, double height = 1.0);
  static TestFunction sigmoid(double center, double width);
};

struct WeightedCoeffs {
  CoeffSeq coeffs;
  double weight = 1.0;
};

// Discretized coefficient measure (a finite list of weighted coefficient
// atoms) together with the uniform periodic t-quadrature used against it.
class LimitLaw {
 public:
  static LimitLaw atoms(std::vector<WeightedCoeffs> atoms, int t_nodes = 0);
  static LimitLaw dirac(const CoeffSeq& coeffs, int t_nodes = 0);
  // Push-forward of the midpoint s-grid (Lebesgue measure) under the symbol.
  static LimitLaw pushforward(const DiagonalSymbol& symbol, int s_nodes = 1024, int t_nodes = 0);
  // Push-forward of a weighted list of s-atoms.
  static LimitLaw pushforward_atoms(const DiagonalSymbol& symbol,
                                    const std::vector<std::pair<double, double>>& s_atoms,
                                    int t_nodes = 0);

  int band() const { return band_; }
  int t_nodes() const { return t_nodes_; }
  const std::vector<WeightedCoeffs>& support() const { return atoms_; }
  bool hermitian(double tol = 1e-9) const;

  Complex coeff_mean(int k) const;          // integral of z_k
  Complex coeff_corr(int k, int l) const;   // integral of z_k conj(z_l)

 private:
  LimitLaw(std::vector<WeightedCoeffs> atoms, int t_nodes);
  std::vector<WeightedCoeffs> atoms_;
  int band_ = 0;
  int t_nodes_ = 0;
};

// Quadrature of the predicted mixed moment P^r(z,t) conj(P^s(z,t)); the
// uniform t-rule is exact for the trigonometric polynomial integrand and an
// insufficient node count is rejected.
Complex predicted_moment(const LimitLaw& law, int r, int s);

// Quadrature of phi(F(z,t)).  Non-polynomial phi requires a hermitian-paired
// law (real-valued series); t_nodes = 0 picks the default.
double predicted_phi_integral(const LimitLaw& law, const TestFunction& phi, int t_nodes = 0);

// Tensor quadrature of phi(a(s,t)): midpoint in s, uniform in t.
double kms_phi_integral(const DiagonalSymbol& symbol, const std::function<double(double)>& phi,
                        int s_nodes, int t_nodes);

// Predicted spectral density of f(s) + 2cos(t): an increasing polynomial f on
// [0,1] with f(1)-f(0) < 4, and a measure nu on [0,1] that is either Lebesgue
// or a finite atom list.
class DensityModel {
 public:
  DensityModel(std::vector<double> f_poly, std::vector<std::pair<double, double>> nu_atoms = {});

  double f(double s) const;
  double f_inverse(double x) const;
  bool uniform_nu() const { return nu_.empty(); }
  const std::vector<std::pair<double, double>>& nu_atoms() const { return nu_; }
  double support_lo() const { return f0_ - 2.0; }
  double support_hi() const { return f1_ + 2.0; }
  bool f_is_linear() const;
  // Points where the density formula changes branch or blows up.
  std::vector<double> kink_points() const;

 private:
  std::vector<double> f_;
  std::vector<std::pair<double, double>> nu_;
  double f0_ = 0.0, f1_ = 0.0;
};

double schrodinger_density(const DensityModel& model, double x, double clip = 1e-12);

// Numeric integral of the density over [a,b] (default: the whole support),
// splitting at kink points and using tanh-sinh on each smooth piece.
double density_integral(const DensityModel& model);
double density_integral(const DensityModel& model, double a, double b);

std::vector<double> predicted_cdf(const DensityModel& model, const std::vector<double>& grid);
std::vector<double> predicted_cdf(const LimitLaw& law, const std::vector<double>& grid);

double ks_distance(const std::vector<double>& a, const std::vector<double>& b);

// Single-variable limit for constant-diagonal sequences: quadrature of
// phi(F(coeffs,t)).
double nevai_limit(const CoeffSeq& coeffs, const TestFunction& phi);

// Integrates f over (a,b); tolerates integrable endpoint singularities.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-11,
                 int max_level = 12);

}  // namespace szego
