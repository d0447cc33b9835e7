#include "szego/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace szego {

namespace {

Complex ipow(Complex z, int m) {
  Complex acc(1.0, 0.0);
  for (int i = 0; i < m; ++i) acc *= z;
  return acc;
}

int default_t_nodes(int band, int degree) {
  const int exactness = 2 * degree * band + 2;
  return std::max({4 * band + 4, exactness, 256});
}

}  // namespace

double TestFunction::operator()(double x) const {
  switch (kind) {
    case Kind::Poly: {
      double acc = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
    case Kind::Bump: {
      const double u = (x - center) / width;
      return height * std::exp(-u * u);
    }
    case Kind::Sigmoid:
      return 1.0 / (1.0 + std::exp(-(x - center) / width));
  }
  return 0.0;
}

Complex TestFunction::eval_complex(Complex z) const {
  if (kind != Kind::Poly)
    throw std::invalid_argument("TestFunction: complex evaluation is defined for polynomials only");
  Complex acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

int TestFunction::degree() const {
  if (kind != Kind::Poly) return -1;
  int deg = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) deg = static_cast<int>(i);
  return deg;
}

TestFunction TestFunction::power(int m) {
  if (m < 0) throw std::invalid_argument("TestFunction::power: negative exponent");
  TestFunction f;
  f.kind = Kind::Poly;
  f.coeffs.assign(static_cast<std::size_t>(m) + 1, 0.0);
  f.coeffs.back() = 1.0;
  return f;
}

TestFunction TestFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("TestFunction::polynomial: empty coefficients");
  TestFunction f;
  f.kind = Kind::Poly;
  f.coeffs = std::move(coeffs);
  return f;
}

TestFunction TestFunction::bump(double center, double width, double height) {
  if (width <= 0.0) throw std::invalid_argument("TestFunction::bump: width must be positive");
  TestFunction f;
  f.kind = Kind::Bump;
  f.center = center;
  f.width = width;
  f.height = height;
  return f;
}

TestFunction TestFunction::sigmoid(double center, double width) {
  if (width <= 0.0) throw std::invalid_argument("TestFunction::sigmoid: width must be positive");
  TestFunction f;
  f.kind = Kind::Sigmoid;
  f.center = center;
  f.width = width;
  return f;
}

LimitLaw::LimitLaw(std::vector<WeightedCoeffs> atoms, int t_nodes)
    : atoms_(std::move(atoms)), t_nodes_(t_nodes) {
  if (atoms_.empty()) throw std::invalid_argument("LimitLaw: empty support");
  double total = 0.0;
  for (const WeightedCoeffs& a : atoms_) {
    if (a.weight < 0.0) throw std::invalid_argument("LimitLaw: negative weight");
    total += a.weight;
    band_ = std::max(band_, a.coeffs.band());
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("LimitLaw: weights must sum to 1");
  if (t_nodes_ == 0) t_nodes_ = default_t_nodes(band_, 1);
  if (t_nodes_ < 4 * band_ + 4)
    throw std::invalid_argument("LimitLaw: t_nodes must be >= 4*band+4");
}

LimitLaw LimitLaw::atoms(std::vector<WeightedCoeffs> atoms, int t_nodes) {
  return LimitLaw(std::move(atoms), t_nodes);
}

LimitLaw LimitLaw::dirac(const CoeffSeq& coeffs, int t_nodes) {
  return LimitLaw({WeightedCoeffs{coeffs, 1.0}}, t_nodes);
}

LimitLaw LimitLaw::pushforward(const DiagonalSymbol& symbol, int s_nodes, int t_nodes) {
  if (s_nodes < 1) throw std::invalid_argument("LimitLaw::pushforward: s_nodes must be >= 1");
  std::vector<WeightedCoeffs> atoms;
  atoms.reserve(static_cast<std::size_t>(s_nodes));
  const double w = 1.0 / static_cast<double>(s_nodes);
  for (int i = 0; i < s_nodes; ++i) {
    const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(s_nodes);
    std::vector<Complex> entries(static_cast<std::size_t>(2 * symbol.band() + 1));
    for (int k = -symbol.band(); k <= symbol.band(); ++k)
      entries[static_cast<std::size_t>(k + symbol.band())] = symbol.coeff(k, s);
    atoms.push_back({CoeffSeq(symbol.band(), std::move(entries)), w});
  }
  return LimitLaw(std::move(atoms), t_nodes);
}

LimitLaw LimitLaw::pushforward_atoms(const DiagonalSymbol& symbol,
                                     const std::vector<std::pair<double, double>>& s_atoms,
                                     int t_nodes) {
  std::vector<WeightedCoeffs> atoms;
  atoms.reserve(s_atoms.size());
  for (const auto& [s, w] : s_atoms) {
    std::vector<Complex> entries(static_cast<std::size_t>(2 * symbol.band() + 1));
    for (int k = -symbol.band(); k <= symbol.band(); ++k)
      entries[static_cast<std::size_t>(k + symbol.band())] = symbol.coeff(k, s);
    atoms.push_back({CoeffSeq(symbol.band(), std::move(entries)), w});
  }
  return LimitLaw(std::move(atoms), t_nodes);
}

bool LimitLaw::hermitian(double tol) const {
  for (const WeightedCoeffs& a : atoms_)
    if (!a.coeffs.hermitian_pair(tol)) return false;
  return true;
}

Complex LimitLaw::coeff_mean(int k) const {
  Complex acc(0.0, 0.0);
  for (const WeightedCoeffs& a : atoms_) acc += a.weight * a.coeffs.coeff(k);
  return acc;
}

Complex LimitLaw::coeff_corr(int k, int l) const {
  Complex acc(0.0, 0.0);
  for (const WeightedCoeffs& a : atoms_)
    acc += a.weight * a.coeffs.coeff(k) * std::conj(a.coeffs.coeff(l));
  return acc;
}

Complex predicted_moment(const LimitLaw& law, int r, int s) {
  if (r < 0 || s < 0 || r + s < 1) throw std::invalid_argument("predicted_moment: need r+s >= 1");
  const int nodes = law.t_nodes();
  if (nodes <= 2 * (r + s) * law.band())
    throw std::invalid_argument("predicted_moment: t_nodes too small for requested exponents");
  Complex acc(0.0, 0.0);
  for (const WeightedCoeffs& atom : law.support()) {
    Complex inner(0.0, 0.0);
    for (int j = 0; j < nodes; ++j) {
      const double t = -kPi + 2.0 * kPi * j / nodes;
      const Complex p = eval_fourier_series(atom.coeffs, t);
      inner += ipow(p, r) * std::conj(ipow(p, s));
    }
    acc += atom.weight * inner / static_cast<double>(nodes);
  }
  return acc;
}

double predicted_phi_integral(const LimitLaw& law, const TestFunction& phi, int t_nodes) {
  const bool herm = law.hermitian();
  if (!herm && !phi.polynomial())
    throw std::invalid_argument(
        "predicted_phi_integral: non-polynomial phi requires a hermitian-paired law");
  int nodes = t_nodes;
  if (nodes == 0) {
    nodes = phi.polynomial() ? default_t_nodes(law.band(), std::max(phi.degree(), 1)) : 4096;
    nodes = std::max(nodes, law.t_nodes());
  }
  double acc = 0.0;
  for (const WeightedCoeffs& atom : law.support()) {
    double inner = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double t = -kPi + 2.0 * kPi * j / nodes;
      const Complex f = eval_fourier_series(atom.coeffs, t);
      inner += herm ? phi(f.real()) : phi.eval_complex(f).real();
    }
    acc += atom.weight * inner / static_cast<double>(nodes);
  }
  return acc;
}

double kms_phi_integral(const DiagonalSymbol& symbol, const std::function<double(double)>& phi,
                        int s_nodes, int t_nodes) {
  if (s_nodes < 1 || t_nodes < 1)
    throw std::invalid_argument("kms_phi_integral: node counts must be positive");
  if (!symbol.hermitian())
    throw std::invalid_argument("kms_phi_integral: real test functions need a hermitian-paired symbol");
  double acc = 0.0;
  for (int i = 0; i < s_nodes; ++i) {
    const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(s_nodes);
    for (int j = 0; j < t_nodes; ++j) {
      const double t = -kPi + 2.0 * kPi * j / t_nodes;
      acc += phi(symbol.value(s, t).real());
    }
  }
  return acc / (static_cast<double>(s_nodes) * static_cast<double>(t_nodes));
}

DensityModel::DensityModel(std::vector<double> f_poly, std::vector<std::pair<double, double>> nu_atoms)
    : f_(std::move(f_poly)), nu_(std::move(nu_atoms)) {
  if (f_.empty()) throw std::invalid_argument("DensityModel: empty polynomial");
  f0_ = f(0.0);
  f1_ = f(1.0);
  if (f1_ - f0_ >= 4.0)
    throw std::invalid_argument("DensityModel: requires f(1) - f(0) < 4");
  // monotonicity check on a sample grid
  double prev = f0_;
  for (int i = 1; i <= 512; ++i) {
    const double v = f(static_cast<double>(i) / 512.0);
    if (v < prev - 1e-12) throw std::invalid_argument("DensityModel: f must be nondecreasing on [0,1]");
    prev = v;
  }
  double total = 0.0;
  for (const auto& [s, w] : nu_) {
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("DensityModel: nu atom outside [0,1]");
    if (w < 0.0) throw std::invalid_argument("DensityModel: negative nu weight");
    total += w;
  }
  if (!nu_.empty() && std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("DensityModel: nu weights must sum to 1");
}

double DensityModel::f(double s) const {
  double acc = 0.0;
  for (auto it = f_.rbegin(); it != f_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

bool DensityModel::f_is_linear() const {
  for (std::size_t i = 2; i < f_.size(); ++i)
    if (f_[i] != 0.0) return false;
  return true;
}

double DensityModel::f_inverse(double x) const {
  if (x <= f0_) return 0.0;
  if (x >= f1_) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> DensityModel::kink_points() const {
  std::vector<double> pts = {f0_ - 2.0, f1_ - 2.0, f0_ + 2.0, f1_ + 2.0};
  for (const auto& [s, w] : nu_) {
    pts.push_back(f(s) - 2.0);
    pts.push_back(f(s) + 2.0);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-13; }),
            pts.end());
  return pts;
}

namespace {

double clipped_sqrt(double v, double clip) { return std::sqrt(std::max(v, clip)); }

// Closed-form branch integral for linear f and Lebesgue nu via the arcsine
// antiderivative of 1/sqrt(4 - (x - f(s))^2).
double linear_branch_integral(const DensityModel& model, double x, double s_lo, double s_hi) {
  const double c1 = model.f(1.0) - model.f(0.0);
  if (std::abs(c1) < 1e-14) {
    const double u = x - model.f(0.0);
    return (s_hi - s_lo) / std::sqrt(std::max((2.0 - u) * (2.0 + u), 1e-300));
  }
  const double u_lo = std::clamp((x - model.f(s_lo)) / 2.0, -1.0, 1.0);
  const double u_hi = std::clamp((x - model.f(s_hi)) / 2.0, -1.0, 1.0);
  return (std::asin(u_lo) - std::asin(u_hi)) / c1;
}

}  // namespace

double schrodinger_density(const DensityModel& model, double x, double clip) {
  if (x <= model.support_lo() || x >= model.support_hi()) return 0.0;
  if (!model.uniform_nu()) {
    double acc = 0.0;
    for (const auto& [s, w] : model.nu_atoms()) {
      const double u = x - model.f(s);
      if (std::abs(u) < 2.0) acc += w / clipped_sqrt((2.0 - u) * (2.0 + u), clip);
    }
    return acc / kPi;
  }
  // integration limits restrict to |x - f(s)| < 2
  const double s_lo = x > model.f(0.0) + 2.0 ? model.f_inverse(x - 2.0) : 0.0;
  const double s_hi = x < model.f(1.0) - 2.0 ? model.f_inverse(x + 2.0) : 1.0;
  if (s_hi <= s_lo) return 0.0;
  if (model.f_is_linear()) return linear_branch_integral(model, x, s_lo, s_hi) / kPi;
  const auto integrand = [&](double s) {
    const double u = x - model.f(s);
    return 1.0 / clipped_sqrt((2.0 - u) * (2.0 + u), clip);
  };
  return tanh_sinh(integrand, s_lo, s_hi) / kPi;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_level) {
  if (b <= a) return 0.0;
  const double half = 0.5 * (b - a);
  const double t_max = 4.3;  // abscissas past this carry weights below machine precision
  auto node_sum = [&](double h, bool odd_only) {
    double acc = 0.0;
    for (int i = odd_only ? 1 : 0;; i += odd_only ? 2 : 1) {
      const double t = i * h;
      if (t > t_max) break;
      const double sh = 0.5 * kPi * std::sinh(t);
      // distance of the node from the nearer endpoint, kept in stable form:
      // u = 1 - tanh(sh), weight uses sech^2(sh) = u (2 - u)
      const double u = 2.0 / (1.0 + std::exp(2.0 * sh));
      const double w = 0.5 * kPi * std::cosh(t) * u * (2.0 - u);
      double term = w * f(b - half * u);
      if (i > 0) term += w * f(a + half * u);
      if (!std::isfinite(term)) term = 0.0;  // clipped integrable endpoint
      acc += term;
      if (i > 8 && std::abs(term) < 1e-18 * (1.0 + std::abs(acc))) break;
    }
    return acc;
  };
  double h = 1.0;
  double sum = node_sum(h, false);
  double result = half * h * sum;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    sum += node_sum(h, true);
    const double next = half * h * sum;
    if (level > 2 && std::abs(next - result) < tol * (1.0 + std::abs(next))) {
      return next;
    }
    result = next;
  }
  return result;
}

double density_integral(const DensityModel& model, double a, double b) {
  a = std::max(a, model.support_lo());
  b = std::min(b, model.support_hi());
  if (b <= a) return 0.0;
  std::vector<double> cuts = {a, b};
  for (double p : model.kink_points())
    if (p > a && p < b) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += tanh_sinh([&](double x) { return schrodinger_density(model, x); }, cuts[i], cuts[i + 1]);
  return acc;
}

double density_integral(const DensityModel& model) {
  return density_integral(model, model.support_lo(), model.support_hi());
}

namespace {

// distribution function of 2cos(t) under uniform t
double arcsine_cdf(double y) {
  const double u = std::clamp(0.5 * y, -1.0, 1.0);
  return 0.5 + std::asin(u) / kPi;
}

// primitive of the arcsine distribution function, zero at -2 (and = u above 2)
double arcsine_cdf_primitive(double u) {
  if (u <= -2.0) return 0.0;
  if (u >= 2.0) return u;
  return 0.5 * u + (u * std::asin(0.5 * u) + std::sqrt((2.0 - u) * (2.0 + u))) / kPi;
}

// F(x) = integral of arcsine_cdf(x - f(s)) dnu(s): the distribution function
// of f(s) + 2cos(t), i.e. the integral of the density up to x
double density_cdf_at(const DensityModel& model, double x) {
  if (!model.uniform_nu()) {
    double acc = 0.0;
    for (const auto& [s, w] : model.nu_atoms()) acc += w * arcsine_cdf(x - model.f(s));
    return acc;
  }
  const double slope = model.f(1.0) - model.f(0.0);
  if (std::abs(slope) < 1e-12) return arcsine_cdf(x - model.f(0.0));
  if (model.f_is_linear())
    return (arcsine_cdf_primitive(x - model.f(0.0)) - arcsine_cdf_primitive(x - model.f(1.0))) /
           slope;
  return tanh_sinh([&](double s) { return arcsine_cdf(x - model.f(s)); }, 0.0, 1.0);
}

}  // namespace

std::vector<double> predicted_cdf(const DensityModel& model, const std::vector<double>& grid) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && grid[i] < grid[i - 1])
      throw std::invalid_argument("predicted_cdf: grid must be nondecreasing");
    out[i] = density_cdf_at(model, grid[i]);
  }
  return out;
}

std::vector<double> predicted_cdf(const LimitLaw& law, const std::vector<double>& grid) {
  if (!law.hermitian())
    throw std::invalid_argument("predicted_cdf: law must be hermitian-paired");
  std::vector<std::pair<double, double>> samples;  // (value, weight)
  const int nodes = law.t_nodes();
  samples.reserve(law.support().size() * static_cast<std::size_t>(nodes));
  for (const WeightedCoeffs& atom : law.support()) {
    const double w = atom.weight / static_cast<double>(nodes);
    for (int j = 0; j < nodes; ++j) {
      const double t = -kPi + 2.0 * kPi * j / nodes;
      samples.emplace_back(eval_fourier_series(atom.coeffs, t).real(), w);
    }
  }
  std::sort(samples.begin(), samples.end());
  std::vector<double> out(grid.size(), 0.0);
  double acc = 0.0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && grid[i] < grid[i - 1])
      throw std::invalid_argument("predicted_cdf: grid must be nondecreasing");
    while (pos < samples.size() && samples[pos].first <= grid[i]) acc += samples[pos++].second;
    out[i] = acc;
  }
  return out;
}

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("ks_distance: inputs must share the evaluation grid");
  double sup = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, std::abs(a[i] - b[i]));
  return sup;
}

double nevai_limit(const CoeffSeq& coeffs, const TestFunction& phi) {
  return predicted_phi_integral(LimitLaw::dirac(coeffs), phi);
}

}  // namespace szego
