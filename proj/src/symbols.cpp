#include "szego/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace szego {

CoeffSeq::CoeffSeq(int band, std::vector<Complex> entries)
    : band_(band), entries_(std::move(entries)) {
  if (band_ < 0) throw std::invalid_argument("CoeffSeq: band must be >= 0");
  if (entries_.size() != static_cast<std::size_t>(2 * band_ + 1))
    throw std::invalid_argument("CoeffSeq: expected 2*band+1 entries");
}

CoeffSeq CoeffSeq::from_offsets(const std::map<int, Complex>& nonzero) {
  int band = 0;
  for (const auto& [k, z] : nonzero) band = std::max(band, std::abs(k));
  std::vector<Complex> entries(2 * band + 1, Complex(0.0, 0.0));
  for (const auto& [k, z] : nonzero) entries[k + band] = z;
  return CoeffSeq(band, std::move(entries));
}

Complex CoeffSeq::coeff(int k) const {
  if (std::abs(k) > band_) return {0.0, 0.0};
  return entries_[k + band_];
}

double CoeffSeq::wiener_norm() const {
  double sum = 0.0;
  for (const Complex& z : entries_) sum += std::abs(z);
  return sum;
}

bool CoeffSeq::hermitian_pair(double tol) const {
  for (int k = 0; k <= band_; ++k)
    if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol) return false;
  return true;
}

Complex eval_fourier_series(const CoeffSeq& coeffs, double t) {
  Complex sum(0.0, 0.0);
  const int band = coeffs.band();
  for (int k = -band; k <= band; ++k)
    sum += coeffs.coeff(k) * std::polar(1.0, k * t);
  return sum;
}

double wiener_norm(const CoeffSeq& coeffs) { return coeffs.wiener_norm(); }

ScalarField ScalarField::constant(Complex value) {
  ScalarField f;
  f.kind_ = Kind::Const;
  f.values_ = {value};
  return f;
}

ScalarField ScalarField::poly(std::vector<Complex> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("ScalarField::poly: empty coefficient list");
  ScalarField f;
  f.kind_ = Kind::Poly;
  f.values_ = std::move(coeffs);
  return f;
}

ScalarField ScalarField::cosine(Complex amplitude, double freq, double phase) {
  ScalarField f;
  f.kind_ = Kind::Cos;
  f.values_ = {amplitude};
  f.freq_ = freq;
  f.phase_ = phase;
  return f;
}

ScalarField ScalarField::step(std::vector<double> breaks, std::vector<Complex> values) {
  if (values.size() != breaks.size() + 1)
    throw std::invalid_argument("ScalarField::step: need one more value than breaks");
  if (!std::is_sorted(breaks.begin(), breaks.end()))
    throw std::invalid_argument("ScalarField::step: breaks must be increasing");
  for (double b : breaks)
    if (b <= 0.0 || b >= 1.0)
      throw std::invalid_argument("ScalarField::step: breaks must lie inside (0,1)");
  ScalarField f;
  f.kind_ = Kind::Step;
  f.breaks_ = std::move(breaks);
  f.values_ = std::move(values);
  return f;
}

ScalarField ScalarField::grid(std::vector<Complex> values) {
  if (values.size() < 2)
    throw std::invalid_argument("ScalarField::grid: need at least two nodes");
  ScalarField f;
  f.kind_ = Kind::Grid;
  f.values_ = std::move(values);
  return f;
}

Complex ScalarField::operator()(double s) const {
  switch (kind_) {
    case Kind::Const:
      return values_[0];
    case Kind::Poly: {
      Complex acc(0.0, 0.0);
      for (auto it = values_.rbegin(); it != values_.rend(); ++it) acc = acc * s + *it;
      return acc;
    }
    case Kind::Cos:
      return values_[0] * std::cos(freq_ * s + phase_);
    case Kind::Step: {
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
      return values_[static_cast<std::size_t>(it - breaks_.begin())];
    }
    case Kind::Grid: {
      const double m = static_cast<double>(values_.size() - 1);
      double x = std::clamp(s, 0.0, 1.0) * m;
      const auto i = std::min(static_cast<std::size_t>(x), values_.size() - 2);
      const double w = x - static_cast<double>(i);
      return values_[i] * (1.0 - w) + values_[i + 1] * w;
    }
  }
  return {0.0, 0.0};
}

namespace {

std::vector<double> sample_points(const DiagonalSymbol& sym, int grid) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(grid) + 8);
  for (int i = 0; i < grid; ++i)
    pts.push_back(static_cast<double>(i) / static_cast<double>(grid - 1));
  for (double b : sym.breakpoints()) {
    pts.push_back(b);
    // both one-sided values matter at a declared jump
    pts.push_back(std::nextafter(b, 0.0));
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

DiagonalSymbol::DiagonalSymbol(int band, std::vector<ScalarField> funcs, bool hermitian_pair)
    : band_(band), funcs_(std::move(funcs)), hermitian_(hermitian_pair) {
  if (band_ < 0) throw std::invalid_argument("DiagonalSymbol: band must be >= 0");
  if (funcs_.size() != static_cast<std::size_t>(2 * band_ + 1))
    throw std::invalid_argument("DiagonalSymbol: expected 2*band+1 diagonal functions");
  if (hermitian_) {
    for (double s : sample_points(*this, 65)) {
      for (int k = 0; k <= band_; ++k) {
        const Complex lhs = coeff(-k, s);
        const Complex rhs = std::conj(coeff(k, s));
        if (std::abs(lhs - rhs) > 1e-9)
          throw std::invalid_argument("DiagonalSymbol: hermitian_pair asserted but f_{-k} != conj(f_k)");
      }
    }
  }
}

const ScalarField& DiagonalSymbol::func(int k) const {
  if (std::abs(k) > band_) throw std::out_of_range("DiagonalSymbol::func: offset outside band");
  return funcs_[k + band_];
}

Complex DiagonalSymbol::coeff(int k, double s) const {
  if (std::abs(k) > band_) return {0.0, 0.0};
  return funcs_[k + band_](s);
}

Complex DiagonalSymbol::value(double s, double t) const {
  Complex sum(0.0, 0.0);
  for (int k = -band_; k <= band_; ++k) sum += coeff(k, s) * std::polar(1.0, k * t);
  return sum;
}

std::vector<double> DiagonalSymbol::breakpoints() const {
  std::vector<double> pts;
  for (const ScalarField& f : funcs_)
    pts.insert(pts.end(), f.breakpoints().begin(), f.breakpoints().end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

Complex symbol_value(const DiagonalSymbol& sym, double s, double t) { return sym.value(s, t); }

CoeffSeq fourier_coeffs_of_symbol(const std::function<Complex(double, double)>& a,
                                  double s, int band, int nodes) {
  if (band < 0) throw std::invalid_argument("fourier_coeffs_of_symbol: band must be >= 0");
  if (nodes < 4 * band + 4)
    throw std::invalid_argument("fourier_coeffs_of_symbol: nodes must be >= 4*band+4");
  std::vector<Complex> samples(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    const double t = -kPi + 2.0 * kPi * j / nodes;
    samples[j] = a(s, t);
  }
  std::vector<Complex> entries(2 * band + 1);
  for (int k = -band; k <= band; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < nodes; ++j) {
      const double t = -kPi + 2.0 * kPi * j / nodes;
      acc += samples[j] * std::polar(1.0, -k * t);
    }
    entries[k + band] = acc / static_cast<double>(nodes);
  }
  return CoeffSeq(band, std::move(entries));
}

double sup_norm_sum(const DiagonalSymbol& sym, int grid) {
  if (grid < 2) throw std::invalid_argument("sup_norm_sum: grid must be >= 2");
  const std::vector<double> pts = sample_points(sym, grid);
  double total = 0.0;
  for (int k = -sym.band(); k <= sym.band(); ++k) {
    double sup = 0.0;
    for (double s : pts) sup = std::max(sup, std::abs(sym.coeff(k, s)));
    total += sup;
  }
  return total;
}

}  // namespace szego
