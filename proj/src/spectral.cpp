#include "szego/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "szego/diagnostics.hpp"

namespace szego {

namespace {

double entry_scale(const DiagMatrix& a) { return std::max(1.0, gershgorin_bound(a)); }

void check_trace_consistency(const DiagMatrix& a, const std::vector<Complex>& values, double tol) {
  Complex trace(0.0, 0.0);
  for (long j = 0; j < a.size(); ++j) trace += a.diag_get(0, j);
  Complex sum(0.0, 0.0);
  for (const Complex& v : values) sum += v;
  const double budget = tol * static_cast<double>(a.size()) * entry_scale(a);
  if (std::abs(sum - trace) > std::max(budget, 1e-12))
    throw SolverError("eigenvalues: eigenvalue sum disagrees with the matrix trace");
}

}  // namespace

std::vector<double> SpectralSample::reals() const {
  if (!hermitian) throw std::invalid_argument("SpectralSample::reals: sample is not hermitian");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
  return out;
}

SpectralSample eigenvalues(const DiagMatrix& a, double tol) {
  const long n = a.size();
  SpectralSample sample;
  sample.n = n;
  sample.hermitian = a.hermitian();
  if (sample.hermitian && a.band() <= 1) {
    // hermitian tridiagonal: unitarily equivalent to the real symmetric
    // tridiagonal with |a_{1;j}| off the diagonal
    Eigen::VectorXd diag(n), sub(std::max<long>(n - 1, 0));
    for (long j = 0; j < n; ++j) diag(j) = a.diag_get(0, j).real();
    for (long j = 0; j + 1 < n; ++j) sub(j) = std::abs(a.diag_get(1, j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw SolverError("eigenvalues: tridiagonal QL failed");
    sample.values.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) sample.values.emplace_back(solver.eigenvalues()(i), 0.0);
  } else if (sample.hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.to_dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw SolverError("eigenvalues: self-adjoint solver failed");
    sample.values.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) sample.values.emplace_back(solver.eigenvalues()(i), 0.0);
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a.to_dense(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw SolverError("eigenvalues: complex Schur failed");
    sample.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::sort(sample.values.begin(), sample.values.end(), [](const Complex& x, const Complex& y) {
      return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
  }
  check_trace_consistency(a, sample.values, tol);
  return sample;
}

Complex moment_trace_dense(const DiagMatrix& a, int r, int s) {
  if (r < 0 || s < 0 || r + s < 1) throw std::invalid_argument("moment_trace_dense: need r+s >= 1");
  const auto table = moment_table_dense(a, {{r, s}});
  return table.at({r, s});
}

std::map<std::pair<int, int>, Complex> moment_table_dense(
    const DiagMatrix& a, const std::vector<std::pair<int, int>>& pairs) {
  const long n = a.size();
  int max_power = 0;
  for (const auto& [r, s] : pairs) {
    if (r < 0 || s < 0 || r + s < 1)
      throw std::invalid_argument("moment_table_dense: need r+s >= 1");
    if (r + s > MomentLimits{}.max_total)
      throw std::invalid_argument("moment_table_dense: exponent above configured maximum");
    max_power = std::max({max_power, r, s});
  }
  const Eigen::MatrixXcd dense = a.to_dense();
  std::vector<Eigen::MatrixXcd> powers;  // powers[m] = A^m
  powers.reserve(static_cast<std::size_t>(max_power) + 1);
  powers.push_back(Eigen::MatrixXcd::Identity(n, n));
  for (int m = 1; m <= max_power; ++m) powers.push_back(powers.back() * dense);
  std::map<std::pair<int, int>, Complex> out;
  for (const auto& [r, s] : pairs) {
    // tr[A^r (A^s)^*] accumulated entrywise
    const Complex value = (powers[static_cast<std::size_t>(r)].array() *
                           powers[static_cast<std::size_t>(s)].array().conjugate())
                              .sum();
    out[{r, s}] = value / static_cast<double>(n);
  }
  return out;
}

Complex moment_trace_diagonal(const DiagMatrix& a, int r, int s, const MomentLimits& limits) {
  if (r < 0 || s < 0 || r + s < 1)
    throw std::invalid_argument("moment_trace_diagonal: need r+s >= 1");
  if (r + s > limits.max_total)
    throw std::invalid_argument("moment_trace_diagonal: exponent above configured maximum");
  std::vector<int> offsets;
  for (const auto& [k, v] : a.diagonals()) offsets.push_back(k);
  if (offsets.empty()) return {0.0, 0.0};
  const int q = r + s;
  double tuples = 1.0;
  for (int i = 0; i < q; ++i) tuples *= static_cast<double>(offsets.size());
  if (tuples > static_cast<double>(limits.tuple_budget))
    throw std::invalid_argument("moment_trace_diagonal: enumeration budget exceeded");

  const long n = a.size();
  std::vector<std::size_t> pick(static_cast<std::size_t>(q), 0);
  std::vector<int> factor_offset(static_cast<std::size_t>(q));   // diagonal of each factor
  std::vector<long> factor_shift(static_cast<std::size_t>(q));   // position shift of each factor
  Complex total(0.0, 0.0);
  while (true) {
    int sum_h = 0, sum_k = 0;
    for (int m = 0; m < r; ++m) sum_h += offsets[pick[static_cast<std::size_t>(m)]];
    for (int l = 0; l < s; ++l) sum_k += offsets[pick[static_cast<std::size_t>(r + l)]];
    if (sum_h == sum_k) {
      // column offset accumulated left to right; each factor reads its
      // diagonal at the accumulated offset plus the factor's own min(o,0)
      int acc = 0;
      for (int m = 0; m < r; ++m) {
        const int h = offsets[pick[static_cast<std::size_t>(m)]];
        factor_offset[static_cast<std::size_t>(m)] = h;
        factor_shift[static_cast<std::size_t>(m)] = acc + std::min(h, 0);
        acc += h;
      }
      for (int l = 0; l < s; ++l) {
        const int k = offsets[pick[static_cast<std::size_t>(r + l)]];
        factor_offset[static_cast<std::size_t>(r + l)] = k;
        factor_shift[static_cast<std::size_t>(r + l)] = acc - std::max(k, 0);
        acc -= k;
      }
      // rows where every factor position stays in range
      long i_lo = 0, i_hi = n - 1;
      for (int m = 0; m < q; ++m) {
        const long len = n - std::abs(factor_offset[static_cast<std::size_t>(m)]);
        i_lo = std::max(i_lo, -factor_shift[static_cast<std::size_t>(m)]);
        i_hi = std::min(i_hi, len - 1 - factor_shift[static_cast<std::size_t>(m)]);
      }
      for (long i = i_lo; i <= i_hi; ++i) {
        Complex prod(1.0, 0.0);
        for (int m = 0; m < r; ++m)
          prod *= a.diag_get(factor_offset[static_cast<std::size_t>(m)],
                             factor_shift[static_cast<std::size_t>(m)] + i);
        for (int l = 0; l < s; ++l)
          prod *= std::conj(a.diag_get(factor_offset[static_cast<std::size_t>(r + l)],
                                       factor_shift[static_cast<std::size_t>(r + l)] + i));
        total += prod;
      }
    }
    int pos = q - 1;
    while (pos >= 0 && ++pick[static_cast<std::size_t>(pos)] == offsets.size()) {
      pick[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return total / static_cast<double>(n);
}

double test_functional_trace(const DiagMatrix& a, const std::function<double(double)>& phi) {
  if (!a.hermitian())
    throw std::invalid_argument("test_functional_trace: requires a hermitian matrix");
  const SpectralSample sample = eigenvalues(a);
  double acc = 0.0;
  for (const Complex& v : sample.values) acc += phi(v.real());
  return acc / static_cast<double>(sample.n);
}

std::vector<double> empirical_cdf(const SpectralSample& sample, const std::vector<double>& grid) {
  if (!sample.hermitian) throw std::invalid_argument("empirical_cdf: requires a hermitian sample");
  std::vector<double> sorted = sample.reals();
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), grid[i]);
    out[i] = static_cast<double>(it - sorted.begin()) / static_cast<double>(sample.n);
  }
  return out;
}

}  // namespace szego
