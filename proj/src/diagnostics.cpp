#include "szego/diagnostics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "szego/limitlaw.hpp"
#include "szego/spectral.hpp"

namespace szego {

double vmv_variation(const DiagMatrix& a, int k) {
  if (std::abs(k) >= a.size()) throw std::invalid_argument("vmv_variation: |k| must be < n");
  const auto it = a.diagonals().find(k);
  if (it == a.diagonals().end()) return 0.0;
  const std::vector<Complex>& v = it->second;
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) total += std::abs(v[j + 1] - v[j]);
  return total;
}

bool VmvReport::pass() const {
  for (const auto& [k, ok] : tail_ok)
    if (!ok) return false;
  return true;
}

VmvReport vmv_profile(const MatrixSeqSpec& spec, const std::vector<long>& n_grid,
                      std::uint64_t seed) {
  if (n_grid.size() < 3) throw std::invalid_argument("vmv_profile: need at least three sizes");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end())
    throw std::invalid_argument("vmv_profile: n_grid must be strictly increasing");
  VmvReport report;
  std::map<int, std::vector<double>> normalized;
  for (long n : n_grid) {
    const DiagMatrix a = build(spec, n, seed);
    for (const auto& [k, v] : a.diagonals()) {
      const double var = vmv_variation(a, k);
      const double norm = var / static_cast<double>(n);
      report.rows.push_back({k, n, var, norm});
      normalized[k].push_back(norm);
    }
  }
  constexpr double kSlack = 1e-9;
  for (const auto& [k, values] : normalized) {
    bool ok = values.size() >= 3;
    if (ok) {
      const std::size_t g = values.size();
      ok = values[g - 2] <= values[g - 3] + kSlack && values[g - 1] <= values[g - 2] + kSlack;
    }
    report.tail_ok[k] = ok;
  }
  return report;
}

double shift_defect(const DiagMatrix& a, const std::vector<int>& offsets,
                    const std::vector<long>& shifts) {
  if (offsets.empty() || offsets.size() != shifts.size())
    throw std::invalid_argument("shift_defect: need matching nonempty offset and shift lists");
  const long n = a.size();
  Complex shifted(0.0, 0.0), aligned(0.0, 0.0);
  for (long j = 0; j <= n; ++j) {
    Complex p1(1.0, 0.0), p0(1.0, 0.0);
    for (std::size_t m = 0; m < offsets.size(); ++m) {
      p1 *= a.diag_get(offsets[m], shifts[m] + j);
      p0 *= a.diag_get(offsets[m], j);
    }
    shifted += p1;
    aligned += p0;
  }
  return std::abs(shifted - aligned) / static_cast<double>(n);
}

double gershgorin_bound(const DiagMatrix& a) {
  double total = 0.0;
  for (const auto& [k, v] : a.diagonals()) {
    double peak = 0.0;
    for (const Complex& z : v) peak = std::max(peak, std::abs(z));
    total += peak;
  }
  return total;
}

double cond_szego_sup(const MatrixSeqSpec& spec, const std::vector<long>& n_grid,
                      std::uint64_t seed) {
  double sup = 0.0;
  for (long n : n_grid) sup = std::max(sup, gershgorin_bound(build(spec, n, seed)));
  return sup;
}

std::vector<double> singular_values(const DiagMatrix& a) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a.to_dense());
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
  return out;
}

double trace_norm(const DiagMatrix& a) {
  double total = 0.0;
  for (double s : singular_values(a)) total += s;
  return total;
}

double spectral_norm(const DiagMatrix& a) {
  const std::vector<double> s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

BoundReport bound_report(const DiagMatrix& a) {
  BoundReport report;
  report.n = a.size();
  report.coeff_bound = gershgorin_bound(a);
  const SpectralSample sample = eigenvalues(a);
  double peak = 0.0;
  for (const Complex& v : sample.values) peak = std::max(peak, std::abs(v));
  report.max_abs_eigenvalue = peak;
  if (a.hermitian()) {
    // singular values coincide with |eigenvalues|; skip the SVD
    report.max_singular_value = peak;
    report.spectral = peak;
    report.trace = 0.0;
    for (const Complex& v : sample.values) report.trace += std::abs(v);
  } else {
    const std::vector<double> sigma = singular_values(a);
    report.max_singular_value = sigma.empty() ? 0.0 : sigma.front();
    report.spectral = report.max_singular_value;
    report.trace = 0.0;
    for (double s : sigma) report.trace += s;
  }
  return report;
}

double empirical_diag_discrepancy(const DiagMatrix& a, int window, const LimitLaw& target) {
  if (window < 0) throw std::invalid_argument("empirical_diag_discrepancy: window must be >= 0");
  if (window > target.band())
    throw std::invalid_argument("empirical_diag_discrepancy: window exceeds the law's band");
  const long n = a.size();
  double worst = 0.0;
  for (int k = -window; k <= window; ++k) {
    Complex mean(0.0, 0.0);
    for (long j = 0; j < n; ++j) mean += a.diag_get(k, j);
    mean /= static_cast<double>(n);
    worst = std::max(worst, std::abs(mean - target.coeff_mean(k)));
  }
  for (int k = -window; k <= window; ++k) {
    for (int l = -window; l <= window; ++l) {
      Complex corr(0.0, 0.0);
      for (long j = 0; j < n; ++j) corr += a.diag_get(k, j) * std::conj(a.diag_get(l, j));
      corr /= static_cast<double>(n);
      worst = std::max(worst, std::abs(corr - target.coeff_corr(k, l)));
    }
  }
  return worst;
}

}  // namespace szego
