#pragma once

#include "szego/ensembles.hpp"

namespace szego {

class LimitLaw;

// Total variation along one diagonal: sum_j |a_{k;j+1} - a_{k;j}|.
double vmv_variation(const DiagMatrix& a, int k);

struct VmvEntry {
  int k = 0;
  long n = 0;
  double variation = 0.0;
  double normalized = 0.0;  // variation / n
};

struct VmvReport {
  std::vector<VmvEntry> rows;
  std::map<int, bool> tail_ok;  // nonincreasing-tail verdict per diagonal

  bool pass() const;
};

// Tabulates the normalized variation over an increasing n-grid (length >= 3)
// and flags diagonals whose last three normalized values fail to decrease.
VmvReport vmv_profile(const MatrixSeqSpec& spec, const std::vector<long>& n_grid,
                      std::uint64_t seed = 0);

// (1/n) |sum_j prod_m a_{h_m; nu_m + j}  -  sum_j prod_m a_{h_m; j}|
// with zero extension; a direct measurement of the index-shift defect.
double shift_defect(const DiagMatrix& a, const std::vector<int>& offsets,
                    const std::vector<long>& shifts);

// sum over stored diagonals of max_j |a_{k;j}|: dominates every Gershgorin
// row bound and, through Qi's theorem, every singular value.
double gershgorin_bound(const DiagMatrix& a);

double cond_szego_sup(const MatrixSeqSpec& spec, const std::vector<long>& n_grid,
                      std::uint64_t seed = 0);

std::vector<double> singular_values(const DiagMatrix& a);
double trace_norm(const DiagMatrix& a);
double spectral_norm(const DiagMatrix& a);

struct BoundReport {
  long n = 0;
  double coeff_bound = 0.0;  // the diagonal-max bracket at this n
  double spectral = 0.0;
  double trace = 0.0;
  double max_abs_eigenvalue = 0.0;
  double max_singular_value = 0.0;
};

BoundReport bound_report(const DiagMatrix& a);

// Max absolute gap between empirical averages of the monomials z_k and
// z_k conj(z_l) over the diagonal cross-section vectors (|k|,|l| <= window)
// and the target law's corresponding integrals.
double empirical_diag_discrepancy(const DiagMatrix& a, int window, const LimitLaw& target);

}  // namespace szego
