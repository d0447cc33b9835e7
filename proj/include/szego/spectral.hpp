#pragma once

#include <stdexcept>
#include <string>

#include "szego/ensembles.hpp"

namespace szego {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpectralSample {
  long n = 0;
  bool hermitian = false;
  std::vector<Complex> values;  // sorted ascending by real part; real when hermitian

  std::vector<double> reals() const;
};

// Full eigenvalue set with multiplicity.  Hermitian matrices take the
// self-adjoint path (tridiagonal when banded with band <= 1) and come back
// real-sorted; anything else goes through the complex Schur solver.  The sum
// of the returned values is checked against the trace within tol.
SpectralSample eigenvalues(const DiagMatrix& a, double tol = 1e-9);

// (1/n) Tr[A^r (A*)^s] by repeated dense multiplication.
Complex moment_trace_dense(const DiagMatrix& a, int r, int s);

struct MomentLimits {
  int max_total = 12;
  long long tuple_budget = 1LL << 24;
};

// Same moment through the exact diagonal-product expansion: enumerate offset
// tuples with matching sums, walk each aligned diagonal product with zero
// extension.  Agrees with the dense route to roundoff; this is the oracle
// pair for banded matrices.
Complex moment_trace_diagonal(const DiagMatrix& a, int r, int s, const MomentLimits& limits = {});

// (1/n) sum phi(lambda_k); hermitian input only.
double test_functional_trace(const DiagMatrix& a, const std::function<double(double)>& phi);

// F_hat(x) = #{lambda <= x}/n at each grid point; hermitian samples only.
std::vector<double> empirical_cdf(const SpectralSample& sample, const std::vector<double>& grid);

// Dense moments for several exponent pairs sharing one power chain.
std::map<std::pair<int, int>, Complex> moment_table_dense(
    const DiagMatrix& a, const std::vector<std::pair<int, int>>& pairs);

struct MomentRow {
  int r = 0, s = 0;
  Complex empirical;
  Complex predicted;
  double abs_err = 0.0;
};

struct MomentReport {
  long n = 0;
  std::string method;  // "dense-power" or "diagonal-sum"
  std::vector<MomentRow> rows;
};

}  // namespace szego
