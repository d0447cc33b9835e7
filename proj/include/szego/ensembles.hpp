#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>

#include "szego/symbols.hpp"

namespace szego {

// n x n matrix stored diagonal by diagonal: diagonals[k][j] is the jth entry
// of the kth diagonal, i.e. dense position (j, j+k) for k >= 0 and
// (j+|k|, j) for k < 0.  Reads outside the stored range are zero.
class DiagMatrix {
 public:
  DiagMatrix(long n, std::map<int, std::vector<Complex>> diagonals, bool hermitian);

  long size() const { return n_; }
  int band() const;
  bool hermitian() const { return hermitian_; }
  const std::map<int, std::vector<Complex>>& diagonals() const { return diags_; }

  Complex diag_get(int k, long j) const;
  Eigen::MatrixXcd to_dense() const;

  // All diagonals of a dense matrix with at least one nonzero entry; the
  // hermitian flag is detected within tol.
  static DiagMatrix from_dense(const Eigen::MatrixXcd& dense, double tol = 1e-12);

  static bool pairing_is_hermitian(long n, const std::map<int, std::vector<Complex>>& diagonals,
                                   double tol = 1e-12);

 private:
  long n_;
  std::map<int, std::vector<Complex>> diags_;
  bool hermitian_;
};

enum class KmsSampling { kMidpoint, kUniformPartition };

// Bin-width / perturbation-count rule r(n).
struct RateRule {
  enum class Kind { Sqrt, Log, Power, Zero };
  Kind kind = Kind::Sqrt;
  double alpha = 0.5;

  double operator()(long n) const;

  static RateRule sqrt() { return {Kind::Sqrt, 0.5}; }
  static RateRule log() { return {Kind::Log, 0.0}; }
  static RateRule power(double alpha);
  static RateRule zero() { return {Kind::Zero, 0.0}; }
};

struct ToeplitzSpec {
  CoeffSeq coeffs;
};

struct KmsSpec {
  DiagonalSymbol symbol;
  KmsSampling sampling = KmsSampling::kUniformPartition;
};

// Stepped constants c_1, c_2, ... in bins of width floor(r(n)); diagonal k is
// maps[k] applied entrywise to the stepped sequence.  An explicit constant
// list is cycled; an empty list means uniform [0,1] draws from the seed.
struct BinnedConstantsSpec {
  std::vector<double> constants;
  RateRule r_rule = RateRule::sqrt();
  int band = 0;
  std::vector<ScalarField> maps;  // 2*band+1 entries, offset k at index k+band
};

// Per-bin functions sampled on the uniform partition of [0,1] with
// floor(r(n)) points; the table repeats its last entry for later bins.
struct BinnedFunctionsSpec {
  int band = 0;
  std::vector<std::vector<ScalarField>> bins;  // per diagonal, per bin index
  RateRule r_rule = RateRule::sqrt();
};

struct JacobiSpec {
  std::function<Complex(long)> offdiag;
  std::function<Complex(long)> diag;
};

struct PerturbedToeplitzSpec {
  CoeffSeq base;
  RateRule rate = RateRule::sqrt();
  double magnitude = 1.0;
};

struct ExplicitSpec {
  std::function<DiagMatrix(long)> generator;
};

struct MatrixSeqSpec {
  std::string label;
  std::variant<ToeplitzSpec, KmsSpec, BinnedConstantsSpec, BinnedFunctionsSpec, JacobiSpec,
               PerturbedToeplitzSpec, ExplicitSpec>
      family;
};

DiagMatrix build(const MatrixSeqSpec& spec, long n, std::uint64_t seed = 0);

DiagMatrix build_toeplitz(const CoeffSeq& coeffs, long n);
DiagMatrix build_kms(const DiagonalSymbol& sym, KmsSampling sampling, long n);
DiagMatrix build_binned_constants(const BinnedConstantsSpec& spec, long n, std::uint64_t seed);
DiagMatrix build_binned_functions(const BinnedFunctionsSpec& spec, long n);
DiagMatrix build_jacobi(const std::function<Complex(long)>& offdiag,
                        const std::function<Complex(long)>& diag, long n);
DiagMatrix perturb_density_one(const CoeffSeq& base, const RateRule& rate, double magnitude,
                               std::uint64_t seed, long n);
DiagMatrix band_truncate(const DiagMatrix& a, int band);

// The stepped sequence the binned-constants builder places on its diagonals
// before the per-diagonal maps are applied.
std::vector<double> binned_sequence(const BinnedConstantsSpec& spec, long n, std::uint64_t seed);

}  // namespace szego
