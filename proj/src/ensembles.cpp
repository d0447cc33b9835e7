#include "szego/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace szego {

namespace {

constexpr double kHermTol = 1e-12;

std::mt19937_64 seeded_rng(std::uint64_t seed, int stream) {
  // distinct deterministic stream per diagonal
  const std::uint64_t mixed =
      (seed + 0x9E3779B97F4A7C15ULL) * (0x100000001B3ULL + 2 * static_cast<std::uint64_t>(stream + 4096));
  return std::mt19937_64(mixed);
}

// First `count` positions of a seeded partial Fisher-Yates shuffle of 0..len-1.
std::vector<long> sample_positions(long count, long len, std::mt19937_64& rng) {
  std::vector<long> idx(static_cast<std::size_t>(len));
  std::iota(idx.begin(), idx.end(), 0L);
  count = std::min(count, len);
  for (long i = 0; i < count; ++i) {
    const long j = i + static_cast<long>(rng() % static_cast<std::uint64_t>(len - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(count));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

DiagMatrix::DiagMatrix(long n, std::map<int, std::vector<Complex>> diagonals, bool hermitian)
    : n_(n), diags_(std::move(diagonals)), hermitian_(hermitian) {
  if (n_ < 1) throw std::invalid_argument("DiagMatrix: size must be >= 1");
  for (const auto& [k, v] : diags_) {
    if (std::abs(k) >= n_) throw std::invalid_argument("DiagMatrix: offset outside matrix");
    if (v.size() != static_cast<std::size_t>(n_ - std::abs(k)))
      throw std::invalid_argument("DiagMatrix: diagonal length must be n-|k|");
  }
  if (hermitian_ && !pairing_is_hermitian(n_, diags_, kHermTol))
    throw std::invalid_argument("DiagMatrix: hermitian flag set but diagonals are not paired");
}

bool DiagMatrix::pairing_is_hermitian(long n, const std::map<int, std::vector<Complex>>& diagonals,
                                      double tol) {
  auto value = [&](int k, long j) -> Complex {
    const auto it = diagonals.find(k);
    if (it == diagonals.end()) return {0.0, 0.0};
    return it->second[static_cast<std::size_t>(j)];
  };
  for (const auto& [k, v] : diagonals) {
    if (k < 0) continue;
    for (long j = 0; j < n - k; ++j) {
      if (k == 0) {
        if (std::abs(v[static_cast<std::size_t>(j)].imag()) > tol) return false;
      } else if (std::abs(value(-k, j) - std::conj(v[static_cast<std::size_t>(j)])) > tol) {
        return false;
      }
    }
  }
  // negative offsets without stored mirror must be zero
  for (const auto& [k, v] : diagonals) {
    if (k >= 0 || diagonals.count(-k)) continue;
    for (const Complex& z : v)
      if (std::abs(z) > tol) return false;
  }
  return true;
}

int DiagMatrix::band() const {
  int band = 0;
  for (const auto& [k, v] : diags_) band = std::max(band, std::abs(k));
  return band;
}

Complex DiagMatrix::diag_get(int k, long j) const {
  if (std::abs(k) >= n_ || j < 0 || j > n_ - std::abs(k) - 1) return {0.0, 0.0};
  const auto it = diags_.find(k);
  if (it == diags_.end()) return {0.0, 0.0};
  return it->second[static_cast<std::size_t>(j)];
}

Eigen::MatrixXcd DiagMatrix::to_dense() const {
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n_, n_);
  for (const auto& [k, v] : diags_) {
    for (long j = 0; j < static_cast<long>(v.size()); ++j) {
      if (k >= 0)
        dense(j, j + k) = v[static_cast<std::size_t>(j)];
      else
        dense(j - k, j) = v[static_cast<std::size_t>(j)];
    }
  }
  return dense;
}

DiagMatrix DiagMatrix::from_dense(const Eigen::MatrixXcd& dense, double tol) {
  if (dense.rows() != dense.cols()) throw std::invalid_argument("from_dense: matrix must be square");
  const long n = dense.rows();
  std::map<int, std::vector<Complex>> diags;
  for (long k = -(n - 1); k <= n - 1; ++k) {
    std::vector<Complex> v(static_cast<std::size_t>(n - std::abs(k)));
    bool any = false;
    for (long j = 0; j < static_cast<long>(v.size()); ++j) {
      const Complex z = k >= 0 ? dense(j, j + k) : dense(j - k, j);
      v[static_cast<std::size_t>(j)] = z;
      any = any || std::abs(z) != 0.0;
    }
    if (any) diags[static_cast<int>(k)] = std::move(v);
  }
  const bool herm = pairing_is_hermitian(n, diags, tol);
  return DiagMatrix(n, std::move(diags), herm);
}

double RateRule::operator()(long n) const {
  switch (kind) {
    case Kind::Sqrt:
      return std::ceil(std::sqrt(static_cast<double>(n)));
    case Kind::Log:
      return std::log(static_cast<double>(n));
    case Kind::Power:
      return std::pow(static_cast<double>(n), alpha);
    case Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

RateRule RateRule::power(double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("RateRule::power: alpha must lie in (0,1)");
  return {Kind::Power, alpha};
}

DiagMatrix build_toeplitz(const CoeffSeq& coeffs, long n) {
  if (n < 1) throw std::invalid_argument("build_toeplitz: n must be >= 1");
  const int band = std::min<long>(coeffs.band(), n - 1);
  std::map<int, std::vector<Complex>> diags;
  for (int k = -band; k <= band; ++k)
    diags[k] = std::vector<Complex>(static_cast<std::size_t>(n - std::abs(k)), coeffs.coeff(k));
  const bool herm = DiagMatrix::pairing_is_hermitian(n, diags, kHermTol);
  return DiagMatrix(n, std::move(diags), herm);
}

DiagMatrix build_kms(const DiagonalSymbol& sym, KmsSampling sampling, long n) {
  if (n < 2) throw std::invalid_argument("build_kms: n must be >= 2");
  const int band = std::min<long>(sym.band(), n - 1);
  std::map<int, std::vector<Complex>> diags;
  for (int k = -band; k <= band; ++k) {
    const long len = n - std::abs(k);
    std::vector<Complex> v(static_cast<std::size_t>(len));
    for (long j = 0; j < len; ++j) {
      const double s = sampling == KmsSampling::kMidpoint
                           ? static_cast<double>(2 * j + std::abs(k)) / static_cast<double>(2 * n + 2)
                           : static_cast<double>(j) / static_cast<double>(n);
      v[static_cast<std::size_t>(j)] = sym.coeff(k, s);
    }
    diags[k] = std::move(v);
  }
  const bool herm = sym.hermitian() && DiagMatrix::pairing_is_hermitian(n, diags, kHermTol);
  return DiagMatrix(n, std::move(diags), herm);
}

std::vector<double> binned_sequence(const BinnedConstantsSpec& spec, long n, std::uint64_t seed) {
  const double r = spec.r_rule(n);
  const long width = static_cast<long>(std::floor(r));
  if (width < 1) throw std::invalid_argument("build_binned_constants: r_rule value below 1");
  const long full = std::max(n / width, 1L);
  std::vector<double> constants(static_cast<std::size_t>(full));
  if (spec.constants.empty()) {
    auto rng = seeded_rng(seed, 0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double& c : constants) c = unif(rng);
  } else {
    for (long b = 0; b < full; ++b)
      constants[static_cast<std::size_t>(b)] =
          spec.constants[static_cast<std::size_t>(b) % spec.constants.size()];
  }
  std::vector<double> seq(static_cast<std::size_t>(n));
  for (long p = 0; p < n; ++p) {
    const long b = std::min(p / width, full - 1);  // trailing remainder repeats the last constant
    seq[static_cast<std::size_t>(p)] = constants[static_cast<std::size_t>(b)];
  }
  return seq;
}

DiagMatrix build_binned_constants(const BinnedConstantsSpec& spec, long n, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("build_binned_constants: n must be >= 4");
  if (spec.maps.size() != static_cast<std::size_t>(2 * spec.band + 1))
    throw std::invalid_argument("build_binned_constants: expected 2*band+1 diagonal maps");
  const std::vector<double> seq = binned_sequence(spec, n, seed);
  const int band = std::min<long>(spec.band, n - 1);
  std::map<int, std::vector<Complex>> diags;
  for (int k = -band; k <= band; ++k) {
    const ScalarField& map = spec.maps[static_cast<std::size_t>(k + spec.band)];
    const long len = n - std::abs(k);
    std::vector<Complex> v(static_cast<std::size_t>(len));
    for (long j = 0; j < len; ++j) v[static_cast<std::size_t>(j)] = map(seq[static_cast<std::size_t>(j)]);
    diags[k] = std::move(v);
  }
  const bool herm = DiagMatrix::pairing_is_hermitian(n, diags, kHermTol);
  return DiagMatrix(n, std::move(diags), herm);
}

DiagMatrix build_binned_functions(const BinnedFunctionsSpec& spec, long n) {
  if (n < 4) throw std::invalid_argument("build_binned_functions: n must be >= 4");
  if (spec.bins.size() != static_cast<std::size_t>(2 * spec.band + 1))
    throw std::invalid_argument("build_binned_functions: expected 2*band+1 bin tables");
  for (const auto& table : spec.bins)
    if (table.empty()) throw std::invalid_argument("build_binned_functions: empty bin table");
  const double r = spec.r_rule(n);
  const long width = static_cast<long>(std::floor(r));
  if (width < 1) throw std::invalid_argument("build_binned_functions: r_rule value below 1");
  const int band = std::min<long>(spec.band, n - 1);
  std::map<int, std::vector<Complex>> diags;
  for (int k = -band; k <= band; ++k) {
    const auto& table = spec.bins[static_cast<std::size_t>(k + spec.band)];
    const long len = n - std::abs(k);
    std::vector<Complex> v(static_cast<std::size_t>(len));
    for (long p = 0; p < len; ++p) {
      const long bin = p / width;
      const long q = p % width;
      const double s = width > 1 ? static_cast<double>(q) / static_cast<double>(width - 1) : 0.0;
      const ScalarField& f = table[std::min<std::size_t>(static_cast<std::size_t>(bin), table.size() - 1)];
      v[static_cast<std::size_t>(p)] = f(s);
    }
    diags[k] = std::move(v);
  }
  const bool herm = DiagMatrix::pairing_is_hermitian(n, diags, kHermTol);
  return DiagMatrix(n, std::move(diags), herm);
}

DiagMatrix build_jacobi(const std::function<Complex(long)>& offdiag,
                        const std::function<Complex(long)>& diag, long n) {
  if (n < 1) throw std::invalid_argument("build_jacobi: n must be >= 1");
  std::map<int, std::vector<Complex>> diags;
  std::vector<Complex> b(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    b[static_cast<std::size_t>(j)] = diag(j);
    if (std::abs(b[static_cast<std::size_t>(j)].imag()) != 0.0)
      throw std::invalid_argument("build_jacobi: diagonal sequence must be real");
  }
  diags[0] = std::move(b);
  if (n > 1) {
    std::vector<Complex> a(static_cast<std::size_t>(n - 1));
    for (long j = 0; j + 1 < n; ++j) {
      a[static_cast<std::size_t>(j)] = offdiag(j);
      if (std::abs(a[static_cast<std::size_t>(j)].imag()) != 0.0)
        throw std::invalid_argument("build_jacobi: off-diagonal sequence must be real");
    }
    diags[1] = a;
    diags[-1] = std::move(a);
  }
  return DiagMatrix(n, std::move(diags), true);
}

DiagMatrix perturb_density_one(const CoeffSeq& base, const RateRule& rate, double magnitude,
                               std::uint64_t seed, long n) {
  const double r = rate(n);
  const long count = static_cast<long>(std::floor(std::max(r, 0.0)));
  if (count > n) throw std::invalid_argument("perturb_density_one: rate(n) must be <= n");
  const DiagMatrix plain = build_toeplitz(base, n);
  const bool mirror = plain.hermitian();
  std::map<int, std::vector<Complex>> diags = plain.diagonals();
  for (auto& [k, v] : diags) {
    if (mirror && k < 0) continue;  // filled from the +k draw below
    auto rng = seeded_rng(seed, k);
    const std::vector<long> positions = sample_positions(count, static_cast<long>(v.size()), rng);
    const Complex value = base.coeff(k) + magnitude;
    for (long j : positions) {
      v[static_cast<std::size_t>(j)] = value;
      if (mirror && k > 0) diags[-k][static_cast<std::size_t>(j)] = std::conj(value);
    }
  }
  const bool herm = DiagMatrix::pairing_is_hermitian(n, diags, kHermTol);
  return DiagMatrix(n, std::move(diags), herm);
}

DiagMatrix band_truncate(const DiagMatrix& a, int band) {
  if (band < 0) throw std::invalid_argument("band_truncate: band must be >= 0");
  std::map<int, std::vector<Complex>> diags;
  for (const auto& [k, v] : a.diagonals())
    if (std::abs(k) <= band) diags[k] = v;
  return DiagMatrix(a.size(), std::move(diags), a.hermitian());
}

DiagMatrix build(const MatrixSeqSpec& spec, long n, std::uint64_t seed) {
  return std::visit(
      [&](const auto& payload) -> DiagMatrix {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, ToeplitzSpec>) {
          return build_toeplitz(payload.coeffs, n);
        } else if constexpr (std::is_same_v<T, KmsSpec>) {
          return build_kms(payload.symbol, payload.sampling, n);
        } else if constexpr (std::is_same_v<T, BinnedConstantsSpec>) {
          return build_binned_constants(payload, n, seed);
        } else if constexpr (std::is_same_v<T, BinnedFunctionsSpec>) {
          return build_binned_functions(payload, n);
        } else if constexpr (std::is_same_v<T, JacobiSpec>) {
          return build_jacobi(payload.offdiag, payload.diag, n);
        } else if constexpr (std::is_same_v<T, PerturbedToeplitzSpec>) {
          return perturb_density_one(payload.base, payload.rate, payload.magnitude, seed, n);
        } else {
          return payload.generator(n);
        }
      },
      spec.family);
}

}  // namespace szego
