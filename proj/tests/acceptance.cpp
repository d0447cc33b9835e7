// Acceptance suite: one line per criterion, PASS or FAIL with the measured
// numbers.  Exit code 0 when everything passes, 4 otherwise.

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "szego/diagnostics.hpp"
#include "szego/ensembles.hpp"
#include "szego/experiment.hpp"
#include "szego/limitlaw.hpp"
#include "szego/spectral.hpp"

using namespace szego;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  explicit Outcome(std::string label) : name(std::move(label)) {}

  std::string name;
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& note) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += note;
    }
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

DiagonalSymbol linear_symbol() {
  return DiagonalSymbol(
      1, {ScalarField::constant(1.0), ScalarField::poly({0.0, 1.0}), ScalarField::constant(1.0)},
      true);
}

DiagonalSymbol step_symbol() {
  return DiagonalSymbol(
      1,
      {ScalarField::constant(1.0), ScalarField::step({0.5}, {0.0, 1.0}), ScalarField::constant(1.0)},
      true);
}

DiagonalSymbol wide_symbol() {
  // band 8 with geometrically decaying diagonal profiles
  std::vector<ScalarField> funcs;
  for (int k = -8; k <= 8; ++k) {
    const double scale = std::pow(0.6, std::abs(k));
    funcs.push_back(ScalarField::poly({0.5 * scale, 0.5 * scale}));
  }
  return DiagonalSymbol(8, std::move(funcs), true);
}

BinnedConstantsSpec binned_spec(RateRule rule) {
  BinnedConstantsSpec spec;
  spec.constants = {0.15, 0.4, 0.65, 0.9};
  spec.r_rule = rule;
  spec.band = 1;
  spec.maps = {ScalarField::constant(0.3), ScalarField::poly({0.0, 1.0}), ScalarField::constant(1.0)};
  return spec;
}

BinnedFunctionsSpec binned_fn_spec() {
  BinnedFunctionsSpec spec;
  spec.band = 1;
  spec.bins = {{ScalarField::constant(1.0)}, {ScalarField::poly({0.0, 1.0})}, {ScalarField::constant(1.0)}};
  spec.r_rule = RateRule::sqrt();
  return spec;
}

CoeffSeq free_coeffs() { return CoeffSeq::from_offsets({{1, 1.0}, {-1, 1.0}}); }

std::vector<MatrixSeqSpec> family_suite() {
  std::vector<MatrixSeqSpec> specs;
  specs.push_back({"toeplitz free", ToeplitzSpec{free_coeffs()}});
  specs.push_back({"toeplitz shifted", ToeplitzSpec{CoeffSeq::from_offsets({{0, 0.5}, {1, 1.0}})}});
  specs.push_back({"toeplitz band2",
                   ToeplitzSpec{CoeffSeq::from_offsets(
                       {{-2, 0.2}, {0, Complex(0.0, 0.3)}, {1, 0.5}, {2, 0.1}})}});
  specs.push_back({"kms linear uniform", KmsSpec{linear_symbol(), KmsSampling::kUniformPartition}});
  specs.push_back({"kms linear midpoint", KmsSpec{linear_symbol(), KmsSampling::kMidpoint}});
  specs.push_back({"kms step uniform", KmsSpec{step_symbol(), KmsSampling::kUniformPartition}});
  specs.push_back({"binned constants", binned_spec(RateRule::sqrt())});
  specs.push_back({"binned functions", binned_fn_spec()});
  specs.push_back({"jacobi drifting",
                   JacobiSpec{[](long k) { return Complex(1.0 + 1.0 / static_cast<double>(k + 1), 0.0); },
                              [](long) { return Complex(0.0, 0.0); }}});
  specs.push_back({"perturbed free",
                   PerturbedToeplitzSpec{free_coeffs(), RateRule::sqrt(), 1.0}});
  return specs;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  std::vector<double> grid;
  for (double x = lo; x <= hi + 0.5 * step; x += step) grid.push_back(x);
  return grid;
}

double ks_against(const SpectralSample& sample, const std::vector<double>& grid,
                  const std::vector<double>& predicted) {
  return ks_distance(empirical_cdf(sample, grid), predicted);
}

// ---------------------------------------------------------------------------

Outcome criterion_oracle_equivalence() {
  Outcome out{"C1 oracle equivalence (dense vs diagonal-sum, r+s <= 6)"};
  double worst_ratio = 0.0;
  for (const MatrixSeqSpec& spec : family_suite()) {
    for (long n : {8L, 16L, 32L}) {
      const DiagMatrix a = build(spec, n, kSeed);
      const double scale = gershgorin_bound(a);
      for (int total = 1; total <= 6; ++total) {
        for (int r = 0; r <= total; ++r) {
          const Complex dense = moment_trace_dense(a, r, total - r);
          const Complex diag = moment_trace_diagonal(a, r, total - r);
          const double gap = std::abs(dense - diag);
          const double budget = 1e-10 * std::pow(scale, total);
          worst_ratio = std::max(worst_ratio, gap / budget);
          out.require(gap <= budget, spec.label + " n=" + std::to_string(n) + " (r,s)=(" +
                                         std::to_string(r) + "," + std::to_string(total - r) +
                                         ") gap=" + num(gap));
        }
      }
    }
  }
  out.detail = "worst gap/budget = " + num(worst_ratio) + (out.ok ? "" : "; " + out.detail);
  return out;
}

Outcome criterion_first_szego() {
  Outcome out{"C2 first limit theorem on the free tridiagonal (n = 2048)"};
  const long n = 2048;
  const SpectralSample sample = eigenvalues(build_toeplitz(free_coeffs(), n));
  const double binomials[3] = {2.0, 6.0, 20.0};
  std::string seen;
  for (int i = 0; i < 3; ++i) {
    const int m = 2 * (i + 1);
    double mean = 0.0;
    for (const Complex& v : sample.values) mean += std::pow(v.real(), m);
    mean /= static_cast<double>(n);
    const double gap = std::abs(mean - binomials[i]);
    const double budget = 2.0 * static_cast<double>(m) / static_cast<double>(n);
    seen += (i ? ", " : "") + std::string("m=") + std::to_string(m) + " gap=" + num(gap) +
            " tol=" + num(budget);
    out.require(gap <= budget, "moment m=" + std::to_string(m) + " gap " + num(gap) +
                                   " exceeds 2m/n = " + num(budget));
  }
  const std::vector<double> grid = make_grid(-2.5, 2.5, 0.001);
  const double ks = ks_against(sample, grid, predicted_cdf(DensityModel({0.0}), grid));
  out.require(ks <= 0.02, "KS vs arcsine = " + num(ks));
  out.detail = seen + ", KS=" + num(ks) + (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome criterion_kms() {
  Outcome out{"C3 generalized Toeplitz limits (n = 4096)"};
  const long n = 4096;
  const std::vector<double> grid = make_grid(-2.5, 3.5, 0.001);

  const DiagMatrix linear = build_kms(linear_symbol(), KmsSampling::kUniformPartition, n);
  const LimitLaw linear_law = LimitLaw::pushforward(linear_symbol(), 1024, 512);
  const double m2 = moment_trace_diagonal(linear, 2, 0).real();
  const double predicted = predicted_moment(linear_law, 2, 0).real();
  out.require(std::abs(predicted - 7.0 / 3.0) <= 1e-6,
              "quadrature value " + num(predicted) + " vs 7/3");
  out.require(std::abs(m2 - predicted) <= 0.01,
              "linear case moment gap " + num(std::abs(m2 - predicted)));
  const double ks_linear =
      ks_against(eigenvalues(linear), grid, predicted_cdf(DensityModel({0.0, 1.0}), grid));
  out.require(ks_linear <= 0.05, "linear case KS = " + num(ks_linear));

  const DiagMatrix stepped = build_kms(step_symbol(), KmsSampling::kUniformPartition, n);
  const double m2_step = moment_trace_diagonal(stepped, 2, 0).real();
  out.require(std::abs(m2_step - 2.5) <= 0.01, "step case moment gap " + num(std::abs(m2_step - 2.5)));
  const DensityModel mixture({0.0, 1.0}, {{0.0, 0.5}, {1.0, 0.5}});
  const double ks_step = ks_against(eigenvalues(stepped), grid, predicted_cdf(mixture, grid));
  out.require(ks_step <= 0.05, "step case KS = " + num(ks_step));

  out.detail = "m2 gaps " + num(std::abs(m2 - predicted)) + "/" + num(std::abs(m2_step - 2.5)) +
               ", KS " + num(ks_linear) + "/" + num(ks_step) +
               (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome criterion_nonnormal_trace() {
  Outcome out{"C4 mixed trace moments for non-normal sequences (n = 2048)"};
  const long n = 2048;
  const std::vector<std::pair<int, int>> pairs = {{1, 1}, {2, 1}, {2, 2}};
  double worst = 0.0;

  const MatrixSeqSpec shifted{"shift-like",
                              ToeplitzSpec{CoeffSeq::from_offsets({{0, 0.5}, {1, 1.0}})}};
  const MatrixSeqSpec binned{"binned", binned_spec(RateRule::power(0.5455))};
  for (const MatrixSeqSpec& spec : {shifted, binned}) {
    const DiagMatrix a = build(spec, n, kSeed);
    const LimitLaw law = auto_law(spec, kSeed, 1024, 512);
    for (const auto& [r, s] : pairs) {
      const Complex emp = moment_trace_diagonal(a, r, s);
      const Complex pred = predicted_moment(law, r, s);
      const double gap = std::abs(emp - pred);
      worst = std::max(worst, gap);
      out.require(gap <= 0.02, spec.label + " (r,s)=(" + std::to_string(r) + "," +
                                   std::to_string(s) + ") gap=" + num(gap));
    }
    Complex parseval(0.0, 0.0);
    for (int k = -law.band(); k <= law.band(); ++k) parseval += law.coeff_corr(k, k);
    const double gap = std::abs(predicted_moment(law, 1, 1) - parseval);
    out.require(gap <= 1e-10, spec.label + " parseval gap=" + num(gap));
  }
  out.detail = "worst moment gap = " + num(worst) + (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome criterion_vmv() {
  Outcome out{"C5 vanishing mean variation hypotheses"};
  const std::vector<long> grid = {256, 1024, 4096};

  const DiagMatrix toeplitz = build_toeplitz(CoeffSeq::from_offsets({{0, 0.5}, {1, 1.0}, {-2, 0.25}}), 512);
  for (const auto& [k, v] : toeplitz.diagonals())
    out.require(vmv_variation(toeplitz, k) == 0.0, "toeplitz variation nonzero at k=" + std::to_string(k));

  for (long n : grid) {
    const DiagMatrix kms = build_kms(linear_symbol(), KmsSampling::kUniformPartition, n);
    const double got = vmv_variation(kms, 0) / static_cast<double>(n);
    const double want = static_cast<double>(n - 1) / static_cast<double>(n) / static_cast<double>(n);
    out.require(std::abs(got - want) <= 1e-12,
                "kms normalized variation off by " + num(std::abs(got - want)) + " at n=" + std::to_string(n));
  }

  const MatrixSeqSpec binned{"binned", binned_spec(RateRule::sqrt())};
  for (long n : grid) {
    const DiagMatrix a = build(binned, n, kSeed);
    const double got = vmv_variation(a, 0) / static_cast<double>(n);
    const double cap = 1.0 / std::floor(std::sqrt(static_cast<double>(n))) + 2.0 / static_cast<double>(n);
    out.require(got <= cap, "binned variation " + num(got) + " above " + num(cap));
  }

  const MatrixSeqSpec alternating{"alternating", ExplicitSpec{[](long n) {
                                    std::map<int, std::vector<Complex>> diags;
                                    std::vector<Complex> main(static_cast<std::size_t>(n));
                                    for (long j = 0; j < n; ++j)
                                      main[static_cast<std::size_t>(j)] = (j % 2 == 0) ? 1.0 : -1.0;
                                    diags[0] = std::move(main);
                                    return DiagMatrix(n, std::move(diags), true);
                                  }}};
  const VmvReport report = vmv_profile(alternating, grid, kSeed);
  out.require(!report.tail_ok.at(0), "alternating diagonal escaped the fail verdict");
  out.detail = out.ok ? "toeplitz exact, kms exact, binned bounded, counterexample flagged"
                      : out.detail;
  return out;
}

Outcome criterion_bounds() {
  Outcome out{"C6 spectrum and singular values inside the coefficient bound"};
  double closest = 1e300;
  std::vector<MatrixSeqSpec> specs = family_suite();
  specs.push_back({"kms band8", KmsSpec{wide_symbol(), KmsSampling::kUniformPartition}});
  for (const MatrixSeqSpec& spec : specs) {
    for (long n : {16L, 64L, 256L}) {
      const DiagMatrix a = build(spec, n, kSeed);
      const double cap = gershgorin_bound(a) + 1e-9;
      const SpectralSample sample = eigenvalues(a);
      for (const Complex& v : sample.values) {
        closest = std::min(closest, cap - std::abs(v));
        out.require(std::abs(v) <= cap, spec.label + " eigenvalue escapes at n=" + std::to_string(n));
      }
      for (double sigma : singular_values(a)) {
        closest = std::min(closest, cap - sigma);
        out.require(sigma <= cap, spec.label + " singular value escapes at n=" + std::to_string(n));
      }
    }
  }
  out.detail = "smallest margin = " + num(closest) + (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome criterion_band_truncation() {
  Outcome out{"C7 band truncation control (band 8 -> 2, n = 1024)"};
  const long n = 1024;
  const DiagMatrix a = build_kms(wide_symbol(), KmsSampling::kUniformPartition, n);
  const DiagMatrix b = band_truncate(a, 2);
  double tail = 0.0;
  for (const auto& [k, v] : a.diagonals()) {
    if (std::abs(k) <= 2) continue;
    double peak = 0.0;
    for (const Complex& z : v) peak = std::max(peak, std::abs(z));
    tail += peak;
  }
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(a.to_dense() - b.to_dense());
  const double normalized_trace_norm = svd.singularValues().sum() / static_cast<double>(n);
  out.require(normalized_trace_norm <= tail + 1e-9,
              "trace-norm gap " + num(normalized_trace_norm) + " above tail sum " + num(tail));

  const double m2_gap =
      std::abs(moment_trace_diagonal(a, 2, 0) - moment_trace_diagonal(b, 2, 0));
  const double cap = 4.0 * gershgorin_bound(a) * tail;
  out.require(m2_gap <= cap, "moment gap " + num(m2_gap) + " above " + num(cap));
  out.detail = "trace-norm " + num(normalized_trace_norm) + " <= " + num(tail) + ", moment gap " +
               num(m2_gap) + " <= " + num(cap) + (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome criterion_density_one() {
  Outcome out{"C8 density-one robustness of the free tridiagonal (n = 2048)"};
  const long n = 2048;
  const std::vector<double> grid = make_grid(-2.5, 4.5, 0.001);
  const std::vector<double> arcsine = predicted_cdf(DensityModel({0.0}), grid);
  const DiagMatrix base = build_toeplitz(free_coeffs(), n);
  // power(0.5) floors to exactly floor(sqrt(n)) overwrites per diagonal
  const DiagMatrix bumped = perturb_density_one(free_coeffs(), RateRule::power(0.5), 1.0, kSeed, n);
  const double ks_base = ks_against(eigenvalues(base), grid, arcsine);
  const double ks_bumped = ks_against(eigenvalues(bumped), grid, arcsine);
  const double ks_change = std::abs(ks_bumped - ks_base);
  out.require(ks_change <= 0.05, "KS change " + num(ks_change));
  const double m2_change = std::abs(moment_trace_diagonal(bumped, 2, 0).real() -
                                    moment_trace_diagonal(base, 2, 0).real());
  out.require(m2_change <= 0.05, "moment (2,0) change " + num(m2_change));
  out.detail = "KS change " + num(ks_change) + ", moment change " + num(m2_change) +
               (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome criterion_shift_defect() {
  Outcome out{"C9 shift defect decreases from n = 256 to n = 4096"};
  // deterministic members of the suite; the seeded perturbation family is
  // covered by C8 instead
  std::vector<MatrixSeqSpec> specs;
  for (MatrixSeqSpec& spec : family_suite())
    if (spec.label != "perturbed free") specs.push_back(std::move(spec));
  double worst_toeplitz_ratio = 0.0;
  long combos = 0;
  for (const MatrixSeqSpec& spec : specs) {
    const DiagMatrix small = build(spec, 256, kSeed);
    const DiagMatrix large = build(spec, 4096, kSeed);
    const bool toeplitz = std::holds_alternative<ToeplitzSpec>(spec.family);
    const double cap = 6.0 * std::pow(gershgorin_bound(large), 3);
    std::vector<int> offsets;
    for (const auto& [k, v] : large.diagonals()) offsets.push_back(k);

    std::vector<int> hs;
    std::vector<long> nus;
    const auto visit = [&](auto&& self, int depth) -> void {
      if (depth > 0) {
        ++combos;
        const double d_small = shift_defect(small, hs, nus);
        const double d_large = shift_defect(large, hs, nus);
        out.require(d_large <= d_small + 1e-12,
                    spec.label + " defect grew (" + num(d_small) + " -> " + num(d_large) + ")");
        if (toeplitz) {
          worst_toeplitz_ratio = std::max(worst_toeplitz_ratio, d_large * 4096.0 / cap);
          out.require(d_large <= cap / 4096.0, spec.label + " toeplitz defect above 6M^3/n");
          out.require(d_small <= cap / 256.0, spec.label + " toeplitz defect above 6M^3/n");
        }
      }
      if (depth == 3) return;
      for (int h : offsets) {
        for (long nu = -2; nu <= 2; ++nu) {
          hs.push_back(h);
          nus.push_back(nu);
          self(self, depth + 1);
          hs.pop_back();
          nus.pop_back();
        }
      }
    };
    visit(visit, 0);
  }
  out.detail = std::to_string(combos) + " tuples, worst toeplitz defect/(6M^3/n) = " +
               num(worst_toeplitz_ratio) + (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome criterion_density_model() {
  Outcome out{"C10 predicted density normalization"};
  const DensityModel ramp({0.0, 2.0});
  const double mass_ramp = density_integral(ramp);
  out.require(std::abs(mass_ramp - 1.0) <= 1e-6, "ramp mass " + num(mass_ramp));
  const DensityModel two_sites({0.0, 1.0}, {{0.0, 0.5}, {1.0, 0.5}});
  const double mass_two = density_integral(two_sites);
  out.require(std::abs(mass_two - 1.0) <= 1e-6, "two-site mass " + num(mass_two));
  const DensityModel three_sites({0.0, 2.0}, {{0.1, 0.3}, {0.5, 0.4}, {0.9, 0.3}});
  const double mass_three = density_integral(three_sites);
  out.require(std::abs(mass_three - 1.0) <= 1e-6, "three-site mass " + num(mass_three));
  const double at_one = schrodinger_density(ramp, 1.0);
  out.require(std::abs(at_one - 1.0 / 6.0) <= 1e-6, "rho(1) = " + num(at_one));
  out.detail = "masses " + num(mass_ramp) + "/" + num(mass_two) + "/" + num(mass_three) +
               ", rho(1)-1/6 = " + num(at_one - 1.0 / 6.0) +
               (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

}  // namespace

int main() {
  std::vector<Outcome> outcomes;
  outcomes.push_back(criterion_oracle_equivalence());
  outcomes.push_back(criterion_first_szego());
  outcomes.push_back(criterion_kms());
  outcomes.push_back(criterion_nonnormal_trace());
  outcomes.push_back(criterion_vmv());
  outcomes.push_back(criterion_bounds());
  outcomes.push_back(criterion_band_truncation());
  outcomes.push_back(criterion_density_one());
  outcomes.push_back(criterion_shift_defect());
  outcomes.push_back(criterion_density_model());

  int failures = 0;
  for (const Outcome& out : outcomes) {
    std::printf("%-4s %s\n", out.ok ? "PASS" : "FAIL", out.name.c_str());
    if (!out.detail.empty()) std::printf("     %s\n", out.detail.c_str());
    failures += out.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(outcomes.size()) - failures,
              outcomes.size());
  return failures == 0 ? 0 : 4;
}
