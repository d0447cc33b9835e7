#pragma once

#include <json.hpp>
#include <optional>

#include "szego/diagnostics.hpp"
#include "szego/ensembles.hpp"
#include "szego/limitlaw.hpp"
#include "szego/spectral.hpp"

namespace szego {

struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> issues);
  std::vector<std::string> issues;
};

// Raised when the two moment routes disagree beyond tolerance.
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CdfGrid {
  double lo = -4.0;
  double hi = 4.0;
  double step = 0.01;
  std::vector<double> points() const;
};

struct ExperimentConfig {
  MatrixSeqSpec spec{"unnamed", ToeplitzSpec{CoeffSeq(0, {Complex(0.0, 0.0)})}};
  std::optional<LimitLaw> law;          // empty with law_auto => derived from the spec
  std::optional<DensityModel> density;  // optional density comparison
  bool law_auto = true;
  std::vector<long> n_grid;
  std::vector<std::pair<int, int>> moments;  // empty => all pairs with 1 <= r+s <= max_moment
  int max_moment = 6;
  std::vector<TestFunction> phis;
  CdfGrid cdf_grid;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  double oracle_tol = 1e-10;
  long dense_max_n = 1024;  // dense moment route (and its oracle check) runs up to this size
  int law_s_nodes = 1024;
  int law_t_nodes = 512;

  std::vector<std::pair<int, int>> moment_pairs() const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
};

// The coefficient law the theory attaches to each built-in family: a point
// mass for (perturbed) Toeplitz, the push-forward of the sampling measure for
// the others.  Explicit generator specs have no derivable law.
LimitLaw auto_law(const MatrixSeqSpec& spec, std::uint64_t seed, int s_nodes = 1024,
                  int t_nodes = 512);

struct PhiRow {
  std::string name;
  double empirical = 0.0;
  double predicted = 0.0;
  double abs_err = 0.0;
};

struct NReport {
  long n = 0;
  std::string moment_method;
  std::vector<MomentRow> moments;
  bool oracle_checked = false;
  double oracle_worst = 0.0;
  std::vector<VmvEntry> vmv;
  BoundReport bounds;
  std::optional<double> ks_law;
  std::optional<double> ks_density;
  std::vector<PhiRow> phis;
  double seconds = 0.0;  // printed, never serialized
};

struct RunReport {
  std::string spec_label;
  std::vector<long> n_grid;
  bool hermitian = false;
  std::vector<NReport> per_n;
  std::optional<VmvReport> profile;

  nlohmann::json to_json() const;  // timing-free and deterministic
};

// Full pipeline: build, diagnostics, spectra, both moment routes, predicted
// values and CDF comparisons for every n in the grid.  Writes
// eigenvalues.csv, vmv.csv, moments.json and report.json into output_dir.
RunReport run_experiment(const ExperimentConfig& config);

// Shared output helpers (17 significant digits, locale independent).
std::string format_number(double x);
void write_dense_csv(const std::string& path, const DiagMatrix& a);
void write_eigenvalues_csv(const std::string& path,
                           const std::vector<std::pair<long, SpectralSample>>& samples);
void write_vmv_csv(const std::string& path, const std::vector<VmvEntry>& rows);
void write_cdf_csv(const std::string& path,
                   const std::vector<std::tuple<long, double, double, double>>& rows);
void write_density_csv(const std::string& path, const std::vector<std::pair<double, double>>& rows);

}  // namespace szego
