// Experiment runner: builds the matrix families described by a JSON config,
// measures their spectral statistics and compares them with the predicted
// limit integrals.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 failed
// consistency assertion between the two moment routes.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "szego/experiment.hpp"

namespace {

using namespace szego;

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::string n_grid;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int max_moment = 0;
};

ExperimentConfig load_config(const GlobalArgs& args) {
  ExperimentConfig config = ExperimentConfig::from_file(args.config_path);
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  if (args.seed_set) config.seed = args.seed;
  if (args.max_moment > 0) {
    config.max_moment = args.max_moment;
    config.moments.clear();
  }
  if (!args.n_grid.empty()) {
    std::vector<long> grid;
    std::stringstream ss(args.n_grid);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stol(item));
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()))
      throw ConfigError({"--n-grid: expected a comma separated increasing list"});
    config.n_grid = grid;
  }
  return config;
}

std::filesystem::path out_file(const ExperimentConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  return std::filesystem::path(config.output_dir) / name;
}

int cmd_build(const ExperimentConfig& config) {
  for (long n : config.n_grid) {
    const DiagMatrix a = build(config.spec, n, config.seed);
    const auto path = out_file(config, "matrix_" + std::to_string(n) + ".csv");
    write_dense_csv(path.string(), a);
    std::cout << "wrote " << path.string() << " (hermitian=" << (a.hermitian() ? "yes" : "no")
              << ", band=" << a.band() << ")\n";
  }
  return 0;
}

int cmd_vmv(const ExperimentConfig& config) {
  if (config.n_grid.size() < 3)
    throw ConfigError({"n_grid: the vmv profile needs at least three sizes"});
  const VmvReport report = vmv_profile(config.spec, config.n_grid, config.seed);
  write_vmv_csv(out_file(config, "vmv.csv").string(), report.rows);
  for (const auto& [k, ok] : report.tail_ok)
    std::cout << "diagonal " << k << ": " << (ok ? "nonincreasing tail" : "inconclusive") << "\n";
  std::cout << "vmv profile: " << (report.pass() ? "pass" : "fail") << "\n";
  return 0;
}

int cmd_spectrum(const ExperimentConfig& config) {
  std::vector<std::pair<long, SpectralSample>> samples;
  std::vector<std::tuple<long, double, double, double>> cdf_rows;
  const std::vector<double> grid = config.cdf_grid.points();
  std::optional<std::vector<double>> predicted;
  if (config.density) predicted = predicted_cdf(*config.density, grid);
  for (long n : config.n_grid) {
    const DiagMatrix a = build(config.spec, n, config.seed);
    const SpectralSample sample = eigenvalues(a);
    if (a.hermitian()) {
      const std::vector<double> emp = empirical_cdf(sample, grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        cdf_rows.emplace_back(n, grid[i], emp[i], predicted ? (*predicted)[i] : 0.0);
    } else {
      std::cout << "n=" << n << ": non-hermitian spectrum; CDF comparison refused\n";
    }
    samples.emplace_back(n, sample);
  }
  write_eigenvalues_csv(out_file(config, "eigenvalues.csv").string(), samples);
  if (!cdf_rows.empty()) write_cdf_csv(out_file(config, "cdf.csv").string(), cdf_rows);
  return 0;
}

int cmd_moments(const ExperimentConfig& config) {
  std::optional<LimitLaw> law = config.law;
  if (!law && config.law_auto)
    law = auto_law(config.spec, config.seed, config.law_s_nodes, config.law_t_nodes);
  nlohmann::json doc = nlohmann::json::array();
  for (long n : config.n_grid) {
    const DiagMatrix a = build(config.spec, n, config.seed);
    const double scale = std::max(1.0, gershgorin_bound(a));
    const bool run_dense = n <= config.dense_max_n;
    std::map<std::pair<int, int>, Complex> dense;
    if (run_dense) dense = moment_table_dense(a, config.moment_pairs());
    std::map<std::pair<int, int>, Complex> diagonal;
    for (const auto& [r, s] : config.moment_pairs()) {
      diagonal[{r, s}] = moment_trace_diagonal(a, r, s, MomentLimits{config.max_moment, 1LL << 28});
      if (run_dense) {
        const double gap = std::abs(dense.at({r, s}) - diagonal.at({r, s}));
        const double budget = config.oracle_tol * std::pow(scale, r + s);
        if (gap > budget)
          throw OracleError("moment routes disagree at n=" + std::to_string(n) +
                            " (r=" + std::to_string(r) + ", s=" + std::to_string(s) + ")");
      }
    }
    const std::vector<std::string> methods =
        run_dense ? std::vector<std::string>{"diagonal-sum", "dense-power"}
                  : std::vector<std::string>{"diagonal-sum"};
    for (const std::string& method : methods) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& [r, s] : config.moment_pairs()) {
        const Complex emp = method == "dense-power" ? dense.at({r, s}) : diagonal.at({r, s});
        const Complex pred = law ? predicted_moment(*law, r, s) : Complex(0.0, 0.0);
        rows.push_back({{"r", r},
                        {"s", s},
                        {"empirical_re", emp.real()},
                        {"empirical_im", emp.imag()},
                        {"predicted_re", pred.real()},
                        {"predicted_im", pred.imag()},
                        {"abs_err", std::abs(emp - pred)}});
      }
      doc.push_back({{"n", n}, {"method", method}, {"rows", rows}});
    }
    std::cout << "n=" << n << ": moments done (oracle "
              << (run_dense ? "checked" : "skipped above dense_max_n") << ")\n";
  }
  std::ofstream out(out_file(config, "moments.json"));
  out << doc.dump(2) << '\n';
  return 0;
}

int cmd_compare(const ExperimentConfig& config) {
  const RunReport report = run_experiment(config);
  for (const NReport& entry : report.per_n) {
    std::cout << "n=" << entry.n;
    if (entry.ks_law) std::cout << " ks_law=" << *entry.ks_law;
    if (entry.ks_density) std::cout << " ks_density=" << *entry.ks_density;
    double worst = 0.0;
    for (const MomentRow& row : entry.moments) worst = std::max(worst, row.abs_err);
    std::cout << " worst_moment_err=" << worst << "\n";
  }
  if (report.profile)
    std::cout << "vmv profile: " << (report.profile->pass() ? "pass" : "fail") << "\n";
  return 0;
}

int cmd_density(const ExperimentConfig& config) {
  if (!config.density) throw ConfigError({"density: section required for the density command"});
  std::vector<std::pair<double, double>> rows;
  for (double x : config.cdf_grid.points())
    rows.emplace_back(x, schrodinger_density(*config.density, x));
  write_density_csv(out_file(config, "density.csv").string(), rows);
  std::cout << "density mass = " << density_integral(*config.density) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix sequence spectral statistics vs predicted limit laws"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "experiment config (JSON)")->required();
  app.add_option("--out", args.out_dir, "output directory override");
  auto* seed_opt = app.add_option("--seed", args.seed, "seed override");
  app.add_option("--n-grid", args.n_grid, "comma separated size list override");
  app.add_option("--max-moment", args.max_moment, "max r+s override");

  auto* build_cmd = app.add_subcommand("build", "emit dense matrices as CSV");
  auto* vmv_cmd = app.add_subcommand("vmv", "per-diagonal variation profile");
  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and empirical CDF");
  auto* moments_cmd = app.add_subcommand("moments", "both moment routes plus predictions");
  auto* compare_cmd = app.add_subcommand("compare", "full pipeline with report");
  auto* density_cmd = app.add_subcommand("density", "tabulate the predicted density");
  for (CLI::App* sub : {build_cmd, vmv_cmd, spectrum_cmd, moments_cmd, compare_cmd, density_cmd})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  args.seed_set = seed_opt->count() > 0;

  try {
    const szego::ExperimentConfig config = load_config(args);
    if (build_cmd->parsed()) return cmd_build(config);
    if (vmv_cmd->parsed()) return cmd_vmv(config);
    if (spectrum_cmd->parsed()) return cmd_spectrum(config);
    if (moments_cmd->parsed()) return cmd_moments(config);
    if (compare_cmd->parsed()) return cmd_compare(config);
    if (density_cmd->parsed()) return cmd_density(config);
  } catch (const szego::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const szego::OracleError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 4;
  } catch (const szego::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
