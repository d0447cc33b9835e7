#include "szego/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace szego {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string msg = "invalid experiment config:";
  for (const std::string& s : issues) {
    msg += "\n  - ";
    msg += s;
  }
  return msg;
}

// Accumulates one issue per violated field instead of bailing on the first.
struct Issues {
  std::vector<std::string> list;
  void add(const std::string& path, const std::string& what) { list.push_back(path + ": " + what); }
};

Complex parse_complex(const json& j, const std::string& path, Issues& issues) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  issues.add(path, "expected a number or [re, im]");
  return {0.0, 0.0};
}

double parse_real(const json& j, const std::string& path, Issues& issues, double fallback = 0.0) {
  if (j.is_number()) return j.get<double>();
  issues.add(path, "expected a number");
  return fallback;
}

ScalarField parse_field(const json& j, const std::string& path, Issues& issues) {
  if (!j.is_object() || !j.contains("kind")) {
    issues.add(path, "expected a function descriptor with a \"kind\"");
    return ScalarField::constant(0.0);
  }
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  try {
    if (kind == "const") return ScalarField::constant(parse_complex(j.at("value"), path + ".value", issues));
    if (kind == "poly") {
      std::vector<Complex> coeffs;
      for (std::size_t i = 0; i < j.at("coeffs").size(); ++i)
        coeffs.push_back(parse_complex(j["coeffs"][i], path + ".coeffs", issues));
      return ScalarField::poly(std::move(coeffs));
    }
    if (kind == "cos") {
      const Complex amp = j.contains("amplitude") ? parse_complex(j["amplitude"], path + ".amplitude", issues)
                                                  : Complex(1.0, 0.0);
      return ScalarField::cosine(amp, j.value("freq", 1.0), j.value("phase", 0.0));
    }
    if (kind == "step") {
      std::vector<double> breaks = j.at("breaks").get<std::vector<double>>();
      std::vector<Complex> values;
      for (std::size_t i = 0; i < j.at("values").size(); ++i)
        values.push_back(parse_complex(j["values"][i], path + ".values", issues));
      return ScalarField::step(std::move(breaks), std::move(values));
    }
    if (kind == "grid") {
      std::vector<Complex> values;
      for (std::size_t i = 0; i < j.at("values").size(); ++i)
        values.push_back(parse_complex(j["values"][i], path + ".values", issues));
      return ScalarField::grid(std::move(values));
    }
    issues.add(path + ".kind", "unknown function kind \"" + kind + "\"");
  } catch (const std::exception& e) {
    issues.add(path, e.what());
  }
  return ScalarField::constant(0.0);
}

CoeffSeq parse_coeffs(const json& j, const std::string& path, Issues& issues) {
  std::map<int, Complex> offsets;
  if (!j.is_array() || j.empty()) {
    issues.add(path, "expected a nonempty array of {k, value} entries");
    return CoeffSeq::from_offsets({{0, 0.0}});
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_object() || !j[i].contains("k") || !j[i].contains("value")) {
      issues.add(p, "expected {k, value}");
      continue;
    }
    offsets[j[i]["k"].get<int>()] = parse_complex(j[i]["value"], p + ".value", issues);
  }
  if (offsets.empty()) offsets[0] = 0.0;
  return CoeffSeq::from_offsets(offsets);
}

RateRule parse_rule(const json& j, const std::string& path, Issues& issues) {
  if (!j.is_object() || !j.contains("kind")) {
    issues.add(path, "expected a rate rule {kind: sqrt|log|power|zero}");
    return RateRule::sqrt();
  }
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  try {
    if (kind == "sqrt") return RateRule::sqrt();
    if (kind == "log") return RateRule::log();
    if (kind == "zero") return RateRule::zero();
    if (kind == "power") return RateRule::power(j.value("alpha", 0.5));
  } catch (const std::exception& e) {
    issues.add(path, e.what());
    return RateRule::sqrt();
  }
  issues.add(path + ".kind", "unknown rate rule \"" + kind + "\"");
  return RateRule::sqrt();
}

DiagonalSymbol parse_symbol(const json& j, const std::string& path, Issues& issues) {
  int band = 0;
  std::map<int, ScalarField> by_offset;
  if (!j.is_object() || !j.contains("funcs")) {
    issues.add(path, "expected a symbol {band?, funcs, hermitian?}");
    return DiagonalSymbol(0, {ScalarField::constant(0.0)}, false);
  }
  for (std::size_t i = 0; i < j["funcs"].size(); ++i) {
    const std::string p = path + ".funcs[" + std::to_string(i) + "]";
    if (!j["funcs"][i].contains("k") || !j["funcs"][i].contains("fn")) {
      issues.add(p, "expected {k, fn}");
      continue;
    }
    const int k = j["funcs"][i]["k"].get<int>();
    band = std::max(band, std::abs(k));
    by_offset.emplace(k, parse_field(j["funcs"][i]["fn"], p + ".fn", issues));
  }
  band = j.value("band", band);
  std::vector<ScalarField> funcs(static_cast<std::size_t>(2 * band + 1), ScalarField::constant(0.0));
  for (const auto& [k, f] : by_offset) {
    if (std::abs(k) > band)
      issues.add(path, "diagonal offset " + std::to_string(k) + " outside band");
    else
      funcs[static_cast<std::size_t>(k + band)] = f;
  }
  try {
    return DiagonalSymbol(band, std::move(funcs), j.value("hermitian", false));
  } catch (const std::exception& e) {
    issues.add(path, e.what());
    return DiagonalSymbol(band, std::vector<ScalarField>(static_cast<std::size_t>(2 * band + 1),
                                                         ScalarField::constant(0.0)),
                          false);
  }
}

std::function<Complex(long)> parse_sequence(const json& j, const std::string& path, Issues& issues) {
  if (!j.is_object() || !j.contains("kind")) {
    issues.add(path, "expected a sequence {kind: const|list|harmonic}");
    return [](long) { return Complex(0.0, 0.0); };
  }
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "const") {
    const double v = parse_real(j.value("value", json()), path + ".value", issues);
    return [v](long) { return Complex(v, 0.0); };
  }
  if (kind == "list") {
    std::vector<double> values;
    if (j.contains("values") && j["values"].is_array())
      values = j["values"].get<std::vector<double>>();
    if (values.empty()) {
      issues.add(path + ".values", "expected a nonempty list");
      values = {0.0};
    }
    return [values](long k) {
      const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(k), values.size() - 1);
      return Complex(values[i], 0.0);  // constant tail
    };
  }
  if (kind == "harmonic") {
    const double base = j.value("base", 0.0);
    const double scale = j.value("scale", 1.0);
    return [base, scale](long k) { return Complex(base + scale / static_cast<double>(k + 1), 0.0); };
  }
  issues.add(path + ".kind", "unknown sequence kind \"" + kind + "\"");
  return [](long) { return Complex(0.0, 0.0); };
}

MatrixSeqSpec parse_spec(const json& j, Issues& issues) {
  MatrixSeqSpec spec{"unnamed", ToeplitzSpec{CoeffSeq::from_offsets({{0, 0.0}})}};
  if (!j.is_object() || !j.contains("family")) {
    issues.add("spec", "expected an object with a \"family\"");
    return spec;
  }
  spec.label = j.value("label", j.value("family", "unnamed"));
  const std::string family = j["family"].is_string() ? j["family"].get<std::string>() : "";
  if (family == "toeplitz") {
    spec.family = ToeplitzSpec{parse_coeffs(j.value("coeffs", json::array()), "spec.coeffs", issues)};
  } else if (family == "kms") {
    KmsSpec kms{parse_symbol(j.value("symbol", json()), "spec.symbol", issues),
                KmsSampling::kUniformPartition};
    const std::string sampling = j.value("sampling", "uniform");
    if (sampling == "midpoint")
      kms.sampling = KmsSampling::kMidpoint;
    else if (sampling != "uniform")
      issues.add("spec.sampling", "expected \"uniform\" or \"midpoint\"");
    spec.family = std::move(kms);
  } else if (family == "binned_constants") {
    BinnedConstantsSpec bc;
    if (j.contains("constants")) {
      if (j["constants"].is_array())
        bc.constants = j["constants"].get<std::vector<double>>();
      else
        issues.add("spec.constants", "expected an array of numbers");
    } else if (j.value("distribution", "uniform") != "uniform") {
      issues.add("spec.distribution", "only \"uniform\" is available");
    }
    bc.r_rule = j.contains("r_rule") ? parse_rule(j["r_rule"], "spec.r_rule", issues) : RateRule::sqrt();
    std::map<int, ScalarField> maps;
    int band = 0;
    const json jmaps = j.value("maps", json::array());
    for (std::size_t i = 0; i < jmaps.size(); ++i) {
      const std::string p = "spec.maps[" + std::to_string(i) + "]";
      if (!jmaps[i].contains("k") || !jmaps[i].contains("fn")) {
        issues.add(p, "expected {k, fn}");
        continue;
      }
      const int k = jmaps[i]["k"].get<int>();
      band = std::max(band, std::abs(k));
      maps.emplace(k, parse_field(jmaps[i]["fn"], p + ".fn", issues));
    }
    if (maps.empty()) issues.add("spec.maps", "expected at least one diagonal map");
    bc.band = band;
    bc.maps.assign(static_cast<std::size_t>(2 * band + 1), ScalarField::constant(0.0));
    for (const auto& [k, f] : maps) bc.maps[static_cast<std::size_t>(k + band)] = f;
    spec.family = std::move(bc);
  } else if (family == "binned_functions") {
    BinnedFunctionsSpec bf;
    bf.r_rule = j.contains("r_rule") ? parse_rule(j["r_rule"], "spec.r_rule", issues) : RateRule::sqrt();
    std::map<int, std::vector<ScalarField>> tables;
    int band = 0;
    const json jf = j.value("funcs", json::array());
    for (std::size_t i = 0; i < jf.size(); ++i) {
      const std::string p = "spec.funcs[" + std::to_string(i) + "]";
      if (!jf[i].contains("k") || !jf[i].contains("bins") || !jf[i]["bins"].is_array() ||
          jf[i]["bins"].empty()) {
        issues.add(p, "expected {k, bins:[fn,...]}");
        continue;
      }
      const int k = jf[i]["k"].get<int>();
      band = std::max(band, std::abs(k));
      std::vector<ScalarField> table;
      for (std::size_t b = 0; b < jf[i]["bins"].size(); ++b)
        table.push_back(parse_field(jf[i]["bins"][b], p + ".bins[" + std::to_string(b) + "]", issues));
      tables.emplace(k, std::move(table));
    }
    if (tables.empty()) issues.add("spec.funcs", "expected at least one diagonal table");
    bf.band = band;
    bf.bins.assign(static_cast<std::size_t>(2 * band + 1), {ScalarField::constant(0.0)});
    for (auto& [k, table] : tables) bf.bins[static_cast<std::size_t>(k + band)] = std::move(table);
    spec.family = std::move(bf);
  } else if (family == "jacobi") {
    JacobiSpec jc;
    jc.offdiag = parse_sequence(j.value("offdiag", json()), "spec.offdiag", issues);
    jc.diag = parse_sequence(j.value("diag", json()), "spec.diag", issues);
    spec.family = std::move(jc);
  } else if (family == "perturbed_toeplitz") {
    PerturbedToeplitzSpec pt{parse_coeffs(j.value("base", json::array()), "spec.base", issues),
                             RateRule::sqrt(), 1.0};
    if (j.contains("rate")) pt.rate = parse_rule(j["rate"], "spec.rate", issues);
    pt.magnitude = j.value("magnitude", 1.0);
    spec.family = std::move(pt);
  } else {
    issues.add("spec.family", "unknown family \"" + family + "\"");
  }
  return spec;
}

TestFunction parse_phi(const json& j, const std::string& path, Issues& issues) {
  const std::string kind = j.is_object() ? j.value("kind", "") : "";
  try {
    if (kind == "poly") return TestFunction::polynomial(j.at("coeffs").get<std::vector<double>>());
    if (kind == "bump")
      return TestFunction::bump(j.value("center", 0.0), j.value("width", 1.0), j.value("height", 1.0));
    if (kind == "sigmoid") return TestFunction::sigmoid(j.value("center", 0.0), j.value("width", 0.1));
  } catch (const std::exception& e) {
    issues.add(path, e.what());
    return TestFunction::power(1);
  }
  issues.add(path, "expected {kind: poly|bump|sigmoid, ...}");
  return TestFunction::power(1);
}

std::string phi_name(const TestFunction& phi, std::size_t index) {
  switch (phi.kind) {
    case TestFunction::Kind::Poly:
      return "poly_deg" + std::to_string(phi.degree()) + "_" + std::to_string(index);
    case TestFunction::Kind::Bump:
      return "bump_" + std::to_string(index);
    case TestFunction::Kind::Sigmoid:
      return "sigmoid_" + std::to_string(index);
  }
  return "phi_" + std::to_string(index);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> all)
    : std::runtime_error(join_issues(all)), issues(std::move(all)) {}

std::vector<double> CdfGrid::points() const {
  std::vector<double> pts;
  for (double x = lo; x <= hi + 0.5 * step; x += step) pts.push_back(x);
  return pts;
}

std::vector<std::pair<int, int>> ExperimentConfig::moment_pairs() const {
  if (!moments.empty()) return moments;
  std::vector<std::pair<int, int>> pairs;
  for (int total = 1; total <= max_moment; ++total)
    for (int r = total; r >= 0; --r) pairs.emplace_back(r, total - r);
  return pairs;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  Issues issues;
  ExperimentConfig config;
  if (!j.is_object()) throw ConfigError({"config: expected a JSON object"});

  config.spec = parse_spec(j.value("spec", json()), issues);

  if (j.contains("n_grid") && j["n_grid"].is_array() && !j["n_grid"].empty()) {
    config.n_grid = j["n_grid"].get<std::vector<long>>();
    if (!std::is_sorted(config.n_grid.begin(), config.n_grid.end()) ||
        std::adjacent_find(config.n_grid.begin(), config.n_grid.end()) != config.n_grid.end())
      issues.add("n_grid", "sizes must be strictly increasing");
    for (long n : config.n_grid)
      if (n < 1) issues.add("n_grid", "sizes must be positive");
  } else {
    issues.add("n_grid", "expected a nonempty array of sizes");
  }

  config.max_moment = j.value("max_moment", 6);
  if (config.max_moment < 1) issues.add("max_moment", "must be >= 1");
  if (j.contains("moments")) {
    if (!j["moments"].is_array()) {
      issues.add("moments", "expected an array of [r, s] pairs");
    } else {
      for (std::size_t i = 0; i < j["moments"].size(); ++i) {
        const json& p = j["moments"][i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
          issues.add("moments[" + std::to_string(i) + "]", "expected [r, s]");
          continue;
        }
        const int r = p[0].get<int>(), s = p[1].get<int>();
        if (r < 0 || s < 0 || r + s < 1 || r + s > config.max_moment)
          issues.add("moments[" + std::to_string(i) + "]", "need 1 <= r+s <= max_moment");
        else
          config.moments.emplace_back(r, s);
      }
    }
  }

  if (j.contains("phis")) {
    for (std::size_t i = 0; i < j["phis"].size(); ++i)
      config.phis.push_back(parse_phi(j["phis"][i], "phis[" + std::to_string(i) + "]", issues));
  }

  if (j.contains("cdf_grid")) {
    const json& g = j["cdf_grid"];
    config.cdf_grid.lo = g.value("lo", -4.0);
    config.cdf_grid.hi = g.value("hi", 4.0);
    config.cdf_grid.step = g.value("step", 0.01);
    if (!(config.cdf_grid.step > 0.0)) issues.add("cdf_grid.step", "must be positive");
    if (!(config.cdf_grid.lo < config.cdf_grid.hi)) issues.add("cdf_grid", "need lo < hi");
  }

  config.seed = j.value("seed", 1ULL);
  config.output_dir = j.value("output_dir", std::string("out"));
  if (config.output_dir.empty()) issues.add("output_dir", "must not be empty");
  config.dense_max_n = j.value("dense_max_n", 1024L);
  config.law_s_nodes = j.value("law_s_nodes", 1024);
  config.law_t_nodes = j.value("law_t_nodes", 512);
  if (j.contains("tolerances") && j["tolerances"].is_object())
    config.oracle_tol = j["tolerances"].value("oracle", 1e-10);

  if (j.contains("law") && !(j["law"].is_string() && j["law"] == "auto")) {
    config.law_auto = false;
    const json& l = j["law"];
    const std::string type = l.is_object() ? l.value("type", "") : "";
    try {
      if (type == "dirac") {
        config.law = LimitLaw::dirac(parse_coeffs(l.value("coeffs", json::array()), "law.coeffs", issues),
                                     l.value("t_nodes", 0));
      } else if (type == "atoms") {
        std::vector<WeightedCoeffs> atoms;
        for (std::size_t i = 0; i < l.value("atoms", json::array()).size(); ++i) {
          const json& a = l["atoms"][i];
          atoms.push_back({parse_coeffs(a.value("coeffs", json::array()),
                                        "law.atoms[" + std::to_string(i) + "].coeffs", issues),
                           a.value("weight", 0.0)});
        }
        config.law = LimitLaw::atoms(std::move(atoms), l.value("t_nodes", 0));
      } else if (type == "pushforward") {
        config.law = LimitLaw::pushforward(parse_symbol(l.value("symbol", json()), "law.symbol", issues),
                                           l.value("s_nodes", 1024), l.value("t_nodes", 0));
      } else if (type == "density") {
        // a density target: CDF comparisons use it, moment predictions still
        // come from the family's derived coefficient law
        config.law_auto = true;
        std::vector<std::pair<double, double>> atoms;
        if (l.contains("nu") && l["nu"].is_array())
          for (const json& a : l["nu"]) atoms.emplace_back(a.value("s", 0.0), a.value("w", 0.0));
        config.density = DensityModel(l.value("f", std::vector<double>{0.0}), std::move(atoms));
      } else {
        issues.add("law.type", "expected dirac|atoms|pushforward|density (or \"auto\")");
      }
    } catch (const std::exception& e) {
      issues.add("law", e.what());
    }
  }

  if (j.contains("density")) {
    const json& d = j["density"];
    try {
      std::vector<std::pair<double, double>> atoms;
      if (d.contains("nu") && d["nu"].is_array()) {
        for (const json& a : d["nu"]) atoms.emplace_back(a.value("s", 0.0), a.value("w", 0.0));
      }
      config.density = DensityModel(d.value("f", std::vector<double>{0.0}), std::move(atoms));
    } catch (const std::exception& e) {
      issues.add("density", e.what());
    }
  }

  if (!issues.list.empty()) throw ConfigError(std::move(issues.list));
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open " + path});
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError({std::string("config: JSON parse failure: ") + e.what()});
  }
  return from_json(j);
}

LimitLaw auto_law(const MatrixSeqSpec& spec, std::uint64_t /*seed*/, int s_nodes, int t_nodes) {
  return std::visit(
      [&](const auto& payload) -> LimitLaw {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, ToeplitzSpec>) {
          return LimitLaw::dirac(payload.coeffs, t_nodes);
        } else if constexpr (std::is_same_v<T, PerturbedToeplitzSpec>) {
          return LimitLaw::dirac(payload.base, t_nodes);
        } else if constexpr (std::is_same_v<T, KmsSpec>) {
          return LimitLaw::pushforward(payload.symbol, s_nodes, t_nodes);
        } else if constexpr (std::is_same_v<T, BinnedConstantsSpec>) {
          const int band = payload.band;
          DiagonalSymbol symbol(band, payload.maps,
                                /*hermitian_pair=*/false);
          if (payload.constants.empty()) return LimitLaw::pushforward(symbol, s_nodes, t_nodes);
          std::vector<std::pair<double, double>> s_atoms;
          const double w = 1.0 / static_cast<double>(payload.constants.size());
          for (double c : payload.constants) s_atoms.emplace_back(c, w);
          return LimitLaw::pushforward_atoms(symbol, s_atoms, t_nodes);
        } else if constexpr (std::is_same_v<T, BinnedFunctionsSpec>) {
          std::vector<ScalarField> last;
          for (const auto& table : payload.bins) last.push_back(table.back());
          DiagonalSymbol symbol(payload.band, std::move(last), /*hermitian_pair=*/false);
          return LimitLaw::pushforward(symbol, s_nodes, t_nodes);
        } else if constexpr (std::is_same_v<T, JacobiSpec>) {
          constexpr long tail = 1L << 20;  // proxy for the sequence limits
          return LimitLaw::dirac(
              CoeffSeq::from_offsets({{-1, payload.offdiag(tail)},
                                      {0, payload.diag(tail)},
                                      {1, payload.offdiag(tail)}}),
              t_nodes);
        } else {
          throw ConfigError({"law: no automatic law for explicit generator specs"});
        }
      },
      spec.family);
}

std::string format_number(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

}  // namespace

void write_dense_csv(const std::string& path, const DiagMatrix& a) {
  std::ofstream out = open_out(path);
  const Eigen::MatrixXcd dense = a.to_dense();
  for (long i = 0; i < dense.rows(); ++i) {
    for (long j = 0; j < dense.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_number(dense(i, j).real()) << ',' << format_number(dense(i, j).imag());
    }
    out << '\n';
  }
}

void write_eigenvalues_csv(const std::string& path,
                           const std::vector<std::pair<long, SpectralSample>>& samples) {
  std::ofstream out = open_out(path);
  out << "n,re,im\n";
  for (const auto& [n, sample] : samples)
    for (const Complex& v : sample.values)
      out << n << ',' << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
}

void write_vmv_csv(const std::string& path, const std::vector<VmvEntry>& rows) {
  std::ofstream out = open_out(path);
  out << "k,n,value\n";
  for (const VmvEntry& row : rows)
    out << row.k << ',' << row.n << ',' << format_number(row.variation) << '\n';
}

void write_cdf_csv(const std::string& path,
                   const std::vector<std::tuple<long, double, double, double>>& rows) {
  std::ofstream out = open_out(path);
  out << "n,x,empirical,predicted\n";
  for (const auto& [n, x, emp, pred] : rows)
    out << n << ',' << format_number(x) << ',' << format_number(emp) << ','
        << format_number(pred) << '\n';
}

void write_density_csv(const std::string& path, const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out = open_out(path);
  out << "x,value\n";
  for (const auto& [x, v] : rows) out << format_number(x) << ',' << format_number(v) << '\n';
}

namespace {

json moment_rows_json(const std::vector<MomentRow>& rows) {
  json arr = json::array();
  for (const MomentRow& row : rows) {
    arr.push_back({{"r", row.r},
                   {"s", row.s},
                   {"empirical_re", row.empirical.real()},
                   {"empirical_im", row.empirical.imag()},
                   {"predicted_re", row.predicted.real()},
                   {"predicted_im", row.predicted.imag()},
                   {"abs_err", row.abs_err}});
  }
  return arr;
}

}  // namespace

json RunReport::to_json() const {
  json per = json::array();
  for (const NReport& r : per_n) {
    json entry = {{"n", r.n},
                  {"moment_method", r.moment_method},
                  {"moments", moment_rows_json(r.moments)},
                  {"oracle_checked", r.oracle_checked},
                  {"oracle_worst", r.oracle_worst},
                  {"bounds",
                   {{"coeff_bound", r.bounds.coeff_bound},
                    {"spectral_norm", r.bounds.spectral},
                    {"trace_norm", r.bounds.trace},
                    {"max_abs_eigenvalue", r.bounds.max_abs_eigenvalue},
                    {"max_singular_value", r.bounds.max_singular_value}}}};
    json vmv = json::array();
    for (const VmvEntry& row : r.vmv)
      vmv.push_back({{"k", row.k}, {"variation", row.variation}, {"normalized", row.normalized}});
    entry["vmv"] = vmv;
    if (r.ks_law) entry["ks_law"] = *r.ks_law;
    if (r.ks_density) entry["ks_density"] = *r.ks_density;
    json phis = json::array();
    for (const PhiRow& row : r.phis)
      phis.push_back({{"name", row.name},
                      {"empirical", row.empirical},
                      {"predicted", row.predicted},
                      {"abs_err", row.abs_err}});
    entry["phis"] = phis;
    per.push_back(std::move(entry));
  }
  json doc = {{"spec", spec_label}, {"n_grid", n_grid}, {"hermitian", hermitian}, {"per_n", per}};
  if (profile) {
    json tails = json::object();
    for (const auto& [k, ok] : profile->tail_ok) tails[std::to_string(k)] = ok;
    doc["vmv_tail_nonincreasing"] = tails;
    doc["vmv_pass"] = profile->pass();
  }
  return doc;
}

RunReport run_experiment(const ExperimentConfig& config) {
  RunReport report;
  report.spec_label = config.spec.label;
  report.n_grid = config.n_grid;

  std::optional<LimitLaw> law = config.law;
  if (!law && config.law_auto)
    law = auto_law(config.spec, config.seed, config.law_s_nodes, config.law_t_nodes);

  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  const auto out_path = [&](const char* name) { return (fs::path(config.output_dir) / name).string(); };

  const std::vector<std::pair<int, int>> pairs = config.moment_pairs();
  const std::vector<double> grid = config.cdf_grid.points();
  std::optional<std::vector<double>> law_cdf;
  std::optional<std::vector<double>> density_cdf;
  if (config.density) density_cdf = predicted_cdf(*config.density, grid);

  std::vector<std::pair<long, SpectralSample>> samples;
  std::vector<std::tuple<long, double, double, double>> cdf_rows;
  json moments_doc = json::array();

  if (config.n_grid.size() >= 3)
    report.profile = vmv_profile(config.spec, config.n_grid, config.seed);

  for (long n : config.n_grid) {
    const auto start = std::chrono::steady_clock::now();
    NReport entry;
    entry.n = n;
    const DiagMatrix a = build(config.spec, n, config.seed);
    if (n == config.n_grid.front()) report.hermitian = a.hermitian();

    for (const auto& [k, v] : a.diagonals()) {
      const double var = vmv_variation(a, k);
      entry.vmv.push_back({k, n, var, var / static_cast<double>(n)});
    }
    entry.bounds = bound_report(a);

    // both moment routes where affordable; the banded route is the fast path
    const double scale = std::max(1.0, entry.bounds.coeff_bound);
    const bool run_dense = n <= config.dense_max_n;
    std::map<std::pair<int, int>, Complex> dense;
    if (run_dense) dense = moment_table_dense(a, pairs);
    entry.moment_method = "diagonal-sum";
    std::vector<MomentRow> dense_rows;
    for (const auto& [r, s] : pairs) {
      MomentRow row;
      row.r = r;
      row.s = s;
      row.predicted = law ? predicted_moment(*law, r, s) : Complex(0.0, 0.0);
      const Complex diag = moment_trace_diagonal(a, r, s, MomentLimits{config.max_moment, 1LL << 28});
      row.empirical = diag;
      if (run_dense) {
        const Complex dd = dense.at({r, s});
        const double gap = std::abs(dd - diag);
        const double budget = config.oracle_tol * std::pow(scale, r + s);
        entry.oracle_checked = true;
        entry.oracle_worst = std::max(entry.oracle_worst, gap);
        if (gap > budget)
          throw OracleError("moment routes disagree at n=" + std::to_string(n) + " (r=" +
                            std::to_string(r) + ", s=" + std::to_string(s) + "): |dense - diagonal| = " +
                            format_number(gap) + " > " + format_number(budget));
        MomentRow drow = row;
        drow.empirical = dd;
        drow.abs_err = std::abs(drow.empirical - drow.predicted);
        dense_rows.push_back(drow);
      }
      row.abs_err = std::abs(row.empirical - row.predicted);
      entry.moments.push_back(row);
    }
    moments_doc.push_back(
        {{"n", n}, {"method", "diagonal-sum"}, {"rows", moment_rows_json(entry.moments)}});
    if (!dense_rows.empty())
      moments_doc.push_back({{"n", n}, {"method", "dense-power"}, {"rows", moment_rows_json(dense_rows)}});

    const SpectralSample sample = eigenvalues(a);
    if (a.hermitian()) {
      const std::vector<double> emp = empirical_cdf(sample, grid);
      if (law && law->hermitian()) {
        if (!law_cdf) law_cdf = predicted_cdf(*law, grid);
        entry.ks_law = ks_distance(emp, *law_cdf);
      }
      if (density_cdf) entry.ks_density = ks_distance(emp, *density_cdf);
      for (std::size_t i = 0; i < grid.size(); ++i)
        cdf_rows.emplace_back(n, grid[i], emp[i],
                              law_cdf ? (*law_cdf)[i] : (density_cdf ? (*density_cdf)[i] : 0.0));
      const std::vector<double> levels = sample.reals();
      for (std::size_t i = 0; i < config.phis.size(); ++i) {
        const TestFunction& phi = config.phis[i];
        PhiRow row;
        row.name = phi_name(phi, i);
        for (double x : levels) row.empirical += phi(x);
        row.empirical /= static_cast<double>(n);
        row.predicted = law ? predicted_phi_integral(*law, phi) : 0.0;
        row.abs_err = std::abs(row.empirical - row.predicted);
        entry.phis.push_back(row);
      }
    }
    samples.emplace_back(n, sample);

    entry.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "[szego] " << config.spec.label << " n=" << n << " done in " << entry.seconds
              << " s\n";
    report.per_n.push_back(std::move(entry));
  }

  write_eigenvalues_csv(out_path("eigenvalues.csv"), samples);
  {
    std::vector<VmvEntry> rows;
    if (report.profile) {
      rows = report.profile->rows;
    } else {
      for (const NReport& r : report.per_n) rows.insert(rows.end(), r.vmv.begin(), r.vmv.end());
    }
    write_vmv_csv(out_path("vmv.csv"), rows);
  }
  if (!cdf_rows.empty()) write_cdf_csv(out_path("cdf.csv"), cdf_rows);
  open_out(out_path("moments.json")) << moments_doc.dump(2) << '\n';
  open_out(out_path("report.json")) << report.to_json().dump(2) << '\n';
  return report;
}

}  // namespace szego
