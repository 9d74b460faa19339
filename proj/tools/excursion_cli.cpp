// Command-line front end: simulation, estimation and the simulation studies.
//
// Exit codes: 0 success, 2 invalid input or configuration, 3 numerical failure.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "excursion/errors.hpp"
#include "excursion/estimator.hpp"
#include "excursion/experiments.hpp"
#include "excursion/gkf.hpp"
#include "excursion/grf.hpp"
#include "excursion/io.hpp"
#include "excursion/proxy.hpp"
#include "excursion/stats.hpp"
#include "excursion/topology.hpp"

namespace ex = excursion;
namespace exp_ = excursion::experiments;

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

std::string fmt(double x) { return ex::io::format_decimal(x); }

bool starts_with_magic(const std::string& path, std::string_view magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ex::IoError("cannot open '" + path + "'");
  std::string head(magic.size(), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  return in.gcount() == static_cast<std::streamsize>(magic.size()) && head == magic;
}

// A PBM image, or a GRF1 field thresholded at `level`.
ex::BinaryField load_binary(const std::string& path, std::optional<double> level) {
  if (starts_with_magic(path, "GRF1")) {
    if (!level) throw ex::ConfigError("a GRF1 input needs --u to be thresholded");
    return ex::threshold(ex::io::load_grf1(path), *level);
  }
  return ex::io::load_pbm(path);
}

std::vector<double> read_csv_column(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw ex::IoError("cannot open '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  auto parse = [](const std::string& s, double& v) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
  };

  std::vector<double> values;
  std::optional<std::size_t> index;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);
    if (!index) {
      double probe = 0.0;
      if (!cells.empty() && parse(cells.front(), probe)) {
        // No header: the column must be a 0-based index.
        std::size_t k = 0;
        const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), k);
        if (ec != std::errc() || ptr != column.data() + column.size())
          throw ex::ConfigError("file has no header; --column must be an index");
        index = k;
      } else {
        const auto it = std::find(cells.begin(), cells.end(), column);
        if (it == cells.end()) throw ex::ConfigError("no column '" + column + "' in '" + path + "'");
        index = static_cast<std::size_t>(it - cells.begin());
        continue;
      }
    }
    double v = 0.0;
    if (*index >= cells.size() || !parse(cells[*index], v))
      throw ex::IoError("non-numeric value in column '" + column + "' of '" + path + "'");
    values.push_back(v);
  }
  return values;
}

struct ModelOptions {
  double nu = 2.5;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double theta = 0.0;

  void add_to(CLI::App& app) {
    app.add_option("--nu", nu, "Matern smoothness")->capture_default_str();
    app.add_option("--sigma1", sigma1, "major anisotropy scale")->capture_default_str();
    app.add_option("--sigma2", sigma2, "minor anisotropy scale")->capture_default_str();
    app.add_option("--theta", theta, "anisotropy angle in [0, pi)")->capture_default_str();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perimeter estimation for excursion sets of random fields"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Sample Gaussian fields on [-t,t]^2 (GRF1 files)");
  ModelOptions sim_model;
  sim_model.add_to(*simulate);
  double sim_t = 2.5;
  int sim_m = 256;
  std::uint64_t sim_seed = 1;
  int sim_reps = 1;
  std::string sim_out = ".";
  std::optional<double> sim_level;
  simulate->add_option("--t", sim_t, "window half-width")->capture_default_str();
  simulate->add_option("--M", sim_m, "pixels per side")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "base seed")->capture_default_str();
  simulate->add_option("--reps", sim_reps, "number of fields")->capture_default_str();
  simulate->add_option("--out-dir", sim_out, "output directory")->capture_default_str();
  simulate->add_option("--u", sim_level, "also write field_<rep>.pbm thresholded at u");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Block p-norm perimeter estimate; prints p,m,estimate");
  std::string est_input;
  int est_p = 2;
  std::string est_m = "auto";
  bool est_all_m = false;
  std::optional<double> est_level;
  estimate->add_option("--input", est_input, "PBM image, or GRF1 field with --u")->required();
  estimate->add_option("--p", est_p, "norm exponent (>= 1)")->capture_default_str();
  estimate->add_option("--m", est_m, "block size or 'auto'")->capture_default_str();
  estimate->add_flag("--all-m", est_all_m, "print one line for every m in 1..M-1");
  estimate->add_option("--u", est_level, "level for GRF1 input");

  // topology
  auto* topo = app.add_subcommand("topology", "Component and hole counts; prints n_cc,n_holes,euler");
  std::string topo_input;
  std::optional<double> topo_level;
  topo->add_option("--input", topo_input, "PBM image, or GRF1 field with --u")->required();
  topo->add_option("--u", topo_level, "level for GRF1 input");

  // proxy
  auto* proxy = app.add_subcommand("proxy", "Marching-squares contour length of a GRF1 field");
  std::string proxy_input;
  double proxy_level = 0.0;
  proxy->add_option("--input", proxy_input, "GRF1 field")->required();
  proxy->add_option("--u", proxy_level, "level")->required();

  // expect
  auto* expect = app.add_subcommand("expect", "Closed-form mean perimeter of {X >= u}");
  double exp_area = 0.0;
  double exp_u = 0.0;
  double exp_nu = 2.5;
  std::optional<double> exp_lambda2;
  double exp_sigma1 = 1.0;
  double exp_sigma2 = 1.0;
  expect->add_option("--area", exp_area, "window area")->required();
  expect->add_option("--u", exp_u, "level")->required();
  auto* nu_opt = expect->add_option("--nu", exp_nu, "Matern smoothness; lambda2 = nu/(nu-1)")->capture_default_str();
  expect->add_option("--lambda2", exp_lambda2, "second spectral moment")->excludes(nu_opt);
  expect->add_option("--sigma1", exp_sigma1, "major anisotropy scale")->capture_default_str();
  expect->add_option("--sigma2", exp_sigma2, "minor anisotropy scale")->capture_default_str();

  // mselect
  auto* mselect = app.add_subcommand("mselect", "Adaptive block size of a binary image");
  std::string ms_input;
  std::optional<double> ms_level;
  mselect->add_option("--input", ms_input, "PBM image, or GRF1 field with --u")->required();
  mselect->add_option("--u", ms_level, "level for GRF1 input");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Normality test on one CSV column");
  std::string st_test = "sw";
  std::string st_input;
  std::string st_column = "estimate";
  stats_cmd->add_option("--test", st_test, "test name")->check(CLI::IsMember({"sw"}))->capture_default_str();
  stats_cmd->add_option("--input", st_input, "CSV file")->required();
  stats_cmd->add_option("--column", st_column, "column name (or index without header)")->capture_default_str();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a simulation study and write CSV");
  experiment->footer(exp_::config_keys_help());
  std::string xp_name;
  std::string xp_config;
  std::string xp_scale = "desk";
  std::string xp_out;
  std::string xp_summary;
  std::optional<int> xp_reps;
  std::optional<std::uint64_t> xp_seed;
  std::vector<std::string> xp_set;
  experiment->add_option("--name", xp_name, "study name")
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(exp_::kExperimentNames),
                                                     std::end(exp_::kExperimentNames))));
  experiment->add_option("--config", xp_config, "key = value file")->check(CLI::ExistingFile);
  experiment->add_option("--scale", xp_scale, "preset size")->check(CLI::IsMember({"desk", "paper"}))->capture_default_str();
  experiment->add_option("--out", xp_out, "per-replication CSV path");
  experiment->add_option("--summary", xp_summary, "summary CSV path (default: stdout)");
  experiment->add_option("--reps", xp_reps, "override replications");
  experiment->add_option("--seed", xp_seed, "override seed");
  experiment->add_option("--set", xp_set, "override a config key, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*simulate) {
      const auto spec = ex::GridSpec::from_half_width(sim_t, sim_m);
      const ex::CirculantSampler sampler(spec, ex::MaternModel{sim_model.nu},
                                         {sim_model.sigma1, sim_model.sigma2, sim_model.theta});
      std::filesystem::create_directories(sim_out);
      for (int rep = 0; rep < sim_reps; ++rep) {
        const auto field = sampler.sample(sim_seed, static_cast<std::uint64_t>(rep));
        const auto stem = std::filesystem::path(sim_out) / ("field_" + std::to_string(rep));
        ex::io::save_grf1(stem.string() + ".grf1", field);
        if (sim_level) ex::io::save_pbm(stem.string() + ".pbm", ex::threshold(field, *sim_level));
      }
      std::cout << "wrote " << sim_reps << " field(s) to " << sim_out << " (torus "
                << sampler.torus_size() << "^2)\n";
    } else if (*estimate) {
      const auto bin = load_binary(est_input, est_level);
      std::cout << "p,m,estimate\n";
      if (est_all_m) {
        for (int m = 1; m < bin.size(); ++m)
          std::cout << est_p << ',' << m << ',' << fmt(ex::perimeter_hat(bin, m, est_p).value) << '\n';
      } else {
        int m = 0;
        if (est_m == "auto") {
          m = ex::select_m(bin);
        } else {
          const auto [ptr, ec] = std::from_chars(est_m.data(), est_m.data() + est_m.size(), m);
          if (ec != std::errc() || ptr != est_m.data() + est_m.size())
            throw ex::ConfigError("--m must be an integer or 'auto'");
        }
        std::cout << est_p << ',' << m << ',' << fmt(ex::perimeter_hat(bin, m, est_p).value) << '\n';
      }
    } else if (*topo) {
      const auto s = ex::topology(load_binary(topo_input, topo_level));
      std::cout << "n_cc,n_holes,euler\n" << s.components << ',' << s.holes << ',' << s.euler() << '\n';
    } else if (*proxy) {
      std::cout << fmt(ex::marching_squares_length(ex::io::load_grf1(proxy_input), proxy_level)) << '\n';
    } else if (*expect) {
      const auto l2 = exp_lambda2 ? ex::SpectralMoment{*exp_lambda2}
                                  : ex::second_spectral_moment(ex::MaternModel{exp_nu});
      if (!(l2.lambda2 > 0.0)) throw ex::InvalidArgument("lambda2 must be positive");
      std::cout << fmt(ex::expected_perimeter_affine(exp_area, exp_u, l2, exp_sigma1, exp_sigma2)) << '\n';
    } else if (*mselect) {
      std::cout << ex::select_m(load_binary(ms_input, ms_level)) << '\n';
    } else if (*stats_cmd) {
      const auto values = read_csv_column(st_input, st_column);
      const auto sw = ex::stats::shapiro_wilk(values);
      std::cout << "n,w,p_value\n" << values.size() << ',' << fmt(sw.w) << ',' << fmt(sw.p_value) << '\n';
    } else if (*experiment) {
      exp_::ExperimentConfig config;
      if (!xp_name.empty()) {
        config = exp_::preset(xp_name, exp_::parse_scale(xp_scale));
      }
      if (!xp_config.empty()) {
        if (xp_name.empty()) {
          // The file names the study; read it once for the name, then apply
          // it on top of that study's preset.
          exp_::ExperimentConfig probe;
          exp_::apply_config_file(probe, xp_config);
          if (probe.name.empty()) throw ex::ConfigError("config file does not set 'name'");
          config = exp_::preset(probe.name, exp_::parse_scale(xp_scale));
        }
        exp_::apply_config_file(config, xp_config);
        if (!xp_name.empty() && config.name != xp_name)
          throw ex::ConfigError("--name " + xp_name + " conflicts with config name " + config.name);
      }
      if (config.name.empty()) throw ex::ConfigError("experiment needs --name or a config with 'name'");
      for (const auto& kv : xp_set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ex::ConfigError("--set expects key=value, got '" + kv + "'");
        exp_::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (xp_reps) config.replications = *xp_reps;
      if (xp_seed) config.seed = *xp_seed;
      if (!xp_out.empty()) config.output = xp_out;
      config.validate();

      const auto result = exp_::run(config);
      if (!config.output.empty()) {
        std::ofstream out(config.output);
        if (!out) throw ex::IoError("cannot write '" + config.output + "'");
        result.write_csv(out);
      }
      const auto groups = exp_::summarize(result, config);
      std::ofstream summary_file;
      if (!xp_summary.empty()) {
        summary_file.open(xp_summary);
        if (!summary_file) throw ex::IoError("cannot write '" + xp_summary + "'");
      }
      std::ostream& summary = xp_summary.empty() ? std::cout : summary_file;
      exp_::write_summary_csv(summary, result, groups);
      if (config.name == "clt") exp_::write_clt_report(summary, exp_::analyze_clt(result, config));
      if (config.name == "mselect") {
        summary << "# select_m histogram: m,count\n";
        for (const auto& [m, count] : exp_::select_m_histogram(result))
          summary << "# " << m << ',' << count << '\n';
      }
    }
  } catch (const ex::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const ex::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericExit;
  }
  return 0;
}
