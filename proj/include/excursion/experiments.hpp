#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "excursion/grf.hpp"
#include "excursion/stats.hpp"

namespace excursion::experiments {

enum class Scale { Desk, Paper };
Scale parse_scale(std::string_view text);

/// How the block size of the "p2" estimator is chosen.
enum class MPolicy {
  Fixed,     // config.m
  Auto,      // select_m on each image
  Schedule,  // m_n = n of the convergence schedule
};

/// One simulation study. Unused fields are ignored by experiments that do
/// not need them.
struct ExperimentConfig {
  std::string name;  // aniso-angle | convergence | clt | mselect | level-sweep
  double nu = 2.5;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  std::vector<double> thetas{0.0};
  double t = 2.5;
  int grid_size = 256;
  int n_min = 1;  // convergence schedule index range
  int n_max = 5;
  std::vector<double> levels{0.5};
  MPolicy m_policy = MPolicy::Fixed;
  int m = 11;
  std::vector<int> m_grid;  // mselect only
  int replications = 50;
  std::uint64_t seed = 20240101;
  std::string output;

  AnisotropyTransform transform(double theta) const { return {sigma1, sigma2, theta}; }
  /// Throws ConfigError when the configuration cannot be run.
  void validate() const;
};

inline constexpr std::string_view kExperimentNames[] = {"aniso-angle", "convergence", "clt",
                                                        "mselect", "level-sweep"};

/// Built-in configuration for a study. Desk presets are sized to run in
/// minutes on one core; paper presets run the full-size studies.
///
///   aniso-angle  desk: 50 reps, 256^2 on [-2.5,2.5]^2, u=0.5, m=11,
///                theta in {0, pi/8, pi/4, 3pi/8, pi/2}; paper: 200 reps,
///                theta step pi/16.
///   convergence  desk: 100 reps, n=1..5; paper: 500 reps, n=1..10;
///                M_n = floor(10 n^1.5), eps_n = 5/(M_n-1), m_n = n, u=0.5.
///   clt          desk: 200 reps, 512^2 on [-7.5,7.5]^2; paper: 200 reps,
///                1024^2 on [-15,15]^2; m=7, u=(0,0.5,1), (2,0.5,pi/4).
///   mselect      desk: 300 reps; paper: 1000 reps; 512^2 on [-10,10]^2, u=0.
///   level-sweep  desk: 100 reps; paper: 500 reps; 512^2 on [-2.5,2.5]^2,
///                u from -3 to 3 in steps of 0.5, m = select_m.
ExperimentConfig preset(std::string_view name, Scale scale);

/// Applies one `key = value` setting. Lists are comma separated; m_grid
/// also accepts `lo:hi` ranges. Angles accept the suffix "pi" (e.g. 0.25pi).
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
/// Reads a flat `key = value` file (# starts a comment) into config.
void apply_config_text(ExperimentConfig& config, std::istream& in);
void apply_config_file(ExperimentConfig& config, const std::string& path);
/// Documentation of the config keys, for --help.
std::string config_keys_help();

/// Estimator identifiers used in result rows.
namespace estimator_id {
inline constexpr std::string_view kP1 = "p1";          // raw edge count
inline constexpr std::string_view kP1Scaled = "p1_pi4";  // (pi/4) * p1
inline constexpr std::string_view kP2 = "p2";          // p = 2 at the row's m
inline constexpr std::string_view kP2Auto = "p2_auto";  // p = 2 at select_m
}  // namespace estimator_id

struct ResultRow {
  std::vector<double> echo;  // values of ExperimentResult::echo_columns
  std::uint64_t replication = 0;
  double level = 0.0;
  std::string estimator;
  int m = 0;  // block size; 0 for p1 estimators
  double estimate = 0.0;
  double proxy = 0.0;
  double error() const { return estimate - proxy; }
};

struct ExperimentResult {
  std::string schema;  // e.g. "clt/1"
  std::vector<std::string> echo_columns;
  std::vector<ResultRow> rows;

  /// `# schema=<name>/1` line, header, one line per row.
  void write_csv(std::ostream& out) const;
};

ExperimentResult run_aniso_angle(const ExperimentConfig& config);
ExperimentResult run_convergence(const ExperimentConfig& config);
ExperimentResult run_clt(const ExperimentConfig& config);
ExperimentResult run_mselect(const ExperimentConfig& config);
ExperimentResult run_level_sweep(const ExperimentConfig& config);
/// Dispatches on config.name.
ExperimentResult run(const ExperimentConfig& config);

/// Convergence schedule: M_n = floor(10 n^(3/2)), m_n = n.
int schedule_grid_size(int n);

/// Error statistics of one curve: rows sharing echo values, level and
/// estimator (and m, except for p2_auto whose m varies per image).
struct GroupSummary {
  std::vector<double> echo;
  double level = 0.0;
  std::string estimator;
  int m = 0;  // -1 for p2_auto
  std::size_t n = 0;
  double mean_estimate = 0.0;
  double mean_proxy = 0.0;
  double mean_error = 0.0;
  double mae = 0.0;
  std::optional<double> mape;  // empty when some proxy is zero
  double expected = 0.0;       // closed-form mean perimeter for the model
};

/// Groups in first-appearance order. `expected` is filled from the model in
/// config (lambda2 = nu / (nu - 1), window area of the row's grid).
std::vector<GroupSummary> summarize(const ExperimentResult& result, const ExperimentConfig& config);
void write_summary_csv(std::ostream& out, const ExperimentResult& result,
                       const std::vector<GroupSummary>& groups);

struct CltReport {
  std::vector<double> levels;
  std::vector<double> sample_means;
  std::vector<double> expected;
  std::vector<double> marginal_sw_p;
  double multivariate_sw_p = 0.0;
  std::vector<double> mahalanobis;  // per replication, centred at `expected`
  double mean_mahalanobis = 0.0;
  std::vector<stats::QQPoint> mahalanobis_qq;  // against chi2(k)
};

/// Normality diagnostics of the p2 estimates across levels.
CltReport analyze_clt(const ExperimentResult& result, const ExperimentConfig& config);
void write_clt_report(std::ostream& out, const CltReport& report);

/// Histogram of select_m over the replications of an mselect result.
std::map<int, int> select_m_histogram(const ExperimentResult& result);

}  // namespace excursion::experiments
