#include "excursion/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "excursion/errors.hpp"
#include "excursion/estimator.hpp"
#include "excursion/gkf.hpp"
#include "excursion/io.hpp"
#include "excursion/parallel.hpp"
#include "excursion/proxy.hpp"
#include "excursion/rng.hpp"

namespace excursion::experiments {
namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw ConfigError("key '" + std::string(key) + "': not a number: '" + std::string(text) + "'");
  return value;
}

long long parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("key '" + std::string(key) + "': not an integer: '" + std::string(text) + "'");
  return value;
}

int parse_int(std::string_view key, std::string_view text) {
  const long long v = parse_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError("key '" + std::string(key) + "': integer out of range");
  return static_cast<int>(v);
}

// Accepts plain numbers and multiples of pi: "pi", "3pi/8", "0.25pi", "pi/16".
double parse_angle(std::string_view key, std::string_view text) {
  text = trim(text);
  const auto pos = text.find("pi");
  if (pos == std::string_view::npos) return parse_double(key, text);
  const auto coeff_text = trim(text.substr(0, pos));
  const double coeff = coeff_text.empty() ? 1.0 : parse_double(key, coeff_text);
  auto rest = trim(text.substr(pos + 2));
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError("key '" + std::string(key) + "': bad angle '" + std::string(text) + "'");
    divisor = parse_double(key, rest.substr(1));
    if (divisor == 0.0) throw ConfigError("key '" + std::string(key) + "': division by zero");
  }
  return coeff * kPi / divisor;
}

std::vector<int> parse_int_list(std::string_view key, std::string_view text) {
  std::vector<int> out;
  for (auto item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      out.push_back(parse_int(key, item));
      continue;
    }
    const int lo = parse_int(key, item.substr(0, colon));
    const int hi = parse_int(key, item.substr(colon + 1));
    if (hi < lo) throw ConfigError("key '" + std::string(key) + "': empty range");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

MPolicy parse_policy(std::string_view text) {
  text = trim(text);
  if (text == "fixed") return MPolicy::Fixed;
  if (text == "auto") return MPolicy::Auto;
  if (text == "schedule") return MPolicy::Schedule;
  throw ConfigError("m_policy must be fixed, auto or schedule, got '" + std::string(text) + "'");
}

bool known_name(std::string_view name) {
  return std::find(std::begin(kExperimentNames), std::end(kExperimentNames), name) !=
         std::end(kExperimentNames);
}

// ---------------------------------------------------------------------------
// Estimation from the binary image only.

struct EstimatorPlan {
  bool p1 = false;
  bool p1_scaled = false;
  std::vector<int> p2_m;  // one "p2" row per block size
  bool p2_auto = false;
};

struct Estimate {
  std::string_view id;
  int m;
  double value;
};

// Everything here sees the thresholded image and nothing else.
std::vector<Estimate> estimate_from_binary(const BinaryField& bin, const EstimatorPlan& plan) {
  std::vector<Estimate> out;
  if (plan.p1 || plan.p1_scaled) {
    const double p1 = edge_count_length(bin);
    if (plan.p1) out.push_back({estimator_id::kP1, 0, p1});
    if (plan.p1_scaled) out.push_back({estimator_id::kP1Scaled, 0, kPi / 4.0 * p1});
  }
  for (int m : plan.p2_m) out.push_back({estimator_id::kP2, m, perimeter_hat(bin, m, 2).value});
  if (plan.p2_auto) {
    // An image without any 0/1 transition has estimate 0 for every m; m = 0
    // marks that no block size was selected.
    try {
      const int m = select_m(bin);
      out.push_back({estimator_id::kP2Auto, m, perimeter_hat(bin, m, 2).value});
    } catch (const NoExcursionBoundary&) {
      out.push_back({estimator_id::kP2Auto, 0, 0.0});
    }
  }
  return out;
}

EstimatorPlan with_p2_policy(EstimatorPlan plan, const ExperimentConfig& config, int schedule_n) {
  switch (config.m_policy) {
    case MPolicy::Fixed: plan.p2_m.push_back(config.m); break;
    case MPolicy::Schedule: plan.p2_m.push_back(schedule_n); break;
    case MPolicy::Auto: plan.p2_auto = true; break;
  }
  return plan;
}

std::vector<ResultRow> rows_for_field(const ScalarField& field, std::uint64_t replication,
                                      const std::vector<double>& levels, const EstimatorPlan& plan,
                                      const std::vector<double>& echo) {
  std::vector<ResultRow> rows;
  for (double u : levels) {
    const double proxy = marching_squares_length(field, u);
    for (const auto& e : estimate_from_binary(threshold(field, u), plan))
      rows.push_back({echo, replication, u, std::string(e.id), e.m, e.value, proxy});
  }
  return rows;
}

// Runs every replication of one configuration. Pairs of replications share a
// transform; results land in per-replication slots, so the row order is the
// replication order whatever the scheduling.
void replicate(const CirculantSampler& sampler, std::uint64_t seed, int replications,
               const std::vector<double>& levels, const EstimatorPlan& plan,
               const std::vector<double>& echo, std::vector<ResultRow>& out) {
  const auto reps = static_cast<std::size_t>(replications);
  std::vector<std::vector<ResultRow>> slots(reps);
  parallel_for((reps + 1) / 2, [&](std::size_t k) {
    auto [first, second] = sampler.sample_pair(seed, k);
    slots[2 * k] = rows_for_field(first, 2 * k, levels, plan, echo);
    if (2 * k + 1 < reps) slots[2 * k + 1] = rows_for_field(second, 2 * k + 1, levels, plan, echo);
  });
  for (auto& slot : slots)
    for (auto& row : slot) out.push_back(std::move(row));
}

// Distinct configurations of one study draw from distinct streams.
std::uint64_t configuration_seed(std::uint64_t seed, std::size_t index) {
  return stream_key(seed, 0x5EEDULL + index);
}

void require_name(const ExperimentConfig& config, std::string_view name) {
  config.validate();
  if (config.name != name)
    throw ConfigError("configuration is for '" + config.name + "', not '" + std::string(name) + "'");
}

std::string csv_number(double x) { return io::format_decimal(x); }

}  // namespace

Scale parse_scale(std::string_view text) {
  if (text == "desk") return Scale::Desk;
  if (text == "paper") return Scale::Paper;
  throw ConfigError("scale must be desk or paper, got '" + std::string(text) + "'");
}

int schedule_grid_size(int n) {
  if (n < 1) throw InvalidArgument("schedule index must be >= 1");
  return static_cast<int>(std::floor(10.0 * std::pow(static_cast<double>(n), 1.5)));
}

void ExperimentConfig::validate() const {
  if (!known_name(name)) throw ConfigError("unknown experiment '" + name + "'");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (!(nu > 0.0)) throw ConfigError("nu must be positive");
  if (!(sigma2 > 0.0) || !(sigma1 >= sigma2)) throw ConfigError("need sigma1 >= sigma2 > 0");
  if (thetas.empty()) throw ConfigError("theta list is empty");
  for (double th : thetas)
    if (!(th >= 0.0 && th < kPi)) throw ConfigError("theta must lie in [0, pi)");
  if (!(t > 0.0)) throw ConfigError("t must be positive");
  if (grid_size < 2) throw ConfigError("M must be >= 2");
  if (levels.empty()) throw ConfigError("level list is empty");
  for (double u : levels)
    if (!std::isfinite(u)) throw ConfigError("levels must be finite");
  if (m < 1) throw ConfigError("m must be >= 1");
  if (name == "convergence" && (n_min < 1 || n_max < n_min))
    throw ConfigError("schedule needs 1 <= n_min <= n_max");
  if (m_policy == MPolicy::Schedule && name != "convergence")
    throw ConfigError("m_policy = schedule only applies to the convergence study");
  if (name == "mselect") {
    if (m_grid.empty()) throw ConfigError("m_grid is empty");
    for (int v : m_grid)
      if (v < 1) throw ConfigError("m_grid entries must be >= 1");
  }
  if (name == "clt") {
    auto sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ConfigError("clt levels must be distinct");
  }
}

ExperimentConfig preset(std::string_view name, Scale scale) {
  const bool paper = scale == Scale::Paper;
  ExperimentConfig c;
  c.name = std::string(name);
  if (name == "aniso-angle") {
    c.sigma1 = 2.0;
    c.sigma2 = 0.5;
    c.thetas.clear();
    const int steps = paper ? 8 : 4;
    for (int k = 0; k <= steps; ++k) c.thetas.push_back(kPi / 2.0 * k / steps);
    c.t = 2.5;
    c.grid_size = 256;
    c.levels = {0.5};
    c.m_policy = MPolicy::Fixed;
    c.m = 11;
    c.replications = paper ? 200 : 50;
  } else if (name == "convergence") {
    c.t = 2.5;
    c.n_min = 1;
    c.n_max = paper ? 10 : 5;
    c.levels = {0.5};
    c.m_policy = MPolicy::Schedule;
    c.replications = paper ? 500 : 100;
  } else if (name == "clt") {
    c.sigma1 = 2.0;
    c.sigma2 = 0.5;
    c.thetas = {kPi / 4.0};
    c.t = paper ? 15.0 : 7.5;
    c.grid_size = paper ? 1024 : 512;
    c.levels = {0.0, 0.5, 1.0};
    c.m_policy = MPolicy::Fixed;
    c.m = 7;
    c.replications = 200;
  } else if (name == "mselect") {
    c.t = 10.0;
    c.grid_size = 512;
    c.levels = {0.0};
    c.m_policy = MPolicy::Auto;
    for (int v = 1; v <= 30; ++v) c.m_grid.push_back(v);
    c.replications = paper ? 1000 : 300;
  } else if (name == "level-sweep") {
    c.t = 2.5;
    c.grid_size = 512;
    c.levels.clear();
    for (int k = -6; k <= 6; ++k) c.levels.push_back(0.5 * k);
    c.m_policy = MPolicy::Auto;
    c.replications = paper ? 500 : 100;
  } else {
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
  }
  return c;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "name") {
    c.name = std::string(value);
  } else if (key == "nu") {
    c.nu = parse_double(key, value);
  } else if (key == "sigma1") {
    c.sigma1 = parse_double(key, value);
  } else if (key == "sigma2") {
    c.sigma2 = parse_double(key, value);
  } else if (key == "theta" || key == "thetas") {
    c.thetas.clear();
    for (auto item : split_list(value)) c.thetas.push_back(parse_angle(key, item));
  } else if (key == "t") {
    c.t = parse_double(key, value);
  } else if (key == "M" || key == "grid_size") {
    c.grid_size = parse_int(key, value);
  } else if (key == "n_min") {
    c.n_min = parse_int(key, value);
  } else if (key == "n_max") {
    c.n_max = parse_int(key, value);
  } else if (key == "u" || key == "levels") {
    c.levels.clear();
    for (auto item : split_list(value)) c.levels.push_back(parse_double(key, item));
  } else if (key == "m_policy") {
    c.m_policy = parse_policy(value);
  } else if (key == "m") {
    if (value == "auto") {
      c.m_policy = MPolicy::Auto;
    } else {
      c.m = parse_int(key, value);
      c.m_policy = MPolicy::Fixed;
    }
  } else if (key == "m_grid") {
    c.m_grid = parse_int_list(key, value);
  } else if (key == "replications" || key == "reps") {
    c.replications = parse_int(key, value);
  } else if (key == "seed") {
    const long long s = parse_integer(key, value);
    if (s < 0) throw ConfigError("seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "output") {
    c.output = std::string(value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::istream& in) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
  }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  apply_config_text(config, in);
}

std::string config_keys_help() {
  return "Config file: one `key = value` per line, # starts a comment.\n"
         "  name          aniso-angle | convergence | clt | mselect | level-sweep\n"
         "  nu            Matern smoothness (real > 0)\n"
         "  sigma1        major anisotropy scale (real, >= sigma2)\n"
         "  sigma2        minor anisotropy scale (real > 0)\n"
         "  theta         anisotropy angle list in [0, pi); accepts 3pi/8, 0.25pi\n"
         "  t             window half-width, T = [-t, t]^2 (real > 0)\n"
         "  M             pixels per side (int >= 2)\n"
         "  n_min, n_max  convergence schedule range; M_n = floor(10 n^1.5), m_n = n\n"
         "  levels        level list (alias u)\n"
         "  m             fixed block size (int >= 1) or auto\n"
         "  m_policy      fixed | auto | schedule\n"
         "  m_grid        mselect block sizes, e.g. 1:30 or 2,4,8\n"
         "  replications  Monte Carlo replications (int >= 1; alias reps)\n"
         "  seed          base seed (int >= 0)\n"
         "  output        CSV path\n";
}

void ExperimentResult::write_csv(std::ostream& out) const {
  out << "# schema=" << schema << '\n';
  for (const auto& c : echo_columns) out << c << ',';
  out << "replication,level,estimator,m,estimate,proxy,error\n";
  for (const auto& r : rows) {
    for (double v : r.echo) out << csv_number(v) << ',';
    out << r.replication << ',' << csv_number(r.level) << ',' << r.estimator << ',' << r.m << ','
        << csv_number(r.estimate) << ',' << csv_number(r.proxy) << ',' << csv_number(r.error())
        << '\n';
  }
}

ExperimentResult run_aniso_angle(const ExperimentConfig& config) {
  require_name(config, "aniso-angle");
  ExperimentResult result{"aniso-angle/1", {"sigma1", "sigma2", "theta"}, {}};
  const auto spec = GridSpec::from_half_width(config.t, config.grid_size);
  EstimatorPlan plan;
  plan.p1_scaled = true;
  plan = with_p2_policy(plan, config, 0);
  plan.p2_auto = true;
  for (std::size_t k = 0; k < config.thetas.size(); ++k) {
    const double theta = config.thetas[k];
    const CirculantSampler sampler(spec, MaternModel{config.nu}, config.transform(theta));
    replicate(sampler, configuration_seed(config.seed, k), config.replications, config.levels, plan,
              {config.sigma1, config.sigma2, theta}, result.rows);
  }
  return result;
}

ExperimentResult run_convergence(const ExperimentConfig& config) {
  require_name(config, "convergence");
  ExperimentResult result{"convergence/1", {"n", "M", "epsilon"}, {}};
  const auto transform = config.transform(config.thetas.front());
  for (int n = config.n_min; n <= config.n_max; ++n) {
    const auto spec = GridSpec::from_half_width(config.t, schedule_grid_size(n));
    EstimatorPlan plan;
    plan.p1_scaled = true;
    plan = with_p2_policy(plan, config, n);
    const CirculantSampler sampler(spec, MaternModel{config.nu}, transform);
    replicate(sampler, configuration_seed(config.seed, static_cast<std::size_t>(n)),
              config.replications, config.levels, plan,
              {static_cast<double>(n), static_cast<double>(spec.size()), spec.pixel_width()},
              result.rows);
  }
  return result;
}

ExperimentResult run_clt(const ExperimentConfig& config) {
  require_name(config, "clt");
  ExperimentResult result{"clt/1", {"sigma1", "sigma2", "theta"}, {}};
  const auto spec = GridSpec::from_half_width(config.t, config.grid_size);
  const double theta = config.thetas.front();
  EstimatorPlan plan = with_p2_policy({}, config, 0);
  plan.p2_auto = true;
  const CirculantSampler sampler(spec, MaternModel{config.nu}, config.transform(theta));
  replicate(sampler, config.seed, config.replications, config.levels, plan,
            {config.sigma1, config.sigma2, theta}, result.rows);
  return result;
}

ExperimentResult run_mselect(const ExperimentConfig& config) {
  require_name(config, "mselect");
  ExperimentResult result{"mselect/1", {"t", "M"}, {}};
  const auto spec = GridSpec::from_half_width(config.t, config.grid_size);
  EstimatorPlan plan;
  plan.p1_scaled = true;
  plan.p2_m = config.m_grid;
  plan.p2_auto = true;
  const CirculantSampler sampler(spec, MaternModel{config.nu},
                                 config.transform(config.thetas.front()));
  replicate(sampler, config.seed, config.replications, config.levels, plan,
            {config.t, static_cast<double>(config.grid_size)}, result.rows);
  return result;
}

ExperimentResult run_level_sweep(const ExperimentConfig& config) {
  require_name(config, "level-sweep");
  ExperimentResult result{"level-sweep/1", {"sigma1", "sigma2", "theta"}, {}};
  const auto spec = GridSpec::from_half_width(config.t, config.grid_size);
  const double theta = config.thetas.front();
  EstimatorPlan plan;
  plan.p1 = true;
  plan.p1_scaled = true;
  plan = with_p2_policy(plan, config, 0);
  const CirculantSampler sampler(spec, MaternModel{config.nu}, config.transform(theta));
  replicate(sampler, config.seed, config.replications, config.levels, plan,
            {config.sigma1, config.sigma2, theta}, result.rows);
  return result;
}

ExperimentResult run(const ExperimentConfig& config) {
  const std::string& n = config.name;
  if (n == "aniso-angle") return run_aniso_angle(config);
  if (n == "convergence") return run_convergence(config);
  if (n == "clt") return run_clt(config);
  if (n == "mselect") return run_mselect(config);
  if (n == "level-sweep") return run_level_sweep(config);
  throw ConfigError("unknown experiment '" + n + "'");
}

std::vector<GroupSummary> summarize(const ExperimentResult& result, const ExperimentConfig& config) {
  using Key = std::tuple<std::vector<double>, double, std::string, int>;
  std::map<Key, std::size_t> index;
  std::vector<GroupSummary> groups;
  std::vector<std::vector<double>> estimates;
  std::vector<std::vector<double>> proxies;
  for (const auto& row : result.rows) {
    const int m = row.estimator == estimator_id::kP2Auto ? -1 : row.m;
    const Key key{row.echo, row.level, row.estimator, m};
    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) {
      GroupSummary g;
      g.echo = row.echo;
      g.level = row.level;
      g.estimator = row.estimator;
      g.m = m;
      groups.push_back(std::move(g));
      estimates.emplace_back();
      proxies.emplace_back();
    }
    estimates[it->second].push_back(row.estimate);
    proxies[it->second].push_back(row.proxy);
  }

  const double area = 4.0 * config.t * config.t;
  const bool smooth = config.nu > 1.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& est = estimates[g];
    const auto& prox = proxies[g];
    const bool mape_defined = std::all_of(prox.begin(), prox.end(), [](double p) { return p != 0.0; });
    const auto s = stats::summary(est, prox, mape_defined);
    auto& out = groups[g];
    out.n = s.n;
    out.mean_estimate = s.mean;
    out.mean_proxy = stats::mean(prox);
    out.mean_error = out.mean_estimate - out.mean_proxy;
    out.mae = s.mae;
    out.mape = s.mape;
    out.expected = smooth ? expected_perimeter_affine(area, out.level,
                                                      second_spectral_moment(MaternModel{config.nu}),
                                                      config.sigma1, config.sigma2)
                          : std::nan("");
  }
  return groups;
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result,
                       const std::vector<GroupSummary>& groups) {
  const auto slash = result.schema.find('/');
  out << "# schema=" << result.schema.substr(0, slash) << "-summary/1\n";
  for (const auto& c : result.echo_columns) out << c << ',';
  out << "level,estimator,m,count,mean_estimate,mean_proxy,mean_error,mae,mape,expected\n";
  for (const auto& g : groups) {
    for (double v : g.echo) out << csv_number(v) << ',';
    out << csv_number(g.level) << ',' << g.estimator << ',';
    if (g.m >= 0) out << g.m;
    out << ',' << g.n << ',' << csv_number(g.mean_estimate) << ',' << csv_number(g.mean_proxy)
        << ',' << csv_number(g.mean_error) << ',' << csv_number(g.mae) << ',';
    if (g.mape) out << csv_number(*g.mape);
    out << ',' << (std::isnan(g.expected) ? std::string() : csv_number(g.expected)) << '\n';
  }
}

CltReport analyze_clt(const ExperimentResult& result, const ExperimentConfig& config) {
  const std::string_view id =
      config.m_policy == MPolicy::Auto ? estimator_id::kP2Auto : estimator_id::kP2;
  CltReport report;
  report.levels = config.levels;
  const auto k = static_cast<Eigen::Index>(config.levels.size());

  std::map<std::uint64_t, std::vector<double>> by_rep;
  for (const auto& row : result.rows)
    if (row.estimator == id) by_rep[row.replication].push_back(row.estimate);
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(by_rep.size()), k);
  Eigen::Index r = 0;
  for (const auto& [rep, values] : by_rep) {
    if (static_cast<Eigen::Index>(values.size()) != k)
      throw InvalidArgument("replication " + std::to_string(rep) + " lacks some levels");
    for (Eigen::Index c = 0; c < k; ++c) samples(r, c) = values[static_cast<std::size_t>(c)];
    ++r;
  }
  if (samples.rows() < 3) throw InvalidArgument("CLT analysis needs at least 3 replications");

  const double area = 4.0 * config.t * config.t;
  const auto lambda2 = second_spectral_moment(MaternModel{config.nu});
  Eigen::VectorXd expected(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const double u = config.levels[static_cast<std::size_t>(c)];
    expected(c) = expected_perimeter_affine(area, u, lambda2, config.sigma1, config.sigma2);
    report.expected.push_back(expected(c));
    report.sample_means.push_back(samples.col(c).mean());
    const Eigen::VectorXd column = samples.col(c);
    report.marginal_sw_p.push_back(
        stats::shapiro_wilk({column.data(), static_cast<std::size_t>(column.size())}).p_value);
  }
  report.multivariate_sw_p = stats::multivariate_shapiro_wilk(samples).p_value;
  const Eigen::VectorXd d2 = stats::mahalanobis_sq(samples, expected);
  report.mahalanobis.assign(d2.data(), d2.data() + d2.size());
  report.mean_mahalanobis = d2.mean();
  report.mahalanobis_qq =
      stats::qq_points(report.mahalanobis, stats::ChiSquared{static_cast<double>(k)});
  return report;
}

void write_clt_report(std::ostream& out, const CltReport& report) {
  out << "# schema=clt-report/1\n";
  out << "level,sample_mean,expected,relative_difference,marginal_sw_p\n";
  for (std::size_t c = 0; c < report.levels.size(); ++c) {
    out << csv_number(report.levels[c]) << ',' << csv_number(report.sample_means[c]) << ','
        << csv_number(report.expected[c]) << ','
        << csv_number(report.sample_means[c] / report.expected[c] - 1.0) << ','
        << csv_number(report.marginal_sw_p[c]) << '\n';
  }
  out << "# multivariate_sw_p=" << csv_number(report.multivariate_sw_p) << '\n';
  out << "# mean_mahalanobis_sq=" << csv_number(report.mean_mahalanobis) << '\n';
}

std::map<int, int> select_m_histogram(const ExperimentResult& result) {
  std::map<int, int> hist;
  for (const auto& row : result.rows)
    if (row.estimator == estimator_id::kP2Auto && row.m > 0) ++hist[row.m];
  return hist;
}

}  // namespace excursion::experiments
