#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <variant>

#include "qbinom/qoracle.hpp"

namespace qbinom::cli {

namespace {

using qmodel::Detection;
using qmodel::DensityMatrix;
using qmodel::Plant;
using qmodel::TimeGrid;
using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr double kOracleFilterTolerance = 1e-10;
constexpr double kOracleKrausTolerance = 1e-11;
constexpr double kOracleNondemolitionTolerance = 1e-10;
constexpr double kOracleTotalTolerance = 1e-12;
constexpr std::size_t kOracleMaxSteps = 8;
constexpr std::size_t kNondemolitionMaxSteps = 6;

const char* const kColumnsHelp =
    "Output columns (CSV header order; JSON rows carry the same keys):\n"
    "  master    l,t,z                           rows l = 0..k\n"
    "  simulate  path,l,t,dy,u,innovation,z,x,rho00_re,rho01_re,rho01_im,rho11_re\n"
    "                                            one block per path, rows l = 1..k\n"
    "  lyapunov  '# key=value' lines for delta, delta_residual, drift_max, drift_mismatch and\n"
    "            drift_theta_points, then the simulate columns\n"
    "  dp        theta,l,V,g_star                l = 0 first, then --slices ascending;\n"
    "                                            g_star is empty on the terminal slice l = k\n"
    "  oracle    JSON report: records of length k with probability and conditional state\n"
    "            (null on null records), max deviations, thresholds, pass\n"
    "CSV numbers carry 17 significant digits; JSON numbers use the shortest exact round-trip form.\n"
    "dy is +-lambda (homodyne) or 0/1 (counting).\n"
    "Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 validation or threshold failure.";

using Cell = std::variant<std::monostate, long long, double, std::string>;

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return "";
}

Json cell_json(const Cell& c) {
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

// Streams a table as CSV (optional '# key=value' preamble, header, rows) or as one JSON
// object {meta..., "columns": [...], "rows": [{...}, ...]}.
class TableWriter {
 public:
  TableWriter(std::ostream& os, Format format, std::vector<std::string> columns, Json meta = Json::object())
      : os_(os), format_(format), columns_(std::move(columns)) {
    if (format_ == Format::csv) {
      for (const auto& [key, value] : meta.items()) {
        os_ << "# " << key << '=' << (value.is_number_float() ? format_double(value.get<double>()) : value.dump())
            << '\n';
      }
      for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
      os_ << '\n';
    } else {
      meta["columns"] = columns_;
      std::string head = meta.dump();
      head.pop_back();
      os_ << head << ",\"rows\":[";
    }
  }

  void row(const std::vector<Cell>& cells) {
    if (format_ == Format::csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cell_text(cells[i]);
      os_ << '\n';
    } else {
      Json r = Json::object();
      for (std::size_t i = 0; i < cells.size(); ++i) r[columns_[i]] = cell_json(cells[i]);
      os_ << (first_ ? "\n" : ",\n") << r.dump();
      first_ = false;
    }
  }

  void finish() {
    if (format_ == Format::json) os_ << (first_ ? "]}\n" : "\n]}\n");
  }

 private:
  std::ostream& os_;
  Format format_;
  std::vector<std::string> columns_;
  bool first_ = true;
};

const std::vector<std::string> kTrajectoryColumns{"path", "l", "t", "dy", "u", "innovation", "z", "x",
                                                  "rho00_re", "rho01_re", "rho01_im", "rho11_re"};

double parse_real(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    throw ConfigError(what + ": cannot parse '" + std::string(s) + "' as a number");
  }
  return v;
}

double parse_angle(std::string_view s) {
  double sign = 1.0;
  if (!s.empty() && s.front() == '-') {
    sign = -1.0;
    s.remove_prefix(1);
  }
  if (s == "pi") return sign * kPi;
  if (s.starts_with("pi/")) return sign * kPi / parse_real(s.substr(3), "--init");
  if (s.ends_with("*pi")) return sign * parse_real(s.substr(0, s.size() - 3), "--init") * kPi;
  return sign * parse_real(s, "--init");
}

bool is_controlled(const std::string& model) { return model == "controlled-dispersive"; }

std::string record_string(const qoracle::Record& r) {
  std::string s;
  for (std::uint8_t o : r) s.push_back(o ? '1' : '0');
  return s;
}

std::size_t horizon_steps(const RunConfig& c) {
  if (!(c.horizon >= 0.0) || !std::isfinite(c.horizon)) throw ConfigError("--horizon must be a nonnegative number");
  if (c.horizon == 0.0) return 0;
  const double steps = std::round(c.horizon * static_cast<double>(c.lambda_sq_inv));
  if (steps < 1.0) throw ConfigError("--horizon is shorter than one time slice");
  return static_cast<std::size_t>(steps);
}

void write_trajectories(const Plant& plant, const qfilter::SeparatedStrategy& strategy, Detection d,
                        const DensityMatrix& rho0, const ResolvedConfig& config, TableWriter& table) {
  const std::size_t paths = config.raw.paths;
  for (std::size_t start = 0; start < paths; start += qfilter::kPathBlock) {
    const std::size_t count = std::min(qfilter::kPathBlock, paths - start);
    std::vector<qfilter::Trajectory> block(count);
    qfilter::parallel_for(count, config.raw.workers, [&](std::size_t i) {
      block[i] = qfilter::sample_trajectory(plant, strategy, d, rho0, config.raw.seed, start + i);
    });
    for (const qfilter::Trajectory& tr : block) {
      for (const qfilter::TrajectoryStep& s : tr.steps) {
        table.row({static_cast<long long>(tr.path), static_cast<long long>(s.l), s.t, s.dy, s.u, s.innovation,
                   s.rho.z(), s.rho.x(), s.rho(0, 0).real(), s.rho(0, 1).real(), s.rho(0, 1).imag(),
                   s.rho(1, 1).real()});
      }
    }
  }
}

std::shared_ptr<const qcontrol::ValueFunctionTable> solve_dp(const ResolvedConfig& config, const Plant& plant) {
  const qcontrol::ControlGrid grid(config.raw.u_max, config.raw.u_points, config.theta_points);
  const qcontrol::TransitionTable table(plant, grid.controls(), grid.theta_points(), config.raw.workers);
  return std::make_shared<const qcontrol::ValueFunctionTable>(
      qcontrol::bellman_sweep(table, qcontrol::named_cost(config.raw.cost, config.raw.C, config.raw.D),
                              config.raw.workers));
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::master:
      return "master";
    case Command::simulate:
      return "simulate";
    case Command::dp:
      return "dp";
    case Command::oracle:
      return "oracle";
    case Command::lyapunov:
      return "lyapunov";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::master, Command::simulate, Command::dp, Command::oracle, Command::lyapunov})
    if (s == command_name(c)) return c;
  throw ConfigError("unknown command '" + s + "'");
}

DensityMatrix parse_init(const std::string& s) {
  if (s == "excited") return DensityMatrix::excited();
  if (s == "ground") return DensityMatrix::ground();
  if (s == "mixed") return DensityMatrix::mixed();
  if (s.starts_with("theta:")) return qcontrol::circle_to_density(parse_angle(std::string_view(s).substr(6)));
  throw ConfigError("--init must be excited, ground, mixed or theta:<angle>, got '" + s + "'");
}

ResolvedConfig resolve(const RunConfig& c) {
  ResolvedConfig r;
  r.raw = c;
  const Command cmd = c.command;
  const bool control_command = cmd == Command::dp || cmd == Command::lyapunov;

  if (c.lambda_sq_inv < 1) throw ConfigError("--lambda-sq-inv must be a positive integer");
  r.steps = horizon_steps(c);
  if (c.paths < 1) throw ConfigError("--paths must be at least 1");
  if (c.workers < 1) throw ConfigError("--workers must be at least 1");

  r.model = c.model.value_or(control_command ? "controlled-dispersive" : "spontaneous");
  if (r.model != "spontaneous" && r.model != "dispersive" && r.model != "trivial" && !is_controlled(r.model)) {
    throw ConfigError("unknown model '" + r.model + "'");
  }
  if (control_command && !is_controlled(r.model)) {
    throw ConfigError(std::string(command_name(cmd)) + " requires --model controlled-dispersive");
  }
  if (control_command && c.detection != Detection::homodyne) {
    throw ConfigError(std::string(command_name(cmd)) + " supports homodyne detection only");
  }

  r.init = c.init.value_or(cmd == Command::lyapunov ? "theta:pi" : "excited");
  parse_init(r.init);

  if (cmd == Command::dp) {
    if (c.strategy) throw ConfigError("dp does not take --strategy");
    r.strategy = "zero";
  } else if (cmd == Command::lyapunov) {
    if (c.strategy && *c.strategy != "lyapunov") throw ConfigError("lyapunov always runs the lyapunov strategy");
    r.strategy = "lyapunov";
  } else {
    r.strategy = c.strategy.value_or("zero");
  }
  const std::string& s = r.strategy;
  const bool known = s == "zero" || s == "lyapunov" || s == "dp" || s.starts_with("constant:");
  if (!known) throw ConfigError("--strategy must be zero, constant:<u>, lyapunov or dp, got '" + s + "'");
  if (s.starts_with("constant:")) parse_real(std::string_view(s).substr(9), "--strategy");
  if (s != "zero" && !is_controlled(r.model)) {
    throw ConfigError("--strategy " + s + " needs a controlled model (controlled-dispersive)");
  }
  if (cmd == Command::master && (s == "lyapunov" || s == "dp")) {
    throw ConfigError("master accepts only open-loop strategies (zero, constant:<u>)");
  }
  if (s == "dp" && c.detection != Detection::homodyne) {
    throw ConfigError("--strategy dp is tabulated for homodyne detection");
  }

  try {
    const qcontrol::CostSpec cost = qcontrol::named_cost(c.cost, c.C, c.D);
    cost.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  r.theta_points = c.theta_points.value_or(cmd == Command::lyapunov ? 10000 : 100000);
  if (cmd == Command::dp || s == "dp") {
    if (!(c.u_max > 0.0)) throw ConfigError("--u-max must be positive");
    try {
      qcontrol::ControlGrid(c.u_max, c.u_points, r.theta_points);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (r.theta_points < 1) throw ConfigError("--theta-points must be positive");
  if (cmd == Command::dp) {
    for (std::size_t l : c.slices)
      if (l > r.steps) throw ConfigError("--slices entry " + std::to_string(l) + " exceeds k = " + std::to_string(r.steps));
  } else if (!c.slices.empty()) {
    throw ConfigError("--slices applies to dp only");
  }

  if (cmd == Command::oracle) {
    if (c.k < 1 || c.k > kOracleMaxSteps) throw ConfigError("--k must lie in 1..8");
    r.steps = c.k;
  }
  r.format = c.format.value_or(cmd == Command::oracle ? Format::json : Format::csv);
  if (cmd == Command::oracle && r.format != Format::json) throw ConfigError("oracle writes a JSON report only");
  return r;
}

Plant make_plant(const std::string& model, const TimeGrid& grid) {
  if (is_controlled(model)) return qcontrol::controlled_dispersive(grid);
  return Plant::named(qmodel::parse_model_name(model), grid);
}

qfilter::SeparatedStrategy make_strategy(const ResolvedConfig& config, const Plant& plant) {
  const std::string& s = config.strategy;
  if (s == "zero") return qcontrol::zero_strategy();
  if (s.starts_with("constant:")) return qcontrol::constant_strategy(parse_real(std::string_view(s).substr(9), "--strategy"));
  if (s == "lyapunov") return qcontrol::lyapunov_strategy(qcontrol::lyapunov_delta(plant.grid()).delta);
  if (s == "dp") return qcontrol::dp_strategy(solve_dp(config, plant));
  throw ConfigError("unknown strategy '" + s + "'");
}

void write_master(const ResolvedConfig& config, std::ostream& os) {
  TableWriter table(os, config.format, {"l", "t", "z"});
  if (config.steps > 0) {
    const TimeGrid grid = TimeGrid::from_steps(config.steps, static_cast<double>(config.raw.lambda_sq_inv));
    const Plant plant = make_plant(config.model, grid);
    const double u = make_strategy(config, plant)(1, parse_init(config.init));
    const std::vector<double> z = qfilter::master_curve_z(plant.coefficients(u), parse_init(config.init), grid.k());
    for (std::size_t l = 0; l <= grid.k(); ++l) table.row({static_cast<long long>(l), grid.time(l), z[l]});
  }
  table.finish();
}

void write_simulate(const ResolvedConfig& config, std::ostream& os) {
  TableWriter table(os, config.format, kTrajectoryColumns);
  if (config.steps > 0) {
    const TimeGrid grid = TimeGrid::from_steps(config.steps, static_cast<double>(config.raw.lambda_sq_inv));
    const Plant plant = make_plant(config.model, grid);
    write_trajectories(plant, make_strategy(config, plant), config.raw.detection, parse_init(config.init), config,
                       table);
  }
  table.finish();
}

void write_dp(const ResolvedConfig& config, std::ostream& os) {
  TableWriter table(os, config.format, {"theta", "l", "V", "g_star"});
  if (config.steps > 0) {
    const TimeGrid grid = TimeGrid::from_steps(config.steps, static_cast<double>(config.raw.lambda_sq_inv));
    const Plant plant = make_plant(config.model, grid);
    const auto v = solve_dp(config, plant);
    std::set<std::size_t> later(config.raw.slices.begin(), config.raw.slices.end());
    later.erase(0);
    std::vector<std::size_t> slices{0};
    slices.insert(slices.end(), later.begin(), later.end());
    for (std::size_t l : slices) {
      for (std::size_t i = 0; i < v->theta_points(); ++i) {
        Cell g;
        if (l < v->k()) g = v->control(l, i);
        table.row({v->theta(i), static_cast<long long>(l), v->value(l, i), g});
      }
    }
  }
  table.finish();
}

int write_oracle(const ResolvedConfig& config, std::ostream& os, std::ostream& err) {
  const std::size_t k = config.steps;
  const Detection d = config.raw.detection;
  const TimeGrid grid = TimeGrid::from_steps(k, static_cast<double>(config.raw.lambda_sq_inv));
  const Plant plant = make_plant(config.model, grid);
  const DensityMatrix rho0 = parse_init(config.init);
  const qfilter::SeparatedStrategy g = make_strategy(config, plant);
  const qoracle::RecordStrategy rs = qoracle::as_record_strategy(plant, g, d, rho0);
  const auto history = qoracle::full_space_oracle_history(plant, rs, k, d, rho0);

  struct Worst {
    double value = 0.0;
    std::string record;
    void update(double v, const qoracle::Record& r) {
      if (v > value) {
        value = v;
        record = record_string(r);
      }
    }
  };
  Worst filter;
  Worst kraus;
  double total_error = 0.0;
  for (const qoracle::RecordTable& table : history) {
    total_error = std::max(total_error, std::abs(table.total_probability() - 1.0));
    const qoracle::RecordTable chain = qoracle::enumerate_records(plant, rs, d, table.length, rho0);
    for (const qoracle::RecordEntry& e : table.entries) {
      const qoracle::RecordEntry* c = chain.find(e.record);
      double kraus_dev = std::abs((c ? c->probability : 0.0) - e.probability);
      if (c && c->state && e.state) kraus_dev = std::max(kraus_dev, qlin::max_abs_diff(c->state->op(), e.state->op()));
      kraus.update(kraus_dev, e.record);
      if (!e.state) continue;
      DensityMatrix rho = rho0;
      double probability = 1.0;
      for (std::size_t i = 0; i < e.record.size(); ++i) {
        const qmodel::ModelCoefficients coeffs = plant.coefficients(g(i + 1, rho));
        const double p_plus = qfilter::observation_probability(rho, coeffs, d);
        probability *= e.record[i] ? p_plus : 1.0 - p_plus;
        rho = qfilter::nonlinear_step(rho, e.record[i], coeffs, d);
      }
      filter.update(std::max(std::abs(probability - e.probability), qlin::max_abs_diff(rho.op(), e.state->op())),
                    e.record);
    }
  }

  Json nondemolition = nullptr;
  const std::size_t nd_steps = std::min(k, kNondemolitionMaxSteps);
  if (!plant.is_controlled() || config.strategy == "zero") {
    nondemolition = qoracle::nondemolition_check(
        plant, nd_steps, d, {qlin::pauli::sigma_x(), qlin::pauli::sigma_y(), qlin::pauli::sigma_z()});
  }

  Json records = Json::array();
  for (const qoracle::RecordEntry& e : history.back().entries) {
    Json entry = {{"record", record_string(e.record)}, {"probability", e.probability}};
    entry["state"] = nullptr;
    if (e.state) {
      const DensityMatrix& r = *e.state;
      entry["state"] = {{"rho00_re", r(0, 0).real()},
                        {"rho01_re", r(0, 1).real()},
                        {"rho01_im", r(0, 1).imag()},
                        {"rho11_re", r(1, 1).real()}};
    }
    records.push_back(std::move(entry));
  }
  const bool filter_ok = filter.value <= kOracleFilterTolerance;
  const bool kraus_ok = kraus.value <= kOracleKrausTolerance;
  const bool nd_ok = nondemolition.is_null() || nondemolition.get<double>() <= kOracleNondemolitionTolerance;
  const bool total_ok = total_error <= kOracleTotalTolerance;

  Json report = Json::object();
  report["command"] = "oracle";
  report["model"] = config.model;
  report["detection"] = qmodel::to_string(d);
  report["lambda_sq_inv"] = config.raw.lambda_sq_inv;
  report["k"] = k;
  report["init"] = config.init;
  report["strategy"] = config.strategy;
  report["records"] = std::move(records);
  report["total_probability"] = history.back().total_probability();
  report["max_total_probability_error"] = total_error;
  report["filter_vs_oracle_max"] = filter.value;
  report["filter_vs_oracle_record"] = filter.record;
  report["kraus_vs_fullspace_max"] = kraus.value;
  report["kraus_vs_fullspace_record"] = kraus.record;
  report["nondemolition_k"] = nd_steps;
  report["nondemolition_max_commutator"] = nondemolition;
  report["thresholds"] = {{"filter_vs_oracle", kOracleFilterTolerance},
                          {"kraus_vs_fullspace", kOracleKrausTolerance},
                          {"nondemolition", kOracleNondemolitionTolerance},
                          {"total_probability", kOracleTotalTolerance}};
  report["pass"] = filter_ok && kraus_ok && nd_ok && total_ok;
  os << report.dump(2) << '\n';

  if (report["pass"].get<bool>()) return kExitOk;
  if (!filter_ok) {
    err << "oracle: filter vs oracle deviation " << format_double(filter.value) << " exceeds "
        << kOracleFilterTolerance << " on record " << filter.record << '\n';
  }
  if (!kraus_ok) {
    err << "oracle: Kraus vs full-space deviation " << format_double(kraus.value) << " exceeds "
        << kOracleKrausTolerance << " on record " << kraus.record << '\n';
  }
  if (!nd_ok) err << "oracle: nondemolition commutator " << format_double(nondemolition.get<double>()) << " too large\n";
  if (!total_ok) err << "oracle: record probabilities miss 1 by " << format_double(total_error) << '\n';
  return kExitValidation;
}

void write_lyapunov(const ResolvedConfig& config, std::ostream& os) {
  const double lam_sq_inv = static_cast<double>(config.raw.lambda_sq_inv);
  const TimeGrid grid = TimeGrid::from_steps(std::max<std::size_t>(config.steps, 1), lam_sq_inv);
  const Plant plant = make_plant(config.model, grid);
  const qcontrol::LyapunovThreshold delta = qcontrol::lyapunov_delta(grid);
  const qcontrol::LyapunovDriftReport drift = qcontrol::lyapunov_drift_grid(plant, delta.delta, config.theta_points);
  Json meta = Json::object();
  meta["delta"] = delta.delta;
  meta["delta_residual"] = delta.residual;
  meta["drift_max"] = drift.max_drift;
  meta["drift_mismatch"] = drift.max_mismatch;
  meta["drift_theta_points"] = config.theta_points;
  TableWriter table(os, config.format, kTrajectoryColumns, std::move(meta));
  if (config.steps > 0) {
    write_trajectories(plant, qcontrol::lyapunov_strategy(delta.delta), Detection::homodyne, parse_init(config.init),
                       config, table);
  }
  table.finish();
}

int run_command(const ResolvedConfig& config, std::ostream& os, std::ostream& err) {
  switch (config.raw.command) {
    case Command::master:
      write_master(config, os);
      return kExitOk;
    case Command::simulate:
      write_simulate(config, os);
      return kExitOk;
    case Command::dp:
      write_dp(config, os);
      return kExitOk;
    case Command::oracle:
      return write_oracle(config, os, err);
    case Command::lyapunov:
      write_lyapunov(config, os);
      return kExitOk;
  }
  return kExitConfig;
}

RunConfig parse_command_line(int argc, const char* const* argv, std::ostream& help_out) {
  RunConfig c;
  CLI::App app{"Discrete-time quantum filtering and feedback control of a two-level atom.", "qbinom"};
  app.footer(kColumnsHelp);
  app.set_config("--config", "", "Read key=value settings from a file; flags given on the command line win");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string command;
  std::string model, detection = "homodyne", init, strategy, format;
  std::size_t theta_points = 0;
  app.add_option("command", command, "master | simulate | dp | oracle | lyapunov")
      ->required()
      ->check(CLI::IsMember({"master", "simulate", "dp", "oracle", "lyapunov"}));
  auto* model_opt = app.add_option("--model", model, "spontaneous | dispersive | controlled-dispersive | trivial");
  app.add_option("--detection", detection, "homodyne | counting")->check(CLI::IsMember({"homodyne", "counting"}));
  app.add_option("--lambda-sq-inv", c.lambda_sq_inv, "Slices per unit time, lambda^-2")->capture_default_str();
  app.add_option("--horizon", c.horizon, "Final time T; k = round(T lambda^-2)")->capture_default_str();
  app.add_option("--paths", c.paths, "Number of sampled paths")->capture_default_str();
  app.add_option("--seed", c.seed, "Base seed of the per-path random streams")->capture_default_str();
  auto* init_opt = app.add_option("--init", init, "excited | ground | mixed | theta:<angle> (angle may use pi)");
  auto* strategy_opt = app.add_option("--strategy", strategy, "zero | constant:<u> | lyapunov | dp");
  app.add_option("--cost", c.cost, "energy | target45")->capture_default_str();
  app.add_option("--C", c.C, "Control-effort weight C")->capture_default_str();
  app.add_option("--D", c.D, "State-penalty weight D")->capture_default_str();
  app.add_option("--u-max", c.u_max, "Control grid half-width")->capture_default_str();
  app.add_option("--u-points", c.u_points, "Control grid size")->capture_default_str();
  auto* theta_opt = app.add_option("--theta-points", theta_points, "Angle grid size (dp 100000, lyapunov 10000)");
  app.add_option("--k", c.k, "Oracle record length (1..8)")->capture_default_str();
  app.add_option("--slices", c.slices, "dp: extra time slices to emit besides l = 0")->delimiter(',');
  app.add_option("--out", c.out, "Output path (default: standard output)");
  auto* format_opt = app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", c.workers, "Worker threads; results do not depend on it")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, help_out, help_out);
    throw HelpRequested();
  } catch (const CLI::FileError& e) {
    throw IoError(e.what());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  c.command = parse_command(command);
  if (model_opt->count()) c.model = model;
  c.detection = qmodel::parse_detection(detection);
  if (init_opt->count()) c.init = init;
  if (strategy_opt->count()) c.strategy = strategy;
  if (theta_opt->count()) c.theta_points = theta_points;
  if (format_opt->count()) c.format = format == "json" ? Format::json : Format::csv;
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const ResolvedConfig config = resolve(parse_command_line(argc, argv, out));
    if (config.raw.out.empty()) {
      const int code = run_command(config, out, err);
      out.flush();
      return code;
    }
    std::ofstream file(config.raw.out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + config.raw.out + "' for writing");
    const int code = run_command(config, file, err);
    file.close();
    if (!file) throw IoError("failed writing '" + config.raw.out + "'");
    return code;
  } catch (const HelpRequested&) {
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "qbinom: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "qbinom: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "qbinom: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "qbinom: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "qbinom: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace qbinom::cli
