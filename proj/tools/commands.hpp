#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbinom/qcontrol.hpp"
#include "qbinom/qfilter.hpp"
#include "qbinom/qmodel.hpp"

namespace qbinom::cli {

enum class Command { master, simulate, dp, oracle, lyapunov };
enum class Format { csv, json };

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIo = 2, kExitValidation = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by parse_command_line after printing --help.
class HelpRequested : public std::runtime_error {
 public:
  HelpRequested() : std::runtime_error("help requested") {}
};

// Every run parameter. Unset optionals take the per-command default in resolve().
struct RunConfig {
  Command command = Command::simulate;
  std::optional<std::string> model;
  qmodel::Detection detection = qmodel::Detection::homodyne;
  long long lambda_sq_inv = 300;
  double horizon = 3.0;
  std::size_t paths = 1;
  std::uint64_t seed = 1;
  std::optional<std::string> init;
  std::optional<std::string> strategy;
  std::string cost = "energy";
  double C = 0.25;
  double D = 5.0;
  double u_max = 10.0;
  std::size_t u_points = 400;
  std::optional<std::size_t> theta_points;
  std::size_t k = 6;
  std::vector<std::size_t> slices;
  std::string out;  // empty writes to standard output
  std::optional<Format> format;
  unsigned workers = 1;
};

// A RunConfig with every default filled in and every value checked.
struct ResolvedConfig {
  RunConfig raw;
  std::string model;
  std::string init;
  std::string strategy;
  std::size_t theta_points = 0;
  Format format = Format::csv;
  std::size_t steps = 0;  // k = round(T lambda^-2); the oracle uses --k instead
};

const char* command_name(Command c);
Command parse_command(const std::string& s);

// Parses `excited`, `ground`, `mixed` or `theta:<angle>`; the angle accepts `pi`, `pi/<x>` and `<x>*pi`.
qmodel::DensityMatrix parse_init(const std::string& s);

ResolvedConfig resolve(const RunConfig& config);

// CLI11 front end: positional command, flags, and an optional `--config` key=value file
// whose entries are overridden by flags.
RunConfig parse_command_line(int argc, const char* const* argv, std::ostream& help_out);

qmodel::Plant make_plant(const std::string& model, const qmodel::TimeGrid& grid);
qfilter::SeparatedStrategy make_strategy(const ResolvedConfig& config, const qmodel::Plant& plant);

void write_master(const ResolvedConfig& config, std::ostream& os);
void write_simulate(const ResolvedConfig& config, std::ostream& os);
void write_dp(const ResolvedConfig& config, std::ostream& os);
// Returns kExitValidation and describes the offending record on `err` when a threshold is exceeded.
int write_oracle(const ResolvedConfig& config, std::ostream& os, std::ostream& err);
void write_lyapunov(const ResolvedConfig& config, std::ostream& os);

// Runs a resolved command into `os`.
int run_command(const ResolvedConfig& config, std::ostream& os, std::ostream& err);

// Whole program: parse, resolve, open the output, run, and map failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// %.17g
std::string format_double(double v);

}  // namespace qbinom::cli
