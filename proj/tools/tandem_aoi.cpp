// Command-line front end: analytic evaluation, simulation, parameter sweeps
// and a self-check.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "tandem_aoi/nonpreemptive.hpp"
#include "tandem_aoi/preemptive.hpp"
#include "tandem_aoi/report_io.hpp"
#include "tandem_aoi/simulator.hpp"
#include "tandem_aoi/sweep.hpp"
#include "tandem_aoi/verify.hpp"

namespace {

using namespace tandem_aoi;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct GlobalFlags {
  std::optional<double> lambda;
  std::optional<std::string> mu;
  std::optional<std::string> policy;
  std::optional<std::string> scenario;
  std::uint64_t seed = 1;
  std::size_t deliveries = 1000000;
  std::string output;
  std::string format;
};

struct Resolved {
  TandemConfig config;
  Policy policy = Policy::Preemptive;
};

Resolved resolve(const GlobalFlags& flags) {
  io::Scenario s;
  if (flags.scenario) s = io::load_scenario(*flags.scenario);
  if (flags.lambda) s.lambda = *flags.lambda;
  if (flags.mu) s.mu = io::parse_rate_list(*flags.mu);
  if (flags.policy) {
    s.policy = parse_policy(*flags.policy);
    if (!s.policy) throw io::ScenarioError("unknown policy '" + *flags.policy + "'");
  }
  if (!s.lambda) throw io::ScenarioError("no arrival rate given (use --lambda or --scenario)");
  if (!s.mu) throw io::ScenarioError("no service rates given (use --mu or --scenario)");
  Resolved r{TandemConfig{*s.lambda, *s.mu}, s.policy.value_or(Policy::Preemptive)};
  validate(r.config);
  return r;
}

// Writes to --output when given, standard output otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error("cannot open output file " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string format_or(const GlobalFlags& flags, const char* fallback) {
  return flags.format.empty() ? fallback : flags.format;
}

int run_analytic(const GlobalFlags& flags) {
  const Resolved r = resolve(flags);
  const AgeReport report = r.policy == Policy::Preemptive ? preemptive::analyze(r.config)
                                                          : nonpreemptive::analyze(r.config);
  Sink sink(flags.output);
  if (format_or(flags, "json") == "csv") {
    io::write_csv(sink.stream(), report, r.config);
  } else {
    sink.stream() << io::to_json(report, r.config).dump(2) << '\n';
  }
  return 0;
}

int run_simulate(const GlobalFlags& flags) {
  const Resolved r = resolve(flags);
  const auto report = sim::simulate(r.config, r.policy, flags.deliveries, flags.seed);
  Sink sink(flags.output);
  if (format_or(flags, "json") == "csv") {
    io::write_csv(sink.stream(), report, r.config);
  } else {
    sink.stream() << io::to_json(report, r.config).dump(2) << '\n';
  }
  return 0;
}

int run_sweep(const GlobalFlags& flags, const std::string& preset, const std::string& spec_path) {
  sweep::SweepSpec spec;
  if (!spec_path.empty()) {
    spec = sweep::load_sweep_spec(spec_path);
  } else if (preset == "fig3") {
    spec = sweep::fig3_preset();
  } else if (preset.empty()) {
    throw io::ScenarioError("sweep needs --spec <file> or --preset fig3");
  } else {
    throw io::ScenarioError("unknown preset '" + preset + "'");
  }
  const auto rows = sweep::run_sweep(spec);
  Sink sink(flags.output);
  if (format_or(flags, "csv") == "json") {
    sink.stream() << sweep::to_json(rows).dump(2) << '\n';
  } else {
    sweep::write_csv(sink.stream(), rows);
  }
  return 0;
}

int run_verify(const GlobalFlags& flags, const verify::Options& options) {
  const auto checks = verify::run_checks(options);
  Sink sink(flags.output);
  verify::print_table(sink.stream(), checks);
  for (const auto& c : checks)
    if (!c.passed) return kExitVerifyFailed;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peak and mean age of information for tandems of bufferless exponential servers"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--lambda", flags.lambda, "Arrival rate");
  app.add_option("--mu", flags.mu, "Comma-separated service rates, server 1 first");
  app.add_option("--policy", flags.policy, "preemptive | nonpreemptive");
  app.add_option("--scenario", flags.scenario, "JSON scenario file; flags override its fields");
  app.add_option("--seed", flags.seed, "Simulation seed")->capture_default_str();
  app.add_option("--deliveries", flags.deliveries, "Recorded deliveries per simulation")
      ->capture_default_str();
  app.add_option("--output", flags.output, "Output path (default: standard output)");
  app.add_option("--format", flags.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  auto* analytic = app.add_subcommand("analytic", "Evaluate the analytic age metrics");
  auto* simulate = app.add_subcommand("simulate", "Estimate the age metrics by simulation");
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a parameter sweep as CSV");
  std::string preset, spec_path;
  sweep_cmd->add_option("--preset", preset, "Built-in sweep (fig3)");
  sweep_cmd->add_option("--spec", spec_path, "JSON sweep specification");
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check recursions, oracle and simulator");
  verify::Options verify_options;
  verify_cmd->add_flag("--skip-sim", verify_options.skip_sim, "Skip the simulation check");
  verify_cmd->add_option("--inject-fault", verify_options.inject_fault,
                         "Relative perturbation of mu_1 on the recursion side")
      ->group("");
  for (auto* sub : {analytic, simulate, sweep_cmd, verify_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (analytic->parsed()) return run_analytic(flags);
    if (simulate->parsed()) return run_simulate(flags);
    if (sweep_cmd->parsed()) return run_sweep(flags, preset, spec_path);
    return run_verify(flags, verify_options);
  } catch (const HorizonTooSmall& e) {
    std::cerr << "error: HorizonTooSmall: " << e.what() << '\n';
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}
