#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlbc/scenario.hpp"
#include "nlbc/verify.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> order;
  std::optional<long> cadence;
};

int run_command(const std::string& path, const Overrides& ov) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return nlbc::exit_code::io_error;
  }
  std::stringstream text;
  text << in.rdbuf();

  nlbc::RunConfig cfg;
  try {
    cfg = nlbc::parse_config(text.str());
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.out_dir) cfg.output_dir = *ov.out_dir;
    if (ov.cadence) {
      if (*ov.cadence < 1) throw nlbc::ConfigError("time.cadence", "must be at least 1");
      cfg.cadence = *ov.cadence;
    }
    if (ov.order) {
      if (*ov.order != 2 && *ov.order != 4 && *ov.order != 6)
        throw nlbc::ConfigError("order", "unsupported order " + std::to_string(*ov.order) + " (2, 4 or 6)");
      for (const auto& a : cfg.axes)
        if (a.nodes < nlbc::minimum_nodes(*ov.order))
          throw nlbc::ConfigError("grid.nodes", "order " + std::to_string(*ov.order) + " needs at least " +
                                                    std::to_string(nlbc::minimum_nodes(*ov.order)) + " nodes");
      cfg.order = *ov.order;
    }
  } catch (const nlbc::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return nlbc::exit_code::config_error;
  }

  nlbc::ScenarioOutcome o;
  try {
    o = nlbc::run_scenario(cfg);
  } catch (const nlbc::Error& e) {
    std::cerr << "setup failed: " << e.what() << "\n";
    return nlbc::exit_code::config_error;
  }
  const auto& rep = o.report;
  std::printf("%s: %ld steps, dt %.3e, E0 %.6e -> %.6e\n", cfg.name.c_str(), rep.steps, rep.dt,
              rep.initial_energy, rep.samples.empty() ? rep.initial_energy : rep.samples.back().energy);
  std::printf("bound (%s): %s, margin %.3e at t=%.4g\n",
              o.mode == nlbc::BoundMode::Homogeneous ? "homogeneous" : "inhomogeneous",
              o.verdict.pass ? "pass" : "FAIL", o.verdict.max_violation, o.verdict.at_time);
  std::printf("max energy-rate identity residual %.3e\n", o.max_identity_residual);
  if (rep.abort_message) std::printf("aborted at step %ld: %s\n", rep.abort_step, rep.abort_message->c_str());
  if (o.exit_code == nlbc::exit_code::io_error)
    std::cerr << "could not write " << o.csv_path << " / " << o.json_path << "\n";
  else
    std::printf("wrote %s and %s\n", o.csv_path.c_str(), o.json_path.c_str());
  return o.exit_code;
}

int verify_command(const std::string& selector, const Overrides& ov, int draws) {
  nlbc::VerifyOptions opt;
  if (ov.seed) opt.seed = *ov.seed;
  opt.draws = draws;
  const auto results = nlbc::run_verify(selector, opt);
  int failed = 0;
  std::printf("seed %llu\n", static_cast<unsigned long long>(opt.seed));
  for (const auto& r : results) {
    std::printf("%s  %-12s %-58s %12.4e  (threshold %.1e)%s%s\n", r.pass ? "pass" : "FAIL", r.suite.c_str(),
                r.name.c_str(), r.value, r.threshold, r.detail.empty() ? "" : "  ", r.detail.c_str());
    failed += !r.pass;
  }
  std::printf("%zu checks, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-stable nonlinear boundary conditions on SBP-SAT grids"};
  app.require_subcommand(1);

  Overrides ov;
  std::uint64_t seed = 0;
  std::string out_dir;
  int order = 0;
  long cadence = 0;

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a scenario from a JSON configuration");
  run->add_option("config", config_path, "configuration file")->required();
  run->add_option("--out-dir", out_dir, "directory for the CSV and JSON reports");
  run->add_option("--order", order, "operator order (2, 4 or 6)");
  run->add_option("--cadence", cadence, "monitor every n-th step");
  run->add_option("--seed", seed, "seed for the initial noise");

  std::string selector;
  int draws = 1000;
  std::vector<std::string> choices{"all"};
  for (const auto& [name, fn] : nlbc::verify_suites()) choices.push_back(name);
  auto* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("selector", selector, "suite name or 'all'")->required()->check(CLI::IsMember(choices));
  verify->add_option("--seed", seed, "seed for the random draws");
  verify->add_option("--draws", draws, "random draws per property")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  auto given = [](CLI::App* sub, const char* flag) { return sub->count(flag) > 0; };
  if (run->parsed()) {
    if (given(run, "--seed")) ov.seed = seed;
    if (given(run, "--out-dir")) ov.out_dir = out_dir;
    if (given(run, "--order")) ov.order = order;
    if (given(run, "--cadence")) ov.cadence = cadence;
    return run_command(config_path, ov);
  }
  if (given(verify, "--seed")) ov.seed = seed;
  return verify_command(selector, ov, draws);
}
