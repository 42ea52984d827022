#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "complab/errors.hpp"
#include "complab/report.hpp"
#include "complab/suites.hpp"

namespace {

enum ExitCode { kOk = 0, kChecksFailed = 1, kUsage = 2, kIo = 3, kNumeric = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace complab;
  CLI::App app{"Numerical verification suites for volume and hinge comparison inequalities"};
  app.require_subcommand(1);

  SuiteConfig cli;
  std::string config_path;
  std::string r_grid;
  std::uint64_t seed = 0;

  auto* verify = app.add_subcommand("verify", "Run a verification suite and emit its report");
  verify->add_option("suite", cli.suite, "Suite name (see `complab suites`)")->required();
  verify->add_option("--k", cli.k, "Comparison curvature k");
  verify->add_option("--kbar", cli.kbar, "Model or function curvature kbar");
  verify->add_option("--n", cli.n, "Dimension n >= 2");
  verify->add_option("--m", cli.m, "Matching exponent m >= 1");
  verify->add_option("--r", cli.r, "Single radius");
  verify->add_option("--r-grid", r_grid, "Radius grid LO:HI:N");
  auto* model = verify->add_option("--model", cli.model,
                                   "euclidean, sphere:<kbar>, hyperbolic:<kbar>, rp2, bump");
  auto* profile = verify->add_option("--profile", cli.profile, "Curvature profile CSV (rho,K)");
  model->excludes(profile);
  verify->add_option("--f", cli.function,
                     "sn:<kbar>, psi-counterexample, sinh-counterexample, family, csv:<path>");
  verify->add_option("--hinge", cli.hinge, "Hinge JSON file for the hinge suites");
  verify->add_option("--tol", cli.tol, "Absolute and relative tolerance");
  auto* seed_opt = verify->add_option("--seed", seed, "Seed for randomized draws");
  verify->add_option("--out", cli.out, "Output path (stdout when omitted)");
  verify->add_option("--format", cli.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  verify->add_option("--config", config_path, "JSON config file; flags override its values");

  auto* suites = app.add_subcommand("suites", "List suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (suites->parsed()) {
    for (const auto& name : suite_names()) std::cout << name << '\n';
    return kOk;
  }

  try {
    if (!r_grid.empty()) cli.r_grid = GridSpec::parse(r_grid);
    if (seed_opt->count() > 0) cli.seed = seed;
    SuiteConfig config;
    if (!config_path.empty()) config = SuiteConfig::from_file(config_path);
    config = config.overridden_by(cli);
    const ReportFormat format = parse_format(config.format.value_or("csv"));
    const VerificationReport report = run_suite(config);
    emit_report(report, format, config.out.value_or(""));
    return report.passed() ? kOk : kChecksFailed;
  } catch (const ConfigError& e) {
    std::cerr << "complab: " << e.what() << '\n';
    return kUsage;
  } catch (const FileError& e) {
    std::cerr << "complab: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "complab: " << e.what() << '\n';
    return kNumeric;
  }
}
