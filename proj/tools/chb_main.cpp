#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chb/cli.hpp"

namespace {

chb::Scheme to_scheme(const std::string& s) {
  if (s == "mono") return chb::Scheme::Mono;
  if (s == "split3") return chb::Scheme::Split3;
  return chb::Scheme::Split2;
}

chb::TimeDisc to_disc(const std::string& s) {
  return s == "implicit" ? chb::TimeDisc::Implicit
                         : chb::TimeDisc::SemiImplicit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Cahn-Hilliard-Biot finite element simulator"};
  app.require_subcommand(1);

  chb::RunOptions run_opt;
  std::string run_scheme = "split2", run_disc = "semi";
  CLI::App* run = app.add_subcommand("run", "Run a simulation");
  run->add_option("--config", run_opt.config_path, "Config file path")
      ->required();
  run->add_option("--scheme", run_scheme, "Solution scheme")
      ->check(CLI::IsMember({"mono", "split2", "split3"}));
  run->add_option("--time-disc", run_disc, "Time discretization")
      ->check(CLI::IsMember({"semi", "implicit"}));
  run->add_option("--out", run_opt.out_dir, "Output directory")->required();
  run->add_flag("--trace-iters", run_opt.trace_iters,
                "Write per-iteration increments to iters.csv");
  run->add_flag("--trace-potential", run_opt.trace_potential,
                "Also evaluate the step potential per iteration");
  run->add_option("--steps", run_opt.steps_override,
                  "Override the number of time steps");

  chb::SweepOptions sweep_opt;
  std::vector<std::string> sweep_schemes, sweep_discs;
  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep");
  sweep->add_option("--param", sweep_opt.param, "Swept parameter")
      ->check(CLI::IsMember({"gamma", "xi"}));
  sweep->add_option("--values", sweep_opt.values, "Override sweep values")
      ->delimiter(',');
  sweep->add_option("--schemes", sweep_schemes, "Schemes to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"mono", "split2", "split3"}));
  sweep->add_option("--time-discs", sweep_discs, "Time discretizations")
      ->delimiter(',')
      ->check(CLI::IsMember({"semi", "implicit"}));
  sweep->add_option("--out", sweep_opt.out_dir, "Output directory")
      ->required();
  sweep->add_option("--config", sweep_opt.config_path, "Base config file");

  chb::ExportOptions export_opt;
  std::string export_format = "csv";
  std::string export_scheme = "split2", export_disc = "semi";
  CLI::App* exp = app.add_subcommand("export", "Run and export nodal fields");
  exp->add_option("--config", export_opt.config_path, "Config file path")
      ->required();
  exp->add_option("--at-step", export_opt.at_step,
                  "Number of steps to run before exporting")
      ->check(CLI::NonNegativeNumber);
  exp->add_option("--format", export_format, "Output format")
      ->check(CLI::IsMember({"csv", "vtk-legacy"}));
  exp->add_option("--out", export_opt.out_path, "Output file")->required();
  exp->add_option("--scheme", export_scheme, "Solution scheme")
      ->check(CLI::IsMember({"mono", "split2", "split3"}));
  exp->add_option("--time-disc", export_disc, "Time discretization")
      ->check(CLI::IsMember({"semi", "implicit"}));

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    run_opt.scheme = to_scheme(run_scheme);
    run_opt.time_disc = to_disc(run_disc);
    return chb::cmd_run(run_opt);
  }
  if (sweep->parsed()) {
    for (const std::string& s : sweep_schemes)
      sweep_opt.schemes.push_back(to_scheme(s));
    for (const std::string& d : sweep_discs)
      sweep_opt.time_discs.push_back(to_disc(d));
    return chb::cmd_sweep(sweep_opt);
  }
  export_opt.format = export_format == "vtk-legacy"
                          ? chb::ExportFormat::VtkLegacy
                          : chb::ExportFormat::Csv;
  export_opt.scheme = to_scheme(export_scheme);
  export_opt.time_disc = to_disc(export_disc);
  return chb::cmd_export(export_opt);
}
