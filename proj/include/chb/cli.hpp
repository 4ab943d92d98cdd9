#pragma once

#include <string>
#include <vector>

#include "chb/config.hpp"
#include "chb/export.hpp"
#include "chb/solvers.hpp"

namespace chb {

struct RunOptions {
  std::string config_path;
  Scheme scheme = Scheme::Split2;
  TimeDisc time_disc = TimeDisc::SemiImplicit;
  std::string out_dir;
  bool trace_iters = false;
  bool trace_potential = false;
  int steps_override = -1;  // negative: keep the config value
};

struct SweepOptions {
  std::string param = "gamma";  // "gamma" or "xi"
  std::vector<double> values;   // empty: built-in sweep values
  std::vector<Scheme> schemes;  // empty: {Split2}
  std::vector<TimeDisc> time_discs;  // empty: {SemiImplicit}
  std::string out_dir;
  std::string config_path;  // optional base config
};

struct ExportOptions {
  std::string config_path;
  int at_step = 0;
  ExportFormat format = ExportFormat::Csv;
  std::string out_path;
  Scheme scheme = Scheme::Split2;
  TimeDisc time_disc = TimeDisc::SemiImplicit;
};

// Exit codes: 0 all steps converged, 2 at least one flagged step (outputs
// still written), 1 hard failure (I/O, singular matrix, bad arguments).
int cmd_run(const RunOptions& opt);
int cmd_sweep(const SweepOptions& opt);
int cmd_export(const ExportOptions& opt);

std::string scheme_name(Scheme s);
std::string time_disc_name(TimeDisc d);

void write_steps_csv(const RunRecord& rec, const std::string& path);
void write_iters_csv(const RunRecord& rec, const std::string& path);

}  // namespace chb
