#include "chb/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace chb {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

ParsedConfig load_config(const std::string& path) {
  if (path.empty()) return ParsedConfig{};
  return parse_config_file(path);
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Mono: return "mono";
    case Scheme::Split2: return "split2";
    case Scheme::Split3: return "split3";
  }
  return "?";
}

std::string time_disc_name(TimeDisc d) {
  return d == TimeDisc::SemiImplicit ? "semi" : "implicit";
}

void write_steps_csv(const RunRecord& rec, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "step,time,E_total,E_interface,E_elastic,E_fluid,outer_iters,"
         "converged,wall_s\n";
  for (const StepRow& r : rec.steps) {
    out << r.step << ',' << fmt(r.time) << ',' << fmt(r.energy.total) << ','
        << fmt(r.energy.interface) << ',' << fmt(r.energy.elastic) << ','
        << fmt(r.energy.fluid) << ',' << r.outer_iterations << ','
        << (r.converged ? 1 : 0) << ',' << fmt(r.wall_seconds) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

void write_iters_csv(const RunRecord& rec, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "step,iter,increment_norm_sq,potential\n";
  for (std::size_t s = 0; s < rec.traces.size(); ++s) {
    for (std::size_t i = 0; i < rec.traces[s].size(); ++i) {
      const IterationTrace& tr = rec.traces[s][i];
      out << (s + 1) << ',' << (i + 1) << ',' << fmt(tr.increment_norm_sq)
          << ',';
      if (tr.has_potential) out << fmt(tr.potential);
      out << '\n';
    }
  }
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

int cmd_run(const RunOptions& opt) {
  try {
    ParsedConfig cfg = load_config(opt.config_path);
    cfg.solver.scheme = opt.scheme;
    cfg.solver.time_disc = opt.time_disc;
    cfg.solver.trace_iterations = opt.trace_iters;
    cfg.solver.trace_potential = opt.trace_potential;
    if (opt.steps_override >= 0) cfg.solver.n_steps = opt.steps_override;

    const Mesh mesh = build_mesh(cfg.mesh_n);
    const SourceData src = make_sources(mesh, cfg);
    const RunRecord rec = run_simulation(mesh, cfg.params, src, cfg.solver);

    std::filesystem::create_directories(opt.out_dir);
    const std::filesystem::path dir(opt.out_dir);
    write_steps_csv(rec, (dir / "steps.csv").string());
    if (opt.trace_iters || opt.trace_potential)
      write_iters_csv(rec, (dir / "iters.csv").string());
    export_fields(mesh, rec.final_state, (dir / "final.csv").string(),
                  ExportFormat::Csv);

    if (rec.aborted) {
      std::cerr << "run aborted at step " << rec.steps.size() << ": "
                << rec.error << "\n";
      return 1;
    }
    return rec.all_converged ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const SweepOptions& opt) {
  try {
    const ParsedConfig base = load_config(opt.config_path);
    std::vector<double> values = opt.values;
    if (values.empty()) {
      if (opt.param == "gamma")
        values = {0.25, 0.5, 1.0, 2.0, 4.0};
      else if (opt.param == "xi")
        values = {0.0625, 0.125, 0.25, 0.5};
      else
        throw std::runtime_error("unknown sweep parameter '" + opt.param +
                                 "' (expected gamma or xi)");
    }
    if (opt.param != "gamma" && opt.param != "xi")
      throw std::runtime_error("unknown sweep parameter '" + opt.param +
                               "' (expected gamma or xi)");
    std::vector<Scheme> schemes = opt.schemes;
    if (schemes.empty()) schemes = {Scheme::Split2};
    std::vector<TimeDisc> discs = opt.time_discs;
    if (discs.empty()) discs = {TimeDisc::SemiImplicit};

    const Mesh mesh = build_mesh(base.mesh_n);
    const SourceData src = make_sources(mesh, base);

    std::filesystem::create_directories(opt.out_dir);
    std::ofstream out =
        open_out((std::filesystem::path(opt.out_dir) / "sweep.csv").string());
    out << "parameter,value,scheme,time_disc,total_outer_iterations,"
           "total_wall_time_s,all_converged\n";

    bool any_soft_fail = false;
    for (double value : values)
      for (Scheme scheme : schemes)
        for (TimeDisc disc : discs) {
          ParsedConfig cfg = base;
          if (opt.param == "gamma")
            cfg.params.gamma = value;
          else
            cfg.params.xi = value;
          cfg.solver.scheme = scheme;
          cfg.solver.time_disc = disc;
          int total = 0;
          double wall = 0.0;
          bool ok = false;
          try {
            const RunRecord rec =
                run_simulation(mesh, cfg.params, src, cfg.solver);
            total = rec.total_outer_iterations();
            wall = rec.wall_total;
            ok = rec.all_converged && !rec.aborted;
          } catch (const std::exception& e) {
            std::cerr << "sweep entry " << opt.param << "=" << value << " "
                      << scheme_name(scheme) << "/" << time_disc_name(disc)
                      << " failed: " << e.what() << "\n";
          }
          if (!ok) any_soft_fail = true;
          out << opt.param << ',' << fmt(value) << ',' << scheme_name(scheme)
              << ',' << time_disc_name(disc) << ',' << total << ','
              << fmt(wall) << ',' << (ok ? 1 : 0) << '\n';
        }
    if (!out.flush())
      throw std::runtime_error("write failed: sweep.csv");
    return any_soft_fail ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_export(const ExportOptions& opt) {
  try {
    ParsedConfig cfg = load_config(opt.config_path);
    cfg.solver.scheme = opt.scheme;
    cfg.solver.time_disc = opt.time_disc;
    cfg.solver.n_steps = opt.at_step;

    const Mesh mesh = build_mesh(cfg.mesh_n);
    const SourceData src = make_sources(mesh, cfg);
    const RunRecord rec = run_simulation(mesh, cfg.params, src, cfg.solver);
    export_fields(mesh, rec.final_state, opt.out_path, opt.format);
    if (rec.aborted) {
      std::cerr << "run aborted: " << rec.error << "\n";
      return 1;
    }
    return rec.all_converged ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chb
