// infdim: truncate inverse problems A f = g, sweep N and report error/residual behaviour.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "infdim/cli/runner.hpp"

namespace {

enum Exit { ok = 0, demo_failed = 1, config_error = 2, capability_error = 3 };

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw infdim::cli::ConfigError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace infdim::cli;
  CLI::App app{"Truncation experiments for inverse linear problems on infinite-dimensional Hilbert spaces"};
  app.require_subcommand(1);

  std::string config_arg, n_list, solver, out, demo_name;
  double tol = 0.0;
  bool gnuplot = false, print_only = false;

  auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file or a preset name");
  run_cmd->add_option("config", config_arg, "config file path or preset name")->required();
  run_cmd->add_option("--n-list", n_list, "override N list, e.g. 2..100, 0..2000:10 or 4,10,50");
  run_cmd->add_option("--solver", solver, "override solver: qr | gmres | cg");
  run_cmd->add_option("--tol", tol, "override solver tolerance");
  run_cmd->add_option("--out", out, "CSV output path ('-' for stdout); overrides [output] csv");
  run_cmd->add_flag("--gnuplot", gnuplot, "also write <csv>.gp plotting the series");
  run_cmd->add_flag("--print-config", print_only, "print the effective config and exit");

  auto* demo_cmd = app.add_subcommand("demo", "run a demonstration and write a pass/fail report");
  demo_cmd->add_option("name", demo_name, "bad-truncation | pathological-family | shift-weak-residual")->required();
  demo_cmd->add_option("--out", out, "report path (default stdout)");

  app.add_subcommand("list-presets", "list presets, operators, bases, data specs and demos");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }

  try {
    if (app.got_subcommand("list-presets")) {
      std::cout << list_presets();
      return ok;
    }
    if (app.got_subcommand("demo")) {
      const DemoReport r = run_demo(demo_name);
      write_text(out, r.text);
      return r.pass ? ok : demo_failed;
    }

    ExperimentConfig cfg;
    if (std::filesystem::exists(config_arg)) {
      cfg = load_config(config_arg);
    } else if (const Preset* p = find_preset(config_arg)) {
      cfg = p->config;
    } else {
      throw ConfigError("no config file or preset named '" + config_arg + "'");
    }
    if (!n_list.empty()) cfg.n_list = parse_n_list(n_list);
    if (!solver.empty()) cfg.solver = solver;
    if (run_cmd->count("--tol")) cfg.tol = tol;
    if (!out.empty()) cfg.csv = out;
    if (print_only) {
      std::cout << print_config(cfg);
      return ok;
    }
    prepare(cfg);
    const RunOutput r = run(cfg);
    const std::string path = cfg.csv.empty() ? "-" : cfg.csv;
    write_text(path, r.csv);
    if (gnuplot && path != "-") write_text(path + ".gp", gnuplot_script(path, cfg.noise_mode()));
    if (path != "-") std::cerr << "wrote " << path << " (" << (r.records.size() + r.noise.size()) << " rows)\n";
    return ok;
  } catch (const infdim::CapabilityError& e) {
    std::cerr << "capability mismatch: " << e.what() << '\n';
    return capability_error;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const infdim::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
