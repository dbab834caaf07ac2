// sdct: experiment runner for contact-tracing source detection.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdct/harness.hpp"

using nlohmann::json;

namespace {

struct Overrides {
  std::string config_path;
  std::string model;
  std::vector<std::string> algos;
  std::vector<double> p_i, p_a, p_h;
  std::vector<std::size_t> d_c, d_h, n;
  std::optional<std::size_t> replicates, sg_replicates, threads, ret_runs;
  std::optional<std::uint64_t> seed;
  std::optional<bool> freeze;
  std::string output;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON config with flat keys")
        ->check(CLI::ExistingFile);
    app->add_option("--model", model, "hnm_dde | rbtree_ddenr | ret");
    app->add_option("--algo", algos, "ls, ls+, lsv2, ls+v2, random_dmp, sg (repeatable)");
    app->add_option("--p-i", p_i, "infection probability per contact and day");
    app->add_option("--p-a", p_a, "asymptomatic probability");
    app->add_option("--p-h", p_h, "hospitalization probability of symptomatic cases");
    app->add_option("--d-c", d_c, "external contacts per node");
    app->add_option("--d-h", d_h, "household size minus one");
    app->add_option("--n", n, "population");
    app->add_option("--replicates", replicates);
    app->add_option("--sg-replicates", sg_replicates);
    app->add_option("--seed", seed, "base seed");
    app->add_option("--threads", threads, "worker threads (0: all cores)");
    app->add_option("--ret-runs", ret_runs, "stopped-RET runs per point (model ret)");
    app->add_flag("--freeze,!--no-freeze", freeze, "stop the epidemic while tracing");
    app->add_option("-o,--output", output, "output prefix (default: stdout)");
  }

  sdct::ExperimentConfig build() const {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      j = json::parse(ss.str());
    }
    if (!model.empty()) j["model"] = model;
    if (!algos.empty()) j["algorithms"] = algos;
    if (!p_i.empty()) j["p_i"] = p_i;
    if (!p_a.empty()) j["p_a"] = p_a;
    if (!p_h.empty()) j["p_h"] = p_h;
    if (!d_c.empty()) j["d_c"] = d_c;
    if (!d_h.empty()) j["d_h"] = d_h;
    if (!n.empty()) j["n"] = n;
    if (replicates) j["replicates"] = *replicates;
    if (sg_replicates) j["sg_replicates"] = *sg_replicates;
    if (seed) j["base_seed"] = *seed;
    if (threads) j["threads"] = *threads;
    if (ret_runs) j["ret_runs"] = *ret_runs;
    if (freeze) j["freeze_epidemic"] = *freeze;
    if (!output.empty()) j["output"] = output;
    return sdct::ExperimentConfig::from_json(j.dump());
  }
};

template <class Write>
void emit(const std::string& prefix, const std::string& suffix, Write&& write) {
  if (prefix.empty()) {
    write(std::cout);
    return;
  }
  const auto path = prefix + suffix;
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  write(out);
  std::cerr << "wrote " << path << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source detection via contact tracing: simulations and theory"};
  app.require_subcommand(1);

  Overrides sim_opts, theory_opts;
  auto* simulate = app.add_subcommand("simulate", "run detection algorithms over a grid");
  sim_opts.attach(simulate);
  auto* theory = app.add_subcommand("compare-theory", "analytic predictions against simulation");
  theory_opts.attach(theory);

  std::string summary_path, x_key = "p_a", plot_prefix = "plot";
  auto* plot = app.add_subcommand("plot-data", "reshape a summary CSV into x,mean,lo,hi files");
  plot->add_option("summary", summary_path, "summary CSV from simulate")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("-x,--x", x_key, "swept parameter on the x axis");
  plot->add_option("-o,--output", plot_prefix, "output file prefix");

  std::uint64_t validate_seed = 7;
  auto* validate = app.add_subcommand("validate", "run the built-in invariant checks");
  validate->add_option("--seed", validate_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const auto cfg = sim_opts.build();
      const auto result = sdct::run_experiment(cfg);
      if (!cfg.output.empty()) {
        emit(cfg.output, ".records.csv",
             [&](std::ostream& o) { sdct::write_records_csv(o, result, cfg); });
      }
      emit(cfg.output, ".summary.csv",
           [&](std::ostream& o) { sdct::write_summary_csv(o, result, cfg); });
    } else if (*theory) {
      auto cfg = theory_opts.build();
      const auto rows = sdct::compare_theory(cfg);
      emit(cfg.output, ".theory.csv",
           [&](std::ostream& o) { sdct::write_theory_csv(o, rows, cfg); });
    } else if (*plot) {
      std::ifstream in(summary_path);
      for (const auto& p : sdct::emit_plot_data(in, x_key, plot_prefix)) std::cout << p << '\n';
    } else if (*validate) {
      bool ok = true;
      for (const auto& c : sdct::run_validation(validate_seed)) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "sdct: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
