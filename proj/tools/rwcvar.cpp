// rwcvar: regime-weighted conformal VaR calibration and backtesting.
#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "rwc/error.hpp"
#include "rwc/experiment.hpp"
#include "rwc/synth.hpp"

namespace {

struct FlagSet {
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;
  std::string config;
  bool correction = false;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option(flag, values[key], help);
  }

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "Manifest file (key = value lines)");
    add(app, "--data", "data", "Returns CSV");
    add(app, "--date-col", "date_col", "Date column name");
    add(app, "--return-col", "return_col", "Return column name");
    add(app, "--train-end", "train_end", "Last training date (inclusive)");
    add(app, "--val-end", "val_end", "Last validation date (inclusive)");
    add(app, "--alpha", "alpha", "Target miscoverage");
    add(app, "--methods", "methods", "Comma list of swc,twc,rwc,aci");
    add(app, "--base", "base", "Base forecaster: hs|gbdt|external");
    add(app, "--hs-window", "hs_window", "Historical-simulation window");
    add(app, "--gbdt-rounds", "gbdt_rounds", "Boosting rounds");
    add(app, "--gbdt-depth", "gbdt_depth", "Tree depth");
    add(app, "--gbdt-lr", "gbdt_lr", "Learning rate");
    add(app, "--gbdt-min-leaf", "gbdt_min_leaf", "Minimum samples per leaf");
    add(app, "--gbdt-window", "gbdt_window", "Rolling training window");
    add(app, "--gbdt-refit-every", "gbdt_refit_every", "Refit cadence in steps");
    add(app, "--forecasts-file", "forecasts_file", "External forecasts CSV (date,qhat)");
    add(app, "--standardize-on", "standardize_on", "Regime standardization window: train|pretest");
    add(app, "--m", "m", "Calibration buffer size (all methods)");
    add(app, "--lambda", "lambda", "Recency decay (TWC/RWC)");
    add(app, "--h", "h", "Kernel bandwidth (RWC), 'inf' allowed");
    add(app, "--n-min", "n_min", "ESS threshold (RWC), 0 disables");
    add(app, "--aci-gamma", "aci_gamma", "ACI step size");
    add(app, "--tuned-file", "tuned_file", "tuned.json produced by `tune`");
    add(app, "-o,--out", "output", "Output directory");
    add(app, "--seed", "seed", "Seed recorded with the run");
    app->add_flag("--finite-sample-correction", correction, "Use the inflated quantile level");
    app->add_option("--set", sets, "Extra key=value manifest overrides");
  }

  rwc::Manifest manifest() const {
    rwc::Manifest mf = config.empty() ? rwc::Manifest{} : rwc::Manifest::load(config);
    for (const auto& [k, v] : values)
      if (!v.empty()) mf.set(k, v);
    if (correction) mf.set("finite_sample_correction", "true");
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw rwc::Error(rwc::ErrorCode::InvalidConfig, "--set expects key=value");
      mf.set(s.substr(0, eq), s.substr(eq + 1));
    }
    return mf;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regime-weighted conformal VaR calibration"};
  // --h is the bandwidth, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  FlagSet run_flags, tune_flags, sweep_flags;
  auto* run = app.add_subcommand("run", "Calibrate and backtest on the test period");
  run_flags.attach(run);

  auto* tune = app.add_subcommand("tune", "Grid-search calibrator hyperparameters on validation");
  tune_flags.attach(tune);
  rwc::GridSpec grid;
  std::string m_grid, lambda_grid, h_grid, gamma_grid;
  tune->add_option("--m-grid", m_grid, "Comma list for m");
  tune->add_option("--lambda-grid", lambda_grid, "Comma list for lambda");
  tune->add_option("--h-grid", h_grid, "Comma list for h");
  tune->add_option("--gamma-grid", gamma_grid, "Comma list for gamma");

  auto* sweep = app.add_subcommand("sweep-bandwidth", "RWC bandwidth ablation at fixed (m, lambda)");
  sweep_flags.attach(sweep);
  std::string bandwidths = "0.5,1,2,inf";
  sweep->add_option("--bandwidths", bandwidths, "Comma list of h values ('inf' allowed)");

  auto* simulate = app.add_subcommand("simulate", "Write a synthetic regime-switching returns CSV");
  std::string sim_out;
  std::size_t sim_length = 5000;
  std::uint64_t sim_seed = 0;
  double sigma_calm = 0.008, sigma_stress = 0.025, p_calm = 0.98, p_stress = 0.95, mu = 0.0;
  std::string sim_start = "2000-01-03";
  simulate->add_option("-o,--out", sim_out, "Output CSV")->required();
  simulate->add_option("--length", sim_length, "Number of trading days");
  simulate->add_option("--seed", sim_seed, "Generator seed");
  simulate->add_option("--sigma-calm", sigma_calm, "Daily volatility of the calm state");
  simulate->add_option("--sigma-stress", sigma_stress, "Daily volatility of the stress state");
  simulate->add_option("--p-calm", p_calm, "Calm-state persistence");
  simulate->add_option("--p-stress", p_stress, "Stress-state persistence");
  simulate->add_option("--mu", mu, "Daily mean return in both states");
  simulate->add_option("--start", sim_start, "First calendar date (weekdays only)");

  auto* report = app.add_subcommand("report", "Rebuild reports and tables from a run directory");
  std::string report_dir;
  report->add_option("dir", report_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      rwc::cmd_run(run_flags.manifest());
    } else if (*tune) {
      auto sizes = [](const std::string& s) {
        std::vector<std::size_t> out;
        for (double v : rwc::parse_bandwidths(s)) out.push_back(static_cast<std::size_t>(v));
        return out;
      };
      if (!m_grid.empty()) grid.m_grid = sizes(m_grid);
      if (!lambda_grid.empty()) grid.lambda_grid = rwc::parse_bandwidths(lambda_grid);
      if (!h_grid.empty()) grid.h_grid = rwc::parse_bandwidths(h_grid);
      if (!gamma_grid.empty()) grid.gamma_grid = rwc::parse_bandwidths(gamma_grid);
      rwc::cmd_tune(tune_flags.manifest(), grid);
    } else if (*sweep) {
      rwc::cmd_sweep_bandwidth(sweep_flags.manifest(), rwc::parse_bandwidths(bandwidths));
    } else if (*simulate) {
      auto model = rwc::default_two_state_model(sim_length, sim_seed);
      model.mu = {mu, mu};
      model.sigma = {sigma_calm, sigma_stress};
      model.transition = {{p_calm, 1.0 - p_calm}, {1.0 - p_stress, p_stress}};
      auto start = rwc::parse_date(sim_start);
      if (!start) throw rwc::Error(rwc::ErrorCode::InvalidConfig, "bad --start date");
      model.start = *start;
      rwc::write_returns_csv(sim_out, rwc::simulate(model).returns);
    } else if (*report) {
      rwc::cmd_report(report_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "rwcvar: " << e.what() << '\n';
    return rwc::exit_code_for(e);
  }
  return 0;
}
