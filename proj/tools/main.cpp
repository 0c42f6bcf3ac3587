// citedyn — command-line front end for the citation-dynamics library.
//
// Usage pattern:
//   citedyn <command> [data-file] [options]
//
// Configuration precedence: built-in defaults, then the JSON config file
// (--config or $CITEDYN_CONFIG), then explicitly passed command-line flags.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using citedyn::Dataset;
using citedyn::cli::RunConfig;

void print_error(const char* type, const std::string& message) {
  // Keep in sync with the run_command error contract: one JSON line on stderr.
  std::string clean;
  clean.reserve(message.size());
  for (char c : message) {
    if (c == '"' || c == '\\') clean.push_back('\\');
    if (c == '\n') {
      clean += "\\n";
      continue;
    }
    clean.push_back(c);
  }
  std::cerr << R"({"error":{"type":")" << type << R"(","message":")" << clean
            << "\"}}\n";
}

citedyn::cli::Range to_range(const std::vector<double>& v) {
  return v.size() == 1 ? citedyn::cli::Range{v[0], v[0]}
                       : citedyn::cli::Range{v[0], v[1]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"citedyn: fit, simulate, and forecast citation histories"};
  app.require_subcommand(1);

  // --- shared options (valid before or after the subcommand) ---------------
  std::string config_path;
  double m_val = 30.0;
  std::string model_str = "wsb";
  double train_years = 5.0;
  double horizon_years = 30.0;
  std::uint64_t seed = 12345;
  std::string out_dir = ".";
  std::string format_str = "auto";

  auto* opt_config =
      app.add_option("--config", config_path, "JSON config file (default: $CITEDYN_CONFIG)");
  auto* opt_m = app.add_option("--m", m_val, "average references per paper (m > 0)");
  auto* opt_model = app.add_option(
      "--model", model_str, "curve family: wsb, lognormal, logistic, bass, gompertz");
  auto* opt_train =
      app.add_option("--train-years", train_years, "training window in years");
  auto* opt_horizon =
      app.add_option("--horizon-years", horizon_years, "forecast horizon in years");
  auto* opt_seed = app.add_option("--seed", seed, "master RNG seed");
  auto* opt_out = app.add_option("--out", out_dir, "output directory");
  auto* opt_format = app.add_option(
      "--format", format_str, "input format: events-csv, yearly-csv, json, auto");

  // --- subcommands ----------------------------------------------------------
  struct DataCmd {
    CLI::App* sub;
    std::string data_path;
  };
  std::vector<std::pair<std::string, std::string>> data_cmds = {
      {"fit", "fit the selected curve family to every paper"},
      {"predict", "train on a prefix, forecast with uncertainty bands"},
      {"collapse", "rescale every history onto the universal curve"},
      {"journal", "aggregate cohorts and predict impact factors"},
      {"compare", "fit all five families and score their forecasts"},
      {"report", "summary statistics and observed-vs-fitted curves"},
  };
  std::vector<DataCmd> subs;
  subs.reserve(data_cmds.size());
  for (const auto& [name, desc] : data_cmds) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    subs.push_back({sub, {}});
    sub->add_option("data", subs.back().data_path, "citation data file")->required();
  }

  CLI::App* sim = app.add_subcommand("simulate", "generate a synthetic cohort");
  sim->fallthrough();
  std::size_t n_papers = 100;
  std::string mode_str = "stochastic";
  std::vector<double> lambda_v, mu_v, sigma_v;
  auto* opt_n = sim->add_option("--n-papers", n_papers, "cohort size");
  auto* opt_mode =
      sim->add_option("--mode", mode_str, "stochastic or deterministic")
          ->check(CLI::IsMember({"stochastic", "deterministic"}));
  auto* opt_lambda = sim->add_option("--lambda", lambda_v, "fitness value or range")
                         ->expected(1, 2);
  auto* opt_mu = sim->add_option("--mu", mu_v, "immediacy (log-days) value or range")
                     ->expected(1, 2);
  auto* opt_sigma = sim->add_option("--sigma", sigma_v, "longevity value or range")
                        ->expected(1, 2);

  bool svg = false;
  CLI::Option* opt_svg = nullptr;
  for (DataCmd& d : subs) {
    if (d.sub->get_name() == "report") {
      opt_svg = d.sub->add_flag("--svg", svg, "also render report.svg");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("input", e.what());
    return citedyn::cli::kExitInputError;
  }

  const CLI::App* active = app.get_subcommands().front();
  const std::string cmd = active->get_name();

  try {
    RunConfig cfg;
    std::string effective_config = config_path;
    if (opt_config->count() == 0) {
      if (const char* env = std::getenv("CITEDYN_CONFIG"); env && *env) {
        effective_config = env;
      }
    }
    if (!effective_config.empty()) cfg = RunConfig::from_json_file(effective_config);

    // explicit flags win over the config file
    if (opt_m->count() > 0) cfg.globals.m = m_val;
    if (opt_model->count() > 0) cfg.model = citedyn::parse_model_kind(model_str);
    if (opt_train->count() > 0) cfg.train_years = train_years;
    if (opt_horizon->count() > 0) cfg.horizon_years = horizon_years;
    if (opt_seed->count() > 0) cfg.seed = seed;
    if (opt_out->count() > 0) cfg.out_dir = out_dir;
    if (opt_format->count() > 0) cfg.format = citedyn::parse_dataset_format(format_str);
    if (opt_n->count() > 0) cfg.simulate.n_papers = n_papers;
    if (opt_mode->count() > 0) {
      cfg.simulate.mode = mode_str == "stochastic"
                              ? citedyn::GenerationMode::stochastic
                              : citedyn::GenerationMode::deterministic;
    }
    if (opt_lambda->count() > 0) cfg.simulate.lambda = to_range(lambda_v);
    if (opt_mu->count() > 0) cfg.simulate.mu = to_range(mu_v);
    if (opt_sigma->count() > 0) cfg.simulate.sigma = to_range(sigma_v);
    if (opt_svg != nullptr && opt_svg->count() > 0) cfg.svg = true;

    Dataset dataset;
    if (cmd != "simulate") {
      std::string data_path;
      for (const DataCmd& d : subs) {
        if (d.sub->get_name() == cmd) data_path = d.data_path;
      }
      dataset = citedyn::load_dataset(data_path, cfg.format);
    }
    return citedyn::cli::run_command(cmd, cfg, dataset, std::cout, std::cerr);
  } catch (const citedyn::InputError& e) {
    print_error("input", e.what());
    return citedyn::cli::kExitInputError;
  } catch (const citedyn::NumericError& e) {
    print_error("numeric", e.what());
    return citedyn::cli::kExitNumericError;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return citedyn::cli::kExitNumericError;
  }
}
