#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "citedyn/analytics.hpp"
#include "citedyn/dataset.hpp"
#include "citedyn/fitting.hpp"
#include "citedyn/generator.hpp"
#include "citedyn/types.hpp"

namespace citedyn::cli {

/// CLI exit codes: success / input error / numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNumericError = 2;

/// A closed [lo, hi] interval; lo == hi pins the value.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct SimulateConfig {
  std::size_t n_papers = 100;
  GenerationMode mode = GenerationMode::stochastic;
  Range lambda{0.5, 3.0};
  Range mu{5.192956850890211, 8.202482120895887};  // log of [180, 3650] days
  Range sigma{0.3, 2.5};
};

/// Effective settings of one CLI run. Precedence: built-in defaults, then a
/// JSON config file, then explicit command-line flags.
struct RunConfig {
  GlobalConstants globals{};
  FitOptions fit{};
  IfWindow if_window{};
  ModelKind model = ModelKind::wsb;
  double train_years = 5.0;
  double horizon_years = 30.0;
  std::uint64_t seed = 12345;
  std::string out_dir = ".";
  DatasetFormat format = DatasetFormat::auto_detect;
  SimulateConfig simulate{};
  bool svg = false;

  /// Load and validate a JSON config file; unknown keys are errors.
  static RunConfig from_json_file(const std::string& path);
  /// Overlay a parsed JSON config onto this config.
  void apply_json_text(const std::string& text, const std::string& origin);
  void validate() const;
};

/// Execute one subcommand: fit | simulate | predict | collapse | journal |
/// compare | report. Reads `dataset` (ignored by simulate), writes output
/// files under cfg.out_dir, reports progress on `out` and failures as a
/// single machine-readable JSON line on `err`. Never throws; returns an exit
/// code. Per-paper data/convergence failures inside batch commands do not
/// fail the run — they are recorded in *_skipped.csv outputs.
int run_command(const std::string& cmd, const RunConfig& cfg, const Dataset& dataset,
                std::ostream& out, std::ostream& err);

}  // namespace citedyn::cli
