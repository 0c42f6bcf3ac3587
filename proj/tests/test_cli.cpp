#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "citedyn/dataset.hpp"
#include "citedyn/generator.hpp"
#include "citedyn/model.hpp"
#include "citedyn/types.hpp"
#include "commands.hpp"
#include "doctest.h"

using namespace citedyn;
using namespace citedyn::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "citedyn-cli-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

std::size_t line_count(const fs::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

/// A small stochastic dataset in the shape `simulate` emits: yearly censuses
/// over the full horizon, tagged with one journal cohort.
Dataset small_dataset(std::size_t n = 12, std::uint64_t seed = 1, int n_years = 30) {
  GeneratorSpec defaults;
  defaults.seed = seed;
  defaults.horizon_days = years_to_days(double(n_years));
  const auto sampler = uniform_param_sampler(1.0, 3.0, 6.8, 7.6, 0.9, 1.4);
  auto cohort = generate_cohort(n, sampler, defaults);

  Dataset ds;
  for (auto& h : cohort) {
    ds.papers.push_back(CitationHistory::from_yearly_counts(
        h.paper_id(), h.to_yearly(static_cast<std::size_t>(n_years)), "2000-01-01"));
    PaperMeta m;
    m.journal = "j";
    m.cohort_year = 2000;
    ds.meta.push_back(m);
  }
  return ds;
}

struct RunOutcome {
  int rc = -1;
  std::string out;
  std::string err;
};

RunOutcome run(const std::string& cmd, RunConfig cfg, const Dataset& ds,
               const fs::path& out_dir) {
  cfg.out_dir = out_dir.string();
  std::ostringstream out, err;
  RunOutcome r;
  r.rc = run_command(cmd, cfg, ds, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string("'") + CITEDYN_CLI_BINARY + "' " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("fit command emits per-paper parameters and a skip ledger") {
  const auto ds = small_dataset();
  const auto dir = fresh_dir("fit");
  const auto r = run("fit", RunConfig{}, ds, dir);

  CHECK(r.rc == kExitOk);
  CHECK(r.err.empty());
  REQUIRE(fs::exists(dir / "fit.csv"));
  REQUIRE(fs::exists(dir / "fit_skipped.csv"));
  CHECK(first_line(dir / "fit.csv") ==
        "paper_id,lambda,mu,sigma,c_inf,t_star_days,residual_norm,n_obs,converged");
  CHECK(first_line(dir / "fit_skipped.csv") == "paper_id,reason");
  // every paper lands in exactly one of the two files
  CHECK((line_count(dir / "fit.csv") - 1) + (line_count(dir / "fit_skipped.csv") - 1) ==
        ds.papers.size());
  CHECK(r.out.find("fit.csv") != std::string::npos);

  // diffusion families drop the impact-time column
  RunConfig logistic;
  logistic.model = ModelKind::logistic;
  const auto dir2 = fresh_dir("fit-logistic");
  const auto r2 = run("fit", logistic, ds, dir2);
  CHECK(r2.rc == kExitOk);
  CHECK(first_line(dir2 / "fit.csv") ==
        "paper_id,saturation,k,t0,c_inf,residual_norm,n_obs,converged");
}

TEST_CASE("predict command scores every paper that reaches the horizon") {
  const auto ds = small_dataset();
  RunConfig cfg;
  cfg.train_years = 10.0;
  cfg.horizon_years = 30.0;
  const auto dir = fresh_dir("predict");
  const auto r = run("predict", cfg, ds, dir);

  CHECK(r.rc == kExitOk);
  CHECK(first_line(dir / "envelope.csv") ==
        "paper_id,t_years,most_likely,band_low,band_high,sigma_log");
  CHECK(first_line(dir / "zscores.csv") == "paper_id,horizon_years,z,within_2");
  REQUIRE(fs::exists(dir / "predict_skipped.csv"));
  // the dataset reaches year 30, so every paper is either scored or skipped
  // for a fit reason, and scored papers have 30 envelope rows each
  const std::size_t scored = line_count(dir / "zscores.csv") - 1;
  const std::size_t skipped = line_count(dir / "predict_skipped.csv") - 1;
  CHECK(scored + skipped == ds.papers.size());
  CHECK(line_count(dir / "envelope.csv") - 1 == scored * 30);
  CHECK(scored >= ds.papers.size() / 2);
}

TEST_CASE("predict skips histories that stop before the horizon") {
  const auto ds = small_dataset(6, 3, 12);  // observed for only 12 years
  RunConfig cfg;
  cfg.train_years = 5.0;
  cfg.horizon_years = 30.0;
  const auto dir = fresh_dir("predict-short");
  const auto r = run("predict", cfg, ds, dir);

  CHECK(r.rc == kExitOk);
  CHECK(line_count(dir / "zscores.csv") == 1);  // header only
  const auto skipped = slurp(dir / "predict_skipped.csv");
  CHECK(skipped.find("history ends before the horizon") != std::string::npos);
  // envelopes are still emitted for the papers that fit
  CHECK(line_count(dir / "envelope.csv") > 1);
}

TEST_CASE("collapse command reports zero dispersion on noiseless input") {
  GlobalConstants g;
  const WsbParams truth{2.4, 7.2, 1.1};
  Dataset ds;
  std::vector<double> counts;
  double prev = 0.0;
  for (int y = 1; y <= 30; ++y) {
    const double c = cumulative_citations(truth, g, years_to_days(y));
    counts.push_back(c - prev);
    prev = c;
  }
  ds.papers.push_back(CitationHistory::from_yearly_counts("pure", counts));
  ds.meta.resize(1);

  const auto dir = fresh_dir("collapse");
  const auto r = run("collapse", RunConfig{}, ds, dir);
  CHECK(r.rc == kExitOk);
  CHECK(first_line(dir / "collapse.csv") == "paper_id,t_tilde,c_tilde");
  CHECK(first_line(dir / "collapse_summary.csv") ==
        "paper_id,n_points,dispersion,lambda,mu,sigma,converged");

  // the dispersion column is fixed-point so an exact collapse reads 0.000000
  const auto summary = slurp(dir / "collapse_summary.csv");
  CHECK(summary.find("pure,30,0.000000,") != std::string::npos);
  CHECK(line_count(dir / "collapse.csv") == 31);
}

TEST_CASE("journal command aggregates cohorts and records failures") {
  const auto ds = small_dataset();
  const auto dir = fresh_dir("journal");
  const auto r = run("journal", RunConfig{}, ds, dir);

  CHECK(r.rc == kExitOk);
  CHECK(first_line(dir / "journal.csv") ==
        "journal,cohort_year,n_papers,Lambda,M,Sigma,C_inf,T_star_years,predicted_IF");
  // 12 papers in one journal-year: one aggregated row (>= 10 must converge)
  CHECK(line_count(dir / "journal.csv") == 2);
  CHECK(slurp(dir / "journal.csv").find("j,2000,") != std::string::npos);

  // too small a cohort lands in the skip ledger instead
  const auto tiny = small_dataset(4, 9);
  const auto dir2 = fresh_dir("journal-tiny");
  const auto r2 = run("journal", RunConfig{}, tiny, dir2);
  CHECK(r2.rc == kExitOk);
  CHECK(line_count(dir2 / "journal.csv") == 1);
  CHECK(line_count(dir2 / "journal_skipped.csv") == 2);
}

TEST_CASE("compare command evaluates all five families") {
  const auto ds = small_dataset(8, 21);
  RunConfig cfg;
  cfg.train_years = 10.0;
  const auto dir = fresh_dir("compare");
  const auto r = run("compare", cfg, ds, dir);

  CHECK(r.rc == kExitOk);
  CHECK(first_line(dir / "compare_ks.csv") == "paper_id,model,weighted_ks");
  CHECK(first_line(dir / "compare_z.csv") == "paper_id,model,z,signed_error,within_2");
  CHECK(first_line(dir / "z_survival.csv") == "model,z,p_exceed");
  CHECK(first_line(dir / "compare_summary.csv") ==
        "model,n_ks,n_z,median_ks,p_gt_1,p_gt_2,median_z,median_signed_error");
  CHECK(line_count(dir / "compare_summary.csv") == 6);  // header + 5 models
  const auto summary = slurp(dir / "compare_summary.csv");
  for (const char* model : {"wsb", "lognormal", "logistic", "bass", "gompertz"}) {
    CHECK(summary.find(std::string("\n") + model + ",") != std::string::npos);
  }
}

TEST_CASE("report command writes curves, a text summary, and optionally a chart") {
  const auto ds = small_dataset(5, 33);
  RunConfig cfg;
  cfg.svg = true;
  const auto dir = fresh_dir("report");
  const auto r = run("report", cfg, ds, dir);

  CHECK(r.rc == kExitOk);
  CHECK(first_line(dir / "report.csv") == "paper_id,t_years,observed,fitted");
  REQUIRE(fs::exists(dir / "summary.txt"));
  const auto summary = slurp(dir / "summary.txt");
  CHECK(summary.find("papers") != std::string::npos);
  CHECK(summary.find("median") != std::string::npos);
  REQUIRE(fs::exists(dir / "report.svg"));
  CHECK(slurp(dir / "report.svg").find("<svg") != std::string::npos);

  // without the flag no chart is written
  const auto dir2 = fresh_dir("report-plain");
  RunConfig plain;
  const auto r2 = run("report", plain, ds, dir2);
  CHECK(r2.rc == kExitOk);
  CHECK_FALSE(fs::exists(dir2 / "report.svg"));
}

TEST_CASE("simulate command is deterministic per seed") {
  RunConfig cfg;
  cfg.simulate.n_papers = 6;
  cfg.horizon_years = 12.0;
  cfg.seed = 99;
  const Dataset none;

  const auto a = fresh_dir("simulate-a");
  const auto b = fresh_dir("simulate-b");
  CHECK(run("simulate", cfg, none, a).rc == kExitOk);
  CHECK(run("simulate", cfg, none, b).rc == kExitOk);

  REQUIRE(fs::exists(a / "synthetic.json"));
  CHECK(slurp(a / "synthetic.json") == slurp(b / "synthetic.json"));
  CHECK(slurp(a / "synthetic_params.csv") == slurp(b / "synthetic_params.csv"));
  CHECK(first_line(a / "synthetic_params.csv") == "paper_id,lambda,mu,sigma");
  CHECK(line_count(a / "synthetic_params.csv") == 7);

  // a different seed changes the data
  cfg.seed = 100;
  const auto c = fresh_dir("simulate-c");
  CHECK(run("simulate", cfg, none, c).rc == kExitOk);
  CHECK(slurp(a / "synthetic.json") != slurp(c / "synthetic.json"));

  // the emitted dataset is loadable and carries the observation window
  const auto back = load_dataset((a / "synthetic.json").string());
  REQUIRE(back.papers.size() == 6);
  CHECK(back.papers[0].is_yearly());
  CHECK(back.papers[0].yearly_counts().size() == 12);
  CHECK(back.meta[0].journal == "synthetic");
}

TEST_CASE("command-level failures are single-line JSON on stderr") {
  const auto ds = small_dataset(3, 5);
  const auto dir = fresh_dir("errors");

  SUBCASE("unknown command") {
    const auto r = run("frobnicate", RunConfig{}, ds, dir);
    CHECK(r.rc == kExitInputError);
    CHECK(r.err.find("{\"error\":{") == 0);
    CHECK(r.err.find("\"type\":\"input\"") != std::string::npos);
    CHECK(r.err.rfind('\n') == r.err.size() - 1);
  }

  SUBCASE("invalid configuration") {
    RunConfig cfg;
    cfg.train_years = -2.0;
    const auto r = run("fit", cfg, ds, dir);
    CHECK(r.rc == kExitInputError);
    CHECK(r.err.find("\"type\":\"input\"") != std::string::npos);
  }

  SUBCASE("empty dataset") {
    const Dataset none;
    const auto r = run("fit", RunConfig{}, none, dir);
    CHECK(r.rc == kExitInputError);
    CHECK(r.err.find("no papers") != std::string::npos);
  }
}

TEST_CASE("config files overlay defaults and reject unknown keys") {
  RunConfig cfg;
  cfg.apply_json_text(
      "{\"m\": 25, \"train_years\": 7, \"model\": \"gompertz\","
      " \"seed\": 42, \"svg\": true,"
      " \"if_window_years\": {\"m1\": 3, \"m2\": 1},"
      " \"fit\": {\"max_observations\": 64},"
      " \"simulate\": {\"n_papers\": 5, \"mode\": \"deterministic\","
      "               \"lambda\": [0.5, 2.0], \"mu\": 7.0}}",
      "test-config");

  CHECK(cfg.globals.m == 25.0);
  CHECK(cfg.train_years == 7.0);
  CHECK(cfg.model == ModelKind::gompertz);
  CHECK(cfg.seed == 42);
  CHECK(cfg.svg);
  CHECK(cfg.if_window.m1_log_days ==
        doctest::Approx(std::log(years_to_days(3.0))).epsilon(1e-15));
  CHECK(cfg.fit.max_observations == 64);
  CHECK(cfg.simulate.n_papers == 5);
  CHECK(cfg.simulate.mode == GenerationMode::deterministic);
  CHECK(cfg.simulate.lambda.lo == 0.5);
  CHECK(cfg.simulate.lambda.hi == 2.0);
  CHECK(cfg.simulate.mu.lo == 7.0);  // scalar pins the range
  CHECK(cfg.simulate.mu.hi == 7.0);

  CHECK_THROWS_AS(cfg.apply_json_text("{\"mm\": 1}", "origin"), InputError);
  CHECK_THROWS_AS(cfg.apply_json_text("{\"m\": \"thirty\"}", "origin"), InputError);
  CHECK_THROWS_AS(cfg.apply_json_text("not json", "origin"), ParseError);
  CHECK_THROWS_AS(cfg.apply_json_text("{\"seed\": -1}", "origin"), InputError);
  CHECK_THROWS_AS(cfg.apply_json_text("{\"train_years\": 0}", "origin"), InputError);
  CHECK_THROWS_AS(RunConfig::from_json_file("/nonexistent/config.json"), InputError);

  // the origin string names the offending source
  try {
    RunConfig fresh;
    fresh.apply_json_text("{\"bogus\": 1}", "my-config.json");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("my-config.json") != std::string::npos);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
}

TEST_CASE("golden fit output stays byte-stable") {
  const fs::path golden = fs::path(CITEDYN_GOLDEN_DIR);
  const auto ds = load_dataset((golden / "golden_dataset.json").string());
  REQUIRE_FALSE(ds.papers.empty());

  const auto dir = fresh_dir("golden");
  const auto r = run("fit", RunConfig{}, ds, dir);
  REQUIRE(r.rc == kExitOk);
  CHECK(slurp(dir / "fit.csv") == slurp(golden / "golden_fit.csv"));
}

TEST_CASE("the installed binary wires everything together") {
  const auto dir = fresh_dir("binary");
  const std::string out = "'" + dir.string() + "'";

  SUBCASE("simulate then fit round-trip") {
    const int rc = run_binary("simulate --n-papers 5 --seed 7 --horizon-years 12 --out " +
                              out + " > /dev/null");
    REQUIRE(rc == 0);
    REQUIRE(fs::exists(dir / "synthetic.json"));

    const int rc2 = run_binary("fit '" + (dir / "synthetic.json").string() + "' --out " +
                               out + " > /dev/null");
    CHECK(rc2 == 0);
    CHECK(fs::exists(dir / "fit.csv"));
    CHECK(line_count(dir / "fit.csv") >= 2);
  }

  SUBCASE("repeat runs are byte-identical") {
    const auto d1 = fresh_dir("binary-rep1");
    const auto d2 = fresh_dir("binary-rep2");
    REQUIRE(run_binary("simulate --n-papers 4 --seed 11 --horizon-years 10 --out '" +
                       d1.string() + "' > /dev/null") == 0);
    REQUIRE(run_binary("simulate --n-papers 4 --seed 11 --horizon-years 10 --out '" +
                       d2.string() + "' > /dev/null") == 0);
    CHECK(slurp(d1 / "synthetic.json") == slurp(d2 / "synthetic.json"));
  }

  SUBCASE("input errors exit 1 with a JSON diagnostic") {
    const auto errfile = dir / "stderr.txt";
    const int rc = run_binary("fit /nonexistent/data.json --out " + out +
                              " > /dev/null 2> '" + errfile.string() + "'");
    CHECK(rc == 1);
    const auto err = slurp(errfile);
    CHECK(err.find("{\"error\":{") == 0);
    CHECK(err.find("\"type\":\"input\"") != std::string::npos);
  }

  SUBCASE("bad flags exit 1; help exits 0") {
    CHECK(run_binary("fit --no-such-flag x.json > /dev/null 2>&1") == 1);
    CHECK(run_binary("--help > /dev/null 2>&1") == 0);
    CHECK(run_binary("simulate --help > /dev/null 2>&1") == 0);
  }

  SUBCASE("config file and environment variable are honored") {
    const auto cfgfile = dir / "config.json";
    {
      std::ofstream f(cfgfile);
      f << "{\"simulate\": {\"n_papers\": 3}, \"horizon_years\": 11}\n";
    }
    const int rc = run_binary("simulate --seed 5 --config '" + cfgfile.string() +
                              "' --out " + out + " > /dev/null");
    REQUIRE(rc == 0);
    const auto ds = load_dataset((dir / "synthetic.json").string());
    CHECK(ds.papers.size() == 3);
    CHECK(ds.papers[0].yearly_counts().size() == 11);

    // same through the environment, overridden by an explicit flag
    const auto d3 = fresh_dir("binary-env");
    const std::string env = "CITEDYN_CONFIG='" + cfgfile.string() + "' ";
    const int rc2 = std::system((env + "'" + CITEDYN_CLI_BINARY +
                                 "' simulate --seed 5 --n-papers 2 --out '" +
                                 d3.string() + "' > /dev/null")
                                    .c_str());
    REQUIRE(WIFEXITED(rc2));
    REQUIRE(WEXITSTATUS(rc2) == 0);
    const auto ds3 = load_dataset((d3 / "synthetic.json").string());
    CHECK(ds3.papers.size() == 2);                     // flag beats config
    CHECK(ds3.papers[0].yearly_counts().size() == 11); // config beats default
  }
}
