#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "citedyn/baselines.hpp"
#include "citedyn/forecast.hpp"
#include "citedyn/format.hpp"
#include "citedyn/model.hpp"
#include "citedyn/svg.hpp"

namespace citedyn::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr ModelKind kAllKinds[] = {ModelKind::wsb, ModelKind::lognormal,
                                   ModelKind::logistic, ModelKind::bass,
                                   ModelKind::gompertz};

// ---------------------------------------------------------------------------
// config plumbing
// ---------------------------------------------------------------------------

void require_known_keys(const json& obj, std::initializer_list<const char*> known,
                        const std::string& origin) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return key == k; }) == known.end()) {
      throw InputError(origin + ": unknown config key '" + key + "'");
    }
  }
}

double as_number(const json& v, const std::string& origin, const char* key) {
  if (!v.is_number()) throw InputError(origin + ": '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

Range as_range(const json& v, const std::string& origin, const char* key) {
  if (v.is_number()) {
    const double x = v.get<double>();
    return {x, x};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw InputError(origin + ": '" + std::string(key) +
                   "' must be a number or a two-element [lo, hi] array");
}

// ---------------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------------

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot open '" + path.string() + "' for writing");
  f << content;
  f.flush();
  if (!f) throw InputError("failed writing '" + path.string() + "'");
}

void emit(std::ostream& out, const fs::path& path) {
  out << "wrote " << path.string() << "\n";
}

std::array<const char*, 3> param_names(ModelKind kind) {
  switch (kind) {
    case ModelKind::wsb:
    case ModelKind::lognormal: return {"lambda", "mu", "sigma"};
    case ModelKind::logistic: return {"saturation", "k", "t0"};
    case ModelKind::bass: return {"saturation", "p", "q"};
    case ModelKind::gompertz: return {"saturation", "b", "k"};
  }
  return {"p1", "p2", "p3"};
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void require_nonempty(const Dataset& dataset, const char* cmd) {
  if (dataset.papers.empty()) {
    throw InputError(std::string(cmd) + ": the dataset has no papers");
  }
}

struct SkipLog {
  std::string rows;  // CSV body
  std::size_t count = 0;

  void add(const std::string& paper_id, const std::string& reason) {
    std::string clean = reason;
    std::replace(clean.begin(), clean.end(), ',', ';');
    std::replace(clean.begin(), clean.end(), '\n', ' ');
    rows += paper_id + "," + clean + "\n";
    ++count;
  }
};

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

int cmd_fit(const RunConfig& cfg, const Dataset& dataset, std::ostream& out) {
  require_nonempty(dataset, "fit");
  const auto names = param_names(cfg.model);
  const bool has_t_star =
      cfg.model == ModelKind::wsb || cfg.model == ModelKind::lognormal;

  std::string csv = "paper_id,";
  csv += names[0];
  csv += ',';
  csv += names[1];
  csv += ',';
  csv += names[2];
  csv += ",c_inf";
  if (has_t_star) csv += ",t_star_days";
  csv += ",residual_norm,n_obs,converged\n";

  SkipLog skipped;
  for (const CitationHistory& h : dataset.papers) {
    try {
      const FitResult fit = fit_model(cfg.model, h, cfg.globals, cfg.fit);
      csv += h.paper_id();
      for (double p : fit.params) csv += "," + format_sig6(p);
      csv += "," + format_sig6(fit.saturation(cfg.globals));
      if (has_t_star) csv += "," + format_sig6(impact_time(fit.params[1]));
      csv += "," + format_sig6(fit.residual_norm);
      csv += "," + std::to_string(fit.n_obs);
      csv += fit.converged ? ",1\n" : ",0\n";
    } catch (const Error& e) {
      skipped.add(h.paper_id(), e.what());
    }
  }

  const fs::path dir(cfg.out_dir);
  write_text(dir / "fit.csv", csv);
  emit(out, dir / "fit.csv");
  write_text(dir / "fit_skipped.csv", "paper_id,reason\n" + skipped.rows);
  emit(out, dir / "fit_skipped.csv");
  out << "fitted " << dataset.papers.size() - skipped.count << "/"
      << dataset.papers.size() << " papers with model " << to_string(cfg.model) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const SimulateConfig& sim = cfg.simulate;
  const auto n_years =
      static_cast<std::size_t>(std::floor(cfg.horizon_years + 1e-9));
  if (n_years < 1) throw InputError("simulate: horizon_years must be at least 1");
  const ParamSampler sampler = uniform_param_sampler(
      sim.lambda.lo, sim.lambda.hi, sim.mu.lo, sim.mu.hi, sim.sigma.lo, sim.sigma.hi);

  GeneratorSpec defaults;
  defaults.globals = cfg.globals;
  defaults.horizon_days = years_to_days(double(n_years));
  defaults.mode = sim.mode;
  defaults.seed = cfg.seed;
  defaults.paper_id = "synthetic";

  std::vector<WsbParams> truths;
  Dataset ds;
  ds.papers = generate_cohort(sim.n_papers, sampler, defaults, &truths);
  ds.meta.resize(ds.papers.size());
  for (std::size_t i = 0; i < ds.papers.size(); ++i) {
    // Census the events into whole years so the dataset carries its own
    // observation window: trailing zero years record "observed, uncited"
    // out to the horizon, which downstream z-scoring needs.
    ds.papers[i] = CitationHistory::from_yearly_counts(
        ds.papers[i].paper_id(), ds.papers[i].to_yearly(n_years));
    ds.papers[i].set_publication_date("2000-01-01");
    ds.meta[i].journal = "synthetic";
    ds.meta[i].cohort_year = 2000;
  }

  const fs::path dir(cfg.out_dir);
  save_dataset(ds, (dir / "synthetic.json").string(), DatasetFormat::json);
  emit(out, dir / "synthetic.json");

  std::string csv = "paper_id,lambda,mu,sigma\n";
  for (std::size_t i = 0; i < ds.papers.size(); ++i) {
    csv += ds.papers[i].paper_id() + "," + format_sig6(truths[i].lambda) + "," +
           format_sig6(truths[i].mu) + "," + format_sig6(truths[i].sigma) + "\n";
  }
  write_text(dir / "synthetic_params.csv", csv);
  emit(out, dir / "synthetic_params.csv");
  out << "generated " << ds.papers.size() << " "
      << (sim.mode == GenerationMode::stochastic ? "stochastic" : "deterministic")
      << " histories, seed " << cfg.seed << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

int cmd_predict(const RunConfig& cfg, const Dataset& dataset, std::ostream& out) {
  require_nonempty(dataset, "predict");
  const double train_days = years_to_days(cfg.train_years);
  const double horizon_days = years_to_days(cfg.horizon_years);
  const auto horizon_grid = [&] {
    std::vector<double> t;
    for (std::size_t k = 1; years_to_days(double(k)) <= horizon_days * (1 + 1e-12); ++k) {
      t.push_back(years_to_days(double(k)));
    }
    return t;
  }();

  std::string env_csv = "paper_id,t_years,most_likely,band_low,band_high,sigma_log\n";
  std::string z_csv = "paper_id,horizon_years,z,within_2\n";
  SkipLog skipped;

  for (const CitationHistory& h : dataset.papers) {
    try {
      const CitationHistory train = h.truncated(train_days);
      const PredictionEnvelope env =
          predict(train, cfg.globals, horizon_grid, cfg.model, cfg.fit);
      for (std::size_t i = 0; i < env.eval_times_days.size(); ++i) {
        env_csv += h.paper_id() + "," +
                   format_sig6(days_to_years(env.eval_times_days[i])) + "," +
                   format_sig6(env.most_likely[i]) + "," +
                   format_sig6(env.band_low[i]) + "," +
                   format_sig6(env.band_high[i]) + "," + format_sig6(env.sigma_log[i]) +
                   "\n";
      }
      if (h.last_time() + 1e-6 < horizon_days) {
        skipped.add(h.paper_id(), "history ends before the horizon; no z-score");
        continue;
      }
      const ZScoreReport z = z_score(env, h, horizon_days, cfg.globals);
      z_csv += h.paper_id() + "," + format_sig6(days_to_years(z.horizon_days)) + "," +
               format_sig6(z.z_at_horizon) + (z.within_2 ? ",1\n" : ",0\n");
    } catch (const Error& e) {
      skipped.add(h.paper_id(), e.what());
    }
  }

  const fs::path dir(cfg.out_dir);
  write_text(dir / "envelope.csv", env_csv);
  emit(out, dir / "envelope.csv");
  write_text(dir / "zscores.csv", z_csv);
  emit(out, dir / "zscores.csv");
  write_text(dir / "predict_skipped.csv", "paper_id,reason\n" + skipped.rows);
  emit(out, dir / "predict_skipped.csv");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// collapse
// ---------------------------------------------------------------------------

int cmd_collapse(const RunConfig& cfg, const Dataset& dataset, std::ostream& out) {
  require_nonempty(dataset, "collapse");

  std::string points_csv = "paper_id,t_tilde,c_tilde\n";
  std::string summary_csv = "paper_id,n_points,dispersion,lambda,mu,sigma,converged\n";
  SkipLog skipped;

  for (const CitationHistory& h : dataset.papers) {
    try {
      const FitResult fit = fit_wsb(h, cfg.globals, cfg.fit);
      const auto points = rescale(h, fit.wsb_params(), cfg.globals, cfg.fit.max_observations);
      for (const RescaledPoint& p : points) {
        points_csv += h.paper_id() + "," + format_sig6(p.t_tilde) + "," +
                      format_sig6(p.c_tilde) + "\n";
      }
      const double dispersion = collapse_dispersion(points);
      summary_csv += h.paper_id() + "," + std::to_string(points.size()) + "," +
                     format_fixed6(dispersion) + "," + format_sig6(fit.params[0]) + "," +
                     format_sig6(fit.params[1]) + "," + format_sig6(fit.params[2]) +
                     (fit.converged ? ",1\n" : ",0\n");
    } catch (const Error& e) {
      skipped.add(h.paper_id(), e.what());
    }
  }

  const fs::path dir(cfg.out_dir);
  write_text(dir / "collapse.csv", points_csv);
  emit(out, dir / "collapse.csv");
  write_text(dir / "collapse_summary.csv", summary_csv);
  emit(out, dir / "collapse_summary.csv");
  write_text(dir / "collapse_skipped.csv", "paper_id,reason\n" + skipped.rows);
  emit(out, dir / "collapse_skipped.csv");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// journal
// ---------------------------------------------------------------------------

int cmd_journal(const RunConfig& cfg, const Dataset& dataset, std::ostream& out) {
  require_nonempty(dataset, "journal");

  std::map<std::pair<std::string, int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.papers.size(); ++i) {
    const PaperMeta& meta = dataset.meta[i];
    const std::string journal = meta.journal.empty() ? "journal" : meta.journal;
    groups[{journal, meta.cohort_year.value_or(0)}].push_back(i);
  }

  std::string csv =
      "journal,cohort_year,n_papers,Lambda,M,Sigma,C_inf,T_star_years,predicted_IF\n";
  std::string skipped_csv = "journal,cohort_year,reason\n";

  for (const auto& [key, indices] : groups) {
    std::vector<CitationHistory> histories;
    std::vector<FitResult> fits;
    histories.reserve(indices.size());
    fits.reserve(indices.size());
    for (std::size_t i : indices) {
      histories.push_back(dataset.papers[i]);
      try {
        fits.push_back(fit_wsb(dataset.papers[i], cfg.globals, cfg.fit));
      } catch (const Error&) {
        fits.emplace_back();  // converged == false: excluded from aggregation
      }
    }
    try {
      AggregateOptions opts;
      opts.journal_id = key.first;
      opts.cohort_year = key.second;
      opts.window = cfg.if_window;
      opts.fit = cfg.fit;
      const JournalProfile p = aggregate_journal(histories, fits, cfg.globals, opts);
      csv += p.journal_id + "," + std::to_string(p.cohort_year) + "," +
             std::to_string(p.n_papers) + "," + format_sig6(p.Lambda) + "," +
             format_sig6(p.M) + "," + format_sig6(p.Sigma) + "," +
             format_sig6(p.C_infinity) + "," +
             format_sig6(days_to_years(p.T_star_days)) + "," +
             format_sig6(p.predicted_IF) + "\n";
    } catch (const Error& e) {
      std::string clean = e.what();
      std::replace(clean.begin(), clean.end(), ',', ';');
      skipped_csv += key.first + "," + std::to_string(key.second) + "," + clean + "\n";
    }
  }

  const fs::path dir(cfg.out_dir);
  write_text(dir / "journal.csv", csv);
  emit(out, dir / "journal.csv");
  write_text(dir / "journal_skipped.csv", skipped_csv);
  emit(out, dir / "journal_skipped.csv");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

int cmd_compare(const RunConfig& cfg, const Dataset& dataset, std::ostream& out) {
  require_nonempty(dataset, "compare");
  const double train_days = years_to_days(cfg.train_years);
  const double horizon_days = years_to_days(cfg.horizon_years);

  std::string ks_csv = "paper_id,model,weighted_ks\n";
  std::string z_csv = "paper_id,model,z,signed_error,within_2\n";
  std::string skipped_csv = "paper_id,model,stage,reason\n";
  std::map<ModelKind, std::vector<double>> ks_by_model;
  std::map<ModelKind, std::vector<ZScoreReport>> z_by_model;
  std::map<ModelKind, std::vector<double>> err_by_model;

  const auto add_skip = [&](const std::string& id, ModelKind kind, const char* stage,
                            const std::string& reason) {
    std::string clean = reason;
    std::replace(clean.begin(), clean.end(), ',', ';');
    skipped_csv += id + "," + std::string(to_string(kind)) + "," + stage + "," + clean + "\n";
  };

  for (const CitationHistory& h : dataset.papers) {
    CitationHistory train = h.truncated(train_days);
    for (ModelKind kind : kAllKinds) {
      PredictionEnvelope env;
      try {
        env = predict(train, cfg.globals, {horizon_days}, kind, cfg.fit);
      } catch (const Error& e) {
        add_skip(h.paper_id(), kind, "fit", e.what());
        continue;
      }
      try {
        const double ks = weighted_ks(train, env.fit, cfg.globals);
        ks_csv += h.paper_id() + "," + to_string(kind) + "," + format_sig6(ks) + "\n";
        ks_by_model[kind].push_back(ks);
      } catch (const Error& e) {
        add_skip(h.paper_id(), kind, "ks", e.what());
      }
      if (h.last_time() + 1e-6 < horizon_days) {
        add_skip(h.paper_id(), kind, "z", "history ends before the horizon");
        continue;
      }
      try {
        const ZScoreReport z = z_score(env, h, horizon_days, cfg.globals);
        const double signed_err =
            h.cumulative_at(horizon_days) - env.most_likely.front();
        z_csv += h.paper_id() + "," + to_string(kind) + "," +
                 format_sig6(z.z_at_horizon) + "," + format_sig6(signed_err) +
                 (z.within_2 ? ",1\n" : ",0\n");
        z_by_model[kind].push_back(z);
        err_by_model[kind].push_back(signed_err);
      } catch (const Error& e) {
        add_skip(h.paper_id(), kind, "z", e.what());
      }
    }
  }

  std::string survival_csv = "model,z,p_exceed\n";
  std::string summary_csv =
      "model,n_ks,n_z,median_ks,p_gt_1,p_gt_2,median_z,median_signed_error\n";
  for (ModelKind kind : kAllKinds) {
    const auto& zs = z_by_model[kind];
    if (!zs.empty()) {
      const SurvivalCurve curve = cohort_accuracy(zs);
      for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        survival_csv += std::string(to_string(kind)) + "," +
                        format_sig6(curve.thresholds[i]) + "," +
                        format_sig6(curve.exceedance[i]) + "\n";
      }
      std::vector<double> zvals;
      for (const auto& r : zs) zvals.push_back(r.z_at_horizon);
      summary_csv += std::string(to_string(kind)) + "," +
                     std::to_string(ks_by_model[kind].size()) + "," +
                     std::to_string(zs.size()) + "," +
                     format_sig6(median(ks_by_model[kind])) + "," +
                     format_sig6(1.0 - curve.fraction_within_1) + "," +
                     format_sig6(1.0 - curve.fraction_within_2) + "," +
                     format_sig6(median(zvals)) + "," +
                     format_sig6(median(err_by_model[kind])) + "\n";
    } else {
      summary_csv += std::string(to_string(kind)) + "," +
                     std::to_string(ks_by_model[kind].size()) + ",0," +
                     format_sig6(median(ks_by_model[kind])) + ",nan,nan,nan,nan\n";
    }
  }

  const fs::path dir(cfg.out_dir);
  write_text(dir / "compare_ks.csv", ks_csv);
  emit(out, dir / "compare_ks.csv");
  write_text(dir / "compare_z.csv", z_csv);
  emit(out, dir / "compare_z.csv");
  write_text(dir / "z_survival.csv", survival_csv);
  emit(out, dir / "z_survival.csv");
  write_text(dir / "compare_summary.csv", summary_csv);
  emit(out, dir / "compare_summary.csv");
  write_text(dir / "compare_skipped.csv", skipped_csv);
  emit(out, dir / "compare_skipped.csv");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

int cmd_report(const RunConfig& cfg, const Dataset& dataset, std::ostream& out) {
  require_nonempty(dataset, "report");

  std::string curves_csv = "paper_id,t_years,observed,fitted\n";
  SkipLog skipped;
  std::vector<double> lambdas, mus, sigmas, c_infs;
  std::size_t converged_count = 0;

  struct CurvePair {
    std::string id;
    std::vector<double> years, observed, fitted;
  };
  std::vector<CurvePair> chart_data;

  for (const CitationHistory& h : dataset.papers) {
    try {
      const FitResult fit = fit_model(cfg.model, h, cfg.globals, cfg.fit);
      const auto n_years =
          static_cast<std::size_t>(std::floor(h.last_time() / kDaysPerYear + 1e-9));
      CurvePair pair;
      pair.id = h.paper_id();
      for (std::size_t k = 1; k <= n_years; ++k) {
        const double t = years_to_days(double(k));
        const double obs = h.cumulative_at(t);
        const double fitted = model_cumulative(fit, cfg.globals, t);
        curves_csv += h.paper_id() + "," + format_sig6(double(k)) + "," +
                      format_sig6(obs) + "," + format_sig6(fitted) + "\n";
        pair.years.push_back(double(k));
        pair.observed.push_back(obs);
        pair.fitted.push_back(fitted);
      }
      if (chart_data.size() < 3) chart_data.push_back(std::move(pair));
      if (fit.converged) {
        ++converged_count;
        lambdas.push_back(fit.params[0]);
        mus.push_back(fit.params[1]);
        sigmas.push_back(fit.params[2]);
        c_infs.push_back(fit.saturation(cfg.globals));
      }
    } catch (const Error& e) {
      skipped.add(h.paper_id(), e.what());
    }
  }

  const auto names = param_names(cfg.model);
  std::ostringstream summary;
  summary << "citation dynamics report\n";
  summary << "========================\n";
  summary << "papers:            " << dataset.papers.size() << "\n";
  summary << "model:             " << to_string(cfg.model) << "\n";
  summary << "m (references):    " << format_sig6(cfg.globals.m) << "\n";
  summary << "fitted:            " << dataset.papers.size() - skipped.count << "\n";
  summary << "converged:         " << converged_count << "\n";
  summary << "skipped:           " << skipped.count << "\n";
  if (converged_count > 0) {
    summary << "median " << names[0] << ":     " << format_sig6(median(lambdas)) << "\n";
    summary << "median " << names[1] << ":         " << format_sig6(median(mus)) << "\n";
    summary << "median " << names[2] << ":      " << format_sig6(median(sigmas)) << "\n";
    summary << "median c_inf:      " << format_sig6(median(c_infs)) << "\n";
  }

  const fs::path dir(cfg.out_dir);
  write_text(dir / "report.csv", curves_csv);
  emit(out, dir / "report.csv");
  write_text(dir / "summary.txt", summary.str());
  emit(out, dir / "summary.txt");
  write_text(dir / "report_skipped.csv", "paper_id,reason\n" + skipped.rows);
  emit(out, dir / "report_skipped.csv");

  if (cfg.svg) {
    SvgChart chart;
    chart.title = "observed vs fitted cumulative citations";
    chart.x_label = "years since publication";
    chart.y_label = "cumulative citations";
    for (const CurvePair& p : chart_data) {
      chart.add_series(p.id + " observed", p.years, p.observed);
      chart.add_series(p.id + " fitted", p.years, p.fitted);
    }
    chart.write((dir / "report.svg").string());
    emit(out, dir / "report.svg");
  }
  return kExitOk;
}

void emit_error(std::ostream& err, const char* type, const std::string& message) {
  json j;
  j["error"] = {{"type", type}, {"message", message}};
  err << j.dump() << "\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

void RunConfig::apply_json_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!j.is_object()) throw InputError(origin + ": config must be a JSON object");

  require_known_keys(j,
                     {"m", "model", "train_years", "horizon_years", "seed", "out_dir",
                      "format", "svg", "if_window_years", "fit", "simulate"},
                     origin);

  if (j.contains("m")) globals.m = as_number(j["m"], origin, "m");
  if (j.contains("model")) {
    if (!j["model"].is_string()) throw InputError(origin + ": 'model' must be a string");
    model = parse_model_kind(j["model"].get<std::string>());
  }
  if (j.contains("train_years")) train_years = as_number(j["train_years"], origin, "train_years");
  if (j.contains("horizon_years")) {
    horizon_years = as_number(j["horizon_years"], origin, "horizon_years");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw InputError(origin + ": 'seed' must be a non-negative integer");
    }
    const auto s = j["seed"].get<std::int64_t>();
    if (s < 0) throw InputError(origin + ": 'seed' must be a non-negative integer");
    seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) throw InputError(origin + ": 'out_dir' must be a string");
    out_dir = j["out_dir"].get<std::string>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string()) throw InputError(origin + ": 'format' must be a string");
    format = parse_dataset_format(j["format"].get<std::string>());
  }
  if (j.contains("svg")) {
    if (!j["svg"].is_boolean()) throw InputError(origin + ": 'svg' must be a boolean");
    svg = j["svg"].get<bool>();
  }
  if (j.contains("if_window_years")) {
    const json& w = j["if_window_years"];
    if (!w.is_object()) throw InputError(origin + ": 'if_window_years' must be an object");
    require_known_keys(w, {"m1", "m2"}, origin);
    double m1_years = std::exp(if_window.m1_log_days) / kDaysPerYear;
    double m2_years = std::exp(if_window.m2_log_days) / kDaysPerYear;
    if (w.contains("m1")) m1_years = as_number(w["m1"], origin, "if_window_years.m1");
    if (w.contains("m2")) m2_years = as_number(w["m2"], origin, "if_window_years.m2");
    if (!(m1_years > 0.0) || !(m2_years > 0.0)) {
      throw InputError(origin + ": impact-factor window edges must be positive");
    }
    if_window = IfWindow(std::log(years_to_days(m1_years)), std::log(years_to_days(m2_years)));
  }
  if (j.contains("fit")) {
    const json& f = j["fit"];
    if (!f.is_object()) throw InputError(origin + ": 'fit' must be an object");
    require_known_keys(f, {"max_observations", "max_iterations"}, origin);
    if (f.contains("max_observations")) {
      const double v = as_number(f["max_observations"], origin, "fit.max_observations");
      if (v < 3 || v != std::floor(v)) {
        throw InputError(origin + ": 'fit.max_observations' must be an integer >= 3");
      }
      fit.max_observations = static_cast<std::size_t>(v);
    }
    if (f.contains("max_iterations")) {
      const double v = as_number(f["max_iterations"], origin, "fit.max_iterations");
      if (v < 1 || v != std::floor(v)) {
        throw InputError(origin + ": 'fit.max_iterations' must be a positive integer");
      }
      fit.lm.max_iterations = static_cast<int>(v);
    }
  }
  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    if (!s.is_object()) throw InputError(origin + ": 'simulate' must be an object");
    require_known_keys(s, {"n_papers", "mode", "lambda", "mu", "sigma"}, origin);
    if (s.contains("n_papers")) {
      const double v = as_number(s["n_papers"], origin, "simulate.n_papers");
      if (v < 1 || v != std::floor(v)) {
        throw InputError(origin + ": 'simulate.n_papers' must be a positive integer");
      }
      simulate.n_papers = static_cast<std::size_t>(v);
    }
    if (s.contains("mode")) {
      if (!s["mode"].is_string()) throw InputError(origin + ": 'simulate.mode' must be a string");
      const std::string m = s["mode"].get<std::string>();
      if (m == "stochastic") {
        simulate.mode = GenerationMode::stochastic;
      } else if (m == "deterministic") {
        simulate.mode = GenerationMode::deterministic;
      } else {
        throw InputError(origin + ": 'simulate.mode' must be stochastic or deterministic");
      }
    }
    if (s.contains("lambda")) simulate.lambda = as_range(s["lambda"], origin, "simulate.lambda");
    if (s.contains("mu")) simulate.mu = as_range(s["mu"], origin, "simulate.mu");
    if (s.contains("sigma")) simulate.sigma = as_range(s["sigma"], origin, "simulate.sigma");
  }
  validate();
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  cfg.apply_json_text(ss.str(), path);
  return cfg;
}

void RunConfig::validate() const {
  globals.validate();
  if_window.validate();
  if (!(train_years > 0.0) || !std::isfinite(train_years)) {
    throw InputError("config: train_years must be positive and finite");
  }
  if (!(horizon_years > 0.0) || !std::isfinite(horizon_years)) {
    throw InputError("config: horizon_years must be positive and finite");
  }
  if (simulate.n_papers < 1) throw InputError("config: simulate.n_papers must be >= 1");
  const auto check_range = [](const Range& r, const char* name, bool positive) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo <= r.hi)) {
      throw InputError(std::string("config: simulate.") + name +
                       " must be a finite range with lo <= hi");
    }
    if (positive && !(r.lo > 0.0)) {
      throw InputError(std::string("config: simulate.") + name + " must be positive");
    }
  };
  check_range(simulate.lambda, "lambda", true);
  check_range(simulate.mu, "mu", false);
  check_range(simulate.sigma, "sigma", true);
  if (fit.max_observations < 3) {
    throw InputError("config: fit.max_observations must be >= 3");
  }
  if (fit.lm.max_iterations < 1) {
    throw InputError("config: fit.max_iterations must be >= 1");
  }
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

int run_command(const std::string& cmd, const RunConfig& cfg, const Dataset& dataset,
                std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    for (const std::string& w : dataset.warnings) err << "warning: " << w << "\n";
    fs::create_directories(cfg.out_dir);
    if (cmd == "fit") return cmd_fit(cfg, dataset, out);
    if (cmd == "simulate") return cmd_simulate(cfg, out);
    if (cmd == "predict") return cmd_predict(cfg, dataset, out);
    if (cmd == "collapse") return cmd_collapse(cfg, dataset, out);
    if (cmd == "journal") return cmd_journal(cfg, dataset, out);
    if (cmd == "compare") return cmd_compare(cfg, dataset, out);
    if (cmd == "report") return cmd_report(cfg, dataset, out);
    throw InputError("unknown command '" + cmd + "'");
  } catch (const InputError& e) {
    emit_error(err, "input", e.what());
    return kExitInputError;
  } catch (const NumericError& e) {
    emit_error(err, "numeric", e.what());
    return kExitNumericError;
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what());
    return kExitNumericError;
  }
}

}  // namespace citedyn::cli
