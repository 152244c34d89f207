#include "rwc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rwc/error.hpp"
#include "rwc/evaluation.hpp"

namespace rwc {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::InvalidConfig, "bad value for '" + key + "': '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity" || v == "Inf") return kInfiniteBandwidth;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, "methods list is empty");
  return out;
}

Date require_date(const Manifest& mf, const std::string& key) {
  if (!mf.has(key)) throw Error(ErrorCode::InvalidConfig, "missing '" + key + "'");
  auto d = parse_date(mf.get(key));
  if (!d) bad_value(key, mf.get(key));
  return *d;
}

// Per-base defaults: the hyperparameters selected for each base forecaster.
RunConfig default_config(Method method, BaseKind base) {
  const bool hs = base == BaseKind::HS;
  RunConfig c;
  c.calibrator = method;
  c.base = base;
  switch (method) {
    case Method::SWC: c.m = 252; break;
    case Method::TWC:
      c.m = 756;
      c.lambda = hs ? 0.010 : 0.005;
      break;
    case Method::RWC:
      c.m = 756;
      c.lambda = hs ? 0.010 : 0.005;
      c.h = hs ? 2.0 : 1.0;
      c.n_min = hs ? 30 : 100;
      break;
    case Method::ACI:
      c.m = 252;
      c.aci_gamma = hs ? 0.002 : 0.005;
      break;
  }
  return c;
}

void apply_keys(RunConfig& c, const Manifest& mf, const std::string& prefix, Method method) {
  const bool uses_lambda = method == Method::TWC || method == Method::RWC;
  if (mf.has(prefix + "m")) c.m = mf.get_size(prefix + "m", c.m);
  if (uses_lambda && mf.has(prefix + "lambda")) c.lambda = mf.get_double(prefix + "lambda", c.lambda);
  if (method == Method::RWC) {
    if (mf.has(prefix + "h")) c.h = mf.get_double(prefix + "h", c.h);
    if (mf.has(prefix + "n_min")) c.n_min = mf.get_size(prefix + "n_min", c.n_min);
  }
  if (method == Method::ACI) {
    if (mf.has(prefix + "aci_gamma")) c.aci_gamma = mf.get_double(prefix + "aci_gamma", c.aci_gamma);
    if (mf.has(prefix + "gamma")) c.aci_gamma = mf.get_double(prefix + "gamma", c.aci_gamma);
  }
}

void apply_tuned(RunConfig& c, const nlohmann::json& entry) {
  if (entry.contains("m")) c.m = entry["m"].get<std::size_t>();
  if (entry.contains("lambda")) c.lambda = entry["lambda"].get<double>();
  if (entry.contains("h")) c.h = entry["h"].is_string() ? kInfiniteBandwidth : entry["h"].get<double>();
  if (entry.contains("gamma")) c.aci_gamma = entry["gamma"].get<double>();
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["m"] = c.m;
  j["lambda"] = c.lambda;
  j["h"] = std::isinf(c.h) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(c.h);
  j["n_min"] = c.n_min;
  j["gamma"] = c.aci_gamma;
  j["alpha_min"] = c.aci_alpha_min;
  j["alpha_max"] = c.aci_alpha_max;
  j["finite_sample_correction"] = c.finite_sample_correction;
  return j;
}

Dataset load_dataset(const Experiment& ex) {
  auto returns = load_returns_csv(ex.data, ex.date_col, ex.return_col);
  return prepare_dataset(std::move(returns), ex.split, ex.alpha, ex.standardize_on, ex.forecast);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::FileNotFound, "cannot create " + dir.string());
}

std::vector<io::NamedReport> build_reports(const std::vector<BoundSeries>& series,
                                           const std::vector<std::size_t>& ms,
                                           const std::vector<RegimePoint>& raw, double alpha) {
  std::vector<io::NamedReport> out;
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::vector<double> rv;
    for (const auto& r : series[k].records) rv.push_back(raw[r.index][0]);
    const auto labels = assign_vol_quintiles(rv);
    out.push_back({series[k].label, ms[k], make_report(series[k], labels, alpha)});
  }
  return out;
}

void write_outputs(const fs::path& dir, const std::vector<io::NamedReport>& reports, BaseKind base, double alpha) {
  for (const auto& nr : reports) io::write_report_json(dir / ("report_" + nr.name + ".json"), nr.report, alpha);
  io::write_table1(dir / "table1.csv", reports);
  io::write_table2(dir / "table2.csv", reports);
  io::write_table3(dir / "table3.csv", reports);
  io::write_weight_diagnostics(dir / "table3_weights.csv", reports);
  io::write_table5(dir / "table5.csv", reports);
  io::write_rolling(dir / ("rolling_" + std::string(to_string(base)) + ".csv"), reports);
}

}  // namespace

Manifest Manifest::parse(std::string_view text) {
  Manifest mf;
  std::stringstream ss{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidConfig, "manifest line " + std::to_string(line_no) + " lacks '='");
    mf.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return mf;
}

Manifest Manifest::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Manifest::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Manifest::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, get(key)) : fallback;
}

std::size_t Manifest::get_size(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key);
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool Manifest::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

Experiment resolve(const Manifest& mf) {
  Experiment ex;
  if (!mf.has("data")) throw Error(ErrorCode::InvalidConfig, "missing 'data'");
  ex.data = mf.get("data");
  ex.date_col = mf.get("date_col", "date");
  ex.return_col = mf.get("return_col", "ret");
  ex.split = {require_date(mf, "train_end"), require_date(mf, "val_end")};
  ex.alpha = mf.get_double("alpha", 0.01);
  ex.methods = parse_methods(mf.get("methods", "swc,twc,rwc,aci"));
  ex.standardize_on = parse_standardize_on(mf.get("standardize_on", "pretest"));
  ex.output = mf.get("output", "out");
  ex.seed = mf.get_size("seed", 0);

  ex.forecast.base = parse_base(mf.get("base", "hs"));
  ex.forecast.hs_window = mf.get_size("hs_window", kDefaultHsWindow);
  auto& g = ex.forecast.gbdt;
  g.rounds = mf.get_size("gbdt_rounds", g.rounds);
  g.max_depth = mf.get_size("gbdt_depth", g.max_depth);
  g.learning_rate = mf.get_double("gbdt_lr", g.learning_rate);
  g.min_samples_leaf = mf.get_size("gbdt_min_leaf", g.min_samples_leaf);
  g.window = mf.get_size("gbdt_window", g.window);
  g.refit_every = mf.get_size("gbdt_refit_every", g.refit_every);
  if (ex.forecast.base == BaseKind::External) {
    if (!mf.has("forecasts_file")) throw Error(ErrorCode::InvalidConfig, "external base needs 'forecasts_file'");
    ex.forecast.forecasts_file = mf.get("forecasts_file");
  }

  nlohmann::json tuned;
  if (mf.has("tuned_file")) {
    std::ifstream in(mf.get("tuned_file"));
    if (!in) throw Error(ErrorCode::FileNotFound, mf.get("tuned_file"));
    try {
      in >> tuned;
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "cannot parse " + mf.get("tuned_file"));
    }
  }

  for (Method method : ex.methods) {
    RunConfig c = default_config(method, ex.forecast.base);
    c.alpha = ex.alpha;
    c.rng_seed = ex.seed;
    c.finite_sample_correction = mf.get_bool("finite_sample_correction", false);
    c.aci_alpha_min = mf.get_double("aci_alpha_min", c.aci_alpha_min);
    c.aci_alpha_max = mf.get_double("aci_alpha_max", c.aci_alpha_max);
    apply_keys(c, mf, "", method);
    const std::string name(to_string(method));
    if (tuned.contains(name)) apply_tuned(c, tuned[name]);
    apply_keys(c, mf, name + ".", method);
    c.validate();
    ex.configs[method] = c;
  }
  return ex;
}

void cmd_run(const Manifest& manifest) {
  const Experiment ex = resolve(manifest);
  const Dataset data = load_dataset(ex);
  ensure_dir(ex.output);

  std::vector<BoundSeries> series;
  std::vector<std::size_t> ms;
  series.push_back(base_bounds(data.losses, data.forecasts, data.splits.test, ex.alpha));
  ms.push_back(0);
  for (Method method : ex.methods) {
    const RunConfig& cfg = ex.configs.at(method);
    series.push_back(run_method(data, method, cfg, data.splits.test));
    ms.push_back(cfg.m);
  }
  for (const auto& b : series) io::write_bounds_csv(ex.output / ("bounds_" + b.label + ".csv"), b);
  write_outputs(ex.output, build_reports(series, ms, data.embedding.raw, ex.alpha), ex.forecast.base, ex.alpha);

  nlohmann::ordered_json lock;
  lock["manifest"] = manifest.values();
  auto& cfgs = lock["configs"];
  for (Method method : ex.methods) cfgs[std::string(to_string(method))] = config_json(ex.configs.at(method));
  lock["splits"] = {{"train", {data.splits.train.begin, data.splits.train.end}},
                    {"val", {data.splits.val.begin, data.splits.val.end}},
                    {"test", {data.splits.test.begin, data.splits.test.end}}};
  std::ofstream(ex.output / "manifest.lock.json") << lock.dump(2) << '\n';
}

void cmd_tune(const Manifest& manifest, const GridSpec& grid) {
  const Experiment ex = resolve(manifest);
  const Dataset data = load_dataset(ex);
  ensure_dir(ex.output);
  nlohmann::ordered_json selected;
  for (Method method : ex.methods) {
    const auto result = grid_search(method, grid, data, ex.configs.at(method));
    const std::string name(to_string(method));
    io::write_tune_table(ex.output / ("tune_" + name + ".csv"), result);
    const auto& best = result.best();
    nlohmann::ordered_json j;
    j["m"] = best.m;
    if (method == Method::TWC || method == Method::RWC) j["lambda"] = best.lambda;
    if (method == Method::RWC) j["h"] = std::isinf(best.h) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(best.h);
    if (method == Method::ACI) j["gamma"] = best.gamma;
    j["objective"] = result.candidates[result.selected].objective;
    selected[name] = j;
  }
  std::ofstream(ex.output / "tuned.json") << selected.dump(2) << '\n';
}

std::vector<io::SweepRow> cmd_sweep_bandwidth(const Manifest& manifest, const std::vector<double>& bandwidths) {
  if (bandwidths.empty()) throw Error(ErrorCode::InvalidConfig, "no bandwidths to sweep");
  Manifest mf = manifest;
  mf.set("methods", "rwc");
  const Experiment ex = resolve(mf);
  const Dataset data = load_dataset(ex);
  ensure_dir(ex.output);

  std::vector<io::SweepRow> rows;
  for (double h : bandwidths) {
    RunConfig cfg = ex.configs.at(Method::RWC);
    cfg.h = h;
    const auto b = run_method(data, Method::RWC, cfg, data.splits.test);
    const auto labels = quintile_labels_for(data, b);
    const auto report = make_report(b, labels, ex.alpha);
    rows.push_back({h, report.exceedance_pct, report.avg_var_bps, report.per_quintile_pct[4],
                    report.weight_diag.median_n_eff, report.weight_diag.p10_n_eff, report.fallback_steps});
  }
  io::write_sweep_table(ex.output / "table4.csv", rows);
  return rows;
}

void cmd_report(const fs::path& dir) {
  std::ifstream in(dir / "manifest.lock.json");
  if (!in) throw Error(ErrorCode::FileNotFound, (dir / "manifest.lock.json").string());
  nlohmann::json lock;
  try {
    in >> lock;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "cannot parse manifest.lock.json");
  }
  Manifest mf;
  for (auto& [k, v] : lock["manifest"].items()) mf.set(k, v.get<std::string>());
  const Experiment ex = resolve(mf);
  const auto returns = load_returns_csv(ex.data, ex.date_col, ex.return_col);
  const auto raw = raw_embedding(returns.returns);

  std::vector<BoundSeries> series;
  std::vector<std::size_t> ms;
  series.push_back(io::read_bounds_csv(dir / "bounds_base.csv", returns.dates, "base"));
  ms.push_back(0);
  for (Method method : ex.methods) {
    const std::string name(to_string(method));
    series.push_back(io::read_bounds_csv(dir / ("bounds_" + name + ".csv"), returns.dates, name));
    ms.push_back(ex.configs.at(method).m);
  }
  write_outputs(dir, build_reports(series, ms, raw, ex.alpha), ex.forecast.base, ex.alpha);
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (classify(err->code())) {
      case ErrorClass::Config: return 2;
      case ErrorClass::Data: return 3;
      case ErrorClass::Numeric: return 4;
    }
  }
  return 4;
}

std::vector<double> parse_bandwidths(std::string_view text) {
  std::vector<double> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double("h", item));
  }
  return out;
}

}  // namespace rwc
