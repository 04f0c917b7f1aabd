#include "sis/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numeric>

#include "sis/benchmark.hpp"
#include "sis/csv.hpp"
#include "sis/errors.hpp"
#include "sis/scenarios.hpp"
#include "sis/screening.hpp"

namespace sis::cli {

using nlohmann::json;

namespace {

struct RawOptions {
  std::string input;
  std::string out;
  std::optional<std::string> family;
  std::string method = "mmle";
  std::string response;
  std::optional<double> threshold;
  std::optional<std::size_t> top_d;
  std::string format = "csv";
  bool no_standardize = false;

  std::optional<std::string> table;
  std::optional<std::string> design;
  std::optional<std::size_t> n, p, q, s;
  std::optional<double> rho;
  std::optional<std::string> pattern;
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  int workers = 0;
  bool no_timing = false;
  bool restandardize = false;
};

void add_setting_options(CLI::App* sub, RawOptions& raw) {
  sub->add_option("--table", raw.table, "named published scenario");
  sub->add_option("--design", raw.design, "covariate design: S1 | S2 | S3");
  sub->add_option("--n", raw.n, "sample size");
  sub->add_option("--p", raw.p, "number of covariates");
  sub->add_option("--q", raw.q, "correlated block size (S1/S2)");
  sub->add_option("--rho", raw.rho, "target correlation in [0, 1)");
  sub->add_option("--s", raw.s, "size of the true support");
  sub->add_option("--pattern", raw.pattern,
                  "slope pattern, e.g. \"(1,1.3,1)\" or \"(3,4,...)\"");
  sub->add_option("--family", raw.family, "gaussian | bernoulli | poisson");
  sub->add_option("--seed", raw.seed, "base seed");
  sub->add_option("--workers", raw.workers, "worker threads (0 = auto)");
  sub->add_option("--out", raw.out, "output path");
}

void add_study_options(CLI::App* sub, RawOptions& raw) {
  sub->add_option("--reps", raw.reps, "number of replications");
}

SimSetting resolve_setting(const RawOptions& raw) {
  SimSetting st;
  st.design = Design::s1;
  st.n = 200;
  st.p = 2000;
  st.q = 15;
  st.rho = 0.0;
  st.s = 3;
  st.beta_pattern = BetaPattern::parse("(1,1.3,...)");
  st.family = Family::bernoulli;
  if (raw.table) st = find_scenario(*raw.table).setting;
  if (raw.design) st.design = parse_design(*raw.design);
  if (raw.n) st.n = *raw.n;
  if (raw.p) st.p = *raw.p;
  if (raw.q) st.q = *raw.q;
  if (raw.rho) st.rho = *raw.rho;
  if (raw.s) st.s = *raw.s;
  if (raw.pattern) st.beta_pattern = BetaPattern::parse(*raw.pattern);
  if (raw.family) st.family = parse_family(*raw.family);
  st.seed = raw.seed;
  return st;
}

json setting_json(const SimSetting& st) {
  return json{{"design", std::string(to_string(st.design))},
              {"n", st.n},
              {"p", st.p},
              {"q", st.q},
              {"rho", st.rho},
              {"s", st.s},
              {"beta_pattern", st.beta_pattern.to_string()},
              {"family", std::string(to_string(st.family))},
              {"seed", st.seed}};
}

std::string describe(const SimSetting& st) {
  std::string d = std::string(to_string(st.design)) + " n=" + std::to_string(st.n) +
                  " p=" + std::to_string(st.p);
  if (st.design != Design::s3) {
    d += " q=" + std::to_string(st.q) + " rho=" + format_sig6(st.rho);
  }
  d += " s=" + std::to_string(st.s) + " " + std::string(to_string(st.family)) +
       " beta=" + st.beta_pattern.to_string();
  return d;
}

void check_output_path(const std::filesystem::path& out, bool required) {
  if (out.empty()) {
    if (required) throw ArgumentError("--out is required");
    return;
  }
  const auto parent = out.parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw ArgumentError("output directory " + parent.string() + " does not exist");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open output file " + path.string());
  return f;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

std::string reported_text(const ReportedValue& v) {
  return format_sig6(v.median) + "(" + format_sig6(v.rsd) + ")";
}

const Scenario* scenario_of(const RunConfig& config) {
  return config.table ? &find_scenario(*config.table) : nullptr;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& path,
                                   std::string_view suffix) {
  auto out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args,
                                            std::ostream& out) {
  RawOptions raw;
  CLI::App app{"Sure independence screening for generalized linear models"};
  app.require_subcommand(1);

  auto* screen = app.add_subcommand("screen", "rank the features of a CSV dataset");
  screen->add_option("input", raw.input, "input CSV with header")->required();
  screen->add_option("--family", raw.family, "gaussian | bernoulli | poisson");
  screen->add_option("--method", raw.method, "mmle | mlr | both");
  screen->add_option("--response", raw.response, "response column name or 0-based index");
  auto* thr = screen->add_option("--threshold", raw.threshold, "keep features with utility >= value");
  auto* top = screen->add_option("--top-d", raw.top_d, "keep the d top-ranked features");
  thr->excludes(top);
  screen->add_option("--format", raw.format, "csv | jsonl");
  screen->add_flag("--no-standardize", raw.no_standardize, "screen raw columns");
  screen->add_option("--workers", raw.workers, "worker threads (0 = auto)");
  screen->add_option("--out", raw.out, "output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "write one simulated dataset");
  add_setting_options(simulate, raw);
  simulate->add_flag("--restandardize", raw.restandardize,
                     "re-standardize columns empirically before drawing y");

  auto* bench = app.add_subcommand("bench", "minimum model size study");
  add_setting_options(bench, raw);
  add_study_options(bench, raw);
  bench->add_option("--method", raw.method, "mmle | mlr | both");
  bench->add_flag("--no-timing", raw.no_timing, "record runtime_ms as 0");

  auto* eigen = app.add_subcommand("eigen", "maximum sample-covariance eigenvalue study");
  add_setting_options(eigen, raw);
  add_study_options(eigen, raw);

  auto* tstat = app.add_subcommand("tstat", "oracle-model minimum |t| study");
  add_setting_options(tstat, raw);
  add_study_options(tstat, raw);

  std::vector<const char*> argv{"sis"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ArgumentError(e.what());
  }

  RunConfig config;
  if (screen->parsed()) config.subcommand = Subcommand::screen;
  if (simulate->parsed()) config.subcommand = Subcommand::simulate;
  if (bench->parsed()) config.subcommand = Subcommand::bench;
  if (eigen->parsed()) config.subcommand = Subcommand::eigen;
  if (tstat->parsed()) config.subcommand = Subcommand::tstat;

  config.input = raw.input;
  config.out = raw.out;
  config.response = raw.response;
  config.threshold = raw.threshold;
  config.top_d = raw.top_d;
  config.standardize = !raw.no_standardize;
  config.restandardize = raw.restandardize;
  config.n_reps = raw.reps;
  config.base_seed = raw.seed;
  config.workers = raw.workers;
  config.timing = !raw.no_timing;
  config.table = raw.table;

  if (raw.method == "mmle") {
    config.method = MethodChoice::mmle;
  } else if (raw.method == "mlr") {
    config.method = MethodChoice::mlr;
  } else if (raw.method == "both") {
    config.method = MethodChoice::both;
  } else {
    throw ArgumentError("unknown method '" + raw.method + "' (expected mmle, mlr or both)");
  }
  if (raw.format == "csv") {
    config.format = OutputFormat::csv;
  } else if (raw.format == "jsonl") {
    config.format = OutputFormat::jsonl;
  } else {
    throw ArgumentError("unknown format '" + raw.format + "' (expected csv or jsonl)");
  }
  if (config.threshold && !(*config.threshold >= 0.0)) {
    throw ArgumentError("--threshold must be nonnegative");
  }
  if (config.top_d && *config.top_d < 1) throw ArgumentError("--top-d must be >= 1");
  if (config.n_reps < 1) throw ArgumentError("--reps must be >= 1");
  if (config.workers < 0) throw ArgumentError("--workers must be >= 0");

  if (config.subcommand == Subcommand::screen) {
    config.family = raw.family ? parse_family(*raw.family) : Family::gaussian;
  } else {
    config.setting = resolve_setting(raw);
    config.family = config.setting.family;
  }
  return config;
}

int cmd_screen(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::is_regular_file(config.input)) {
    throw ArgumentError("input file " + config.input.string() + " does not exist");
  }
  check_output_path(config.out, false);

  Dataset ds = read_dataset_csv(config.input, config.response);
  check_support(config.family, ds.y);
  const std::size_t n = ds.y.size();
  const std::size_t p = ds.feature_names.size();

  ScreenOptions so;
  so.family = config.family;
  so.standardize = config.standardize;
  so.workers = config.workers;
  const Screening sc = screen(ds.X, ds.y, so);

  std::vector<Method> methods;
  if (config.method != MethodChoice::mlr) methods.push_back(Method::mmle);
  if (config.method != MethodChoice::mmle) methods.push_back(Method::mlr);

  const std::size_t d = config.top_d.value_or(default_selection_size(n, p));
  std::vector<std::vector<std::size_t>> rank_of(methods.size(), std::vector<std::size_t>(p));
  std::vector<std::vector<bool>> selected(methods.size(), std::vector<bool>(p, false));
  std::vector<std::size_t> selected_count(methods.size(), 0);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const ScreeningResult& r = sc.result(methods[m]);
    for (std::size_t k = 0; k < p; ++k) rank_of[m][r.ranking[k]] = k + 1;
    const IndexSet sel = config.threshold ? select_by_threshold(r, *config.threshold)
                                          : select_top_d(r, std::min(d, p));
    for (std::size_t j : sel) selected[m][j] = true;
    selected_count[m] = sel.size();
  }
  std::vector<bool> flagged(p, false);
  for (std::size_t j : sc.mmle.flagged) flagged[j] = true;

  std::ofstream file;
  std::ostream* sink = &out;
  if (!config.out.empty()) {
    file = open_out(config.out);
    sink = &file;
  }
  const bool single = methods.size() == 1;
  if (config.format == OutputFormat::csv) {
    std::string head = "feature_id,feature";
    for (Method m : methods) {
      const std::string tag = single ? "" : "_" + std::string(to_string(m));
      head += ",utility" + tag + ",rank" + tag + ",selected" + tag;
    }
    head += ",flagged\n";
    *sink << head;
  }
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t j = sc.result(methods[0]).ranking[k];
    if (config.format == OutputFormat::csv) {
      std::string line = std::to_string(j) + ',' + ds.feature_names[j];
      for (std::size_t m = 0; m < methods.size(); ++m) {
        line += ',' + format_sig6(sc.result(methods[m]).utilities[j]) + ',' +
                std::to_string(rank_of[m][j]) + ',' + (selected[m][j] ? "1" : "0");
      }
      line += std::string(",") + (flagged[j] ? "1" : "0") + '\n';
      *sink << line;
    } else {
      json row{{"feature_id", j}, {"feature", ds.feature_names[j]}};
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const std::string tag = single ? "" : "_" + std::string(to_string(methods[m]));
        row["utility" + tag] = sc.result(methods[m]).utilities[j];
        row["rank" + tag] = rank_of[m][j];
        row["selected" + tag] = static_cast<bool>(selected[m][j]);
      }
      row["flagged"] = static_cast<bool>(flagged[j]);
      *sink << row.dump() << '\n';
    }
  }
  std::ostream& report = config.out.empty() ? err : out;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    report << "selected " << selected_count[m] << " of " << p << " features ("
           << to_string(methods[m]) << ")\n";
  }
  if (!single) {
    report << "mmle/mlr spearman rank agreement: " << format_sig6(sc.rank_agreement)
           << '\n';
  }
  if (!sc.mmle.flagged.empty()) {
    report << sc.mmle.flagged.size() << " feature(s) flagged as not converged\n";
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream&) {
  check_output_path(config.out, true);
  const SimSetting& st = config.setting;
  st.validate();
  const std::uint64_t seed = replication_seed(config.base_seed, 0);
  const SimulatedData data = simulate(st, seed, config.restandardize);
  write_dataset_csv(config.out, data.X, data.y);

  json support = json::array();
  json beta = json::array();
  for (std::size_t j = 0; j < st.s; ++j) {
    support.push_back(j + 1);
    beta.push_back(data.beta_star[j]);
  }
  json meta{{"setting", setting_json(st)},
            {"seed", config.base_seed},
            {"replication_seed", seed},
            {"rng", "xoshiro256** seeded by splitmix64; replication 0"},
            {"empirical_standardization", config.restandardize},
            {"true_support", support},
            {"beta_star", beta}};
  if (config.table) meta["scenario"] = *config.table;
  const auto meta_path = sidecar_path(config.out, ".meta.json");
  write_json(meta_path, meta);
  out << "wrote " << config.out.string() << " (" << st.n << " x " << st.p
      << ") and " << meta_path.string() << '\n';
  return kExitOk;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream&) {
  check_output_path(config.out, false);
  const SimSetting& st = config.setting;
  st.validate();
  StudyOptions opts;
  opts.workers = config.workers;
  opts.timing = config.timing;
  opts.methods.clear();
  if (config.method != MethodChoice::mlr) opts.methods.push_back(Method::mmle);
  if (config.method != MethodChoice::mmle) opts.methods.push_back(Method::mlr);

  const StudyResult res = run_study(st, config.n_reps, config.base_seed, opts);
  const Scenario* sc = scenario_of(config);

  out << (sc ? "scenario " + sc->name + ": " : std::string("setting: ")) << describe(st)
      << "\nreps " << config.n_reps << ", seed " << config.base_seed << ", failed "
      << res.failures.size() << "\n";
  out << "method  MMMS      RSD       published\n";
  json methods = json::array();
  for (const auto& s : res.summaries) {
    std::string published = "-";
    if (sc && sc->kind == ScenarioKind::mms && sc->reported.size() == 2) {
      published = reported_text(sc->reported[s.method == Method::mlr ? 0 : 1]);
    }
    char line[128];
    std::snprintf(line, sizeof(line), "%-7s %-9s %-9s %s\n",
                  std::string(to_string(s.method)).c_str(), format_sig6(s.mmms).c_str(),
                  format_sig6(s.rsd).c_str(), published.c_str());
    out << line;
    methods.push_back({{"method", std::string(to_string(s.method))},
                       {"mmms", s.mmms},
                       {"rsd", s.rsd},
                       {"n_reps", s.n_reps},
                       {"skipped", s.skipped}});
  }
  if (opts.methods.size() == 2) {
    out << "median mmle/mlr spearman agreement " << format_sig6(res.rank_agreement) << '\n';
  }

  if (!config.out.empty()) {
    auto f = open_out(config.out);
    f << "replication,method,mms,runtime_ms\n";
    for (const auto& r : res.records) {
      f << r.replication << ',' << to_string(r.method) << ',' << r.mms << ','
        << r.runtime_ms << '\n';
    }
    json failures = json::array();
    for (const auto& fr : res.failures) {
      failures.push_back({{"replication", fr.replication}, {"reason", fr.reason}});
    }
    json summary{{"setting", setting_json(st)},
                 {"n_reps", config.n_reps},
                 {"base_seed", config.base_seed},
                 {"methods", methods},
                 {"failures", failures},
                 {"rank_agreement", res.rank_agreement}};
    if (sc) {
      summary["scenario"] = sc->name;
      if (sc->kind == ScenarioKind::mms && sc->reported.size() == 2) {
        summary["published"] = {
            {"mlr", {{"mmms", sc->reported[0].median}, {"rsd", sc->reported[0].rsd}}},
            {"mmle", {{"mmms", sc->reported[1].median}, {"rsd", sc->reported[1].rsd}}}};
      }
    }
    write_json(sidecar_path(config.out, ".summary.json"), summary);
  }
  return kExitOk;
}

int cmd_eigen(const RunConfig& config, std::ostream& out, std::ostream&) {
  check_output_path(config.out, false);
  const EigenStudy es =
      run_eigen_study(config.setting, config.n_reps, config.base_seed, config.workers);
  const Scenario* sc = scenario_of(config);
  std::string published = "-";
  if (sc && sc->kind == ScenarioKind::eigen && !sc->reported.empty()) {
    published = reported_text(sc->reported[0]);
  }
  out << (sc ? "scenario " + sc->name + ": " : std::string("setting: "))
      << describe(config.setting) << "\nreps " << config.n_reps << ", seed "
      << config.base_seed << "\nmedian lambda_max " << format_sig6(es.summary.median)
      << " (rsd " << format_sig6(es.summary.rsd) << "), published " << published
      << '\n';
  if (!config.out.empty()) {
    auto f = open_out(config.out);
    f << "replication,lambda_max\n";
    for (const auto& r : es.records) {
      f << r.replication << ',' << format_sig6(r.lambda_max) << '\n';
    }
    json summary{{"setting", setting_json(config.setting)},
                 {"n_reps", config.n_reps},
                 {"base_seed", config.base_seed},
                 {"median", es.summary.median},
                 {"rsd", es.summary.rsd},
                 {"q25", es.summary.q25},
                 {"q75", es.summary.q75}};
    if (sc) summary["scenario"] = sc->name;
    if (published != "-") {
      summary["published"] = {{"median", sc->reported[0].median},
                              {"rsd", sc->reported[0].rsd}};
    }
    write_json(sidecar_path(config.out, ".summary.json"), summary);
  }
  return kExitOk;
}

int cmd_tstat(const RunConfig& config, std::ostream& out, std::ostream&) {
  check_output_path(config.out, false);
  const TStatStudy ts =
      run_tstat_study(config.setting, config.n_reps, config.base_seed, config.workers);
  const Scenario* sc = scenario_of(config);
  out << (sc ? "scenario " + sc->name + ": " : std::string("setting: "))
      << describe(config.setting) << "\nreps " << config.n_reps << ", seed "
      << config.base_seed << ", not converged " << ts.failed
      << "\nmedian min|t| " << format_sig6(ts.summary.median) << " (q25 "
      << format_sig6(ts.summary.q25) << ", q75 " << format_sig6(ts.summary.q75)
      << ")\n";
  if (!config.out.empty()) {
    auto f = open_out(config.out);
    f << "replication,min_abs_t,converged\n";
    for (const auto& r : ts.records) {
      f << r.replication << ',' << (r.converged ? format_sig6(r.min_abs_t) : "")
        << ',' << (r.converged ? 1 : 0) << '\n';
    }
    json summary{{"setting", setting_json(config.setting)},
                 {"n_reps", config.n_reps},
                 {"base_seed", config.base_seed},
                 {"not_converged", ts.failed},
                 {"median", ts.summary.median},
                 {"rsd", ts.summary.rsd},
                 {"q25", ts.summary.q25},
                 {"q75", ts.summary.q75}};
    if (sc) summary["scenario"] = sc->name;
    write_json(sidecar_path(config.out, ".summary.json"), summary);
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto config = parse_command_line(args, out);
    if (!config) return kExitOk;
    switch (config->subcommand) {
      case Subcommand::screen:
        return cmd_screen(*config, out, err);
      case Subcommand::simulate:
        return cmd_simulate(*config, out, err);
      case Subcommand::bench:
        return cmd_bench(*config, out, err);
      case Subcommand::eigen:
        return cmd_eigen(*config, out, err);
      case Subcommand::tstat:
        return cmd_tstat(*config, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.category()) {
      case Error::Category::argument:
        return kExitArgument;
      case Error::Category::data:
        return kExitData;
      case Error::Category::numerical:
        return kExitNumerical;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitArgument;
}

}  // namespace sis::cli
