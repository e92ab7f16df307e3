#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rvkit/error.hpp"
#include "rvkit/report_io.hpp"
#include "rvkit/synthsim.hpp"

namespace rvkit::cli {
namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return kConfigError;
    case ErrorCategory::Data: return kDataError;
    case ErrorCategory::Numerical: return kNumericalError;
  }
  return kDataError;
}

void report_error(std::ostream& err, std::string_view kind, std::string_view category,
                  const std::string& message, const std::string& context) {
  nlohmann::json j{{"error", kind}, {"category", category}, {"message", message}};
  if (!context.empty()) j["context"] = context;
  err << j.dump() << '\n';
}

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Numerical: return "numerical";
  }
  return "data";
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open JSON file", path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what(), path);
  }
}

std::vector<SessionLabel> parse_sessions(const std::string& text) {
  std::vector<SessionLabel> labels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) labels.push_back(parse_session_label(item));
  }
  return labels;
}

/// Writes report files into a directory and deletes them all unless
/// `commit()` is reached.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw Error(ErrorKind::ConfigInvalid, "output directory is not writable", dir_.string());
    }
  }
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  template <class Fn>
  void write(const std::string& name, Fn&& fn) {
    const auto path = dir_ / name;
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::ConfigInvalid, "cannot write output file", path.string());
    fn(out);
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed", path.string());
  }

  void write_json(const std::string& name, const nlohmann::json& j) {
    write(name, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  }

  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

nlohmann::json fits_json(const std::vector<SessionFit>& fits, bool kurtosis) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : fits) j[std::string(to_string(f.label))] = to_json(kurtosis ? f.kurtosis : f.sixth);
  return j;
}

TickSeries load_ticks(const std::vector<std::string>& paths, const TimeZone& tz) {
  if (paths.empty()) throw Error(ErrorKind::ConfigInvalid, "no --input tick file given");
  std::vector<Tick> all;
  for (const auto& p : paths) {
    const auto part = parse_ticks_file(p, tz);
    if (!all.empty() && !part.empty() && part[0].time <= all.back().time) {
      throw Error(ErrorKind::NonMonotoneTimestamp, "input files overlap or are out of order", p);
    }
    all.insert(all.end(), part.ticks().begin(), part.ticks().end());
  }
  return TickSeries(std::move(all));
}

nlohmann::json dates_json(const std::vector<Date>& dates) {
  auto arr = nlohmann::json::array();
  for (const auto d : dates) arr.push_back(format_date(d));
  return arr;
}

int cmd_analyze(const AnalysisConfig& cfg, std::ostream& out) {
  SessionCalendar calendar = SessionCalendar::tokyo({});
  if (!cfg.calendar_path.empty()) {
    calendar = SessionCalendar::from_json(read_json_file(cfg.calendar_path));
  }
  AnalysisOptions options = cfg.options;
  options.normalize(calendar);

  OutputSet outputs(cfg.out_dir);
  const auto ticks = load_ticks(cfg.inputs, calendar.time_zone());
  if (calendar.trading_days().empty()) calendar = calendar.with_days_from(ticks);

  const auto result = run_analysis(ticks, calendar, options);

  outputs.write("rv_table.csv", [&](std::ostream& o) { write_rv_table(o, result.rv_table); });
  outputs.write("signature.csv", [&](std::ostream& o) { write_signature(o, result.signatures); });
  outputs.write("zones.csv", [&](std::ostream& o) { write_zones(o, result.zones.rows); });
  outputs.write("moments.csv", [&](std::ostream& o) { write_moments(o, result.moments); });
  outputs.write("moments_theory.csv", [&](std::ostream& o) { write_moments(o, result.theory); });
  outputs.write_json("fit_kurtosis.json", fits_json(result.fits, true));
  outputs.write_json("fit_m6.json", fits_json(result.fits, false));

  const auto& c = result.counts;
  nlohmann::json summary;
  summary["config"] = cfg.to_json();
  summary["config"]["options"] = options.to_json();
  summary["calendar"] = {{"timezone", calendar.time_zone().name},
                         {"trading_days", calendar.trading_days().size()}};
  summary["counts"] = {{"ticks", c.ticks},
                       {"excluded_ticks", c.excluded_ticks},
                       {"trading_days", c.trading_days},
                       {"slices", c.slices},
                       {"rv_records", result.rv_table.size()},
                       {"zone_days", result.zones.rows.size()},
                       {"zero_rv_excluded", c.zero_rv_excluded},
                       {"missing_rv_pairs", c.missing_rv_pairs}};
  summary["empty_days"] = dates_json(c.empty_days);
  summary["zone_days_skipped"] = dates_json(c.zone_days_skipped);
  summary["warnings"] = result.warnings;
  outputs.write_json("summary.json", summary);
  outputs.commit();

  out << fmt::format("analyzed {} ticks, {} slices, {} RV records -> {}\n", c.ticks, c.slices,
                     result.rv_table.size(), cfg.out_dir);
  for (const auto& f : result.fits) {
    out << fmt::format("{}: K={:.6g} B4={:.6g}  M6={:.6g} B6={:.6g}\n", to_string(f.label),
                       f.kurtosis.params.scale, f.kurtosis.params.decay, f.sixth.params.scale,
                       f.sixth.params.decay);
  }
  return kOk;
}

int cmd_simulate(const SimConfig& cfg, const std::string& out_dir, std::size_t threads,
                 std::ostream& out) {
  OutputSet outputs(out_dir);
  DatasetSummary stats;
  SimTruth truth;
  outputs.write("ticks.csv", [&](std::ostream& o) {
    truth = generate_dataset(cfg, o, &stats, threads);
  });
  outputs.write_json("truth.json", truth.to_json());
  outputs.commit();
  out << fmt::format("days {}\nticks {}\nmean_sigma2 {}\n", stats.days, stats.ticks,
                     format_double(stats.mean_sigma2));
  return kOk;
}

struct DensityArgs {
  long n = 0;
  std::size_t points = 1001;
  std::string grid = "uniform";
  std::optional<double> from;
  std::optional<double> to;
  std::string out_path;
};

DensityTable density_table(const DensityArgs& a) {
  if (a.n < 2) throw Error(ErrorKind::UnsupportedN, fmt::format("density needs n >= 2, got {}", a.n));
  if (a.points < 2) throw Error(ErrorKind::ConfigInvalid, "--points must be >= 2");
  const FiniteSampleLaw law(a.n);
  const double bound = law.support_bound();
  const double lo = a.from.value_or(-bound);
  const double hi = a.to.value_or(bound);
  if (!(lo < hi)) throw Error(ErrorKind::ConfigInvalid, "grid needs from < to");

  DensityTable table;
  table.rows.reserve(a.points);
  const double last = static_cast<double>(a.points - 1);
  if (a.grid == "uniform") {
    for (std::size_t i = 0; i < a.points; ++i) {
      const double x = i + 1 == a.points ? hi : lo + (hi - lo) * static_cast<double>(i) / last;
      table.rows.push_back({x, law.density(x)});
    }
  } else if (a.grid == "angular") {
    // x = sqrt(n) sin(theta), theta uniform: nodes cluster at the support edges.
    if (lo < -bound || hi > bound) {
      throw Error(ErrorKind::ConfigInvalid, "angular grid must stay inside the support");
    }
    const double t0 = std::asin(lo / bound);
    const double t1 = std::asin(hi / bound);
    for (std::size_t i = 0; i < a.points; ++i) {
      double x = bound * std::sin(t0 + (t1 - t0) * static_cast<double>(i) / last);
      if (i == 0) x = lo;
      if (i + 1 == a.points) x = hi;
      table.rows.push_back({x, law.density(x)});
    }
  } else {
    throw Error(ErrorKind::ConfigInvalid, "--grid must be uniform or angular");
  }
  table.m2 = law.even_moment(1);
  table.m4 = law.even_moment(2);
  table.m6 = law.even_moment(3);
  return table;
}

int cmd_density(const DensityArgs& a, std::ostream& out) {
  const auto table = density_table(a);
  if (a.out_path.empty()) {
    write_density(out, table);
    return kOk;
  }
  std::ofstream file(a.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::ConfigInvalid, "cannot write density file", a.out_path);
  write_density(file, table);
  return kOk;
}

int cmd_fit(const std::string& moments_path, const std::string& out_dir,
            const std::vector<SessionLabel>& sessions, const FitSelection& selection,
            std::ostream& out) {
  std::ifstream in(moments_path);
  if (!in) throw Error(ErrorKind::Io, "cannot open moments file", moments_path);
  const auto profiles = read_moments(in);
  std::vector<SessionFit> fits;
  for (const auto& p : profiles) {
    if (std::find(sessions.begin(), sessions.end(), p.label) == sessions.end()) continue;
    fits.push_back(fit_profile(p, selection));
  }
  if (fits.empty()) throw Error(ErrorKind::NoData, "no moment rows for the selected sessions", moments_path);

  OutputSet outputs(out_dir);
  outputs.write_json("fit_kurtosis.json", fits_json(fits, true));
  outputs.write_json("fit_m6.json", fits_json(fits, false));
  outputs.commit();
  for (const auto& f : fits) {
    out << fmt::format("{}: K={:.6g} B4={:.6g}  M6={:.6g} B6={:.6g}\n", to_string(f.label),
                       f.kurtosis.params.scale, f.kurtosis.params.decay, f.sixth.params.scale,
                       f.sixth.params.decay);
  }
  return kOk;
}

}  // namespace

std::vector<int> parse_delta_list(const std::string& text) {
  std::vector<int> deltas;
  auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorKind::ConfigInvalid, fmt::format("bad delta '{}'", s));
    }
    return v;
  };
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      deltas.push_back(to_int(item));
      continue;
    }
    const int lo = to_int(std::string_view(item).substr(0, dots));
    const int hi = to_int(std::string_view(item).substr(dots + 2));
    if (lo > hi) throw Error(ErrorKind::ConfigInvalid, fmt::format("empty delta range '{}'", item));
    for (int d = lo; d <= hi; ++d) deltas.push_back(d);
  }
  return deltas;
}

AnalysisConfig AnalysisConfig::from_json(const nlohmann::json& j) {
  try {
    AnalysisConfig cfg;
    if (j.contains("input")) {
      const auto& in = j.at("input");
      if (in.is_string()) {
        cfg.inputs = {in.get<std::string>()};
      } else {
        cfg.inputs = in.get<std::vector<std::string>>();
      }
    }
    cfg.calendar_path = j.value("calendar", cfg.calendar_path);
    cfg.out_dir = j.value("out", cfg.out_dir);
    if (j.contains("deltas")) {
      const auto& d = j.at("deltas");
      cfg.options.deltas = d.is_string() ? parse_delta_list(d.get<std::string>())
                                         : d.get<std::vector<int>>();
    }
    if (j.contains("sessions")) {
      cfg.options.sessions.clear();
      for (const auto& s : j.at("sessions")) {
        cfg.options.sessions.push_back(parse_session_label(s.get<std::string>()));
      }
    }
    if (j.contains("std_mode")) cfg.options.std_mode = parse_std_mode(j.at("std_mode").get<std::string>());
    cfg.options.fit.delta_min = j.value("delta_min", cfg.options.fit.delta_min);
    cfg.options.fit.weighted = j.value("weighted", cfg.options.fit.weighted);
    cfg.options.threads = j.value("threads", cfg.options.threads);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what(), "analysis config");
  }
}

nlohmann::json AnalysisConfig::to_json() const {
  nlohmann::json j = options.to_json();
  j["input"] = inputs;
  j["calendar"] = calendar_path;
  j["out"] = out_dir;
  return j;
}

const std::vector<std::string>& analysis_outputs() {
  static const std::vector<std::string> names{
      "rv_table.csv", "signature.csv",     "zones.csv",  "moments.csv",
      "moments_theory.csv", "fit_kurtosis.json", "fit_m6.json", "summary.json"};
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Session-separated realized volatility and finite-sample moment analysis", "rvkit"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "RV, zone returns, moments and fits from ticks");
  std::string an_config, an_calendar, an_deltas, an_sessions, an_out, an_std;
  std::vector<std::string> an_inputs;
  int an_delta_min = 1;
  std::size_t an_threads = 0;
  bool an_weighted = false, an_emit = false;
  auto* o_config = analyze->add_option("--config", an_config, "JSON analysis config");
  auto* o_input = analyze->add_option("--input", an_inputs, "tick CSV file(s), in time order");
  auto* o_cal = analyze->add_option("--calendar", an_calendar, "calendar JSON");
  auto* o_deltas = analyze->add_option("--deltas", an_deltas, "e.g. 1..40 or 1,5,10");
  auto* o_sessions = analyze->add_option("--sessions", an_sessions, "MS,AS");
  auto* o_out = analyze->add_option("--out", an_out, "output directory");
  auto* o_std = analyze->add_option("--std-mode", an_std, "telescoped|openclose");
  auto* o_dmin = analyze->add_option("--delta-min", an_delta_min, "smallest delta used in fits");
  auto* o_weighted = analyze->add_flag("--weighted", an_weighted, "1/se^2 weighted fits");
  auto* o_threads = analyze->add_option("--threads", an_threads, "worker threads (0 = all cores)");
  analyze->add_flag("--emit-config", an_emit, "print the resolved config and exit");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "synthetic tick data with known truth");
  std::string sim_config, sim_out = "sim_out";
  std::uint64_t sim_seed = 0;
  int sim_days = 0;
  std::size_t sim_threads = 0;
  bool sim_emit = false;
  simulate->add_option("--config", sim_config, "JSON simulation config");
  simulate->add_option("--out", sim_out, "output directory (ticks.csv, truth.json)");
  auto* o_seed = simulate->add_option("--seed", sim_seed, "override seed");
  auto* o_days = simulate->add_option("--days", sim_days, "override day count");
  simulate->add_option("--threads", sim_threads, "worker threads (0 = all cores)");
  simulate->add_flag("--emit-config", sim_emit, "print the resolved config and exit");

  // density
  auto* density = app.add_subcommand("density", "finite-sample density grid and moments");
  DensityArgs dargs;
  double d_from = 0, d_to = 0;
  density->add_option("--n", dargs.n, "intraday return count")->required();
  density->add_option("--points", dargs.points, "grid points");
  density->add_option("--grid", dargs.grid, "uniform|angular");
  auto* o_from = density->add_option("--from", d_from, "grid start (default -sqrt(n))");
  auto* o_to = density->add_option("--to", d_to, "grid end (default sqrt(n))");
  density->add_option("--out", dargs.out_path, "output CSV (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "fit decay curves to a moments CSV");
  std::string fit_moments, fit_out = ".", fit_sessions = "MS,AS";
  FitSelection fit_sel;
  fit->add_option("--moments", fit_moments, "moments.csv from analyze")->required();
  fit->add_option("--out", fit_out, "output directory");
  fit->add_option("--sessions", fit_sessions, "MS,AS");
  fit->add_option("--delta-min", fit_sel.delta_min, "smallest delta used");
  fit->add_flag("--weighted", fit_sel.weighted, "1/se^2 weights");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", "config", e.what(), {});
    return kConfigError;
  }

  try {
    if (analyze->parsed()) {
      AnalysisConfig cfg;
      if (o_config->count() > 0) cfg = AnalysisConfig::from_json(read_json_file(an_config));
      if (o_input->count() > 0) cfg.inputs = an_inputs;
      if (o_cal->count() > 0) cfg.calendar_path = an_calendar;
      if (o_deltas->count() > 0) cfg.options.deltas = parse_delta_list(an_deltas);
      if (o_sessions->count() > 0) cfg.options.sessions = parse_sessions(an_sessions);
      if (o_out->count() > 0) cfg.out_dir = an_out;
      if (o_std->count() > 0) cfg.options.std_mode = parse_std_mode(an_std);
      if (o_dmin->count() > 0) cfg.options.fit.delta_min = an_delta_min;
      if (o_weighted->count() > 0) cfg.options.fit.weighted = an_weighted;
      if (o_threads->count() > 0) cfg.options.threads = an_threads;
      if (cfg.options.deltas.empty()) throw Error(ErrorKind::ConfigInvalid, "delta list is empty");
      if (an_emit) {
        out << cfg.to_json().dump(2) << '\n';
        return kOk;
      }
      return cmd_analyze(cfg, out);
    }
    if (simulate->parsed()) {
      nlohmann::json j = sim_config.empty() ? nlohmann::json::object() : read_json_file(sim_config);
      if (o_seed->count() > 0) j["seed"] = sim_seed;
      if (o_days->count() > 0) j["days"] = sim_days;
      const auto cfg = SimConfig::from_json(j);
      if (sim_emit) {
        out << cfg.to_json().dump(2) << '\n';
        return kOk;
      }
      return cmd_simulate(cfg, sim_out, sim_threads, out);
    }
    if (density->parsed()) {
      if (o_from->count() > 0) dargs.from = d_from;
      if (o_to->count() > 0) dargs.to = d_to;
      return cmd_density(dargs, out);
    }
    if (fit->parsed()) {
      return cmd_fit(fit_moments, fit_out, parse_sessions(fit_sessions), fit_sel, out);
    }
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), category_name(e.category()), e.what(), e.context());
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    report_error(err, "Unexpected", "data", e.what(), {});
    return kDataError;
  }
  return kConfigError;
}

}  // namespace rvkit::cli
