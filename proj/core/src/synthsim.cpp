#include "rvkit/synthsim.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rvkit/error.hpp"
#include "rvkit/parallel.hpp"

namespace rvkit {
namespace {

std::string_view to_string(VolKind k) {
  switch (k) {
    case VolKind::Constant: return "Constant";
    case VolKind::LogNormal: return "LogNormal";
    case VolKind::InverseGamma: return "InverseGamma";
  }
  return "?";
}

std::string_view to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "None";
    case NoiseKind::Iid: return "Iid";
    case NoiseKind::Smoothing: return "Smoothing";
  }
  return "?";
}

int session_seconds(const SessionSpec& s) {
  return static_cast<int>(std::chrono::duration_cast<std::chrono::seconds>(s.length()).count());
}

std::uint64_t stream_of(Date day) {
  return static_cast<std::uint64_t>(day.time_since_epoch().count());
}

}  // namespace

void VolModel::validate() const {
  switch (kind) {
    case VolKind::Constant:
      if (!(a > 0.0)) throw Error(ErrorKind::ConfigInvalid, "Constant vol needs sigma2 > 0");
      break;
    case VolKind::LogNormal:
      if (!std::isfinite(a) || !(b > 0.0)) {
        throw Error(ErrorKind::ConfigInvalid, "LogNormal vol needs finite mu and s > 0");
      }
      break;
    case VolKind::InverseGamma:
      if (!(a > 3.0) || !(b > 0.0)) {
        throw Error(ErrorKind::ConfigInvalid, "InverseGamma vol needs shape > 3 and scale > 0");
      }
      break;
  }
}

double VolModel::mean() const {
  switch (kind) {
    case VolKind::Constant: return a;
    case VolKind::LogNormal: return std::exp(a + 0.5 * b * b);
    case VolKind::InverseGamma: return b / (a - 1.0);
  }
  return 0.0;
}

void NoiseModel::validate() const {
  if (kind == NoiseKind::None) return;
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorKind::ConfigInvalid, "noise omega must be finite and >= 0");
  }
  if (window_ticks < 1) throw Error(ErrorKind::ConfigInvalid, "noise window_ticks must be >= 1");
}

void SimConfig::validate() const {
  if (days < 1) throw Error(ErrorKind::ConfigInvalid, fmt::format("days = {} must be >= 1", days));
  if (tick_interval_seconds < 1) {
    throw Error(ErrorKind::ConfigInvalid, "tick_interval_seconds must be >= 1");
  }
  if (calendar.find(SessionLabel::MS) == nullptr || calendar.find(SessionLabel::AS) == nullptr) {
    throw Error(ErrorKind::ConfigInvalid, "simulation calendar needs MS and AS sessions");
  }
  for (const auto& s : calendar.sessions()) {
    if (s.length() % std::chrono::seconds{1} != Millis::zero() ||
        session_seconds(s) % tick_interval_seconds != 0) {
      throw Error(ErrorKind::ConfigInvalid,
                  fmt::format("tick interval {} s does not divide the {} session",
                              tick_interval_seconds, rvkit::to_string(s.label)));
    }
  }
  if (!std::isfinite(initial_log_price)) {
    throw Error(ErrorKind::ConfigInvalid, "initial_log_price must be finite");
  }
  if (!(overnight_jump_fraction >= 0.0) || !(lunch_jump_fraction >= 0.0)) {
    throw Error(ErrorKind::ConfigInvalid, "jump fractions must be >= 0");
  }
  vol_model.validate();
  noise_model.validate();
}

std::vector<Date> SimConfig::trading_days() const {
  const auto& listed = calendar.trading_days();
  if (listed.size() >= static_cast<std::size_t>(days)) {
    return {listed.begin(), listed.begin() + days};
  }
  std::vector<Date> out;
  out.reserve(static_cast<std::size_t>(days));
  for (Date d = start_date; out.size() < static_cast<std::size_t>(days); d += std::chrono::days{1}) {
    if (!is_weekend(d)) out.push_back(d);
  }
  return out;
}

SimConfig SimConfig::from_json(const nlohmann::json& j) {
  try {
    SimConfig cfg;
    cfg.days = j.value("days", cfg.days);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.tick_interval_seconds = j.value("tick_interval_seconds", cfg.tick_interval_seconds);
    cfg.initial_log_price = j.value("initial_log_price", cfg.initial_log_price);
    cfg.overnight_jump_fraction = j.value("overnight_jump_fraction", cfg.overnight_jump_fraction);
    cfg.lunch_jump_fraction = j.value("lunch_jump_fraction", cfg.lunch_jump_fraction);
    if (j.contains("start_date")) {
      const auto d = parse_date(j.at("start_date").get<std::string>());
      if (!d) throw Error(ErrorKind::ConfigInvalid, "bad start_date");
      cfg.start_date = *d;
    }
    if (j.contains("calendar")) cfg.calendar = SessionCalendar::from_json(j.at("calendar"));

    if (j.contains("vol_model")) {
      const auto& v = j.at("vol_model");
      const auto kind = v.at("kind").get<std::string>();
      if (kind == "Constant") {
        cfg.vol_model = VolModel::constant(v.at("sigma2").get<double>());
      } else if (kind == "LogNormal") {
        cfg.vol_model = VolModel::log_normal(v.at("mu").get<double>(), v.at("s").get<double>());
      } else if (kind == "InverseGamma") {
        cfg.vol_model =
            VolModel::inverse_gamma(v.at("shape").get<double>(), v.at("scale").get<double>());
      } else {
        throw Error(ErrorKind::ConfigInvalid, "unknown vol_model kind '" + kind + "'");
      }
    }
    if (j.contains("noise_model")) {
      const auto& n = j.at("noise_model");
      const auto kind = n.at("kind").get<std::string>();
      if (kind == "None") {
        cfg.noise_model = {};
      } else if (kind == "Iid") {
        cfg.noise_model = {NoiseKind::Iid, n.at("omega").get<double>(), 1};
      } else if (kind == "Smoothing") {
        cfg.noise_model = {NoiseKind::Smoothing, 0.0, n.at("window_ticks").get<int>()};
      } else {
        throw Error(ErrorKind::ConfigInvalid, "unknown noise_model kind '" + kind + "'");
      }
    }
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what(), "simulation config");
  }
}

nlohmann::json SimConfig::to_json() const {
  nlohmann::json j;
  j["days"] = days;
  j["seed"] = seed;
  j["tick_interval_seconds"] = tick_interval_seconds;
  j["initial_log_price"] = initial_log_price;
  j["overnight_jump_fraction"] = overnight_jump_fraction;
  j["lunch_jump_fraction"] = lunch_jump_fraction;
  j["start_date"] = format_date(start_date);
  j["calendar"] = calendar.to_json();
  nlohmann::json v{{"kind", std::string(to_string(vol_model.kind))}};
  switch (vol_model.kind) {
    case VolKind::Constant: v["sigma2"] = vol_model.a; break;
    case VolKind::LogNormal: v["mu"] = vol_model.a; v["s"] = vol_model.b; break;
    case VolKind::InverseGamma: v["shape"] = vol_model.a; v["scale"] = vol_model.b; break;
  }
  j["vol_model"] = v;
  nlohmann::json n{{"kind", std::string(to_string(noise_model.kind))}};
  if (noise_model.kind == NoiseKind::Iid) n["omega"] = noise_model.omega;
  if (noise_model.kind == NoiseKind::Smoothing) n["window_ticks"] = noise_model.window_ticks;
  j["noise_model"] = n;
  return j;
}

nlohmann::json SimTruth::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& d : days) {
    arr.push_back({{"date", format_date(d.date)},
                   {"ms_sigma2", d.ms_sigma2},
                   {"as_sigma2", d.as_sigma2},
                   {"boundary_prices",
                    {{"ms_open", d.boundary.ms_open},
                     {"ms_close", d.boundary.ms_close},
                     {"as_open", d.boundary.as_open},
                     {"as_close", d.boundary.as_close}}}});
  }
  return {{"days", arr}};
}

SimTruth SimTruth::from_json(const nlohmann::json& j) {
  try {
    SimTruth truth;
    for (const auto& d : j.at("days")) {
      DayTruth day;
      const auto date = parse_date(d.at("date").get<std::string>());
      if (!date) throw Error(ErrorKind::MalformedRow, "bad date in truth file");
      day.date = *date;
      day.ms_sigma2 = d.at("ms_sigma2").get<double>();
      day.as_sigma2 = d.at("as_sigma2").get<double>();
      const auto& b = d.at("boundary_prices");
      day.boundary = {b.at("ms_open").get<double>(), b.at("ms_close").get<double>(),
                      b.at("as_open").get<double>(), b.at("as_close").get<double>()};
      truth.days.push_back(day);
    }
    return truth;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRow, e.what(), "truth json");
  }
}

double draw_session_variance(const VolModel& model, CounterRng& rng) {
  switch (model.kind) {
    case VolKind::Constant: return model.a;
    case VolKind::LogNormal: return std::exp(model.a + model.b * rng.normal());
    case VolKind::InverseGamma: return model.b / rng.gamma(model.a);
  }
  return 0.0;
}

std::vector<double> simulate_session_path(double sigma2, int session_seconds, int tick_interval,
                                          CounterRng& rng) {
  const int steps = session_seconds / tick_interval;
  const double sd = std::sqrt(sigma2 * tick_interval / session_seconds);
  std::vector<double> inc(static_cast<std::size_t>(steps));
  for (auto& x : inc) x = sd * rng.normal();
  return inc;
}

std::vector<double> apply_noise(std::span<const double> log_prices, const NoiseModel& model,
                                CounterRng& rng) {
  std::vector<double> out(log_prices.begin(), log_prices.end());
  switch (model.kind) {
    case NoiseKind::None:
      break;
    case NoiseKind::Iid:
      for (auto& x : out) x += model.omega * rng.normal();
      break;
    case NoiseKind::Smoothing: {
      const auto w = static_cast<std::size_t>(model.window_ticks);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t first = i + 1 >= w ? i + 1 - w : 0;
        double sum = 0.0;
        for (std::size_t k = first; k <= i; ++k) sum += log_prices[k];
        out[i] = sum / static_cast<double>(i + 1 - first);
      }
      break;
    }
  }
  return out;
}

double noise_bias_estimate(std::size_t n, double omega) {
  return 2.0 * static_cast<double>(n) * omega * omega;
}

// One day's path relative to the previous day's true AS close.
struct Simulator::RelativeDay {
  Date date;
  double ms_sigma2 = 0.0;
  double as_sigma2 = 0.0;
  BoundaryPrices log_boundary;  // relative true log levels
  std::vector<LocalTime> times;
  std::vector<double> observed;  // relative observed log levels
};

Simulator::Simulator(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  days_ = config_.trading_days();
}

Simulator::RelativeDay Simulator::simulate_relative(Date day) const {
  const auto& cfg = config_;
  CounterRng rng(cfg.seed, stream_of(day));
  RelativeDay out;
  out.date = day;

  // Draw order is fixed: variances, gap jumps, paths, then noise. Noise is
  // last so the true path for a seed does not depend on the noise model.
  out.ms_sigma2 = draw_session_variance(cfg.vol_model, rng);
  out.as_sigma2 = draw_session_variance(cfg.vol_model, rng);
  const double mean_var = cfg.vol_model.mean();
  const double overnight = std::sqrt(cfg.overnight_jump_fraction * mean_var) * rng.normal();
  const double lunch = std::sqrt(cfg.lunch_jump_fraction * mean_var) * rng.normal();

  const auto& ms = cfg.calendar.session(SessionLabel::MS);
  const auto& as = cfg.calendar.session(SessionLabel::AS);
  const auto ms_inc = simulate_session_path(out.ms_sigma2, session_seconds(ms),
                                            cfg.tick_interval_seconds, rng);
  const auto as_inc = simulate_session_path(out.as_sigma2, session_seconds(as),
                                            cfg.tick_interval_seconds, rng);

  auto levels = [](double start, const std::vector<double>& inc) {
    std::vector<double> lv;
    lv.reserve(inc.size() + 1);
    lv.push_back(start);
    for (const double x : inc) lv.push_back(lv.back() + x);
    return lv;
  };
  const auto ms_levels = levels(overnight, ms_inc);
  const auto as_levels = levels(ms_levels.back() + lunch, as_inc);
  out.log_boundary = {ms_levels.front(), ms_levels.back(), as_levels.front(), as_levels.back()};

  const auto ms_obs = apply_noise(ms_levels, cfg.noise_model, rng);
  const auto as_obs = apply_noise(as_levels, cfg.noise_model, rng);

  const std::chrono::seconds dt{cfg.tick_interval_seconds};
  out.times.reserve(ms_obs.size() + as_obs.size());
  out.observed.reserve(ms_obs.size() + as_obs.size());
  for (const auto* spec : {&ms, &as}) {
    const auto& obs = spec == &ms ? ms_obs : as_obs;
    const LocalTime open = LocalTime{day} + spec->open;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      out.times.push_back(open + static_cast<long>(i) * dt);
      out.observed.push_back(obs[i]);
    }
  }
  return out;
}

void Simulator::run(const std::function<void(const SimulatedDay&)>& sink,
                    std::size_t threads) const {
  constexpr std::size_t kBatch = 256;
  double level = config_.initial_log_price;
  std::vector<RelativeDay> batch;
  for (std::size_t begin = 0; begin < days_.size(); begin += kBatch) {
    const std::size_t count = std::min(kBatch, days_.size() - begin);
    batch.assign(count, RelativeDay{});
    parallel_for(count, threads, [&](std::size_t i) { batch[i] = simulate_relative(days_[begin + i]); });

    for (const auto& rel : batch) {
      SimulatedDay day;
      day.truth.date = rel.date;
      day.truth.ms_sigma2 = rel.ms_sigma2;
      day.truth.as_sigma2 = rel.as_sigma2;
      day.truth.boundary = {std::exp(level + rel.log_boundary.ms_open),
                            std::exp(level + rel.log_boundary.ms_close),
                            std::exp(level + rel.log_boundary.as_open),
                            std::exp(level + rel.log_boundary.as_close)};
      day.ticks.reserve(rel.times.size());
      for (std::size_t i = 0; i < rel.times.size(); ++i) {
        day.ticks.push_back({rel.times[i], std::exp(level + rel.observed[i])});
      }
      sink(day);
      level += rel.log_boundary.as_close;
    }
  }
}

SimTruth generate_dataset(const SimConfig& config, std::ostream& csv, DatasetSummary* summary,
                          std::size_t threads) {
  Simulator sim(config);
  SimTruth truth;
  DatasetSummary stats;
  double sigma_sum = 0.0;
  csv << "timestamp,price\n";
  std::string buffer;
  sim.run(
      [&](const SimulatedDay& day) {
        truth.days.push_back(day.truth);
        sigma_sum += day.truth.ms_sigma2 + day.truth.as_sigma2;
        stats.ticks += day.ticks.size();
        buffer.clear();
        for (const auto& t : day.ticks) {
          buffer += format_local_timestamp(t.time);
          buffer += ',';
          buffer += fmt::format("{:.17g}", t.price);
          buffer += '\n';
        }
        csv << buffer;
      },
      threads);
  stats.days = truth.days.size();
  stats.mean_sigma2 = sigma_sum / (2.0 * static_cast<double>(stats.days));
  if (summary != nullptr) *summary = stats;
  return truth;
}

}  // namespace rvkit
