#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rvkit/market_data.hpp"
#include "rvkit/random.hpp"

namespace rvkit {

enum class VolKind { Constant, LogNormal, InverseGamma };

/// Law of the per-session integrated variance σ².
struct VolModel {
  VolKind kind = VolKind::LogNormal;
  double a = -9.2;  // Constant: σ²; LogNormal: mean of ln σ²; InverseGamma: shape
  double b = 0.5;   // LogNormal: sd of ln σ²; InverseGamma: scale

  static VolModel constant(double sigma2) { return {VolKind::Constant, sigma2, 0.0}; }
  static VolModel log_normal(double mu, double s) { return {VolKind::LogNormal, mu, s}; }
  static VolModel inverse_gamma(double shape, double scale) {
    return {VolKind::InverseGamma, shape, scale};
  }

  void validate() const;
  double mean() const;
};

enum class NoiseKind { None, Iid, Smoothing };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double omega = 0.0;    // Iid: sd of the additive log-price noise
  int window_ticks = 1;  // Smoothing: trailing moving-average width

  void validate() const;
};

struct SimConfig {
  int days = 1;
  /// Sessions and zone are used as given. Trading days come from the
  /// calendar when it lists at least `days` of them, else weekdays from
  /// `start_date`.
  SessionCalendar calendar = SessionCalendar::tokyo({});
  Date start_date = Date{std::chrono::year{2006} / 5 / 1};
  int tick_interval_seconds = 60;
  VolModel vol_model;
  NoiseModel noise_model;
  std::uint64_t seed = 42;
  double initial_log_price = 9.2103403719761836;  // ln 10000
  double overnight_jump_fraction = 0.1;  // of the mean session variance
  double lunch_jump_fraction = 0.01;

  /// Throws ConfigInvalid.
  void validate() const;
  std::vector<Date> trading_days() const;

  static SimConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct BoundaryPrices {
  double ms_open = 0.0;
  double ms_close = 0.0;
  double as_open = 0.0;
  double as_close = 0.0;
};

struct DayTruth {
  Date date;
  double ms_sigma2 = 0.0;
  double as_sigma2 = 0.0;
  BoundaryPrices boundary;  // true (noise-free) prices
};

struct SimTruth {
  std::vector<DayTruth> days;

  nlohmann::json to_json() const;
  static SimTruth from_json(const nlohmann::json& j);
};

struct SimulatedDay {
  DayTruth truth;
  std::vector<Tick> ticks;  // MS then AS, observed prices
};

double draw_session_variance(const VolModel& model, CounterRng& rng);

/// Gaussian increments N(0, σ² dt / T), T/dt of them, so that their squared
/// sum has expectation σ² exactly.
std::vector<double> simulate_session_path(double sigma2, int session_seconds, int tick_interval,
                                          CounterRng& rng);

/// None: identity. Iid: x + ω z per tick. Smoothing: trailing mean of the
/// last `window_ticks` inputs, truncated at the start of the span.
std::vector<double> apply_noise(std::span<const double> log_prices, const NoiseModel& model,
                                CounterRng& rng);

/// Expected upward RV bias 2 n ω² from i.i.d. noise.
double noise_bias_estimate(std::size_t n, double omega);

/// Generates days in calendar order. Each day draws from its own stream
/// derived from (seed, date); price levels are chained across days after
/// generation, so output does not depend on `threads`.
class Simulator {
 public:
  explicit Simulator(SimConfig config);

  const SimConfig& config() const noexcept { return config_; }
  const std::vector<Date>& days() const noexcept { return days_; }

  /// Calls `sink` once per day in date order.
  void run(const std::function<void(const SimulatedDay&)>& sink, std::size_t threads = 0) const;

 private:
  struct RelativeDay;
  RelativeDay simulate_relative(Date day) const;

  SimConfig config_;
  std::vector<Date> days_;
};

struct DatasetSummary {
  std::size_t days = 0;
  std::size_t ticks = 0;
  double mean_sigma2 = 0.0;  // over all simulated sessions
};

/// Writes the tick CSV and returns the truth alongside.
SimTruth generate_dataset(const SimConfig& config, std::ostream& csv,
                          DatasetSummary* summary = nullptr, std::size_t threads = 0);

}  // namespace rvkit
