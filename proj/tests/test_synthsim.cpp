#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rvkit/error.hpp"
#include "rvkit/synthsim.hpp"
#include "test_support.hpp"

using namespace rvkit;
using namespace rvkit::testing;

namespace {

struct Stats {
  double n = 0, s = 0, s2 = 0;
  void add(double x) {
    n += 1;
    s += x;
    s2 += x * x;
  }
  double mean() const { return s / n; }
  double se() const { return std::sqrt((s2 / n - mean() * mean()) / n); }
};

SimConfig small_config(int days) {
  SimConfig cfg;
  cfg.days = days;
  cfg.vol_model = VolModel::constant(1e-4);
  return cfg;
}

}  // namespace

TEST(DrawSessionVariance, Constant) {
  CounterRng rng(1, 1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(draw_session_variance(VolModel::constant(1e-4), rng), 1e-4);
}

TEST(DrawSessionVariance, LogNormalLogMean) {
  CounterRng rng(1, 2);
  Stats st;
  for (int i = 0; i < 1'000'000; ++i) st.add(std::log(draw_session_variance(VolModel::log_normal(-9.2, 0.5), rng)));
  EXPECT_NEAR(st.mean(), -9.2, 3 * st.se());
}

TEST(DrawSessionVariance, InverseGammaMean) {
  CounterRng rng(1, 3);
  Stats st;
  for (int i = 0; i < 1'000'000; ++i) st.add(draw_session_variance(VolModel::inverse_gamma(4, 3e-4), rng));
  EXPECT_NEAR(st.mean(), 1e-4, 3 * st.se());
  EXPECT_NEAR(VolModel::inverse_gamma(4, 3e-4).mean(), 1e-4, 1e-19);
}

TEST(VolModel, Validation) {
  EXPECT_THROW(VolModel::constant(-1).validate(), Error);
  EXPECT_THROW(VolModel::log_normal(-9, -0.5).validate(), Error);
  EXPECT_THROW(VolModel::inverse_gamma(1.0, 1e-4).validate(), Error);
  EXPECT_NO_THROW(VolModel::log_normal(-9.2, 0.5).validate());
}

TEST(SessionPath, ZeroVariance) {
  CounterRng rng(2, 1);
  const auto inc = simulate_session_path(0.0, 7200, 60, rng);
  ASSERT_EQ(inc.size(), 120u);
  for (const double x : inc) EXPECT_EQ(x, 0.0);
}

TEST(SessionPath, SquaredIncrementsSumToSigma2InExpectation) {
  CounterRng rng(2, 2);
  Stats st;
  for (int i = 0; i < 10'000; ++i) {
    double rv = 0;
    for (const double x : simulate_session_path(1e-4, 7200, 1, rng)) rv += x * x;
    st.add(rv);
  }
  EXPECT_NEAR(st.mean(), 1e-4, 3 * st.se());
}

TEST(SessionPath, SessionReturnVariance) {
  CounterRng rng(2, 3);
  Stats st;
  for (int i = 0; i < 100'000; ++i) {
    double r = 0;
    for (const double x : simulate_session_path(1e-4, 9000, 60, rng)) r += x;
    st.add(r * r);
  }
  EXPECT_NEAR(st.mean(), 1e-4, 3 * st.se());
}

TEST(ApplyNoise, IdentityCases) {
  CounterRng rng(3, 1);
  std::vector<double> x;
  for (int i = 0; i < 50; ++i) x.push_back(9.2 + 1e-3 * rng.normal());
  EXPECT_EQ(apply_noise(x, {}, rng), x);
  EXPECT_EQ(apply_noise(x, {NoiseKind::Iid, 0.0, 1}, rng), x);
  EXPECT_EQ(apply_noise(x, {NoiseKind::Smoothing, 0.0, 1}, rng), x);
}

TEST(ApplyNoise, SmoothingIsTrailingMean) {
  CounterRng rng(3, 2);
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const auto y = apply_noise(x, {NoiseKind::Smoothing, 0.0, 3}, rng);
  const std::vector<double> want{1, 1.5, 2, 3, 4, 5};
  EXPECT_EQ(y, want);
}

TEST(ApplyNoise, IidAddsNoiseOfGivenScale) {
  CounterRng rng(3, 3);
  const std::vector<double> x(200'000, 5.0);
  const auto y = apply_noise(x, {NoiseKind::Iid, 1e-4, 1}, rng);
  Stats st;
  for (std::size_t i = 0; i < y.size(); ++i) st.add((y[i] - x[i]) * (y[i] - x[i]));
  EXPECT_NEAR(st.mean(), 1e-8, 3 * st.se());
}

TEST(NoiseBias, Arithmetic) {
  EXPECT_EQ(noise_bias_estimate(120, 0.0), 0.0);
  EXPECT_NEAR(noise_bias_estimate(120, 1e-4), 2.4e-6, 1e-20);
}

TEST(NoiseBias, MatchesSimulatedMorningSessions) {
  CounterRng rng(4, 1);
  Stats st;
  const NoiseModel noise{NoiseKind::Iid, 1e-4, 1};
  for (int s = 0; s < 10'000; ++s) {
    const auto inc = simulate_session_path(1e-4, 7200, 60, rng);
    std::vector<double> lv{0.0};
    for (const double x : inc) lv.push_back(lv.back() + x);
    const auto obs = apply_noise(lv, noise, rng);
    double rv = 0, rv_star = 0;
    for (std::size_t i = 1; i < lv.size(); ++i) {
      rv += (lv[i] - lv[i - 1]) * (lv[i] - lv[i - 1]);
      rv_star += (obs[i] - obs[i - 1]) * (obs[i] - obs[i - 1]);
    }
    st.add(rv_star - rv);
  }
  EXPECT_NEAR(st.mean(), noise_bias_estimate(120, 1e-4), 3 * st.se());
}

TEST(SimConfig, Validation) {
  auto cfg = small_config(0);
  try {
    cfg.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigInvalid);
  }
  cfg = small_config(1);
  cfg.tick_interval_seconds = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config(1);
  cfg.noise_model = {NoiseKind::Iid, -1.0, 1};
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config(1);
  cfg.noise_model = {NoiseKind::Smoothing, 0.0, 0};
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(SimConfig, JsonRoundTrip) {
  SimConfig cfg;
  cfg.days = 17;
  cfg.seed = 9;
  cfg.vol_model = VolModel::inverse_gamma(4, 3e-4);
  cfg.noise_model = {NoiseKind::Smoothing, 0.0, 12};
  const auto back = SimConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_EQ(back.days, 17);
  EXPECT_EQ(back.noise_model.window_ticks, 12);
  EXPECT_THROW(SimConfig::from_json(nlohmann::json{{"vol_model", {{"kind", "Weird"}}}}), Error);
  EXPECT_THROW(SimConfig::from_json(nlohmann::json{{"days", "many"}}), Error);
}

TEST(Simulator, TickCountsOnOneDay) {
  Simulator sim(small_config(1));
  std::vector<SimulatedDay> days;
  sim.run([&](const SimulatedDay& d) { days.push_back(d); });
  ASSERT_EQ(days.size(), 1u);
  const auto& ticks = days[0].ticks;
  ASSERT_EQ(ticks.size(), 121u + 151u);
  const Date d = days[0].truth.date;
  EXPECT_EQ(ticks.front().time, LocalTime{d} + std::chrono::hours{9});
  EXPECT_EQ(ticks[120].time, LocalTime{d} + std::chrono::hours{11});
  EXPECT_EQ(ticks[121].time, LocalTime{d} + std::chrono::minutes{12 * 60 + 30});
  EXPECT_EQ(ticks.back().time, LocalTime{d} + std::chrono::hours{15});
  EXPECT_EQ(days[0].truth.ms_sigma2, 1e-4);
}

TEST(Simulator, SkipsWeekends) {
  Simulator sim(small_config(10));
  for (const Date d : sim.days()) EXPECT_FALSE(is_weekend(d));
  EXPECT_EQ(sim.days().front(), day("2006-05-01"));
}

TEST(Simulator, NoiselessBoundaryPricesAreTicks) {
  Simulator sim(small_config(5));
  sim.run([](const SimulatedDay& d) {
    EXPECT_EQ(d.truth.boundary.ms_open, d.ticks.front().price);
    EXPECT_EQ(d.truth.boundary.ms_close, d.ticks[120].price);
    EXPECT_EQ(d.truth.boundary.as_open, d.ticks[121].price);
    EXPECT_EQ(d.truth.boundary.as_close, d.ticks.back().price);
    EXPECT_NE(d.truth.boundary.ms_close, d.truth.boundary.as_open);
  });
}

TEST(Simulator, OutputIndependentOfThreads) {
  auto cfg = small_config(600);
  cfg.noise_model = {NoiseKind::Iid, 1e-4, 1};
  std::ostringstream a, b, c;
  generate_dataset(cfg, a, nullptr, 1);
  generate_dataset(cfg, b, nullptr, 4);
  generate_dataset(cfg, c, nullptr, 1);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
  cfg.seed = 43;
  std::ostringstream d;
  generate_dataset(cfg, d, nullptr, 1);
  EXPECT_NE(a.str(), d.str());
}

TEST(Simulator, NoiseDoesNotChangeTruePath) {
  auto cfg = small_config(3);
  cfg.vol_model = VolModel::log_normal(-9.2, 0.5);
  std::ostringstream a, b;
  const auto t1 = generate_dataset(cfg, a);
  cfg.noise_model = {NoiseKind::Iid, 1e-4, 1};
  const auto t2 = generate_dataset(cfg, b);
  EXPECT_EQ(t1.to_json(), t2.to_json());
  EXPECT_NE(a.str(), b.str());
}

TEST(Simulator, DatasetParsesBackWithSummary) {
  std::stringstream csv;
  DatasetSummary summary;
  const auto truth = generate_dataset(small_config(4), csv, &summary);
  EXPECT_EQ(summary.days, 4u);
  EXPECT_EQ(summary.ticks, 4u * 272u);
  EXPECT_EQ(summary.mean_sigma2, 1e-4);
  const auto ticks = parse_ticks(csv, TimeZone::named("Asia/Tokyo"), "sim");
  EXPECT_EQ(ticks.size(), summary.ticks);
  const auto back = SimTruth::from_json(truth.to_json());
  ASSERT_EQ(back.days.size(), 4u);
  EXPECT_EQ(back.days[2].date, truth.days[2].date);
  EXPECT_EQ(back.days[2].boundary.as_close, truth.days[2].boundary.as_close);
}
