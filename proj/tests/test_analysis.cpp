#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rvkit/analysis.hpp"
#include "rvkit/error.hpp"
#include "rvkit/synthsim.hpp"
#include "test_support.hpp"

using namespace rvkit;
using namespace rvkit::testing;

namespace {

TickSeries simulated(int days, NoiseModel noise = {}) {
  SimConfig cfg;
  cfg.days = days;
  cfg.noise_model = noise;
  std::stringstream csv;
  generate_dataset(cfg, csv);
  return parse_ticks(csv, TimeZone::named("Asia/Tokyo"), "sim");
}

}  // namespace

TEST(AnalysisOptions, Normalize) {
  AnalysisOptions opts;
  opts.deltas = {5, 1, 5, 3};
  opts.sessions = {SessionLabel::AS, SessionLabel::MS, SessionLabel::AS};
  opts.normalize(SessionCalendar::tokyo({}));
  EXPECT_EQ(opts.deltas, (std::vector<int>{1, 3, 5}));
  EXPECT_EQ(opts.sessions, (std::vector<SessionLabel>{SessionLabel::MS, SessionLabel::AS}));

  AnalysisOptions empty;
  empty.deltas.clear();
  try {
    empty.normalize(SessionCalendar::tokyo({}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigInvalid);
  }
  AnalysisOptions big;
  big.deltas = {120};
  try {
    big.normalize(SessionCalendar::tokyo({}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DeltaTooLarge);
  }
  big.sessions = {SessionLabel::AS};
  EXPECT_NO_THROW(big.normalize(SessionCalendar::tokyo({})));
}

TEST(StdMode, Names) {
  EXPECT_EQ(parse_std_mode("telescoped"), StdMode::Telescoped);
  EXPECT_EQ(parse_std_mode(to_string(StdMode::OpenClose)), StdMode::OpenClose);
  EXPECT_THROW(parse_std_mode("closeopen"), Error);
}

TEST(CurvePoints, SelectionAndWeights) {
  MomentProfile p{SessionLabel::MS, {}};
  for (int d = 1; d <= 5; ++d) p.rows.push_back({d, 1.0, 3.0 - 0.1 * d, 15.0 - d, 100, 0.1, 0.2, 0.5, 0.0});
  const auto pts = curve_points(p, CurveModel::Mom6, {3, true});
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].delta_minutes, 3.0);
  EXPECT_EQ(pts[0].y, 12.0);
  EXPECT_EQ(pts[0].weight, 4.0);
  p.rows[4].se_kurtosis = 0.0;
  EXPECT_THROW(curve_points(p, CurveModel::Kurt4, {1, true}), Error);
  EXPECT_NO_THROW(curve_points(p, CurveModel::Kurt4, {1, false}));
}

TEST(RunAnalysis, SimulatedPipelineShapes) {
  const auto ticks = simulated(60);
  const auto cal = SessionCalendar::tokyo(
      SessionCalendar::weekdays(date_of(ticks[0].time), date_of(ticks[ticks.size() - 1].time)));
  AnalysisOptions opts;
  opts.deltas = {1, 2, 5, 10, 30};
  const auto res = run_analysis(ticks, cal, opts);
  EXPECT_EQ(res.counts.ticks, ticks.size());
  EXPECT_EQ(res.counts.excluded_ticks, 0u);
  EXPECT_EQ(res.counts.slices, 120u);
  EXPECT_EQ(res.rv_table.size(), 120u * 5);
  ASSERT_EQ(res.signatures.size(), 2u);
  ASSERT_EQ(res.moments.size(), 2u);
  ASSERT_EQ(res.theory.size(), 2u);
  ASSERT_EQ(res.fits.size(), 2u);
  EXPECT_EQ(res.zones.rows.size(), 60u);
  EXPECT_FALSE(res.zones.rows[0].r_on);
  EXPECT_TRUE(res.zones.rows[1].r_on);
  EXPECT_EQ(res.moments[0].rows.size(), 5u);
  EXPECT_EQ(res.moments[0].rows[0].count, 60u);
  EXPECT_NEAR(res.theory[0].rows[0].kurtosis, 360.0 / 122, 1e-14);
  EXPECT_NEAR(res.theory[1].rows[4].kurtosis, 15.0 / 7, 1e-14);
  EXPECT_TRUE(res.warnings.empty());
  for (const auto& row : res.moments[1].rows) {
    EXPECT_LE(row.kurtosis, static_cast<double>(150 / row.delta_minutes));
  }
}

TEST(RunAnalysis, ThreadCountDoesNotChangeResults) {
  const auto ticks = simulated(30, {NoiseKind::Iid, 1e-4, 1});
  const auto cal = SessionCalendar::tokyo({}).with_days_from(ticks);
  AnalysisOptions a;
  a.deltas = {1, 3, 10};
  a.threads = 1;
  AnalysisOptions b = a;
  b.threads = 4;
  const auto ra = run_analysis(ticks, cal, a);
  const auto rb = run_analysis(ticks, cal, b);
  EXPECT_EQ(ra.rv_table, rb.rv_table);
  EXPECT_EQ(ra.moments[0].rows, rb.moments[0].rows);
  EXPECT_EQ(ra.fits[1].kurtosis.params, rb.fits[1].kurtosis.params);
}

TEST(RunAnalysis, TelescopedAndOpenCloseAgreeOnMinuteGrid) {
  const auto ticks = simulated(20);
  const auto cal = SessionCalendar::tokyo({}).with_days_from(ticks);
  AnalysisOptions a;
  a.deltas = {1, 7, 13};
  AnalysisOptions b = a;
  b.std_mode = StdMode::OpenClose;
  const auto ra = run_analysis(ticks, cal, a);
  const auto rb = run_analysis(ticks, cal, b);
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(ra.moments[s].rows[i].kurtosis, rb.moments[s].rows[i].kurtosis, 1e-9);
    }
  }
}

TEST(RunAnalysis, EmptyDayAndFlatDayWarnings) {
  std::vector<Tick> ticks;
  for (const char* d : {"2024-01-04", "2024-01-08", "2024-01-09"}) {
    double p = 100;
    for (int m = 0; m <= 120; m += 1) {
      const auto t = LocalTime{day(d)} + std::chrono::hours{9} + std::chrono::minutes{m};
      ticks.push_back({t, std::string(d) == "2024-01-09" ? 100.0 : (p += (m % 3 ? 0.1 : -0.15))});
    }
    for (int m = 0; m <= 150; m += 1) {
      const auto t = LocalTime{day(d)} + std::chrono::minutes{12 * 60 + 30 + m};
      ticks.push_back({t, p += (m % 2 ? 0.05 : -0.07)});
    }
  }
  const auto cal = SessionCalendar::tokyo({day("2024-01-04"), day("2024-01-05"), day("2024-01-08"),
                                           day("2024-01-09")});
  AnalysisOptions opts;
  opts.deltas = {1, 5, 10};
  const auto res = run_analysis(TickSeries(ticks), cal, opts);
  ASSERT_EQ(res.counts.empty_days.size(), 1u);
  EXPECT_EQ(res.counts.empty_days[0], day("2024-01-05"));
  EXPECT_EQ(res.counts.zero_rv_excluded, 3u);
  bool saw_empty = false, saw_zero = false;
  for (const auto& w : res.warnings) {
    saw_empty |= w.find("EmptyDay") != std::string::npos;
    saw_zero |= w.find("zero-RV") != std::string::npos;
  }
  EXPECT_TRUE(saw_empty);
  EXPECT_TRUE(saw_zero);
  EXPECT_EQ(res.moments[0].rows[0].count, 2u);
}
