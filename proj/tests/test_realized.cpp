#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rvkit/error.hpp"
#include "rvkit/realized.hpp"
#include "test_support.hpp"

using namespace rvkit;
using namespace rvkit::testing;

namespace {

ReturnSeries series_of(std::vector<double> r) {
  ReturnSeries rs;
  rs.returns = std::move(r);
  rs.delta_minutes = 5;
  rs.source = {day("2024-01-04"), SessionLabel::AS};
  return rs;
}

RvRecord record(const char* date, SessionLabel label, int delta, double rv) {
  return {{day(date), label}, delta, rv, 10};
}

}  // namespace

TEST(RealizedVolatility, ZeroReturns) {
  const auto rec = realized_volatility(series_of({0, 0, 0}));
  EXPECT_EQ(rec.rv, 0.0);
  EXPECT_EQ(rec.n_returns, 3u);
  EXPECT_EQ(rec.delta_minutes, 5);
  EXPECT_EQ(rec.key.label, SessionLabel::AS);
}

TEST(RealizedVolatility, TwoReturns) {
  EXPECT_NEAR(realized_volatility(series_of({0.01, -0.02})).rv, 0.0005, 1e-18);
}

TEST(RealizedVolatility, MatchesExtendedPrecisionFold) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> z(0.0, 1e-3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> r(1000);
    for (auto& x : r) x = z(gen);
    long double oracle = 0.0L;
    for (const double x : r) oracle += static_cast<long double>(x) * x;
    const double rv = realized_volatility(series_of(r)).rv;
    EXPECT_NEAR(rv, static_cast<double>(oracle), 1e-15 * static_cast<double>(oracle) * 10);
  }
}

TEST(RealizedVolatility, ZeroingAReturnNeverIncreasesRv) {
  std::mt19937_64 gen(19);
  std::normal_distribution<double> z(0.0, 1e-3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> r(30);
    for (auto& x : r) x = z(gen);
    const double base = realized_volatility(series_of(r)).rv;
    EXPECT_GT(base, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      auto z2 = r;
      z2[i] = 0.0;
      EXPECT_LE(realized_volatility(series_of(z2)).rv, base);
    }
  }
  std::vector<double> single(20, 0.0);
  single[7] = 1e-9;
  EXPECT_GT(realized_volatility(series_of(single)).rv, 0.0);
}

TEST(RealizedVolatility, InvariantUnderPriceScaling) {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> z(0.0, 1e-3);
  std::vector<Tick> ticks;
  double lp = std::log(12000.0);
  const LocalTime open = at("2024-01-04T09:00:00");
  for (int s = 0; s <= 7200; s += 10) {
    ticks.push_back({open + std::chrono::seconds{s}, std::exp(lp)});
    lp += z(gen);
  }
  auto scaled = ticks;
  for (auto& t : scaled) t.price *= 10.0;
  for (const int delta : {1, 5, 7, 30}) {
    const auto a = intraday_returns(sample_grid_prices(slice_of(ticks, "2024-01-04", SessionLabel::MS), delta));
    const auto b = intraday_returns(sample_grid_prices(slice_of(scaled, "2024-01-04", SessionLabel::MS), delta));
    ASSERT_EQ(a.n(), b.n());
    for (std::size_t i = 0; i < a.n(); ++i) EXPECT_NEAR(a.returns[i], b.returns[i], 1e-14);
    const double rva = realized_volatility(a).rv;
    EXPECT_NEAR(realized_volatility(b).rv, rva, 1e-12 * rva);
  }
}

TEST(ZoneReturns, FlatDay) {
  const std::vector<Tick> ms{tick("2024-01-04T09:00:00", 100), tick("2024-01-04T11:00:00", 100)};
  const std::vector<Tick> as{tick("2024-01-04T12:30:00", 100), tick("2024-01-04T15:00:00", 100)};
  const auto z = zone_returns(slice_of(ms, "2024-01-04", SessionLabel::MS),
                              slice_of(as, "2024-01-04", SessionLabel::AS), 100.0);
  EXPECT_EQ(z.r_ms, 0.0);
  EXPECT_EQ(z.r_lb, 0.0);
  EXPECT_EQ(z.r_as, 0.0);
  ASSERT_TRUE(z.r_on);
  EXPECT_EQ(*z.r_on, 0.0);
}

TEST(ZoneReturns, ExactLogs) {
  const std::vector<Tick> ms{tick("2024-01-04T09:00:00", 100), tick("2024-01-04T10:00:00", 99),
                             tick("2024-01-04T11:00:00", 101)};
  const std::vector<Tick> as{tick("2024-01-04T12:30:00", 101), tick("2024-01-04T15:00:00", 102)};
  const auto z = zone_returns(slice_of(ms, "2024-01-04", SessionLabel::MS),
                              slice_of(as, "2024-01-04", SessionLabel::AS));
  EXPECT_NEAR(z.r_ms, std::log(1.01), 1e-15);
  EXPECT_EQ(z.r_lb, 0.0);
  EXPECT_NEAR(z.r_as, std::log(102.0 / 101.0), 1e-15);
  EXPECT_FALSE(z.r_on);
}

TEST(ZoneReturns, MissingSession) {
  const std::vector<Tick> ms{tick("2024-01-04T09:00:00", 100)};
  const std::vector<Tick> none;
  try {
    zone_returns(slice_of(ms, "2024-01-04", SessionLabel::MS),
                 slice_of(none, "2024-01-04", SessionLabel::AS));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingSession);
  }
}

TEST(ZoneReturns, TwoDaysTelescopeToOpenToOpen) {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> px(90, 110);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Tick> ticks;
    for (const char* d : {"2024-01-04", "2024-01-05"}) {
      for (const char* t : {"T09:00:00", "T10:00:00", "T11:00:00", "T11:30:00", "T12:30:00",
                            "T14:00:00", "T15:00:00", "T18:00:00"}) {
        ticks.push_back(tick(std::string(d) + t, px(gen)));
      }
    }
    const TickSeries ts(ticks);
    const auto cal = SessionCalendar::tokyo({day("2024-01-04"), day("2024-01-05")});
    const auto table = zone_returns(split_sessions(ts, cal), cal);
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_FALSE(table.rows[0].r_on);
    ASSERT_TRUE(table.rows[1].r_on);
    const auto& d1 = table.rows[0];
    const double sum = d1.r_ms + d1.r_lb + d1.r_as + *table.rows[1].r_on;
    const double open_to_open = std::log(ticks[8].price) - std::log(ticks[0].price);
    EXPECT_NEAR(sum, open_to_open, 1e-12);
  }
}

TEST(ZoneReturns, OvernightNeedsPreviousAfternoon) {
  const TickSeries ts({tick("2024-01-04T09:30:00", 100), tick("2024-01-05T09:30:00", 101),
                       tick("2024-01-05T13:00:00", 102)});
  const auto cal = SessionCalendar::tokyo({day("2024-01-04"), day("2024-01-05")});
  const auto table = zone_returns(split_sessions(ts, cal), cal);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_FALSE(table.rows[0].r_on);
  ASSERT_EQ(table.skipped.size(), 1u);
  EXPECT_EQ(table.skipped[0], day("2024-01-04"));
}

TEST(SignatureCurve, SingleDayMeanIsThatDay) {
  const std::vector<RvRecord> recs{record("2024-01-04", SessionLabel::MS, 1, 3e-4),
                                   record("2024-01-04", SessionLabel::MS, 5, 2e-4),
                                   record("2024-01-04", SessionLabel::AS, 1, 9.0)};
  const std::vector<int> deltas{1, 5};
  const auto curve = signature_curve(recs, SessionLabel::MS, deltas);
  ASSERT_EQ(curve.points.size(), 2u);
  EXPECT_EQ(curve.points[0].mean_rv, 3e-4);
  EXPECT_EQ(curve.points[1].mean_rv, 2e-4);
  EXPECT_EQ(curve.points[0].day_count, 1u);
  EXPECT_EQ(curve.missing_pairs, 0u);
}

TEST(SignatureCurve, IdenticalDaysGiveConstantCurve) {
  std::vector<RvRecord> recs;
  for (const char* d : {"2024-01-04", "2024-01-05", "2024-01-08"}) {
    for (const int delta : {1, 2, 3}) recs.push_back(record(d, SessionLabel::AS, delta, 0.25));
  }
  const std::vector<int> deltas{1, 2, 3};
  for (const auto& p : signature_curve(recs, SessionLabel::AS, deltas).points) {
    EXPECT_EQ(p.mean_rv, 0.25);
    EXPECT_EQ(p.day_count, 3u);
  }
}

TEST(SignatureCurve, MissingPairsAndNoData) {
  const std::vector<RvRecord> recs{record("2024-01-04", SessionLabel::MS, 1, 1.0),
                                   record("2024-01-05", SessionLabel::MS, 1, 3.0),
                                   record("2024-01-05", SessionLabel::MS, 2, 5.0)};
  const std::vector<int> deltas{1, 2};
  const auto curve = signature_curve(recs, SessionLabel::MS, deltas);
  EXPECT_EQ(curve.points[0].mean_rv, 2.0);
  EXPECT_EQ(curve.points[1].day_count, 1u);
  EXPECT_EQ(curve.missing_pairs, 1u);

  const std::vector<int> absent{3};
  try {
    signature_curve(recs, SessionLabel::MS, absent);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoData);
  }
}

TEST(SignatureCurve, OrderIndependentOfRecordOrder) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0, 1e-3);
  std::vector<RvRecord> recs;
  Date d = day("2024-01-01");
  for (int i = 0; i < 300; ++i, d += std::chrono::days{1}) recs.push_back({{d, SessionLabel::MS}, 1, u(gen), 120});
  const std::vector<int> deltas{1};
  const double forward = signature_curve(recs, SessionLabel::MS, deltas).points[0].mean_rv;
  std::shuffle(recs.begin(), recs.end(), gen);
  EXPECT_EQ(signature_curve(recs, SessionLabel::MS, deltas).points[0].mean_rv, forward);
}
