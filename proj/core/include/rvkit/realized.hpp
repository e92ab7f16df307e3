#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rvkit/sampling.hpp"

namespace rvkit {

struct RvRecord {
  SessionKey key;
  int delta_minutes = 0;
  double rv = 0.0;  // squared log-return units
  std::size_t n_returns = 0;

  friend bool operator==(const RvRecord&, const RvRecord&) = default;
};

/// Sum of squared sampled returns.
RvRecord realized_volatility(const ReturnSeries& rs);

/// Close-over-open log returns of the four daily zones, each taken as
/// end-of-zone minus start-of-zone. `r_on` needs the previous trading day.
struct ZoneReturns {
  Date date;
  double r_ms = 0.0;
  double r_lb = 0.0;
  double r_as = 0.0;
  std::optional<double> r_on;

  friend bool operator==(const ZoneReturns&, const ZoneReturns&) = default;
};

/// Opening price is the first trade inside the window, closing price the last.
ZoneReturns zone_returns(const SessionSlice& ms, const SessionSlice& as,
                         std::optional<double> previous_as_close = std::nullopt);

struct ZoneTable {
  std::vector<ZoneReturns> rows;
  std::vector<Date> skipped;  // days missing MS or AS
};

/// Zone returns for every day of a split that has both sessions. A day's
/// overnight return is only filled when the previous calendar trading day
/// also had an AS slice.
ZoneTable zone_returns(const SplitResult& split, const SessionCalendar& calendar);

struct SignaturePoint {
  int delta_minutes = 0;
  double mean_rv = 0.0;
  std::size_t day_count = 0;

  friend bool operator==(const SignaturePoint&, const SignaturePoint&) = default;
};

struct SignatureCurve {
  SessionLabel label = SessionLabel::MS;
  std::vector<SignaturePoint> points;
  /// (day, Δ) pairs absent from the records, relative to the days seen for
  /// this session at any Δ.
  std::size_t missing_pairs = 0;
};

/// Plain mean of rv over days, per Δ, summed in date order. Throws NoData
/// for a Δ without records.
SignatureCurve signature_curve(std::span<const RvRecord> records, SessionLabel label,
                               std::span<const int> deltas);

}  // namespace rvkit
