#include "rvkit/realized.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "rvkit/error.hpp"

namespace rvkit {

RvRecord realized_volatility(const ReturnSeries& rs) {
  double rv = 0.0;
  for (const double r : rs.returns) rv += r * r;
  return RvRecord{rs.source, rs.delta_minutes, rv, rs.n()};
}

ZoneReturns zone_returns(const SessionSlice& ms, const SessionSlice& as,
                         std::optional<double> previous_as_close) {
  if (ms.ticks.empty() || as.ticks.empty()) {
    throw Error(ErrorKind::MissingSession, "zone returns need both MS and AS ticks",
                format_date(ms.ticks.empty() ? ms.date : as.date));
  }
  if (ms.date != as.date) {
    throw Error(ErrorKind::MismatchedKeys, "MS and AS slices come from different days",
                format_date(ms.date));
  }
  const double ms_open = std::log(ms.ticks.front().price);
  const double ms_close = std::log(ms.ticks.back().price);
  const double as_open = std::log(as.ticks.front().price);
  const double as_close = std::log(as.ticks.back().price);

  ZoneReturns z;
  z.date = ms.date;
  z.r_ms = ms_close - ms_open;
  z.r_lb = as_open - ms_close;
  z.r_as = as_close - as_open;
  if (previous_as_close) z.r_on = ms_open - std::log(*previous_as_close);
  return z;
}

ZoneTable zone_returns(const SplitResult& split, const SessionCalendar& calendar) {
  ZoneTable table;
  const SessionSlice* ms = nullptr;
  const SessionSlice* as = nullptr;
  std::optional<double> prev_close;
  std::size_t next = 0;
  const auto& slices = split.slices;

  for (const Date day : calendar.trading_days()) {
    ms = as = nullptr;
    for (; next < slices.size() && slices[next].date == day; ++next) {
      (slices[next].label == SessionLabel::MS ? ms : as) = &slices[next];
    }
    if (ms != nullptr && as != nullptr) {
      table.rows.push_back(zone_returns(*ms, *as, prev_close));
    } else {
      table.skipped.push_back(day);
    }
    prev_close = as != nullptr ? std::optional<double>{as->ticks.back().price} : std::nullopt;
  }
  return table;
}

SignatureCurve signature_curve(std::span<const RvRecord> records, SessionLabel label,
                               std::span<const int> deltas) {
  std::vector<const RvRecord*> selected;
  std::set<Date> days;
  for (const auto& r : records) {
    if (r.key.label != label) continue;
    selected.push_back(&r);
    days.insert(r.key.date);
  }
  std::stable_sort(selected.begin(), selected.end(), [](const RvRecord* a, const RvRecord* b) {
    return a->key.date < b->key.date;
  });

  SignatureCurve curve;
  curve.label = label;
  for (const int delta : deltas) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto* r : selected) {
      if (r->delta_minutes != delta) continue;
      sum += r->rv;
      ++count;
    }
    if (count == 0) {
      throw Error(ErrorKind::NoData, fmt::format("no RV records for delta {}", delta),
                  std::string(to_string(label)));
    }
    curve.points.push_back({delta, sum / static_cast<double>(count), count});
    curve.missing_pairs += days.size() - count;
  }
  return curve;
}

}  // namespace rvkit
