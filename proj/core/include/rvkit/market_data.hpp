#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rvkit/time.hpp"

namespace rvkit {

struct Tick {
  LocalTime time;
  double price = 0.0;

  friend bool operator==(const Tick&, const Tick&) = default;
};

/// Trade prices for one instrument. Construction enforces price > 0 and
/// strictly increasing timestamps.
class TickSeries {
 public:
  TickSeries() = default;
  explicit TickSeries(std::vector<Tick> ticks);

  std::span<const Tick> ticks() const noexcept { return ticks_; }
  std::size_t size() const noexcept { return ticks_.size(); }
  bool empty() const noexcept { return ticks_.empty(); }
  const Tick& operator[](std::size_t i) const { return ticks_[i]; }

  /// Ticks with `from <= time <= to`.
  std::span<const Tick> between(LocalTime from, LocalTime to) const;

  friend bool operator==(const TickSeries&, const TickSeries&) = default;

 private:
  std::vector<Tick> ticks_;
};

enum class SessionLabel { MS, AS };

std::string_view to_string(SessionLabel label);
SessionLabel parse_session_label(std::string_view text);

struct SessionSpec {
  SessionLabel label = SessionLabel::MS;
  Millis open{};   // offset from local midnight
  Millis close{};

  Millis length() const { return close - open; }
  friend bool operator==(const SessionSpec&, const SessionSpec&) = default;
};

/// Exchange time zone as a fixed UTC offset. Only used to convert epoch
/// millisecond timestamps into local exchange time.
struct TimeZone {
  std::string name = "Asia/Tokyo";
  std::chrono::minutes utc_offset{9 * 60};

  /// Resolves a small table of DST-free exchange zones or a `UTC+HH:MM` form.
  static TimeZone named(std::string_view name);
  friend bool operator==(const TimeZone&, const TimeZone&) = default;
};

/// Trading-session windows applied identically to every listed trading day.
class SessionCalendar {
 public:
  SessionCalendar(std::vector<SessionSpec> sessions, std::vector<Date> trading_days,
                  TimeZone tz = {});

  /// Morning 09:00-11:00 and afternoon 12:30-15:00, Asia/Tokyo.
  static std::vector<SessionSpec> tokyo_sessions();
  static SessionCalendar tokyo(std::vector<Date> trading_days);
  /// Every weekday in [start, end].
  static std::vector<Date> weekdays(Date start, Date end);

  static SessionCalendar from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::vector<SessionSpec>& sessions() const noexcept { return sessions_; }
  const std::vector<Date>& trading_days() const noexcept { return trading_days_; }
  const TimeZone& time_zone() const noexcept { return tz_; }

  const SessionSpec* find(SessionLabel label) const;
  const SessionSpec& session(SessionLabel label) const;
  bool is_trading_day(Date d) const;

  /// Same sessions and zone, different day list.
  SessionCalendar with_days(std::vector<Date> trading_days) const;
  /// Trading days taken from the dates that carry at least one tick.
  SessionCalendar with_days_from(const TickSeries& ticks) const;

 private:
  std::vector<SessionSpec> sessions_;
  std::vector<Date> trading_days_;
  TimeZone tz_;
};

/// Ticks of one session on one day. `ticks` views into the TickSeries that
/// was split, which must outlive the slice.
struct SessionSlice {
  Date date;
  SessionLabel label = SessionLabel::MS;
  LocalTime open;
  LocalTime close;
  std::span<const Tick> ticks;

  Millis length() const { return close - open; }
};

struct SplitResult {
  std::vector<SessionSlice> slices;      // ordered by (date, label)
  std::vector<Date> empty_days;          // trading days without any session tick
  std::size_t excluded_ticks = 0;        // gaps, non-trading days
};

/// Reads `timestamp,price` CSV. Timestamps are either ISO local time or epoch
/// milliseconds (detected from the first data row); epoch values are shifted
/// by `tz` into local exchange time.
TickSeries parse_ticks(std::istream& in, const TimeZone& tz = {},
                       std::string_view source = "<stream>");
TickSeries parse_ticks_file(const std::string& path, const TimeZone& tz = {});

/// ISO-timestamp CSV with prices at 17 significant digits.
void write_ticks(std::ostream& out, std::span<const Tick> ticks);

SplitResult split_sessions(const TickSeries& ticks, const SessionCalendar& calendar);

}  // namespace rvkit
