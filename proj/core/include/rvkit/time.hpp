#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace rvkit {

using Millis = std::chrono::milliseconds;
/// Exchange-local wall-clock instant. Never carries a UTC offset.
using LocalTime = std::chrono::local_time<Millis>;
using Date = std::chrono::local_days;

inline Date date_of(LocalTime t) { return std::chrono::floor<std::chrono::days>(t); }
inline Millis time_of_day(LocalTime t) { return t - date_of(t); }

/// `YYYY-MM-DD`
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

/// `HH:MM`, `HH:MM:SS` or `HH:MM:SS.mmm`, returned as offset from midnight.
std::optional<Millis> parse_time_of_day(std::string_view text);
std::string format_time_of_day(Millis tod);

/// `YYYY-MM-DDTHH:MM:SS` with an optional `.mmm` fraction (1-3 digits).
std::optional<LocalTime> parse_local_timestamp(std::string_view text);
/// Always emits the millisecond fraction.
std::string format_local_timestamp(LocalTime t);

bool is_weekend(Date d);

}  // namespace rvkit
