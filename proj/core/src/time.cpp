#include "rvkit/time.hpp"

#include <charconv>

#include <fmt/format.h>

namespace rvkit {
namespace {

// Parses exactly `width` decimal digits from the front of `text`.
std::optional<int> take_digits(std::string_view& text, std::size_t width) {
  if (text.size() < width) return std::nullopt;
  int value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  text.remove_prefix(width);
  return value;
}

bool take_char(std::string_view& text, char expected) {
  if (text.empty() || text.front() != expected) return false;
  text.remove_prefix(1);
  return true;
}

std::optional<Date> take_date(std::string_view& text) {
  const auto y = take_digits(text, 4);
  if (!y || !take_char(text, '-')) return std::nullopt;
  const auto m = take_digits(text, 2);
  if (!m || !take_char(text, '-')) return std::nullopt;
  const auto d = take_digits(text, 2);
  if (!d) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y},
                                        std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::optional<Millis> take_time(std::string_view& text) {
  const auto h = take_digits(text, 2);
  if (!h || !take_char(text, ':')) return std::nullopt;
  const auto mi = take_digits(text, 2);
  if (!mi) return std::nullopt;
  int s = 0;
  int ms = 0;
  if (take_char(text, ':')) {
    const auto sec = take_digits(text, 2);
    if (!sec) return std::nullopt;
    s = *sec;
    if (take_char(text, '.')) {
      std::size_t digits = 0;
      while (digits < text.size() && digits < 3 && text[digits] >= '0' && text[digits] <= '9') {
        ++digits;
      }
      if (digits == 0) return std::nullopt;
      ms = *take_digits(text, digits);
      for (std::size_t i = digits; i < 3; ++i) ms *= 10;
    }
  }
  if (*h > 23 || *mi > 59 || s > 59) return std::nullopt;
  return std::chrono::hours{*h} + std::chrono::minutes{*mi} + std::chrono::seconds{s} +
         Millis{ms};
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  auto d = take_date(text);
  if (!d || !text.empty()) return std::nullopt;
  return d;
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

std::optional<Millis> parse_time_of_day(std::string_view text) {
  auto t = take_time(text);
  if (!t || !text.empty()) return std::nullopt;
  return t;
}

std::string format_time_of_day(Millis tod) {
  const auto total = tod.count();
  const auto ms = total % 1000;
  const auto s = (total / 1000) % 60;
  const auto m = (total / 60000) % 60;
  const auto h = total / 3600000;
  if (ms != 0) return fmt::format("{:02d}:{:02d}:{:02d}.{:03d}", h, m, s, ms);
  if (s != 0) return fmt::format("{:02d}:{:02d}:{:02d}", h, m, s);
  return fmt::format("{:02d}:{:02d}", h, m);
}

std::optional<LocalTime> parse_local_timestamp(std::string_view text) {
  const auto d = take_date(text);
  if (!d || !take_char(text, 'T')) return std::nullopt;
  const auto t = take_time(text);
  if (!t || !text.empty()) return std::nullopt;
  return LocalTime{*d} + *t;
}

std::string format_local_timestamp(LocalTime t) {
  const auto tod = time_of_day(t).count();
  return fmt::format("{}T{:02d}:{:02d}:{:02d}.{:03d}", format_date(date_of(t)), tod / 3600000,
                     (tod / 60000) % 60, (tod / 1000) % 60, tod % 1000);
}

bool is_weekend(Date d) {
  const std::chrono::weekday wd{d};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace rvkit
