#include "rvkit/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <cstdint>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rvkit/error.hpp"

namespace rvkit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool looks_like_epoch(std::string_view field) {
  if (field.empty()) return false;
  std::size_t i = field.front() == '-' ? 1 : 0;
  if (i == field.size()) return false;
  for (; i < field.size(); ++i) {
    if (field[i] < '0' || field[i] > '9') return false;
  }
  return true;
}

void check_tick(const Tick& tick, const Tick* previous, const std::string& where) {
  if (!(tick.price > 0.0)) {
    throw Error(ErrorKind::NonPositivePrice, fmt::format("price {} is not positive", tick.price),
                where);
  }
  if (previous != nullptr && tick.time <= previous->time) {
    throw Error(ErrorKind::NonMonotoneTimestamp,
                fmt::format("timestamp {} does not follow {}", format_local_timestamp(tick.time),
                            format_local_timestamp(previous->time)),
                where);
  }
}

}  // namespace

TickSeries::TickSeries(std::vector<Tick> ticks) : ticks_(std::move(ticks)) {
  for (std::size_t i = 0; i < ticks_.size(); ++i) {
    check_tick(ticks_[i], i == 0 ? nullptr : &ticks_[i - 1], fmt::format("tick {}", i));
  }
}

std::span<const Tick> TickSeries::between(LocalTime from, LocalTime to) const {
  const auto first = std::lower_bound(ticks_.begin(), ticks_.end(), from,
                                      [](const Tick& t, LocalTime v) { return t.time < v; });
  const auto last = std::upper_bound(first, ticks_.end(), to,
                                     [](LocalTime v, const Tick& t) { return v < t.time; });
  return {first, last};
}

std::string_view to_string(SessionLabel label) {
  return label == SessionLabel::MS ? "MS" : "AS";
}

SessionLabel parse_session_label(std::string_view text) {
  if (text == "MS") return SessionLabel::MS;
  if (text == "AS") return SessionLabel::AS;
  throw Error(ErrorKind::ConfigInvalid, fmt::format("unknown session label '{}'", text));
}

TimeZone TimeZone::named(std::string_view name) {
  using std::chrono::minutes;
  struct Known {
    std::string_view name;
    int offset_minutes;
  };
  // DST-free zones only; a fixed offset is exact for them.
  static constexpr Known kKnown[] = {
      {"Asia/Tokyo", 540},    {"Asia/Seoul", 540},     {"Asia/Shanghai", 480},
      {"Asia/Hong_Kong", 480}, {"Asia/Singapore", 480}, {"Asia/Taipei", 480},
      {"Asia/Kolkata", 330},  {"UTC", 0},              {"Etc/UTC", 0},
  };
  for (const auto& k : kKnown) {
    if (k.name == name) return TimeZone{std::string(name), minutes{k.offset_minutes}};
  }
  // UTC+HH:MM / UTC-HH:MM
  if (name.size() == 9 && name.substr(0, 3) == "UTC" && (name[3] == '+' || name[3] == '-')) {
    if (auto tod = parse_time_of_day(name.substr(4))) {
      const auto off = std::chrono::duration_cast<minutes>(*tod);
      return TimeZone{std::string(name), name[3] == '+' ? off : -off};
    }
  }
  throw Error(ErrorKind::ConfigInvalid, fmt::format("unsupported time zone '{}'", name));
}

SessionCalendar::SessionCalendar(std::vector<SessionSpec> sessions, std::vector<Date> trading_days,
                                 TimeZone tz)
    : sessions_(std::move(sessions)), trading_days_(std::move(trading_days)), tz_(std::move(tz)) {
  if (sessions_.empty() || sessions_.size() > 2) {
    throw Error(ErrorKind::ConfigInvalid, "calendar needs one or two sessions");
  }
  for (std::size_t i = 0; i < sessions_.size(); ++i) {
    const auto& s = sessions_[i];
    if (s.open >= s.close) {
      throw Error(ErrorKind::ConfigInvalid,
                  fmt::format("session {} opens at or after its close", to_string(s.label)));
    }
    if (s.close > std::chrono::hours{24}) {
      throw Error(ErrorKind::ConfigInvalid, "session closes after midnight");
    }
    if (i > 0) {
      const auto& prev = sessions_[i - 1];
      if (prev.label != SessionLabel::MS || s.label != SessionLabel::AS) {
        throw Error(ErrorKind::ConfigInvalid, "sessions must be listed as MS then AS");
      }
      if (prev.close >= s.open) {
        throw Error(ErrorKind::ConfigInvalid, "MS and AS windows overlap");
      }
    }
  }
  for (std::size_t i = 1; i < trading_days_.size(); ++i) {
    if (trading_days_[i] <= trading_days_[i - 1]) {
      throw Error(ErrorKind::ConfigInvalid,
                  fmt::format("trading day {} is not after {}", format_date(trading_days_[i]),
                              format_date(trading_days_[i - 1])));
    }
  }
}

std::vector<SessionSpec> SessionCalendar::tokyo_sessions() {
  using namespace std::chrono;
  return {{SessionLabel::MS, hours{9}, hours{11}},
          {SessionLabel::AS, hours{12} + minutes{30}, hours{15}}};
}

SessionCalendar SessionCalendar::tokyo(std::vector<Date> trading_days) {
  return SessionCalendar(tokyo_sessions(), std::move(trading_days), TimeZone{});
}

std::vector<Date> SessionCalendar::weekdays(Date start, Date end) {
  std::vector<Date> days;
  for (Date d = start; d <= end; d += std::chrono::days{1}) {
    if (!is_weekend(d)) days.push_back(d);
  }
  return days;
}

SessionCalendar SessionCalendar::from_json(const nlohmann::json& j) {
  try {
    std::vector<SessionSpec> sessions;
    if (j.contains("sessions")) {
      for (const auto& s : j.at("sessions")) {
        SessionSpec spec;
        spec.label = parse_session_label(s.at("label").get<std::string>());
        const auto open = parse_time_of_day(s.at("open").get<std::string>());
        const auto close = parse_time_of_day(s.at("close").get<std::string>());
        if (!open || !close) {
          throw Error(ErrorKind::ConfigInvalid, "session open/close must be HH:MM[:SS]");
        }
        spec.open = *open;
        spec.close = *close;
        sessions.push_back(spec);
      }
    } else {
      sessions = tokyo_sessions();
    }

    TimeZone tz;
    if (j.contains("timezone")) tz = TimeZone::named(j.at("timezone").get<std::string>());

    std::vector<Date> days;
    if (j.contains("days")) {
      const auto& dj = j.at("days");
      auto date_field = [](const nlohmann::json& v) {
        const auto d = parse_date(v.get<std::string>());
        if (!d) throw Error(ErrorKind::ConfigInvalid, "bad date '" + v.get<std::string>() + "'");
        return *d;
      };
      if (dj.is_array()) {
        for (const auto& d : dj) days.push_back(date_field(d));
      } else {
        const Date start = date_field(dj.at("start"));
        const Date end = date_field(dj.at("end"));
        const bool skip_weekends = dj.value("weekends_excluded", true);
        for (Date d = start; d <= end; d += std::chrono::days{1}) {
          if (!skip_weekends || !is_weekend(d)) days.push_back(d);
        }
      }
    }
    return SessionCalendar(std::move(sessions), std::move(days), std::move(tz));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what(), "calendar");
  }
}

nlohmann::json SessionCalendar::to_json() const {
  nlohmann::json j;
  j["timezone"] = tz_.name;
  auto& sessions = j["sessions"] = nlohmann::json::array();
  for (const auto& s : sessions_) {
    sessions.push_back({{"label", std::string(to_string(s.label))},
                        {"open", format_time_of_day(s.open)},
                        {"close", format_time_of_day(s.close)}});
  }
  auto& days = j["days"] = nlohmann::json::array();
  for (const auto d : trading_days_) days.push_back(format_date(d));
  return j;
}

const SessionSpec* SessionCalendar::find(SessionLabel label) const {
  for (const auto& s : sessions_) {
    if (s.label == label) return &s;
  }
  return nullptr;
}

const SessionSpec& SessionCalendar::session(SessionLabel label) const {
  if (const auto* s = find(label)) return *s;
  throw Error(ErrorKind::ConfigInvalid,
              fmt::format("calendar has no {} session", to_string(label)));
}

bool SessionCalendar::is_trading_day(Date d) const {
  return std::binary_search(trading_days_.begin(), trading_days_.end(), d);
}

SessionCalendar SessionCalendar::with_days(std::vector<Date> trading_days) const {
  return SessionCalendar(sessions_, std::move(trading_days), tz_);
}

SessionCalendar SessionCalendar::with_days_from(const TickSeries& ticks) const {
  std::vector<Date> days;
  for (const auto& t : ticks.ticks()) {
    const Date d = date_of(t.time);
    if (days.empty() || days.back() != d) days.push_back(d);
  }
  return with_days(std::move(days));
}

TickSeries parse_ticks(std::istream& in, const TimeZone& tz, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return fmt::format("{}:{}", source, line_no); };

  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line) != "timestamp,price") {
    throw Error(ErrorKind::MalformedRow, "expected header 'timestamp,price'", where());
  }

  enum class Format { Unknown, Iso, Epoch } format = Format::Unknown;
  std::vector<Tick> ticks;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorKind::MalformedRow, "expected two fields", where());
    }
    const std::string_view ts = trim(row.substr(0, comma));
    const std::string_view px = trim(row.substr(comma + 1));

    if (format == Format::Unknown) format = looks_like_epoch(ts) ? Format::Epoch : Format::Iso;

    Tick tick;
    if (format == Format::Epoch) {
      std::int64_t ms = 0;
      const auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), ms);
      if (ec != std::errc{} || ptr != ts.data() + ts.size()) {
        throw Error(ErrorKind::MalformedRow, fmt::format("bad epoch timestamp '{}'", ts), where());
      }
      tick.time = LocalTime{Millis{ms} + tz.utc_offset};
    } else {
      const auto t = parse_local_timestamp(ts);
      if (!t) throw Error(ErrorKind::MalformedRow, fmt::format("bad timestamp '{}'", ts), where());
      tick.time = *t;
    }

    const auto [ptr, ec] = std::from_chars(px.data(), px.data() + px.size(), tick.price);
    if (ec != std::errc{} || ptr != px.data() + px.size() || !std::isfinite(tick.price)) {
      throw Error(ErrorKind::MalformedRow, fmt::format("bad price '{}'", px), where());
    }
    check_tick(tick, ticks.empty() ? nullptr : &ticks.back(), where());
    ticks.push_back(tick);
  }
  return TickSeries(std::move(ticks));
}

TickSeries parse_ticks_file(const std::string& path, const TimeZone& tz) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open tick file", path);
  return parse_ticks(in, tz, path);
}

void write_ticks(std::ostream& out, std::span<const Tick> ticks) {
  out << "timestamp,price\n";
  for (const auto& t : ticks) {
    out << format_local_timestamp(t.time) << ',' << fmt::format("{:.17g}", t.price) << '\n';
  }
}

SplitResult split_sessions(const TickSeries& ticks, const SessionCalendar& calendar) {
  SplitResult result;
  std::size_t assigned = 0;
  for (const Date day : calendar.trading_days()) {
    bool any = false;
    for (const auto& spec : calendar.sessions()) {
      SessionSlice slice{day, spec.label, LocalTime{day} + spec.open, LocalTime{day} + spec.close,
                         {}};
      slice.ticks = ticks.between(slice.open, slice.close);
      if (slice.ticks.empty()) continue;
      any = true;
      assigned += slice.ticks.size();
      result.slices.push_back(slice);
    }
    if (!any) result.empty_days.push_back(day);
  }
  result.excluded_ticks = ticks.size() - assigned;
  return result;
}

}  // namespace rvkit
