#include "rvkit/report_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "rvkit/error.hpp"

namespace rvkit {
namespace {

class CsvReader {
 public:
  CsvReader(std::istream& in, std::string_view header, std::string_view what)
      : in_(in), what_(what) {
    std::string line;
    if (!std::getline(in_, line) || strip(line) != header) {
      fail(fmt::format("expected header '{}'", header));
    }
    line_no_ = 1;
  }

  // Fills `fields`; returns false at end of input.
  bool next(std::vector<std::string_view>& fields, std::size_t expected) {
    while (std::getline(in_, line_)) {
      ++line_no_;
      const std::string_view row = strip(line_);
      if (row.empty()) continue;
      fields.clear();
      std::size_t start = 0;
      for (;;) {
        const auto comma = row.find(',', start);
        fields.push_back(row.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (fields.size() != expected) {
        fail(fmt::format("expected {} fields, got {}", expected, fields.size()));
      }
      return true;
    }
    return false;
  }

  double number(std::string_view text) const {
    double v = 0;
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(fmt::format("bad number '{}'", text));
    }
    return v;
  }

  long integer(std::string_view text) const {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(fmt::format("bad integer '{}'", text));
    }
    return v;
  }

  Date date(std::string_view text) const {
    const auto d = parse_date(text);
    if (!d) fail(fmt::format("bad date '{}'", text));
    return *d;
  }

  SessionLabel label(std::string_view text) const {
    if (text == "MS") return SessionLabel::MS;
    if (text == "AS") return SessionLabel::AS;
    fail(fmt::format("bad session '{}'", text));
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorKind::MalformedRow, message, fmt::format("{}:{}", what_, line_no_));
  }

 private:
  static std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    return s;
  }

  std::istream& in_;
  std::string what_;
  std::string line_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_rv_table(std::ostream& out, std::span<const RvRecord> records) {
  out << "date,session,delta,rv,n_returns\n";
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{}\n", format_date(r.key.date), to_string(r.key.label),
                       r.delta_minutes, format_double(r.rv), r.n_returns);
  }
}

std::vector<RvRecord> read_rv_table(std::istream& in) {
  CsvReader csv(in, "date,session,delta,rv,n_returns", "rv_table");
  std::vector<RvRecord> out;
  std::vector<std::string_view> f;
  while (csv.next(f, 5)) {
    out.push_back({{csv.date(f[0]), csv.label(f[1])}, static_cast<int>(csv.integer(f[2])),
                   csv.number(f[3]), static_cast<std::size_t>(csv.integer(f[4]))});
  }
  return out;
}

void write_signature(std::ostream& out, std::span<const SignatureCurve> curves) {
  out << "session,delta,mean_rv,day_count\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << fmt::format("{},{},{},{}\n", to_string(c.label), p.delta_minutes,
                         format_double(p.mean_rv), p.day_count);
    }
  }
}

std::vector<SignatureCurve> read_signature(std::istream& in) {
  CsvReader csv(in, "session,delta,mean_rv,day_count", "signature");
  std::vector<SignatureCurve> out;
  std::vector<std::string_view> f;
  while (csv.next(f, 4)) {
    const auto label = csv.label(f[0]);
    if (out.empty() || out.back().label != label) out.push_back({label, {}, 0});
    out.back().points.push_back({static_cast<int>(csv.integer(f[1])), csv.number(f[2]),
                                 static_cast<std::size_t>(csv.integer(f[3]))});
  }
  return out;
}

void write_zones(std::ostream& out, std::span<const ZoneReturns> rows) {
  out << "date,r_ms,r_lb,r_as,r_on\n";
  for (const auto& z : rows) {
    out << fmt::format("{},{},{},{},{}\n", format_date(z.date), format_double(z.r_ms),
                       format_double(z.r_lb), format_double(z.r_as),
                       z.r_on ? format_double(*z.r_on) : std::string{});
  }
}

std::vector<ZoneReturns> read_zones(std::istream& in) {
  CsvReader csv(in, "date,r_ms,r_lb,r_as,r_on", "zones");
  std::vector<ZoneReturns> out;
  std::vector<std::string_view> f;
  while (csv.next(f, 5)) {
    ZoneReturns z;
    z.date = csv.date(f[0]);
    z.r_ms = csv.number(f[1]);
    z.r_lb = csv.number(f[2]);
    z.r_as = csv.number(f[3]);
    if (!f[4].empty()) z.r_on = csv.number(f[4]);
    out.push_back(z);
  }
  return out;
}

void write_moments(std::ostream& out, std::span<const MomentProfile> profiles) {
  out << "session,delta,variance,kurtosis,m6,count,se_var,se_kurt,se_m6\n";
  for (const auto& p : profiles) {
    for (const auto& r : p.rows) {
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(p.label), r.delta_minutes,
                         format_double(r.variance), format_double(r.kurtosis),
                         format_double(r.sixth_moment), r.count, format_double(r.se_variance),
                         format_double(r.se_kurtosis), format_double(r.se_sixth));
    }
  }
}

std::vector<MomentProfile> read_moments(std::istream& in) {
  CsvReader csv(in, "session,delta,variance,kurtosis,m6,count,se_var,se_kurt,se_m6", "moments");
  std::vector<MomentProfile> out;
  std::vector<std::string_view> f;
  while (csv.next(f, 9)) {
    const auto label = csv.label(f[0]);
    if (out.empty() || out.back().label != label) out.push_back({label, {}});
    MomentRow r;
    r.delta_minutes = static_cast<int>(csv.integer(f[1]));
    r.variance = csv.number(f[2]);
    r.kurtosis = csv.number(f[3]);
    r.sixth_moment = csv.number(f[4]);
    r.count = static_cast<std::size_t>(csv.integer(f[5]));
    r.se_variance = csv.number(f[6]);
    r.se_kurtosis = csv.number(f[7]);
    r.se_sixth = csv.number(f[8]);
    out.back().rows.push_back(r);
  }
  return out;
}

void write_density(std::ostream& out, const DensityTable& table) {
  out << "x,density,m2,m4,m6\n";
  for (const auto& r : table.rows) {
    out << fmt::format("{},{},,,\n", format_double(r.x), format_double(r.density));
  }
  out << fmt::format("theory,,{},{},{}\n", format_double(table.m2), format_double(table.m4),
                     format_double(table.m6));
}

DensityTable read_density(std::istream& in) {
  CsvReader csv(in, "x,density,m2,m4,m6", "density");
  DensityTable table;
  std::vector<std::string_view> f;
  bool trailer = false;
  while (csv.next(f, 5)) {
    if (trailer) csv.fail("rows after the theory trailer");
    if (f[0] == "theory") {
      table.m2 = csv.number(f[2]);
      table.m4 = csv.number(f[3]);
      table.m6 = csv.number(f[4]);
      trailer = true;
      continue;
    }
    table.rows.push_back({csv.number(f[0]), csv.number(f[1])});
  }
  if (!trailer) csv.fail("missing theory trailer");
  return table;
}

}  // namespace rvkit
