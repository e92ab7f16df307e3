#include "rvkit/sampling.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rvkit/error.hpp"

namespace rvkit {

double ReturnSeries::total() const {
  double sum = 0.0;
  for (const double r : returns) sum += r;
  return sum;
}

std::size_t return_count(Millis length, int delta_minutes) {
  const Millis step = std::chrono::minutes{delta_minutes};
  const auto full = static_cast<std::size_t>(length / step);
  return length % step == Millis::zero() ? full : full + 1;
}

GridPrices sample_grid_prices(const SessionSlice& slice, int delta_minutes) {
  const auto key = fmt::format("{} {}", format_date(slice.date), to_string(slice.label));
  if (slice.ticks.empty()) throw Error(ErrorKind::EmptySlice, "session slice has no ticks", key);
  const Millis step = std::chrono::minutes{delta_minutes};
  if (delta_minutes < 1 || step >= slice.length()) {
    throw Error(ErrorKind::DeltaTooLarge,
                fmt::format("delta {} min does not fit a {} min session", delta_minutes,
                            std::chrono::duration_cast<std::chrono::minutes>(slice.length()).count()),
                key);
  }

  GridPrices grid;
  grid.delta_minutes = delta_minutes;
  grid.source = {slice.date, slice.label};
  const std::size_t points = return_count(slice.length(), delta_minutes) + 1;
  grid.times.reserve(points);
  grid.prices.reserve(points);

  // Walk the grid and the ticks together; `next` is the first tick after the
  // current grid instant.
  const auto ticks = slice.ticks;
  std::size_t next = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const LocalTime at = i + 1 == points ? slice.close : slice.open + static_cast<long>(i) * step;
    while (next < ticks.size() && ticks[next].time <= at) ++next;
    grid.times.push_back(at);
    grid.prices.push_back(next == 0 ? ticks.front().price : ticks[next - 1].price);
  }
  return grid;
}

ReturnSeries intraday_returns(const GridPrices& grid) {
  ReturnSeries rs;
  rs.delta_minutes = grid.delta_minutes;
  rs.source = grid.source;
  rs.returns.reserve(grid.prices.size() - 1);
  double prev = std::log(grid.prices.front());
  for (std::size_t i = 1; i < grid.prices.size(); ++i) {
    const double cur = std::log(grid.prices[i]);
    rs.returns.push_back(cur - prev);
    prev = cur;
  }
  return rs;
}

}  // namespace rvkit
