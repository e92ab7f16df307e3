#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "rvkit/market_data.hpp"

namespace rvkit {

/// Identifies one trading session on one day.
struct SessionKey {
  Date date;
  SessionLabel label = SessionLabel::MS;

  friend auto operator<=>(const SessionKey&, const SessionKey&) = default;
};

/// Previous-tick prices on the grid open, open+Δ, ..., close.
struct GridPrices {
  int delta_minutes = 0;
  std::vector<LocalTime> times;
  std::vector<double> prices;
  SessionKey source;
};

/// Log-returns between consecutive grid prices.
struct ReturnSeries {
  std::vector<double> returns;
  int delta_minutes = 0;
  SessionKey source;

  std::size_t n() const noexcept { return returns.size(); }
  /// Telescoped session return, the sum of all sampled returns.
  double total() const;
};

/// Number of grid returns for a session of `length` sampled every Δ minutes:
/// T/Δ when Δ divides T, otherwise ⌊T/Δ⌋ + 1 (the short final interval is kept).
std::size_t return_count(Millis length, int delta_minutes);

/// Throws DeltaTooLarge when Δ is not shorter than the session, EmptySlice
/// when the slice has no ticks.
GridPrices sample_grid_prices(const SessionSlice& slice, int delta_minutes);

ReturnSeries intraday_returns(const GridPrices& grid);

}  // namespace rvkit
