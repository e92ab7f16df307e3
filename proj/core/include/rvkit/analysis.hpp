#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rvkit/fitting.hpp"
#include "rvkit/market_data.hpp"
#include "rvkit/moments.hpp"
#include "rvkit/realized.hpp"

namespace rvkit {

/// Which session return is divided by sqrt(RV).
enum class StdMode {
  Telescoped,  // sum of the same Δ-sampled returns (first to last grid price)
  OpenClose,   // last trade over first trade of the session slice
};

std::string_view to_string(StdMode mode);
StdMode parse_std_mode(std::string_view text);

struct FitSelection {
  int delta_min = 1;      // points with Δ < delta_min are left out
  bool weighted = false;  // 1/se² weights from the moment profile
};

struct AnalysisOptions {
  std::vector<int> deltas = default_deltas();
  std::vector<SessionLabel> sessions{SessionLabel::MS, SessionLabel::AS};
  StdMode std_mode = StdMode::Telescoped;
  FitSelection fit;
  std::size_t threads = 0;  // 0: hardware concurrency

  static std::vector<int> default_deltas();
  /// Sorts and dedupes deltas; throws ConfigInvalid / DeltaTooLarge.
  void normalize(const SessionCalendar& calendar);
  nlohmann::json to_json() const;
};

struct SessionFit {
  SessionLabel label = SessionLabel::MS;
  FitResult kurtosis;
  FitResult sixth;
};

struct AnalysisCounts {
  std::size_t ticks = 0;
  std::size_t excluded_ticks = 0;
  std::size_t trading_days = 0;
  std::size_t slices = 0;
  std::vector<Date> empty_days;
  std::vector<Date> zone_days_skipped;
  std::size_t zero_rv_excluded = 0;
  std::size_t missing_rv_pairs = 0;
};

struct AnalysisResult {
  std::vector<RvRecord> rv_table;  // (date, session, Δ) order
  std::vector<SignatureCurve> signatures;
  ZoneTable zones;
  std::vector<MomentProfile> moments;
  std::vector<MomentProfile> theory;
  std::vector<SessionFit> fits;
  AnalysisCounts counts;
  std::vector<std::string> warnings;
};

/// Curve points from a moment profile: kurtosis for Kurt4, sixth moment for Mom6.
std::vector<CurvePoint> curve_points(const MomentProfile& profile, CurveModel model,
                                     const FitSelection& selection);
SessionFit fit_profile(const MomentProfile& profile, const FitSelection& selection);

/// Ingest → RV → moments → fit for every selected session.
AnalysisResult run_analysis(const TickSeries& ticks, const SessionCalendar& calendar,
                            AnalysisOptions options);

}  // namespace rvkit
