#include "rvkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rvkit/error.hpp"
#include "rvkit/parallel.hpp"
#include "rvkit/sampling.hpp"

namespace rvkit {

std::string_view to_string(StdMode mode) {
  return mode == StdMode::Telescoped ? "telescoped" : "openclose";
}

StdMode parse_std_mode(std::string_view text) {
  if (text == "telescoped") return StdMode::Telescoped;
  if (text == "openclose") return StdMode::OpenClose;
  throw Error(ErrorKind::ConfigInvalid, fmt::format("unknown std mode '{}'", text));
}

std::vector<int> AnalysisOptions::default_deltas() {
  std::vector<int> d(40);
  for (int i = 0; i < 40; ++i) d[static_cast<std::size_t>(i)] = i + 1;
  return d;
}

void AnalysisOptions::normalize(const SessionCalendar& calendar) {
  if (deltas.empty()) throw Error(ErrorKind::ConfigInvalid, "delta list is empty");
  if (sessions.empty()) throw Error(ErrorKind::ConfigInvalid, "session list is empty");
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  std::sort(sessions.begin(), sessions.end());
  sessions.erase(std::unique(sessions.begin(), sessions.end()), sessions.end());
  if (deltas.front() < 1) {
    throw Error(ErrorKind::ConfigInvalid, fmt::format("delta {} must be >= 1", deltas.front()));
  }
  for (const auto label : sessions) {
    const auto& spec = calendar.session(label);
    if (std::chrono::minutes{deltas.back()} >= spec.length()) {
      throw Error(ErrorKind::DeltaTooLarge,
                  fmt::format("delta {} min does not fit the {} session", deltas.back(),
                              to_string(label)));
    }
  }
}

nlohmann::json AnalysisOptions::to_json() const {
  nlohmann::json j;
  j["deltas"] = deltas;
  auto labels = nlohmann::json::array();
  for (const auto s : sessions) labels.push_back(std::string(to_string(s)));
  j["sessions"] = labels;
  j["std_mode"] = std::string(to_string(std_mode));
  j["delta_min"] = fit.delta_min;
  j["weighted"] = fit.weighted;
  return j;
}

std::vector<CurvePoint> curve_points(const MomentProfile& profile, CurveModel model,
                                     const FitSelection& selection) {
  std::vector<CurvePoint> points;
  for (const auto& row : profile.rows) {
    if (row.delta_minutes < selection.delta_min) continue;
    CurvePoint pt;
    pt.delta_minutes = row.delta_minutes;
    pt.y = model == CurveModel::Kurt4 ? row.kurtosis : row.sixth_moment;
    if (selection.weighted) {
      const double se = model == CurveModel::Kurt4 ? row.se_kurtosis : row.se_sixth;
      if (!(se > 0.0)) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("no standard error for weighting at delta {}", row.delta_minutes),
                    std::string(to_string(profile.label)));
      }
      pt.weight = 1.0 / (se * se);
    }
    points.push_back(pt);
  }
  return points;
}

SessionFit fit_profile(const MomentProfile& profile, const FitSelection& selection) {
  SessionFit fit;
  fit.label = profile.label;
  fit.kurtosis = fit_curve(curve_points(profile, CurveModel::Kurt4, selection), CurveModel::Kurt4);
  fit.sixth = fit_curve(curve_points(profile, CurveModel::Mom6, selection), CurveModel::Mom6);
  return fit;
}

AnalysisResult run_analysis(const TickSeries& ticks, const SessionCalendar& calendar,
                            AnalysisOptions options) {
  options.normalize(calendar);
  AnalysisResult result;
  auto& counts = result.counts;

  const auto split = split_sessions(ticks, calendar);
  counts.ticks = ticks.size();
  counts.excluded_ticks = split.excluded_ticks;
  counts.trading_days = calendar.trading_days().size();
  counts.empty_days = split.empty_days;
  for (const auto d : split.empty_days) {
    result.warnings.push_back(fmt::format("EmptyDay: {} has no session ticks", format_date(d)));
  }

  if (calendar.find(SessionLabel::MS) != nullptr && calendar.find(SessionLabel::AS) != nullptr) {
    result.zones = zone_returns(split, calendar);
    counts.zone_days_skipped = result.zones.skipped;
  }

  std::vector<const SessionSlice*> slices;
  for (const auto& s : split.slices) {
    if (std::find(options.sessions.begin(), options.sessions.end(), s.label) !=
        options.sessions.end()) {
      slices.push_back(&s);
    }
  }
  counts.slices = slices.size();

  // Per slice: one RV record and one session return per Δ.
  struct SliceOutput {
    std::vector<RvRecord> records;
    std::vector<double> session_returns;
  };
  std::vector<SliceOutput> outputs(slices.size());
  parallel_for(slices.size(), options.threads, [&](std::size_t i) {
    const auto& slice = *slices[i];
    auto& out = outputs[i];
    const double open_close =
        std::log(slice.ticks.back().price) - std::log(slice.ticks.front().price);
    for (const int delta : options.deltas) {
      const auto rs = intraday_returns(sample_grid_prices(slice, delta));
      out.records.push_back(realized_volatility(rs));
      out.session_returns.push_back(options.std_mode == StdMode::Telescoped ? rs.total()
                                                                            : open_close);
    }
  });

  for (const auto& out : outputs) {
    result.rv_table.insert(result.rv_table.end(), out.records.begin(), out.records.end());
  }

  for (const auto label : options.sessions) {
    const auto& spec = calendar.session(label);
    auto curve = signature_curve(result.rv_table, label, options.deltas);
    counts.missing_rv_pairs += curve.missing_pairs;
    result.signatures.push_back(std::move(curve));

    MomentProfile profile{label, {}};
    std::map<int, long> n_per_delta;
    for (std::size_t d = 0; d < options.deltas.size(); ++d) {
      const int delta = options.deltas[d];
      n_per_delta[delta] = static_cast<long>(return_count(spec.length(), delta));

      std::vector<SessionReturn> returns;
      std::vector<RvRecord> records;
      for (std::size_t i = 0; i < slices.size(); ++i) {
        if (slices[i]->label != label) continue;
        returns.push_back({outputs[i].records[d].key, outputs[i].session_returns[d]});
        records.push_back(outputs[i].records[d]);
      }
      const auto series = standardize_series(returns, records, label, delta);
      counts.zero_rv_excluded += series.excluded_zero_rv;
      if (series.excluded_zero_rv > 0) {
        result.warnings.push_back(fmt::format("{} delta {}: {} zero-RV days excluded",
                                              to_string(label), delta, series.excluded_zero_rv));
      }
      profile.rows.push_back(sample_moments(series));
    }
    result.theory.push_back(theoretical_profile(label, n_per_delta));
    result.fits.push_back(fit_profile(profile, options.fit));
    result.moments.push_back(std::move(profile));

    const auto& fit = result.fits.back();
    for (const auto* f : {&fit.kurtosis, &fit.sixth}) {
      if (!f->converged) {
        result.warnings.push_back(fmt::format("{} {} fit did not converge after {} iterations",
                                              to_string(label), to_string(f->model),
                                              f->iterations));
      }
    }
  }
  return result;
}

}  // namespace rvkit
