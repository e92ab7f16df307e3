#include "rvkit/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "rvkit/error.hpp"

namespace rvkit {
namespace {

std::string key_text(const SessionKey& key) {
  return fmt::format("{} {}", format_date(key.date), to_string(key.label));
}

}  // namespace

StandardizedValue standardize(const SessionReturn& ret, const RvRecord& rv) {
  if (ret.key != rv.key) {
    throw Error(ErrorKind::MismatchedKeys,
                fmt::format("return for {} paired with RV of {}", key_text(ret.key),
                            key_text(rv.key)));
  }
  if (!(rv.rv > 0.0)) {
    throw Error(ErrorKind::ZeroVolatilityDay, "realized volatility is zero", key_text(rv.key));
  }
  return {ret.key, ret.value / std::sqrt(rv.rv), rv.n_returns};
}

StandardizedSeries standardize_series(std::span<const SessionReturn> returns,
                                      std::span<const RvRecord> records, SessionLabel label,
                                      int delta_minutes) {
  std::map<SessionKey, double> by_key;
  for (const auto& r : returns) by_key.emplace(r.key, r.value);

  StandardizedSeries series;
  series.label = label;
  series.delta_minutes = delta_minutes;
  for (const auto& rec : records) {
    if (rec.key.label != label || rec.delta_minutes != delta_minutes) continue;
    const auto it = by_key.find(rec.key);
    if (it == by_key.end()) {
      throw Error(ErrorKind::MismatchedKeys, "no session return for RV record", key_text(rec.key));
    }
    if (rec.rv == 0.0) {
      ++series.excluded_zero_rv;
      continue;
    }
    series.values.push_back(standardize({rec.key, it->second}, rec));
  }
  return series;
}

MomentRow sample_moments(std::span<const double> values, int delta_minutes) {
  if (values.size() < 2) {
    throw Error(ErrorKind::InsufficientData,
                fmt::format("{} standardized values, need at least 2", values.size()),
                fmt::format("delta {}", delta_minutes));
  }
  double s1 = 0, s2 = 0, s4 = 0, s6 = 0, s8 = 0, s12 = 0;
  for (const double x : values) {
    const double x2 = x * x;
    const double x4 = x2 * x2;
    const double x6 = x4 * x2;
    s1 += x;
    s2 += x2;
    s4 += x4;
    s6 += x6;
    s8 += x4 * x4;
    s12 += x6 * x6;
  }
  const double count = static_cast<double>(values.size());
  const double a2 = s2 / count, a4 = s4 / count, a6 = s6 / count;
  const double a8 = s8 / count, a12 = s12 / count;
  if (!(a2 > 0.0)) {
    throw Error(ErrorKind::InsufficientData, "all standardized values are zero",
                fmt::format("delta {}", delta_minutes));
  }

  MomentRow row;
  row.delta_minutes = delta_minutes;
  row.count = values.size();
  row.mean = s1 / count;
  row.variance = a2;
  row.kurtosis = a4 / (a2 * a2);
  row.sixth_moment = a6 / (a2 * a2 * a2);

  // Delta method on g(a2, a_p) = a_p / a2^q with Cov of (x^2, x^p).
  auto ratio_se = [&](double ap, double a2p, double a2plus, double q) {
    const double d2 = -q * ap / std::pow(a2, q + 1);
    const double dp = 1.0 / std::pow(a2, q);
    const double v22 = a4 - a2 * a2;
    const double v2p = a2plus - a2 * ap;
    const double vpp = a2p - ap * ap;
    const double var = d2 * d2 * v22 + 2 * d2 * dp * v2p + dp * dp * vpp;
    return std::sqrt(std::max(var, 0.0) / count);
  };
  row.se_variance = std::sqrt(std::max(a4 - a2 * a2, 0.0) / count);
  row.se_kurtosis = ratio_se(a4, a8, a6, 2.0);
  row.se_sixth = ratio_se(a6, a12, a8, 3.0);
  return row;
}

MomentRow sample_moments(const StandardizedSeries& series) {
  std::vector<double> values;
  values.reserve(series.values.size());
  for (const auto& v : series.values) values.push_back(v.value);
  return sample_moments(values, series.delta_minutes);
}

FiniteSampleLaw::FiniteSampleLaw(long n) : n_(n) {
  if (n < 1) throw Error(ErrorKind::UnsupportedN, fmt::format("n = {} must be positive", n));
  if (n >= 2) {
    const double nd = static_cast<double>(n);
    log_norm_ = boost::math::lgamma(nd / 2) - boost::math::lgamma((nd - 1) / 2) -
                0.5 * std::log(std::numbers::pi * nd);
  }
}

double FiniteSampleLaw::support_bound() const { return std::sqrt(static_cast<double>(n_)); }

double FiniteSampleLaw::density(double x) const {
  if (n_ < 2) {
    throw Error(ErrorKind::UnsupportedN, fmt::format("density needs n >= 2, got {}", n_));
  }
  if (!(std::abs(x) <= support_bound())) return 0.0;
  const double nd = static_cast<double>(n_);
  const double exponent = (nd - 3) / 2;
  if (exponent == 0.0) return std::exp(log_norm_);
  const double u = std::min(x * x / nd, 1.0);
  return std::exp(log_norm_ + exponent * std::log1p(-u));
}

double FiniteSampleLaw::even_moment(int k) const { return finite_sample_moment(n_, k); }

double finite_sample_moment(long n, int k) {
  if (n < 1 || k < 1) {
    throw Error(ErrorKind::UnsupportedN, fmt::format("moment needs n >= 1 and k >= 1, got n={} k={}", n, k));
  }
  const double nd = static_cast<double>(n);
  double m = 1.0;
  for (int j = 1; j <= k; ++j) m *= nd * (2 * j - 1) / (nd + 2 * j - 2);
  return m;
}

double finite_sample_density(double x, long n) {
  if (n < 2) throw Error(ErrorKind::UnsupportedN, fmt::format("density needs n >= 2, got {}", n));
  return FiniteSampleLaw(n).density(x);
}

MomentProfile theoretical_profile(SessionLabel label, const std::map<int, long>& n_per_delta) {
  MomentProfile profile;
  profile.label = label;
  for (const auto& [delta, n] : n_per_delta) {
    MomentRow row;
    row.delta_minutes = delta;
    row.variance = finite_sample_moment(n, 1);
    row.kurtosis = finite_sample_moment(n, 2);
    row.sixth_moment = finite_sample_moment(n, 3);
    profile.rows.push_back(row);
  }
  return profile;
}

}  // namespace rvkit
