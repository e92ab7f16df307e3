#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "rvkit/realized.hpp"

namespace rvkit {

/// A session return to be standardized, keyed like its RvRecord.
struct SessionReturn {
  SessionKey key;
  double value = 0.0;
};

struct StandardizedValue {
  SessionKey key;
  double value = 0.0;         // R / sqrt(RV)
  std::size_t n_intraday = 0; // returns behind the RV of that day
};

struct StandardizedSeries {
  SessionLabel label = SessionLabel::MS;
  int delta_minutes = 0;
  std::vector<StandardizedValue> values;
  std::size_t excluded_zero_rv = 0;
};

/// R / sqrt(rv). Throws ZeroVolatilityDay for rv == 0 and MismatchedKeys
/// when the return and the record describe different sessions.
StandardizedValue standardize(const SessionReturn& ret, const RvRecord& rv);

/// Joins returns with the records of one (session, Δ). Zero-RV days are
/// dropped and counted; a record without a return is MismatchedKeys.
StandardizedSeries standardize_series(std::span<const SessionReturn> returns,
                                      std::span<const RvRecord> records, SessionLabel label,
                                      int delta_minutes);

/// Raw (uncentered) moments of a standardized sample with delta-method
/// standard errors under i.i.d. sampling.
struct MomentRow {
  int delta_minutes = 0;
  double variance = 0.0;      // mean of x^2
  double kurtosis = 0.0;      // m4 / m2^2
  double sixth_moment = 0.0;  // m6 / m2^3
  std::size_t count = 0;
  double se_variance = 0.0;
  double se_kurtosis = 0.0;
  double se_sixth = 0.0;
  double mean = 0.0;          // diagnostic only

  friend bool operator==(const MomentRow&, const MomentRow&) = default;
};

struct MomentProfile {
  SessionLabel label = SessionLabel::MS;
  std::vector<MomentRow> rows;
};

/// Throws InsufficientData with fewer than two values or an all-zero sample.
MomentRow sample_moments(std::span<const double> values, int delta_minutes = 0);
MomentRow sample_moments(const StandardizedSeries& series);

/// Exact law of R/sqrt(RV) when RV is built from n i.i.d. Gaussian returns
/// and R is their sum: a scaled symmetric beta on [-sqrt(n), sqrt(n)].
class FiniteSampleLaw {
 public:
  /// n >= 1; density evaluation additionally needs n >= 2.
  explicit FiniteSampleLaw(long n);

  long n() const noexcept { return n_; }
  double support_bound() const;
  double density(double x) const;
  /// Raw even moment E[R_s^{2k}].
  double even_moment(int k) const;

 private:
  long n_;
  double log_norm_ = 0.0;
};

/// E[R_s^{2k}] = n^k (2k-1)!! / ((n+2k-2)(n+2k-4)...n).
double finite_sample_moment(long n, int k);

/// Throws UnsupportedN for n < 2. Zero outside |x| <= sqrt(n).
double finite_sample_density(double x, long n);

/// Rows (Δ, 1, m4(n), m6(n)) for overlay on an empirical profile.
MomentProfile theoretical_profile(SessionLabel label, const std::map<int, long>& n_per_delta);

}  // namespace rvkit
