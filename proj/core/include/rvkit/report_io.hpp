#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rvkit/fitting.hpp"
#include "rvkit/moments.hpp"
#include "rvkit/realized.hpp"

namespace rvkit {

/// Shortest text that round-trips: 17 significant digits.
std::string format_double(double v);

// Writers emit a fixed header followed by one row per entry. Readers accept
// exactly what the writers produce and throw MalformedRow otherwise.

void write_rv_table(std::ostream& out, std::span<const RvRecord> records);
std::vector<RvRecord> read_rv_table(std::istream& in);

void write_signature(std::ostream& out, std::span<const SignatureCurve> curves);
std::vector<SignatureCurve> read_signature(std::istream& in);

void write_zones(std::ostream& out, std::span<const ZoneReturns> rows);
std::vector<ZoneReturns> read_zones(std::istream& in);

/// `session,delta,variance,kurtosis,m6,count,se_var,se_kurt,se_m6`
void write_moments(std::ostream& out, std::span<const MomentProfile> profiles);
std::vector<MomentProfile> read_moments(std::istream& in);

struct DensityRow {
  double x = 0.0;
  double density = 0.0;
};

/// Density grid for n; rows `x,density,,,` then a `theory,,m2,m4,m6` trailer.
struct DensityTable {
  std::vector<DensityRow> rows;
  double m2 = 0.0;
  double m4 = 0.0;
  double m6 = 0.0;
};

void write_density(std::ostream& out, const DensityTable& table);
DensityTable read_density(std::istream& in);

}  // namespace rvkit
