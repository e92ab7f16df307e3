#pragma once

#include <array>
#include <cstdint>

namespace rvkit {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the same
/// (counter, key) always yields the same four words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal quantile, Wichura's AS 241 (PPND16), ~1e-16 relative.
double normal_quantile(double p);

/// Counter-based stream: key = seed, upper counter words = stream id, lower
/// words count blocks. Streams with distinct ids never overlap, so a day can
/// be simulated from (seed, day) independently of any other day.
///
/// Normals are drawn by inversion (normal_quantile of one uniform), so the
/// sequence depends only on IEEE arithmetic plus log/sqrt.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses the u^(1/shape) boost.
  double gamma(double shape);

  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace rvkit
