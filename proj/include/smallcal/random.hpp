#pragma once

#include <array>
#include <cstdint>

namespace smallcal {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11): a keyed
/// bijection of 128-bit counters, so any block can be produced directly from
/// (key, counter) with no sequential state.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Uniform and normal variates for one independent substream, identified by
/// (seed, stream). Draw j of a stream depends only on (seed, stream, j).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

  /// Standard normal by inversion of a uniform.
  double normal();

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int used_ = 2;
};

/// Inverse standard normal CDF (Wichura's AS241, relative error ~1e-16).
/// Returns -inf / +inf at p = 0 / 1.
double normal_quantile(double p);

}  // namespace smallcal
