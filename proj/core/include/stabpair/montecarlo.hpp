#pragma once

// Sharded Gaussian Monte Carlo for |P(Z)|^{2s} and log|P(Z)|^2.
//
// The sample budget is split over a fixed number of shards, each with its
// own splitmix-derived stream; shard statistics are merged in shard order, so
// results are bit-identical for any thread count.

#include <cstddef>
#include <cstdint>

#include "stabpair/polyrep.hpp"

namespace stabpair {

struct MonteCarloOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::size_t shards = 64;
};

struct GaussianMoments {
  double s = 0;
  double mean_power = 0;    // E|P|^{2s}
  double stderr_power = 0;
  double mean_log = 0;      // E log|P|^2
  double stderr_log = 0;
  double covariance = 0;    // sample covariance of (|P|^{2s}, log|P|^2)
  std::size_t samples = 0;
  std::size_t resampled_zeros = 0;
  double tail_fraction = 0;  // share of the sum carried by the top 0.1% of |P|^{2s}
  bool tail_warning = false;
};

/// Draws `options.samples` standard complex Gaussian matrices. Samples where
/// P vanishes exactly are redrawn and counted; a non-finite value throws
/// std::runtime_error naming the shard and sample index.
GaussianMoments gaussian_moments(const Polynomial& p, double s, const MonteCarloOptions& options);

}  // namespace stabpair
