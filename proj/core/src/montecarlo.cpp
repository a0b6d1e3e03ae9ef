#include "stabpair/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "stabpair/parallel.hpp"

namespace stabpair {

namespace {

struct Accumulator {
  double n = 0;
  double mean_x = 0, m2_x = 0;
  double mean_y = 0, m2_y = 0;
  double c_xy = 0;

  void add(double x, double y) {
    n += 1;
    const double dx = x - mean_x;
    const double dy = y - mean_y;
    mean_x += dx / n;
    mean_y += dy / n;
    m2_x += dx * (x - mean_x);
    m2_y += dy * (y - mean_y);
    c_xy += dx * (y - mean_y);
  }

  void merge(const Accumulator& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = n + o.n;
    const double dx = o.mean_x - mean_x;
    const double dy = o.mean_y - mean_y;
    m2_x += o.m2_x + dx * dx * n * o.n / total;
    m2_y += o.m2_y + dy * dy * n * o.n / total;
    c_xy += o.c_xy + dx * dy * n * o.n / total;
    mean_x += dx * o.n / total;
    mean_y += dy * o.n / total;
    n = total;
  }
};

struct Shard {
  Accumulator acc;
  std::vector<double> powers;
  std::size_t zeros = 0;
};

}  // namespace

GaussianMoments gaussian_moments(const Polynomial& p, double s, const MonteCarloOptions& options) {
  if (!(s >= 0)) throw std::invalid_argument("gaussian_moments: s must be >= 0");
  if (options.samples < 2) throw std::invalid_argument("gaussian_moments: need at least 2 samples");
  if (options.shards == 0) throw std::invalid_argument("gaussian_moments: shards must be positive");
  const MatrixShape shape = shape_of(p);
  const std::size_t shards = std::min(options.shards, options.samples);
  std::vector<Shard> results(shards);

  parallel_for(shards, resolve_threads(options.threads), [&](std::size_t k) {
    const std::size_t count = options.samples / shards + (k < options.samples % shards ? 1 : 0);
    Rng rng(derive_seed(options.seed, k));
    Shard& out = results[k];
    out.powers.reserve(count);
    for (std::size_t i = 0; i < count;) {
      const ComplexMatrix z = gaussian_sample(shape, rng);
      const Complex value = evaluate(p, z);
      const double mod_sq = std::norm(value);
      if (!std::isfinite(mod_sq)) {
        throw std::runtime_error("gaussian_moments: non-finite value at shard " + std::to_string(k) + ", sample " +
                                 std::to_string(i));
      }
      if (mod_sq == 0.0) {
        ++out.zeros;
        if (out.zeros > count + 1000) throw std::runtime_error("gaussian_moments: polynomial vanishes on samples");
        continue;
      }
      const double y = std::log(mod_sq);
      const double x = s == 0 ? 1.0 : std::exp(s * y);
      out.acc.add(x, y);
      out.powers.push_back(x);
      ++i;
    }
  });

  Accumulator total;
  std::size_t zeros = 0;
  std::vector<double> all;
  all.reserve(options.samples);
  for (const auto& r : results) {
    total.merge(r.acc);
    zeros += r.zeros;
    all.insert(all.end(), r.powers.begin(), r.powers.end());
  }

  GaussianMoments m;
  m.s = s;
  m.samples = options.samples;
  m.resampled_zeros = zeros;
  const double n = total.n;
  m.mean_power = total.mean_x;
  m.mean_log = total.mean_y;
  m.stderr_power = std::sqrt(total.m2_x / (n - 1) / n);
  m.stderr_log = std::sqrt(total.m2_y / (n - 1) / n);
  m.covariance = total.c_xy / (n - 1);

  const std::size_t top = std::max<std::size_t>(1, all.size() / 1000);
  std::nth_element(all.begin(), all.end() - static_cast<std::ptrdiff_t>(top), all.end());
  const double top_sum = std::accumulate(all.end() - static_cast<std::ptrdiff_t>(top), all.end(), 0.0);
  const double sum = m.mean_power * n;
  m.tail_fraction = sum > 0 ? top_sum / sum : 0.0;
  m.tail_warning = m.tail_fraction > 0.2;
  return m;
}

}  // namespace stabpair
