#include "actitrait/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "actitrait/simd/kernels.hpp"

namespace actitrait {
namespace {

// Resultants for a run of samples via the SoA kernel.
void fill_resultants(std::span<const AccelSample> samples, std::vector<double>& out) {
  const std::size_t n = samples.size();
  std::vector<double> xs(n), ys(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = samples[i].x;
    ys[i] = samples[i].y;
    zs[i] = samples[i].z;
  }
  out.resize(n);
  simd::resultants(xs, ys, zs, out);
}

}  // namespace

double resultant(double x, double y, double z) noexcept { return std::sqrt(x * x + y * y + z * z); }

std::optional<double> mad_of_resultants(std::span<const double> r, const IntensityConfig& cfg) {
  if (r.empty() || r.size() < cfg.min_samples) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  if (*lo == *hi) return 0.0;
  const double n = static_cast<double>(r.size());
  const double mean = simd::sum(r) / n;
  return simd::sum_abs_dev(r, mean) / n;
}

std::optional<double> hourly_mad(std::span<const AccelSample> samples, const IntensityConfig& cfg) {
  if (samples.empty() || samples.size() < cfg.min_samples) return std::nullopt;
  std::vector<double> r;
  fill_resultants(samples, r);
  return mad_of_resultants(r, cfg);
}

HourlyIntensityProfile intensity_profile(std::string participant_id,
                                         std::span<const AccelSample> stream,
                                         const IntensityConfig& cfg,
                                         const TemporalConfig& temporal) {
  HourlyIntensityProfile profile{std::move(participant_id), {}};
  std::vector<double> r;
  std::size_t i = 0;
  while (i < stream.size()) {
    // A clock hour is a contiguous run in a sorted stream.
    const std::int64_t hour_key = stream[i].t.epoch_seconds / 3600;
    std::size_t j = i + 1;
    while (j < stream.size() && stream[j].t.epoch_seconds / 3600 == hour_key) ++j;
    const auto run = stream.subspan(i, j - i);
    if (run.size() >= cfg.min_samples && !run.empty()) {
      fill_resultants(run, r);
      if (const auto mad = mad_of_resultants(r, cfg)) {
        const auto dh = attach(run.front().t, temporal);
        profile.mad.set(dh.day, dh.hour, *mad);
      }
    }
    i = j;
  }
  return profile;
}

}  // namespace actitrait
