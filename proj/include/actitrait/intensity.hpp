#pragma once

#include <optional>
#include <span>
#include <string>

#include "actitrait/cohort.hpp"
#include "actitrait/temporal.hpp"

namespace actitrait {

struct IntensityConfig {
  // Hours with fewer samples than this stay absent.
  std::size_t min_samples = 25;
};

// Hourly Mean Amplitude Deviation per attached day, raw sensor units.
struct HourlyIntensityProfile {
  std::string participant_id;
  HourlySeries mad;
};

double resultant(double x, double y, double z) noexcept;

// MAD = mean |r_i - mean(r)| over the resultants of the given samples, or
// absent below `min_samples`.
std::optional<double> hourly_mad(std::span<const AccelSample> samples,
                                 const IntensityConfig& cfg = {});
// Same, starting from precomputed resultants.
std::optional<double> mad_of_resultants(std::span<const double> resultants,
                                        const IntensityConfig& cfg = {});

// `stream` must be sorted by time.
HourlyIntensityProfile intensity_profile(std::string participant_id,
                                         std::span<const AccelSample> stream,
                                         const IntensityConfig& cfg = {},
                                         const TemporalConfig& temporal = {});

}  // namespace actitrait
