#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actitrait/cohort.hpp"
#include "actitrait/intensity.hpp"
#include "actitrait/temporal.hpp"

namespace actitrait {

enum class FeatureCategory { Dispersion, Diversity, Regularity, Basic };
enum class FeatureSource { Call, Message, CallAndMessage, Accel };
enum class FeatureSet { PhoneOnly, PhonePlusPhysical };

std::string_view category_name(FeatureCategory c) noexcept;
std::string_view source_name(FeatureSource s) noexcept;
std::string_view feature_set_name(FeatureSet s) noexcept;
std::optional<FeatureSet> parse_feature_set(std::string_view s);

// How the log transform treats a column before correlation analysis.
enum class LogPolicy { Log1p, PassThrough };

struct FeatureId {
  std::string name;
  FeatureCategory category = FeatureCategory::Basic;
  FeatureSource source = FeatureSource::Accel;
  LogPolicy log_policy = LogPolicy::Log1p;
  // Human-readable label used in the top-k report.
  std::string label;

  friend bool operator==(const FeatureId& a, const FeatureId& b) { return a.name == b.name; }
};

// Every column, sorted by name.
const std::vector<FeatureId>& feature_catalog();

// Participants x features. Absent cells are NaN internally and surface as
// std::nullopt.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<FeatureId> columns, std::vector<std::string> row_ids);

  std::size_t rows() const noexcept { return row_ids_.size(); }
  std::size_t cols() const noexcept { return columns_.size(); }
  const std::vector<FeatureId>& columns() const noexcept { return columns_; }
  const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }

  std::optional<double> at(std::size_t r, std::size_t c) const noexcept;
  double raw(std::size_t r, std::size_t c) const noexcept { return cells_[r * cols() + c]; }
  void set(std::size_t r, std::size_t c, std::optional<double> v) noexcept;
  std::span<const double> row(std::size_t r) const noexcept {
    return {cells_.data() + r * cols(), cols()};
  }
  std::span<double> row(std::size_t r) noexcept { return {cells_.data() + r * cols(), cols()}; }
  std::optional<std::size_t> column_index(std::string_view name) const;
  std::optional<std::size_t> row_index(std::string_view id) const;

  // PhoneOnly drops every Accel-source column; row order is unchanged.
  FeatureMatrix project(FeatureSet set) const;
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

  std::string to_csv() const;
  std::string to_json() const;
  static FeatureMatrix from_json(std::string_view text);

  friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b);

 private:
  std::vector<FeatureId> columns_;
  std::vector<std::string> row_ids_;
  std::vector<double> cells_;
};

struct FeatureConfig {
  TemporalConfig temporal;
  IntensityConfig intensity;
  std::int64_t response_window_seconds = 3600;
};

// ---- individual metrics -------------------------------------------------

// Population SD; absent for fewer than two values.
std::optional<double> dispersion_sd(std::span<const double> values);
// Population variance; absent for fewer than two values.
std::optional<double> population_variance(std::span<const double> values);

// Natural-log Shannon entropy of the count proportions; absent when the
// total is zero.
std::optional<double> shannon_entropy(std::span<const std::uint64_t> counts);
// Per-contact counts of the given events.
std::vector<std::uint64_t> contact_counts(std::span<const CommEvent> events);

// Mean product over the hours of `hours` present in both days.
std::optional<double> regularity_index_pair(const HourlySeries::Slots& day_i,
                                            const HourlySeries::Slots& day_j, HourRange hours);
// Defined RI values for every pair of the set, in pair order.
std::vector<double> pairwise_ri(const HourlySeries& rescaled, const PairSet& set);
std::optional<double> average_ri(const HourlySeries& rescaled, const PairSet& set);
// Population variance of the pairwise RIs; absent below two defined pairs.
std::optional<double> variance_ri(const HourlySeries& rescaled, const PairSet& set);

struct SegmentTriple {
  std::optional<double> daytime, evening, night;
};
// Variance of RI within each segment, pairs over all given days.
SegmentTriple variance_ri_by_segment(const HourlySeries& rescaled, std::span<const CivilDay> days,
                                     const TemporalConfig& cfg = {});

struct InterEventStats {
  std::optional<double> mean_gap_seconds;
  std::optional<double> sd_gap_seconds;
};
InterEventStats inter_event_stats(std::span<const CommEvent> events);

struct ResponseMetrics {
  std::optional<double> response_rate;
  std::optional<double> mean_latency_seconds;
};
// Incoming and missed events count as solicitations; one is responded when
// an outgoing event to the same contact follows within the window.
ResponseMetrics response_metrics(std::span<const CommEvent> events,
                                 std::int64_t window_seconds = 3600);

struct RatioFeatures {
  std::optional<double> percent_night;
  std::optional<double> percent_initiated;
  std::optional<double> contacts_to_interactions;
};
RatioFeatures ratio_features(std::span<const CommEvent> events, const TemporalConfig& cfg = {});

// Events per attached day, one entry per element of `days` (zero-filled).
std::vector<double> daily_counts(std::span<const CommEvent> events, std::span<const CivilDay> days,
                                 const TemporalConfig& cfg = {});
// Events per attached (day, hour); every hour of `days` is present.
HourlySeries hourly_counts(std::span<const CommEvent> events, std::span<const CivilDay> days,
                           const TemporalConfig& cfg = {});

// ---- assembly -----------------------------------------------------------

// The days features range over: the collection span, widened by one day at
// the front when night hours attach to the previous evening.
std::vector<CivilDay> feature_days(const std::optional<DaySpan>& span, const TemporalConfig& cfg);

// One participant's values in feature_catalog() order (NaN = absent).
// `profile` must come from `accel` under the same config.
std::vector<double> participant_features(std::span<const AccelSample> accel,
                                         std::span<const CommEvent> comm,
                                         const HourlyIntensityProfile& profile,
                                         std::span<const CivilDay> days,
                                         const FeatureConfig& cfg = {});

// `profiles` is index-aligned with cohort.participants().
FeatureMatrix build_feature_matrix(const Cohort& cohort,
                                   std::span<const HourlyIntensityProfile> profiles,
                                   const FeatureConfig& cfg = {}, unsigned threads = 1);

// Profiles for every participant of the cohort.
std::vector<HourlyIntensityProfile> cohort_profiles(const Cohort& cohort,
                                                    const FeatureConfig& cfg = {},
                                                    unsigned threads = 1);

}  // namespace actitrait
