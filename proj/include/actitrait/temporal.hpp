#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "actitrait/cohort.hpp"

namespace actitrait {

enum class DaySegment { Daytime, Evening, Night };
enum class DayClass { Weekday, Weekend };

// Which calendar day owns the hours before the daytime boundary.
enum class NightAttachment {
  SameDate,         // 00:00-09:00 of day d belongs to day d
  PreviousEvening,  // 00:00-09:00 of day d belongs to day d-1
};

// Half-open hour ranges: Night [0, daytime_start), Daytime
// [daytime_start, evening_start), Evening [evening_start, 24).
struct TemporalConfig {
  int daytime_start_hour = 9;
  int evening_start_hour = 18;
  NightAttachment night_attachment = NightAttachment::SameDate;

  // Throws ValidationError unless 0 < daytime_start < evening_start < 24.
  void validate() const;
};

struct HourRange {
  int begin = 0;
  int end = 24;

  int size() const noexcept { return end - begin; }
  bool contains(int h) const noexcept { return h >= begin && h < end; }
  friend bool operator==(const HourRange&, const HourRange&) = default;
};

inline constexpr HourRange kWholeDay{0, 24};

HourRange segment_hours(DaySegment s, const TemporalConfig& cfg = {}) noexcept;
DaySegment segment_of_hour(int hour, const TemporalConfig& cfg = {}) noexcept;
DaySegment day_segment(Timestamp t, const TemporalConfig& cfg = {}) noexcept;
DayClass day_class(CivilDay d) noexcept;
DayClass day_class(Timestamp t) noexcept;

std::string_view segment_name(DaySegment s) noexcept;
std::string_view day_class_name(DayClass c) noexcept;

// The (day, hour slot) an instant is booked under once night attachment is
// applied. The hour slot is always the wall-clock hour.
struct DayHour {
  CivilDay day;
  int hour = 0;
};

DayHour attach(Timestamp t, const TemporalConfig& cfg = {}) noexcept;

// Per-day 24 hour slots. Absent slots are stored as NaN so the numeric
// kernels can run over a dense row.
class HourlySeries {
 public:
  using Slots = std::array<double, 24>;

  static constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();
  static bool present(double v) noexcept { return !std::isnan(v); }

  void set(CivilDay d, int hour, double value);
  // Creates an all-absent day if none exists.
  Slots& day(CivilDay d);
  const Slots* find(CivilDay d) const noexcept;
  Slots* find(CivilDay d) noexcept;
  std::optional<double> at(CivilDay d, int hour) const noexcept;

  const std::map<CivilDay, Slots>& days() const noexcept { return days_; }
  std::vector<CivilDay> day_list() const;
  bool empty() const noexcept { return days_.empty(); }
  std::size_t present_count() const noexcept;

 private:
  std::map<CivilDay, Slots> days_;
};

// Affine map of every present slot onto [-1, 1] with one min/max over the
// whole series. A degenerate series (max == min) maps to 0.
// Throws PreconditionError if no slot is present.
HourlySeries rescale_unit(const HourlySeries& series);

enum class PairSetId {
  AllDays,
  Weekdays,
  Weekends,
  WeekdayDaytime,
  WeekdayEvening,
  WeekdayNight,
  WeekendDaytime,
  WeekendEvening,
  WeekendNight,
};

inline constexpr std::array<PairSetId, 9> kAllPairSets = {
    PairSetId::AllDays,        PairSetId::Weekdays,       PairSetId::Weekends,
    PairSetId::WeekdayDaytime, PairSetId::WeekdayEvening, PairSetId::WeekdayNight,
    PairSetId::WeekendDaytime, PairSetId::WeekendEvening, PairSetId::WeekendNight};

std::string_view pair_set_name(PairSetId id) noexcept;

struct DayPair {
  CivilDay first;
  CivilDay second;
};

struct PairSet {
  HourRange hours;
  std::vector<DayPair> pairs;
};

// Unordered pairs of distinct days (first < second) for each of the nine
// named sets, indexed in kAllPairSets order. Input days may be unsorted or
// repeated.
std::array<PairSet, 9> pair_sets(std::span<const CivilDay> days, const TemporalConfig& cfg = {});
const PairSet& get(const std::array<PairSet, 9>& sets, PairSetId id) noexcept;

// Pairs over every day restricted to one segment's hours.
PairSet segment_pair_set(std::span<const CivilDay> days, DaySegment segment,
                         const TemporalConfig& cfg = {});

// Consecutive days first..last inclusive.
std::vector<CivilDay> days_in_span(DaySpan span);

}  // namespace actitrait
