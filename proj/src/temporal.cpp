#include "actitrait/temporal.hpp"

#include <algorithm>

#include "actitrait/error.hpp"

namespace actitrait {

void TemporalConfig::validate() const {
  if (!(daytime_start_hour > 0 && daytime_start_hour < evening_start_hour &&
        evening_start_hour < 24))
    throw ValidationError("segment boundaries must satisfy 0 < daytime_start < evening_start < 24");
}

HourRange segment_hours(DaySegment s, const TemporalConfig& cfg) noexcept {
  switch (s) {
    case DaySegment::Night: return {0, cfg.daytime_start_hour};
    case DaySegment::Daytime: return {cfg.daytime_start_hour, cfg.evening_start_hour};
    case DaySegment::Evening: return {cfg.evening_start_hour, 24};
  }
  return kWholeDay;
}

DaySegment segment_of_hour(int hour, const TemporalConfig& cfg) noexcept {
  if (hour < cfg.daytime_start_hour) return DaySegment::Night;
  if (hour < cfg.evening_start_hour) return DaySegment::Daytime;
  return DaySegment::Evening;
}

DaySegment day_segment(Timestamp t, const TemporalConfig& cfg) noexcept {
  return segment_of_hour(hour_of_day(t), cfg);
}

DayClass day_class(CivilDay d) noexcept {
  const auto w = weekday(d);
  return (w == Weekday::Saturday || w == Weekday::Sunday) ? DayClass::Weekend : DayClass::Weekday;
}

DayClass day_class(Timestamp t) noexcept { return day_class(civil_day(t)); }

std::string_view segment_name(DaySegment s) noexcept {
  switch (s) {
    case DaySegment::Daytime: return "daytime";
    case DaySegment::Evening: return "evening";
    case DaySegment::Night: return "night";
  }
  return "?";
}

std::string_view day_class_name(DayClass c) noexcept {
  return c == DayClass::Weekday ? "weekday" : "weekend";
}

DayHour attach(Timestamp t, const TemporalConfig& cfg) noexcept {
  DayHour dh{civil_day(t), hour_of_day(t)};
  if (cfg.night_attachment == NightAttachment::PreviousEvening && dh.hour < cfg.daytime_start_hour)
    --dh.day.index;
  return dh;
}

void HourlySeries::set(CivilDay d, int hour, double value) {
  if (hour < 0 || hour > 23) throw PreconditionError("hour slot out of range");
  day(d)[static_cast<std::size_t>(hour)] = value;
}

HourlySeries::Slots& HourlySeries::day(CivilDay d) {
  auto it = days_.find(d);
  if (it == days_.end()) {
    Slots s;
    s.fill(kAbsent);
    it = days_.emplace(d, s).first;
  }
  return it->second;
}

const HourlySeries::Slots* HourlySeries::find(CivilDay d) const noexcept {
  const auto it = days_.find(d);
  return it == days_.end() ? nullptr : &it->second;
}

HourlySeries::Slots* HourlySeries::find(CivilDay d) noexcept {
  const auto it = days_.find(d);
  return it == days_.end() ? nullptr : &it->second;
}

std::optional<double> HourlySeries::at(CivilDay d, int hour) const noexcept {
  const auto* s = find(d);
  if (!s || hour < 0 || hour > 23) return std::nullopt;
  const double v = (*s)[static_cast<std::size_t>(hour)];
  if (!present(v)) return std::nullopt;
  return v;
}

std::vector<CivilDay> HourlySeries::day_list() const {
  std::vector<CivilDay> out;
  out.reserve(days_.size());
  for (const auto& [d, s] : days_) out.push_back(d);
  return out;
}

std::size_t HourlySeries::present_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [d, s] : days_)
    n += static_cast<std::size_t>(std::count_if(s.begin(), s.end(), present));
  return n;
}

HourlySeries rescale_unit(const HourlySeries& series) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& [d, slots] : series.days())
    for (double v : slots) {
      if (!HourlySeries::present(v)) continue;
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  if (!any) throw PreconditionError("rescale_unit: series has no present slot");

  HourlySeries out;
  const double range = hi - lo;
  for (const auto& [d, slots] : series.days()) {
    auto& dst = out.day(d);
    for (std::size_t h = 0; h < 24; ++h) {
      const double v = slots[h];
      if (!HourlySeries::present(v)) continue;
      dst[h] = range > 0.0 ? std::clamp(2.0 * (v - lo) / range - 1.0, -1.0, 1.0) : 0.0;
    }
  }
  return out;
}

std::string_view pair_set_name(PairSetId id) noexcept {
  switch (id) {
    case PairSetId::AllDays: return "all_days";
    case PairSetId::Weekdays: return "weekdays";
    case PairSetId::Weekends: return "weekends";
    case PairSetId::WeekdayDaytime: return "weekday_daytime";
    case PairSetId::WeekdayEvening: return "weekday_evening";
    case PairSetId::WeekdayNight: return "weekday_night";
    case PairSetId::WeekendDaytime: return "weekend_daytime";
    case PairSetId::WeekendEvening: return "weekend_evening";
    case PairSetId::WeekendNight: return "weekend_night";
  }
  return "?";
}

namespace {

std::vector<CivilDay> canonical(std::span<const CivilDay> days) {
  std::vector<CivilDay> v(days.begin(), days.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<DayPair> all_pairs(const std::vector<CivilDay>& days) {
  std::vector<DayPair> out;
  if (days.size() >= 2) out.reserve(days.size() * (days.size() - 1) / 2);
  for (std::size_t i = 0; i < days.size(); ++i)
    for (std::size_t j = i + 1; j < days.size(); ++j) out.push_back({days[i], days[j]});
  return out;
}

}  // namespace

std::array<PairSet, 9> pair_sets(std::span<const CivilDay> days, const TemporalConfig& cfg) {
  const auto all = canonical(days);
  std::vector<CivilDay> weekdays, weekends;
  for (auto d : all) (day_class(d) == DayClass::Weekday ? weekdays : weekends).push_back(d);

  const auto all_p = all_pairs(all);
  const auto wd_p = all_pairs(weekdays);
  const auto we_p = all_pairs(weekends);
  const auto day = segment_hours(DaySegment::Daytime, cfg);
  const auto eve = segment_hours(DaySegment::Evening, cfg);
  const auto night = segment_hours(DaySegment::Night, cfg);

  return {PairSet{kWholeDay, all_p}, PairSet{kWholeDay, wd_p}, PairSet{kWholeDay, we_p},
          PairSet{day, wd_p},        PairSet{eve, wd_p},       PairSet{night, wd_p},
          PairSet{day, we_p},        PairSet{eve, we_p},       PairSet{night, we_p}};
}

const PairSet& get(const std::array<PairSet, 9>& sets, PairSetId id) noexcept {
  return sets[static_cast<std::size_t>(id)];
}

PairSet segment_pair_set(std::span<const CivilDay> days, DaySegment segment,
                         const TemporalConfig& cfg) {
  return PairSet{segment_hours(segment, cfg), all_pairs(canonical(days))};
}

std::vector<CivilDay> days_in_span(DaySpan span) {
  std::vector<CivilDay> out;
  for (auto d = span.first.index; d <= span.last.index; ++d) out.push_back(CivilDay{d});
  return out;
}

}  // namespace actitrait
