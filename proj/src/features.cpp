#include "actitrait/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "actitrait/csv.hpp"
#include "actitrait/error.hpp"
#include "actitrait/parallel.hpp"
#include "actitrait/simd/kernels.hpp"

namespace actitrait {
namespace {

constexpr double kNaN = HourlySeries::kAbsent;

double or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

struct CommSource {
  FeatureSource source;
  std::string_view key;
  std::string_view label;
};

constexpr CommSource kCommSources[] = {
    {FeatureSource::Call, "call", "calls"},
    {FeatureSource::Message, "message", "messages"},
    {FeatureSource::CallAndMessage, "cm", "calls & messages"},
};

constexpr DaySegment kSegments[] = {DaySegment::Daytime, DaySegment::Evening, DaySegment::Night};

struct DayScope {
  std::string_view key;
  std::string_view label;
  std::optional<DayClass> only;
};

constexpr DayScope kScopes[] = {
    {"all_days", "all days", std::nullopt},
    {"weekdays", "weekdays", DayClass::Weekday},
    {"weekends", "weekends", DayClass::Weekend},
};

std::string cat(std::initializer_list<std::string_view> parts) {
  std::string s;
  for (auto p : parts) s += p;
  return s;
}

std::vector<FeatureId> make_catalog() {
  std::vector<FeatureId> out;
  auto add = [&](std::string name, FeatureCategory c, FeatureSource s, LogPolicy lp,
                 std::string label) {
    out.push_back(FeatureId{std::move(name), c, s, lp, std::move(label)});
  };
  using C = FeatureCategory;
  using L = LogPolicy;

  for (const auto& src : kCommSources) {
    const std::string k(src.key);
    const std::string l(src.label);
    add(k + ".sd_daily_interactions", C::Dispersion, src.source, L::Log1p,
        "STD of daily number of " + l);
    add(k + ".entropy_total_all_days", C::Diversity, src.source, L::PassThrough,
        "Entropy of contacts of " + l);
    add(k + ".entropy_total_weekdays", C::Diversity, src.source, L::PassThrough,
        "Entropy of contacts of " + l + " on weekdays");
    add(k + ".entropy_sent_all_days", C::Diversity, src.source, L::PassThrough,
        "Entropy of contacts of sent " + l);
    add(k + ".entropy_sent_weekdays", C::Diversity, src.source, L::PassThrough,
        "Entropy of contacts of sent " + l + " on weekdays");
    add(k + ".ri_interactions_all_days", C::Regularity, src.source, L::PassThrough,
        "RI of number of " + l);
    for (auto seg : kSegments)
      add(cat({k, ".ri_var_interactions_", segment_name(seg)}), C::Regularity, src.source,
          L::Log1p, cat({"Variance of RI of number of ", l, " on ", segment_name(seg)}));
    add(k + ".count_all_days", C::Basic, src.source, L::Log1p, "Total number of " + l);
    add(k + ".count_weekdays", C::Basic, src.source, L::Log1p,
        "Total number of " + l + " on weekdays");
    add(k + ".inter_event_mean", C::Basic, src.source, L::Log1p, "Average inter-event time of " + l);
    add(k + ".inter_event_sd", C::Basic, src.source, L::Log1p, "STD of inter-event time of " + l);
    add(k + ".contacts_to_interactions", C::Basic, src.source, L::Log1p,
        "Contacts to interactions ratio of " + l);
    add(k + ".percent_initiated", C::Basic, src.source, L::Log1p, "Percent of initiated " + l);
    if (src.source != FeatureSource::CallAndMessage) {
      add(k + ".response_rate", C::Basic, src.source, L::Log1p, "Response rate of " + l);
      add(k + ".response_latency", C::Basic, src.source, L::Log1p, "Response latency of " + l);
    }
    if (src.source == FeatureSource::Call)
      add(k + ".percent_night", C::Basic, src.source, L::Log1p, "Percent of calls during the night");
  }

  const auto A = FeatureSource::Accel;
  for (const auto& sc : kScopes)
    for (auto seg : kSegments) {
      add(cat({"accel.intensity_sd_", sc.key, "_", segment_name(seg)}), C::Dispersion, A, L::Log1p,
          cat({"STD of physical activity intensity on ", sc.label, " ", segment_name(seg)}));
      add(cat({"accel.intensity_mean_", sc.key, "_", segment_name(seg)}), C::Basic, A, L::Log1p,
          cat({"Average physical activity intensity on ", sc.label, " ", segment_name(seg)}));
    }
  add("accel.magnitude_sd_all_days", C::Dispersion, A, L::Log1p,
      "STD of physical activity magnitude");
  for (auto id : kAllPairSets) {
    std::string label(pair_set_name(id));
    std::replace(label.begin(), label.end(), '_', ' ');
    add(cat({"accel.ri_", pair_set_name(id)}), C::Regularity, A, L::PassThrough,
        "RI of physical activity intensity on " + label);
  }
  for (auto seg : kSegments)
    add(cat({"accel.ri_var_", segment_name(seg)}), C::Regularity, A, L::Log1p,
        cat({"Variance of RI of physical activity intensity on ", segment_name(seg)}));

  std::sort(out.begin(), out.end(),
            [](const FeatureId& a, const FeatureId& b) { return a.name < b.name; });
  return out;
}

std::vector<CommEvent> filter(std::span<const CommEvent> events, std::optional<Channel> channel) {
  std::vector<CommEvent> out;
  for (const auto& e : events)
    if (!channel || e.channel == *channel) out.push_back(e);
  return out;
}

bool is_solicitation(Direction d) { return d == Direction::Incoming || d == Direction::Missed; }

}  // namespace

std::string_view category_name(FeatureCategory c) noexcept {
  switch (c) {
    case FeatureCategory::Dispersion: return "dispersion";
    case FeatureCategory::Diversity: return "diversity";
    case FeatureCategory::Regularity: return "regularity";
    case FeatureCategory::Basic: return "basic";
  }
  return "?";
}

std::string_view source_name(FeatureSource s) noexcept {
  switch (s) {
    case FeatureSource::Call: return "call";
    case FeatureSource::Message: return "message";
    case FeatureSource::CallAndMessage: return "c&m";
    case FeatureSource::Accel: return "accelerometer";
  }
  return "?";
}

std::string_view feature_set_name(FeatureSet s) noexcept {
  return s == FeatureSet::PhoneOnly ? "phone_only" : "phone_plus_physical";
}

std::optional<FeatureSet> parse_feature_set(std::string_view s) {
  const auto l = csv::to_lower(s);
  if (l == "phone_only" || l == "phoneonly" || l == "baseline") return FeatureSet::PhoneOnly;
  if (l == "phone_plus_physical" || l == "phoneplusphysical" || l == "proposed")
    return FeatureSet::PhonePlusPhysical;
  return std::nullopt;
}

const std::vector<FeatureId>& feature_catalog() {
  static const std::vector<FeatureId> catalog = make_catalog();
  return catalog;
}

// ---- FeatureMatrix ------------------------------------------------------

FeatureMatrix::FeatureMatrix(std::vector<FeatureId> columns, std::vector<std::string> row_ids)
    : columns_(std::move(columns)), row_ids_(std::move(row_ids)),
      cells_(columns_.size() * row_ids_.size(), kNaN) {
  for (std::size_t i = 1; i < columns_.size(); ++i)
    if (!(columns_[i - 1].name < columns_[i].name))
      throw PreconditionError("feature columns must be unique and sorted by name");
}

std::optional<double> FeatureMatrix::at(std::size_t r, std::size_t c) const noexcept {
  const double v = raw(r, c);
  if (std::isnan(v)) return std::nullopt;
  return v;
}

void FeatureMatrix::set(std::size_t r, std::size_t c, std::optional<double> v) noexcept {
  cells_[r * cols() + c] = v ? *v : kNaN;
}

std::optional<std::size_t> FeatureMatrix::column_index(std::string_view name) const {
  const auto it = std::lower_bound(columns_.begin(), columns_.end(), name,
                                   [](const FeatureId& f, std::string_view n) { return f.name < n; });
  if (it == columns_.end() || it->name != name) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

std::optional<std::size_t> FeatureMatrix::row_index(std::string_view id) const {
  for (std::size_t i = 0; i < row_ids_.size(); ++i)
    if (row_ids_[i] == id) return i;
  return std::nullopt;
}

FeatureMatrix FeatureMatrix::project(FeatureSet set) const {
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < cols(); ++c)
    if (set == FeatureSet::PhonePlusPhysical || columns_[c].source != FeatureSource::Accel)
      keep.push_back(c);
  std::vector<FeatureId> cols_out;
  for (auto c : keep) cols_out.push_back(columns_[c]);
  FeatureMatrix out(std::move(cols_out), row_ids_);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t k = 0; k < keep.size(); ++k) out.cells_[r * keep.size() + k] = raw(r, keep[k]);
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows_in) const {
  std::vector<std::string> ids;
  for (auto r : rows_in) ids.push_back(row_ids_.at(r));
  FeatureMatrix out(columns_, std::move(ids));
  for (std::size_t k = 0; k < rows_in.size(); ++k)
    std::copy_n(cells_.begin() + static_cast<std::ptrdiff_t>(rows_in[k] * cols()), cols(),
                out.cells_.begin() + static_cast<std::ptrdiff_t>(k * cols()));
  return out;
}

std::string FeatureMatrix::to_csv() const {
  std::ostringstream os;
  os << "participant_id";
  for (const auto& c : columns_) os << ',' << c.name;
  os << '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    os << row_ids_[r];
    for (std::size_t c = 0; c < cols(); ++c) os << ',' << csv::format_optional(at(r, c));
    os << '\n';
  }
  return os.str();
}

std::string FeatureMatrix::to_json() const {
  nlohmann::ordered_json j;
  auto cols_j = nlohmann::ordered_json::array();
  for (const auto& c : columns_)
    cols_j.push_back({{"name", c.name},
                      {"category", category_name(c.category)},
                      {"source", source_name(c.source)},
                      {"log_transform", c.log_policy == LogPolicy::Log1p},
                      {"label", c.label}});
  j["columns"] = std::move(cols_j);
  auto rows_j = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < rows(); ++r) {
    auto vals = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < cols(); ++c) {
      if (const auto v = at(r, c)) vals.push_back(*v);
      else vals.push_back(nullptr);
    }
    rows_j.push_back({{"id", row_ids_[r]}, {"values", std::move(vals)}});
  }
  j["rows"] = std::move(rows_j);
  return j.dump(1) + "\n";
}

FeatureMatrix FeatureMatrix::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<FeatureId> cols;
  for (const auto& c : j.at("columns")) {
    const auto name = c.at("name").get<std::string>();
    const auto& catalog = feature_catalog();
    const auto it = std::find_if(catalog.begin(), catalog.end(),
                                 [&](const FeatureId& f) { return f.name == name; });
    if (it == catalog.end()) throw ValidationError("unknown feature column '" + name + "'");
    cols.push_back(*it);
  }
  std::vector<std::string> ids;
  for (const auto& r : j.at("rows")) ids.push_back(r.at("id").get<std::string>());
  FeatureMatrix m(std::move(cols), std::move(ids));
  std::size_t r = 0;
  for (const auto& row : j.at("rows")) {
    const auto& vals = row.at("values");
    if (vals.size() != m.cols()) throw ValidationError("feature row width mismatch");
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!vals[c].is_null()) m.set(r, c, vals[c].get<double>());
    ++r;
  }
  return m;
}

bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.columns_ != b.columns_ || a.row_ids_ != b.row_ids_) return false;
  for (std::size_t i = 0; i < a.cells_.size(); ++i) {
    const double x = a.cells_[i], y = b.cells_[i];
    if (std::isnan(x) != std::isnan(y)) return false;
    if (!std::isnan(x) && x != y) return false;
  }
  return true;
}

// ---- metrics ------------------------------------------------------------

std::optional<double> population_variance(std::span<const double> values) {
  if (values.size() < 2) return std::nullopt;
  const double n = static_cast<double>(values.size());
  const double mean = simd::sum(values) / n;
  return simd::sum_sq_dev(values, mean) / n;
}

std::optional<double> dispersion_sd(std::span<const double> values) {
  const auto var = population_variance(values);
  if (!var) return std::nullopt;
  return std::sqrt(*var);
}

std::optional<double> shannon_entropy(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return std::nullopt;
  const double t = static_cast<double>(total);
  double s = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double f = static_cast<double>(c) / t;
    s -= f * std::log(f);
  }
  return std::max(0.0, s);
}

std::vector<std::uint64_t> contact_counts(std::span<const CommEvent> events) {
  std::map<std::string_view, std::uint64_t> m;
  for (const auto& e : events) ++m[e.contact];
  std::vector<std::uint64_t> out;
  out.reserve(m.size());
  for (const auto& [k, v] : m) out.push_back(v);
  return out;
}

std::optional<double> regularity_index_pair(const HourlySeries::Slots& day_i,
                                            const HourlySeries::Slots& day_j, HourRange hours) {
  const auto b = static_cast<std::size_t>(hours.begin);
  const auto n = static_cast<std::size_t>(hours.size());
  const auto r = simd::masked_dot({day_i.data() + b, n}, {day_j.data() + b, n});
  if (r.count == 0) return std::nullopt;
  return r.sum / static_cast<double>(r.count);
}

std::vector<double> pairwise_ri(const HourlySeries& rescaled, const PairSet& set) {
  std::vector<double> out;
  for (const auto& p : set.pairs) {
    const auto* a = rescaled.find(p.first);
    const auto* b = rescaled.find(p.second);
    if (!a || !b) continue;
    if (const auto ri = regularity_index_pair(*a, *b, set.hours)) out.push_back(*ri);
  }
  return out;
}

std::optional<double> average_ri(const HourlySeries& rescaled, const PairSet& set) {
  const auto ris = pairwise_ri(rescaled, set);
  if (ris.empty()) return std::nullopt;
  return simd::sum(ris) / static_cast<double>(ris.size());
}

std::optional<double> variance_ri(const HourlySeries& rescaled, const PairSet& set) {
  return population_variance(pairwise_ri(rescaled, set));
}

SegmentTriple variance_ri_by_segment(const HourlySeries& rescaled, std::span<const CivilDay> days,
                                     const TemporalConfig& cfg) {
  return {variance_ri(rescaled, segment_pair_set(days, DaySegment::Daytime, cfg)),
          variance_ri(rescaled, segment_pair_set(days, DaySegment::Evening, cfg)),
          variance_ri(rescaled, segment_pair_set(days, DaySegment::Night, cfg))};
}

InterEventStats inter_event_stats(std::span<const CommEvent> events) {
  InterEventStats out;
  if (events.size() < 2) return out;
  std::vector<double> gaps;
  gaps.reserve(events.size() - 1);
  for (std::size_t i = 1; i < events.size(); ++i)
    gaps.push_back(static_cast<double>(events[i].t.epoch_seconds - events[i - 1].t.epoch_seconds));
  out.mean_gap_seconds = simd::sum(gaps) / static_cast<double>(gaps.size());
  out.sd_gap_seconds = dispersion_sd(gaps);
  return out;
}

ResponseMetrics response_metrics(std::span<const CommEvent> events, std::int64_t window_seconds) {
  std::size_t solicitations = 0, responded = 0;
  double latency_sum = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (!is_solicitation(e.direction)) continue;
    ++solicitations;
    // Events sharing e's timestamp may sort before it.
    std::size_t j = i;
    while (j > 0 && events[j - 1].t == e.t) --j;
    for (; j < events.size(); ++j) {
      const auto& o = events[j];
      if (o.t.epoch_seconds - e.t.epoch_seconds > window_seconds) break;
      if (j == i || o.direction != Direction::Outgoing || o.contact != e.contact) continue;
      ++responded;
      latency_sum += static_cast<double>(o.t.epoch_seconds - e.t.epoch_seconds);
      break;
    }
  }
  ResponseMetrics out;
  if (solicitations > 0)
    out.response_rate = static_cast<double>(responded) / static_cast<double>(solicitations);
  if (responded > 0) out.mean_latency_seconds = latency_sum / static_cast<double>(responded);
  return out;
}

RatioFeatures ratio_features(std::span<const CommEvent> events, const TemporalConfig& cfg) {
  RatioFeatures out;
  if (events.empty()) return out;
  std::size_t night = 0, initiated = 0;
  std::set<std::string_view> contacts;
  for (const auto& e : events) {
    if (day_segment(e.t, cfg) == DaySegment::Night) ++night;
    if (e.direction == Direction::Outgoing) ++initiated;
    contacts.insert(e.contact);
  }
  const double n = static_cast<double>(events.size());
  out.percent_night = static_cast<double>(night) / n;
  out.percent_initiated = static_cast<double>(initiated) / n;
  out.contacts_to_interactions = static_cast<double>(contacts.size()) / n;
  return out;
}

std::vector<double> daily_counts(std::span<const CommEvent> events, std::span<const CivilDay> days,
                                 const TemporalConfig& cfg) {
  std::vector<double> out(days.size(), 0.0);
  for (const auto& e : events) {
    const auto d = attach(e.t, cfg).day;
    const auto it = std::lower_bound(days.begin(), days.end(), d);
    if (it != days.end() && *it == d) out[static_cast<std::size_t>(it - days.begin())] += 1.0;
  }
  return out;
}

HourlySeries hourly_counts(std::span<const CommEvent> events, std::span<const CivilDay> days,
                           const TemporalConfig& cfg) {
  HourlySeries s;
  for (auto d : days) s.day(d).fill(0.0);
  for (const auto& e : events) {
    const auto dh = attach(e.t, cfg);
    if (auto* slots = s.find(dh.day))
      (*slots)[static_cast<std::size_t>(dh.hour)] += 1.0;
  }
  return s;
}

// ---- assembly -----------------------------------------------------------

std::vector<CivilDay> feature_days(const std::optional<DaySpan>& span, const TemporalConfig& cfg) {
  if (!span) return {};
  DaySpan s = *span;
  if (cfg.night_attachment == NightAttachment::PreviousEvening) --s.first.index;
  return days_in_span(s);
}

namespace {

using Values = std::unordered_map<std::string, double>;

void comm_features(Values& v, std::string_view key, std::span<const CommEvent> events,
                   std::span<const CivilDay> days, bool with_response, bool with_night,
                   const FeatureConfig& cfg) {
  const std::string k(key);
  const auto& tc = cfg.temporal;
  auto put = [&](std::string_view suffix, std::optional<double> x) {
    v[cat({k, ".", suffix})] = or_nan(x);
  };

  const auto daily = daily_counts(events, days, tc);
  put("sd_daily_interactions", dispersion_sd(daily));

  std::vector<CommEvent> weekday, sent, sent_weekday;
  for (const auto& e : events) {
    const bool wd = day_class(attach(e.t, tc).day) == DayClass::Weekday;
    const bool out = e.direction == Direction::Outgoing;
    if (wd) weekday.push_back(e);
    if (out) sent.push_back(e);
    if (wd && out) sent_weekday.push_back(e);
  }
  put("entropy_total_all_days", shannon_entropy(contact_counts(events)));
  put("entropy_total_weekdays", shannon_entropy(contact_counts(weekday)));
  put("entropy_sent_all_days", shannon_entropy(contact_counts(sent)));
  put("entropy_sent_weekdays", shannon_entropy(contact_counts(sent_weekday)));

  if (!days.empty()) {
    const auto rescaled = rescale_unit(hourly_counts(events, days, tc));
    const auto sets = pair_sets(days, tc);
    put("ri_interactions_all_days", average_ri(rescaled, get(sets, PairSetId::AllDays)));
    const auto var = variance_ri_by_segment(rescaled, days, tc);
    put("ri_var_interactions_daytime", var.daytime);
    put("ri_var_interactions_evening", var.evening);
    put("ri_var_interactions_night", var.night);
  } else {
    for (auto s : {"ri_interactions_all_days", "ri_var_interactions_daytime",
                   "ri_var_interactions_evening", "ri_var_interactions_night"})
      put(s, std::nullopt);
  }

  put("count_all_days", static_cast<double>(events.size()));
  put("count_weekdays", static_cast<double>(weekday.size()));
  const auto iet = inter_event_stats(events);
  put("inter_event_mean", iet.mean_gap_seconds);
  put("inter_event_sd", iet.sd_gap_seconds);
  const auto ratios = ratio_features(events, tc);
  put("contacts_to_interactions", ratios.contacts_to_interactions);
  put("percent_initiated", ratios.percent_initiated);
  if (with_night) put("percent_night", ratios.percent_night);
  if (with_response) {
    const auto resp = response_metrics(events, cfg.response_window_seconds);
    put("response_rate", resp.response_rate);
    put("response_latency", resp.mean_latency_seconds);
  }
}

void accel_features(Values& v, std::span<const AccelSample> accel,
                    const HourlyIntensityProfile& profile, std::span<const CivilDay> days,
                    const FeatureConfig& cfg) {
  const auto& tc = cfg.temporal;
  for (const auto& sc : kScopes)
    for (auto seg : kSegments) {
      const auto hours = segment_hours(seg, tc);
      std::vector<double> values;
      for (const auto& [d, slots] : profile.mad.days()) {
        if (sc.only && day_class(d) != *sc.only) continue;
        for (int h = hours.begin; h < hours.end; ++h) {
          const double x = slots[static_cast<std::size_t>(h)];
          if (HourlySeries::present(x)) values.push_back(x);
        }
      }
      const std::string tail = cat({sc.key, "_", segment_name(seg)});
      v["accel.intensity_sd_" + tail] = or_nan(dispersion_sd(values));
      v["accel.intensity_mean_" + tail] =
          values.empty() ? kNaN : simd::sum(values) / static_cast<double>(values.size());
    }

  {
    const std::size_t n = accel.size();
    std::vector<double> xs(n), ys(n), zs(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = accel[i].x;
      ys[i] = accel[i].y;
      zs[i] = accel[i].z;
    }
    simd::resultants(xs, ys, zs, r);
    v["accel.magnitude_sd_all_days"] = or_nan(dispersion_sd(r));
  }

  if (profile.mad.present_count() > 0 && !days.empty()) {
    const auto rescaled = rescale_unit(profile.mad);
    const auto sets = pair_sets(days, tc);
    for (auto id : kAllPairSets)
      v[cat({"accel.ri_", pair_set_name(id)})] = or_nan(average_ri(rescaled, get(sets, id)));
    const auto var = variance_ri_by_segment(rescaled, days, tc);
    v["accel.ri_var_daytime"] = or_nan(var.daytime);
    v["accel.ri_var_evening"] = or_nan(var.evening);
    v["accel.ri_var_night"] = or_nan(var.night);
  }
}

}  // namespace

std::vector<double> participant_features(std::span<const AccelSample> accel,
                                         std::span<const CommEvent> comm,
                                         const HourlyIntensityProfile& profile,
                                         std::span<const CivilDay> days,
                                         const FeatureConfig& cfg) {
  Values v;
  if (!comm.empty()) {
    const auto calls = filter(comm, Channel::Call);
    const auto messages = filter(comm, Channel::Message);
    comm_features(v, "call", calls, days, true, true, cfg);
    comm_features(v, "message", messages, days, true, false, cfg);
    comm_features(v, "cm", comm, days, false, false, cfg);
  }
  if (!accel.empty()) accel_features(v, accel, profile, days, cfg);

  const auto& catalog = feature_catalog();
  std::vector<double> out(catalog.size(), kNaN);
  for (std::size_t c = 0; c < catalog.size(); ++c)
    if (const auto it = v.find(catalog[c].name); it != v.end()) out[c] = it->second;
  return out;
}

std::vector<HourlyIntensityProfile> cohort_profiles(const Cohort& cohort, const FeatureConfig& cfg,
                                                    unsigned threads) {
  std::vector<HourlyIntensityProfile> out(cohort.size());
  parallel_for(cohort.size(), threads, [&](std::size_t i) {
    out[i] = intensity_profile(cohort.participants()[i].id, cohort.accel(i), cfg.intensity,
                               cfg.temporal);
  });
  return out;
}

FeatureMatrix build_feature_matrix(const Cohort& cohort,
                                   std::span<const HourlyIntensityProfile> profiles,
                                   const FeatureConfig& cfg, unsigned threads) {
  if (profiles.size() != cohort.size())
    throw PreconditionError("one intensity profile per participant required");
  cfg.temporal.validate();
  std::vector<std::string> ids;
  for (const auto& p : cohort.participants()) ids.push_back(p.id);
  FeatureMatrix m(feature_catalog(), std::move(ids));
  const auto days = feature_days(cohort.collection_span(), cfg.temporal);
  parallel_for(cohort.size(), threads, [&](std::size_t i) {
    const auto values = participant_features(cohort.accel(i), cohort.comm(i), profiles[i], days, cfg);
    std::copy(values.begin(), values.end(), m.row(i).begin());
  });
  return m;
}

}  // namespace actitrait
