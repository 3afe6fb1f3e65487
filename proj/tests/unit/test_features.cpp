#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "actitrait/error.hpp"
#include "actitrait/features.hpp"
#include "actitrait/synthgen.hpp"
#include "support.hpp"

using namespace actitrait;
using namespace test_support;

TEST_CASE("catalog shape") {
  const auto& cat = feature_catalog();
  CHECK(cat.size() == 81);
  std::set<std::string> names;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(names.insert(cat[i].name).second);
    if (i) CHECK(cat[i - 1].name < cat[i].name);
    CHECK_FALSE(cat[i].label.empty());
    const bool accel = cat[i].name.rfind("accel.", 0) == 0;
    CHECK(accel == (cat[i].source == FeatureSource::Accel));
    const bool entropy = cat[i].name.find("entropy") != std::string::npos;
    const bool avg_ri = cat[i].name.find(".ri_") != std::string::npos &&
                        cat[i].name.find("ri_var") == std::string::npos;
    CHECK((cat[i].log_policy == LogPolicy::PassThrough) == (entropy || avg_ri));
  }
}

TEST_CASE("dispersion and variance") {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(*dispersion_sd(v) == doctest::Approx(2.0));
  CHECK(*population_variance(v) == doctest::Approx(4.0));
  CHECK_FALSE(dispersion_sd(std::span(v).first(1)).has_value());
  CHECK_FALSE(population_variance(std::span<const double>{}).has_value());
}

TEST_CASE("entropy bounds") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(0, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint64_t> c(1 + trial % 9);
    for (auto& x : c) x = u(rng);
    c[0] += 1;
    const double h = *shannon_entropy(c);
    const auto nz = std::count_if(c.begin(), c.end(), [](auto x) { return x > 0; });
    CHECK(h >= 0.0);
    CHECK(h <= std::log(static_cast<double>(nz)) + 1e-12);
    auto scaled = c;
    for (auto& x : scaled) x *= 7;
    CHECK(close(h, *shannon_entropy(scaled), 1e-12));
    std::shuffle(c.begin(), c.end(), rng);
    CHECK(close(h, *shannon_entropy(c), 1e-12));
  }
  const std::vector<std::uint64_t> uniform(6, 3);
  CHECK(*shannon_entropy(uniform) == doctest::Approx(std::log(6.0)));
  CHECK(*shannon_entropy(std::vector<std::uint64_t>{9}) == 0.0);
  CHECK_FALSE(shannon_entropy(std::vector<std::uint64_t>{0, 0}).has_value());
}

TEST_CASE("contact counts") {
  const std::vector<CommEvent> ev{event(1, Direction::Incoming, "a"), event(2, Direction::Outgoing, "b"),
                                  event(3, Direction::Missed, "a")};
  auto c = contact_counts(ev);
  std::sort(c.begin(), c.end());
  CHECK(c == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("regularity index is symmetric and bounded") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 30; ++trial) {
    HourlySeries::Slots a, b;
    for (int h = 0; h < 24; ++h) {
      a[h] = (h + trial) % 5 ? u(rng) : HourlySeries::kAbsent;
      b[h] = (h * 3 + trial) % 7 ? u(rng) : HourlySeries::kAbsent;
    }
    const auto ab = regularity_index_pair(a, b, kWholeDay);
    const auto ba = regularity_index_pair(b, a, kWholeDay);
    REQUIRE(ab.has_value());
    CHECK(*ab == *ba);
    CHECK(std::fabs(*ab) <= 1.0);
    CHECK(*regularity_index_pair(a, a, kWholeDay) >= 0.0);
  }
  HourlySeries::Slots a, b;
  a.fill(HourlySeries::kAbsent);
  b.fill(0.5);
  CHECK_FALSE(regularity_index_pair(a, b, kWholeDay).has_value());
  a[20] = 1.0;
  CHECK_FALSE(regularity_index_pair(a, b, HourRange{0, 9}).has_value());
  CHECK(*regularity_index_pair(a, b, HourRange{18, 24}) == 0.5);
}

TEST_CASE("average and variance of regularity") {
  HourlySeries s;
  for (int d = 0; d < 4; ++d)
    for (int h = 0; h < 24; ++h) s.set(CivilDay{d}, h, h < 12 ? 1.0 : -1.0);
  const std::vector<CivilDay> days{CivilDay{0}, CivilDay{1}, CivilDay{2}, CivilDay{3}};
  const auto sets = pair_sets(days);
  CHECK(*average_ri(s, sets[0]) == 1.0);
  CHECK(*variance_ri(s, sets[0]) == 0.0);
  CHECK(pairwise_ri(s, sets[0]).size() == 6);
  const auto triple = variance_ri_by_segment(s, days);
  CHECK(*triple.daytime == 0.0);
  CHECK(*triple.evening == 0.0);
  CHECK(*triple.night == 0.0);
  PairSet one{kWholeDay, {DayPair{CivilDay{0}, CivilDay{1}}}};
  CHECK(average_ri(s, one).has_value());
  CHECK_FALSE(variance_ri(s, one).has_value());
}

TEST_CASE("inter-event gaps") {
  const std::vector<CommEvent> ev{event(10, Direction::Incoming, "a"), event(20, Direction::Outgoing, "b"),
                                  event(50, Direction::Missed, "a")};
  const auto g = inter_event_stats(ev);
  CHECK(*g.mean_gap_seconds == 20.0);
  CHECK(*g.sd_gap_seconds == 10.0);
  CHECK_FALSE(inter_event_stats(std::span(ev).first(1)).mean_gap_seconds.has_value());
}

TEST_CASE("response window edges") {
  const std::int64_t t = kMonday;
  std::vector<CommEvent> ev{event(t, Direction::Incoming, "a"), event(t + 3600, Direction::Outgoing, "a"),
                            event(t + 100, Direction::Missed, "b"), event(t + 3701, Direction::Outgoing, "b"),
                            event(t + 200, Direction::Incoming, "c", Channel::Message),
                            event(t + 200, Direction::Outgoing, "c", Channel::Message)};
  std::sort(ev.begin(), ev.end());
  const auto r = response_metrics(ev);
  CHECK(*r.response_rate == doctest::Approx(2.0 / 3.0));
  CHECK(*r.mean_latency_seconds == doctest::Approx(1800.0));
  const auto wide = response_metrics(ev, 3601);
  CHECK(*wide.response_rate == 1.0);
  const std::vector<CommEvent> none{event(t, Direction::Outgoing, "a")};
  CHECK_FALSE(response_metrics(none).response_rate.has_value());
}

TEST_CASE("ratio features stay in range") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> tt(0, 7 * 86400);
  std::uniform_int_distribution<int> dir(0, 2), who(0, 6);
  std::vector<CommEvent> ev;
  for (int i = 0; i < 300; ++i)
    ev.push_back(event(kMonday + tt(rng), static_cast<Direction>(dir(rng)), "c" + std::to_string(who(rng))));
  std::sort(ev.begin(), ev.end());
  const auto r = ratio_features(ev);
  for (auto v : {r.percent_night, r.percent_initiated, r.contacts_to_interactions}) {
    REQUIRE(v.has_value());
    CHECK(*v >= 0.0);
    CHECK(*v <= 1.0);
  }
  CHECK(*r.contacts_to_interactions == doctest::Approx(7.0 / 300.0));
}

TEST_CASE("daily and hourly counts") {
  const CivilDay mon{kMonday / 86400};
  const std::vector<CivilDay> days{mon, CivilDay{mon.index + 1}};
  const std::vector<CommEvent> ev{event(kMonday + 3600, Direction::Incoming, "a"),
                                  event(kMonday + 3700, Direction::Incoming, "a"),
                                  event(kMonday + 86400 + 30, Direction::Outgoing, "a"),
                                  event(kMonday + 5 * 86400, Direction::Outgoing, "a")};
  CHECK(daily_counts(ev, days) == std::vector<double>{2.0, 1.0});
  const auto h = hourly_counts(ev, days);
  CHECK(h.present_count() == 48);
  CHECK(*h.at(mon, 1) == 2.0);
  CHECK(*h.at(days[1], 0) == 1.0);
  CHECK(*h.at(mon, 0) == 0.0);
  TemporalConfig prev;
  prev.night_attachment = NightAttachment::PreviousEvening;
  CHECK(daily_counts(ev, days, prev) == std::vector<double>{1.0, 0.0});
}

TEST_CASE("feature days") {
  const DaySpan span{CivilDay{10}, CivilDay{12}};
  CHECK(feature_days(span, {}).size() == 3);
  TemporalConfig prev;
  prev.night_attachment = NightAttachment::PreviousEvening;
  const auto d = feature_days(span, prev);
  REQUIRE(d.size() == 4);
  CHECK(d.front().index == 9);
  CHECK(feature_days(std::nullopt, {}).empty());
}

TEST_CASE("feature matrix layout and json round trip") {
  const auto cohort = generate(light_config(6, 7, 31, 0.8));
  const auto profiles = cohort_profiles(cohort);
  const auto m = build_feature_matrix(cohort, profiles);
  CHECK(m.rows() == 6);
  CHECK(m.cols() == 81);
  CHECK(m.row_ids()[0] == cohort.participants()[0].id);
  CHECK(FeatureMatrix::from_json(m.to_json()) == m);
  const auto phone = m.project(FeatureSet::PhoneOnly);
  CHECK(phone.rows() == 6);
  for (const auto& c : phone.columns()) CHECK(c.source != FeatureSource::Accel);
  CHECK(phone.cols() + 0 < m.cols());
  CHECK(m.project(FeatureSet::PhonePlusPhysical) == m);
  const std::vector<std::size_t> pick{4, 1};
  const auto sub = m.select_rows(pick);
  CHECK(sub.row_ids() == std::vector<std::string>{m.row_ids()[4], m.row_ids()[1]});
  const auto csv = m.to_csv();
  CHECK(csv.rfind("participant_id,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(m.column_index("call.count_all_days").has_value());
  CHECK_FALSE(m.column_index("nonsense").has_value());
  CHECK(*m.row_index(m.row_ids()[3]) == 3);
}

TEST_CASE("feature values respect their ranges") {
  const auto cohort = generate(light_config(8, 14, 32, 0.8));
  const auto m = build_feature_matrix(cohort, cohort_profiles(cohort));
  const auto& cols = m.columns();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto v = m.at(r, c);
      if (!v) continue;
      CHECK(std::isfinite(*v));
      const auto& n = cols[c].name;
      const bool is_avg_ri = n.find(".ri_") != std::string::npos && n.find("ri_var") == std::string::npos;
      if (is_avg_ri) {
        CHECK(std::fabs(*v) <= 1.0);
      } else {
        CHECK(*v >= 0.0);
      }
      if (n.find("percent") != std::string::npos || n.find("response_rate") != std::string::npos ||
          n.find("contacts_to") != std::string::npos)
        CHECK(*v <= 1.0);
      if (n.find("ri_var") != std::string::npos) CHECK(*v <= 1.0);
    }
}

TEST_CASE("feature matrix is independent of thread count") {
  const auto cohort = generate(light_config(7, 7, 33, 0.8));
  const auto p1 = cohort_profiles(cohort, {}, 1);
  const auto p4 = cohort_profiles(cohort, {}, 4);
  const auto a = build_feature_matrix(cohort, p1, {}, 1);
  const auto b = build_feature_matrix(cohort, p4, {}, 4);
  CHECK(a.to_csv() == b.to_csv());
}

TEST_CASE("empty streams give absent cells") {
  std::vector<Participant> ps{person("a", Gender::Female), person("b", Gender::Male)};
  CommStreams comm;
  comm["a"] = {event(kMonday, Direction::Incoming, "x")};
  Cohort c(ps, {}, comm);
  const auto m = build_feature_matrix(c, cohort_profiles(c));
  for (std::size_t j = 0; j < m.cols(); ++j) {
    CHECK_FALSE(m.at(1, j).has_value());
    if (m.columns()[j].source == FeatureSource::Accel) CHECK_FALSE(m.at(0, j).has_value());
  }
  CHECK(*m.at(0, *m.column_index("call.count_all_days")) == 1.0);
}
