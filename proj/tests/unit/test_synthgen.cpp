#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "actitrait/error.hpp"
#include "actitrait/features.hpp"
#include "actitrait/synthgen.hpp"
#include "support.hpp"

using namespace actitrait;
using namespace test_support;

TEST_CASE("generator config validation") {
  CHECK_NOTHROW(light_config(4, 7, 1, 0.8).validate());
  CHECK_THROWS_AS(light_config(3, 7, 1, 0.8).validate(), ValidationError);
  CHECK_THROWS_AS(light_config(4, 6, 1, 0.8).validate(), ValidationError);
  CHECK_THROWS_AS(light_config(4, 7, 1, 1.5).validate(), ValidationError);
  auto cfg = light_config(4, 7, 1, 0.8);
  cfg.start_epoch += 5;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = light_config(4, 7, 1, 0.8);
  cfg.burst_period_seconds = 7;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = light_config(4, 7, 1, 0.8);
  cfg.female_fraction = 1.2;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = light_config(4, 7, 1, 0.8);
  cfg.effects[0].sign = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("family names") {
  for (auto f : {FeatureFamily::ContactEntropy, FeatureFamily::WeekdayEveningRI, FeatureFamily::EveningIntensity,
                 FeatureFamily::NightRI, FeatureFamily::CallVolume}) {
    CHECK(parse_family(family_name(f)) == f);
    const auto probe = family_probe_feature(f);
    bool found = false;
    for (const auto& c : feature_catalog()) found |= c.name == probe;
    CHECK(found);
    CHECK(is_physical(f) == (probe.rfind("accel.", 0) == 0));
  }
  CHECK_FALSE(parse_family("nope").has_value());
  CHECK(standard_effects(0.5).size() == 5);
  CHECK(synthetic_id(0) == "p0001");
}

TEST_CASE("a participant depends only on seed and index") {
  auto small = light_config(4, 7, 99, 0.8);
  auto large = light_config(20, 7, 99, 0.8);
  const auto a = generate_participant(small, 2);
  const auto b = generate_participant(large, 2);
  CHECK(a.participant.id == b.participant.id);
  CHECK(a.participant.big5.get(Trait::Openness) == b.participant.big5.get(Trait::Openness));
  CHECK(a.accel == b.accel);
  CHECK(a.comm == b.comm);
  const auto other = generate_participant(light_config(4, 7, 100, 0.8), 2);
  CHECK_FALSE(other.accel == a.accel);
}

TEST_CASE("generated streams satisfy the input invariants") {
  const auto cfg = light_config(6, 7, 5, 0.8);
  for (std::size_t i = 0; i < cfg.n_participants; ++i) {
    const auto p = generate_participant(cfg, i);
    for (auto t : kAllTraits) {
      const double v = p.participant.big5.get(t);
      CHECK(v >= 1.0);
      CHECK(v <= 5.0);
    }
    CHECK(std::is_sorted(p.accel.begin(), p.accel.end()));
    CHECK(std::is_sorted(p.comm.begin(), p.comm.end()));
    const std::int64_t end = cfg.start_epoch + static_cast<std::int64_t>(cfg.n_days) * 86400;
    for (const auto& s : p.accel) {
      CHECK(s.t.epoch_seconds >= cfg.start_epoch);
      CHECK(s.t.epoch_seconds < end);
    }
    for (const auto& e : p.comm) {
      CHECK_NOTHROW(validate_event(e));
      CHECK(e.t.epoch_seconds >= cfg.start_epoch);
      CHECK(e.t.epoch_seconds < end);
    }
    CHECK_FALSE(p.accel.empty());
    CHECK_FALSE(p.comm.empty());
  }
  const auto c = generate(cfg, 3);
  CHECK(c.size() == 6);
  REQUIRE(c.collection_span().has_value());
  CHECK(c.collection_span()->first.index == cfg.start_epoch / 86400);
}

TEST_CASE("trait means follow the configured moments") {
  auto cfg = light_config(300, 7, 17, 0.8);
  cfg.burst_period_seconds = 3600;
  double sum[2][5] = {}, count[2] = {};
  for (std::size_t i = 0; i < cfg.n_participants; ++i) {
    const auto p = generate_participant(cfg, i).participant;
    const int g = p.gender == Gender::Female ? 0 : 1;
    count[g] += 1;
    for (std::size_t t = 0; t < 5; ++t) sum[g][t] += p.big5.get(kAllTraits[t]);
  }
  for (int g = 0; g < 2; ++g) {
    REQUIRE(count[g] >= 100);
    for (std::size_t t = 0; t < 5; ++t) CHECK(std::fabs(sum[g][t] / count[g] - cfg.moments[g][t].mean) < 0.3);
  }
}

TEST_CASE("written cohort loads back identically") {
  const auto dir = std::filesystem::temp_directory_path() / "actitrait_synth_roundtrip";
  std::filesystem::remove_all(dir);
  const auto cfg = light_config(5, 7, 23, 0.8);
  const auto w = write_synthetic_cohort(cfg, dir, 2);
  const auto loaded = load_cohort(w.roster, w.accel, w.comm);
  const auto direct = generate(cfg);
  REQUIRE(loaded.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(loaded.participants()[i].id == direct.participants()[i].id);
    CHECK(loaded.participants()[i].gender == direct.participants()[i].gender);
    for (auto t : kAllTraits)
      CHECK(loaded.participants()[i].big5.get(t) == direct.participants()[i].big5.get(t));
    CHECK(loaded.accel(i) == direct.accel(i));
    CHECK(loaded.comm(i) == direct.comm(i));
  }
  std::ifstream in(w.manifest);
  const auto m = nlohmann::json::parse(in);
  CHECK(m.at("seed") == 23);
  CHECK(m.at("n_participants") == 5);
  CHECK(manifest_json(cfg) == manifest_json(cfg));
  std::filesystem::remove_all(dir);
}

TEST_CASE("per-participant features equal the cohort matrix") {
  const auto cfg = light_config(5, 7, 27, 0.8);
  const auto cohort = generate(cfg);
  const auto matrix = build_feature_matrix(cohort, cohort_profiles(cohort));
  const auto days = feature_days(cohort.collection_span(), {});
  for (std::size_t i = 0; i < cfg.n_participants; ++i) {
    const auto p = generate_participant(cfg, i);
    const auto profile = intensity_profile(p.participant.id, p.accel);
    const auto row = participant_features(p.accel, p.comm, profile, days);
    REQUIRE(row.size() == matrix.cols());
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double m = matrix.raw(i, c);
      CHECK((std::isnan(row[c]) ? std::isnan(m) : row[c] == m));
    }
  }
}
